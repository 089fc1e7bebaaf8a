#pragma once

// Authentication data: ROI digest, the (h1, B, E) watermark, and the keyed
// ROI-block to RONI-block permutation.

#include <cstddef>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "roimark/bits.hpp"
#include "roimark/error.hpp"
#include "roimark/image.hpp"
#include "roimark/md5.hpp"

namespace roimark {

/// MD5 over the ROI pixels, row-major, full 8 bits each.
inline Digest128 roi_hash(const GrayImage& image, const RoiRect& roi) {
  validate_roi(image.width(), image.height(), roi);
  return md5(roi_bytes(image, roi));
}

/// LSBs of the ROI pixels, row-major.
inline BitString roi_lsbs(const GrayImage& image, const RoiRect& roi) {
  BitString out;
  out.reserve(static_cast<std::size_t>(roi.area()));
  for (int y = roi.y; y < roi.y + roi.h; ++y) {
    for (int x = roi.x; x < roi.x + roi.w; ++x) out.push_back(lsb(image.at(x, y)) != 0);
  }
  return out;
}

inline bool is_ascii(std::span<const std::uint8_t> text) {
  for (std::uint8_t c : text) {
    if (c > 0x7F) return false;
  }
  return true;
}

struct Watermark {
  Digest128 h1{};
  BitString roi_lsbs;
  std::vector<std::uint8_t> epr;

  static constexpr std::size_t kDigestBits = 128;

  static std::size_t bit_length(std::size_t roi_pixels, std::size_t epr_bytes) {
    return kDigestBits + roi_pixels + 8 * epr_bytes;
  }

  /// h1 || B || E, bytes MSB first.
  BitString assemble() const {
    BitString w;
    w.reserve(bit_length(roi_lsbs.size(), epr.size()));
    w.append_bytes(h1);
    w.append(roi_lsbs);
    w.append_bytes(epr);
    return w;
  }

  static Watermark split(const BitString& w, std::size_t roi_pixels, std::size_t epr_bytes) {
    if (w.size() != bit_length(roi_pixels, epr_bytes)) {
      throw Error(ErrorCode::CorruptStream, "watermark length " + std::to_string(w.size()) +
                                                " does not match expected " +
                                                std::to_string(bit_length(roi_pixels, epr_bytes)));
    }
    Watermark out;
    for (std::size_t i = 0; i < out.h1.size(); ++i) {
      out.h1[i] = static_cast<std::uint8_t>(w.read_uint(8 * i, 8));
    }
    out.roi_lsbs = w.slice(kDigestBits, roi_pixels);
    out.epr.resize(epr_bytes);
    for (std::size_t i = 0; i < epr_bytes; ++i) {
      out.epr[i] = static_cast<std::uint8_t>(w.read_uint(kDigestBits + roi_pixels + 8 * i, 8));
    }
    return out;
  }
};

inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  for (std::uint64_t d = 3; d * d <= n; d += 2) {
    if (n % d == 0) return false;
  }
  return true;
}

/// Valid iff 1 < k < N_b, k prime, gcd(k, N_b) = 1 and the RONI tiling has
/// at least N_b blocks to carry the averages.
inline void validate_key(std::uint64_t k, std::uint64_t n_blocks, std::uint64_t roni_blocks) {
  if (!(k > 1 && k < n_blocks)) {
    throw Error(ErrorCode::KeyInvalid, "k = " + std::to_string(k) + " must satisfy 1 < k < N_b = " +
                                           std::to_string(n_blocks));
  }
  if (!is_prime(k)) throw Error(ErrorCode::KeyInvalid, "k = " + std::to_string(k) + " is not prime");
  if (std::gcd(k, n_blocks) != 1) {
    throw Error(ErrorCode::KeyInvalid, "k = " + std::to_string(k) + " divides N_b = " +
                                           std::to_string(n_blocks) +
                                           "; the block mapping would not be a permutation");
  }
  if (roni_blocks < n_blocks) {
    throw Error(ErrorCode::InsufficientRoni, "RONI holds " + std::to_string(roni_blocks) +
                                                 " 3x3 blocks but the ROI needs " +
                                                 std::to_string(n_blocks));
  }
}

/// A validated mapping key. Construction is the only way to get one.
class BlockMapKey {
 public:
  BlockMapKey(std::uint64_t k, std::uint64_t n_blocks, std::uint64_t roni_blocks)
      : k_(k), n_blocks_(n_blocks) {
    validate_key(k, n_blocks, roni_blocks);
  }

  std::uint64_t k() const noexcept { return k_; }
  std::uint64_t n_blocks() const noexcept { return n_blocks_; }

  /// ROI block -> RONI block, both 1-based: (k * b mod N_b) + 1.
  std::uint64_t map(std::uint64_t roi_block) const {
    if (roi_block < 1 || roi_block > n_blocks_) {
      throw Error(ErrorCode::IndexOutOfRange, "ROI block " + std::to_string(roi_block) +
                                                  " outside 1.." + std::to_string(n_blocks_));
    }
    return (k_ * roi_block) % n_blocks_ + 1;
  }

 private:
  std::uint64_t k_;
  std::uint64_t n_blocks_;
};

inline std::uint64_t map_block(std::uint64_t roi_block, const BlockMapKey& key) {
  return key.map(roi_block);
}

}  // namespace roimark
