#pragma once

// Embedding and extraction pipelines.
//
// Layout of the watermarked image:
//   ROI LSBs    - encrypted RLE(h1 || B || E), row-major prefix; the rest of
//                 the ROI LSBs keep their original values.
//   RONI LSBs   - for ROI block i, its masked average (8 bits, MSB first)
//                 in the first 8 pixels of RONI block map(i).
//   border LSBs - encrypted 120-bit header in the first 120 border pixels.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "roimark/authmark.hpp"
#include "roimark/bits.hpp"
#include "roimark/codec.hpp"
#include "roimark/error.hpp"
#include "roimark/image.hpp"
#include "roimark/metrics.hpp"

namespace roimark {

inline constexpr std::size_t kAverageBits = 8;
inline constexpr std::size_t kMaxEprBytes = 0xFFFF;

struct EmbedStats {
  std::size_t w_bits = 0;
  std::size_t w_comp_bits = 0;
  double compression_ratio = 0.0;  // w_comp_bits / w_bits
  std::size_t n_blocks = 0;
  std::size_t roni_blocks_used = 0;
  std::size_t roni_blocks_available = 0;
  double psnr_vs_original = 0.0;
};

struct EmbedResult {
  GrayImage watermarked;
  HeaderPayload header;
  EmbedStats stats;
};

enum class PayloadState { Ok, Corrupt };

struct VerifyReport {
  bool authentic = false;
  std::optional<std::vector<std::uint8_t>> epr;  // nullopt when the payload did not decode
  std::vector<std::size_t> tampered_blocks;      // 0-based ROI block indices
  HeaderPayload header;
  PayloadState payload_state = PayloadState::Ok;
  std::optional<Digest128> h1;
  Digest128 h2{};
  std::size_t block_comparisons = 0;
  // Recovery data lives in RONI, which the scheme assumes untouched; a
  // corrupt payload means that assumption deserves suspicion.
  bool recovery_caveat = false;
};

struct RecoveredBlock {
  std::size_t index = 0;
  std::uint8_t fill = 0;
  friend bool operator==(const RecoveredBlock&, const RecoveredBlock&) = default;
};

struct RecoveredImage {
  GrayImage image;
  std::vector<RecoveredBlock> recovered_blocks;
};

struct RecoverResult {
  RecoveredImage recovered;
  VerifyReport report;
};

namespace detail {

inline std::vector<Point> header_pixels(int width, int height) {
  validate_carrier(width, height);
  std::vector<Point> out;
  out.reserve(kHeaderBits);
  for (int y = 0; y < height && out.size() < kHeaderBits; ++y) {
    for (int x = 0; x < width && out.size() < kHeaderBits; ++x) {
      if (is_border(width, height, {x, y})) out.push_back({x, y});
    }
  }
  if (out.size() < kHeaderBits) {
    throw Error(ErrorCode::ImageTooSmall, "border cannot hold the 120-bit header");
  }
  return out;
}

/// Pixels of RONI block `roni_index` (0-based) that carry an average.
inline std::vector<Point> average_slot(const RegionMap& map, std::size_t roni_index) {
  auto px = block_pixels(map, roni_index, BlockKind::Roni);
  px.resize(kAverageBits);
  return px;
}

inline std::uint8_t read_average(const GrayImage& image, const RegionMap& map,
                                 std::size_t roni_index) {
  unsigned v = 0;
  for (const Point p : average_slot(map, roni_index)) v = (v << 1) | lsb(image.at(p));
  return static_cast<std::uint8_t>(v);
}

inline void write_average(GrayImage& image, const RegionMap& map, std::size_t roni_index,
                          std::uint8_t value) {
  int bit = static_cast<int>(kAverageBits) - 1;
  for (const Point p : average_slot(map, roni_index)) {
    image.at(p) = with_lsb(image.at(p), ((value >> bit) & 1u) != 0);
    --bit;
  }
}

inline void write_roi_lsbs(GrayImage& image, const RoiRect& roi, const BitString& bits) {
  std::size_t i = 0;
  for (int y = roi.y; y < roi.y + roi.h && i < bits.size(); ++y) {
    for (int x = roi.x; x < roi.x + roi.w && i < bits.size(); ++x, ++i) {
      image.at(x, y) = with_lsb(image.at(x, y), bits[i]);
    }
  }
}

inline BitString read_roi_lsbs(const GrayImage& image, const RoiRect& roi, std::size_t count) {
  BitString out;
  out.reserve(count);
  for (int y = roi.y; y < roi.y + roi.h && out.size() < count; ++y) {
    for (int x = roi.x; x < roi.x + roi.w && out.size() < count; ++x) {
      out.push_back(lsb(image.at(x, y)) != 0);
    }
  }
  return out;
}

inline void clear_non_roi_lsbs(GrayImage& image, const RegionMap& map) {
  for (int y = 0; y < image.height(); ++y) {
    for (int x = 0; x < image.width(); ++x) {
      if (map.label({x, y}) != Label::Roi) image.at(x, y) &= 0xFE;
    }
  }
}

inline RoiRect header_roi(const HeaderPayload& h) {
  return {static_cast<int>(h.roi_x), static_cast<int>(h.roi_y), static_cast<int>(h.roi_w),
          static_cast<int>(h.roi_h)};
}

struct Extraction {
  VerifyReport report;
  RegionMap map;
  GrayImage working;  // ROI LSBs restored from B when the payload decoded
  std::vector<std::uint8_t> stored_averages;
};

}  // namespace detail

inline EmbedResult embed(const GrayImage& image, const RoiRect& roi,
                         std::span<const std::uint8_t> epr, std::string_view k1,
                         std::uint64_t k) {
  const RegionMap map = segment(image, roi);
  const BlockMapKey key(k, map.roi_block_count(), map.roni_block_count());
  if (k1.empty()) throw Error(ErrorCode::EmptyKey, "k1 must be nonempty");
  if (!is_ascii(epr)) throw Error(ErrorCode::NonAsciiEpr, "EPR must be 7-bit ASCII");
  if (epr.size() > kMaxEprBytes) {
    throw Error(ErrorCode::CapacityExceeded,
                "EPR of " + std::to_string(epr.size()) + " bytes exceeds the 16-bit length field");
  }
  const auto header_px = detail::header_pixels(image.width(), image.height());

  Watermark mark;
  mark.h1 = roi_hash(image, roi);
  mark.roi_lsbs = roi_lsbs(image, roi);
  mark.epr.assign(epr.begin(), epr.end());
  const BitString w = mark.assemble();
  const BitString payload = xor_crypt(rle_compress(w), k1);

  const auto roi_pixels = static_cast<std::size_t>(roi.area());
  if (payload.size() > roi_pixels) {
    throw Error(ErrorCode::CapacityExceeded,
                "compressed watermark needs " + std::to_string(payload.size()) +
                    " bits but the ROI holds " + std::to_string(roi_pixels));
  }

  GrayImage out = image;
  detail::write_roi_lsbs(out, roi, payload);

  for (std::size_t i = 0; i < map.roi_block_count(); ++i) {
    const auto px = block_pixels(map, i, BlockKind::Roi);
    const std::uint8_t avg = block_average(image, px);
    detail::write_average(out, map, key.map(i + 1) - 1, avg);
  }

  HeaderPayload header;
  header.roi_x = static_cast<std::uint32_t>(roi.x);
  header.roi_y = static_cast<std::uint32_t>(roi.y);
  header.roi_w = static_cast<std::uint32_t>(roi.w);
  header.roi_h = static_cast<std::uint32_t>(roi.h);
  header.payload_len_bits = payload.size();
  header.epr_len_bytes = static_cast<std::uint32_t>(epr.size());
  const BitString header_bits = xor_crypt(pack_header(header), k1);
  for (std::size_t i = 0; i < kHeaderBits; ++i) {
    out.at(header_px[i]) = with_lsb(out.at(header_px[i]), header_bits[i]);
  }

  EmbedStats stats;
  stats.w_bits = w.size();
  stats.w_comp_bits = payload.size();
  stats.compression_ratio = static_cast<double>(payload.size()) / static_cast<double>(w.size());
  stats.n_blocks = map.roi_block_count();
  stats.roni_blocks_used = map.roi_block_count();
  stats.roni_blocks_available = map.roni_block_count();
  stats.psnr_vs_original = psnr(image, out);
  return {std::move(out), header, stats};
}

inline EmbedResult embed(const GrayImage& image, const RoiRect& roi, std::string_view epr,
                         std::string_view k1, std::uint64_t k) {
  return embed(image, roi,
               std::span(reinterpret_cast<const std::uint8_t*>(epr.data()), epr.size()), k1, k);
}

/// Decrypts and validates the border header.
inline HeaderPayload extract_header(const GrayImage& image, std::string_view k1) {
  const auto px = detail::header_pixels(image.width(), image.height());
  BitString bits;
  bits.reserve(kHeaderBits);
  for (const Point p : px) bits.push_back(lsb(image.at(p)) != 0);
  const HeaderPayload h = unpack_header(xor_crypt(bits, k1));
  validate_roi(image.width(), image.height(), detail::header_roi(h));
  if (h.payload_len_bits > static_cast<std::uint64_t>(h.roi_w) * h.roi_h) {
    throw Error(ErrorCode::HeaderInvalid, "payload length " + std::to_string(h.payload_len_bits) +
                                              " exceeds ROI capacity");
  }
  return h;
}

namespace detail {

inline Extraction extract(const GrayImage& image, std::string_view k1, std::uint64_t k) {
  Extraction ex;
  VerifyReport& r = ex.report;
  r.header = extract_header(image, k1);
  const RoiRect roi = header_roi(r.header);
  ex.map = segment(image, roi);
  const BlockMapKey key(k, ex.map.roi_block_count(), ex.map.roni_block_count());
  ex.working = image;

  const auto roi_pixels = static_cast<std::size_t>(roi.area());
  const BitString payload = read_roi_lsbs(image, roi, r.header.payload_len_bits);
  try {
    const BitString w =
        rle_decompress(xor_crypt(payload, k1), Watermark::bit_length(roi_pixels,
                                                                     r.header.epr_len_bytes));
    Watermark mark = Watermark::split(w, roi_pixels, r.header.epr_len_bytes);
    write_roi_lsbs(ex.working, roi, mark.roi_lsbs);
    r.h1 = mark.h1;
    r.epr = std::move(mark.epr);
    r.payload_state = PayloadState::Ok;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::CorruptStream) throw;
    r.payload_state = PayloadState::Corrupt;
    r.recovery_caveat = true;
  }

  r.h2 = roi_hash(ex.working, roi);
  r.authentic = r.payload_state == PayloadState::Ok && r.h1 == r.h2;
  if (r.authentic) return ex;

  ex.stored_averages.resize(ex.map.roi_block_count());
  for (std::size_t i = 0; i < ex.map.roi_block_count(); ++i) {
    const std::uint8_t stored = read_average(image, ex.map, key.map(i + 1) - 1);
    ex.stored_averages[i] = stored;
    const auto px = block_pixels(ex.map, i, BlockKind::Roi);
    ++r.block_comparisons;
    if (block_average(ex.working, px) != stored) r.tampered_blocks.push_back(i);
  }
  return ex;
}

}  // namespace detail

/// Authenticates the ROI. When the hash matches, no block is examined.
inline VerifyReport verify(const GrayImage& image, std::string_view k1, std::uint64_t k) {
  return detail::extract(image, k1, k).report;
}

/// Verifies, fills every flagged ROI block with its stored average, and
/// clears the RONI and border LSBs.
inline RecoverResult recover(const GrayImage& image, std::string_view k1, std::uint64_t k) {
  detail::Extraction ex = detail::extract(image, k1, k);
  RecoverResult out;
  GrayImage& img = ex.working;
  for (const std::size_t i : ex.report.tampered_blocks) {
    const std::uint8_t fill = ex.stored_averages[i];
    for (const Point p : block_pixels(ex.map, i, BlockKind::Roi)) img.at(p) = fill;
    out.recovered.recovered_blocks.push_back({i, fill});
  }
  detail::clear_non_roi_lsbs(img, ex.map);
  out.recovered.image = std::move(img);
  out.report = std::move(ex.report);
  return out;
}

/// Reverses an authentic watermark: original ROI bits, zero LSBs elsewhere.
inline GrayImage restore(const GrayImage& image, std::string_view k1, std::uint64_t k) {
  detail::Extraction ex = detail::extract(image, k1, k);
  if (!ex.report.authentic) {
    throw Error(ErrorCode::NotAuthentic, "ROI hash mismatch; use recover for tampered images");
  }
  detail::clear_non_roi_lsbs(ex.working, ex.map);
  return std::move(ex.working);
}

}  // namespace roimark
