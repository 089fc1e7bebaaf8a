#pragma once

// Bit-level codec: 3+1 bit run-length tokens, the MD5 counter keystream and
// the fixed 120-bit border header.

#include <cstdint>
#include <string>
#include <string_view>

#include "roimark/bits.hpp"
#include "roimark/error.hpp"
#include "roimark/md5.hpp"

namespace roimark {

inline constexpr int kRunBits = 3;
inline constexpr std::size_t kMaxRun = (1u << kRunBits) - 1;
inline constexpr std::size_t kTokenBits = kRunBits + 1;

/// Each maximal run is split greedily into runs of at most 7 and emitted as
/// (3-bit length, symbol bit).
inline BitString rle_compress(const BitString& data) {
  BitString out;
  std::size_t i = 0;
  while (i < data.size()) {
    const bool symbol = data[i];
    std::size_t run = 1;
    while (i + run < data.size() && data[i + run] == symbol && run < kMaxRun) ++run;
    out.append_uint(run, kRunBits);
    out.push_back(symbol);
    i += run;
  }
  return out;
}

/// Length-delimited expansion: consumes tokens until exactly `expected_len`
/// bits are produced. Trailing tokens past that point are ignored.
inline BitString rle_decompress(const BitString& data, std::size_t expected_len) {
  BitString out;
  out.reserve(expected_len);
  std::size_t pos = 0;
  while (out.size() < expected_len) {
    if (pos + kTokenBits > data.size()) {
      throw Error(ErrorCode::CorruptStream, "token stream exhausted after " +
                                                std::to_string(out.size()) + " of " +
                                                std::to_string(expected_len) + " bits");
    }
    const auto run = static_cast<std::size_t>(data.read_uint(pos, kRunBits));
    const bool symbol = data[pos + kRunBits];
    pos += kTokenBits;
    if (run == 0) {
      throw Error(ErrorCode::CorruptStream, "zero run length at bit " + std::to_string(pos - 4));
    }
    if (out.size() + run > expected_len) {
      throw Error(ErrorCode::CorruptStream, "run overshoots expected length " +
                                                std::to_string(expected_len));
    }
    for (std::size_t r = 0; r < run; ++r) out.push_back(symbol);
  }
  return out;
}

/// n bits of MD5(key || be32(counter)) blocks, counter = 0, 1, 2, ...
inline BitString keystream(std::string_view key, std::size_t n) {
  if (key.empty()) throw Error(ErrorCode::EmptyKey, "keystream key must be nonempty");
  BitString out;
  out.reserve(n);
  for (std::uint32_t counter = 0; out.size() < n; ++counter) {
    const std::uint8_t be[4] = {static_cast<std::uint8_t>(counter >> 24),
                                static_cast<std::uint8_t>(counter >> 16),
                                static_cast<std::uint8_t>(counter >> 8),
                                static_cast<std::uint8_t>(counter)};
    const Digest128 block = Md5().update(key).update(be).finish();
    for (std::uint8_t byte : block) {
      for (int b = 7; b >= 0 && out.size() < n; --b) out.push_back(((byte >> b) & 1u) != 0);
    }
  }
  return out;
}

/// XOR with keystream(key, |data|); its own inverse.
inline BitString xor_crypt(const BitString& data, std::string_view key) {
  const BitString ks = keystream(key, data.size());
  BitString out(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) out.set(i, data[i] != ks[i]);
  return out;
}

inline constexpr std::uint8_t kHeaderVersion = 0x01;
inline constexpr std::size_t kHeaderBits = 120;

/// Border header. Serialized big-endian in declaration order.
struct HeaderPayload {
  std::uint32_t version = kHeaderVersion;  // 8 bits
  std::uint32_t roi_x = 0;                 // 16 bits
  std::uint32_t roi_y = 0;                 // 16 bits
  std::uint32_t roi_w = 0;                 // 16 bits
  std::uint32_t roi_h = 0;                 // 16 bits
  std::uint64_t payload_len_bits = 0;      // 32 bits
  std::uint32_t epr_len_bytes = 0;         // 16 bits

  friend bool operator==(const HeaderPayload&, const HeaderPayload&) = default;
};

namespace detail {
inline void append_field(BitString& out, std::uint64_t value, int width, const char* name) {
  if (value >> width != 0) {
    throw Error(ErrorCode::FieldOverflow, std::string(name) + " = " + std::to_string(value) +
                                              " does not fit in " + std::to_string(width) +
                                              " bits");
  }
  out.append_uint(value, width);
}
}  // namespace detail

inline BitString pack_header(const HeaderPayload& h) {
  BitString out;
  out.reserve(kHeaderBits);
  detail::append_field(out, h.version, 8, "version");
  detail::append_field(out, h.roi_x, 16, "roi_x");
  detail::append_field(out, h.roi_y, 16, "roi_y");
  detail::append_field(out, h.roi_w, 16, "roi_w");
  detail::append_field(out, h.roi_h, 16, "roi_h");
  detail::append_field(out, h.payload_len_bits, 32, "payload_len_bits");
  detail::append_field(out, h.epr_len_bytes, 16, "epr_len_bytes");
  return out;
}

inline HeaderPayload unpack_header(const BitString& bits) {
  if (bits.size() != kHeaderBits) {
    throw Error(ErrorCode::HeaderInvalid,
                "header must be 120 bits, got " + std::to_string(bits.size()));
  }
  HeaderPayload h;
  std::size_t pos = 0;
  auto take = [&](int width) {
    const auto v = bits.read_uint(pos, width);
    pos += static_cast<std::size_t>(width);
    return v;
  };
  h.version = static_cast<std::uint32_t>(take(8));
  if (h.version != kHeaderVersion) {
    throw Error(ErrorCode::BadVersion, "header version " + std::to_string(h.version) +
                                           " (wrong key or tampered border)");
  }
  h.roi_x = static_cast<std::uint32_t>(take(16));
  h.roi_y = static_cast<std::uint32_t>(take(16));
  h.roi_w = static_cast<std::uint32_t>(take(16));
  h.roi_h = static_cast<std::uint32_t>(take(16));
  h.payload_len_bits = take(32);
  h.epr_len_bytes = static_cast<std::uint32_t>(take(16));
  return h;
}

}  // namespace roimark
