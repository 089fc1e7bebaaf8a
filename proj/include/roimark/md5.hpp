#pragma once

// RFC 1321 MD5.

#include <algorithm>
#include <array>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <cstring>
#include <span>
#include <string>
#include <string_view>

namespace roimark {

using Digest128 = std::array<std::uint8_t, 16>;

inline std::string to_hex(std::span<const std::uint8_t> bytes) {
  static constexpr char kHex[] = "0123456789abcdef";
  std::string s;
  s.reserve(bytes.size() * 2);
  for (std::uint8_t b : bytes) {
    s.push_back(kHex[b >> 4]);
    s.push_back(kHex[b & 0x0F]);
  }
  return s;
}

class Md5 {
 public:
  Md5() { reset(); }

  void reset() {
    state_ = {0x67452301u, 0xefcdab89u, 0x98badcfeu, 0x10325476u};
    length_ = 0;
    buffered_ = 0;
  }

  Md5& update(std::span<const std::uint8_t> data) {
    length_ += data.size();
    std::size_t pos = 0;
    if (buffered_ > 0) {
      const std::size_t take = std::min(data.size(), kBlock - buffered_);
      std::memcpy(buffer_.data() + buffered_, data.data(), take);
      buffered_ += take;
      pos = take;
      if (buffered_ < kBlock) return *this;
      transform(buffer_.data());
      buffered_ = 0;
    }
    for (; pos + kBlock <= data.size(); pos += kBlock) transform(data.data() + pos);
    if (pos < data.size()) {
      buffered_ = data.size() - pos;
      std::memcpy(buffer_.data(), data.data() + pos, buffered_);
    }
    return *this;
  }

  Md5& update(std::string_view s) {
    return update(std::span(reinterpret_cast<const std::uint8_t*>(s.data()), s.size()));
  }

  Digest128 finish() {
    const std::uint64_t bit_length = length_ * 8;
    static constexpr std::uint8_t kPad[kBlock] = {0x80};
    const std::size_t pad = buffered_ < 56 ? 56 - buffered_ : 120 - buffered_;
    update(std::span(kPad, pad));
    std::array<std::uint8_t, 8> len_le{};
    for (int i = 0; i < 8; ++i) len_le[i] = static_cast<std::uint8_t>(bit_length >> (8 * i));
    update(len_le);

    Digest128 out{};
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) out[4 * i + j] = static_cast<std::uint8_t>(state_[i] >> (8 * j));
    }
    reset();
    return out;
  }

 private:
  static constexpr std::size_t kBlock = 64;

  void transform(const std::uint8_t* block) {
    static constexpr std::uint32_t kT[64] = {
        0xd76aa478, 0xe8c7b756, 0x242070db, 0xc1bdceee, 0xf57c0faf, 0x4787c62a, 0xa8304613,
        0xfd469501, 0x698098d8, 0x8b44f7af, 0xffff5bb1, 0x895cd7be, 0x6b901122, 0xfd987193,
        0xa679438e, 0x49b40821, 0xf61e2562, 0xc040b340, 0x265e5a51, 0xe9b6c7aa, 0xd62f105d,
        0x02441453, 0xd8a1e681, 0xe7d3fbc8, 0x21e1cde6, 0xc33707d6, 0xf4d50d87, 0x455a14ed,
        0xa9e3e905, 0xfcefa3f8, 0x676f02d9, 0x8d2a4c8a, 0xfffa3942, 0x8771f681, 0x6d9d6122,
        0xfde5380c, 0xa4beea44, 0x4bdecfa9, 0xf6bb4b60, 0xbebfbc70, 0x289b7ec6, 0xeaa127fa,
        0xd4ef3085, 0x04881d05, 0xd9d4d039, 0xe6db99e5, 0x1fa27cf8, 0xc4ac5665, 0xf4292244,
        0x432aff97, 0xab9423a7, 0xfc93a039, 0x655b59c3, 0x8f0ccc92, 0xffeff47d, 0x85845dd1,
        0x6fa87e4f, 0xfe2ce6e0, 0xa3014314, 0x4e0811a1, 0xf7537e82, 0xbd3af235, 0x2ad7d2bb,
        0xeb86d391};
    static constexpr int kShift[64] = {7,  12, 17, 22, 7,  12, 17, 22, 7,  12, 17, 22, 7,
                                       12, 17, 22, 5,  9,  14, 20, 5,  9,  14, 20, 5,  9,
                                       14, 20, 5,  9,  14, 20, 4,  11, 16, 23, 4,  11, 16,
                                       23, 4,  11, 16, 23, 4,  11, 16, 23, 6,  10, 15, 21,
                                       6,  10, 15, 21, 6,  10, 15, 21, 6,  10, 15, 21};

    std::uint32_t x[16];
    for (int i = 0; i < 16; ++i) {
      x[i] = static_cast<std::uint32_t>(block[4 * i]) |
             (static_cast<std::uint32_t>(block[4 * i + 1]) << 8) |
             (static_cast<std::uint32_t>(block[4 * i + 2]) << 16) |
             (static_cast<std::uint32_t>(block[4 * i + 3]) << 24);
    }

    std::uint32_t a = state_[0], b = state_[1], c = state_[2], d = state_[3];
    for (int i = 0; i < 64; ++i) {
      std::uint32_t f;
      int g;
      if (i < 16) {
        f = (b & c) | (~b & d);
        g = i;
      } else if (i < 32) {
        f = (d & b) | (~d & c);
        g = (5 * i + 1) % 16;
      } else if (i < 48) {
        f = b ^ c ^ d;
        g = (3 * i + 5) % 16;
      } else {
        f = c ^ (b | ~d);
        g = (7 * i) % 16;
      }
      const std::uint32_t next = b + std::rotl(a + f + kT[i] + x[g], kShift[i]);
      a = d;
      d = c;
      c = b;
      b = next;
    }
    state_[0] += a;
    state_[1] += b;
    state_[2] += c;
    state_[3] += d;
  }

  std::array<std::uint32_t, 4> state_{};
  std::array<std::uint8_t, kBlock> buffer_{};
  std::size_t buffered_ = 0;
  std::uint64_t length_ = 0;
};

inline Digest128 md5(std::span<const std::uint8_t> data) { return Md5().update(data).finish(); }
inline Digest128 md5(std::string_view s) { return Md5().update(s).finish(); }

}  // namespace roimark
