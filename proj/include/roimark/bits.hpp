#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace roimark {

/// Ordered bit sequence. Bytes enter and leave most-significant bit first.
class BitString {
 public:
  BitString() = default;
  explicit BitString(std::size_t n, bool value = false) : bits_(n, value) {}
  BitString(std::initializer_list<bool> bits) : bits_(bits) {}

  /// Parses a string of '0'/'1' characters; any other character is skipped,
  /// so "101 0" and "1010" are the same.
  static BitString from_text(std::string_view text) {
    BitString out;
    for (char c : text) {
      if (c == '0' || c == '1') out.push_back(c == '1');
    }
    return out;
  }

  static BitString from_bytes(std::span<const std::uint8_t> bytes) {
    BitString out;
    out.append_bytes(bytes);
    return out;
  }

  std::size_t size() const noexcept { return bits_.size(); }
  bool empty() const noexcept { return bits_.empty(); }
  bool operator[](std::size_t i) const { return bits_[i]; }
  void set(std::size_t i, bool v) { bits_[i] = v; }
  void reserve(std::size_t n) { bits_.reserve(n); }
  void push_back(bool b) { bits_.push_back(b); }

  void append(const BitString& other) {
    bits_.insert(bits_.end(), other.bits_.begin(), other.bits_.end());
  }

  /// Appends the low `width` bits of `value`, most significant first.
  void append_uint(std::uint64_t value, int width) {
    for (int i = width - 1; i >= 0; --i) push_back(((value >> i) & 1u) != 0);
  }

  void append_bytes(std::span<const std::uint8_t> bytes) {
    reserve(size() + bytes.size() * 8);
    for (std::uint8_t b : bytes) append_uint(b, 8);
  }

  std::uint64_t read_uint(std::size_t pos, int width) const {
    std::uint64_t v = 0;
    for (int i = 0; i < width; ++i) v = (v << 1) | (bits_[pos + i] ? 1u : 0u);
    return v;
  }

  BitString slice(std::size_t pos, std::size_t len) const {
    BitString out;
    out.bits_.assign(bits_.begin() + static_cast<std::ptrdiff_t>(pos),
                     bits_.begin() + static_cast<std::ptrdiff_t>(pos + len));
    return out;
  }

  /// Packs into bytes; a trailing partial byte is zero-padded on the right.
  std::vector<std::uint8_t> to_bytes() const {
    std::vector<std::uint8_t> out((size() + 7) / 8, 0);
    for (std::size_t i = 0; i < size(); ++i) {
      if (bits_[i]) out[i / 8] |= static_cast<std::uint8_t>(0x80u >> (i % 8));
    }
    return out;
  }

  std::string to_text() const {
    std::string s;
    s.reserve(size());
    for (bool b : bits_) s.push_back(b ? '1' : '0');
    return s;
  }

  friend bool operator==(const BitString&, const BitString&) = default;

 private:
  std::vector<bool> bits_;
};

inline BitString operator+(BitString a, const BitString& b) {
  a.append(b);
  return a;
}

}  // namespace roimark
