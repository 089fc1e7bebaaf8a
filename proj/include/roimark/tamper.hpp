#pragma once

// Attack injection with ground truth at the level the scheme can detect:
// a ROI block counts as tampered iff its LSB-masked average changed.

#include <cstdint>
#include <random>
#include <string>
#include <variant>
#include <vector>

#include "roimark/error.hpp"
#include "roimark/image.hpp"

namespace roimark {

struct ConstantFill {
  std::uint8_t value = 0;
};
struct RandomFill {
  std::uint64_t seed = 0;
};
struct LsbFlip {};

using TamperMode = std::variant<ConstantFill, RandomFill, LsbFlip>;

struct TamperSpec {
  std::vector<Rect> regions;
  TamperMode mode = ConstantFill{};
};

struct TamperResult {
  GrayImage image;
  std::vector<std::size_t> changed_blocks;  // masked average differs
  std::vector<std::size_t> touched_blocks;  // any pixel differs
};

/// Applies the attack and derives ground truth by comparing block averages
/// before and after. RandomFill draws one engine output per pixel in region
/// order, so results are reproducible across platforms.
inline TamperResult apply_tamper(const GrayImage& image, const TamperSpec& spec,
                                 const RoiRect& roi) {
  for (const Rect& r : spec.regions) {
    if (r.w <= 0 || r.h <= 0 || r.x < 0 || r.y < 0 || r.x + r.w > image.width() ||
        r.y + r.h > image.height()) {
      throw Error(ErrorCode::OutOfBounds, "tamper region (" + std::to_string(r.x) + "," +
                                              std::to_string(r.y) + "," + std::to_string(r.w) +
                                              "," + std::to_string(r.h) + ") outside image");
    }
  }
  const RegionMap map = segment(image, roi);

  TamperResult out{image, {}, {}};
  std::mt19937_64 rng(std::holds_alternative<RandomFill>(spec.mode)
                          ? std::get<RandomFill>(spec.mode).seed
                          : 0);
  for (const Rect& r : spec.regions) {
    for (int y = r.y; y < r.y + r.h; ++y) {
      for (int x = r.x; x < r.x + r.w; ++x) {
        std::uint8_t& px = out.image.at(x, y);
        if (const auto* c = std::get_if<ConstantFill>(&spec.mode)) {
          px = c->value;
        } else if (std::holds_alternative<RandomFill>(spec.mode)) {
          px = static_cast<std::uint8_t>(rng() & 0xFF);
        } else {
          px ^= 1u;
        }
      }
    }
  }

  for (std::size_t i = 0; i < map.roi_block_count(); ++i) {
    const auto px = block_pixels(map, i, BlockKind::Roi);
    bool touched = false;
    for (const Point p : px) touched = touched || image.at(p) != out.image.at(p);
    if (touched) out.touched_blocks.push_back(i);
    if (block_average(image, px) != block_average(out.image, px)) out.changed_blocks.push_back(i);
  }
  return out;
}

}  // namespace roimark
