#pragma once

// 8-bit grayscale raster and the border / ROI / RONI partition used by the
// watermarking pipelines.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "roimark/error.hpp"

namespace roimark {

inline constexpr int kBorderWidth = 3;
inline constexpr int kRoiBlockSide = 4;
inline constexpr int kRoniBlockSide = 3;
inline constexpr int kMinCarrierSide = 16;

struct Point {
  int x = 0;
  int y = 0;
  friend bool operator==(const Point&, const Point&) = default;
};

/// Axis-aligned rectangle; also used for the ROI, which carries extra
/// placement rules checked by segment().
struct Rect {
  int x = 0;
  int y = 0;
  int w = 0;
  int h = 0;

  friend bool operator==(const Rect&, const Rect&) = default;

  long area() const noexcept { return static_cast<long>(w) * h; }
  bool contains(Point p) const noexcept {
    return p.x >= x && p.x < x + w && p.y >= y && p.y < y + h;
  }
  bool intersects(const Rect& o) const noexcept {
    return x < o.x + o.w && o.x < x + w && y < o.y + o.h && o.y < y + h;
  }
};

using RoiRect = Rect;

class GrayImage {
 public:
  GrayImage() = default;

  GrayImage(int width, int height, std::uint8_t fill = 0)
      : width_(width), height_(height) {
    if (width <= 0 || height <= 0) {
      throw Error(ErrorCode::TooSmall, "image dimensions must be positive");
    }
    pixels_.assign(static_cast<std::size_t>(width) * height, fill);
  }

  GrayImage(int width, int height, std::vector<std::uint8_t> pixels)
      : width_(width), height_(height), pixels_(std::move(pixels)) {
    if (width <= 0 || height <= 0) {
      throw Error(ErrorCode::TooSmall, "image dimensions must be positive");
    }
    if (pixels_.size() != static_cast<std::size_t>(width) * height) {
      throw Error(ErrorCode::DimensionMismatch,
                  "pixel buffer holds " + std::to_string(pixels_.size()) + " values, expected " +
                      std::to_string(static_cast<std::size_t>(width) * height));
    }
  }

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t size() const noexcept { return pixels_.size(); }

  std::uint8_t at(int x, int y) const { return pixels_[index(x, y)]; }
  std::uint8_t& at(int x, int y) { return pixels_[index(x, y)]; }
  std::uint8_t at(Point p) const { return at(p.x, p.y); }
  std::uint8_t& at(Point p) { return at(p.x, p.y); }

  bool in_bounds(Point p) const noexcept {
    return p.x >= 0 && p.y >= 0 && p.x < width_ && p.y < height_;
  }

  std::span<const std::uint8_t> pixels() const noexcept { return pixels_; }
  std::span<std::uint8_t> pixels() noexcept { return pixels_; }

  friend bool operator==(const GrayImage&, const GrayImage&) = default;

 private:
  std::size_t index(int x, int y) const noexcept {
    return static_cast<std::size_t>(y) * width_ + x;
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> pixels_;
};

inline std::uint8_t lsb(std::uint8_t v) noexcept { return v & 1u; }
inline std::uint8_t with_lsb(std::uint8_t v, bool bit) noexcept {
  return static_cast<std::uint8_t>((v & 0xFEu) | (bit ? 1u : 0u));
}

enum class Label : std::uint8_t { Border, Roi, Roni };
enum class BlockKind { Roi, Roni };

/// Per-pixel labels plus the deterministic block tilings. Blocks are stored
/// by their top-left anchor; block_pixels() expands them.
struct RegionMap {
  int width = 0;
  int height = 0;
  RoiRect roi;
  std::vector<Label> labels;
  std::vector<Point> roi_blocks;
  std::vector<Point> roni_blocks;
  std::vector<Point> border_pixels;

  Label label(Point p) const { return labels[static_cast<std::size_t>(p.y) * width + p.x]; }
  std::size_t roi_block_count() const noexcept { return roi_blocks.size(); }
  std::size_t roni_block_count() const noexcept { return roni_blocks.size(); }

  friend bool operator==(const RegionMap&, const RegionMap&) = default;
};

inline bool is_border(int width, int height, Point p) noexcept {
  return std::min({p.x, p.y, width - 1 - p.x, height - 1 - p.y}) < kBorderWidth;
}

inline void validate_carrier(int width, int height) {
  if (width < kMinCarrierSide || height < kMinCarrierSide) {
    throw Error(ErrorCode::ImageTooSmall,
                "carrier must be at least " + std::to_string(kMinCarrierSide) + "x" +
                    std::to_string(kMinCarrierSide) + ", got " + std::to_string(width) + "x" +
                    std::to_string(height));
  }
}

inline void validate_roi(int width, int height, const RoiRect& roi) {
  validate_carrier(width, height);
  if (roi.w <= 0 || roi.h <= 0 || roi.x < kBorderWidth || roi.y < kBorderWidth ||
      roi.x + roi.w > width - kBorderWidth || roi.y + roi.h > height - kBorderWidth) {
    throw Error(ErrorCode::RoiOutOfBounds,
                "roi (" + std::to_string(roi.x) + "," + std::to_string(roi.y) + "," +
                    std::to_string(roi.w) + "," + std::to_string(roi.h) +
                    ") must lie inside the non-border interior of a " + std::to_string(width) +
                    "x" + std::to_string(height) + " image");
  }
  if (roi.w % kRoiBlockSide != 0 || roi.h % kRoiBlockSide != 0) {
    throw Error(ErrorCode::RoiNotTileable, "roi width and height must be multiples of 4, got " +
                                               std::to_string(roi.w) + "x" +
                                               std::to_string(roi.h));
  }
}

/// Splits the image plane into border, ROI and RONI. Border pixels are listed
/// row-major; ROI blocks row-major within the ROI; RONI blocks are the 3x3
/// tiles of the interior grid anchored at (3,3) whose nine pixels are all RONI.
inline RegionMap segment(int width, int height, const RoiRect& roi) {
  validate_roi(width, height, roi);

  RegionMap map;
  map.width = width;
  map.height = height;
  map.roi = roi;
  map.labels.resize(static_cast<std::size_t>(width) * height);

  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const Point p{x, y};
      Label l = Label::Roni;
      if (is_border(width, height, p)) {
        l = Label::Border;
        map.border_pixels.push_back(p);
      } else if (roi.contains(p)) {
        l = Label::Roi;
      }
      map.labels[static_cast<std::size_t>(y) * width + x] = l;
    }
  }

  for (int by = roi.y; by < roi.y + roi.h; by += kRoiBlockSide) {
    for (int bx = roi.x; bx < roi.x + roi.w; bx += kRoiBlockSide) {
      map.roi_blocks.push_back({bx, by});
    }
  }

  const Rect interior{kBorderWidth, kBorderWidth, width - 2 * kBorderWidth,
                      height - 2 * kBorderWidth};
  for (int ty = interior.y; ty + kRoniBlockSide <= interior.y + interior.h;
       ty += kRoniBlockSide) {
    for (int tx = interior.x; tx + kRoniBlockSide <= interior.x + interior.w;
         tx += kRoniBlockSide) {
      // Every tile pixel is interior, so it is RONI iff the tile misses the ROI.
      if (!roi.intersects({tx, ty, kRoniBlockSide, kRoniBlockSide})) {
        map.roni_blocks.push_back({tx, ty});
      }
    }
  }
  return map;
}

inline RegionMap segment(const GrayImage& image, const RoiRect& roi) {
  return segment(image.width(), image.height(), roi);
}

/// Pixel coordinates of a block, row-major. `block_index` is 0-based.
inline std::vector<Point> block_pixels(const RegionMap& map, std::size_t block_index,
                                       BlockKind kind) {
  const auto& anchors = kind == BlockKind::Roi ? map.roi_blocks : map.roni_blocks;
  const int side = kind == BlockKind::Roi ? kRoiBlockSide : kRoniBlockSide;
  if (block_index >= anchors.size()) {
    throw Error(ErrorCode::IndexOutOfRange,
                std::string(kind == BlockKind::Roi ? "ROI" : "RONI") + " block " +
                    std::to_string(block_index) + " of " + std::to_string(anchors.size()));
  }
  const Point a = anchors[block_index];
  std::vector<Point> out;
  out.reserve(static_cast<std::size_t>(side) * side);
  for (int dy = 0; dy < side; ++dy) {
    for (int dx = 0; dx < side; ++dx) out.push_back({a.x + dx, a.y + dy});
  }
  return out;
}

/// Floor of the mean of the LSB-cleared pixels; blind to the LSB plane.
inline std::uint8_t block_average(const GrayImage& image, std::span<const Point> block) {
  if (block.empty()) throw Error(ErrorCode::IndexOutOfRange, "empty block");
  unsigned sum = 0;
  for (const Point p : block) {
    if (!image.in_bounds(p)) throw Error(ErrorCode::OutOfBounds, "block pixel outside image");
    sum += image.at(p) & 0xFEu;
  }
  return static_cast<std::uint8_t>(sum / block.size());
}

/// ROI pixels row-major, one byte each.
inline std::vector<std::uint8_t> roi_bytes(const GrayImage& image, const RoiRect& roi) {
  std::vector<std::uint8_t> out;
  out.reserve(static_cast<std::size_t>(roi.area()));
  for (int y = roi.y; y < roi.y + roi.h; ++y) {
    for (int x = roi.x; x < roi.x + roi.w; ++x) out.push_back(image.at(x, y));
  }
  return out;
}

}  // namespace roimark
