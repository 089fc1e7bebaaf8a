#pragma once

// Deterministic synthetic test images. Medical scans at 8 bits typically
// carry an almost empty LSB plane; `lsb_noise` controls how far a phantom
// departs from that.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <string_view>

#include "roimark/error.hpp"
#include "roimark/image.hpp"

namespace roimark {

enum class PhantomKind { Gradient, Noise, Shapes, Anatomy };

inline std::string_view to_string(PhantomKind k) {
  switch (k) {
    case PhantomKind::Gradient: return "gradient";
    case PhantomKind::Noise: return "noise";
    case PhantomKind::Shapes: return "shapes";
    case PhantomKind::Anatomy: return "anatomy";
  }
  return "?";
}

struct PhantomOptions {
  PhantomKind kind = PhantomKind::Anatomy;
  int width = 256;
  int height = 256;
  std::uint64_t seed = 1;
  double lsb_noise = 0.0;  // probability that a pixel's LSB is randomized
};

namespace detail {
inline double unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}
}  // namespace detail

inline GrayImage make_phantom(const PhantomOptions& opt) {
  GrayImage img(opt.width, opt.height);
  std::mt19937_64 rng(opt.seed);
  const double w = opt.width;
  const double h = opt.height;

  // 7-bit intensity field; doubled on output so the LSB plane starts at 0.
  auto put = [&](int x, int y, double v) {
    const int q = static_cast<int>(std::clamp(v, 0.0, 127.0));
    img.at(x, y) = static_cast<std::uint8_t>(2 * q);
  };

  switch (opt.kind) {
    case PhantomKind::Gradient: {
      const double angle = detail::unit(rng) * 6.283185307179586;
      const double cx = std::cos(angle), cy = std::sin(angle);
      for (int y = 0; y < opt.height; ++y) {
        for (int x = 0; x < opt.width; ++x) {
          const double t = ((x / w - 0.5) * cx + (y / h - 0.5) * cy) * 0.7071 + 0.5;
          put(x, y, 127.0 * t);
        }
      }
      break;
    }
    case PhantomKind::Noise: {
      const double base = 20.0 + 60.0 * detail::unit(rng);
      const double amp = 10.0 + 30.0 * detail::unit(rng);
      for (int y = 0; y < opt.height; ++y) {
        for (int x = 0; x < opt.width; ++x) {
          put(x, y, base + amp * (detail::unit(rng) - 0.5) * 2.0);
        }
      }
      break;
    }
    case PhantomKind::Shapes: {
      const int count = 6 + static_cast<int>(rng() % 6);
      for (int s = 0; s < count; ++s) {
        const int x0 = static_cast<int>(detail::unit(rng) * w * 0.8);
        const int y0 = static_cast<int>(detail::unit(rng) * h * 0.8);
        const int sw = 10 + static_cast<int>(detail::unit(rng) * w * 0.4);
        const int sh = 10 + static_cast<int>(detail::unit(rng) * h * 0.4);
        const double v = 10.0 + detail::unit(rng) * 117.0;
        const bool disc = (rng() & 1u) != 0;
        for (int y = y0; y < std::min(opt.height, y0 + sh); ++y) {
          for (int x = x0; x < std::min(opt.width, x0 + sw); ++x) {
            const double dx = (x - x0 - sw / 2.0) / (sw / 2.0);
            const double dy = (y - y0 - sh / 2.0) / (sh / 2.0);
            if (!disc || dx * dx + dy * dy <= 1.0) put(x, y, v);
          }
        }
      }
      break;
    }
    case PhantomKind::Anatomy: {
      // Dark background, a body ellipse with soft texture, a few organs.
      const double bx = w * (0.42 + 0.06 * detail::unit(rng));
      const double by = h * (0.40 + 0.06 * detail::unit(rng));
      struct Organ {
        double cx, cy, rx, ry, v;
      };
      Organ organs[4];
      for (auto& o : organs) {
        o = {w * (0.3 + 0.4 * detail::unit(rng)), h * (0.3 + 0.4 * detail::unit(rng)),
             w * (0.05 + 0.1 * detail::unit(rng)), h * (0.05 + 0.1 * detail::unit(rng)),
             40.0 + 80.0 * detail::unit(rng)};
      }
      const double fx = 0.05 + 0.1 * detail::unit(rng);
      const double fy = 0.05 + 0.1 * detail::unit(rng);
      for (int y = 0; y < opt.height; ++y) {
        for (int x = 0; x < opt.width; ++x) {
          const double dx = (x - w / 2) / bx;
          const double dy = (y - h / 2) / by;
          double v = 0.0;
          if (dx * dx + dy * dy <= 1.0) {
            v = 45.0 + 8.0 * std::sin(x * fx) * std::cos(y * fy);
            for (const auto& o : organs) {
              const double ox = (x - o.cx) / o.rx;
              const double oy = (y - o.cy) / o.ry;
              if (ox * ox + oy * oy <= 1.0) v = o.v - 10.0 * (ox * ox + oy * oy);
            }
          }
          put(x, y, v);
        }
      }
      break;
    }
  }

  if (opt.lsb_noise > 0.0) {
    for (auto& px : img.pixels()) {
      if (detail::unit(rng) < opt.lsb_noise) px = with_lsb(px, (rng() & 1u) != 0);
    }
  }
  return img;
}

}  // namespace roimark
