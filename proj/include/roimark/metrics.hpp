#pragma once

// PSNR and mean SSIM for 8-bit grayscale images.

#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "roimark/error.hpp"
#include "roimark/image.hpp"

namespace roimark {

inline constexpr double kPeak = 255.0;

namespace detail {
inline void require_same_shape(const GrayImage& a, const GrayImage& b) {
  if (a.width() != b.width() || a.height() != b.height()) {
    throw Error(ErrorCode::DimensionMismatch,
                std::to_string(a.width()) + "x" + std::to_string(a.height()) + " vs " +
                    std::to_string(b.width()) + "x" + std::to_string(b.height()));
  }
}

inline double psnr_from_mse(double mse) {
  if (mse == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(kPeak * kPeak / mse);
}
}  // namespace detail

inline double mse(const GrayImage& a, const GrayImage& b, const Rect& region) {
  detail::require_same_shape(a, b);
  if (region.w <= 0 || region.h <= 0 || region.x < 0 || region.y < 0 ||
      region.x + region.w > a.width() || region.y + region.h > a.height()) {
    throw Error(ErrorCode::OutOfBounds, "metric region outside image");
  }
  double sum = 0.0;
  for (int y = region.y; y < region.y + region.h; ++y) {
    for (int x = region.x; x < region.x + region.w; ++x) {
      const double d = static_cast<double>(a.at(x, y)) - b.at(x, y);
      sum += d * d;
    }
  }
  return sum / static_cast<double>(region.area());
}

/// Returns +inf for identical inputs.
inline double psnr(const GrayImage& a, const GrayImage& b) {
  detail::require_same_shape(a, b);
  return detail::psnr_from_mse(mse(a, b, {0, 0, a.width(), a.height()}));
}

inline double psnr(const GrayImage& a, const GrayImage& b, const Rect& region) {
  return detail::psnr_from_mse(mse(a, b, region));
}

struct SsimParams {
  int window = 11;
  double sigma = 1.5;
  double k1 = 0.01;
  double k2 = 0.03;
};

/// Mean of the local SSIM map over every fully-contained Gaussian window
/// (no padding, no downsampling).
inline double mssim(const GrayImage& a, const GrayImage& b, const SsimParams& p = {}) {
  detail::require_same_shape(a, b);
  const int n = p.window;
  if (a.width() < n || a.height() < n) {
    throw Error(ErrorCode::TooSmall, "mssim needs at least " + std::to_string(n) + "x" +
                                         std::to_string(n) + " pixels");
  }

  std::vector<double> g(static_cast<std::size_t>(n));
  double gsum = 0.0;
  for (int i = 0; i < n; ++i) {
    const double d = i - (n - 1) / 2.0;
    g[i] = std::exp(-d * d / (2.0 * p.sigma * p.sigma));
    gsum += g[i];
  }
  for (double& v : g) v /= gsum;

  const int w = a.width();
  const int h = a.height();
  const int ow = w - n + 1;
  const int oh = h - n + 1;

  // Separable filtering of x, y, x^2, y^2, xy: horizontal pass over full
  // rows, then vertical pass down to the valid output grid.
  constexpr int kPlanes = 5;
  std::array<std::vector<double>, kPlanes> horiz;
  for (auto& plane : horiz) plane.assign(static_cast<std::size_t>(ow) * h, 0.0);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < ow; ++x) {
      double s[kPlanes] = {};
      for (int i = 0; i < n; ++i) {
        const double va = a.at(x + i, y);
        const double vb = b.at(x + i, y);
        s[0] += g[i] * va;
        s[1] += g[i] * vb;
        s[2] += g[i] * (va * va);
        s[3] += g[i] * (vb * vb);
        s[4] += g[i] * (va * vb);
      }
      for (int k = 0; k < kPlanes; ++k) horiz[k][static_cast<std::size_t>(y) * ow + x] = s[k];
    }
  }

  const double c1 = (p.k1 * kPeak) * (p.k1 * kPeak);
  const double c2 = (p.k2 * kPeak) * (p.k2 * kPeak);
  double total = 0.0;
  for (int y = 0; y < oh; ++y) {
    for (int x = 0; x < ow; ++x) {
      double s[kPlanes] = {};
      for (int i = 0; i < n; ++i) {
        const std::size_t idx = static_cast<std::size_t>(y + i) * ow + x;
        for (int k = 0; k < kPlanes; ++k) s[k] += g[i] * horiz[k][idx];
      }
      const double mu_a = s[0];
      const double mu_b = s[1];
      const double var_a = s[2] - mu_a * mu_a;
      const double var_b = s[3] - mu_b * mu_b;
      const double cov = s[4] - mu_a * mu_b;
      total += ((2.0 * mu_a * mu_b + c1) * (2.0 * cov + c2)) /
               ((mu_a * mu_a + mu_b * mu_b + c1) * (var_a + var_b + c2));
    }
  }
  return total / (static_cast<double>(ow) * oh);
}

struct QualityScore {
  double psnr_db = 0.0;
  double mssim = 0.0;
};

inline QualityScore quality(const GrayImage& reference, const GrayImage& test) {
  return {psnr(reference, test), mssim(reference, test)};
}

}  // namespace roimark
