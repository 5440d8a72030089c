#include "lfsr/metrics.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace lfsr {

namespace {

struct Region {
  int x0, y0, w, h;
};

Region cropped(const ImageGrid& a, const ImageGrid& b, int crop) {
  require_same_shape(a, b, "quality metric");
  if (crop < 0) throw RangeError("crop must be non-negative");
  const Region r{crop, crop, a.width() - 2 * crop, a.height() - 2 * crop};
  if (r.w <= 0 || r.h <= 0)
    throw DimensionError("crop of " + std::to_string(crop) + " leaves no pixels in a " + std::to_string(a.width()) +
                         "x" + std::to_string(a.height()) + " image");
  return r;
}

constexpr int kWindow = 11;
constexpr double kWindowSigma = 1.5;
constexpr double kC1 = (0.01 * 1.0) * (0.01 * 1.0);
constexpr double kC2 = (0.03 * 1.0) * (0.03 * 1.0);

std::vector<double> gaussian_window() {
  std::vector<double> g(kWindow);
  double sum = 0.0;
  for (int i = 0; i < kWindow; ++i) {
    const double t = i - kWindow / 2;
    g[i] = std::exp(-t * t / (2.0 * kWindowSigma * kWindowSigma));
    sum += g[i];
  }
  for (double& v : g) v /= sum;
  return g;
}

// Separable 'valid' filtering of f(a,b) over the region.
template <typename F>
ImageGrid valid_filter(const Region& r, const std::vector<double>& g, F&& f) {
  const int ow = r.w - kWindow + 1;
  const int oh = r.h - kWindow + 1;
  ImageGrid rows(ow, r.h);
  for (int y = 0; y < r.h; ++y)
    for (int x = 0; x < ow; ++x) {
      double s = 0.0;
      for (int k = 0; k < kWindow; ++k) s += g[k] * f(r.x0 + x + k, r.y0 + y);
      rows(x, y) = s;
    }
  ImageGrid out(ow, oh);
  for (int y = 0; y < oh; ++y)
    for (int x = 0; x < ow; ++x) {
      double s = 0.0;
      for (int k = 0; k < kWindow; ++k) s += g[k] * rows(x, y + k);
      out(x, y) = s;
    }
  return out;
}

}  // namespace

double psnr(const ImageGrid& a, const ImageGrid& b, int crop) {
  const Region r = cropped(a, b, crop);
  double sum = 0.0;
  for (int y = r.y0; y < r.y0 + r.h; ++y)
    for (int x = r.x0; x < r.x0 + r.w; ++x) {
      const double d = a(x, y) - b(x, y);
      sum += d * d;
    }
  const double mse = sum / (double(r.w) * r.h);
  if (mse == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(1.0 / mse);
}

double ssim(const ImageGrid& a, const ImageGrid& b, int crop) {
  const Region r = cropped(a, b, crop);
  if (r.w < kWindow || r.h < kWindow) throw DimensionError("image smaller than the 11x11 SSIM window");
  const auto g = gaussian_window();
  const ImageGrid mu_a = valid_filter(r, g, [&](int x, int y) { return a(x, y); });
  const ImageGrid mu_b = valid_filter(r, g, [&](int x, int y) { return b(x, y); });
  const ImageGrid aa = valid_filter(r, g, [&](int x, int y) { return a(x, y) * a(x, y); });
  const ImageGrid bb = valid_filter(r, g, [&](int x, int y) { return b(x, y) * b(x, y); });
  const ImageGrid ab = valid_filter(r, g, [&](int x, int y) { return a(x, y) * b(x, y); });
  double sum = 0.0;
  for (std::size_t i = 0; i < mu_a.size(); ++i) {
    const double ma = mu_a.samples()[i];
    const double mb = mu_b.samples()[i];
    const double va = aa.samples()[i] - ma * ma;
    const double vb = bb.samples()[i] - mb * mb;
    const double cov = ab.samples()[i] - ma * mb;
    sum += ((2 * (ma * mb) + kC1) * (2 * cov + kC2)) / ((ma * ma + mb * mb + kC1) * (va + vb + kC2));
  }
  return sum / static_cast<double>(mu_a.size());
}

QualityReport evaluate(const ImageGrid& a, const ImageGrid& b, int crop) {
  return {psnr(a, b, crop), ssim(a, b, crop), crop};
}

}  // namespace lfsr
