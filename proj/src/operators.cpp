#include "lfsr/operators.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "lfsr/parallel.hpp"

namespace lfsr {

// ---------------------------------------------------------------------------------------------
// Blur

BlurKernel::BlurKernel() : radius_(0), taps_{1.0} {}

BlurKernel::BlurKernel(int radius, std::vector<double> taps) : radius_(radius), taps_(std::move(taps)) {
  if (radius < 0) throw RangeError("kernel radius must be non-negative");
  if (taps_.size() != static_cast<std::size_t>(side()) * static_cast<std::size_t>(side()))
    throw DimensionError("kernel tap count does not match radius " + std::to_string(radius));
  const double sum = std::accumulate(taps_.begin(), taps_.end(), 0.0);
  if (!std::isfinite(sum) || sum <= 0.0) throw RangeError("kernel taps must have a positive finite sum");
  for (double& t : taps_) t /= sum;
}

BlurKernel BlurKernel::gaussian(double sigma, int radius) {
  if (!(sigma > 0.0)) throw RangeError("gaussian sigma must be positive");
  const int side = 2 * radius + 1;
  std::vector<double> taps(static_cast<std::size_t>(side) * side);
  for (int dy = -radius; dy <= radius; ++dy)
    for (int dx = -radius; dx <= radius; ++dx)
      taps[(dy + radius) * side + (dx + radius)] = std::exp(-(dx * dx + dy * dy) / (2.0 * sigma * sigma));
  return BlurKernel(radius, std::move(taps));
}

double gaussian_psf_sigma(int scale) {
  if (scale < 2) throw RangeError("gaussian PSF needs scale >= 2");
  return 0.25 * std::sqrt(double(scale) * scale - 1.0);
}

BlurKernel gaussian_psf(int scale) {
  const double sigma = gaussian_psf_sigma(scale);
  return BlurKernel::gaussian(sigma, static_cast<int>(std::ceil(3.0 * sigma)));
}

namespace {

void check_kernel_fits(const ImageGrid& x, const BlurKernel& k) {
  if (k.radius() >= std::min(x.width(), x.height()))
    throw DimensionError("blur kernel radius " + std::to_string(k.radius()) + " does not fit a " +
                         std::to_string(x.width()) + "x" + std::to_string(x.height()) + " image");
}

// sign = +1 for convolution (gather from z - d), -1 for correlation (gather from z + d).
ImageGrid filter(const ImageGrid& x, const BlurKernel& k, int sign) {
  check_kernel_fits(x, k);
  const int r = k.radius();
  if (r == 0) {
    ImageGrid out = x;
    const double t = k(0, 0);
    for (double& v : out.samples()) v *= t;
    return out;
  }
  const int w = x.width();
  const int h = x.height();
  ImageGrid out(w, h);
  parallel_for(static_cast<std::size_t>(h), [&](std::size_t row) {
    const int y = static_cast<int>(row);
    for (int xx = 0; xx < w; ++xx) {
      double s = 0.0;
      for (int dy = -r; dy <= r; ++dy) {
        const int sy = y - sign * dy;
        if (sy < 0 || sy >= h) continue;
        for (int dx = -r; dx <= r; ++dx) {
          const int sx = xx - sign * dx;
          if (sx < 0 || sx >= w) continue;
          s += k(dx, dy) * x(sx, sy);
        }
      }
      out(xx, y) = s;
    }
  });
  return out;
}

}  // namespace

ImageGrid blur(const ImageGrid& x, const BlurKernel& k) { return filter(x, k, +1); }
ImageGrid blur_adjoint(const ImageGrid& y, const BlurKernel& k) { return filter(y, k, -1); }

// ---------------------------------------------------------------------------------------------
// Sampling

ImageGrid downsample(const ImageGrid& x, int scale) {
  if (scale < 1) throw RangeError("scale must be positive");
  if (x.width() % scale != 0 || x.height() % scale != 0)
    throw DimensionError("downsample: " + std::to_string(x.width()) + "x" + std::to_string(x.height()) +
                         " not divisible by " + std::to_string(scale));
  ImageGrid out(x.width() / scale, x.height() / scale);
  for (int j = 0; j < out.height(); ++j)
    for (int i = 0; i < out.width(); ++i) out(i, j) = x(scale * i, scale * j);
  return out;
}

ImageGrid downsample_adjoint(const ImageGrid& y, int scale) {
  if (scale < 1) throw RangeError("scale must be positive");
  ImageGrid out(y.width() * scale, y.height() * scale);
  for (int j = 0; j < y.height(); ++j)
    for (int i = 0; i < y.width(); ++i) out(scale * i, scale * j) = y(i, j);
  return out;
}

// ---------------------------------------------------------------------------------------------
// Warp

AdjointMode parse_adjoint_mode(const std::string& name) {
  if (name == "exact") return AdjointMode::Exact;
  if (name == "paper") return AdjointMode::Paper;
  throw RangeError("unknown adjoint mode '" + name + "' (expected exact or paper)");
}

std::string to_string(AdjointMode mode) { return mode == AdjointMode::Exact ? "exact" : "paper"; }

namespace {

struct BilinearTaps {
  std::size_t index[4];
  double weight[4];
};

// Shared by the gather and its transpose so both see identical indices and weights.
BilinearTaps bilinear_taps(int w, int h, double sx, double sy) {
  const double fx0 = std::floor(sx);
  const double fy0 = std::floor(sy);
  const double fx = sx - fx0;
  const double fy = sy - fy0;
  // Clamp in floating point first so huge shifts cannot overflow int.
  const int x0 = static_cast<int>(std::clamp(fx0, -1.0, double(w)));
  const int y0 = static_cast<int>(std::clamp(fy0, -1.0, double(h)));
  const int xa = std::clamp(x0, 0, w - 1);
  const int xb = std::clamp(x0 + 1, 0, w - 1);
  const int ya = std::clamp(y0, 0, h - 1);
  const int yb = std::clamp(y0 + 1, 0, h - 1);
  const auto at = [w](int x, int y) { return static_cast<std::size_t>(y) * w + x; };
  return {{at(xa, ya), at(xb, ya), at(xa, yb), at(xb, yb)},
          {(1 - fx) * (1 - fy), fx * (1 - fy), (1 - fx) * fy, fx * fy}};
}

void check_warp_shape(const ImageGrid& x, const DisparityMap& d) {
  if (x.width() != d.width() || x.height() != d.height())
    throw DimensionError("warp: disparity map " + std::to_string(d.width()) + "x" + std::to_string(d.height()) +
                         " does not match image " + std::to_string(x.width()) + "x" + std::to_string(x.height()));
}

bool is_zero(PerspectiveIndex delta) { return delta.u == 0.0 && delta.v == 0.0; }

}  // namespace

ImageGrid warp(const ImageGrid& x, const DisparityMap& disparity, PerspectiveIndex delta) {
  check_warp_shape(x, disparity);
  if (is_zero(delta)) return x;
  const int w = x.width();
  const int h = x.height();
  ImageGrid out(w, h);
  auto src = x.samples();
  for (int j = 0; j < h; ++j)
    for (int i = 0; i < w; ++i) {
      const double d = disparity(i, j);
      const auto t = bilinear_taps(w, h, i + delta.u * d, j + delta.v * d);
      out(i, j) = t.weight[0] * src[t.index[0]] + t.weight[1] * src[t.index[1]] +
                  t.weight[2] * src[t.index[2]] + t.weight[3] * src[t.index[3]];
    }
  return out;
}

ImageGrid warp_adjoint(const ImageGrid& y, const DisparityMap& disparity, PerspectiveIndex delta,
                       AdjointMode mode) {
  check_warp_shape(y, disparity);
  if (is_zero(delta)) return y;
  if (mode == AdjointMode::Paper) return warp(y, disparity, {-delta.u, -delta.v});
  const int w = y.width();
  const int h = y.height();
  ImageGrid out(w, h);
  auto dst = out.samples();
  for (int j = 0; j < h; ++j)
    for (int i = 0; i < w; ++i) {
      const double d = disparity(i, j);
      const auto t = bilinear_taps(w, h, i + delta.u * d, j + delta.v * d);
      const double v = y(i, j);
      for (int q = 0; q < 4; ++q) dst[t.index[q]] += t.weight[q] * v;
    }
  return out;
}

// ---------------------------------------------------------------------------------------------
// Regularizer shifts

OffsetSet::OffsetSet(std::vector<Offset> offsets) : offsets_(std::move(offsets)) {
  for (std::size_t i = 0; i < offsets_.size(); ++i) {
    if (offsets_[i] == Offset{}) throw RangeError("offset set must not contain (0,0)");
    for (std::size_t j = 0; j < i; ++j)
      if (offsets_[i] == offsets_[j]) throw RangeError("offset set contains duplicates");
  }
}

OffsetSet OffsetSet::window(int radius) {
  if (radius < 0) throw RangeError("window radius must be non-negative");
  std::vector<Offset> out;
  for (int dy = -radius; dy <= radius; ++dy)
    for (int dx = -radius; dx <= radius; ++dx)
      if (dx != 0 || dy != 0) out.push_back({dx, dy});
  return OffsetSet(std::move(out));
}

RegWeightSet RegWeightSet::combine(OffsetSet offsets, std::vector<double> spatial, ImageGrid shared) {
  if (spatial.size() != offsets.size()) throw DimensionError("one spatial weight per offset required");
  RegWeightSet set{std::move(offsets), std::move(spatial), std::move(shared), {}};
  set.maps.reserve(set.offsets.size());
  for (double wd : set.spatial) {
    ImageGrid m = set.shared;
    for (double& v : m.samples()) v *= wd;
    set.maps.push_back(std::move(m));
  }
  return set;
}

RegWeightSet RegWeightSet::uniform(OffsetSet offsets, int width, int height) {
  std::vector<double> ones(offsets.size(), 1.0);
  return combine(std::move(offsets), std::move(ones), ImageGrid(width, height, 1.0));
}

namespace {
void check_weights(const ImageGrid& x, const RegWeightSet& w) {
  if (w.maps.size() != w.offsets.size()) throw DimensionError("weight set is missing maps");
  for (const auto& m : w.maps) require_same_shape(x, m, "regularizer weights");
}
}  // namespace

std::vector<ImageGrid> apply_S(const ImageGrid& x, const RegWeightSet& w) {
  check_weights(x, w);
  std::vector<ImageGrid> out(w.offsets.size());
  const int width = x.width();
  const int height = x.height();
  parallel_for(out.size(), [&](std::size_t i) {
    const Offset d = w.offsets[i];
    const ImageGrid& map = w.maps[i];
    ImageGrid g(width, height);
    for (int y = 0; y < height; ++y)
      for (int xx = 0; xx < width; ++xx) g(xx, y) = map(xx, y) * (x(xx, y) - x.clamped(xx + d.dx, y + d.dy));
    out[i] = std::move(g);
  });
  return out;
}

ImageGrid apply_S_adjoint(std::span<const ImageGrid> g, const RegWeightSet& w) {
  if (g.size() != w.offsets.size()) throw DimensionError("apply_S_adjoint: one input per offset required");
  if (g.empty()) {
    if (w.shared.empty()) throw DimensionError("apply_S_adjoint: cannot infer grid size");
    return ImageGrid(w.shared.width(), w.shared.height());
  }
  check_weights(g[0], w);
  const int width = g[0].width();
  const int height = g[0].height();
  std::vector<ImageGrid> parts(g.size());
  parallel_for(g.size(), [&](std::size_t i) {
    require_same_shape(g[0], g[i], "apply_S_adjoint");
    const Offset d = w.offsets[i];
    const ImageGrid& map = w.maps[i];
    ImageGrid p(width, height);
    for (int y = 0; y < height; ++y)
      for (int x = 0; x < width; ++x) {
        const double v = map(x, y) * g[i](x, y);
        p(x, y) += v;
        p(std::clamp(x + d.dx, 0, width - 1), std::clamp(y + d.dy, 0, height - 1)) -= v;
      }
    parts[i] = std::move(p);
  });
  ImageGrid out = std::move(parts[0]);
  for (std::size_t i = 1; i < parts.size(); ++i) axpy(1.0, parts[i], out);
  return out;
}

// ---------------------------------------------------------------------------------------------
// Stacked degradation

ForwardModel::ForwardModel(Dimensions dims, BlurKernel kernel, std::vector<ViewOperator> views,
                           DisparityMap reference_disparity, AdjointMode mode)
    : dims_(dims),
      kernel_(std::move(kernel)),
      views_(std::move(views)),
      reference_disparity_(std::move(reference_disparity)),
      mode_(mode) {
  if (views_.empty()) throw DimensionError("forward model needs at least one view");
  const auto check = [&](const DisparityMap& d) {
    if (d.width() != dims_.hr_width() || d.height() != dims_.hr_height())
      throw DimensionError("disparity map does not match the high-resolution grid");
  };
  check(reference_disparity_);
  for (const auto& v : views_) check(v.disparity);
  if (kernel_.radius() >= std::min(dims_.hr_width(), dims_.hr_height()))
    throw DimensionError("blur kernel larger than the high-resolution grid");
}

ForwardModel ForwardModel::from_stack(const LightFieldStack& stack, BlurKernel kernel, AdjointMode mode) {
  stack.validate();
  std::vector<ViewOperator> views;
  views.reserve(stack.views.size());
  const auto& ref = stack.reference_view();
  for (const auto& v : stack.views) views.push_back({v.theta - ref.theta, v.disparity});
  return ForwardModel(stack.dimensions(), std::move(kernel), std::move(views), ref.disparity, mode);
}

ImageGrid ForwardModel::apply_view(const ImageGrid& x, std::size_t k) const {
  if (x.width() != dims_.hr_width() || x.height() != dims_.hr_height())
    throw DimensionError("forward model input is not on the high-resolution grid");
  const auto& v = views_.at(k);
  return downsample(blur(warp(x, v.disparity, v.delta), kernel_), dims_.scale);
}

ImageGrid ForwardModel::apply_view_adjoint(const ImageGrid& r, std::size_t k) const {
  if (r.width() != dims_.lr_width || r.height() != dims_.lr_height)
    throw DimensionError("adjoint input is not on the low-resolution grid");
  const auto& v = views_.at(k);
  const DisparityMap& disp = mode_ == AdjointMode::Paper ? reference_disparity_ : v.disparity;
  return warp_adjoint(blur_adjoint(downsample_adjoint(r, dims_.scale), kernel_), disp, v.delta, mode_);
}

std::vector<ImageGrid> apply_A(const ImageGrid& x, const ForwardModel& model) {
  std::vector<ImageGrid> out(model.view_count());
  parallel_for(out.size(), [&](std::size_t k) { out[k] = model.apply_view(x, k); });
  return out;
}

ImageGrid apply_A_adjoint(std::span<const ImageGrid> r, const ForwardModel& model) {
  if (r.size() != model.view_count()) throw DimensionError("apply_A_adjoint: one residual per view required");
  std::vector<ImageGrid> parts(r.size());
  parallel_for(r.size(), [&](std::size_t k) { parts[k] = model.apply_view_adjoint(r[k], k); });
  ImageGrid out = std::move(parts[0]);
  for (std::size_t k = 1; k < parts.size(); ++k) axpy(1.0, parts[k], out);
  return out;
}

StackedImages forward_pass(const ImageGrid& x, const ForwardModel& model, const RegWeightSet& w,
                           CuCounter* counter) {
  StackedImages out{apply_A(x, model), apply_S(x, w)};
  if (counter) ++counter->forward;
  return out;
}

ImageGrid adjoint_pass(std::span<const ImageGrid> r, double data_coeff, std::span<const ImageGrid> g,
                       double reg_coeff, const ForwardModel& model, const RegWeightSet& w,
                       CuCounter* counter) {
  ImageGrid out = apply_A_adjoint(r, model);
  if (data_coeff != 1.0)
    for (double& v : out.samples()) v *= data_coeff;
  if (!g.empty()) axpy(reg_coeff, apply_S_adjoint(g, w), out);
  if (counter) ++counter->adjoint;
  return out;
}

NormalCoefficients NormalCoefficients::from(double lambda1, double lambda2, double penalty) {
  return {lambda2 + 0.5 * penalty * lambda1 * lambda1, 0.5 * penalty};
}

ImageGrid apply_normal(const ImageGrid& x, const ForwardModel& model, const RegWeightSet& w,
                       NormalCoefficients coeffs, CuCounter* counter) {
  const StackedImages fx = forward_pass(x, model, w, counter);
  return adjoint_pass(fx.data, coeffs.data, fx.reg, coeffs.reg, model, w, counter);
}

}  // namespace lfsr
