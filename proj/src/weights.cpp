#include "lfsr/weights.hpp"

#include <cmath>
#include <string>

#include "lfsr/resample.hpp"

namespace lfsr {

void WeightParams::validate() const {
  const auto check = [](double v, const char* name) {
    if (!(v > 0.0)) throw RangeError(std::string(name) + " must be strictly positive");
  };
  check(sigma_spatial, "sigma_spatial");
  check(sigma_edge, "sigma_edge");
  check(sigma_boundary, "sigma_boundary");
  check(sigma_projection, "sigma_projection");
}

namespace {
// exp(-t) floored at kMinWeight; t = +inf/NaN-free by construction of callers.
double decay(double t) { return std::max(std::exp(-t), kMinWeight); }
}  // namespace

double spatial_weight(Offset d, double sigma_spatial) {
  if (!(sigma_spatial > 0.0)) throw RangeError("sigma_spatial must be strictly positive");
  return decay(d.squared_norm() / sigma_spatial);
}

ImageGrid edge_weight(const ImageGrid& x, double sigma_edge) {
  if (!(sigma_edge > 0.0)) throw RangeError("sigma_edge must be strictly positive");
  ImageGrid out(x.width(), x.height());
  for (int y = 0; y < x.height(); ++y)
    for (int i = 0; i < x.width(); ++i) {
      const double gx = 0.5 * (x.clamped(i + 1, y) - x.clamped(i - 1, y));
      const double gy = 0.5 * (x.clamped(i, y + 1) - x.clamped(i, y - 1));
      out(i, y) = decay((gx * gx + gy * gy) / sigma_edge);
    }
  return out;
}

ImageGrid occlusion_boundary(const DisparityMap& disparity) {
  const ImageGrid& w = disparity.grid();
  ImageGrid out(w.width(), w.height());
  for (int y = 0; y < w.height(); ++y)
    for (int x = 0; x < w.width(); ++x) {
      const double div = (w.clamped(x + 1, y) - w(x, y)) + (w.clamped(x, y + 1) - w(x, y));
      out(x, y) = std::min(0.0, div);
    }
  return out;
}

std::vector<ImageGrid> backprojected_views(const LightFieldStack& stack) {
  stack.validate();
  const Dimensions dims = stack.dimensions();
  const auto& ref = stack.reference_view();
  std::vector<ImageGrid> out;
  for (std::size_t k = 0; k < stack.views.size(); ++k) {
    if (k == stack.reference) continue;
    const auto& v = stack.views[k];
    const ImageGrid up = bicubic_resample(v.image, dims.hr_width(), dims.hr_height());
    const PerspectiveIndex delta = v.theta - ref.theta;
    out.push_back(warp(up, ref.disparity, {-delta.u, -delta.v}));
  }
  return out;
}

ImageGrid projection_error(std::span<const ImageGrid> backprojected, const ImageGrid& x) {
  ImageGrid out(x.width(), x.height());
  if (backprojected.empty()) return out;
  auto dst = out.samples();
  auto src = x.samples();
  for (const auto& b : backprojected) {
    require_same_shape(x, b, "projection_error");
    auto bs = b.samples();
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += std::fabs(src[i] - bs[i]);
  }
  const double inv = 1.0 / static_cast<double>(backprojected.size());
  for (double& v : dst) v *= inv;
  return out;
}

ImageGrid projection_error(const LightFieldStack& stack, const ImageGrid& x) {
  return projection_error(backprojected_views(stack), x);
}

ImageGrid occlusion_weight(const ImageGrid& boundary, const ImageGrid& projection, double sigma_boundary,
                           double sigma_projection) {
  require_same_shape(boundary, projection, "occlusion_weight");
  if (!(sigma_boundary > 0.0) || !(sigma_projection > 0.0))
    throw RangeError("occlusion falloffs must be strictly positive");
  ImageGrid out(boundary.width(), boundary.height());
  auto b = boundary.samples();
  auto p = projection.samples();
  auto o = out.samples();
  const double cb = 1.0 / (2.0 * sigma_boundary * sigma_boundary);
  const double cp = 1.0 / (2.0 * sigma_projection * sigma_projection);
  for (std::size_t i = 0; i < o.size(); ++i) o[i] = decay(b[i] * b[i] * cb + p[i] * p[i] * cp);
  return out;
}

WeightAssembler::WeightAssembler(const LightFieldStack& stack, OffsetSet offsets, WeightParams params)
    : offsets_(std::move(offsets)), params_(params) {
  params_.validate();
  spatial_.reserve(offsets_.size());
  for (const Offset& d : offsets_) spatial_.push_back(spatial_weight(d, params_.sigma_spatial));
  boundary_ = occlusion_boundary(stack.reference_view().disparity);
  backprojected_ = backprojected_views(stack);
}

RegWeightSet WeightAssembler::operator()(const ImageGrid& x) const {
  require_same_shape(x, boundary_, "assemble_weights");
  ImageGrid shared = edge_weight(x, params_.sigma_edge);
  const ImageGrid occ = occlusion_weight(boundary_, projection_error(backprojected_, x), params_.sigma_boundary,
                                         params_.sigma_projection);
  auto s = shared.samples();
  auto o = occ.samples();
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = std::max(s[i] * o[i], kMinWeight);
  return RegWeightSet::combine(offsets_, spatial_, std::move(shared));
}

RegWeightSet assemble_weights(const ImageGrid& x, const LightFieldStack& stack, const OffsetSet& offsets,
                              const WeightParams& params) {
  return WeightAssembler(stack, offsets, params)(x);
}

}  // namespace lfsr
