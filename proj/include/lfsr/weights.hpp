#pragma once

#include <vector>

#include "lfsr/image.hpp"
#include "lfsr/lightfield.hpp"
#include "lfsr/operators.hpp"

namespace lfsr {

// Falloff scales of the discontinuity-aware weights. Infinity disables a factor.
struct WeightParams {
  double sigma_spatial = 2.0;
  double sigma_edge = 0.01;
  double sigma_boundary = 1.0;    // occlusion boundary, disparity units
  double sigma_projection = 0.1;  // projection error, intensity units

  void validate() const;
};

// Smallest weight ever emitted; keeps every W_d strictly positive after exp underflow.
inline constexpr double kMinWeight = 1e-12;

// exp(-|d|^2 / sigma_s).
double spatial_weight(Offset d, double sigma_spatial);

// exp(-|grad x|^2 / sigma_e) with central differences and replicate borders.
ImageGrid edge_weight(const ImageGrid& x, double sigma_edge);

// min(0, dw/dx + dw/dy) with forward differences (zero at the far border).
ImageGrid occlusion_boundary(const DisparityMap& disparity);

// Reference-frame estimates of the non-reference views: each LR view is bicubically
// upsampled to the HR grid and warped back onto the reference view with the reference
// disparity. These depend on the stack only, so they are computed once per solve.
std::vector<ImageGrid> backprojected_views(const LightFieldStack& stack);

// Mean over non-reference views of |x - backprojected view|. Zeros for a single view.
ImageGrid projection_error(const LightFieldStack& stack, const ImageGrid& x);
ImageGrid projection_error(std::span<const ImageGrid> backprojected, const ImageGrid& x);

// exp(-b^2 / (2 s1^2)) * exp(-p^2 / (2 s2^2)).
ImageGrid occlusion_weight(const ImageGrid& boundary, const ImageGrid& projection, double sigma_boundary,
                           double sigma_projection);

RegWeightSet assemble_weights(const ImageGrid& x, const LightFieldStack& stack, const OffsetSet& offsets,
                              const WeightParams& params);

// Caches the stack-only parts of assemble_weights across solver iterations.
class WeightAssembler {
 public:
  WeightAssembler(const LightFieldStack& stack, OffsetSet offsets, WeightParams params);

  RegWeightSet operator()(const ImageGrid& x) const;

  const OffsetSet& offsets() const noexcept { return offsets_; }
  const WeightParams& params() const noexcept { return params_; }

 private:
  OffsetSet offsets_;
  WeightParams params_;
  std::vector<double> spatial_;
  ImageGrid boundary_;
  std::vector<ImageGrid> backprojected_;
};

}  // namespace lfsr
