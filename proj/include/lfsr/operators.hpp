#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "lfsr/image.hpp"
#include "lfsr/lightfield.hpp"

namespace lfsr {

// Point spread function as a dense (2r+1)^2 tap array, normalized to unit sum.
class BlurKernel {
 public:
  BlurKernel();  // identity (radius 0)
  // Taps are row-major over (dy, dx) in [-r, r]^2 and are renormalized to sum 1.
  BlurKernel(int radius, std::vector<double> taps);

  static BlurKernel identity() { return BlurKernel(); }
  static BlurKernel gaussian(double sigma, int radius);

  int radius() const noexcept { return radius_; }
  int side() const noexcept { return 2 * radius_ + 1; }
  double operator()(int dx, int dy) const { return taps_[(dy + radius_) * side() + (dx + radius_)]; }
  std::span<const double> taps() const noexcept { return taps_; }

 private:
  int radius_;
  std::vector<double> taps_;
};

// Sensor PSF for an integer scale: sigma = sqrt(scale^2 - 1) / 4, radius = ceil(3 sigma).
double gaussian_psf_sigma(int scale);
BlurKernel gaussian_psf(int scale);

// Top-left decimation: out(i, j) = x(scale*i, scale*j).
ImageGrid downsample(const ImageGrid& x, int scale);
// Zero-filled placement back onto the HR grid.
ImageGrid downsample_adjoint(const ImageGrid& y, int scale);

// Zero-padded convolution and its transpose (correlation with the same taps).
ImageGrid blur(const ImageGrid& x, const BlurKernel& k);
ImageGrid blur_adjoint(const ImageGrid& y, const BlurKernel& k);

enum class AdjointMode {
  Paper,  // backward warp with the reference disparity, an approximation of the transpose
  Exact,  // true transpose of the bilinear gather
};

AdjointMode parse_adjoint_mode(const std::string& name);
std::string to_string(AdjointMode mode);

// out(z) = x(z + delta * disparity(z)), bilinear, replicate border.
ImageGrid warp(const ImageGrid& x, const DisparityMap& disparity, PerspectiveIndex delta);
// Paper mode: warp(y, disparity, -delta). Exact mode: scatter of the bilinear weights.
ImageGrid warp_adjoint(const ImageGrid& y, const DisparityMap& disparity, PerspectiveIndex delta,
                       AdjointMode mode);

struct Offset {
  int dx = 0;
  int dy = 0;
  friend bool operator==(const Offset&, const Offset&) = default;
  double squared_norm() const noexcept { return double(dx) * dx + double(dy) * dy; }
};

// Distinct nonzero shifts of the nonlocal regularizer. An empty set disables it.
class OffsetSet {
 public:
  OffsetSet() = default;
  explicit OffsetSet(std::vector<Offset> offsets);
  // Every nonzero shift of a (2r+1)^2 window.
  static OffsetSet window(int radius);

  std::size_t size() const noexcept { return offsets_.size(); }
  bool empty() const noexcept { return offsets_.empty(); }
  const Offset& operator[](std::size_t i) const { return offsets_[i]; }
  auto begin() const noexcept { return offsets_.begin(); }
  auto end() const noexcept { return offsets_.end(); }

 private:
  std::vector<Offset> offsets_;
};

// Per-offset effective weight maps W_d = w_d * (w_e . w_o) on the HR grid.
struct RegWeightSet {
  OffsetSet offsets;
  std::vector<double> spatial;  // w_d per offset
  ImageGrid shared;             // w_e . w_o
  std::vector<ImageGrid> maps;  // W_d per offset

  // Builds maps from spatial weights and the shared pixel map.
  static RegWeightSet combine(OffsetSet offsets, std::vector<double> spatial, ImageGrid shared);
  // Every map constant 1 (plain anisotropic nonlocal TV).
  static RegWeightSet uniform(OffsetSet offsets, int width, int height);
};

// out_i(z) = W_i(z) * (x(z) - x(z + d_i)), replicate border.
std::vector<ImageGrid> apply_S(const ImageGrid& x, const RegWeightSet& w);
// Exact transpose of apply_S.
ImageGrid apply_S_adjoint(std::span<const ImageGrid> g, const RegWeightSet& w);

// Computation units: one forward CU is one pass of every A_k and S_d, one adjoint CU one
// pass of every transpose.
struct CuCounter {
  std::uint64_t forward = 0;
  std::uint64_t adjoint = 0;
  std::uint64_t total() const noexcept { return forward + adjoint; }
};

struct ViewOperator {
  PerspectiveIndex delta;  // theta_k - theta_0
  DisparityMap disparity;  // used by the forward warp
};

// The stacked degradation A = [D B W_1; ...; D B W_s] without data-term scaling.
class ForwardModel {
 public:
  ForwardModel(Dimensions dims, BlurKernel kernel, std::vector<ViewOperator> views,
               DisparityMap reference_disparity, AdjointMode mode = AdjointMode::Exact);
  static ForwardModel from_stack(const LightFieldStack& stack, BlurKernel kernel,
                                 AdjointMode mode = AdjointMode::Exact);

  const Dimensions& dimensions() const noexcept { return dims_; }
  const BlurKernel& kernel() const noexcept { return kernel_; }
  std::size_t view_count() const noexcept { return views_.size(); }
  AdjointMode adjoint_mode() const noexcept { return mode_; }

  ImageGrid apply_view(const ImageGrid& x, std::size_t k) const;
  ImageGrid apply_view_adjoint(const ImageGrid& r, std::size_t k) const;

 private:
  Dimensions dims_;
  BlurKernel kernel_;
  std::vector<ViewOperator> views_;
  DisparityMap reference_disparity_;
  AdjointMode mode_;
};

std::vector<ImageGrid> apply_A(const ImageGrid& x, const ForwardModel& model);
// Sum over views of W_k^T B^T D^T r_k, accumulated in view order.
ImageGrid apply_A_adjoint(std::span<const ImageGrid> r, const ForwardModel& model);

struct StackedImages {
  std::vector<ImageGrid> data;  // A x, one per view (LR)
  std::vector<ImageGrid> reg;   // S x, one per offset (HR)
};

// A x and S x together; counts one forward CU.
StackedImages forward_pass(const ImageGrid& x, const ForwardModel& model, const RegWeightSet& w,
                           CuCounter* counter);
// data_coeff * A^T r + reg_coeff * S^T g; counts one adjoint CU.
ImageGrid adjoint_pass(std::span<const ImageGrid> r, double data_coeff, std::span<const ImageGrid> g,
                       double reg_coeff, const ForwardModel& model, const RegWeightSet& w,
                       CuCounter* counter);

// Scalar factors of G^T G = data * A^T A + reg * S^T S.
struct NormalCoefficients {
  double data = 1.0;
  double reg = 0.0;
  // data = lambda2 + (theta/2) lambda1^2, reg = theta/2.
  static NormalCoefficients from(double lambda1, double lambda2, double penalty);
};

// G^T G x; one forward and one adjoint CU.
ImageGrid apply_normal(const ImageGrid& x, const ForwardModel& model, const RegWeightSet& w,
                       NormalCoefficients coeffs, CuCounter* counter);

}  // namespace lfsr
