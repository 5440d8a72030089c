#include <gtest/gtest.h>

#include "lfsr/errors.hpp"
#include "lfsr/operators.hpp"
#include "support.hpp"

using namespace lfsr;
using namespace lfsr::test;

namespace {

constexpr int kTrials = 100;

void expect_adjoint(double lhs, double rhs, double tol) {
  ASSERT_LE(std::fabs(lhs - rhs), tol * std::max({std::fabs(lhs), std::fabs(rhs), 1.0})) << lhs << " vs " << rhs;
}

BlurKernel asymmetric_kernel() {
  return BlurKernel(1, {0.0, 0.1, 0.0, 0.05, 0.5, 0.2, 0.0, 0.0, 0.15});
}

ForwardModel random_model(std::mt19937_64& gen, int hr, int scale, std::size_t views, AdjointMode mode) {
  std::uniform_real_distribution<double> shift(-1.5, 1.5);
  std::vector<ViewOperator> ops;
  const DisparityMap ref = wavy_disparity(hr, hr);
  for (std::size_t k = 0; k < views; ++k) {
    const PerspectiveIndex delta = k == 0 ? PerspectiveIndex{} : PerspectiveIndex{shift(gen), shift(gen)};
    ops.push_back({delta, DisparityMap(random_image(hr, hr, gen, -1.2, 1.8))});
  }
  return ForwardModel(Dimensions::from_hr(hr, hr, scale), scale >= 2 ? gaussian_psf(scale) : asymmetric_kernel(),
                      ops, ref, mode);
}

}  // namespace

TEST(Downsample, PicksTopLeftSamples) {
  ImageGrid x(4, 4);
  for (std::size_t i = 0; i < 16; ++i) x.samples()[i] = double(i);
  const ImageGrid d = downsample(x, 2);
  ASSERT_EQ(d.width(), 2);
  EXPECT_EQ(d(0, 0), x(0, 0));
  EXPECT_EQ(d(1, 0), x(2, 0));
  EXPECT_EQ(d(0, 1), x(0, 2));
  EXPECT_EQ(d(1, 1), x(2, 2));
  EXPECT_EQ(downsample(ImageGrid(6, 6, 0.4), 3), ImageGrid(2, 2, 0.4));
  EXPECT_THROW(downsample(ImageGrid(5, 4), 2), DimensionError);
}

TEST(Downsample, AdjointPlacesOnEvenGrid) {
  const ImageGrid up = downsample_adjoint(ImageGrid(2, 2, 1.0), 2);
  for (int y = 0; y < 4; ++y)
    for (int x = 0; x < 4; ++x) EXPECT_EQ(up(x, y), (x % 2 == 0 && y % 2 == 0) ? 1.0 : 0.0);
  std::mt19937_64 gen(1);
  const ImageGrid y = random_image(5, 3, gen);
  EXPECT_EQ(downsample(downsample_adjoint(y, 3), 3), y);
}

TEST(Downsample, AdjointIdentity) {
  std::mt19937_64 gen(2);
  for (int t = 0; t < kTrials; ++t) {
    const ImageGrid x = random_image(8, 8, gen, -1, 1);
    const ImageGrid y = random_image(4, 4, gen, -1, 1);
    expect_adjoint(dot(downsample(x, 2), y), dot(x, downsample_adjoint(y, 2)), 1e-12);
  }
}

TEST(Psf, SigmaAndRadius) {
  EXPECT_NEAR(gaussian_psf_sigma(2), 0.25 * std::sqrt(3.0), 1e-15);
  EXPECT_NEAR(gaussian_psf_sigma(4), 0.25 * std::sqrt(15.0), 1e-15);
  EXPECT_EQ(gaussian_psf(2).radius(), 2);
  EXPECT_EQ(gaussian_psf(4).radius(), 3);
  for (int z : {2, 3, 4}) {
    double s = 0.0;
    const BlurKernel k = gaussian_psf(z);
    for (double t : k.taps()) s += t;
    EXPECT_NEAR(s, 1.0, 1e-12);
  }
  EXPECT_THROW(gaussian_psf(1), RangeError);
}

TEST(Blur, ImpulseResponseIsKernel) {
  const BlurKernel k = asymmetric_kernel();
  ImageGrid delta(7, 7);
  delta(3, 3) = 1.0;
  const ImageGrid out = blur(delta, k);
  for (int dy = -1; dy <= 1; ++dy)
    for (int dx = -1; dx <= 1; ++dx) EXPECT_NEAR(out(3 + dx, 3 + dy), k(dx, dy), 1e-15);
  EXPECT_EQ(out(0, 0), 0.0);
}

TEST(Blur, ConstantInteriorAndSizeGuard) {
  const ImageGrid out = blur(ImageGrid(12, 12, 0.6), gaussian_psf(3));
  const int r = gaussian_psf(3).radius();
  for (int y = r; y < 12 - r; ++y)
    for (int x = r; x < 12 - r; ++x) ASSERT_NEAR(out(x, y), 0.6, 1e-12);
  EXPECT_THROW(blur(ImageGrid(3, 3), gaussian_psf(4)), DimensionError);
}

TEST(Blur, AdjointIdentity) {
  std::mt19937_64 gen(3);
  for (const BlurKernel& k : {asymmetric_kernel(), gaussian_psf(2), gaussian_psf(4)}) {
    for (int t = 0; t < kTrials; ++t) {
      const ImageGrid x = random_image(11, 9, gen, -1, 1);
      const ImageGrid y = random_image(11, 9, gen, -1, 1);
      expect_adjoint(dot(blur(x, k), y), dot(x, blur_adjoint(y, k)), 1e-12);
    }
  }
}

TEST(Warp, ZeroShiftIsIdentity) {
  std::mt19937_64 gen(4);
  const ImageGrid x = random_image(9, 9, gen);
  const DisparityMap d(random_image(9, 9, gen, -2, 2));
  EXPECT_EQ(warp(x, d, {0, 0}), x);
  EXPECT_EQ(warp_adjoint(x, d, {0, 0}, AdjointMode::Exact), x);
  EXPECT_EQ(warp_adjoint(x, d, {0, 0}, AdjointMode::Paper), x);
}

TEST(Warp, IntegerAndHalfPixelShifts) {
  const ImageGrid ramp = ramp_x(10, 6);
  const ImageGrid one = warp(ramp, DisparityMap(ImageGrid(10, 6, 1.0)), {1, 0});
  const ImageGrid half = warp(ramp, DisparityMap(ImageGrid(10, 6, 0.5)), {1, 0});
  for (int y = 0; y < 6; ++y)
    for (int x = 1; x < 8; ++x) {
      EXPECT_NEAR(one(x, y), ramp(x, y) + 1.0, 1e-12);
      EXPECT_NEAR(half(x, y), ramp(x, y) + 0.5, 1e-12);
    }
}

TEST(Warp, ExactAdjointIdentity) {
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> shift(-2.0, 2.0);
  for (int t = 0; t < kTrials; ++t) {
    const int w = 5 + t % 20;
    const int h = 4 + (t * 7) % 23;
    const DisparityMap d(random_image(w, h, gen, -1.5, 2.5));
    const PerspectiveIndex delta{shift(gen), shift(gen)};
    const ImageGrid x = random_image(w, h, gen, -1, 1);
    const ImageGrid y = random_image(w, h, gen, -1, 1);
    expect_adjoint(dot(warp(x, d, delta), y), dot(x, warp_adjoint(y, d, delta, AdjointMode::Exact)), 1e-12);
  }
}

TEST(Warp, PaperAdjointMatchesExactForConstantDisparity) {
  std::mt19937_64 gen(6);
  const DisparityMap d(ImageGrid(16, 16, 0.7));
  for (PerspectiveIndex delta : {PerspectiveIndex{1, 0}, PerspectiveIndex{-1, 1}, PerspectiveIndex{0.5, -0.25}}) {
    const ImageGrid y = random_image(16, 16, gen);
    const ImageGrid exact = warp_adjoint(y, d, delta, AdjointMode::Exact);
    const ImageGrid paper = warp_adjoint(y, d, delta, AdjointMode::Paper);
    for (int yy = 3; yy < 13; ++yy)
      for (int x = 3; x < 13; ++x) EXPECT_NEAR(paper(x, yy), exact(x, yy), 1e-6);
  }
}

TEST(Offsets, WindowAndValidation) {
  EXPECT_EQ(OffsetSet::window(2).size(), 24u);
  EXPECT_EQ(OffsetSet::window(1).size(), 8u);
  EXPECT_TRUE(OffsetSet::window(0).empty());
  EXPECT_THROW(OffsetSet({{0, 0}}), RangeError);
  EXPECT_THROW(OffsetSet({{1, 0}, {1, 0}}), RangeError);
  for (const Offset& o : OffsetSet::window(2)) EXPECT_FALSE(o == Offset{});
}

TEST(RegularizerS, ConstantGivesZeroAndRampGivesMinusOne) {
  const OffsetSet offsets({{1, 0}, {-1, 2}});
  const RegWeightSet w = RegWeightSet::uniform(offsets, 8, 8);
  for (const auto& g : apply_S(ImageGrid(8, 8, 0.3), w))
    for (double v : values(g)) EXPECT_EQ(v, 0.0);
  const auto out = apply_S(ramp_x(8, 8), RegWeightSet::uniform(OffsetSet({{1, 0}}), 8, 8));
  for (int y = 0; y < 8; ++y)
    for (int x = 0; x < 7; ++x) EXPECT_EQ(out[0](x, y), -1.0);
}

TEST(RegularizerS, AdjointIdentity) {
  std::mt19937_64 gen(7);
  for (int t = 0; t < kTrials; ++t) {
    const RegWeightSet w = random_weights(OffsetSet::window(2), 9, 7, gen);
    const ImageGrid x = random_image(9, 7, gen, -1, 1);
    std::vector<ImageGrid> g;
    for (std::size_t i = 0; i < w.offsets.size(); ++i) g.push_back(random_image(9, 7, gen, -1, 1));
    expect_adjoint(dot(apply_S(x, w), g), dot(x, apply_S_adjoint(g, w)), 1e-12);
  }
}

TEST(RegularizerS, NormalMatchesDenseWeightedLaplacian) {
  // Independent dense construction of W (I - shift_d) with clamped shifts on a 6x6 grid.
  std::mt19937_64 gen(8);
  const int n = 6;
  const RegWeightSet w = random_weights(OffsetSet::window(1), n, n, gen);
  Eigen::MatrixXd ata = Eigen::MatrixXd::Zero(n * n, n * n);
  for (std::size_t i = 0; i < w.offsets.size(); ++i) {
    Eigen::MatrixXd di = Eigen::MatrixXd::Zero(n * n, n * n);
    for (int y = 0; y < n; ++y)
      for (int x = 0; x < n; ++x) {
        const int row = y * n + x;
        const int sx = std::clamp(x + w.offsets[i].dx, 0, n - 1);
        const int sy = std::clamp(y + w.offsets[i].dy, 0, n - 1);
        di(row, row) += w.maps[i](x, y);
        di(row, sy * n + sx) -= w.maps[i](x, y);
      }
    ata += di.transpose() * di;
  }
  const ImageGrid x = random_image(n, n, gen);
  const ImageGrid got = apply_S_adjoint(apply_S(x, w), w);
  const Eigen::VectorXd want = ata * to_vec(x);
  for (int i = 0; i < n * n; ++i) EXPECT_NEAR(got.samples()[i], want(i), 1e-12);
}

TEST(ForwardModel, DegenerateChainRepeatsInput) {
  std::vector<ViewOperator> ops;
  for (int k = 0; k < 3; ++k) ops.push_back({{double(k), -double(k)}, DisparityMap(ImageGrid(6, 6))});
  const ForwardModel m(Dimensions::from_hr(6, 6, 1), BlurKernel::identity(), ops, DisparityMap(ImageGrid(6, 6)));
  std::mt19937_64 gen(9);
  const ImageGrid x = random_image(6, 6, gen);
  for (const auto& a : apply_A(x, m)) EXPECT_EQ(a, x);
}

TEST(ForwardModel, StackAdjointIdentityBothScales) {
  std::mt19937_64 gen(10);
  for (int t = 0; t < kTrials; ++t) {
    const int scale = 1 + t % 4;
    const int hr = scale == 1 ? 9 : 4 * scale * (1 + t % 3);
    const ForwardModel m = random_model(gen, hr, scale, 1 + t % 4, AdjointMode::Exact);
    const ImageGrid x = random_image(hr, hr, gen, -1, 1);
    std::vector<ImageGrid> y;
    for (std::size_t k = 0; k < m.view_count(); ++k) y.push_back(random_image(hr / scale, hr / scale, gen, -1, 1));
    expect_adjoint(dot(apply_A(x, m), y), dot(x, apply_A_adjoint(y, m)), 1e-10);
  }
}

TEST(ForwardModel, CombinedPassAdjointAndCuCount) {
  std::mt19937_64 gen(11);
  const ForwardModel m = random_model(gen, 16, 2, 3, AdjointMode::Exact);
  const RegWeightSet w = random_weights(OffsetSet::window(2), 16, 16, gen);
  CuCounter cu;
  for (int t = 0; t < kTrials; ++t) {
    const ImageGrid x = random_image(16, 16, gen, -1, 1);
    std::vector<ImageGrid> r, g;
    for (int k = 0; k < 3; ++k) r.push_back(random_image(8, 8, gen, -1, 1));
    for (std::size_t i = 0; i < w.offsets.size(); ++i) g.push_back(random_image(16, 16, gen, -1, 1));
    const StackedImages fx = forward_pass(x, m, w, &cu);
    const ImageGrid back = adjoint_pass(r, 0.7, g, 1.3, m, w, &cu);
    expect_adjoint(0.7 * dot(fx.data, r) + 1.3 * dot(fx.reg, g), dot(x, back), 1e-10);
  }
  EXPECT_EQ(cu.forward, std::uint64_t(kTrials));
  EXPECT_EQ(cu.adjoint, std::uint64_t(kTrials));
}

TEST(ApplyNormal, TermIsolationAndLinearity) {
  std::mt19937_64 gen(12);
  const ForwardModel m = random_model(gen, 8, 2, 2, AdjointMode::Exact);
  const RegWeightSet w = random_weights(OffsetSet::window(1), 8, 8, gen);
  const ImageGrid x = random_image(8, 8, gen);
  const ImageGrid got = apply_normal(x, m, w, NormalCoefficients{3.0, 0.0}, nullptr);
  ImageGrid want = apply_A_adjoint(apply_A(x, m), m);
  for (double& v : want.samples()) v *= 3.0;
  for (std::size_t i = 0; i < x.size(); ++i) EXPECT_NEAR(got.samples()[i], want.samples()[i], 1e-12);
  for (double v : values(apply_normal(ImageGrid(8, 8), m, w, NormalCoefficients::from(1, 10, 16), nullptr)))
    EXPECT_EQ(v, 0.0);
  const NormalCoefficients c = NormalCoefficients::from(2.0, 10.0, 4.0);
  EXPECT_DOUBLE_EQ(c.data, 10.0 + 0.5 * 4.0 * 4.0);
  EXPECT_DOUBLE_EQ(c.reg, 2.0);
}

TEST(ApplyNormal, MatchesDenseOracle) {
  std::mt19937_64 gen(13);
  const ForwardModel m = random_model(gen, 8, 2, 2, AdjointMode::Exact);
  const RegWeightSet w = random_weights(OffsetSet::window(2), 8, 8, gen);
  const Eigen::MatrixXd a = dense_of(8, 8, [&](const ImageGrid& e) { return to_vec(apply_A(e, m)); });
  const Eigen::MatrixXd s = dense_of(8, 8, [&](const ImageGrid& e) { return to_vec(apply_S(e, w)); });
  const NormalCoefficients c = NormalCoefficients::from(1.0, 10.0, 16.0);
  const Eigen::MatrixXd g = c.data * a.transpose() * a + c.reg * s.transpose() * s;
  CuCounter cu;
  for (int t = 0; t < 10; ++t) {
    const ImageGrid x = random_image(8, 8, gen, -1, 1);
    const Eigen::VectorXd want = g * to_vec(x);
    const ImageGrid got = apply_normal(x, m, w, c, &cu);
    for (int i = 0; i < 64; ++i) ASSERT_NEAR(got.samples()[i], want(i), 1e-8 * std::max(1.0, want.cwiseAbs().maxCoeff()));
  }
  EXPECT_EQ(cu.total(), 20u);
}
