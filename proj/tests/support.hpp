#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <filesystem>
#include <functional>
#include <random>
#include <string>

#include "lfsr/degrade.hpp"
#include "lfsr/operators.hpp"
#include "lfsr/solver.hpp"

namespace lfsr::test {

inline ImageGrid random_image(int w, int h, std::mt19937_64& gen, double lo = 0.0, double hi = 1.0) {
  std::uniform_real_distribution<double> dist(lo, hi);
  ImageGrid img(w, h);
  for (double& v : img.samples()) v = dist(gen);
  return img;
}

// Copy of the samples; safe as a range-for initializer on temporaries.
inline std::vector<double> values(const ImageGrid& g) { return {g.samples().begin(), g.samples().end()}; }

inline ImageGrid ramp_x(int w, int h, double slope = 1.0, double offset = 0.0) {
  ImageGrid img(w, h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) img(x, y) = offset + slope * x;
  return img;
}

inline Eigen::VectorXd to_vec(const ImageGrid& g) {
  return Eigen::Map<const Eigen::VectorXd>(g.samples().data(), Eigen::Index(g.size()));
}

inline Eigen::VectorXd to_vec(std::span<const ImageGrid> gs) {
  Eigen::Index n = 0;
  for (const auto& g : gs) n += Eigen::Index(g.size());
  Eigen::VectorXd v(n);
  Eigen::Index at = 0;
  for (const auto& g : gs) {
    v.segment(at, Eigen::Index(g.size())) = to_vec(g);
    at += Eigen::Index(g.size());
  }
  return v;
}

inline ImageGrid from_vec(const Eigen::VectorXd& v, int w, int h) {
  return ImageGrid(w, h, std::vector<double>(v.data(), v.data() + v.size()));
}

// Dense matrix of a linear map on w x h images, built column by column.
inline Eigen::MatrixXd dense_of(int w, int h, const std::function<Eigen::VectorXd(const ImageGrid&)>& op) {
  const int n = w * h;
  Eigen::MatrixXd m;
  for (int j = 0; j < n; ++j) {
    ImageGrid e(w, h);
    e.samples()[j] = 1.0;
    const Eigen::VectorXd col = op(e);
    if (j == 0) m.resize(col.size(), n);
    m.col(j) = col;
  }
  return m;
}

// Smooth, non-integer disparity so the warps exercise bilinear interpolation.
inline DisparityMap wavy_disparity(int w, int h, double base = 0.6, double amp = 0.35) {
  ImageGrid d(w, h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) d(x, y) = base + amp * std::sin(0.9 * x + 0.4) * std::cos(0.7 * y - 0.2);
  return DisparityMap(d);
}

// Small noisy stack from a random HR image: views are the first `views` of a 3x3 star.
inline LightFieldStack tiny_stack(int hr, int scale, std::size_t views, std::uint64_t seed, double sigma = 5.0,
                                  double nu = 1.0) {
  std::mt19937_64 gen(seed);
  const ImageGrid gt = random_image(hr, hr, gen, 0.2, 0.8);
  DegradeSettings s;
  s.grid_size = 3;
  s.pattern = ViewPattern::Star;
  s.arm = 1;
  s.max_views = views;
  s.scale = scale;
  s.kernel = scale >= 2 ? gaussian_psf(scale) : BlurKernel::identity();
  s.noise = {sigma, nu, seed};
  const ImageGrid channels[] = {gt};
  return luma_stack(degrade_lightfield(channels, wavy_disparity(hr, hr), s));
}

inline RegWeightSet random_weights(const OffsetSet& offsets, int w, int h, std::mt19937_64& gen) {
  std::uniform_real_distribution<double> dist(0.1, 1.0);
  std::vector<double> spatial;
  for (std::size_t i = 0; i < offsets.size(); ++i) spatial.push_back(dist(gen));
  return RegWeightSet::combine(offsets, spatial, random_image(w, h, gen, 0.1, 1.0));
}

inline double rel_diff(double a, double b) { return std::fabs(a - b) / std::max({std::fabs(a), std::fabs(b), 1e-300}); }

// Scratch directory under the build tree, emptied on construction.
inline std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("lfsr_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace lfsr::test
