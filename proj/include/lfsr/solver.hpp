#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "lfsr/image.hpp"
#include "lfsr/lightfield.hpp"
#include "lfsr/operators.hpp"
#include "lfsr/weights.hpp"

namespace lfsr {

struct SolverConfig {
  double lambda1 = 1.0;   // l1 data weight
  double lambda2 = 10.0;  // squared-l2 data weight
  double penalty = 16.0;  // ADMM penalty theta; threshold 1/theta on a [0,1] intensity scale
  int iterations = 10;    // N
  int cg_iterations = 5;  // K
  double cg_tol = 0.0;    // 0 selects 1e-8 * hr_pixels
  AdjointMode adjoint_mode = AdjointMode::Exact;
  WeightParams weights;
  int window_radius = 2;  // regularizer offsets: every shift of a (2r+1)^2 window
  bool reweight = true;   // reassemble weights from x at the start of every iteration

  void validate() const;
  double cg_tolerance(std::size_t hr_pixels) const { return cg_tol > 0.0 ? cg_tol : 1e-8 * double(hr_pixels); }
};

// A stack together with its forward model.
class SrProblem {
 public:
  SrProblem(LightFieldStack stack, BlurKernel kernel, AdjointMode mode = AdjointMode::Exact);

  const LightFieldStack& stack() const noexcept { return stack_; }
  const ForwardModel& model() const noexcept { return model_; }
  std::span<const ImageGrid> observations() const noexcept { return observations_; }
  const Dimensions& dimensions() const noexcept { return model_.dimensions(); }

 private:
  LightFieldStack stack_;
  ForwardModel model_;
  std::vector<ImageGrid> observations_;
};

struct CostBreakdown {
  double total = 0.0;
  double data_l1 = 0.0;  // sum_k |A_k x - y_k|_1 (unweighted)
  double data_l2 = 0.0;  // sum_k |A_k x - y_k|_2^2 (unweighted)
  double reg = 0.0;      // sum_d |W_d (x - S_d x)|_1
};

// J = lambda1 * data_l1 + lambda2 * data_l2 + reg. Counts one forward CU when a counter is given.
CostBreakdown cost(const ImageGrid& x, const SrProblem& problem, const SolverConfig& cfg, const RegWeightSet& w,
                   CuCounter* counter = nullptr);
// Same, from an already computed forward pass.
CostBreakdown cost(const StackedImages& fx, std::span<const ImageGrid> observations, const SolverConfig& cfg);

inline double soft_threshold(double u, double t) noexcept {
  const double m = std::abs(u) - t;
  return m > 0.0 ? (u > 0.0 ? m : -m) : 0.0;
}
// Elementwise soft threshold at t.
std::vector<double> prox_l1(std::span<const double> u, double t);
void prox_l1_inplace(ImageGrid& u, double t);

struct CgResult {
  ImageGrid x;
  int iterations = 0;
  bool breakdown = false;
  std::vector<double> residuals;  // <r,r> before the first step and after every step
};

// Conjugate gradient on G^T G dx = -v started from x_init, where v is the gradient of the
// x-step least-squares objective at x_init. Stops after max_iterations steps or once
// <r,r> < tol. Each step costs one forward and one adjoint CU.
CgResult xstep_cg(const ImageGrid& v, const ImageGrid& x_init, const ForwardModel& model, const RegWeightSet& w,
                  NormalCoefficients coeffs, int max_iterations, double tol, CuCounter* counter);

struct TraceRow {
  int iter = 0;
  CostBreakdown cost;
  std::uint64_t cu = 0;
  double psnr = 0.0;  // NaN when no ground truth is attached
  double ms = 0.0;
  double primal_residual = 0.0;  // ADMM: |F x - z - b'|_2 with the iteration's weights; 0 for GD
};

struct ConvergenceTrace {
  std::vector<TraceRow> rows;

  // Header `iter,cost,data_l1,data_l2,reg,cu,psnr,ms`. Set include_time = false for
  // byte-reproducible files (ms written as 0).
  void write_csv(std::ostream& os, bool include_time = true) const;
  // Cost of the last row whose CU count does not exceed `cu`.
  double cost_at_cu(std::uint64_t cu) const;
};

struct SolveOptions {
  std::optional<ImageGrid> x0;                 // defaults to initial_estimate()
  const ImageGrid* ground_truth = nullptr;     // enables the PSNR column
  int psnr_crop = 8;
  std::optional<RegWeightSet> fixed_weights;   // used for every iteration when reweight is off
  std::uint64_t cu_budget = 0;                 // stop before an iteration once reached; 0 = no limit

  bool budget_spent(const CuCounter& cu) const noexcept { return cu_budget > 0 && cu.total() >= cu_budget; }
};

struct SolveResult {
  ImageGrid x;
  ConvergenceTrace trace;
  CuCounter cu;
  std::vector<RegWeightSet> weight_history;  // filled when record_weights is requested
};

// Bicubic upsampling of the reference view onto the HR grid.
ImageGrid initial_estimate(const LightFieldStack& stack);

// Restructured ADMM with scaled dual: z- and w-steps first, then the CG x-step.
SolveResult admm_solve(const SrProblem& problem, const SolverConfig& cfg, const SolveOptions& options = {},
                       bool record_weights = false);

// Subgradient descent baseline; Armijo backtracking (c = 1e-4, halving) when line_search.
SolveResult gd_solve(const SrProblem& problem, const SolverConfig& cfg, double step, bool line_search,
                     const SolveOptions& options = {});

// Largest eigenvalue of A^T A by power iteration (unweighted data stack).
double estimate_data_lipschitz(const ForwardModel& model, int iterations = 50);

// Fixed step used by the GD baselines when none is given: 1 / (2 lambda2 |A^T A|).
double default_gd_step(const SrProblem& problem, const SolverConfig& cfg);

}  // namespace lfsr
