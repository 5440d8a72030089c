#include "lfsr/solver.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <ostream>
#include <string>

#include "lfsr/metrics.hpp"
#include "lfsr/resample.hpp"

namespace lfsr {

void SolverConfig::validate() const {
  if (!(lambda1 >= 0.0) || !(lambda2 >= 0.0)) throw RangeError("lambda1 and lambda2 must be >= 0");
  if (!(lambda1 + lambda2 > 0.0)) throw RangeError("lambda1 + lambda2 must be positive");
  if (!(penalty > 0.0) || !std::isfinite(penalty)) throw RangeError("ADMM penalty must be positive");
  if (iterations < 0) throw RangeError("iteration count must be >= 0");
  if (cg_iterations < 1) throw RangeError("CG iteration count must be >= 1");
  if (!(cg_tol >= 0.0)) throw RangeError("CG tolerance must be >= 0 (0 selects the default)");
  if (window_radius < 0) throw RangeError("window radius must be >= 0");
  weights.validate();
}

SrProblem::SrProblem(LightFieldStack stack, BlurKernel kernel, AdjointMode mode)
    : stack_(std::move(stack)), model_(ForwardModel::from_stack(stack_, std::move(kernel), mode)) {
  observations_.reserve(stack_.views.size());
  for (const auto& v : stack_.views) observations_.push_back(v.image);
}

// ---------------------------------------------------------------------------------------------
// Cost

CostBreakdown cost(const StackedImages& fx, std::span<const ImageGrid> observations, const SolverConfig& cfg) {
  if (fx.data.size() != observations.size()) throw DimensionError("cost: one observation per view required");
  CostBreakdown c;
  for (std::size_t k = 0; k < observations.size(); ++k) {
    require_same_shape(fx.data[k], observations[k], "cost");
    auto a = fx.data[k].samples();
    auto y = observations[k].samples();
    for (std::size_t i = 0; i < a.size(); ++i) {
      const double r = a[i] - y[i];
      c.data_l1 += std::fabs(r);
      c.data_l2 += r * r;
    }
  }
  for (const auto& g : fx.reg)
    for (double v : g.samples()) c.reg += std::fabs(v);
  c.total = cfg.lambda1 * c.data_l1 + cfg.lambda2 * c.data_l2 + c.reg;
  return c;
}

CostBreakdown cost(const ImageGrid& x, const SrProblem& problem, const SolverConfig& cfg, const RegWeightSet& w,
                   CuCounter* counter) {
  return cost(forward_pass(x, problem.model(), w, counter), problem.observations(), cfg);
}

// ---------------------------------------------------------------------------------------------
// Prox

std::vector<double> prox_l1(std::span<const double> u, double t) {
  if (!(t >= 0.0)) throw RangeError("prox threshold must be >= 0");
  std::vector<double> out(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) out[i] = soft_threshold(u[i], t);
  return out;
}

void prox_l1_inplace(ImageGrid& u, double t) {
  for (double& v : u.samples()) v = soft_threshold(v, t);
}

// ---------------------------------------------------------------------------------------------
// x-step

CgResult xstep_cg(const ImageGrid& v, const ImageGrid& x_init, const ForwardModel& model, const RegWeightSet& w,
                  NormalCoefficients coeffs, int max_iterations, double tol, CuCounter* counter) {
  require_same_shape(v, x_init, "xstep_cg");
  CgResult res{x_init, 0, false, {}};
  ImageGrid r = v;
  for (double& s : r.samples()) s = -s;
  ImageGrid p = r;
  double pi = dot(r, r);
  res.residuals.push_back(pi);
  while (res.iterations < max_iterations && pi >= tol) {
    const ImageGrid q = apply_normal(p, model, w, coeffs, counter);
    const double curvature = dot(p, q);
    if (!std::isfinite(curvature) || curvature <= 0.0) {
      res.breakdown = true;
      break;
    }
    const double alpha = pi / curvature;
    axpy(alpha, p, res.x);
    axpy(-alpha, q, r);
    const double pi_next = dot(r, r);
    const double beta = pi_next / pi;
    auto ps = p.samples();
    auto rs = r.samples();
    for (std::size_t i = 0; i < ps.size(); ++i) ps[i] = rs[i] + beta * ps[i];
    pi = pi_next;
    ++res.iterations;
    res.residuals.push_back(pi);
  }
  return res;
}

// ---------------------------------------------------------------------------------------------
// Trace

void ConvergenceTrace::write_csv(std::ostream& os, bool include_time) const {
  os << "iter,cost,data_l1,data_l2,reg,cu,psnr,ms\n";
  const auto old_precision = os.precision(17);
  for (const auto& r : rows) {
    os << r.iter << ',' << r.cost.total << ',' << r.cost.data_l1 << ',' << r.cost.data_l2 << ',' << r.cost.reg
       << ',' << r.cu << ',';
    if (std::isnan(r.psnr))
      os << "nan";
    else
      os << r.psnr;
    os << ',' << (include_time ? r.ms : 0.0) << '\n';
  }
  os.precision(old_precision);
}

double ConvergenceTrace::cost_at_cu(std::uint64_t cu) const {
  double c = std::numeric_limits<double>::quiet_NaN();
  for (const auto& r : rows)
    if (r.cu <= cu) c = r.cost.total;
  return c;
}

// ---------------------------------------------------------------------------------------------
// Solvers

ImageGrid initial_estimate(const LightFieldStack& stack) {
  const Dimensions dims = stack.dimensions();
  return bicubic_resample(stack.reference_view().image, dims.hr_width(), dims.hr_height());
}

namespace {

using Clock = std::chrono::steady_clock;

class WeightSource {
 public:
  WeightSource(const SrProblem& problem, const SolverConfig& cfg, const SolveOptions& options, const ImageGrid& x0)
      : assembler_(problem.stack(), OffsetSet::window(cfg.window_radius), cfg.weights), reweight_(cfg.reweight) {
    if (!reweight_) {
      fixed_ = options.fixed_weights ? *options.fixed_weights : assembler_(x0);
      const Dimensions& d = problem.dimensions();
      for (const auto& m : fixed_.maps)
        if (m.width() != d.hr_width() || m.height() != d.hr_height())
          throw DimensionError("fixed weights do not match the high-resolution grid");
    }
  }

  RegWeightSet at(const ImageGrid& x) const { return reweight_ ? assembler_(x) : fixed_; }
  std::size_t offset_count() const { return reweight_ ? assembler_.offsets().size() : fixed_.offsets.size(); }

 private:
  WeightAssembler assembler_;
  bool reweight_;
  RegWeightSet fixed_;
};

void require_finite(const ImageGrid& g, const char* what, int iteration) {
  if (!g.all_finite())
    throw DivergenceError(std::string(what) + " became non-finite at iteration " + std::to_string(iteration),
                          iteration);
}

void require_finite(const std::vector<ImageGrid>& gs, const char* what, int iteration) {
  for (const auto& g : gs) require_finite(g, what, iteration);
}

class Tracer {
 public:
  Tracer(const SrProblem& problem, const SolverConfig& cfg, const SolveOptions& options, const WeightSource& weights)
      : problem_(problem), cfg_(cfg), options_(options), weights_(weights), start_(Clock::now()) {}

  TraceRow row(int iter, const ImageGrid& x, const CuCounter& cu) const {
    TraceRow r;
    r.iter = iter;
    r.cost = cost(x, problem_, cfg_, weights_.at(x));
    if (!std::isfinite(r.cost.total))
      throw DivergenceError("cost became non-finite at iteration " + std::to_string(iter), iter);
    r.cu = cu.total();
    r.psnr = options_.ground_truth ? psnr(x, *options_.ground_truth, options_.psnr_crop)
                                   : std::numeric_limits<double>::quiet_NaN();
    r.ms = std::chrono::duration<double, std::milli>(Clock::now() - start_).count();
    return r;
  }

 private:
  const SrProblem& problem_;
  const SolverConfig& cfg_;
  const SolveOptions& options_;
  const WeightSource& weights_;
  Clock::time_point start_;
};

ImageGrid starting_point(const SrProblem& problem, const SolveOptions& options) {
  if (!options.x0) return initial_estimate(problem.stack());
  const Dimensions& d = problem.dimensions();
  if (options.x0->width() != d.hr_width() || options.x0->height() != d.hr_height())
    throw DimensionError("initial estimate is not on the high-resolution grid");
  return *options.x0;
}

double squared_norm(const std::vector<ImageGrid>& gs) {
  double s = 0.0;
  for (const auto& g : gs) s += dot(g, g);
  return s;
}

}  // namespace

SolveResult admm_solve(const SrProblem& problem, const SolverConfig& cfg, const SolveOptions& options,
                       bool record_weights) {
  cfg.validate();
  const ForwardModel& model = problem.model();
  const auto ys = problem.observations();
  const std::size_t views = ys.size();

  SolveResult res;
  res.x = starting_point(problem, options);
  const WeightSource weights(problem, cfg, options, res.x);
  const Tracer tracer(problem, cfg, options, weights);
  res.trace.rows.push_back(tracer.row(0, res.x, res.cu));

  const double threshold = 1.0 / cfg.penalty;
  const double half_penalty = 0.5 * cfg.penalty;
  const NormalCoefficients coeffs = NormalCoefficients::from(cfg.lambda1, cfg.lambda2, cfg.penalty);
  const double tol = cfg.cg_tolerance(problem.dimensions().hr_pixels());

  // Scaled dual, split as (data slots, regularizer slots).
  StackedImages dual;
  for (const auto& y : ys) dual.data.emplace_back(y.width(), y.height());
  const int hw = problem.dimensions().hr_width();
  const int hh = problem.dimensions().hr_height();
  for (std::size_t d = 0; d < weights.offset_count(); ++d) dual.reg.emplace_back(hw, hh);

  for (int n = 1; n <= cfg.iterations && !options.budget_spent(res.cu); ++n) {
    const RegWeightSet w = weights.at(res.x);
    if (record_weights) res.weight_history.push_back(w);

    StackedImages fx = forward_pass(res.x, model, w, &res.cu);

    // a = A x - y (raw); u = F x - b' + w; z = prox(u); w' = u - z; f = 2 w' - w.
    std::vector<ImageGrid> residual(views);
    std::vector<ImageGrid> data_rhs(views);
    StackedImages z;
    z.data.resize(views);
    z.reg.resize(dual.reg.size());
    std::vector<ImageGrid> f_reg(dual.reg.size());
    for (std::size_t k = 0; k < views; ++k) {
      ImageGrid a = std::move(fx.data[k]);
      axpy(-1.0, ys[k], a);
      ImageGrid u = dual.data[k];
      axpy(cfg.lambda1, a, u);
      ImageGrid zk = u;
      prox_l1_inplace(zk, threshold);
      ImageGrid w_next = u;
      axpy(-1.0, zk, w_next);
      // A^T slot of v: lambda2 * a + (theta/2) * lambda1 * f_data.
      ImageGrid rhs = a;
      for (double& s : rhs.samples()) s *= cfg.lambda2;
      axpy(2.0 * half_penalty * cfg.lambda1, w_next, rhs);
      axpy(-half_penalty * cfg.lambda1, dual.data[k], rhs);
      data_rhs[k] = std::move(rhs);
      z.data[k] = std::move(zk);
      dual.data[k] = std::move(w_next);
      residual[k] = std::move(a);
    }
    for (std::size_t d = 0; d < dual.reg.size(); ++d) {
      ImageGrid u = std::move(fx.reg[d]);
      axpy(1.0, dual.reg[d], u);
      ImageGrid zd = u;
      prox_l1_inplace(zd, threshold);
      ImageGrid w_next = u;
      axpy(-1.0, zd, w_next);
      ImageGrid f = w_next;
      for (double& s : f.samples()) s *= 2.0;
      axpy(-1.0, dual.reg[d], f);
      f_reg[d] = std::move(f);
      z.reg[d] = std::move(zd);
      dual.reg[d] = std::move(w_next);
    }
    require_finite(z.data, "z", n);
    require_finite(z.reg, "z", n);
    require_finite(dual.data, "w", n);
    require_finite(dual.reg, "w", n);

    const ImageGrid v = adjoint_pass(data_rhs, 1.0, f_reg, half_penalty, model, w, &res.cu);
    res.x = xstep_cg(v, res.x, model, w, coeffs, cfg.cg_iterations, tol, &res.cu).x;
    require_finite(res.x, "x", n);

    TraceRow row = tracer.row(n, res.x, res.cu);
    // Primal residual |F x - z - b'| under the weights of this iteration.
    const StackedImages fx_new = forward_pass(res.x, model, w, nullptr);
    std::vector<ImageGrid> gap_data(views), gap_reg(dual.reg.size());
    for (std::size_t k = 0; k < views; ++k) {
      ImageGrid g = fx_new.data[k];
      axpy(-1.0, ys[k], g);
      for (double& s : g.samples()) s *= cfg.lambda1;
      axpy(-1.0, z.data[k], g);
      gap_data[k] = std::move(g);
    }
    for (std::size_t d = 0; d < dual.reg.size(); ++d) {
      ImageGrid g = fx_new.reg[d];
      axpy(-1.0, z.reg[d], g);
      gap_reg[d] = std::move(g);
    }
    row.primal_residual = std::sqrt(squared_norm(gap_data) + squared_norm(gap_reg));
    res.trace.rows.push_back(row);
  }
  return res;
}

SolveResult gd_solve(const SrProblem& problem, const SolverConfig& cfg, double step, bool line_search,
                     const SolveOptions& options) {
  cfg.validate();
  if (!(step >= 0.0) || !std::isfinite(step)) throw RangeError("gradient step must be finite and >= 0");
  const ForwardModel& model = problem.model();
  const auto ys = problem.observations();

  SolveResult res;
  res.x = starting_point(problem, options);
  const WeightSource weights(problem, cfg, options, res.x);
  const Tracer tracer(problem, cfg, options, weights);
  res.trace.rows.push_back(tracer.row(0, res.x, res.cu));

  constexpr double kArmijo = 1e-4;
  constexpr int kMaxHalvings = 30;
  const auto sign = [](double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); };

  for (int n = 1; n <= cfg.iterations && !options.budget_spent(res.cu); ++n) {
    const RegWeightSet w = weights.at(res.x);
    StackedImages fx = forward_pass(res.x, model, w, &res.cu);
    const double j0 = cost(fx, ys, cfg).total;

    std::vector<ImageGrid> data_grad(ys.size());
    for (std::size_t k = 0; k < ys.size(); ++k) {
      ImageGrid g = std::move(fx.data[k]);
      axpy(-1.0, ys[k], g);
      for (double& s : g.samples()) s = cfg.lambda1 * sign(s) + 2.0 * cfg.lambda2 * s;
      data_grad[k] = std::move(g);
    }
    for (auto& g : fx.reg)
      for (double& s : g.samples()) s = sign(s);
    const ImageGrid grad = adjoint_pass(data_grad, 1.0, fx.reg, 1.0, model, w, &res.cu);
    require_finite(grad, "gradient", n);

    if (!line_search) {
      axpy(-step, grad, res.x);
    } else {
      const double g2 = dot(grad, grad);
      double t = step;
      for (int h = 0; h <= kMaxHalvings; ++h, t *= 0.5) {
        ImageGrid trial = res.x;
        axpy(-t, grad, trial);
        const double jt = cost(trial, problem, cfg, w, &res.cu).total;
        if (jt <= j0 - kArmijo * t * g2) {
          res.x = std::move(trial);
          break;
        }
      }
    }
    require_finite(res.x, "x", n);
    res.trace.rows.push_back(tracer.row(n, res.x, res.cu));
  }
  return res;
}

double estimate_data_lipschitz(const ForwardModel& model, int iterations) {
  const Dimensions& d = model.dimensions();
  // Deterministic, non-constant start vector.
  ImageGrid x(d.hr_width(), d.hr_height());
  auto s = x.samples();
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = 1.0 + 0.5 * std::sin(0.7 * double(i) + 0.3);
  double lambda = 0.0;
  for (int it = 0; it < iterations; ++it) {
    const double norm = std::sqrt(dot(x, x));
    if (norm == 0.0) return 0.0;
    for (double& v : x.samples()) v /= norm;
    ImageGrid y = apply_A_adjoint(apply_A(x, model), model);
    lambda = dot(x, y);
    x = std::move(y);
  }
  return lambda;
}

double default_gd_step(const SrProblem& problem, const SolverConfig& cfg) {
  const double l = estimate_data_lipschitz(problem.model());
  if (cfg.lambda2 > 0.0) return 1.0 / (2.0 * cfg.lambda2 * l);
  return 1e-2 / ((cfg.lambda1 + 1.0) * l);
}

}  // namespace lfsr
