#include "lfsr/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "lfsr/color.hpp"
#include "lfsr/degrade.hpp"
#include "lfsr/image_io.hpp"
#include "lfsr/metrics.hpp"
#include "lfsr/parallel.hpp"
#include "lfsr/resample.hpp"
#include "lfsr/scene.hpp"
#include "lfsr/solver.hpp"
#include "lfsr/stack_io.hpp"

namespace fs = std::filesystem;

namespace lfsr::cli {

namespace {

// Thrown for flag values that parse but violate a domain invariant.
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string format_number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

int parse_grid(const std::string& text) {
  // Accepts "N" or "NxN".
  const auto x = text.find('x');
  try {
    if (x == std::string::npos) return std::stoi(text);
    const int a = std::stoi(text.substr(0, x));
    const int b = std::stoi(text.substr(x + 1));
    if (a != b) throw ValidationError("angular grid must be square, got " + text);
    return a;
  } catch (const std::invalid_argument&) {
    throw ValidationError("cannot parse grid size '" + text + "'");
  }
}

BlurKernel read_kernel_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open kernel file '" + path.string() + "'");
  std::vector<double> taps;
  std::string tok;
  while (in >> tok) {
    if (tok.starts_with('#')) {
      std::getline(in, tok);
      continue;
    }
    try {
      taps.push_back(std::stod(tok));
    } catch (const std::exception&) {
      throw IoError("malformed kernel value '" + tok + "' in '" + path.string() + "'");
    }
  }
  const int side = static_cast<int>(std::lround(std::sqrt(double(taps.size()))));
  if (side * side != static_cast<int>(taps.size()) || side % 2 == 0)
    throw IoError("kernel file '" + path.string() + "' must hold an odd square number of taps");
  return BlurKernel(side / 2, std::move(taps));
}

// "auto" picks the sensor Gaussian for scale >= 2 and the identity for scale 1.
BlurKernel make_kernel(const std::string& spec, int scale) {
  if (spec == "auto") return scale >= 2 ? gaussian_psf(scale) : BlurKernel::identity();
  if (spec == "gaussian") return gaussian_psf(scale);
  if (spec == "identity") return BlurKernel::identity();
  return read_kernel_file(spec);
}

ImageGrid luma_of(const std::vector<ImageGrid>& channels) {
  if (channels.size() == 1) return channels[0];
  return luma(ColorImage{ColorSpace::Rgb, {channels[0], channels[1], channels[2]}});
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory '" + dir.string() + "': " + ec.message());
}

// Every option of a subcommand with its resolved value (given or default).
void write_provenance(const fs::path& dir, const CLI::App& sub) {
  nlohmann::ordered_json j;
  j["tool"] = "lfsr";
  j["version"] = kVersion;
  j["command"] = sub.get_name();
  std::map<std::string, std::string> resolved;
  for (const CLI::Option* opt : sub.get_options()) {
    const std::string name = opt->get_single_name();
    if (name == "help" || name == "config" || name.empty()) continue;
    std::string value;
    if (opt->count() > 0) {
      const auto& res = opt->results();
      for (std::size_t i = 0; i < res.size(); ++i) value += (i ? " " : "") + res[i];
    } else {
      value = opt->get_default_str();
    }
    resolved[name] = value;
  }
  j["options"] = resolved;
  write_text(dir / "run.json", j.dump(2) + "\n");
}

void write_trace(const fs::path& path, const ConvergenceTrace& trace, bool timing) {
  std::ostringstream os;
  trace.write_csv(os, timing);
  write_text(path, os.str());
}

// ---------------------------------------------------------------------------------------------

struct SolverFlags {
  SolverConfig cfg;
  std::string adjoint = "exact";
  std::string kernel = "auto";
  unsigned threads = 1;

  void add_to(CLI::App* sub) {
    sub->add_option("--lambda1", cfg.lambda1, "l1 data-term weight");
    sub->add_option("--lambda2", cfg.lambda2, "squared-l2 data-term weight");
    sub->add_option("--theta", cfg.penalty, "ADMM penalty");
    sub->add_option("--iterations", cfg.iterations, "outer iterations (ADMM or GD)");
    sub->add_option("--cg-iterations", cfg.cg_iterations, "maximum CG steps per x-step");
    sub->add_option("--cg-tol", cfg.cg_tol, "CG stop threshold on <r,r>; 0 = 1e-8 * HR pixels");
    sub->add_option("--adjoint", adjoint, "warp adjoint: exact or paper")->check(CLI::IsMember({"exact", "paper"}));
    sub->add_option("--window", cfg.window_radius, "regularizer window radius");
    sub->add_option("--sigma-s", cfg.weights.sigma_spatial, "spatial weight falloff");
    sub->add_option("--sigma-e", cfg.weights.sigma_edge, "edge weight falloff");
    sub->add_option("--sigma-o1", cfg.weights.sigma_boundary, "occlusion boundary falloff");
    sub->add_option("--sigma-o2", cfg.weights.sigma_projection, "projection error falloff");
    sub->add_option("--reweight", cfg.reweight, "reassemble weights every iteration (true/false)");
    sub->add_option("--kernel", kernel, "blur kernel: auto, gaussian, identity or a text file of taps");
    sub->add_option("--threads", threads, "worker threads (0 = all cores)");
  }

  void finalize() {
    cfg.adjoint_mode = parse_adjoint_mode(adjoint);
    cfg.validate();
    set_thread_count(threads);
  }
};

struct LoadedStack {
  ChannelStack channels;
  LightFieldStack luma;
};

LoadedStack load_stack(const std::string& dir) {
  LoadedStack s{read_stack(dir), {}};
  s.luma = luma_stack(s.channels);
  return s;
}

std::optional<ImageGrid> load_ground_truth(const std::string& path, const Dimensions& dims) {
  if (path.empty()) return std::nullopt;
  ImageGrid gt = luma_of(read_pnm(path).channels);
  if (gt.width() != dims.hr_width() || gt.height() != dims.hr_height())
    throw DimensionError("ground truth is " + std::to_string(gt.width()) + "x" + std::to_string(gt.height()) +
                         ", expected the HR size " + std::to_string(dims.hr_width()) + "x" +
                         std::to_string(dims.hr_height()));
  return gt;
}

// Writes the HR estimate; color stacks get bicubic chroma from the reference view.
fs::path write_estimate(const fs::path& dir, const ImageGrid& y, const ChannelStack& stack, int bits) {
  const auto& ref = stack.views.at(stack.reference);
  if (ref.channels.size() == 1) {
    const fs::path p = dir / "out.pgm";
    write_pgm(p, clamp01(y), bits);
    return p;
  }
  const ColorImage lr = ycbcr_from_rgb(ColorImage{ColorSpace::Rgb, {ref.channels[0], ref.channels[1], ref.channels[2]}});
  ColorImage hr{ColorSpace::YCbCr,
                {clamp01(y), bicubic_resample(lr.channels[1], y.width(), y.height()),
                 bicubic_resample(lr.channels[2], y.width(), y.height())}};
  const fs::path p = dir / "out.ppm";
  write_ppm(p, rgb_from_ycbcr(hr), bits);
  return p;
}

// ---------------------------------------------------------------------------------------------

struct GenSceneArgs {
  SceneSettings scene;
  bool gray = false;
  std::string out;
};

void cmd_gen_scene(const GenSceneArgs& a, const CLI::App& sub, std::ostream& out) {
  const SyntheticScene s = generate_scene(a.scene);
  ensure_dir(a.out);
  const fs::path dir(a.out);
  const fs::path img = dir / (a.gray ? "gt.pgm" : "gt.ppm");
  if (a.gray)
    write_pgm(img, luma(s.color), 16);
  else
    write_ppm(img, s.color, 16);
  write_pfm(dir / "disparity.pfm", s.disparity.grid());
  write_provenance(dir, sub);
  out << "wrote " << img.string() << " and " << (dir / "disparity.pfm").string() << '\n';
}

struct DegradeArgs {
  std::string input, disparity, out, grid = "3", pattern = "star", kernel = "auto";
  int arm = -1;
  std::size_t views = 0;
  int scale = 2;
  int bits = 16;
  NoiseParams noise;
  unsigned threads = 1;
};

void cmd_degrade(const DegradeArgs& a, const CLI::App& sub, std::ostream& out) {
  set_thread_count(a.threads);
  DegradeSettings s;
  s.grid_size = parse_grid(a.grid);
  s.pattern = parse_view_pattern(a.pattern);
  s.arm = a.arm < 0 ? s.grid_size / 2 : a.arm;
  s.max_views = a.views;
  s.scale = a.scale;
  s.kernel = make_kernel(a.kernel, a.scale);
  s.noise = a.noise;
  s.noise.validate();

  const PnmImage hr = read_pnm(a.input);
  const DisparityMap gt(read_pfm(a.disparity));
  const ChannelStack stack = degrade_lightfield(hr.channels, gt, s);
  write_stack(a.out, stack, a.bits);
  write_provenance(a.out, sub);
  out << "wrote " << stack.views.size() << " views to " << a.out << '\n';
}

struct SrArgs {
  SolverFlags solver;
  std::string stack, out, gt, method = "admm";
  double step = 0.0;
  int crop = kDefaultCrop;
  int bits = 8;
  bool timing = true;
};

SolveResult run_solver(const std::string& method, const SrProblem& problem, const SolverConfig& cfg, double step,
                       const SolveOptions& opt) {
  if (method == "admm") return admm_solve(problem, cfg, opt);
  const double s = step > 0.0 ? step : default_gd_step(problem, cfg);
  return gd_solve(problem, cfg, s, method == "gd-ls", opt);
}

void cmd_sr(SrArgs& a, const CLI::App& sub, std::ostream& out) {
  a.solver.finalize();
  const LoadedStack stack = load_stack(a.stack);
  const SrProblem problem(stack.luma, make_kernel(a.solver.kernel, stack.luma.scale), a.solver.cfg.adjoint_mode);
  const auto gt = load_ground_truth(a.gt, problem.dimensions());
  SolveOptions opt;
  opt.ground_truth = gt ? &*gt : nullptr;
  opt.psnr_crop = a.crop;
  const SolveResult res = run_solver(a.method, problem, a.solver.cfg, a.step, opt);

  ensure_dir(a.out);
  const fs::path img = write_estimate(a.out, res.x, stack.channels, a.bits);
  write_trace(fs::path(a.out) / "trace.csv", res.trace, a.timing);
  write_provenance(a.out, sub);
  const TraceRow& last = res.trace.rows.back();
  out << "final_cost " << format_number(last.cost.total) << '\n';
  out << "cu " << last.cu << '\n';
  if (gt) {
    out << "psnr_initial " << format_number(res.trace.rows.front().psnr) << '\n';
    out << "psnr " << format_number(last.psnr) << '\n';
  }
  out << "wrote " << img.string() << '\n';
}

struct BenchArgs {
  SolverFlags solver;
  std::string stack, out, gt;
  double step = 0.0;
  std::uint64_t budget = 500;
  int crop = kDefaultCrop;
  bool timing = true;
};

void cmd_bench(BenchArgs& a, const CLI::App& sub, std::ostream& out) {
  a.solver.finalize();
  const LoadedStack stack = load_stack(a.stack);
  const SrProblem problem(stack.luma, make_kernel(a.solver.kernel, stack.luma.scale), a.solver.cfg.adjoint_mode);
  const auto gt = load_ground_truth(a.gt, problem.dimensions());
  SolveOptions opt;
  opt.x0 = initial_estimate(problem.stack());
  opt.ground_truth = gt ? &*gt : nullptr;
  opt.psnr_crop = a.crop;
  opt.cu_budget = a.budget;

  SolverConfig cfg = a.solver.cfg;
  cfg.iterations = std::numeric_limits<int>::max();
  const double step = a.step > 0.0 ? a.step : default_gd_step(problem, cfg);

  std::vector<std::pair<std::string, SolveResult>> runs;
  runs.emplace_back("gd", gd_solve(problem, cfg, step, false, opt));
  runs.emplace_back("gd-ls", gd_solve(problem, cfg, step, true, opt));
  for (int k : {5, 10}) {
    SolverConfig c = cfg;
    c.cg_iterations = k;
    runs.emplace_back("admm-k" + std::to_string(k), admm_solve(problem, c, opt));
  }

  ensure_dir(a.out);
  std::set<std::uint64_t> cus;
  for (const auto& [name, res] : runs) {
    write_trace(fs::path(a.out) / (name + ".csv"), res.trace, a.timing);
    for (const auto& r : res.trace.rows) cus.insert(r.cu);
  }
  std::ostringstream merged;
  merged.precision(17);
  merged << "cu";
  for (const auto& [name, res] : runs) merged << ',' << name;
  merged << '\n';
  for (std::uint64_t cu : cus) {
    merged << cu;
    for (const auto& [name, res] : runs) merged << ',' << res.trace.cost_at_cu(cu);
    merged << '\n';
  }
  write_text(fs::path(a.out) / "convergence.csv", merged.str());
  write_provenance(a.out, sub);
  for (const auto& [name, res] : runs)
    out << name << " final_cost " << format_number(res.trace.rows.back().cost.total) << " cu "
        << res.trace.rows.back().cu << '\n';
}

struct EvalArgs {
  std::string reference;
  std::vector<std::string> tests;
  int crop = kDefaultCrop;
};

void cmd_eval(const EvalArgs& a, std::ostream& out) {
  const ImageGrid ref = luma_of(read_pnm(a.reference).channels);
  out << "psnr_db,ssim\n";
  for (const auto& t : a.tests) {
    const ImageGrid img = luma_of(read_pnm(t).channels);
    const QualityReport q = evaluate(ref, img, a.crop);
    out << format_number(q.psnr) << ',' << format_number(q.ssim) << '\n';
  }
}

struct WeightsArgs {
  SolverFlags solver;
  std::string stack, image, out;
  int iterations = 0;
};

void cmd_weights(WeightsArgs& a, const CLI::App& sub, std::ostream& out) {
  a.solver.finalize();
  const LoadedStack stack = load_stack(a.stack);
  ImageGrid x;
  if (!a.image.empty()) {
    x = luma_of(read_pnm(a.image).channels);
    const Dimensions d = stack.luma.dimensions();
    if (x.width() != d.hr_width() || x.height() != d.hr_height())
      throw DimensionError("--image must be on the HR grid of the stack");
  } else {
    x = initial_estimate(stack.luma);
  }
  if (a.iterations > 0) {
    const SrProblem problem(stack.luma, make_kernel(a.solver.kernel, stack.luma.scale), a.solver.cfg.adjoint_mode);
    SolverConfig cfg = a.solver.cfg;
    cfg.iterations = a.iterations;
    SolveOptions opt;
    opt.x0 = x;
    x = admm_solve(problem, cfg, opt).x;
  }
  const RegWeightSet w =
      assemble_weights(x, stack.luma, OffsetSet::window(a.solver.cfg.window_radius), a.solver.cfg.weights);
  ensure_dir(a.out);
  const fs::path dir(a.out);
  write_pgm(dir / "weight_shared.pgm", w.shared, 16);
  write_pfm(dir / "weight_shared.pfm", w.shared);
  for (std::size_t i = 0; i < w.offsets.size(); ++i) {
    const std::string stem = "weight_" + std::to_string(w.offsets[i].dx) + "_" + std::to_string(w.offsets[i].dy);
    write_pgm(dir / (stem + ".pgm"), w.maps[i], 16);
    write_pfm(dir / (stem + ".pfm"), w.maps[i]);
  }
  write_provenance(dir, sub);
  out << "wrote " << w.offsets.size() << " weight maps to " << a.out << '\n';
}

// ---------------------------------------------------------------------------------------------

// Inserts config-file tokens right after the subcommand name so explicit flags win.
std::vector<std::string> expand_config(const std::vector<std::string>& args) {
  std::vector<std::string> out;
  std::string config;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      config = args[++i];
      continue;
    }
    if (args[i].starts_with("--config=")) {
      config = args[i].substr(9);
      continue;
    }
    out.push_back(args[i]);
  }
  if (config.empty() || out.empty()) return out;
  auto tokens = config_tokens(config);
  out.insert(out.begin() + 1, tokens.begin(), tokens.end());
  return out;
}

}  // namespace

std::vector<std::string> config_tokens(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file '" + path + "'");
  std::vector<std::string> tokens;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      if (b == std::string::npos) return std::string{};
      const auto e = s.find_last_not_of(" \t\r");
      return s.substr(b, e - b + 1);
    };
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw CLI::ValidationError("config line " + std::to_string(line_no) + " is not `key = value`: " + line);
    std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    std::replace(key.begin(), key.end(), '_', '-');
    if (key.empty()) throw CLI::ValidationError("config line " + std::to_string(line_no) + " has an empty key");
    tokens.push_back("--" + key + "=" + value);
  }
  return tokens;
}

int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Light field super-resolution: degrade, solve, evaluate and benchmark.\n"
               "Precedence: command-line flags override --config file keys, which override defaults.",
               "lfsr"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast)->always_capture_default();
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);
  const std::string config_help =
      "flat `key = value` file; keys are long flag names. Flags given on the command line override it";

  GenSceneArgs gen;
  auto* gen_cmd = app.add_subcommand("gen-scene", "write a synthetic ground-truth scene and its disparity");
  gen_cmd->add_option("--width", gen.scene.width, "HR width");
  gen_cmd->add_option("--height", gen.scene.height, "HR height");
  gen_cmd->add_option("--background-disparity", gen.scene.background_disparity, "disparity of the background");
  gen_cmd->add_option("--foreground-disparity", gen.scene.foreground_disparity, "disparity of the disk");
  gen_cmd->add_option("--seed", gen.scene.seed, "glyph layout seed");
  gen_cmd->add_option("--gray", gen.gray, "write a gray (luma) scene instead of RGB");
  gen_cmd->add_option("--out", gen.out, "output directory")->required();
  gen_cmd->add_option("--config", config_help);

  DegradeArgs deg;
  auto* deg_cmd = app.add_subcommand("degrade", "simulate a degraded LR light field stack");
  deg_cmd->add_option("--input", deg.input, "HR reference view (PGM/PPM)")->required();
  deg_cmd->add_option("--disparity", deg.disparity, "ground-truth disparity (PFM)")->required();
  deg_cmd->add_option("--grid", deg.grid, "angular grid, N or NxN (odd)");
  deg_cmd->add_option("--pattern", deg.pattern, "view pattern")->check(CLI::IsMember({"full", "star", "cross"}));
  deg_cmd->add_option("--arm", deg.arm, "arm length for star/cross (-1 = grid radius)");
  deg_cmd->add_option("--views", deg.views, "keep only the first N views of the pattern (0 = all)");
  deg_cmd->add_option("--scale", deg.scale, "integer scale factor")->check(CLI::Range(1, 4));
  deg_cmd->add_option("--sigma", deg.noise.sigma, "Gaussian noise std on the 0-255 scale");
  deg_cmd->add_option("--nu", deg.noise.impulse_percent, "impulse noise percentage");
  deg_cmd->add_option("--seed", deg.noise.seed, "noise seed");
  deg_cmd->add_option("--kernel", deg.kernel, "blur kernel: auto, gaussian, identity or a text file of taps");
  deg_cmd->add_option("--bits", deg.bits, "view bit depth")->check(CLI::IsMember({8, 16}));
  deg_cmd->add_option("--threads", deg.threads, "worker threads (0 = all cores)");
  deg_cmd->add_option("--out", deg.out, "output stack directory")->required();
  deg_cmd->add_option("--config", config_help);

  SrArgs sr;
  auto* sr_cmd = app.add_subcommand("sr", "super-resolve the reference view of a stack");
  sr_cmd->add_option("--stack", sr.stack, "stack directory")->required();
  sr_cmd->add_option("--out", sr.out, "output directory")->required();
  sr_cmd->add_option("--gt", sr.gt, "ground-truth HR image for PSNR");
  sr_cmd->add_option("--solver", sr.method, "admm, gd or gd-ls")->check(CLI::IsMember({"admm", "gd", "gd-ls"}));
  sr_cmd->add_option("--step", sr.step, "GD step (0 = 1 / Lipschitz bound of the l2 term)");
  sr_cmd->add_option("--crop", sr.crop, "border excluded from PSNR");
  sr_cmd->add_option("--bits", sr.bits, "output bit depth")->check(CLI::IsMember({8, 16}));
  sr_cmd->add_option("--timing", sr.timing, "write wall-clock times into trace.csv (false writes 0)");
  sr.solver.add_to(sr_cmd);
  sr_cmd->add_option("--config", config_help);

  BenchArgs bench;
  auto* bench_cmd = app.add_subcommand("bench", "compare gd, gd-ls, admm K=5 and admm K=10 at equal CU");
  bench_cmd->add_option("--stack", bench.stack, "stack directory")->required();
  bench_cmd->add_option("--out", bench.out, "output directory")->required();
  bench_cmd->add_option("--gt", bench.gt, "ground-truth HR image for PSNR");
  bench_cmd->add_option("--step", bench.step, "GD step (0 = 1 / Lipschitz bound of the l2 term)");
  bench_cmd->add_option("--budget", bench.budget, "computation units per solver");
  bench_cmd->add_option("--crop", bench.crop, "border excluded from PSNR");
  bench_cmd->add_option("--timing", bench.timing, "write wall-clock times into the traces");
  bench.solver.add_to(bench_cmd);
  bench_cmd->add_option("--config", config_help);

  EvalArgs ev;
  auto* eval_cmd = app.add_subcommand("eval", "PSNR/SSIM (on luma) of test images against a reference");
  eval_cmd->add_option("reference", ev.reference, "reference image")->required();
  eval_cmd->add_option("tests", ev.tests, "images to score")->required();
  eval_cmd->add_option("--crop", ev.crop, "border excluded from the metrics");
  eval_cmd->add_option("--config", config_help);

  WeightsArgs wa;
  auto* weights_cmd = app.add_subcommand("weights", "dump the regularizer weight maps of an HR estimate");
  weights_cmd->add_option("--stack", wa.stack, "stack directory")->required();
  weights_cmd->add_option("--image", wa.image, "HR estimate (default: bicubic of the reference view)");
  weights_cmd->add_option("--out", wa.out, "output directory")->required();
  wa.solver.add_to(weights_cmd);
  weights_cmd->get_option("--iterations")
      ->description("ADMM iterations to run from the estimate before assembling the weights");
  weights_cmd->add_option("--config", config_help);

  try {
    std::vector<std::string> args = expand_config(raw_args);
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << '\n';
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kValidation;
  } catch (const IoError& e) {
    err << "io error: " << e.what() << '\n';
    return kIo;
  }

  // Solver-related defaults that depend on the subcommand.
  if (weights_cmd->parsed() && weights_cmd->get_option("--iterations")->count() == 0) wa.solver.cfg.iterations = 0;

  try {
    if (gen_cmd->parsed()) cmd_gen_scene(gen, *gen_cmd, out);
    if (deg_cmd->parsed()) cmd_degrade(deg, *deg_cmd, out);
    if (sr_cmd->parsed()) cmd_sr(sr, *sr_cmd, out);
    if (bench_cmd->parsed()) cmd_bench(bench, *bench_cmd, out);
    if (eval_cmd->parsed()) cmd_eval(ev, out);
    if (weights_cmd->parsed()) {
      wa.iterations = wa.solver.cfg.iterations;
      wa.solver.cfg.iterations = std::max(wa.solver.cfg.iterations, 0);
      cmd_weights(wa, *weights_cmd, out);
    }
  } catch (const IoError& e) {
    err << "io error: " << e.what() << '\n';
    return kIo;
  } catch (const DivergenceError& e) {
    err << "solver diverged: " << e.what() << '\n';
    return kDivergence;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kValidation;
  } catch (const DimensionError& e) {
    err << "error: " << e.what() << '\n';
    return kValidation;
  } catch (const RangeError& e) {
    err << "error: " << e.what() << '\n';
    return kValidation;
  }
  return kOk;
}

}  // namespace lfsr::cli
