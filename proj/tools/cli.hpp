#pragma once

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "dsmooth/dsmooth.hpp"

namespace dsmooth::cli {

enum class LogLevel { Quiet, Info, Trace };

/// DS_LOG=quiet|info|trace, default info. Unknown values fall back to info.
inline LogLevel log_level_from_env() {
  const char* v = std::getenv("DS_LOG");
  if (!v) return LogLevel::Info;
  const std::string s(v);
  if (s == "quiet") return LogLevel::Quiet;
  if (s == "trace") return LogLevel::Trace;
  return LogLevel::Info;
}

class Logger {
 public:
  Logger(LogLevel level, std::ostream& out) : level_(level), out_(&out) {}

  void info(const std::string& msg) const {
    if (level_ != LogLevel::Quiet) *out_ << msg << '\n';
  }
  void trace(const std::string& msg) const {
    if (level_ == LogLevel::Trace) *out_ << msg << '\n';
  }
  bool tracing() const { return level_ == LogLevel::Trace; }

 private:
  LogLevel level_;
  std::ostream* out_;
};

/// Shortest round-tripping decimal form used in every CSV and manifest.
inline std::string num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// Ordered key=value lines.
class Manifest {
 public:
  void set(const std::string& key, const std::string& value) {
    for (auto& kv : entries_) {
      if (kv.first == key) {
        kv.second = value;
        return;
      }
    }
    entries_.emplace_back(key, value);
  }
  void set(const std::string& key, double value) { set(key, num(value)); }
  void set(const std::string& key, long long value) { set(key, std::to_string(value)); }
  void set(const std::string& key, int value) { set(key, std::to_string(value)); }
  void set(const std::string& key, bool value) { set(key, std::string(value ? "true" : "false")); }
  void set(const std::string& key, const char* value) { set(key, std::string(value)); }

  std::string encode() const {
    std::string out;
    for (const auto& [k, v] : entries_) out += k + "=" + v + "\n";
    return out;
  }

  const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

inline std::map<std::string, std::string> parse_manifest(const std::string& text) {
  std::map<std::string, std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    out[line.substr(0, eq)] = line.substr(eq + 1);
  }
  return out;
}

/// PGMs are quantized, so the exact image travels in a sidecar next to it.
inline std::string sidecar_path(const std::string& pgm_path) {
  return std::filesystem::path(pgm_path).replace_extension(".vec").string();
}

inline std::string manifest_path(const std::string& pgm_path) {
  return std::filesystem::path(pgm_path).replace_extension(".manifest").string();
}

/// Reads either a DSVEC sidecar or a PGM (scaled by `scale`), by content.
inline SidecarImage load_image_values(const std::string& path, double scale) {
  const std::string bytes = detail::read_file(path);
  if (bytes.rfind("DSVEC", 0) == 0) {
    try {
      return parse_vector_sidecar(bytes);
    } catch (const FormatError& e) {
      throw FormatError(path + ": " + e.reason(), e.offset());
    }
  }
  GrayImage img;
  try {
    img = parse_pgm(bytes, scale);
  } catch (const FormatError& e) {
    throw FormatError(path + ": " + e.reason(), e.offset());
  }
  return {img.rows, img.cols, std::move(img.pixels)};
}

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// synth

struct SynthOptions {
  int rows = 32;
  int cols = 32;
  std::string out;
};

inline int cmd_synth(const SynthOptions& opt, const Logger& log) {
  const GrayImage img = synthetic_blobs(opt.rows, opt.cols, 1.0);
  save_pgm(opt.out, img);
  log.info("wrote " + opt.out + " (" + std::to_string(opt.rows) + "x" + std::to_string(opt.cols) + ")");
  return 0;
}

// ---------------------------------------------------------------------------
// blur

struct BlurOptions {
  std::string image;
  int size = 9;
  double sigma = 4.0;
  double noise_std = 0.0;
  std::uint64_t seed = 42;
  double scale = 1.0;
  std::string out;
};

inline int cmd_blur(const BlurOptions& opt, const Logger& log) {
  const GrayImage x = load_pgm(opt.image, opt.scale);
  const BlurOperator A(x.rows, x.cols, gaussian_kernel(opt.size, opt.sigma));
  const Vector clean = A.apply(x.pixels);
  const Vector b = add_gaussian_noise(clean, opt.noise_std, opt.seed);

  GrayImage out{x.rows, x.cols, opt.scale, b};
  save_pgm(opt.out, out);
  save_vector_sidecar(sidecar_path(opt.out), b, x.rows, x.cols);

  Manifest m;
  m.set("command", "blur");
  m.set("image", opt.image);
  m.set("rows", static_cast<long long>(x.rows));
  m.set("cols", static_cast<long long>(x.cols));
  m.set("scale", opt.scale);
  m.set("filter_size", opt.size);
  m.set("filter_sigma", opt.sigma);
  m.set("boundary", "reflexive");
  m.set("noise_std", opt.noise_std);
  m.set("seed", static_cast<long long>(opt.seed));
  m.set("rng", "mt19937_64+box_muller");
  m.set("output", opt.out);
  m.set("sidecar", sidecar_path(opt.out));
  detail::write_file(manifest_path(opt.out), m.encode());
  log.info("wrote " + opt.out + " and " + sidecar_path(opt.out));
  return 0;
}

// ---------------------------------------------------------------------------
// solve / compare

enum class ProblemKind { L1, L2L1 };

inline ProblemKind problem_from_string(const std::string& s) {
  if (s == "l1") return ProblemKind::L1;
  if (s == "l2l1") return ProblemKind::L2L1;
  throw UsageError("unknown problem '" + s + "' (expected l1 or l2l1)");
}

inline const char* to_string(ProblemKind k) { return k == ProblemKind::L1 ? "l1" : "l2l1"; }

/// Pixel range of each problem's box constraint.
inline double problem_scale(ProblemKind k) { return k == ProblemKind::L1 ? 0.1 : 1.0; }
inline double default_lambda(ProblemKind k) { return k == ProblemKind::L1 ? 2e-6 : 2e-5; }

struct ProblemOptions {
  std::string problem = "l1";
  std::string blurred;
  std::string truth;
  std::optional<double> lambda;
  double epsilon = 0.3;
  std::optional<double> R;
  bool auto_R = false;
  double R0 = 1.0;
  int max_iters = kDefaultMaxIters;
  int size = 9;
  double sigma = 4.0;
  std::string out_dir = ".";
};

/// Everything a run needs, built from the options. Owns the operator and
/// oracles that the solver refers to.
struct Instance {
  ProblemKind kind = ProblemKind::L1;
  Index rows = 0;
  Index cols = 0;
  double scale = 1.0;
  double lambda = 0.0;
  Vector b;
  std::optional<Vector> truth;
  std::unique_ptr<BlurOperator> A;
  std::unique_ptr<PrimalFunctionOracle> f;
  std::unique_ptr<SquaredDistance> g;
  double norm_sq = 1.0;           // rigorous bound, used in every step size
  double norm_sq_estimate = 0.0;  // power iteration, reported

  /// f(x) + g(Ax), the primal objective of x.
  double primal_objective(const Vector& x) const {
    return (f->value(x) + g->value(A->apply(x))).to_double();
  }
  double isnr_of(const Vector& x) const { return truth ? isnr(*truth, b, x) : std::nan(""); }
};

inline Instance build_instance(const ProblemOptions& opt) {
  if (opt.blurred.empty()) throw UsageError("--blurred is required");
  Instance inst;
  inst.kind = problem_from_string(opt.problem);
  inst.scale = problem_scale(inst.kind);
  inst.lambda = opt.lambda.value_or(default_lambda(inst.kind));
  SidecarImage b = load_image_values(opt.blurred, inst.scale);
  inst.rows = b.rows;
  inst.cols = b.cols;
  inst.b = std::move(b.values);
  if (!opt.truth.empty()) {
    SidecarImage t = load_image_values(opt.truth, inst.scale);
    if (t.rows != inst.rows || t.cols != inst.cols) throw UsageError("--truth and --blurred differ in size");
    inst.truth = std::move(t.values);
  }
  inst.A = std::make_unique<BlurOperator>(inst.rows, inst.cols, gaussian_kernel(opt.size, opt.sigma));
  const Index n = inst.rows * inst.cols;
  if (inst.kind == ProblemKind::L1) {
    inst.f = std::make_unique<BoxL1>(n, inst.lambda, inst.scale);
  } else {
    inst.f = std::make_unique<BoxL2L1>(n, inst.lambda, inst.scale);
  }
  inst.g = std::make_unique<SquaredDistance>(inst.b);
  inst.norm_sq = inst.A->norm_sq_bound();
  inst.norm_sq_estimate = operator_norm_sq(*inst.A);
  return inst;
}

inline void require_radius(const ProblemOptions& opt) {
  if (!opt.R && !opt.auto_R) {
    throw UsageError("--R is required: pass a bound on the dual solution norm, or --auto-R to estimate it "
                     "with the restart heuristic");
  }
  if (opt.R && !(*opt.R > 0.0)) throw UsageError("--R must be positive");
}

struct DsRow {
  int iter = 0;
  double theta_value = 0.0;
  double grad_norm_unreg = 0.0;
  double primal_objective = 0.0;
  double isnr = 0.0;
};

struct DsRun {
  SolveReport report;
  std::vector<DsRow> rows;
  std::vector<std::pair<int, Vector>> snapshots;
};

/// Solves with the instance and records one row per iterate. Snapshots of
/// x_f are kept every `snapshot_every` iterations (0 disables them).
inline DsRun run_double_smoothing(const Instance& inst, const ProblemOptions& opt, int snapshot_every,
                                  const Logger& log) {
  require_radius(opt);
  SolverConfig cfg;
  cfg.epsilon = opt.epsilon;
  cfg.max_iters = opt.max_iters;
  cfg.norm_sq = inst.norm_sq;
  cfg.record_trace = false;
  DsRun run;
  auto observer = [&](int k, const Vector&, const DualEvaluation& e) {
    DsRow row{k, e.smoothed_value, e.unreg_grad_norm, inst.primal_objective(e.x_f), inst.isnr_of(e.x_f)};
    if (log.tracing()) {
      log.trace("ds k=" + std::to_string(k) + " theta=" + num(row.theta_value) +
                " grad=" + num(row.grad_norm_unreg) + " obj=" + num(row.primal_objective));
    }
    run.rows.push_back(row);
    if (snapshot_every > 0 && k % snapshot_every == 0) run.snapshots.emplace_back(k, e.x_f);
  };
  if (opt.R) {
    cfg.R = *opt.R;
    run.report = solve(*inst.A, *inst.f, *inst.g, cfg, observer);
  } else {
    run.report = solve_with_radius_restart(*inst.A, *inst.f, *inst.g, cfg, opt.R0, observer);
  }
  return run;
}

inline void fill_problem_manifest(Manifest& m, const ProblemOptions& opt, const Instance& inst) {
  m.set("problem", to_string(inst.kind));
  m.set("blurred", opt.blurred);
  m.set("truth", opt.truth.empty() ? std::string("none") : opt.truth);
  m.set("rows", static_cast<long long>(inst.rows));
  m.set("cols", static_cast<long long>(inst.cols));
  m.set("scale", inst.scale);
  m.set("lambda", inst.lambda);
  m.set("epsilon", opt.epsilon);
  m.set("filter_size", opt.size);
  m.set("filter_sigma", opt.sigma);
  m.set("norm_sq", inst.norm_sq);
  m.set("norm_sq_estimate", inst.norm_sq_estimate);
  m.set("auto_R", opt.auto_R && !opt.R);
  if (opt.auto_R && !opt.R) m.set("R0", opt.R0);
}

inline void fill_report_manifest(Manifest& m, const SolveReport& r) {
  m.set("regime", std::string(to_string(r.regime)));
  m.set("rho", r.rho);
  m.set("kappa", r.kappa);
  m.set("lipschitz", r.lipschitz);
  m.set("R", r.R);
  m.set("radius_heuristic", r.radius_heuristic);
  m.set("grad_norm_target", r.target);
  m.set("iterations", r.iterations);
  m.set("stop_reason", std::string(to_string(r.stop_reason)));
  m.set("final_grad_norm", r.grad_norm);
  m.set("iteration_bound_estimate", static_cast<long long>(r.iteration_bound_estimate));
}

struct SolveOptions {
  ProblemOptions problem;
  int log_every = 10;
};

inline std::string join_path(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

inline int cmd_solve(const SolveOptions& opt, const Logger& log) {
  const ProblemOptions& p = opt.problem;
  require_radius(p);
  const Instance inst = build_instance(p);
  std::filesystem::create_directories(p.out_dir);
  DsRun run = run_double_smoothing(inst, p, std::max(0, opt.log_every), log);
  const SolveReport& r = run.report;

  std::string csv = "iter,theta_value,grad_norm_unreg,primal_objective,isnr_if_truth_given\n";
  for (const DsRow& row : run.rows) {
    csv += std::to_string(row.iter) + "," + num(row.theta_value) + "," + num(row.grad_norm_unreg) + "," +
           num(row.primal_objective) + "," + (inst.truth ? num(row.isnr) : std::string()) + "\n";
  }
  detail::write_file(join_path(p.out_dir, "metrics.csv"), csv);

  std::vector<std::string> images;
  auto write_image = [&](int k, const Vector& x) {
    char name[32];
    std::snprintf(name, sizeof name, "restored_%06d.pgm", k);
    save_pgm(join_path(p.out_dir, name), GrayImage{inst.rows, inst.cols, inst.scale, x});
    images.emplace_back(name);
  };
  for (const auto& [k, x] : run.snapshots) write_image(k, x);
  if (run.snapshots.empty() || run.snapshots.back().first != r.iterations) write_image(r.iterations, r.x_primal);
  save_pgm(join_path(p.out_dir, "restored.pgm"), GrayImage{inst.rows, inst.cols, inst.scale, r.x_primal});
  save_vector_sidecar(join_path(p.out_dir, "restored.vec"), r.x_primal, inst.rows, inst.cols);

  Manifest m;
  m.set("command", "solve");
  fill_problem_manifest(m, p, inst);
  m.set("max_iters", p.max_iters);
  m.set("log_every", opt.log_every);
  fill_report_manifest(m, r);
  std::string list;
  for (const auto& s : images) list += (list.empty() ? "" : ",") + s;
  m.set("images", list);
  detail::write_file(join_path(p.out_dir, "manifest.txt"), m.encode());

  log.info("regime " + std::string(to_string(r.regime)) + ", rho " + num(r.rho) + ", kappa " + num(r.kappa) +
           ", L " + num(r.lipschitz));
  log.info(std::string(to_string(r.stop_reason)) + " after " + std::to_string(r.iterations) +
           " iterations, grad norm " + num(r.grad_norm) + " (target " + num(r.target) + ")");
  return 0;
}

struct CompareOptions {
  ProblemOptions problem;
  std::string methods = "ds,ista,fista";
  int iters = 100;
};

inline std::vector<std::string> parse_methods(const std::string& list) {
  std::vector<std::string> out;
  std::stringstream in(list);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty()) continue;
    if (item != "ds" && item != "ista" && item != "fista") {
      throw UsageError("unknown method '" + item + "' (expected ds, ista or fista)");
    }
    if (std::find(out.begin(), out.end(), item) == out.end()) out.push_back(item);
  }
  if (out.empty()) throw UsageError("--methods is empty");
  std::sort(out.begin(), out.end());
  return out;
}

struct MethodRow {
  int iter = 0;
  double objective = 0.0;
  double isnr = 0.0;
};

inline int cmd_compare(const CompareOptions& opt, const Logger& log) {
  const std::vector<std::string> methods = parse_methods(opt.methods);
  if (opt.iters < 0) throw UsageError("--iters must be nonnegative");
  ProblemOptions p = opt.problem;
  p.max_iters = opt.iters;
  const bool wants_ds = std::find(methods.begin(), methods.end(), "ds") != methods.end();
  if (wants_ds) require_radius(p);
  const Instance inst = build_instance(p);
  std::filesystem::create_directories(p.out_dir);

  const Penalty penalty = inst.kind == ProblemKind::L1 ? Penalty::L1 : Penalty::L2L1;
  const CompositeProblem composite(*inst.A, inst.b, penalty, inst.lambda, inst.scale, inst.norm_sq);
  // Baselines start from the observed image, projected onto the box.
  Vector x0 = inst.b;
  for (Index i = 0; i < x0.size(); ++i) x0[i] = detail::clamp(x0[i], 0.0, inst.scale);

  Manifest m;
  m.set("command", "compare");
  fill_problem_manifest(m, p, inst);
  m.set("methods", opt.methods);
  m.set("iters", opt.iters);
  m.set("baseline_x0", "clamp(b,0,scale)");
  m.set("baseline_step", composite.step());

  std::string csv = "method,iter,primal_objective,isnr\n";
  auto emit = [&](const std::string& name, const std::vector<MethodRow>& rows) {
    for (const MethodRow& r : rows) {
      csv += name + "," + std::to_string(r.iter) + "," + num(r.objective) + "," +
             (inst.truth ? num(r.isnr) : std::string()) + "\n";
    }
    if (!rows.empty()) {
      log.info(name + ": objective " + num(rows.back().objective) +
               (inst.truth ? ", ISNR " + num(rows.back().isnr) + " dB" : std::string()) + " at iteration " +
               std::to_string(rows.back().iter));
    }
  };
  for (const std::string& name : methods) {
    std::vector<MethodRow> rows;
    if (name == "ds") {
      DsRun run = run_double_smoothing(inst, p, 0, log);
      for (const DsRow& r : run.rows) rows.push_back({r.iter, r.primal_objective, r.isnr});
      fill_report_manifest(m, run.report);
    } else {
      auto observer = [&](int k, const Vector& x) {
        rows.push_back({k, composite.objective(x), inst.isnr_of(x)});
        if (log.tracing()) log.trace(name + " k=" + std::to_string(k) + " obj=" + num(rows.back().objective));
      };
      if (name == "ista") {
        ista_run(composite, x0, opt.iters, observer);
      } else {
        fista_run(composite, x0, opt.iters, observer);
      }
    }
    emit(name, rows);
  }
  detail::write_file(join_path(p.out_dir, "compare.csv"), csv);
  detail::write_file(join_path(p.out_dir, "manifest.txt"), m.encode());
  return 0;
}

}  // namespace dsmooth::cli
