// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero if any selected criterion fails. `--criterion N` runs only N.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "test_support.hpp"

#ifndef DSMOOTH_CLI_PATH
#define DSMOOTH_CLI_PATH "dsmooth"
#endif

namespace {

using namespace dsmooth;
namespace fs = std::filesystem;
using testing::BoxedSquaredDistance;
using testing::DiagonalQuadratic;
using testing::random_vector;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

double elapsed_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Matrix random_matrix(std::mt19937_64& rng, Index rows, Index cols) {
  Matrix m(rows, cols);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  for (Index i = 0; i < m.size(); ++i) m.data()[i] = d(rng);
  return m;
}

// ---------------------------------------------------------------------------
// 1. scalar argmin / prox maps against a 1-D grid search

Outcome criterion_1() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(101);
  auto uni = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };
  auto one = [](double v) { return Vector::Constant(1, v); };
  const int trials = 1000;
  double worst[4] = {0, 0, 0, 0};

  for (int t = 0; t < trials; ++t) {
    const double u = uni(0.01, 0.2);
    const double lam = uni(0.0, 0.2);
    const double rho = uni(1.0, 10.0);
    const double q = uni(-0.3, 2.0);
    const double x = box_l1_regularized_argmin(one(q), rho, lam, u)[0];
    const double ref = testing::grid_argmin_1d(
        [=](double z) { return lam * z - q * z + 0.5 * rho * z * z; }, 0.0, u);
    worst[0] = std::max(worst[0], std::abs(x - ref));
  }
  for (int t = 0; t < trials; ++t) {
    const double u = uni(0.01, 0.2);
    const double lam = uni(0.01, 0.5);
    const double rho = t % 4 == 0 ? 0.0 : uni(0.1, 10.0);
    const double q = uni(-0.3, 2.0);
    const double x = box_l2l1_argmin(one(q), lam, u, rho)[0];
    const double ref = testing::grid_argmin_1d(
        [=](double z) { return lam * (z * z + z) - q * z + 0.5 * rho * z * z; }, 0.0, u);
    worst[1] = std::max(worst[1], std::abs(x - ref));
  }
  for (int t = 0; t < trials; ++t) {
    const double u = uni(0.01, 0.2);
    const double step = uni(0.1, 2.0);
    const double lam = uni(0.0, 0.1);
    const double v = uni(-0.1, 0.3);
    const double x = prox_step_l1(one(v), step, lam, u)[0];
    const double ref = testing::grid_argmin_1d(
        [=](double z) { return step * lam * z + 0.5 * (z - v) * (z - v); }, 0.0, u);
    worst[2] = std::max(worst[2], std::abs(x - ref));
  }
  for (int t = 0; t < trials; ++t) {
    const double u = uni(0.01, 0.2);
    const double step = uni(0.1, 2.0);
    const double lam = uni(0.0, 0.5);
    const double v = uni(-0.1, 0.3);
    const double x = prox_step_l2l1(one(v), step, lam, u)[0];
    const double ref = testing::grid_argmin_1d(
        [=](double z) { return step * lam * (z * z + z) + 0.5 * (z - v) * (z - v); }, 0.0, u);
    worst[3] = std::max(worst[3], std::abs(x - ref));
  }

  const double secs = elapsed_since(t0);
  const double max_err = std::max({worst[0], worst[1], worst[2], worst[3]});
  return {max_err <= 1e-6 && secs < 5.0,
          fmt("max abs err box_l1=%.2e box_l2l1=%.2e prox_l1=%.2e prox_l2l1=%.2e (tol 1e-6), %.2fs (limit 5s)",
              worst[0], worst[1], worst[2], worst[3], secs)};
}

// ---------------------------------------------------------------------------
// 2. dual gradient against central differences

struct GradientCase {
  std::string name;
  std::shared_ptr<LinearMap> A;
  std::shared_ptr<PrimalFunctionOracle> f;
  std::shared_ptr<StrongFunctionOracle> g;
  Regime regime;
  double epsilon;
  double R;
  double p_range;
};

std::vector<GradientCase> gradient_cases() {
  std::vector<GradientCase> out;
  std::mt19937_64 rng(202);
  for (Index n : {1, 2, 8}) {
    const Matrix m = random_matrix(rng, n, n);
    const Vector b = random_vector(rng, n, -0.5, 1.0);
    for (Regime r : {Regime::General, Regime::FStrong, Regime::GSmooth, Regime::Both}) {
      GradientCase c;
      c.name = fmt("%dd/%s", static_cast<int>(n), std::string(to_string(r)).c_str());
      c.A = std::make_shared<DenseMatrixMap>(m);
      if (smooths_f(r)) {
        c.f = std::make_shared<BoxL1>(n, 0.1, 1.0);
      } else {
        c.f = std::make_shared<BoxL2L1>(n, 0.2, 1.0);
      }
      if (adds_kappa(r)) {
        c.g = std::make_shared<BoxedSquaredDistance>(b, 2.0);
      } else {
        c.g = std::make_shared<SquaredDistance>(b);
      }
      c.regime = r;
      c.epsilon = 0.1;
      c.R = 2.0;
      c.p_range = 2.0;
      out.push_back(std::move(c));
    }
  }
  const Index side = 16;
  const auto blur = std::make_shared<BlurOperator>(side, side, gaussian_kernel(9, 4.0));
  const Vector truth = synthetic_blobs(side, side, 1.0).pixels;
  for (Regime r : {Regime::General, Regime::FStrong, Regime::GSmooth, Regime::Both}) {
    const double scale = smooths_f(r) ? 0.1 : 1.0;
    const Vector b = add_gaussian_noise(blur->apply(scale * truth), smooths_f(r) ? 1e-4 : 1e-3, 42);
    GradientCase c;
    c.name = fmt("deblur16/%s", std::string(to_string(r)).c_str());
    c.A = blur;
    if (smooths_f(r)) {
      c.f = std::make_shared<BoxL1>(side * side, 2e-6, 0.1);
    } else {
      c.f = std::make_shared<BoxL2L1>(side * side, 2e-5, 1.0);
    }
    if (adds_kappa(r)) {
      c.g = std::make_shared<BoxedSquaredDistance>(b, 2.0 * scale);
    } else {
      c.g = std::make_shared<SquaredDistance>(b);
    }
    c.regime = r;
    c.epsilon = 0.3 * static_cast<double>(side * side) / 65536.0;
    c.R = 100.0;
    c.p_range = 0.05;
    out.push_back(std::move(c));
  }
  return out;
}

Outcome criterion_2() {
  std::mt19937_64 rng(203);
  const int points = 20;
  double worst = 0.0;
  std::string worst_name;
  int checked = 0;
  for (const GradientCase& c : gradient_cases()) {
    const SmoothingParameters params =
        choose_parameters(c.regime, c.epsilon, c.R, c.f->domain_radius_sq_half(), c.f->strong_convexity(),
                          c.g->grad_lipschitz());
    const SmoothedDual dual(*c.A, *c.f, *c.g, c.regime, params, c.A->norm_sq_bound());
    auto value = [&](const Vector& p) { return dual.evaluate(p).value; };
    for (int i = 0; i < points; ++i) {
      const Vector p = random_vector(rng, dual.dim(), -c.p_range, c.p_range);
      const Vector grad = dual.evaluate(p).grad;
      const Vector fd = testing::central_difference(value, p, 1e-6);
      const double rel = (fd - grad).norm() / grad.norm();
      if (!(rel <= worst)) {
        worst = std::isnan(rel) ? kInfinity : rel;
        worst_name = c.name;
      }
      ++checked;
    }
  }
  return {worst <= 1e-5,
          fmt("%d points over 16 instances, worst relative error %.2e at %s (tol 1e-5)", checked, worst,
              worst_name.c_str())};
}

// ---------------------------------------------------------------------------
// 3. θ_ρ <= θ <= θ_ρ + ρ D_f against a brute-force conjugate

Outcome criterion_3() {
  std::mt19937_64 rng(303);
  const double slack = 1e-8;
  int checked = 0;
  int violations = 0;
  double worst_lower = -kInfinity;
  double worst_upper = -kInfinity;
  for (int instance = 0; instance < 3; ++instance) {
    const Matrix m = random_matrix(rng, 4, 4);
    const DenseMatrixMap A(m);
    const double lam = std::uniform_real_distribution<double>(0.0, 0.3)(rng);
    const BoxL1 f(4, lam, 1.0);
    const Vector b = random_vector(rng, 4, -0.5, 1.0);
    const SquaredDistance g(b);
    const double df = f.domain_radius_sq_half();
    for (double rho : {1.0, 0.1, 0.01}) {
      const SmoothedDual dual(A, f, g, Regime::GSmooth, {rho, 0.5}, A.norm_sq_bound());
      for (int i = 0; i < 100; ++i) {
        const Vector p = random_vector(rng, 4, -2.0, 2.0);
        // g*(-p) = sup_y -<p,y> - ||y-b||^2 in closed form.
        const double theta = testing::grid_conjugate_box_l1(m.transpose() * p, lam, 1.0) - p.dot(b) +
                             0.25 * p.squaredNorm();
        const double smoothed = dual.evaluate(p).smoothed_value;
        worst_lower = std::max(worst_lower, smoothed - theta);
        worst_upper = std::max(worst_upper, theta - (smoothed + rho * df));
        if (smoothed > theta + slack || theta > smoothed + rho * df + slack) ++violations;
        ++checked;
      }
    }
  }
  return {violations == 0,
          fmt("%d points, %d violations; max(θ_ρ-θ)=%.2e, max(θ-θ_ρ-ρD_f)=%.2e (slack 1e-8)", checked,
              violations, worst_lower, worst_upper)};
}

// ---------------------------------------------------------------------------
// 4. fast gradient envelopes on quadratics

Outcome criterion_4() {
  std::mt19937_64 rng(404);
  std::vector<DiagonalQuadratic> quads;
  {
    Vector d(2), c(2);
    d << 1.0, 4.0;
    c << 1.0, -1.0;
    quads.push_back({d, c});
  }
  quads.push_back({random_vector(rng, 5, 1.0, 50.0), random_vector(rng, 5)});
  quads.push_back({random_vector(rng, 10, 0.01, 1.0), random_vector(rng, 10)});
  {
    Vector d(20);
    for (Index i = 0; i < 20; ++i) d[i] = std::pow(10.0, 3.0 * static_cast<double>(i) / 19.0);
    quads.push_back({d, random_vector(rng, 20, -5.0, 5.0)});
  }
  quads.push_back({Vector::Constant(3, 7.0), random_vector(rng, 3)});

  int failures = 0;
  int records = 0;
  for (const DiagonalQuadratic& q : quads) {
    FgmConfig cfg;
    cfg.max_iters = 400;
    const auto run = fgm_minimize(q, cfg);
    records += static_cast<int>(run.trace.size());
    if (!geometric_decay_check(run.trace, q.lipschitz(), q.kappa(), q.min_value(), 1.05)) ++failures;
  }

  // κ = L: a single step lands on the minimizer of ½||p - c||^2.
  const DiagonalQuadratic unit{Vector::Ones(6), random_vector(rng, 6, -3.0, 3.0)};
  FgmConfig one_step;
  one_step.max_iters = 1;
  const auto run = fgm_minimize(unit, one_step);
  const double one_step_err = (run.p - unit.c).lpNorm<Eigen::Infinity>();
  const bool exact = one_step_err == 0.0 && run.iterations == 1;

  return {failures == 0 && exact,
          fmt("%d quadratics, %d traced iterates, %d envelope failures (slack 1.05); one-step error %.1e",
              static_cast<int>(quads.size()), records, failures, one_step_err)};
}

// ---------------------------------------------------------------------------
// 5. primal certificate against brute-force optimal values

struct CertificateCase {
  std::string name;
  Matrix m;
  std::shared_ptr<PrimalFunctionOracle> f;
  std::function<double(const Vector&)> penalty;  // f on its domain
  Vector b;
  bool boxed_g;
  std::optional<Regime> regime;
};

Outcome criterion_5() {
  std::mt19937_64 rng(505);
  std::vector<CertificateCase> cases;
  {
    CertificateCase c{"1d box", Matrix::Identity(1, 1), std::make_shared<BoxL1>(1, 0.0, 1.0),
                      [](const Vector&) { return 0.0; }, Vector::Constant(1, 1.5), false, {}};
    cases.push_back(c);
  }
  {
    const double lam = 0.1;
    cases.push_back({"3d l1", random_matrix(rng, 3, 3), std::make_shared<BoxL1>(3, lam, 1.0),
                     [lam](const Vector& x) { return lam * x.lpNorm<1>(); }, random_vector(rng, 3, -0.5, 1.0),
                     false, {}});
  }
  {
    const double lam = 0.2;
    cases.push_back({"2d l2l1", random_matrix(rng, 2, 2), std::make_shared<BoxL2L1>(2, lam, 1.0),
                     [lam](const Vector& x) { return lam * (x.squaredNorm() + x.lpNorm<1>()); },
                     random_vector(rng, 2, -0.5, 1.0), false, {}});
  }
  {
    const double lam = 0.05;
    cases.push_back({"4d l1 boxed g", random_matrix(rng, 4, 4), std::make_shared<BoxL1>(4, lam, 1.0),
                     [lam](const Vector& x) { return lam * x.lpNorm<1>(); }, random_vector(rng, 4, -0.5, 1.0),
                     true, {}});
  }
  {
    const double lam = 0.1;
    cases.push_back({"3d l2l1 boxed g", random_matrix(rng, 3, 3), std::make_shared<BoxL2L1>(3, lam, 1.0),
                     [lam](const Vector& x) { return lam * (x.squaredNorm() + x.lpNorm<1>()); },
                     random_vector(rng, 3, -0.5, 1.0), true, {}});
  }
  {
    const double lam = 0.05;
    cases.push_back({"4d l1 forced GENERAL", random_matrix(rng, 4, 4), std::make_shared<BoxL1>(4, lam, 1.0),
                     [lam](const Vector& x) { return lam * x.lpNorm<1>(); }, random_vector(rng, 4, -0.5, 1.0),
                     false, Regime::General});
  }

  const double constant = 2.0 * (3.0 * std::numbers::sqrt2 + 1.0);
  double worst_ratio = 0.0;
  std::string worst_name;
  int failures = 0;
  int runs = 0;
  for (const CertificateCase& c : cases) {
    const Index n = c.m.cols();
    const auto [xstar, vstar] = testing::grid_minimize_box(
        [&](const Vector& x) { return c.penalty(x) + (c.m * x - c.b).squaredNorm(); }, n, 1.0);
    const Vector ystar = c.m * xstar;
    // p* = -∇g(A x*) when the box on g is inactive at the optimum.
    const double R = 1.5 * (2.0 * (c.b - ystar)).norm() + 0.1;
    const DenseMatrixMap A(c.m);
    std::shared_ptr<StrongFunctionOracle> g;
    if (c.boxed_g) {
      g = std::make_shared<BoxedSquaredDistance>(c.b, ystar.lpNorm<Eigen::Infinity>() + 0.25);
    } else {
      g = std::make_shared<SquaredDistance>(c.b);
    }
    for (double eps : {0.1, 0.01}) {
      SolverConfig cfg;
      cfg.epsilon = eps;
      cfg.R = R;
      cfg.regime = c.regime;
      cfg.max_iters = 200000;
      cfg.record_trace = false;
      cfg.reference_value = vstar;
      const SolveReport r = solve(A, *c.f, *g, cfg);
      const double ratio = *r.certificate_gap / (constant * eps);
      if (ratio > worst_ratio) {
        worst_ratio = ratio;
        worst_name = fmt("%s eps=%g (%s, %d iters)", c.name.c_str(), eps, std::string(to_string(r.regime)).c_str(),
                         r.iterations);
      }
      if (ratio > 1.0) ++failures;
      ++runs;
    }
  }
  return {failures == 0 && cases.size() >= 5,
          fmt("%d instances x 2 eps, %d failures; worst gap/(2(3√2+1)ε) = %.3f at %s",
              static_cast<int>(cases.size()), failures, worst_ratio, worst_name.c_str())};
}

// ---------------------------------------------------------------------------
// 6. growth of iterations-to-target when ε is halved

Outcome criterion_6() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(606);
  const Matrix m = random_matrix(rng, 3, 3);
  const DenseMatrixMap A(m);
  const Vector b = random_vector(rng, 3, -0.5, 1.0);
  const double R = 4.0;
  const std::vector<double> ladder = {0.08, 0.04, 0.02, 0.01};

  auto iterations = [&](const PrimalFunctionOracle& f, const StrongFunctionOracle& g, double eps,
                        SolveReport* out) {
    SolverConfig cfg;
    cfg.epsilon = eps;
    cfg.R = R;
    cfg.max_iters = 1000000;
    cfg.record_trace = false;
    SolveReport r = solve(A, f, g, cfg);
    if (out) *out = r;
    return r.stop_reason == StopReason::TargetMet ? r.iterations : -1;
  };

  const BoxL1 f_general(3, 0.1, 1.0);
  const BoxedSquaredDistance g_general(b, 3.0);
  std::string general_text;
  bool general_ok = true;
  double min_ratio = kInfinity;
  std::vector<int> gk;
  for (double eps : ladder) gk.push_back(iterations(f_general, g_general, eps, nullptr));
  for (std::size_t i = 0; i + 1 < gk.size(); ++i) {
    if (gk[i] <= 0 || gk[i + 1] < 0) {
      general_ok = false;
      continue;
    }
    const double ratio = static_cast<double>(gk[i + 1]) / gk[i];
    min_ratio = std::min(min_ratio, ratio);
    if (ratio < 1.5) general_ok = false;
  }

  const BoxL2L1 f_both(3, 0.2, 1.0);
  const SquaredDistance g_both(b);
  bool both_ok = true;
  double max_excess = -kInfinity;
  double allowance = 0.0;
  std::vector<int> bk;
  SolveReport report;
  for (double eps : ladder) bk.push_back(iterations(f_both, g_both, eps, &report));
  allowance = 2.0 * std::numbers::ln2 * std::sqrt(report.lipschitz / report.kappa) + 2.0;
  for (std::size_t i = 0; i + 1 < bk.size(); ++i) {
    if (bk[i] < 0 || bk[i + 1] < 0) {
      both_ok = false;
      continue;
    }
    const double growth = bk[i + 1] - bk[i];
    max_excess = std::max(max_excess, growth - allowance);
    if (growth > allowance) both_ok = false;
  }

  auto list = [](const std::vector<int>& v) {
    std::string s;
    for (int k : v) s += (s.empty() ? "" : ",") + std::to_string(k);
    return s;
  };
  const double secs = elapsed_since(t0);
  return {general_ok && both_ok && secs < 60.0,
          fmt("GENERAL iters [%s] min ratio %.2f (need >= 1.5); BOTH iters [%s] allowance %.2f, "
              "max growth-allowance %.2f; %.2fs (limit 60s)",
              list(gk).c_str(), min_ratio, list(bk).c_str(), allowance, max_excess, secs)};
}

// ---------------------------------------------------------------------------
// 7 and 8. the command-line pipeline at desk scale

std::map<std::string, std::string> read_manifest(const fs::path& path) {
  std::map<std::string, std::string> out;
  std::istringstream in(detail::read_file(path.string()));
  for (std::string line; std::getline(in, line);) {
    const auto eq = line.find('=');
    if (eq != std::string::npos) out[line.substr(0, eq)] = line.substr(eq + 1);
  }
  return out;
}

void run_cli(const std::string& args) {
  const std::string cmd = std::string("DS_LOG=quiet '") + DSMOOTH_CLI_PATH + "' " + args;
  const int rc = std::system(cmd.c_str());
  if (rc != 0) throw std::runtime_error("command failed (" + std::to_string(rc) + "): " + cmd);
}

struct ProblemRun {
  std::string problem;
  fs::path dir;
  std::map<std::string, std::string> manifest;
  std::map<std::string, std::map<int, double>> objective;
  std::map<std::string, std::map<int, double>> isnr;
};

struct Pipeline {
  fs::path root;
  std::vector<ProblemRun> runs;
};

constexpr int kPipelineSide = 32;
constexpr int kPipelineIters = 100;

Pipeline run_pipeline(const fs::path& root) {
  fs::remove_all(root);
  fs::create_directories(root);
  Pipeline out{root, {}};
  const std::string truth = (root / "truth.pgm").string();
  run_cli(fmt("synth --rows %d --cols %d --out '%s'", kPipelineSide, kPipelineSide, truth.c_str()));
  // ε = 0.3 at 256x256 scaled by the pixel count, so ρ = ε/(2 D_f) is the same.
  const double eps = 0.3 * kPipelineSide * kPipelineSide / 65536.0;
  struct Setting {
    const char* problem;
    double scale;
    double noise;
  };
  for (const Setting s : {Setting{"l1", 0.1, 1e-4}, Setting{"l2l1", 1.0, 1e-3}}) {
    ProblemRun run;
    run.problem = s.problem;
    run.dir = root / s.problem;
    const std::string blurred = (root / (std::string("blurred_") + s.problem + ".pgm")).string();
    run_cli(fmt("blur --image '%s' --size 9 --sigma 4 --noise-std %.17g --seed 42 --scale %.17g --out '%s'",
                truth.c_str(), s.noise, s.scale, blurred.c_str()));
    const std::string vec = fs::path(blurred).replace_extension(".vec").string();
    run_cli(fmt("compare --problem %s --blurred '%s' --truth '%s' --epsilon %.17g --R 100 --iters %d "
                "--methods ds,ista,fista --out-dir '%s'",
                s.problem, vec.c_str(), truth.c_str(), eps, kPipelineIters, run.dir.string().c_str()));
    run.manifest = read_manifest(run.dir / "manifest.txt");
    std::istringstream csv(detail::read_file((run.dir / "compare.csv").string()));
    std::string line;
    std::getline(csv, line);
    while (std::getline(csv, line)) {
      std::stringstream in(line);
      std::string method, iter, obj, db;
      std::getline(in, method, ',');
      std::getline(in, iter, ',');
      std::getline(in, obj, ',');
      std::getline(in, db, ',');
      run.objective[method][std::stoi(iter)] = std::stod(obj);
      run.isnr[method][std::stoi(iter)] = std::stod(db);
    }
    out.runs.push_back(std::move(run));
  }
  return out;
}

Outcome criterion_7() {
  const auto t0 = std::chrono::steady_clock::now();
  const Pipeline pipe = run_pipeline(fs::temp_directory_path() / "dsmooth_acceptance_7");
  bool ok = true;
  std::string text;
  for (const ProblemRun& run : pipe.runs) {
    const std::string expected_regime = run.problem == "l1" ? "G_SMOOTH" : "BOTH";
    const double norm_est = std::stod(run.manifest.at("norm_sq_estimate"));
    const bool norm_ok = std::abs(norm_est - 1.0) <= 1e-6;
    const bool regime_ok = run.manifest.at("regime") == expected_regime;
    const int k = kPipelineIters;
    const bool have = run.objective.count("ds") && run.objective.count("ista") && run.objective.count("fista") &&
                      run.objective.at("ds").count(k) && run.objective.at("ista").count(k) &&
                      run.objective.at("fista").count(k);
    if (!have) {
      ok = false;
      text += run.problem + ": missing iteration " + std::to_string(k) + " in compare.csv; ";
      continue;
    }
    const double ds = run.objective.at("ds").at(k);
    const double ista = run.objective.at("ista").at(k);
    const double fista = run.objective.at("fista").at(k);
    const double isnr_ds = run.isnr.at("ds").at(k);
    const bool isnr_ok = isnr_ds > 0.0;
    const bool fista_le_ds = fista <= ds;
    const bool ds_le_ista = ds <= ista;
    ok = ok && norm_ok && regime_ok && isnr_ok && fista_le_ds && ds_le_ista;
    text += fmt("%s: ||A||^2~%.9f %s, regime %s %s, ISNR(ds)=%.2fdB %s, obj fista=%.6e ds=%.6e ista=%.6e "
                "[fista<=ds %s, ds<=ista %s]; ",
                run.problem.c_str(), norm_est, norm_ok ? "ok" : "BAD", run.manifest.at("regime").c_str(),
                regime_ok ? "ok" : "BAD", isnr_ds, isnr_ok ? "ok" : "BAD", fista, ds, ista,
                fista_le_ds ? "ok" : "BAD", ds_le_ista ? "ok" : "BAD");
  }
  const double secs = elapsed_since(t0);
  ok = ok && secs < 120.0;
  text += fmt("%.2fs (limit 120s)", secs);
  return {ok, text};
}

Outcome criterion_8() {
  const Pipeline a = run_pipeline(fs::temp_directory_path() / "dsmooth_acceptance_8a");
  const Pipeline b = run_pipeline(fs::temp_directory_path() / "dsmooth_acceptance_8b");
  int compared = 0;
  std::vector<std::string> differing;
  auto same = [&](const fs::path& rel) {
    const std::string x = detail::read_file((a.root / rel).string());
    const std::string y = detail::read_file((b.root / rel).string());
    ++compared;
    if (x != y || x.empty()) differing.push_back(rel.string());
  };
  for (const char* problem : {"l1", "l2l1"}) {
    same(fs::path(problem) / "compare.csv");
    same(std::string("blurred_") + problem + ".vec");
    same(std::string("blurred_") + problem + ".pgm");
  }
  same("truth.pgm");
  std::string list;
  for (const auto& d : differing) list += " " + d;
  return {differing.empty(), fmt("%d files byte-compared across two runs, %d differ%s", compared,
                                 static_cast<int>(differing.size()), list.c_str())};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::function<Outcome()>> criteria = {criterion_1, criterion_2, criterion_3, criterion_4,
                                                          criterion_5, criterion_6, criterion_7, criterion_8};
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--criterion" && i + 1 < argc) {
      selected.push_back(std::atoi(argv[++i]));
    } else {
      std::cerr << "usage: acceptance [--criterion N]...\n";
      return 2;
    }
  }
  if (selected.empty()) {
    for (int i = 1; i <= static_cast<int>(criteria.size()); ++i) selected.push_back(i);
  }

  bool all = true;
  for (int id : selected) {
    if (id < 1 || id > static_cast<int>(criteria.size())) {
      std::cerr << "no criterion " << id << "\n";
      return 2;
    }
    Outcome o;
    try {
      o = criteria[static_cast<std::size_t>(id - 1)]();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::cout << "criterion " << id << ": " << (o.pass ? "PASS" : "FAIL") << "  " << o.detail << std::endl;
    all = all && o.pass;
  }
  return all ? 0 : 1;
}
