#include <iostream>

#include <CLI11.hpp>

#include "cli.hpp"

namespace {

void add_problem_flags(CLI::App* cmd, dsmooth::cli::ProblemOptions& p) {
  cmd->add_option("--problem", p.problem, "l1 (box [0,0.1]) or l2l1 (box [0,1])")
      ->check(CLI::IsMember({"l1", "l2l1"}));
  cmd->add_option("--blurred", p.blurred, "observed image: PGM or .vec sidecar")->required();
  cmd->add_option("--truth", p.truth, "ground-truth image for ISNR: PGM or .vec sidecar");
  cmd->add_option("--lambda", p.lambda, "regularization weight (default 2e-6 for l1, 2e-5 for l2l1)");
  cmd->add_option("--epsilon", p.epsilon, "target accuracy")->capture_default_str();
  cmd->add_option("--R", p.R, "bound on the norm of a dual solution");
  cmd->add_flag("--auto-R", p.auto_R, "estimate R with one restart when --R is not given");
  cmd->add_option("--R0", p.R0, "initial guess for --auto-R")->capture_default_str();
  cmd->add_option("--size", p.size, "blur filter size")->capture_default_str();
  cmd->add_option("--sigma", p.sigma, "blur filter standard deviation")->capture_default_str();
  cmd->add_option("--out-dir", p.out_dir, "output directory")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  using namespace dsmooth::cli;
  CLI::App app{"Double smoothing deconvolution and baselines"};
  app.require_subcommand(1);

  SynthOptions synth;
  auto* synth_cmd = app.add_subcommand("synth", "write the built-in blobs test image as PGM");
  synth_cmd->add_option("--rows", synth.rows)->capture_default_str();
  synth_cmd->add_option("--cols", synth.cols)->capture_default_str();
  synth_cmd->add_option("--out", synth.out)->required();

  BlurOptions blur;
  auto* blur_cmd = app.add_subcommand("blur", "blur an image and add Gaussian noise");
  blur_cmd->add_option("--image", blur.image, "input PGM")->required();
  blur_cmd->add_option("--size", blur.size)->capture_default_str();
  blur_cmd->add_option("--sigma", blur.sigma)->capture_default_str();
  blur_cmd->add_option("--noise-std", blur.noise_std)->capture_default_str();
  blur_cmd->add_option("--seed", blur.seed)->capture_default_str();
  blur_cmd->add_option("--scale", blur.scale, "pixel range of the loaded image")->capture_default_str();
  blur_cmd->add_option("--out", blur.out, "output PGM; .vec and .manifest are written beside it")->required();

  SolveOptions solve;
  auto* solve_cmd = app.add_subcommand("solve", "run double smoothing on a deblurring problem");
  add_problem_flags(solve_cmd, solve.problem);
  solve_cmd->add_option("--max-iters", solve.problem.max_iters)->capture_default_str();
  solve_cmd->add_option("--log-every", solve.log_every, "write x_f every N iterations (0: final only)")
      ->capture_default_str();

  CompareOptions compare;
  auto* compare_cmd = app.add_subcommand("compare", "run ds, ista and fista on the same instance");
  add_problem_flags(compare_cmd, compare.problem);
  compare_cmd->add_option("--methods", compare.methods)->capture_default_str();
  compare_cmd->add_option("--iters", compare.iters)->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  const Logger log(log_level_from_env(), std::cerr);
  try {
    if (*synth_cmd) return cmd_synth(synth, log);
    if (*blur_cmd) return cmd_blur(blur, log);
    if (*solve_cmd) return cmd_solve(solve, log);
    if (*compare_cmd) return cmd_compare(compare, log);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
