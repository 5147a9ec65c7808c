#include <cstdio>
#include <filesystem>
#include <string>

#include <CLI11.hpp>

#include "antispec/classifier.hpp"
#include "antispec/errors.hpp"
#include "antispec/io.hpp"
#include "antispec/khare_mandal.hpp"
#include "antispec/planted.hpp"
#include "antispec/square_well.hpp"
#include "antispec/sweep.hpp"
#include "antispec/types.hpp"

namespace {

using namespace antispec;

// All the knobs a run can take; each subcommand reads the slice it needs.
struct RunConfig {
  std::string input, symmetry, output;
  std::string plan, out_h, out_a, out_expected;
  std::string model = "square-well-fd";
  std::string csv_path, json_path;
  double tol = kTolReal;
  double tol_param = kTolParam;
  double Z = 0.0;
  double zeta = 0.0;
  double from = 0.0, to = 0.0;
  int steps = 0;
  int N = 400;
  int M = 2;
  int grid = 2000;
  bool refine = false;
  std::uint64_t seed = 0;
  bool seed_given = false;
};

void require_readable(const std::string& path) {
  if (!std::filesystem::exists(path)) throw InvalidInput("no such input file: '" + path + "'");
}

void require_writable_dir(const std::string& path) {
  const auto parent = std::filesystem::path(path).parent_path();
  if (!parent.empty() && !std::filesystem::is_directory(parent))
    throw InvalidInput("output directory does not exist for '" + path + "'");
}

void run_classify(const RunConfig& cfg) {
  require_readable(cfg.input);
  require_readable(cfg.symmetry);
  if (!cfg.output.empty()) require_writable_dir(cfg.output);

  const CMatrix h = load_matrix(cfg.input);
  const AntiUnitaryOp a = load_antiunitary(cfg.symmetry);
  const ClassificationReport report = classify(h, a, cfg.tol);
  if (!cfg.output.empty()) save_report(report, cfg.output);
  std::printf("N*=%d N-=%d N+=%d n+=%d residual=%.6e\n", report.multiplicities.n_star,
              report.multiplicities.n_minus, report.multiplicities.n_plus,
              report.multiplicities.n_plus_1d, report.commutation_residual);
}

void run_model(const RunConfig& cfg) {
  require_writable_dir(cfg.out_h);
  require_writable_dir(cfg.out_a);
  const SquareWellModel model = build_square_well(cfg.Z, cfg.N);
  save_matrix(model.hamiltonian, cfg.out_h);
  save_antiunitary(model.symmetry, cfg.out_a);
  std::printf("square-well-fd Z=%g N=%d written\n", cfg.Z, cfg.N);
}

void run_sweep(const RunConfig& cfg) {
  if (!cfg.csv_path.empty()) require_writable_dir(cfg.csv_path);
  if (!cfg.json_path.empty()) require_writable_dir(cfg.json_path);

  SpectrumFamily family;
  if (cfg.model == "square-well-fd") {
    family = square_well_arnoldi_family(cfg.grid, 6);
  } else {
    family = square_well_matching_family(110.0);
  }

  if (!cfg.csv_path.empty() || !cfg.refine) {
    const SweepResult result = sweep(family, "Z", cfg.from, cfg.to, cfg.steps);
    if (!cfg.csv_path.empty()) write_sweep_csv(result, cfg.csv_path);
    if (result.has_transition)
      std::printf("transition near Z=%.9g (bracket %.3g)\n", result.transition_param,
                  result.transition_bracket);
    else
      std::printf("no transition in [%g, %g]\n", cfg.from, cfg.to);
  }

  if (cfg.refine) {
    const ThresholdResult th = find_threshold(family, cfg.from, cfg.to, cfg.tol_param);
    if (!cfg.json_path.empty()) save_threshold(th.value, th.bracket, cfg.json_path);
    std::printf("Z_c=%.12g bracket=%.3g pairs %d -> %d\n", th.value, th.bracket, th.pairs_below,
                th.pairs_above);
  } else if (!cfg.json_path.empty()) {
    std::fprintf(stderr, "warning: --json has no effect without --refine\n");
  }
}

void run_verify(const RunConfig& cfg) {
  if (!cfg.output.empty()) require_writable_dir(cfg.output);
  const KMReport report = khare_mandal_verify(cfg.M, cfg.zeta);
  if (!cfg.output.empty()) save_km_report(report, cfg.output);
  std::printf("M=%d zeta=%g representation=%s all_pass=%s\n", report.M, report.zeta,
              report.representation.c_str(), report.all_pass ? "true" : "false");
}

void run_gen(const RunConfig& cfg) {
  require_readable(cfg.plan);
  require_writable_dir(cfg.out_h);
  require_writable_dir(cfg.out_a);
  require_writable_dir(cfg.out_expected);

  PlantedPlan plan = load_plan(cfg.plan);
  if (cfg.seed_given) plan.seed = cfg.seed;
  const PlantedModel model = build_planted(plan);
  save_matrix(model.hamiltonian, cfg.out_h);
  save_antiunitary(model.symmetry, cfg.out_a);
  save_report(model.expected, cfg.out_expected);
  std::printf("planted dim=%d blocks=%zu seed=%llu\n", model.expected.dim, plan.blocks.size(),
              static_cast<unsigned long long>(plan.seed));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral classification of matrices with an anti-unitary symmetry"};
  app.require_subcommand(1);
  RunConfig cfg;

  CLI::App* classify_cmd =
      app.add_subcommand("classify", "Classify a spectrum into representation blocks");
  classify_cmd->add_option("--input", cfg.input, "Hamiltonian matrix JSON")->required();
  classify_cmd->add_option("--symmetry", cfg.symmetry, "anti-unitary operator JSON")->required();
  classify_cmd->add_option("--tol", cfg.tol, "pairing tolerance")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  classify_cmd->add_option("--output", cfg.output, "classification report JSON");

  CLI::App* model_cmd =
      app.add_subcommand("model", "Write the square-well Hamiltonian and symmetry files");
  model_cmd->add_option("--Z", cfg.Z, "imaginary coupling strength")->required();
  model_cmd->add_option("--N", cfg.N, "lattice points")
      ->check(CLI::Range(16, 1 << 20))
      ->capture_default_str();
  model_cmd->add_option("--out-h", cfg.out_h, "Hamiltonian JSON path")->required();
  model_cmd->add_option("--out-a", cfg.out_a, "symmetry JSON path")->required();

  CLI::App* sweep_cmd =
      app.add_subcommand("sweep", "Sweep the coupling and track spectral trajectories");
  sweep_cmd->add_option("--model", cfg.model, "spectrum backend")
      ->check(CLI::IsMember({"square-well-fd", "square-well-matching"}))
      ->capture_default_str();
  sweep_cmd->add_option("--from", cfg.from, "sweep start")->required();
  sweep_cmd->add_option("--to", cfg.to, "sweep end")->required();
  sweep_cmd->add_option("--steps", cfg.steps, "number of sample points")
      ->required()
      ->check(CLI::Range(2, 1 << 20));
  sweep_cmd->add_flag("--refine", cfg.refine, "bisect for the critical coupling");
  sweep_cmd->add_option("--csv", cfg.csv_path, "trajectory CSV path");
  sweep_cmd->add_option("--json", cfg.json_path, "threshold JSON path (with --refine)");
  sweep_cmd->add_option("--grid", cfg.grid, "lattice points for the fd backend")
      ->check(CLI::Range(16, 1 << 20))
      ->capture_default_str();
  sweep_cmd->add_option("--tol-param", cfg.tol_param, "bisection tolerance on the coupling")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  CLI::App* verify_cmd =
      app.add_subcommand("verify", "Check the closed-form hyperbolic model states");
  verify_cmd->add_option("--M", cfg.M, "model index")->required();
  verify_cmd->add_option("--zeta", cfg.zeta, "coupling")->required();
  verify_cmd->add_option("--output", cfg.output, "verification report JSON");

  CLI::App* gen_cmd = app.add_subcommand("gen", "Generate a planted model from a plan");
  gen_cmd->add_option("--plan", cfg.plan, "plan JSON path")->required();
  CLI::Option* seed_opt = gen_cmd->add_option("--seed", cfg.seed, "override the plan seed");
  gen_cmd->add_option("--out-h", cfg.out_h, "Hamiltonian JSON path")->required();
  gen_cmd->add_option("--out-a", cfg.out_a, "symmetry JSON path")->required();
  gen_cmd->add_option("--out-expected", cfg.out_expected, "expected report JSON path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }
  cfg.seed_given = seed_opt->count() > 0;

  try {
    if (classify_cmd->parsed()) run_classify(cfg);
    if (model_cmd->parsed()) run_model(cfg);
    if (sweep_cmd->parsed()) run_sweep(cfg);
    if (verify_cmd->parsed()) run_verify(cfg);
    if (gen_cmd->parsed()) run_gen(cfg);
  } catch (const SymmetryViolated& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const NotDiagonalizable& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const BracketInvalid& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 4;
  } catch (const OutOfRegime& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 5;
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
