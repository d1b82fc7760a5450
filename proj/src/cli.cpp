#include <CLI11.hpp>
#include <cstdio>
#include <string>
#include <vector>

#include "sinefield/errors.hpp"
#include "sinefield/runner.hpp"

namespace sf {

namespace {

int dispatch(const std::string& verb, const ExperimentConfig& cfg) {
  if (verb == "fit") {
    const FitOutcome out = run_fit(cfg);
    std::printf("wrote %s and %s\n", out.report_csv.c_str(), out.checkpoint.c_str());
    const auto& last = out.report.rows.back();
    std::printf("final: step %ld, train %.4g dB", last.step, last.train_psnr_db);
    if (out.report.steps_to_target)
      std::printf(", target reached at step %ld", *out.report.steps_to_target);
    std::printf("\n");
    return 0;
  }
  if (verb == "sweep") {
    const SweepOutcome out = run_sweep(cfg);
    std::printf("wrote %s\n", out.csv.c_str());
    if (out.optimum)
      std::printf("optimum %s = %.10g\n", cfg.sweep->param.c_str(), *out.optimum);
    else
      std::printf("no feasible point\n");
    return 0;
  }
  run_analysis(cfg, verb);
  return 0;
}

}  // namespace

int cli_main(const std::vector<std::string>& args) {
  CLI::App app{"sinusoidal neural field workbench"};
  app.require_subcommand(1);

  std::string config_path, out_override;
  bool have_seed = false;
  std::uint64_t seed_override = 0;
  app.add_option("--config", config_path, "experiment config file (key = value lines)");
  app.add_option("--out", out_override, "output directory override");
  app.add_option("--seed", seed_override, "seed override")
      ->each([&](const std::string&) { have_seed = true; });

  const std::vector<std::string> verbs = {"fit",      "sweep",     "spectrum", "bands",
                                          "ntk",      "distcheck", "gradscale", "expand"};
  for (const auto& v : verbs) app.add_subcommand(v)->fallthrough();

  try {
    // CLI11 parses argv-style reversed vectors
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    ExperimentConfig cfg =
        config_path.empty() ? parse_config("") : load_config_file(config_path);
    if (!out_override.empty()) cfg.out = out_override;
    if (have_seed) cfg.seed = seed_override;
    return dispatch(app.get_subcommands().front()->get_name(), cfg);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 1;
  } catch (const DivergenceError& e) {
    std::fprintf(stderr, "numerical error: %s (step %ld)\n", e.what(), e.step);
    return 2;
  } catch (const InvalidArgument& e) {
    std::fprintf(stderr, "numerical error: %s\n", e.what());
    return 2;
  } catch (const ShapeError& e) {
    std::fprintf(stderr, "numerical error: %s\n", e.what());
    return 2;
  } catch (const ResourceError& e) {
    std::fprintf(stderr, "numerical error: %s\n", e.what());
    return 2;
  } catch (const FormatError& e) {
    std::fprintf(stderr, "io error: %s\n", e.what());
    return 3;
  } catch (const IoError& e) {
    std::fprintf(stderr, "io error: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}

}  // namespace sf
