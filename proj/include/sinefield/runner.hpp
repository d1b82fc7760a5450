#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sinefield/config.hpp"
#include "sinefield/data.hpp"
#include "sinefield/init.hpp"
#include "sinefield/model.hpp"
#include "sinefield/train.hpp"

namespace sf {

SignalDataset build_dataset(const ExperimentConfig& cfg);
SnfParams build_params(const ExperimentConfig& cfg);
LrPlan build_plan(const ExperimentConfig& cfg);
TrainConfig build_train_config(const ExperimentConfig& cfg);

struct FitOutcome {
  SnfParams params;
  TrainReport report;
  std::string report_csv;
  std::string checkpoint;
};

// Trains per config and writes <out>/report.csv plus <out>/checkpoint.snf.
FitOutcome run_fit(const ExperimentConfig& cfg);

struct SweepRow {
  double value = 0.0;
  std::optional<long> steps_to_target;
  std::optional<double> speed_value;
  double final_test_psnr = 0.0;
  bool constraint_ok = false;
};

struct SweepOutcome {
  std::vector<SweepRow> rows;
  std::optional<double> optimum;  // none when no feasible point
  std::string csv;
};

// Grid search over alpha or omega0. Each grid point trains independently
// (SINEFIELD_THREADS caps the worker count); the emitted CSV keeps grid
// order. The grid must contain the baseline point (alpha = 1 or the default
// omega0 = 30) that anchors the test-PSNR constraint. Feasible rows satisfy
// TestPSNR(v) >= 0.95 TestPSNR(baseline); the optimum maximizes speed with
// ties broken toward the smaller parameter value.
SweepOutcome run_sweep(const ExperimentConfig& cfg);

// kind: spectrum | bands | ntk | distcheck | gradscale | expand. Writes the
// matching CSV schema under cfg.out.
void run_analysis(const ExperimentConfig& cfg, const std::string& kind);

// Full command-line front end; returns the process exit code
// (0 ok, 1 usage/config, 2 numerical, 3 io).
int cli_main(const std::vector<std::string>& args);

}  // namespace sf
