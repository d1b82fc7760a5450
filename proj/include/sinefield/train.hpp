#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sinefield/data.hpp"
#include "sinefield/init.hpp"
#include "sinefield/model.hpp"
#include "sinefield/types.hpp"

namespace sf {

enum class Optimizer { Gd, Adam };

struct TrainConfig {
  long max_steps = 2000;
  double lr = 1e-4;
  Optimizer optimizer = Optimizer::Adam;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  Index batch_size = 0;  // 0 = full batch; otherwise sampled with replacement
  double target_train_psnr = 30.0;
  long eval_every = 1;
  bool stop_at_target = true;
  std::uint64_t seed = 0;  // drives the mini-batch sampler only
};

struct ReportRow {
  long step = 0;
  double train_mse = 0.0;
  double train_psnr_db = 0.0;
  double test_psnr_db = 0.0;  // NaN when the test set is empty
};

struct TrainReport {
  std::vector<ReportRow> rows;
  std::optional<long> steps_to_target;
  double wall_ms = 0.0;
};

double mse(const Matrix& pred, const Matrix& target);

// 10 log10(peak^2 / mse); mse = 0 returns the documented 99 dB sentinel so
// reports stay numeric.
double psnr(double mse_value, double peak);

// Thresholded intersection-over-union against a {0,1} target; an empty
// union counts as 1.
double iou(const Matrix& pred, const Matrix& target_binary, double threshold);

// Full-batch or mini-batch first-order training. Metrics are evaluated (and
// the PSNR target checked) at step 0, every eval_every steps, and the final
// step; the layer-k update is scaled by plan.per_layer[k]. Throws
// DivergenceError when the loss goes non-finite.
std::pair<SnfParams, TrainReport> train(SnfParams params, const SignalDataset& data,
                                        const TrainConfig& cfg, const LrPlan& plan);

// Reciprocal of steps-to-target; 0 steps count as 1 by convention.
std::optional<double> speed(const TrainReport& report);

// Columns step,train_mse,train_psnr_db,test_psnr_db; the test column is
// empty when there is no test set.
void write_report_csv(const TrainReport& report, const std::string& path);

}  // namespace sf
