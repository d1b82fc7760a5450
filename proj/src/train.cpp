#include "sinefield/train.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "sinefield/errors.hpp"
#include "sinefield/prng.hpp"

namespace sf {

double mse(const Matrix& pred, const Matrix& target) {
  if (pred.rows() != target.rows() || pred.cols() != target.cols())
    throw ShapeError("mse: shapes differ");
  return (pred - target).squaredNorm() / static_cast<double>(pred.size());
}

double psnr(double mse_value, double peak) {
  if (mse_value < 0.0) throw InvalidArgument("psnr: negative mse");
  if (!(peak > 0.0)) throw InvalidArgument("psnr: peak must be positive");
  if (mse_value == 0.0) return 99.0;  // documented cap, keeps reports numeric
  return 10.0 * std::log10(peak * peak / mse_value);
}

double iou(const Matrix& pred, const Matrix& target_binary, double threshold) {
  if (pred.rows() != target_binary.rows() || pred.cols() != target_binary.cols())
    throw ShapeError("iou: shapes differ");
  long inter = 0, uni = 0;
  for (Index c = 0; c < pred.cols(); ++c)
    for (Index r = 0; r < pred.rows(); ++r) {
      const double t = target_binary(r, c);
      if (t != 0.0 && t != 1.0) throw InvalidArgument("iou: target is not binary");
      const bool p = pred(r, c) >= threshold;
      const bool g = t == 1.0;
      inter += (p && g) ? 1 : 0;
      uni += (p || g) ? 1 : 0;
    }
  if (uni == 0) return 1.0;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

namespace {

struct AdamState {
  std::vector<Layer> m;
  std::vector<Layer> v;
  long t = 0;
};

AdamState make_adam_state(const SnfParams& p) {
  AdamState s;
  s.m.resize(p.layers.size());
  s.v.resize(p.layers.size());
  for (std::size_t i = 0; i < p.layers.size(); ++i) {
    s.m[i].weight = Matrix::Zero(p.layers[i].weight.rows(), p.layers[i].weight.cols());
    s.m[i].bias = Vector::Zero(p.layers[i].bias.size());
    s.v[i] = s.m[i];
  }
  return s;
}

template <typename T>
void adam_step(T& param, T& m, T& v, const T& g, const TrainConfig& cfg, double bc1,
               double bc2, double step) {
  m = cfg.beta1 * m + (1.0 - cfg.beta1) * g;
  v = cfg.beta2 * v + (1.0 - cfg.beta2) * g.cwiseProduct(g);
  param.array() -= step * (m.array() / bc1) / ((v.array() / bc2).sqrt() + cfg.eps);
}

void apply_update(SnfParams& p, const std::vector<Layer>& grads, const TrainConfig& cfg,
                  const LrPlan& plan, AdamState& adam) {
  if (cfg.optimizer == Optimizer::Gd) {
    for (std::size_t i = 0; i < p.layers.size(); ++i) {
      const double step = cfg.lr * plan.per_layer[i];
      p.layers[i].weight -= step * grads[i].weight;
      p.layers[i].bias -= step * grads[i].bias;
    }
    return;
  }
  ++adam.t;
  const double bc1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(adam.t));
  const double bc2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(adam.t));
  for (std::size_t i = 0; i < p.layers.size(); ++i) {
    const double step = cfg.lr * plan.per_layer[i];
    adam_step(p.layers[i].weight, adam.m[i].weight, adam.v[i].weight, grads[i].weight, cfg,
              bc1, bc2, step);
    adam_step(p.layers[i].bias, adam.m[i].bias, adam.v[i].bias, grads[i].bias, cfg, bc1, bc2,
              step);
  }
}

}  // namespace

std::pair<SnfParams, TrainReport> train(SnfParams params, const SignalDataset& data,
                                        const TrainConfig& cfg, const LrPlan& plan) {
  validate(params);
  if (plan.per_layer.size() != params.layers.size())
    throw ShapeError("train: lr plan length does not match depth");
  for (double m : plan.per_layer)
    if (!(m > 0.0)) throw InvalidArgument("train: lr multipliers must be positive");
  if (!(cfg.lr > 0.0)) throw InvalidArgument("train: lr must be positive");
  if (data.train_idx.empty()) throw InvalidArgument("train: empty train split");
  if (data.coords.rows() != params.coord_dim())
    throw ShapeError("train: dataset dimension does not match network input");
  if (cfg.batch_size > static_cast<Index>(data.train_idx.size()))
    throw InvalidArgument("train: batch size exceeds train set");

  const auto t0 = std::chrono::steady_clock::now();
  const Matrix x_train = gather_cols(data.coords, data.train_idx);
  const Matrix y_train = gather_cols(data.targets, data.train_idx);
  const Matrix x_test = gather_cols(data.coords, data.test_idx);
  const Matrix y_test = gather_cols(data.targets, data.test_idx);
  const bool full_batch = cfg.batch_size == 0;
  Prng sampler(cfg.seed);

  TrainReport report;
  auto evaluate = [&](long step) {
    ReportRow row;
    row.step = step;
    row.train_mse = mse(forward(params, x_train).output, y_train);
    if (!std::isfinite(row.train_mse))
      throw DivergenceError("train: non-finite loss at step " + std::to_string(step), step);
    row.train_psnr_db = psnr(row.train_mse, data.peak);
    row.test_psnr_db = std::numeric_limits<double>::quiet_NaN();
    if (x_test.cols() > 0)
      row.test_psnr_db = psnr(mse(forward(params, x_test).output, y_test), data.peak);
    report.rows.push_back(row);
    if (!report.steps_to_target && row.train_psnr_db >= cfg.target_train_psnr)
      report.steps_to_target = step;
  };

  evaluate(0);
  AdamState adam = (cfg.optimizer == Optimizer::Adam) ? make_adam_state(params) : AdamState{};
  const bool done_at_start = cfg.stop_at_target && report.steps_to_target.has_value();
  for (long step = 1; !done_at_start && step <= cfg.max_steps; ++step) {
    Matrix xb, yb;
    if (full_batch) {
      xb = x_train;
      yb = y_train;
    } else {
      std::vector<Index> pick(static_cast<std::size_t>(cfg.batch_size));
      for (auto& i : pick) {
        const auto j = static_cast<std::size_t>(sampler.uniform(0.0, 1.0) *
                                                static_cast<double>(data.train_idx.size()));
        i = data.train_idx[std::min(j, data.train_idx.size() - 1)];
      }
      xb = gather_cols(data.coords, pick);
      yb = gather_cols(data.targets, pick);
    }
    ForwardTrace trace = forward(params, xb);
    Matrix residual = trace.output - yb;
    const double batch_loss = residual.squaredNorm() / static_cast<double>(residual.size());
    if (!std::isfinite(batch_loss))
      throw DivergenceError("train: non-finite loss at step " + std::to_string(step), step);
    // d(mse)/d(output) = 2 r / n; backward itself computes d(1/2||r||^2)
    residual *= 2.0 / static_cast<double>(residual.size());
    const auto grads = backward(params, trace, residual);
    apply_update(params, grads, cfg, plan, adam);

    if (step % cfg.eval_every == 0 || step == cfg.max_steps) {
      evaluate(step);
      if (cfg.stop_at_target && report.steps_to_target) break;
    }
  }

  report.wall_ms = std::chrono::duration<double, std::milli>(
                       std::chrono::steady_clock::now() - t0)
                       .count();
  return {std::move(params), std::move(report)};
}

std::optional<double> speed(const TrainReport& report) {
  if (!report.steps_to_target) return std::nullopt;
  const long steps = std::max<long>(1, *report.steps_to_target);
  return 1.0 / static_cast<double>(steps);
}

void write_report_csv(const TrainReport& report, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw IoError("write_report_csv: cannot open " + path);
  f << "step,train_mse,train_psnr_db,test_psnr_db\n";
  char buf[96];
  for (const auto& row : report.rows) {
    if (std::isnan(row.test_psnr_db))
      std::snprintf(buf, sizeof buf, "%ld,%.10g,%.10g,\n", row.step, row.train_mse,
                    row.train_psnr_db);
    else
      std::snprintf(buf, sizeof buf, "%ld,%.10g,%.10g,%.10g\n", row.step, row.train_mse,
                    row.train_psnr_db, row.test_psnr_db);
    f << buf;
  }
  if (!f) throw IoError("write_report_csv: write failed for " + path);
}

}  // namespace sf
