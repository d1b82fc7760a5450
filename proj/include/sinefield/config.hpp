#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "sinefield/types.hpp"

namespace sf {

enum class Task { Image, Audio, Sphere, Occupancy, Synth };

struct SweepSpec {
  std::string param = "alpha";  // alpha | omega0
  double lo = 1.0;
  double hi = 4.0;
  double step = 0.2;
};

// Parsed "key = value" experiment description. Unset task-dependent fields
// (alpha, lr) resolve to the per-domain defaults after parsing.
struct ExperimentConfig {
  Task task = Task::Image;
  std::string data_path;
  Index depth = 5;
  Index width = 64;
  double omega0 = 30.0;
  double omega_h = 30.0;
  std::string init = "ws";  // standard | ws | ws:<alpha> | xavier | nfsl
  double alpha = 2.37;
  std::string plan = "uniform";  // uniform | functional_only | gradient_only
  double lr = 1e-4;
  std::string optimizer = "adam";  // adam | gd
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_eps = 1e-8;
  long steps = 2000;
  Index batch = 0;  // 0 = full
  double target_psnr = 30.0;
  long eval_every = 1;
  bool stop_at_target = true;
  Index train_stride = 2;
  std::uint64_t seed = 0;
  std::string out = "out";
  std::string activation = "sine";  // sine | relu_pe
  int posenc_k = 10;
  std::optional<SweepSpec> sweep;

  // analysis knobs
  Index n_grid = 512;
  Index n_bands = 16;
  Index kernel_k = 5;
  Index dist_samples = 100000;
  double expand_w1 = 1.0;
  double expand_w2 = 0.5;
  double expand_w3 = 1.0;
  int expand_lmax = 31;

  // task fixtures
  std::string synth_components = "1:1:0;0.5:4:0.5;0.25:9:1";
  Index synth_n = 512;
  Index audio_samples = 16000;
  Index occ_n = 32;
  double occ_radius = 0.5;
  double iou_threshold = 0.5;
};

// "key = value" lines with '#' comments. Unknown keys and malformed lines
// raise ConfigError (with the line number); missing keys take the documented
// defaults, with alpha and lr resolved per task when not set explicitly.
ExperimentConfig parse_config(const std::string& text);

ExperimentConfig load_config_file(const std::string& path);

}  // namespace sf
