#include "sinefield/config.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "sinefield/errors.hpp"
#include "sinefield/init.hpp"

namespace sf {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

[[noreturn]] void bad(long line, const std::string& msg) {
  throw ConfigError("config line " + std::to_string(line) + ": " + msg);
}

double to_real(const std::string& v, long line, const std::string& key) {
  try {
    std::size_t used = 0;
    const double x = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    bad(line, "expected a number for '" + key + "', got '" + v + "'");
  }
}

long to_int(const std::string& v, long line, const std::string& key) {
  try {
    std::size_t used = 0;
    const long x = std::stol(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    bad(line, "expected an integer for '" + key + "', got '" + v + "'");
  }
}

std::uint64_t to_u64(const std::string& v, long line, const std::string& key) {
  try {
    std::size_t used = 0;
    const unsigned long long x = std::stoull(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    bad(line, "expected an unsigned integer for '" + key + "', got '" + v + "'");
  }
}

bool to_bool(const std::string& v, long line, const std::string& key) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  bad(line, "expected true/false for '" + key + "', got '" + v + "'");
}

Task to_task(const std::string& v, long line) {
  if (v == "image") return Task::Image;
  if (v == "audio") return Task::Audio;
  if (v == "sphere") return Task::Sphere;
  if (v == "occupancy") return Task::Occupancy;
  if (v == "synth") return Task::Synth;
  bad(line, "unknown task '" + v + "'");
}

void validate_config(const ExperimentConfig& c) {
  auto require = [](bool ok, const std::string& msg) {
    if (!ok) throw ConfigError("config: " + msg);
  };
  require(c.depth >= 2, "depth must be >= 2");
  require(c.width >= 1, "width must be >= 1");
  require(c.omega0 > 0.0 && c.omega_h > 0.0, "omega0/omega_h must be positive");
  require(c.alpha > 0.0, "alpha must be positive");
  require(c.lr > 0.0, "lr must be positive");
  require(c.adam_beta1 > 0.0 && c.adam_beta1 < 1.0, "adam_beta1 must be in (0,1)");
  require(c.adam_beta2 > 0.0 && c.adam_beta2 < 1.0, "adam_beta2 must be in (0,1)");
  require(c.adam_eps > 0.0, "adam_eps must be positive");
  require(c.steps >= 0, "steps must be >= 0");
  require(c.batch >= 0, "batch must be 'full' or a positive count");
  require(c.target_psnr > 0.0 && std::isfinite(c.target_psnr),
          "target_psnr must be positive and finite");
  require(c.eval_every >= 1, "eval_every must be >= 1");
  require(c.train_stride >= 1, "train_stride must be >= 1");
  require(c.posenc_k >= 1, "posenc_k must be >= 1");
  require(c.optimizer == "adam" || c.optimizer == "gd", "optimizer must be adam or gd");
  require(c.activation == "sine" || c.activation == "relu_pe",
          "activation must be sine or relu_pe");
  require(c.plan == "uniform" || c.plan == "functional_only" || c.plan == "gradient_only",
          "plan must be uniform, functional_only or gradient_only");
  require(c.n_grid >= 2, "n_grid must be >= 2");
  require(c.n_bands >= 1, "n_bands must be >= 1");
  require(c.kernel_k >= 1, "kernel_k must be >= 1");
  require(c.dist_samples >= 10000, "dist_samples must be >= 10^4");
  require(c.expand_lmax >= 1 && c.expand_lmax % 2 == 1, "expand_lmax must be odd");
  require(c.synth_n >= 2, "synth_n must be >= 2");
  require(c.audio_samples >= 1, "audio_samples must be >= 1");
  require(c.occ_n >= 1, "occ_n must be >= 1");
  require(c.occ_radius > 0.0, "occ_radius must be positive");
  if (c.sweep) {
    require(c.sweep->param == "alpha" || c.sweep->param == "omega0",
            "sweep_param must be alpha or omega0");
    require(c.sweep->lo <= c.sweep->hi, "sweep lo must be <= hi");
    require(c.sweep->step > 0.0, "sweep_step must be positive");
  }
  try {
    parse_init_token(c.init, c.alpha);
  } catch (const InvalidArgument& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
  ExperimentConfig c;
  bool alpha_set = false, lr_set = false;
  std::map<std::string, std::string> sweep_keys;

  std::istringstream in(text);
  std::string raw;
  long lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    const auto hash = raw.find('#');
    std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) bad(lineno, "expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (key.empty() || val.empty()) bad(lineno, "expected 'key = value'");

    if (key == "task") c.task = to_task(val, lineno);
    else if (key == "data_path") c.data_path = val;
    else if (key == "depth") c.depth = to_int(val, lineno, key);
    else if (key == "width") c.width = to_int(val, lineno, key);
    else if (key == "omega0") c.omega0 = to_real(val, lineno, key);
    else if (key == "omega_h") c.omega_h = to_real(val, lineno, key);
    else if (key == "init") c.init = val;
    else if (key == "alpha") { c.alpha = to_real(val, lineno, key); alpha_set = true; }
    else if (key == "plan") c.plan = val;
    else if (key == "lr") { c.lr = to_real(val, lineno, key); lr_set = true; }
    else if (key == "optimizer") c.optimizer = val;
    else if (key == "adam_beta1") c.adam_beta1 = to_real(val, lineno, key);
    else if (key == "adam_beta2") c.adam_beta2 = to_real(val, lineno, key);
    else if (key == "adam_eps") c.adam_eps = to_real(val, lineno, key);
    else if (key == "steps") c.steps = to_int(val, lineno, key);
    else if (key == "batch") c.batch = (val == "full") ? 0 : to_int(val, lineno, key);
    else if (key == "target_psnr") c.target_psnr = to_real(val, lineno, key);
    else if (key == "eval_every") c.eval_every = to_int(val, lineno, key);
    else if (key == "stop_at_target") c.stop_at_target = to_bool(val, lineno, key);
    else if (key == "train_stride") c.train_stride = to_int(val, lineno, key);
    else if (key == "seed") c.seed = to_u64(val, lineno, key);
    else if (key == "out") c.out = val;
    else if (key == "activation") c.activation = val;
    else if (key == "posenc_k") c.posenc_k = static_cast<int>(to_int(val, lineno, key));
    else if (key == "sweep_param" || key == "sweep_lo" || key == "sweep_hi" ||
             key == "sweep_step")
      sweep_keys[key] = val;
    else if (key == "n_grid") c.n_grid = to_int(val, lineno, key);
    else if (key == "n_bands") c.n_bands = to_int(val, lineno, key);
    else if (key == "kernel_k") c.kernel_k = to_int(val, lineno, key);
    else if (key == "dist_samples") c.dist_samples = to_int(val, lineno, key);
    else if (key == "expand_w1") c.expand_w1 = to_real(val, lineno, key);
    else if (key == "expand_w2") c.expand_w2 = to_real(val, lineno, key);
    else if (key == "expand_w3") c.expand_w3 = to_real(val, lineno, key);
    else if (key == "expand_lmax") c.expand_lmax = static_cast<int>(to_int(val, lineno, key));
    else if (key == "synth_components") c.synth_components = val;
    else if (key == "synth_n") c.synth_n = to_int(val, lineno, key);
    else if (key == "audio_samples") c.audio_samples = to_int(val, lineno, key);
    else if (key == "occ_n") c.occ_n = to_int(val, lineno, key);
    else if (key == "occ_radius") c.occ_radius = to_real(val, lineno, key);
    else if (key == "iou_threshold") c.iou_threshold = to_real(val, lineno, key);
    else bad(lineno, "unknown key '" + key + "'");
  }

  if (!sweep_keys.empty()) {
    SweepSpec s;
    if (sweep_keys.count("sweep_param")) s.param = sweep_keys["sweep_param"];
    if (sweep_keys.count("sweep_lo")) s.lo = to_real(sweep_keys["sweep_lo"], 0, "sweep_lo");
    if (sweep_keys.count("sweep_hi")) s.hi = to_real(sweep_keys["sweep_hi"], 0, "sweep_hi");
    if (sweep_keys.count("sweep_step"))
      s.step = to_real(sweep_keys["sweep_step"], 0, "sweep_step");
    if (s.param == "omega0") {
      s.lo = sweep_keys.count("sweep_lo") ? s.lo : 10.0;
      s.hi = sweep_keys.count("sweep_hi") ? s.hi : 90.0;
      s.step = sweep_keys.count("sweep_step") ? s.step : 10.0;
    }
    c.sweep = s;
  }

  // per-domain defaults from the hyperparameter table
  if (!alpha_set) {
    switch (c.task) {
      case Task::Image: c.alpha = 2.37; break;
      case Task::Occupancy: c.alpha = 3.7; break;
      case Task::Sphere: c.alpha = 2.5; break;
      case Task::Audio: c.alpha = 2.0; break;
      case Task::Synth: c.alpha = 1.0; break;
    }
  }
  if (!lr_set && c.task == Task::Sphere) c.lr = 1e-5;

  validate_config(c);
  return c;
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoError("config: cannot open " + path);
  std::ostringstream buf;
  buf << f.rdbuf();
  return parse_config(buf.str());
}

}  // namespace sf
