#include "sinefield/init.hpp"

#include <cmath>
#include <functional>

#include "sinefield/errors.hpp"
#include "sinefield/prng.hpp"

namespace sf {

namespace {

void check_dims(const std::vector<Index>& dims) {
  if (dims.size() < 2) throw ShapeError("init: need at least input and output dims");
  for (Index d : dims)
    if (d < 1) throw ShapeError("init: dimensions must be >= 1");
}

double standard_bound(const std::vector<Index>& dims, double omega_h, std::size_t layer) {
  const double fan_in = static_cast<double>(dims[layer]);
  if (layer == 0) return 1.0 / fan_in;
  return std::sqrt(6.0) / (omega_h * std::sqrt(fan_in));
}

// Draws every layer from the given weight-bound rule; the draw order (per
// layer: weights row-major, then bias) is shared by all schemes so that
// schemes differing in bounds only still consume the same stream.
SnfParams init_with_bounds(const std::vector<Index>& dims, double omega0, double omega_h,
                           std::uint64_t seed,
                           const std::function<double(std::size_t)>& weight_bound) {
  check_dims(dims);
  if (!(omega0 > 0.0) || !(omega_h > 0.0))
    throw InvalidArgument("init: frequency multipliers must be positive");
  Prng rng(seed);
  SnfParams p;
  p.omega0 = omega0;
  p.omega_h = omega_h;
  p.layers.resize(dims.size() - 1);
  for (std::size_t i = 0; i + 1 < dims.size(); ++i) {
    const double wb = weight_bound(i);
    const double bb = 1.0 / std::sqrt(static_cast<double>(dims[i]));
    auto& l = p.layers[i];
    l.weight = uniform_fill(rng, dims[i + 1], dims[i], -wb, wb);
    l.bias = uniform_fill(rng, dims[i + 1], 1, -bb, bb);
  }
  return p;
}

}  // namespace

SnfParams init_standard(const std::vector<Index>& dims, double omega0, double omega_h,
                        std::uint64_t seed) {
  return init_with_bounds(dims, omega0, omega_h, seed,
                          [&](std::size_t i) { return standard_bound(dims, omega_h, i); });
}

SnfParams init_weight_scaled(const std::vector<Index>& dims, double alpha, double omega0,
                             double omega_h, std::uint64_t seed) {
  if (!(alpha > 0.0)) throw InvalidArgument("init_weight_scaled: alpha must be > 0");
  SnfParams p = init_standard(dims, omega0, omega_h, seed);
  // scale after drawing: alpha = 1 stays bit-identical to the standard draw
  for (std::size_t i = 0; i + 1 < p.layers.size(); ++i) p.layers[i].weight *= alpha;
  return p;
}

SnfParams init_xavier(const std::vector<Index>& dims, double omega0, double omega_h,
                      std::uint64_t seed) {
  return init_with_bounds(dims, omega0, omega_h, seed, [&](std::size_t i) {
    return std::sqrt(6.0) / std::sqrt(static_cast<double>(dims[i] + dims[i + 1]));
  });
}

SnfParams init_nfsl(const std::vector<Index>& dims, double omega0, double omega_h,
                    std::uint64_t seed) {
  const std::size_t last = dims.size() - 2;
  return init_with_bounds(dims, omega0, omega_h, seed, [&, last](std::size_t i) {
    if (i == last)
      return std::sqrt(6.0) / (omega_h * std::pow(static_cast<double>(dims[i]), 0.75));
    return standard_bound(dims, omega_h, i);
  });
}

SnfParams make_params(const InitSpec& spec, const std::vector<Index>& dims, double omega0,
                      double omega_h) {
  switch (spec.scheme) {
    case Scheme::Standard:
      return init_standard(dims, omega0, omega_h, spec.seed);
    case Scheme::WeightScaled:
      return init_weight_scaled(dims, spec.alpha, omega0, omega_h, spec.seed);
    case Scheme::Xavier:
      return init_xavier(dims, omega0, omega_h, spec.seed);
    case Scheme::Nfsl:
      return init_nfsl(dims, omega0, omega_h, spec.seed);
  }
  throw InvalidArgument("make_params: unknown scheme");
}

InitSpec parse_init_token(const std::string& token, double fallback_alpha) {
  InitSpec spec;
  if (token == "standard") {
    spec.scheme = Scheme::Standard;
  } else if (token == "xavier") {
    spec.scheme = Scheme::Xavier;
  } else if (token == "nfsl") {
    spec.scheme = Scheme::Nfsl;
  } else if (token == "ws") {
    spec.scheme = Scheme::WeightScaled;
    spec.alpha = fallback_alpha;
  } else if (token.rfind("ws:", 0) == 0) {
    spec.scheme = Scheme::WeightScaled;
    std::size_t used = 0;
    try {
      spec.alpha = std::stod(token.substr(3), &used);
    } catch (const std::exception&) {
      throw InvalidArgument("init token: bad alpha in '" + token + "'");
    }
    if (used != token.size() - 3 || !(spec.alpha > 0.0))
      throw InvalidArgument("init token: bad alpha in '" + token + "'");
  } else {
    throw InvalidArgument("init token: unknown scheme '" + token + "'");
  }
  return spec;
}

LrPlan lr_plan_uniform(Index depth, double base_lr) {
  LrPlan plan;
  plan.base_lr = base_lr;
  plan.per_layer.assign(static_cast<std::size_t>(depth), 1.0);
  return plan;
}

LrPlan lr_plan_functional_only(double alpha, Index depth, double base_lr) {
  if (!(alpha >= 1.0)) throw InvalidArgument("lr_plan_functional_only: alpha must be >= 1");
  LrPlan plan;
  plan.base_lr = base_lr;
  plan.per_layer.resize(static_cast<std::size_t>(depth));
  for (Index k = 1; k <= depth; ++k)
    plan.per_layer[static_cast<std::size_t>(k - 1)] =
        std::pow(alpha, -static_cast<double>(depth - k));
  return plan;
}

LrPlan lr_plan_gradient_only(double alpha, Index depth, double base_lr) {
  if (!(alpha >= 1.0)) throw InvalidArgument("lr_plan_gradient_only: alpha must be >= 1");
  LrPlan plan;
  plan.base_lr = base_lr;
  plan.per_layer.resize(static_cast<std::size_t>(depth));
  for (Index k = 1; k <= depth; ++k)
    plan.per_layer[static_cast<std::size_t>(k - 1)] =
        std::pow(alpha, static_cast<double>(depth - k));
  return plan;
}

}  // namespace sf
