#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sinefield/model.hpp"
#include "sinefield/types.hpp"

namespace sf {

enum class Scheme { Standard, WeightScaled, Xavier, Nfsl };

struct InitSpec {
  Scheme scheme = Scheme::Standard;
  double alpha = 1.0;  // only used by WeightScaled
  std::uint64_t seed = 0;
};

// Per-layer learning-rate multipliers; the uniform plan is all ones.
struct LrPlan {
  double base_lr = 1e-4;
  std::vector<double> per_layer;
};

// Standard scheme: first-layer weights ~ Unif(-1/d0, 1/d0), deeper layers
// ~ Unif(+-sqrt(6)/(omega_h sqrt(d_{i-1}))). Biases are always
// Unif(+-1/sqrt(d_{i-1})) under every scheme and never scaled.
SnfParams init_standard(const std::vector<Index>& dims, double omega0, double omega_h,
                        std::uint64_t seed);

// Standard draws with every weight matrix except the last multiplied by
// alpha. alpha = 1 is bit-identical to init_standard under the same seed.
SnfParams init_weight_scaled(const std::vector<Index>& dims, double alpha, double omega0,
                             double omega_h, std::uint64_t seed);

// Every layer ~ Unif(+-sqrt(6)/sqrt(d_{i-1}+d_i)).
SnfParams init_xavier(const std::vector<Index>& dims, double omega0, double omega_h,
                      std::uint64_t seed);

// Standard except the last-layer bound uses d^(3/4) instead of d^(1/2).
SnfParams init_nfsl(const std::vector<Index>& dims, double omega0, double omega_h,
                    std::uint64_t seed);

SnfParams make_params(const InitSpec& spec, const std::vector<Index>& dims, double omega0,
                      double omega_h);

// Config token: standard | ws | ws:<alpha> | xavier | nfsl. A bare "ws"
// takes fallback_alpha.
InitSpec parse_init_token(const std::string& token, double fallback_alpha);

LrPlan lr_plan_uniform(Index depth, double base_lr);

// Multiplier alpha^-(l-k) for layer k: pairs with WeightScaled(alpha) so the
// update magnitudes match the unscaled run while the scaled initial
// functional is kept. Requires alpha >= 1.
LrPlan lr_plan_functional_only(double alpha, Index depth, double base_lr);

// Multiplier alpha^(l-k) for layer k: pairs with Standard init to mimic only
// the amplified early-layer gradients. Requires alpha >= 1.
LrPlan lr_plan_gradient_only(double alpha, Index depth, double base_lr);

}  // namespace sf
