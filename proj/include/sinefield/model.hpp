#pragma once

#include <string>
#include <vector>

#include "sinefield/types.hpp"

namespace sf {

enum class Activation { SineField, ReluPosEnc };

struct Layer {
  Matrix weight;  // d_i x d_{i-1}
  Vector bias;    // d_i
};

// An l-layer MLP: l-1 activated layers plus a linear output layer. For
// SineField the frequency multipliers live inside the activation,
// sin(omega * (W z + b)), so the weight scale and the frequency stay
// independent knobs. ReluPosEnc applies a fixed positional encoding to the
// raw coordinates before the first layer and uses plain ReLU elsewhere.
struct SnfParams {
  std::vector<Layer> layers;
  double omega0 = 30.0;
  double omega_h = 30.0;
  Activation activation = Activation::SineField;
  int posenc_freqs = 0;  // K for ReluPosEnc, 0 otherwise

  Index depth() const { return static_cast<Index>(layers.size()); }
  std::vector<Index> dims() const;  // d_0 .. d_l as seen by the first layer
  Index param_count() const;
  // Raw coordinate dimension: d_0 for SineField, d_0 = dims()[0] / (2K) for
  // ReluPosEnc.
  Index coord_dim() const;
};

// Throws ShapeError when consecutive layer dimensions do not chain or the
// frequency multipliers are not positive.
void validate(const SnfParams& params);

struct ForwardTrace {
  // acts[0] is the (possibly encoded) network input, acts[i] = Z^(i) for the
  // activated layers. pre[i] is W z + b of layer i+1 before the frequency
  // multiplier; pre.back() equals output.
  std::vector<Matrix> acts;
  std::vector<Matrix> pre;
  Matrix output;
};

ForwardTrace forward(const SnfParams& params, const Matrix& X);

// Gradients of 1/2 ||residual||^2 accumulated through the trace, where
// residual = prediction - target. Same shapes as params.layers.
std::vector<Layer> backward(const SnfParams& params, const ForwardTrace& trace,
                            const Matrix& residual);

// Flattens gradients (or parameters) in the documented order: layer 1
// weights row-major, layer 1 bias, layer 2 weights, ...
Vector flatten(const std::vector<Layer>& layers);

// Gradient of the scalar output with respect to every parameter at a single
// coordinate, flattened in the documented order. Requires a single input
// column and output dimension 1.
Vector per_example_grad(const SnfParams& params, const Matrix& x);

// gamma(x): sin(2^k pi x_i), cos(2^k pi x_i) for k = 0..K-1, grouped per
// input dimension. Output length 2*K*dim(x).
Vector positional_encode(const Vector& x, int K);

// Checkpoint files: a text header line followed by the parameter stream as
// little-endian f64 in the flatten() order. SineField headers read
// "SNF1 <depth> <d0> ... <dl> <omega0> <omega_h>\n"; ReluPosEnc uses
// "RPE1 <K> <depth> <d0> ... <dl>\n".
void save_checkpoint(const SnfParams& params, const std::string& path);
SnfParams load_checkpoint(const std::string& path);

}  // namespace sf
