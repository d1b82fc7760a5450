#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sinefield/data.hpp"
#include "sinefield/model.hpp"
#include "sinefield/prng.hpp"
#include "sinefield/types.hpp"

namespace sf {

struct SpectrumResult {
  std::vector<double> frequencies;  // cycles per unit coordinate, bin k -> k/2
  std::vector<double> magnitudes;
  double centroid = 0.0;  // magnitude-weighted mean frequency
};

struct DistCheckReport {
  std::vector<double> per_layer_ks;        // hidden layers 2..l-1
  std::vector<double> per_layer_variance;  // frequency-scaled pre-activation variance
  Index samples = 0;
};

struct KernelReport {
  Vector eigenvalues;   // descending, signs kept
  Matrix eigenvectors;  // orthonormal columns
  double condition_number = 0.0;
  std::vector<std::pair<double, double>> alignment;  // (threshold, energy)
  double residual_norm = 0.0;
};

struct BesselBound {
  double ratio = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  bool within = false;
};

// CDF of arcsin(-1,1): (2/pi) asin(sqrt((x+1)/2)), clamped to [-1,1].
double arcsine_cdf(double x);

// Evaluates a d0=1 network on n_grid uniform points over [-1,1), removes the
// mean so the DC term cannot swamp the centroid, and keeps DFT bins 0..n/2.
SpectrumResult model_spectrum_1d(const SnfParams& params, Index n_grid);

// Mean 2D-DFT magnitude per integer radial-frequency band; bands at or above
// n_bands-1 fold into the last band so the bands partition the spectrum.
std::vector<double> band_power_2d(const Matrix& img, Index n_bands);

// Odd-harmonic coefficients (l, 2 w3 J_l(w2)) of the width-1 bias-free
// depth-3 network w3 sin(w2 sin(w1 x)), for odd l <= l_max. Requires odd
// l_max and |w2| < pi/2 (the range where the truncated series is reliable).
std::vector<std::pair<int, double>> jacobi_anger_expand(double w1, double w2, double w3,
                                                        int l_max);

// Companion evaluator: sum of c_l sin(l w1 x).
double jacobi_anger_eval(const std::vector<std::pair<int, double>>& coeffs, double w1,
                         double x);

// Ratio J_{l+2}(w2)/J_l(w2) against the sandwich bounds
// w2^2/((2l+2)(2l+4)) < ratio < w2^2/((2l+1)(2l+3)). Requires w2 in
// (0, pi/2) and odd positive l.
BesselBound bessel_bound_check(double w2, int ell);

// Feeds n_samples uniform inputs from [-1,1]^d0 and, for each hidden layer
// i >= 2, measures (a) the KS distance between the empirical activation CDF
// (pooled over every neuron of the layer) and arcsin(-1,1), and (b) the
// per-neuron variance of the frequency-scaled pre-activation omega*(Wz+b),
// averaged over neurons; per-neuron centering removes the constant bias
// offset, matching the Gaussian-limit variance target. Requires
// n_samples >= 10^4.
DistCheckReport activation_dist_check(const SnfParams& params, Index n_samples, Prng& rng);

// Empirical NTK: K = G^T G where column i of G is per_example_grad(x_i).
// Guarded at N <= 4096.
Matrix entk(const SnfParams& params, const Matrix& X);

// Mean of the k largest absolute eigenvalues over the mean of the k
// smallest. Needs at least 2k values.
double condition_number(std::span<const double> eigenvalues, Index k);

// E(t) = sum over {i : lambda_i/lambda_0 >= t} of (phi_i . e)^2 / ||e||^2.
// Negative round-off eigenvalues clamp to ratio 0 so E(0) = 1 exactly.
std::vector<std::pair<double, double>> alignment_curve(const Vector& eigenvalues,
                                                       const Matrix& eigenvectors,
                                                       const Vector& residual,
                                                       std::span<const double> thresholds);

// 20 log-spaced thresholds in [1e-6, 1].
std::vector<double> default_alignment_thresholds();

// Frobenius norms of the full-batch MSE gradient, one per layer.
std::vector<double> layerwise_grad_norms(const SnfParams& params, const SignalDataset& data);

// eNTK eigenanalysis bundle for one snapshot: eigensystem, top-k/bottom-k
// condition number, and the alignment curve of the residual y - f(X) over
// the default thresholds (left empty when the residual is zero).
KernelReport kernel_report(const SnfParams& params, const Matrix& X, const Matrix& y,
                           Index k);

void write_spectrum_csv(const SpectrumResult& spectrum, const std::string& path);
void write_bands_csv(std::span<const double> band_means, const std::string& path);
void write_kernel_csv(const KernelReport& report, const std::string& path);
void write_alignment_csv(const KernelReport& report, const std::string& path);
void write_distcheck_csv(const DistCheckReport& report, const std::string& path);
void write_gradscale_csv(std::span<const double> norms, const std::string& path);
void write_expand_csv(const std::vector<std::pair<int, double>>& coeffs,
                      const std::string& path);

}  // namespace sf
