#include "sinefield/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numbers>

#include "sinefield/bessel.hpp"
#include "sinefield/dft.hpp"
#include "sinefield/eig.hpp"
#include "sinefield/errors.hpp"

namespace sf {

double arcsine_cdf(double x) {
  const double c = std::clamp(x, -1.0, 1.0);
  return (2.0 / std::numbers::pi) * std::asin(std::sqrt((c + 1.0) / 2.0));
}

SpectrumResult model_spectrum_1d(const SnfParams& params, Index n_grid) {
  if (params.coord_dim() != 1)
    throw InvalidArgument("model_spectrum_1d: network input dimension must be 1");
  if (n_grid < 2) throw InvalidArgument("model_spectrum_1d: n_grid must be >= 2");
  Matrix X(1, n_grid);
  for (Index j = 0; j < n_grid; ++j)
    X(0, j) = 2.0 * static_cast<double>(j) / static_cast<double>(n_grid) - 1.0;
  Matrix out = forward(params, X).output;
  std::vector<double> signal(static_cast<std::size_t>(n_grid));
  const double mean = out.mean();
  for (Index j = 0; j < n_grid; ++j) signal[static_cast<std::size_t>(j)] = out(0, j) - mean;
  const auto mags = dft1d(signal);

  SpectrumResult res;
  const Index keep = n_grid / 2 + 1;
  res.frequencies.resize(static_cast<std::size_t>(keep));
  res.magnitudes.resize(static_cast<std::size_t>(keep));
  double wsum = 0.0, msum = 0.0;
  for (Index k = 0; k < keep; ++k) {
    // the grid spans a length-2 window, so bin k sits at k/2 cycles per unit x
    const double freq = static_cast<double>(k) / 2.0;
    res.frequencies[static_cast<std::size_t>(k)] = freq;
    res.magnitudes[static_cast<std::size_t>(k)] = mags[static_cast<std::size_t>(k)];
    wsum += freq * mags[static_cast<std::size_t>(k)];
    msum += mags[static_cast<std::size_t>(k)];
  }
  res.centroid = msum > 0.0 ? wsum / msum : 0.0;
  return res;
}

std::vector<double> band_power_2d(const Matrix& img, Index n_bands) {
  if (img.rows() != img.cols()) throw InvalidArgument("band_power_2d: image must be square");
  if (n_bands < 1) throw InvalidArgument("band_power_2d: n_bands must be >= 1");
  const Index n = img.rows();
  const Matrix mag = dft2d_magnitude(img);
  std::vector<double> sum(static_cast<std::size_t>(n_bands), 0.0);
  std::vector<long> count(static_cast<std::size_t>(n_bands), 0);
  for (Index ky = 0; ky < n; ++ky)
    for (Index kx = 0; kx < n; ++kx) {
      const double fy = static_cast<double>(std::min(ky, n - ky));
      const double fx = static_cast<double>(std::min(kx, n - kx));
      const double r = std::hypot(fx, fy);
      const auto band = static_cast<std::size_t>(
          std::min<Index>(static_cast<Index>(std::floor(r)), n_bands - 1));
      sum[band] += mag(ky, kx);
      ++count[band];
    }
  std::vector<double> means(static_cast<std::size_t>(n_bands), 0.0);
  for (std::size_t b = 0; b < sum.size(); ++b)
    if (count[b] > 0) means[b] = sum[b] / static_cast<double>(count[b]);
  return means;
}

std::vector<std::pair<int, double>> jacobi_anger_expand(double w1, double w2, double w3,
                                                        int l_max) {
  (void)w1;  // harmonics sit at l*w1; the coefficients do not depend on it
  if (l_max < 1 || l_max % 2 == 0)
    throw InvalidArgument("jacobi_anger_expand: l_max must be odd and positive");
  if (!(std::abs(w2) < std::numbers::pi / 2.0))
    throw InvalidArgument("jacobi_anger_expand: |w2| must be below pi/2");
  std::vector<std::pair<int, double>> coeffs;
  for (int l = 1; l <= l_max; l += 2) coeffs.emplace_back(l, 2.0 * w3 * bessel_j(l, w2));
  return coeffs;
}

double jacobi_anger_eval(const std::vector<std::pair<int, double>>& coeffs, double w1,
                         double x) {
  double s = 0.0;
  for (const auto& [l, c] : coeffs) s += c * std::sin(static_cast<double>(l) * w1 * x);
  return s;
}

BesselBound bessel_bound_check(double w2, int ell) {
  if (!(w2 > 0.0 && w2 < std::numbers::pi / 2.0))
    throw InvalidArgument("bessel_bound_check: w2 outside (0, pi/2)");
  if (ell < 1 || ell % 2 == 0)
    throw InvalidArgument("bessel_bound_check: order must be odd and positive");
  BesselBound b;
  const double le = static_cast<double>(ell);
  b.ratio = bessel_j(ell + 2, w2) / bessel_j(ell, w2);
  b.lower = w2 * w2 / ((2.0 * le + 2.0) * (2.0 * le + 4.0));
  b.upper = w2 * w2 / ((2.0 * le + 1.0) * (2.0 * le + 3.0));
  b.within = b.lower < b.ratio && b.ratio < b.upper;
  return b;
}

DistCheckReport activation_dist_check(const SnfParams& params, Index n_samples, Prng& rng) {
  if (n_samples < 10000)
    throw InvalidArgument("activation_dist_check: need at least 10^4 samples");
  if (params.activation != Activation::SineField)
    throw InvalidArgument("activation_dist_check: sine networks only");
  validate(params);
  const Index l = params.depth();
  const Index d0 = params.coord_dim();
  const Index n_hidden = std::max<Index>(0, l - 2);  // layers 2..l-1

  DistCheckReport rep;
  rep.samples = n_samples;
  if (n_hidden == 0) return rep;

  // Empirical CDFs pool every neuron of a layer. Activations map through the
  // arcsine CDF (probability integral transform) into a 2^16-bin histogram,
  // so the KS statistic is exact up to the 1/2^16 bin width without holding
  // width x n_samples values.
  constexpr int kBins = 1 << 16;
  std::vector<std::vector<long>> hist(static_cast<std::size_t>(n_hidden),
                                      std::vector<long>(kBins, 0));
  std::vector<Vector> sum(static_cast<std::size_t>(n_hidden));
  std::vector<Vector> sumsq(static_cast<std::size_t>(n_hidden));
  const auto dims = params.dims();
  for (Index i = 0; i < n_hidden; ++i) {
    const Index width = dims[static_cast<std::size_t>(i) + 2];
    sum[static_cast<std::size_t>(i)] = Vector::Zero(width);
    sumsq[static_cast<std::size_t>(i)] = Vector::Zero(width);
  }

  const Index chunk = 4096;
  Index done = 0;
  while (done < n_samples) {
    const Index cols = std::min(chunk, n_samples - done);
    const Matrix X = uniform_fill(rng, d0, cols, -1.0, 1.0);
    const ForwardTrace t = forward(params, X);
    for (Index i = 0; i < n_hidden; ++i) {
      // hidden layer index i+2 (1-based): activation Z^(i+2), pre-activation
      // of the same layer scaled by its frequency multiplier
      const Matrix& act = t.acts[static_cast<std::size_t>(i) + 2];
      const Matrix& pre = t.pre[static_cast<std::size_t>(i) + 1];
      const double om = params.omega_h;
      auto& s = sum[static_cast<std::size_t>(i)];
      auto& s2 = sumsq[static_cast<std::size_t>(i)];
      s += om * pre.rowwise().sum();
      s2 += (om * pre).array().square().matrix().rowwise().sum();
      auto& h = hist[static_cast<std::size_t>(i)];
      for (Index c = 0; c < cols; ++c)
        for (Index r = 0; r < act.rows(); ++r) {
          const double u = arcsine_cdf(act(r, c));
          const int b = std::min(kBins - 1, static_cast<int>(u * kBins));
          ++h[static_cast<std::size_t>(b)];
        }
    }
    done += cols;
  }

  for (Index i = 0; i < n_hidden; ++i) {
    const auto& h = hist[static_cast<std::size_t>(i)];
    double total = 0.0;
    for (long c : h) total += static_cast<double>(c);
    double cum = 0.0, d = 0.0;
    for (int b = 0; b < kBins; ++b) {
      d = std::max(d, std::abs(cum / total - static_cast<double>(b) / kBins));
      cum += static_cast<double>(h[static_cast<std::size_t>(b)]);
      d = std::max(d, std::abs(cum / total - static_cast<double>(b + 1) / kBins));
    }
    rep.per_layer_ks.push_back(d);

    const auto& s = sum[static_cast<std::size_t>(i)];
    const auto& s2 = sumsq[static_cast<std::size_t>(i)];
    const double n = static_cast<double>(n_samples);
    // per-neuron variance, then averaged across the layer
    double acc = 0.0;
    for (Index j = 0; j < s.size(); ++j) {
      const double mean = s(j) / n;
      acc += s2(j) / n - mean * mean;
    }
    rep.per_layer_variance.push_back(acc / static_cast<double>(s.size()));
  }
  return rep;
}

Matrix entk(const SnfParams& params, const Matrix& X) {
  const Index n = X.cols();
  if (n > 4096) throw ResourceError("entk: kernel size over the 4096-point desk guard");
  if (n < 1) throw InvalidArgument("entk: empty input");
  const Index p = params.param_count();
  Matrix g(p, n);
  for (Index i = 0; i < n; ++i) g.col(i) = per_example_grad(params, X.col(i));
  // entries are the per-example gradient dot products themselves, so the
  // kernel is exactly symmetric and matches <g_i, g_j> bit for bit
  Matrix k(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = i; j < n; ++j) {
      const double v = g.col(i).dot(g.col(j));
      k(i, j) = v;
      k(j, i) = v;
    }
  return k;
}

double condition_number(std::span<const double> eigenvalues, Index k) {
  if (k < 1) throw InvalidArgument("condition_number: k must be >= 1");
  if (static_cast<Index>(eigenvalues.size()) < 2 * k)
    throw InvalidArgument("condition_number: need at least 2k eigenvalues");
  std::vector<double> mag(eigenvalues.begin(), eigenvalues.end());
  for (auto& v : mag) v = std::abs(v);
  std::sort(mag.begin(), mag.end(), std::greater<>());
  double top = 0.0, bottom = 0.0;
  for (Index i = 0; i < k; ++i) {
    top += mag[static_cast<std::size_t>(i)];
    bottom += mag[mag.size() - 1 - static_cast<std::size_t>(i)];
  }
  if (bottom == 0.0) return std::numeric_limits<double>::infinity();
  return top / bottom;
}

std::vector<std::pair<double, double>> alignment_curve(const Vector& eigenvalues,
                                                       const Matrix& eigenvectors,
                                                       const Vector& residual,
                                                       std::span<const double> thresholds) {
  const double enorm2 = residual.squaredNorm();
  if (!(enorm2 > 0.0)) throw InvalidArgument("alignment_curve: zero residual");
  if (eigenvectors.rows() != residual.size() || eigenvectors.cols() != eigenvalues.size())
    throw ShapeError("alignment_curve: eigensystem and residual sizes differ");
  const double lambda0 = eigenvalues(0);
  if (!(lambda0 > 0.0))
    throw InvalidArgument("alignment_curve: non-positive leading eigenvalue");
  const Vector proj = eigenvectors.transpose() * residual;
  std::vector<std::pair<double, double>> out;
  out.reserve(thresholds.size());
  for (double t : thresholds) {
    double energy = 0.0;
    for (Index i = 0; i < eigenvalues.size(); ++i) {
      const double ratio = std::max(eigenvalues(i), 0.0) / lambda0;
      if (ratio >= t) energy += proj(i) * proj(i);
    }
    out.emplace_back(t, energy / enorm2);
  }
  return out;
}

std::vector<double> default_alignment_thresholds() {
  std::vector<double> t(20);
  for (int i = 0; i < 20; ++i)
    t[static_cast<std::size_t>(i)] = std::pow(10.0, -6.0 + 6.0 * i / 19.0);
  return t;
}

std::vector<double> layerwise_grad_norms(const SnfParams& params, const SignalDataset& data) {
  const Matrix x = gather_cols(data.coords, data.train_idx);
  const Matrix y = gather_cols(data.targets, data.train_idx);
  ForwardTrace t = forward(params, x);
  Matrix residual = t.output - y;
  residual *= 2.0 / static_cast<double>(residual.size());  // full-batch MSE gradient
  const auto grads = backward(params, t, residual);
  std::vector<double> norms;
  norms.reserve(grads.size());
  for (const auto& g : grads)
    norms.push_back(std::sqrt(g.weight.squaredNorm() + g.bias.squaredNorm()));
  return norms;
}

KernelReport kernel_report(const SnfParams& params, const Matrix& X, const Matrix& y,
                           Index k) {
  if (y.rows() != 1 || y.cols() != X.cols())
    throw ShapeError("kernel_report: targets must be 1 x N matching X");
  const Matrix kernel = entk(params, X);
  SymEig eig = sym_eig(kernel);
  KernelReport rep;
  rep.eigenvalues = std::move(eig.eigenvalues);
  rep.eigenvectors = std::move(eig.eigenvectors);
  rep.condition_number = condition_number(
      {rep.eigenvalues.data(), static_cast<std::size_t>(rep.eigenvalues.size())}, k);
  const Vector e = (y - forward(params, X).output).transpose();
  rep.residual_norm = e.norm();
  if (rep.residual_norm > 0.0) {
    const auto thresholds = default_alignment_thresholds();
    rep.alignment = alignment_curve(rep.eigenvalues, rep.eigenvectors, e, thresholds);
  }
  return rep;
}

namespace {

std::ofstream open_out(const std::string& path, const char* what) {
  std::ofstream f(path);
  if (!f) throw IoError(std::string(what) + ": cannot open " + path);
  return f;
}

}  // namespace

void write_spectrum_csv(const SpectrumResult& spectrum, const std::string& path) {
  auto f = open_out(path, "write_spectrum_csv");
  f << "bin,frequency,magnitude\n";
  char buf[80];
  for (std::size_t k = 0; k < spectrum.magnitudes.size(); ++k) {
    std::snprintf(buf, sizeof buf, "%zu,%.10g,%.10g\n", k, spectrum.frequencies[k],
                  spectrum.magnitudes[k]);
    f << buf;
  }
}

void write_bands_csv(std::span<const double> band_means, const std::string& path) {
  auto f = open_out(path, "write_bands_csv");
  f << "band,mean_magnitude\n";
  char buf[64];
  for (std::size_t b = 0; b < band_means.size(); ++b) {
    std::snprintf(buf, sizeof buf, "%zu,%.10g\n", b, band_means[b]);
    f << buf;
  }
}

void write_kernel_csv(const KernelReport& report, const std::string& path) {
  auto f = open_out(path, "write_kernel_csv");
  f << "index,eigenvalue,condition_number,residual_norm\n";
  char buf[96];
  for (Index i = 0; i < report.eigenvalues.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%lld,%.10g,,\n", static_cast<long long>(i),
                  report.eigenvalues(i));
    f << buf;
  }
  std::snprintf(buf, sizeof buf, "summary,,%.10g,%.10g\n", report.condition_number,
                report.residual_norm);
  f << buf;
}

void write_alignment_csv(const KernelReport& report, const std::string& path) {
  auto f = open_out(path, "write_alignment_csv");
  f << "threshold,energy\n";
  char buf[64];
  for (const auto& [t, e] : report.alignment) {
    std::snprintf(buf, sizeof buf, "%.10g,%.10g\n", t, e);
    f << buf;
  }
}

void write_distcheck_csv(const DistCheckReport& report, const std::string& path) {
  auto f = open_out(path, "write_distcheck_csv");
  f << "layer,ks_distance,pre_activation_variance\n";
  char buf[80];
  for (std::size_t i = 0; i < report.per_layer_ks.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%zu,%.10g,%.10g\n", i + 2, report.per_layer_ks[i],
                  report.per_layer_variance[i]);
    f << buf;
  }
}

void write_gradscale_csv(std::span<const double> norms, const std::string& path) {
  auto f = open_out(path, "write_gradscale_csv");
  f << "layer,grad_norm\n";
  char buf[64];
  for (std::size_t i = 0; i < norms.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%zu,%.10g\n", i + 1, norms[i]);
    f << buf;
  }
}

void write_expand_csv(const std::vector<std::pair<int, double>>& coeffs,
                      const std::string& path) {
  auto f = open_out(path, "write_expand_csv");
  f << "order,coefficient\n";
  char buf[64];
  for (const auto& [l, c] : coeffs) {
    std::snprintf(buf, sizeof buf, "%d,%.10g\n", l, c);
    f << buf;
  }
}

}  // namespace sf
