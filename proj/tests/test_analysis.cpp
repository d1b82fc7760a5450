#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "sinefield/analysis.hpp"
#include "sinefield/bessel.hpp"
#include "sinefield/dft.hpp"
#include "sinefield/eig.hpp"
#include "sinefield/errors.hpp"
#include "sinefield/init.hpp"
#include "sinefield/prng.hpp"

using namespace sf;

namespace {

// Bias-free width-one chain, the paper's toy setting.
SnfParams width1_net(std::vector<double> ws) {
  SnfParams p;
  p.omega0 = 1.0;
  p.omega_h = 1.0;
  for (double w : ws) {
    Layer l;
    l.weight = Matrix::Constant(1, 1, w);
    l.bias = Vector(0);
    p.layers.push_back(l);
  }
  return p;
}

}  // namespace

TEST_CASE("arcsine cdf: symmetry anchors") {
  CHECK(arcsine_cdf(-1.0) == doctest::Approx(0.0));
  CHECK(arcsine_cdf(0.0) == doctest::Approx(0.5));
  CHECK(arcsine_cdf(1.0) == doctest::Approx(1.0));
  CHECK(arcsine_cdf(0.7) + arcsine_cdf(-0.7) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("model_spectrum_1d: flat net and a single tone") {
  // all-zero weights: constant output, nothing beyond (removed) DC
  SnfParams flat = width1_net({0.0, 0.0});
  flat.layers.back().bias = Vector::Constant(1, 0.7);
  const auto s0 = model_spectrum_1d(flat, 128);
  CHECK(s0.centroid == doctest::Approx(0.0));
  for (double m : s0.magnitudes) CHECK(m < 1e-10);

  // identity 2-layer net: f(x) = sin(omega0 x); pick omega0 = 8 pi so the
  // tone sits exactly in bin 8 (frequency 4 cycles per unit x)
  SnfParams tone = width1_net({1.0, 1.0});
  tone.omega0 = 8.0 * std::numbers::pi;
  const auto s1 = model_spectrum_1d(tone, 256);
  std::size_t best = 1;
  for (std::size_t k = 1; k < s1.magnitudes.size(); ++k)
    if (s1.magnitudes[k] > s1.magnitudes[best]) best = k;
  CHECK(best == 8);
  CHECK(s1.frequencies[best] == doctest::Approx(tone.omega0 / (2.0 * std::numbers::pi))
                                    .epsilon(1e-12));

  auto bad = init_standard({2, 8, 1}, 30.0, 30.0, 0);
  CHECK_THROWS_AS(model_spectrum_1d(bad, 128), InvalidArgument);
}

TEST_CASE("model_spectrum_1d: centroid rises with alpha (20-seed mean)") {
  const std::vector<Index> dims = {1, 64, 64, 64, 64, 1};
  double mean1 = 0.0, mean3 = 0.0;
  const int seeds = 20;
  for (int s = 0; s < seeds; ++s) {
    mean1 += model_spectrum_1d(init_weight_scaled(dims, 1.0, 30.0, 30.0, 500 + s), 256).centroid;
    mean3 += model_spectrum_1d(init_weight_scaled(dims, 3.0, 30.0, 30.0, 500 + s), 256).centroid;
  }
  CHECK(mean3 / seeds > mean1 / seeds);
}

TEST_CASE("band_power_2d: DC image, oriented tone, and partition completeness") {
  const Index n = 32;
  Matrix flat = Matrix::Constant(n, n, 0.4);
  const auto b0 = band_power_2d(flat, 8);
  CHECK(b0[0] > 0.0);
  for (std::size_t b = 1; b < b0.size(); ++b) CHECK(b0[b] < 1e-10);

  // horizontal sinusoid with r cycles across the width lands in band r
  const Index r = 5;
  Matrix tone(n, n);
  for (Index row = 0; row < n; ++row)
    for (Index col = 0; col < n; ++col)
      tone(row, col) = std::sin(2.0 * std::numbers::pi * static_cast<double>(r) *
                                static_cast<double>(col) / static_cast<double>(n));
  const auto bt = band_power_2d(tone, 16);
  std::size_t best = 1;
  for (std::size_t b = 0; b < bt.size(); ++b)
    if (bt[b] > bt[best]) best = b;
  CHECK(best == static_cast<std::size_t>(r));

  // partition completeness: per-band means weighted by band sizes recover
  // the total magnitude (band rule replicated as the oracle)
  Prng rng(44);
  const Matrix img = uniform_fill(rng, n, n, 0.0, 1.0);
  const Index n_bands = 6;
  const auto means = band_power_2d(img, n_bands);
  const Matrix mag = dft2d_magnitude(img);
  std::vector<double> count(static_cast<std::size_t>(n_bands), 0.0);
  double total = 0.0;
  for (Index ky = 0; ky < n; ++ky)
    for (Index kx = 0; kx < n; ++kx) {
      const double fy = static_cast<double>(std::min(ky, n - ky));
      const double fx = static_cast<double>(std::min(kx, n - kx));
      const auto band = static_cast<std::size_t>(
          std::min<Index>(static_cast<Index>(std::floor(std::hypot(fx, fy))), n_bands - 1));
      count[band] += 1.0;
      total += mag(ky, kx);
    }
  double recovered = 0.0;
  for (std::size_t b = 0; b < means.size(); ++b) recovered += means[b] * count[b];
  CHECK(recovered == doctest::Approx(total).epsilon(1e-9));

  CHECK_THROWS_AS(band_power_2d(Matrix::Zero(4, 6), 4), InvalidArgument);
}

TEST_CASE("jacobi_anger_expand: series matches the direct network") {
  // frozen case (1, 0.5, 1) at x = pi/2: sin(0.5 sin(pi/2)) = sin(0.5)
  const auto coeffs = jacobi_anger_expand(1.0, 0.5, 1.0, 7);
  REQUIRE(coeffs.size() == 4);
  CHECK(coeffs[0].first == 1);
  CHECK(coeffs[0].second == doctest::Approx(2.0 * bessel_j(1, 0.5)).epsilon(1e-14));
  const double at_half_pi = jacobi_anger_eval(coeffs, 1.0, std::numbers::pi / 2.0);
  CHECK(at_half_pi == doctest::Approx(0.4794255).epsilon(1e-5));
  CHECK(jacobi_anger_eval(coeffs, 1.0, 0.0) == 0.0);

  // 10 random width-1 nets, 100 grid points, |w2| < pi/2, l_max = 31
  Prng rng(55);
  for (int i = 0; i < 10; ++i) {
    const double w1 = rng.uniform(-3.0, 3.0);
    const double w2 = rng.uniform(-1.5, 1.5);
    const double w3 = rng.uniform(-2.0, 2.0);
    const auto cs = jacobi_anger_expand(w1, w2, w3, 31);
    for (int g = 0; g < 100; ++g) {
      const double x = -1.0 + 2.0 * g / 99.0;
      const double direct = w3 * std::sin(w2 * std::sin(w1 * x));
      CHECK(std::abs(jacobi_anger_eval(cs, w1, x) - direct) <= 1e-8);
    }
  }

  // harmonic coefficients decay for w2 inside (0, pi/2)
  for (double w2 : {0.2, 0.8, 1.4}) {
    const auto cs = jacobi_anger_expand(1.0, w2, 1.0, 11);
    for (std::size_t i = 1; i < cs.size(); ++i)
      CHECK(std::abs(cs[i].second) < std::abs(cs[i - 1].second));
  }

  CHECK_THROWS_AS(jacobi_anger_expand(1.0, 0.5, 1.0, 8), InvalidArgument);
  CHECK_THROWS_AS(jacobi_anger_expand(1.0, 1.6, 1.0, 7), InvalidArgument);
}

TEST_CASE("bessel_bound_check: sandwich values and the alpha^2 scaling law") {
  const auto b1 = bessel_bound_check(1.0, 1);
  CHECK(b1.ratio == doctest::Approx(0.044457).epsilon(1e-4));
  CHECK(b1.lower == doctest::Approx(1.0 / 24.0).epsilon(1e-12));
  CHECK(b1.upper == doctest::Approx(1.0 / 15.0).epsilon(1e-12));
  CHECK(b1.within);

  const auto b01 = bessel_bound_check(0.1, 1);
  CHECK(b01.lower == doctest::Approx(4.1667e-4).epsilon(1e-3));
  CHECK(b01.upper == doctest::Approx(6.6667e-4).epsilon(1e-3));
  CHECK(b01.within);

  const double q = bessel_bound_check(0.02, 1).ratio / bessel_bound_check(0.01, 1).ratio;
  CHECK(q > 3.9);
  CHECK(q < 4.1);

  CHECK_THROWS_AS(bessel_bound_check(0.0, 1), InvalidArgument);
  CHECK_THROWS_AS(bessel_bound_check(std::numbers::pi / 2.0, 1), InvalidArgument);
  CHECK_THROWS_AS(bessel_bound_check(0.5, 2), InvalidArgument);
  CHECK_THROWS_AS(bessel_bound_check(0.5, 0), InvalidArgument);
}

TEST_CASE("activation_dist_check: input contract") {
  auto net = init_standard({1, 32, 32, 1}, 30.0, 30.0, 2);
  Prng rng(5);
  CHECK_THROWS_AS(activation_dist_check(net, 5000, rng), InvalidArgument);
  auto relu = init_xavier({4, 8, 1}, 30.0, 30.0, 2);
  relu.activation = Activation::ReluPosEnc;
  relu.posenc_freqs = 1;
  CHECK_THROWS_AS(activation_dist_check(relu, 20000, rng), InvalidArgument);
}

TEST_CASE("entk: hand kernel for the width-one net and Gram structure") {
  auto toy = width1_net({1.0, 1.0});
  CHECK(entk(toy, Matrix::Zero(1, 1))(0, 0) == doctest::Approx(0.0));
  const Matrix x = Matrix::Constant(1, 1, std::numbers::pi / 2.0);
  CHECK(entk(toy, x)(0, 0) == doctest::Approx(1.0).epsilon(1e-12));

  auto net = init_weight_scaled({2, 12, 12, 1}, 2.0, 30.0, 30.0, 66);
  Prng rng(67);
  const Matrix xs = uniform_fill(rng, 2, 24, -1.0, 1.0);
  const Matrix k = entk(net, xs);
  CHECK(k == k.transpose().eval());  // symmetric by construction
  for (Index i = 0; i < k.rows(); ++i) CHECK(k(i, i) >= 0.0);

  // entries are exactly the per-example gradient dot products, and the
  // assembled kernel agrees with the blocked Gram product up to round-off
  Matrix g(net.param_count(), xs.cols());
  for (Index i = 0; i < xs.cols(); ++i) g.col(i) = per_example_grad(net, xs.col(i));
  bool dots_identical = true;
  for (Index i = 0; i < xs.cols(); ++i)
    for (Index j = 0; j < xs.cols(); ++j)
      dots_identical = dots_identical && k(i, j) == g.col(i).dot(g.col(j));
  CHECK(dots_identical);
  const Matrix gram = g.transpose() * g;
  CHECK((k - gram).cwiseAbs().maxCoeff() <= 1e-12 * std::max(1.0, gram.cwiseAbs().maxCoeff()));

  CHECK_THROWS_AS(entk(net, Matrix::Zero(2, 4097)), ResourceError);
}

TEST_CASE("condition_number: frozen arithmetic") {
  const std::vector<double> eigs = {10, 8, 6, 4, 2, 1, 0.8, 0.6, 0.4, 0.2};
  CHECK(condition_number(eigs, 5) == doctest::Approx(10.0).epsilon(1e-12));
  const std::vector<double> flat(8, 3.0);
  CHECK(condition_number(flat, 4) == doctest::Approx(1.0));
  const std::vector<double> two = {9.0, 0.5};
  CHECK(condition_number(two, 1) == doctest::Approx(18.0));
  CHECK_THROWS_AS(condition_number(two, 2), InvalidArgument);
}

TEST_CASE("alignment_curve: completeness and single-direction residuals") {
  Matrix k(3, 3);
  k << 4.0, 1.0, 0.0, 1.0, 3.0, 0.5, 0.0, 0.5, 1.0;
  const auto eig = sym_eig(k);

  Prng rng(71);
  const Matrix em = uniform_fill(rng, 3, 1, -1.0, 1.0);
  const Vector e = em.col(0);
  const std::vector<double> zero = {0.0};
  const auto full = alignment_curve(eig.eigenvalues, eig.eigenvectors, e, zero);
  CHECK(full[0].second == doctest::Approx(1.0).epsilon(1e-9));

  const Vector top = eig.eigenvectors.col(0);
  const std::vector<double> near_one = {0.999999};
  CHECK(alignment_curve(eig.eigenvalues, eig.eigenvectors, top, near_one)[0].second ==
        doctest::Approx(1.0).epsilon(1e-9));

  const Vector second = eig.eigenvectors.col(1);
  const std::vector<double> exactly_one = {1.0};
  CHECK(alignment_curve(eig.eigenvalues, eig.eigenvectors, second, exactly_one)[0].second ==
        doctest::Approx(0.0).epsilon(1e-9).scale(1));

  // non-increasing over the default threshold ladder
  const auto thresholds = default_alignment_thresholds();
  REQUIRE(thresholds.size() == 20);
  CHECK(thresholds.front() == doctest::Approx(1e-6));
  CHECK(thresholds.back() == doctest::Approx(1.0));
  const auto curve = alignment_curve(eig.eigenvalues, eig.eigenvectors, e, thresholds);
  for (std::size_t i = 1; i < curve.size(); ++i)
    CHECK(curve[i].second <= curve[i - 1].second + 1e-12);

  CHECK_THROWS_AS(alignment_curve(eig.eigenvalues, eig.eigenvectors, Vector::Zero(3), zero),
                  InvalidArgument);
}

TEST_CASE("layerwise_grad_norms: zero residual and the alpha ratio ordering") {
  // dataset whose targets equal the network's own predictions => zero grads
  auto net = init_standard({1, 8, 8, 1}, 30.0, 30.0, 81);
  const auto base = synth_signal(std::vector<SynthComponent>{{1.0, 2.0, 0.0}}, 32);
  SignalDataset fitted = base;
  fitted.targets = forward(net, base.coords).output;
  const auto zeros = layerwise_grad_norms(net, fitted);
  for (double n : zeros) CHECK(n == doctest::Approx(0.0).scale(1));

  // mean over 20 seeds: norm ratio ws(2)/standard decreases across the sine
  // layers and stays bounded at the linear output layer (whose gradient does
  // not follow the amplification chain; asserting strict ordering into it is
  // not supported by measurement)
  const auto data = synth_signal(
      std::vector<SynthComponent>{{1.0, 3.0, 0.2}, {0.5, 7.0, 1.1}}, 128);
  const std::vector<Index> dims = {1, 32, 32, 32, 32, 1};
  std::vector<double> ratio(5, 0.0);
  const int seeds = 20;
  for (int s = 0; s < seeds; ++s) {
    const auto n1 = layerwise_grad_norms(init_standard(dims, 30.0, 30.0, 900 + s), data);
    const auto n2 =
        layerwise_grad_norms(init_weight_scaled(dims, 2.0, 30.0, 30.0, 900 + s), data);
    for (std::size_t k = 0; k < 5; ++k) ratio[k] += n2[k] / n1[k] / seeds;
  }
  for (std::size_t k = 1; k < 4; ++k) CHECK(ratio[k] < ratio[k - 1]);
  CHECK(ratio[4] > 0.2);
  CHECK(ratio[4] < 5.0);
}

TEST_CASE("kernel_report: bundles eigensystem, conditioning and alignment") {
  auto net = init_weight_scaled({1, 16, 16, 1}, 2.0, 30.0, 30.0, 91);
  const auto data = synth_signal(std::vector<SynthComponent>{{1.0, 4.0, 0.4}}, 24);
  const auto rep = kernel_report(net, data.coords, data.targets, 3);
  CHECK(rep.eigenvalues.size() == 24);
  CHECK(rep.condition_number > 1.0);
  CHECK(rep.residual_norm > 0.0);
  REQUIRE(rep.alignment.size() == 20);
  CHECK(rep.alignment.front().second >= rep.alignment.back().second);
}
