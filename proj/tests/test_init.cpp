#include <doctest.h>

#include <cmath>

#include "sinefield/analysis.hpp"
#include "sinefield/errors.hpp"
#include "sinefield/init.hpp"
#include "sinefield/prng.hpp"

using namespace sf;

namespace {

bool bit_equal(const SnfParams& a, const SnfParams& b) {
  if (a.layers.size() != b.layers.size()) return false;
  for (std::size_t i = 0; i < a.layers.size(); ++i)
    if (a.layers[i].weight != b.layers[i].weight || a.layers[i].bias != b.layers[i].bias)
      return false;
  return true;
}

}  // namespace

TEST_CASE("init_standard: bounds realized by large draws") {
  // hidden bound sqrt(6)/(30 sqrt(512)), frozen by direct evaluation
  const double hidden_bound = std::sqrt(6.0) / (30.0 * std::sqrt(512.0));
  CHECK(hidden_bound == doctest::Approx(0.00360847).epsilon(1e-5));

  auto p = init_standard({2, 512, 512, 1}, 30.0, 30.0, 3);
  const double max_h = p.layers[1].weight.cwiseAbs().maxCoeff();  // 512x512 = 2.6e5 draws
  CHECK(max_h <= hidden_bound);
  CHECK(max_h >= 0.999 * hidden_bound);

  // first-layer bound 1/d0
  auto q = init_standard({2, 20000, 1}, 30.0, 30.0, 4);
  const double max_f = q.layers[0].weight.cwiseAbs().maxCoeff();
  CHECK(max_f <= 0.5);
  CHECK(max_f >= 0.999 * 0.5);

  CHECK_THROWS_AS(init_standard({2, 8, 1}, -1.0, 30.0, 0), InvalidArgument);
}

TEST_CASE("init_standard: first layer uses 1/d0, deeper layers the omega-scaled bound") {
  auto p = init_standard({512, 512, 512, 1}, 30.0, 30.0, 9);
  // the first layer of a d0=512 net would be bound 1/512 < sqrt(6)/(30 sqrt(512))
  CHECK(p.layers[0].weight.cwiseAbs().maxCoeff() <= 1.0 / 512.0);
  CHECK(p.layers[1].weight.cwiseAbs().maxCoeff() > 1.0 / 512.0);
}

TEST_CASE("init_weight_scaled: identity at alpha=1 and exact elementwise scaling") {
  const std::vector<Index> dims = {2, 32, 32, 1};
  auto std1 = init_standard(dims, 30.0, 30.0, 17);
  auto ws1 = init_weight_scaled(dims, 1.0, 30.0, 30.0, 17);
  CHECK(bit_equal(std1, ws1));

  const double bound2 = 2.0 * std::sqrt(6.0) / (30.0 * std::sqrt(512.0));
  CHECK(bound2 == doctest::Approx(0.0072169).epsilon(1e-4));

  auto ws2 = init_weight_scaled(dims, 2.37, 30.0, 30.0, 17);
  for (std::size_t i = 0; i + 1 < ws2.layers.size(); ++i) {
    const Matrix expect = 2.37 * std1.layers[i].weight;
    CHECK(ws2.layers[i].weight == expect);  // scale applied after the draw
  }
  // last layer and all biases untouched by alpha
  CHECK(ws2.layers.back().weight == std1.layers.back().weight);
  for (std::size_t i = 0; i < ws2.layers.size(); ++i)
    CHECK(ws2.layers[i].bias == std1.layers[i].bias);

  auto ws4 = init_weight_scaled(dims, 4.0, 30.0, 30.0, 17);
  CHECK(ws4.layers.back().weight == ws2.layers.back().weight);

  CHECK_THROWS_AS(init_weight_scaled(dims, 0.0, 30.0, 30.0, 0), InvalidArgument);
  CHECK_THROWS_AS(init_weight_scaled(dims, -2.0, 30.0, 30.0, 0), InvalidArgument);
}

TEST_CASE("init_xavier: symmetric bound formula") {
  const double bound = std::sqrt(6.0) / std::sqrt(512.0 + 512.0);
  CHECK(bound == doctest::Approx(std::sqrt(6.0) / 32.0));
  CHECK(bound == doctest::Approx(0.0765466).epsilon(1e-5));

  auto p = init_xavier({512, 512, 1}, 30.0, 30.0, 5);
  const double maxw = p.layers[0].weight.cwiseAbs().maxCoeff();
  CHECK(maxw <= bound);
  CHECK(maxw >= 0.999 * bound);
}

TEST_CASE("init_nfsl: only the last layer departs from standard") {
  const std::vector<Index> dims = {2, 512, 512, 1};
  auto nfsl = init_nfsl(dims, 30.0, 30.0, 23);
  auto std0 = init_standard(dims, 30.0, 30.0, 23);
  CHECK(nfsl.layers[0].weight == std0.layers[0].weight);
  CHECK(nfsl.layers[1].weight == std0.layers[1].weight);
  CHECK(nfsl.layers[2].weight != std0.layers[2].weight);

  // last bound sqrt(6)/(512^(3/4) * 30) by direct evaluation
  const double bound = std::sqrt(6.0) / (std::pow(512.0, 0.75) * 30.0);
  CHECK(bound == doctest::Approx(0.00075858).epsilon(1e-4));
  CHECK(nfsl.layers[2].weight.cwiseAbs().maxCoeff() <= bound);

  // d = 1: 1^(3/4) = 1^(1/2), so NFSL collapses onto standard
  auto n1 = init_nfsl({2, 1, 1}, 30.0, 30.0, 8);
  auto s1 = init_standard({2, 1, 1}, 30.0, 30.0, 8);
  CHECK(bit_equal(n1, s1));
}

TEST_CASE("lr plans: frozen multipliers and reciprocal structure") {
  const auto fo = lr_plan_functional_only(2.0, 5, 1e-4);
  const std::vector<double> expect_fo = {1.0 / 16, 1.0 / 8, 1.0 / 4, 1.0 / 2, 1.0};
  REQUIRE(fo.per_layer.size() == 5);
  for (std::size_t k = 0; k < 5; ++k)
    CHECK(fo.per_layer[k] == doctest::Approx(expect_fo[k]).epsilon(1e-12));

  const auto go = lr_plan_gradient_only(2.0, 5, 1e-4);
  const std::vector<double> expect_go = {16.0, 8.0, 4.0, 2.0, 1.0};
  for (std::size_t k = 0; k < 5; ++k) {
    CHECK(go.per_layer[k] == doctest::Approx(expect_go[k]).epsilon(1e-12));
    CHECK(fo.per_layer[k] * go.per_layer[k] == doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK(fo.per_layer.back() == 1.0);

  const auto id = lr_plan_functional_only(1.0, 4, 1e-4);
  for (double m : id.per_layer) CHECK(m == 1.0);

  CHECK_THROWS_AS(lr_plan_functional_only(0.5, 5, 1e-4), InvalidArgument);
  CHECK_THROWS_AS(lr_plan_gradient_only(0.9, 5, 1e-4), InvalidArgument);
}

TEST_CASE("init token parsing") {
  CHECK(parse_init_token("standard", 2.0).scheme == Scheme::Standard);
  CHECK(parse_init_token("xavier", 2.0).scheme == Scheme::Xavier);
  CHECK(parse_init_token("nfsl", 2.0).scheme == Scheme::Nfsl);
  const auto ws = parse_init_token("ws", 2.37);
  CHECK(ws.scheme == Scheme::WeightScaled);
  CHECK(ws.alpha == 2.37);
  CHECK(parse_init_token("ws:3.5", 1.0).alpha == doctest::Approx(3.5));
  CHECK_THROWS_AS(parse_init_token("ws:", 1.0), InvalidArgument);
  CHECK_THROWS_AS(parse_init_token("ws:-1", 1.0), InvalidArgument);
  CHECK_THROWS_AS(parse_init_token("glorot", 1.0), InvalidArgument);
}

TEST_CASE("distribution preservation smoke: arcsine activations at reduced scale") {
  // reduced version of the full acceptance check: depth 4, width 128, 2e4
  // samples; loose 0.06 KS gate. The first hidden layer's frequency-scaled
  // pre-activation variance tracks alpha^2 (its input is arcsine to high
  // accuracy); deeper layers drift below at alpha = 1, where the
  // Gaussian-to-arcsine approximation is weakest.
  for (double alpha : {1.0, 3.0}) {
    auto net = init_weight_scaled({2, 128, 128, 128, 1}, alpha, 30.0, 30.0, 31);
    Prng rng(32);
    const auto rep = activation_dist_check(net, 20000, rng);
    REQUIRE(rep.per_layer_ks.size() == 2);
    for (double ks : rep.per_layer_ks) CHECK(ks <= 0.06);
    CHECK(rep.per_layer_variance.front() == doctest::Approx(alpha * alpha).epsilon(0.10));
  }
}
