#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "randfnn/generators.hpp"
#include "test_util.hpp"

using namespace randfnn;
using Catch::Approx;

namespace {

// Sigmoid argument at a point, summed element by element (a different
// accumulation order than the generator's own dot product).
double argument_at(const Eigen::VectorXd& weights, double bias,
                   const Eigen::VectorXd& point) {
  double z = bias;
  for (Index j = 0; j < weights.size(); ++j) z += weights(j) * point(j);
  return z;
}

}  // namespace

TEST_CASE("fim: range containment, determinism, sample mean") {
  const HiddenParams p = generate_fim(3, 40, 77);
  REQUIRE(p.nodes() == 40);
  REQUIRE(p.dim() == 3);
  REQUIRE(p.weights.minCoeff() >= -1.0);
  REQUIRE(p.weights.maxCoeff() <= 1.0);
  REQUIRE(p.biases.minCoeff() >= -1.0);
  REQUIRE(p.biases.maxCoeff() <= 1.0);

  const HiddenParams q = generate_fim(3, 40, 77);
  REQUIRE(p.weights == q.weights);
  REQUIRE(p.biases == q.biases);
  REQUIRE(generate_fim(3, 40, 78).weights != p.weights);

  const HiddenParams wide = generate_fim(10, 10000, 5);  // 100k weight draws
  REQUIRE(std::abs(wide.weights.mean()) < 0.02);

  REQUIRE_THROWS_AS(generate_fim(0, 5, 1), std::invalid_argument);
  REQUIRE_THROWS_AS(generate_fim(2, 0, 1), std::invalid_argument);
}

TEST_CASE("oim: u=1 reduces to fim, range scales with u") {
  const HiddenParams fim = generate_fim(2, 25, 3);
  const HiddenParams oim1 = generate_oim(2, 25, 1.0, 3);
  REQUIRE(oim1.weights == fim.weights);
  REQUIRE(oim1.biases == fim.biases);

  const HiddenParams oim3 = generate_oim(2, 200, 3.0, 4);
  REQUIRE(oim3.weights.cwiseAbs().maxCoeff() <= 3.0);
  REQUIRE(oim3.weights.cwiseAbs().maxCoeff() > 1.0);  // actually uses the range
  REQUIRE_THROWS_AS(generate_oim(2, 5, 0.0, 1), std::invalid_argument);
  REQUIRE_THROWS_AS(generate_oim(2, 5, -2.0, 1), std::invalid_argument);
}

TEST_CASE("rsm: one-dimensional weights live in the slope interval") {
  // frozen: ln((1-r)/r) at r=0.1 and its doubled upper end for s=2
  const double lo = 2.1972245773362196;
  const double hi = 4.394449154672439;
  const Dataset train = testutil::random_dataset(50, 1, 9);
  const HiddenParams p = generate_rsm(train, 300, 0.1, 2.0, 10);
  for (Index i = 0; i < p.nodes(); ++i) {
    const double a = std::abs(p.weights(i, 0));
    REQUIRE(a >= lo);
    REQUIRE(a <= hi);
  }
}

TEST_CASE("rsm: weight sum, interval containment and inflection placement") {
  Rng meta(11);
  const double r_values[] = {0.0001, 0.01, 0.1, 0.3, 0.4, 0.49};
  const double s_values[] = {2.0, 8.0, 30.0};
  int positive = 0, negative = 0;
  for (int t = 0; t < 60; ++t) {
    const Index dim = 1 + static_cast<Index>(meta.index(10));
    const double r = r_values[meta.index(6)];
    const double s = s_values[meta.index(3)];
    const Dataset train = testutil::random_dataset(40, dim, 500 + t);
    const double lo = std::log((1.0 - r) / r);
    Rng rng(900 + t);
    for (int node = 0; node < 10; ++node) {
      const auto nd = detail::rsm_node(train, r, s, rng);
      (nd.weight_sum > 0 ? positive : negative)++;
      REQUIRE(std::abs(nd.weight_sum) >= lo);
      REQUIRE(std::abs(nd.weight_sum) <= s * lo);
      REQUIRE(std::abs(nd.weights.sum() - nd.weight_sum) <= 1e-10);
      const double z = argument_at(nd.weights, nd.bias, nd.anchor);
      REQUIRE(std::abs(z) <= 1e-10);
      REQUIRE(sigmoid(z) == Approx(0.5).margin(1e-10));
    }
  }
  REQUIRE(positive > 0);
  REQUIRE(negative > 0);
}

TEST_CASE("rsm: anchors come from the training rows") {
  const Dataset train = testutil::random_dataset(25, 2, 13);
  Rng rng(14);
  for (int node = 0; node < 20; ++node) {
    const auto nd = detail::rsm_node(train, 0.2, 3.0, rng);
    bool found = false;
    for (Index i = 0; i < train.size() && !found; ++i)
      found = (train.inputs.row(i).transpose() == nd.anchor);
    REQUIRE(found);
  }
}

TEST_CASE("rsm: hyperparameter validation") {
  const Dataset train = testutil::random_dataset(20, 1, 15);
  REQUIRE_THROWS_AS(generate_rsm(train, 5, 0.0, 2.0, 1), std::invalid_argument);
  REQUIRE_THROWS_AS(generate_rsm(train, 5, 0.5, 2.0, 1), std::invalid_argument);
  REQUIRE_THROWS_AS(generate_rsm(train, 5, 0.1, 1.0, 1), std::invalid_argument);
  REQUIRE_THROWS_AS(generate_rsm(train, 0, 0.1, 2.0, 1), std::invalid_argument);
}

TEST_CASE("rarsm: slope magnitude is four times the tangent of the angle") {
  const Dataset train = testutil::random_dataset(30, 1, 17);
  const HiddenParams p = generate_rarsm(train, 50, 44.999, 45.001, 18);
  for (Index i = 0; i < p.nodes(); ++i)
    REQUIRE(std::abs(p.weights(i, 0)) == Approx(4.0).margin(1e-3));
}

TEST_CASE("rarsm: angle round trip, containment and inflection placement") {
  Rng meta(19);
  const std::pair<double, double> ranges[] = {{55.0, 70.0}, {0.0, 85.0}, {30.0, 60.0}};
  int flips = 0;
  for (int t = 0; t < 60; ++t) {
    const Index dim = 1 + static_cast<Index>(meta.index(8));
    const auto [amin, amax] = ranges[meta.index(3)];
    const Dataset train = testutil::random_dataset(35, dim, 700 + t);
    Rng rng(800 + t);
    for (int node = 0; node < 10; ++node) {
      const auto nd = detail::rarsm_node(train, amin, amax, rng);
      REQUIRE(nd.alpha_deg > amin);
      REQUIRE(nd.alpha_deg < amax);
      const double recovered =
          std::atan(nd.normal.norm() / std::abs(nd.normal_y)) * 180.0 / std::numbers::pi;
      REQUIRE(std::abs(recovered - nd.alpha_deg) <= 1e-9);
      // the same angle is recoverable from the published weights alone
      const double from_weights =
          std::atan(nd.weights.norm() / 4.0) * 180.0 / std::numbers::pi;
      REQUIRE(std::abs(from_weights - nd.alpha_deg) <= 1e-9);
      if (nd.normal_y < 0) ++flips;
      const double z = argument_at(nd.weights, nd.bias, nd.anchor);
      REQUIRE(std::abs(z) <= 1e-10);
    }
  }
  REQUIRE(flips > 0);
  REQUIRE(flips < 600);
}

TEST_CASE("rarsm: hyperparameter validation") {
  const Dataset train = testutil::random_dataset(20, 2, 20);
  REQUIRE_THROWS_AS(generate_rarsm(train, 5, 70.0, 55.0, 1), std::invalid_argument);
  REQUIRE_THROWS_AS(generate_rarsm(train, 5, -5.0, 60.0, 1), std::invalid_argument);
  REQUIRE_THROWS_AS(generate_rarsm(train, 5, 10.0, 95.0, 1), std::invalid_argument);
  REQUIRE_THROWS_AS(generate_rarsm(train, 5, 45.0, 45.0, 1), std::invalid_argument);
}

TEST_CASE("ddm: exact linear data pins every node to slope four") {
  Rng rng(21);
  Eigen::MatrixXd x(60, 1);
  for (Index i = 0; i < 60; ++i) x(i, 0) = rng.uniform();
  const Dataset train{x, x.col(0)};  // y = x
  const HiddenParams p = generate_ddm(train, 30, 10, 22);
  for (Index i = 0; i < p.nodes(); ++i) {
    REQUIRE(p.weights(i, 0) == Approx(4.0).margin(1e-9));
    // bias equals -4 x* for some training row
    bool matched = false;
    for (Index l = 0; l < train.size() && !matched; ++l)
      matched = std::abs(p.biases(i) + 4.0 * train.inputs(l, 0)) < 1e-9;
    REQUIRE(matched);
  }
}

TEST_CASE("ddm: two-dimensional affine data recovers both slopes") {
  const Dataset base = testutil::random_dataset(80, 2, 23);
  Eigen::VectorXd y(80);
  for (Index i = 0; i < 80; ++i) y(i) = 2.0 * base.inputs(i, 0) + 3.0 * base.inputs(i, 1);
  const Dataset train{base.inputs, y};
  const HiddenParams p = generate_ddm(train, 20, 12, 24);
  for (Index i = 0; i < p.nodes(); ++i) {
    REQUIRE(p.weights(i, 0) == Approx(8.0).margin(1e-8));
    REQUIRE(p.weights(i, 1) == Approx(12.0).margin(1e-8));
  }
}

TEST_CASE("ddm: constant targets give flat nodes") {
  const Dataset base = testutil::random_dataset(40, 2, 25);
  const Dataset train{base.inputs, Eigen::VectorXd::Constant(40, 0.6)};
  const HiddenParams p = generate_ddm(train, 10, 5, 26);
  REQUIRE(p.weights.cwiseAbs().maxCoeff() < 1e-9);
  REQUIRE(p.biases.cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("ddm: inflection and gradient identities") {
  Rng meta(27);
  for (int t = 0; t < 10; ++t) {
    const Index dim = 1 + static_cast<Index>(meta.index(5));
    const Index rows = 40 + static_cast<Index>(meta.index(100));
    const Dataset train = testutil::random_dataset(rows, dim, 1200 + t);
    const Index k = dim + static_cast<Index>(meta.index(15));
    Rng rng(1300 + t);
    for (int node = 0; node < 8; ++node) {
      const auto nd = detail::ddm_node(train, k, rng);
      const double z = argument_at(nd.weights, nd.bias, nd.anchor);
      const double h = sigmoid(z);
      REQUIRE(std::abs(z) <= 1e-10);
      REQUIRE(h == Approx(0.5).margin(1e-10));
      for (Index j = 0; j < dim; ++j) {
        const double grad = nd.weights(j) * h * (1.0 - h);
        REQUIRE(std::abs(grad - nd.fit.slopes(j)) <= 1e-9);
      }
    }
  }
}

TEST_CASE("ddm: duplicate anchors are legal and the fit still solves") {
  const Dataset train = testutil::random_dataset(15, 1, 28);
  const HiddenParams p = generate_ddm(train, 60, 6, 29);  // far more nodes than rows
  REQUIRE(p.nodes() == 60);
  const TrainedNetwork net = fit_output_weights(p, train);  // rank-deficient solve
  REQUIRE(net.output_weights.allFinite());
}

TEST_CASE("ddm: neighborhood size validation") {
  const Dataset train = testutil::random_dataset(20, 3, 30);
  REQUIRE_THROWS_AS(generate_ddm(train, 5, 2, 1), std::invalid_argument);   // k < n
  REQUIRE_THROWS_AS(generate_ddm(train, 5, 20, 1), std::invalid_argument);  // k >= N
  REQUIRE_THROWS_AS(generate_ddm(train, 0, 5, 1), std::invalid_argument);
}

TEST_CASE("generate_hidden_params dispatch matches the direct calls") {
  const Dataset train = testutil::random_dataset(40, 2, 31);
  const std::uint64_t seed = 99;

  const HiddenParams fim = generate_hidden_params(train, 7, FimConfig{}, seed);
  REQUIRE(fim.weights == generate_fim(2, 7, seed).weights);

  const HiddenParams oim = generate_hidden_params(train, 7, OimConfig{2.5}, seed);
  REQUIRE(oim.weights == generate_oim(2, 7, 2.5, seed).weights);

  const HiddenParams rsm = generate_hidden_params(train, 7, RsmConfig{0.2, 4.0}, seed);
  REQUIRE(rsm.weights == generate_rsm(train, 7, 0.2, 4.0, seed).weights);

  const HiddenParams rarsm =
      generate_hidden_params(train, 7, RarsmConfig{40.0, 80.0}, seed);
  REQUIRE(rarsm.weights == generate_rarsm(train, 7, 40.0, 80.0, seed).weights);

  const HiddenParams ddm = generate_hidden_params(train, 7, DdmConfig{5}, seed);
  REQUIRE(ddm.weights == generate_ddm(train, 7, 5, seed).weights);
  REQUIRE(ddm.biases == generate_ddm(train, 7, 5, seed).biases);
}

TEST_CASE("method names and parameter descriptions") {
  REQUIRE(method_name(FimConfig{}) == "fim");
  REQUIRE(method_name(DdmConfig{34}) == "ddm");
  REQUIRE(describe_params(FimConfig{}) == "-");
  REQUIRE(describe_params(OimConfig{3.0}) == "u=3");
  REQUIRE(describe_params(RsmConfig{0.4, 30.0}) == "r=0.4 s=30");
  REQUIRE(describe_params(RarsmConfig{55.0, 70.0}) == "alpha_min=55 alpha_max=70");
  REQUIRE(describe_params(DdmConfig{34}) == "k=34 k_prime=35");
}

TEST_CASE("all schemes are deterministic in the seed") {
  const Dataset train = testutil::random_dataset(50, 2, 33);
  const GeneratorConfig configs[] = {FimConfig{}, OimConfig{2.0}, RsmConfig{0.3, 5.0},
                                     RarsmConfig{20.0, 70.0}, DdmConfig{6}};
  for (const auto& config : configs) {
    const HiddenParams a = generate_hidden_params(train, 12, config, 1234);
    const HiddenParams b = generate_hidden_params(train, 12, config, 1234);
    const HiddenParams c = generate_hidden_params(train, 12, config, 1235);
    REQUIRE(a.weights == b.weights);
    REQUIRE(a.biases == b.biases);
    REQUIRE(a.weights != c.weights);
  }
}
