#pragma once

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>

#include <Eigen/Dense>

#include "randfnn/dataset.hpp"
#include "randfnn/network.hpp"
#include "randfnn/numeric.hpp"
#include "randfnn/rng.hpp"

namespace randfnn {

// ---------------------------------------------------------------------------
// Scheme configurations
// ---------------------------------------------------------------------------

/// Fixed interval: every weight and bias i.i.d. U(-1, 1).
struct FimConfig {};

/// Optimized interval: every weight and bias i.i.d. U(-u, u).
struct OimConfig {
  double u = 1.0;
};

/// Random-slope method: a node's weight sum has magnitude drawn from
/// [ln((1-r)/r), s*ln((1-r)/r)] and is split across coordinates by random
/// proportions; the bias pins the sigmoid inflection onto a training point.
struct RsmConfig {
  double r = 0.1;
  double s = 2.0;
};

/// Slope-angle method: samples the sigmoid slope angle (degrees), a random
/// rotation of the tangent hyperplane's normal vector, and a training-point
/// shift.
struct RarsmConfig {
  double alpha_min_deg = 0.0;
  double alpha_max_deg = 90.0;
};

/// Data-driven method: each node fits a local hyperplane to a random training
/// point's k-nearest-neighbor patch and converts its slopes into sigmoid
/// parameters.
struct DdmConfig {
  Index k = 1;
};

using GeneratorConfig =
    std::variant<FimConfig, OimConfig, RsmConfig, RarsmConfig, DdmConfig>;

inline std::string method_name(const GeneratorConfig& config) {
  struct Visitor {
    std::string operator()(const FimConfig&) const { return "fim"; }
    std::string operator()(const OimConfig&) const { return "oim"; }
    std::string operator()(const RsmConfig&) const { return "rsm"; }
    std::string operator()(const RarsmConfig&) const { return "rarsm"; }
    std::string operator()(const DdmConfig&) const { return "ddm"; }
  };
  return std::visit(Visitor{}, config);
}

/// Short human/CSV-friendly hyperparameter rendering, e.g. "u=3" or
/// "k=34 k_prime=35". No commas, so it never needs CSV quoting.
inline std::string describe_params(const GeneratorConfig& config) {
  std::ostringstream out;
  struct Visitor {
    std::ostringstream& out;
    void operator()(const FimConfig&) const { out << "-"; }
    void operator()(const OimConfig& c) const { out << "u=" << c.u; }
    void operator()(const RsmConfig& c) const { out << "r=" << c.r << " s=" << c.s; }
    void operator()(const RarsmConfig& c) const {
      out << "alpha_min=" << c.alpha_min_deg << " alpha_max=" << c.alpha_max_deg;
    }
    void operator()(const DdmConfig& c) const {
      out << "k=" << c.k << " k_prime=" << (c.k + 1);
    }
  };
  std::visit(Visitor{out}, config);
  return out.str();
}

/// Validates scheme invariants against the training set the node generation
/// will draw from. Throws std::invalid_argument on violation.
inline void validate_config(const GeneratorConfig& config, Index dim, Index train_size) {
  if (const auto* oim = std::get_if<OimConfig>(&config)) {
    if (!(oim->u > 0.0)) throw std::invalid_argument("oim: u must be positive");
  } else if (const auto* rsm = std::get_if<RsmConfig>(&config)) {
    if (!(rsm->r > 0.0 && rsm->r < 0.5))
      throw std::invalid_argument("rsm: r must lie in (0, 0.5)");
    if (!(rsm->s > 1.0)) throw std::invalid_argument("rsm: s must exceed 1");
  } else if (const auto* rarsm = std::get_if<RarsmConfig>(&config)) {
    if (!(rarsm->alpha_min_deg >= 0.0 && rarsm->alpha_min_deg < rarsm->alpha_max_deg &&
          rarsm->alpha_max_deg <= 90.0))
      throw std::invalid_argument("rarsm: need 0 <= alpha_min < alpha_max <= 90 degrees");
  } else if (const auto* ddm = std::get_if<DdmConfig>(&config)) {
    if (ddm->k < dim)
      throw std::invalid_argument("ddm: k must be at least the input dimension");
    if (ddm->k >= train_size)
      throw std::invalid_argument("ddm: k must be smaller than the training set");
  }
}

// ---------------------------------------------------------------------------
// Per-node draws, exposed for property tests that need the internal
// quantities (drawn weight sum, slope angle, anchor, hyperplane fit).
// ---------------------------------------------------------------------------

namespace detail {

struct RsmNode {
  Eigen::VectorXd weights;
  double bias = 0.0;
  double weight_sum = 0.0;  // the drawn signed sum
  Eigen::VectorXd anchor;
};

inline RsmNode rsm_node(const Dataset& train, double r, double s, Rng& rng) {
  const Index n = train.dim();
  const double lo = std::log((1.0 - r) / r);
  const double magnitude = rng.uniform(lo, s * lo);
  const double sum = rng.coin() ? -magnitude : magnitude;

  // Split the sum across coordinates by random proportions. The proportion
  // denominator is resampled while it is small relative to the drawn sum:
  // this bounds individual weights near 1e4 so the weight-sum identity and
  // the inflection placement survive double rounding.
  const double denom_floor = std::max(1e-3, std::abs(sum) * 1e-4);
  Eigen::VectorXd zeta(n);
  double zeta_sum = 0.0;
  do {
    for (Index j = 0; j < n; ++j) zeta(j) = rng.uniform(-1.0, 1.0);
    zeta_sum = zeta.sum();
  } while (std::abs(zeta_sum) < denom_floor);

  RsmNode node;
  node.weight_sum = sum;
  node.weights = zeta * (sum / zeta_sum);
  node.anchor = train.inputs.row(static_cast<Index>(rng.index(
      static_cast<std::size_t>(train.size()))));
  node.bias = -node.weights.dot(node.anchor);
  return node;
}

struct RarsmNode {
  Eigen::VectorXd weights;
  double bias = 0.0;
  double alpha_deg = 0.0;        // sampled slope angle
  Eigen::VectorXd normal;        // drawn normal components a'_1..a'_n
  double normal_y = 0.0;         // derived component a'_0
  Eigen::VectorXd anchor;
};

inline RarsmNode rarsm_node(const Dataset& train, double alpha_min_deg,
                            double alpha_max_deg, Rng& rng) {
  const Index n = train.dim();
  RarsmNode node;
  // Open interval; angles within 1e-6 degrees of 90 are rejected because the
  // tangent blows up there.
  do {
    node.alpha_deg = rng.uniform(alpha_min_deg, alpha_max_deg);
  } while (node.alpha_deg <= alpha_min_deg || node.alpha_deg > 90.0 - 1e-6);

  node.normal.resize(n);
  do {
    for (Index j = 0; j < n; ++j) node.normal(j) = rng.uniform(-1.0, 1.0);
  } while (node.normal.lpNorm<Eigen::Infinity>() < 1e-12);

  const double sign = rng.coin() ? -1.0 : 1.0;
  const double alpha_rad = node.alpha_deg * std::numbers::pi / 180.0;
  node.normal_y = sign * node.normal.norm() / std::tan(alpha_rad);
  node.weights = -4.0 * node.normal / node.normal_y;
  node.anchor = train.inputs.row(static_cast<Index>(rng.index(
      static_cast<std::size_t>(train.size()))));
  node.bias = -node.weights.dot(node.anchor);
  return node;
}

struct DdmNode {
  Eigen::VectorXd weights;
  double bias = 0.0;
  Index anchor_index = 0;
  Eigen::VectorXd anchor;
  HyperplaneFit fit;
};

inline DdmNode ddm_node(const Dataset& train, Index k, Rng& rng) {
  DdmNode node;
  node.anchor_index = static_cast<Index>(rng.index(static_cast<std::size_t>(train.size())));
  const Neighborhood nb = k_nearest_neighbors(train, node.anchor_index, k);
  node.fit = fit_hyperplane(nb);
  node.anchor = nb.anchor;
  node.weights = 4.0 * node.fit.slopes;
  node.bias = -node.weights.dot(node.anchor);
  return node;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Generation schemes
// ---------------------------------------------------------------------------

/// All parameters i.i.d. U(-1, 1).
inline HiddenParams generate_fim(Index dim, Index nodes, std::uint64_t seed) {
  if (dim < 1 || nodes < 1)
    throw std::invalid_argument("generate_fim: dimensions must be positive");
  Rng rng(seed);
  HiddenParams params;
  params.weights.resize(nodes, dim);
  params.biases.resize(nodes);
  for (Index i = 0; i < nodes; ++i) {
    for (Index j = 0; j < dim; ++j) params.weights(i, j) = rng.uniform(-1.0, 1.0);
    params.biases(i) = rng.uniform(-1.0, 1.0);
  }
  return params;
}

/// All parameters i.i.d. U(-u, u).
inline HiddenParams generate_oim(Index dim, Index nodes, double u, std::uint64_t seed) {
  if (dim < 1 || nodes < 1)
    throw std::invalid_argument("generate_oim: dimensions must be positive");
  if (!(u > 0.0)) throw std::invalid_argument("generate_oim: u must be positive");
  Rng rng(seed);
  HiddenParams params;
  params.weights.resize(nodes, dim);
  params.biases.resize(nodes);
  for (Index i = 0; i < nodes; ++i) {
    for (Index j = 0; j < dim; ++j) params.weights(i, j) = rng.uniform(-u, u);
    params.biases(i) = rng.uniform(-u, u);
  }
  return params;
}

/// Random-slope scheme; see RsmConfig.
inline HiddenParams generate_rsm(const Dataset& train, Index nodes, double r,
                                 double s, std::uint64_t seed) {
  if (nodes < 1) throw std::invalid_argument("generate_rsm: node count must be positive");
  validate_config(RsmConfig{r, s}, train.dim(), train.size());
  Rng rng(seed);
  HiddenParams params;
  params.weights.resize(nodes, train.dim());
  params.biases.resize(nodes);
  for (Index i = 0; i < nodes; ++i) {
    const auto node = detail::rsm_node(train, r, s, rng);
    params.weights.row(i) = node.weights.transpose();
    params.biases(i) = node.bias;
  }
  return params;
}

/// Slope-angle scheme; see RarsmConfig.
inline HiddenParams generate_rarsm(const Dataset& train, Index nodes,
                                   double alpha_min_deg, double alpha_max_deg,
                                   std::uint64_t seed) {
  if (nodes < 1) throw std::invalid_argument("generate_rarsm: node count must be positive");
  validate_config(RarsmConfig{alpha_min_deg, alpha_max_deg}, train.dim(), train.size());
  Rng rng(seed);
  HiddenParams params;
  params.weights.resize(nodes, train.dim());
  params.biases.resize(nodes);
  for (Index i = 0; i < nodes; ++i) {
    const auto node = detail::rarsm_node(train, alpha_min_deg, alpha_max_deg, rng);
    params.weights.row(i) = node.weights.transpose();
    params.biases(i) = node.bias;
  }
  return params;
}

/// Data-driven scheme: anchors are drawn with replacement, so duplicate nodes
/// are legal; the minimum-norm output solve absorbs the rank deficiency.
inline HiddenParams generate_ddm(const Dataset& train, Index nodes, Index k,
                                 std::uint64_t seed) {
  if (nodes < 1) throw std::invalid_argument("generate_ddm: node count must be positive");
  validate_config(DdmConfig{k}, train.dim(), train.size());
  Rng rng(seed);
  HiddenParams params;
  params.weights.resize(nodes, train.dim());
  params.biases.resize(nodes);
  for (Index i = 0; i < nodes; ++i) {
    const auto node = detail::ddm_node(train, k, rng);
    params.weights.row(i) = node.weights.transpose();
    params.biases(i) = node.bias;
  }
  return params;
}

/// Strategy dispatch: one entry point for all five schemes.
inline HiddenParams generate_hidden_params(const Dataset& train, Index nodes,
                                           const GeneratorConfig& config,
                                           std::uint64_t seed) {
  validate_config(config, train.dim(), train.size());
  struct Visitor {
    const Dataset& train;
    Index nodes;
    std::uint64_t seed;
    HiddenParams operator()(const FimConfig&) const {
      return generate_fim(train.dim(), nodes, seed);
    }
    HiddenParams operator()(const OimConfig& c) const {
      return generate_oim(train.dim(), nodes, c.u, seed);
    }
    HiddenParams operator()(const RsmConfig& c) const {
      return generate_rsm(train, nodes, c.r, c.s, seed);
    }
    HiddenParams operator()(const RarsmConfig& c) const {
      return generate_rarsm(train, nodes, c.alpha_min_deg, c.alpha_max_deg, seed);
    }
    HiddenParams operator()(const DdmConfig& c) const {
      return generate_ddm(train, nodes, c.k, seed);
    }
  };
  return std::visit(Visitor{train, nodes, seed}, config);
}

}  // namespace randfnn
