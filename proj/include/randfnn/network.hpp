#pragma once

#include <cmath>
#include <fstream>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

#include <Eigen/Dense>
#include <json.hpp>

#include "randfnn/dataset.hpp"
#include "randfnn/numeric.hpp"

namespace randfnn {

inline constexpr const char* kModelSchema = "randfnn-model/1";

/// Logistic unit, evaluated branch-wise so large |z| cannot overflow.
inline double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

/// Hidden layer: row i holds the weight vector of node i, paired with bias i.
struct HiddenParams {
  Eigen::MatrixXd weights;  // m x n
  Eigen::VectorXd biases;   // m

  Index nodes() const { return weights.rows(); }
  Index dim() const { return weights.cols(); }
};

/// Hidden layer plus fitted output weights. The target normalization used at
/// training time rides along so predictions can be traced back to raw units.
struct TrainedNetwork {
  HiddenParams hidden;
  Eigen::VectorXd output_weights;  // m
  std::optional<NormalizationRecord> normalization;
};

/// N x m matrix of node activations: entry (l, i) = sigmoid(a_i . x_l + b_i).
inline Eigen::MatrixXd hidden_outputs(const HiddenParams& params, const Dataset& data) {
  if (params.dim() != data.dim())
    throw std::invalid_argument("hidden_outputs: input dimension mismatch");
  Eigen::MatrixXd z = data.inputs * params.weights.transpose();
  z.rowwise() += params.biases.transpose();
  return z.unaryExpr([](double v) { return sigmoid(v); });
}

/// Solves the hidden activation matrix against the targets for the
/// minimum-norm output weights.
inline TrainedNetwork fit_output_weights(const HiddenParams& params, const Dataset& train) {
  const Eigen::MatrixXd h = hidden_outputs(params, train);
  Eigen::VectorXd beta = solve_least_squares(h, train.targets);
  return {params, std::move(beta), std::nullopt};
}

inline Eigen::VectorXd predict(const TrainedNetwork& net, const Dataset& data) {
  if (net.hidden.nodes() != net.output_weights.size())
    throw std::invalid_argument("predict: output weight count mismatch");
  return hidden_outputs(net.hidden, data) * net.output_weights;
}

/// Per-node view of a fit: raw activations, activations scaled by their
/// output weights, and the fitted sum (computed exactly as predict does).
struct Decomposition {
  Eigen::MatrixXd raw;       // N x m
  Eigen::MatrixXd weighted;  // N x m
  Eigen::VectorXd fitted;    // N
};

inline Decomposition decompose(const TrainedNetwork& net, const Dataset& data) {
  if (net.hidden.nodes() != net.output_weights.size())
    throw std::invalid_argument("decompose: output weight count mismatch");
  Decomposition d;
  d.raw = hidden_outputs(net.hidden, data);
  d.weighted = d.raw.array().rowwise() * net.output_weights.transpose().array();
  d.fitted = d.raw * net.output_weights;
  return d;
}

inline nlohmann::json model_to_json(const TrainedNetwork& net) {
  nlohmann::json j;
  j["schema"] = kModelSchema;
  j["n"] = net.hidden.dim();
  j["m"] = net.hidden.nodes();
  auto weights = nlohmann::json::array();
  for (Index i = 0; i < net.hidden.nodes(); ++i) {
    auto row = nlohmann::json::array();
    for (Index c = 0; c < net.hidden.dim(); ++c) row.push_back(net.hidden.weights(i, c));
    weights.push_back(std::move(row));
  }
  j["weights"] = std::move(weights);
  auto biases = nlohmann::json::array();
  for (Index i = 0; i < net.hidden.nodes(); ++i) biases.push_back(net.hidden.biases(i));
  j["biases"] = std::move(biases);
  auto beta = nlohmann::json::array();
  for (Index i = 0; i < net.output_weights.size(); ++i) beta.push_back(net.output_weights(i));
  j["output_weights"] = std::move(beta);
  if (net.normalization)
    j["target_normalization"] = {{"y_min", net.normalization->y_min},
                                 {"y_max", net.normalization->y_max}};
  else
    j["target_normalization"] = nullptr;
  return j;
}

inline TrainedNetwork model_from_json(const nlohmann::json& j) {
  if (!j.contains("schema") || j.at("schema").get<std::string>() != kModelSchema)
    throw std::runtime_error("model_from_json: unknown schema");
  const Index n = j.at("n").get<Index>();
  const Index m = j.at("m").get<Index>();
  if (n < 1 || m < 1) throw std::runtime_error("model_from_json: bad dimensions");
  TrainedNetwork net;
  net.hidden.weights.resize(m, n);
  net.hidden.biases.resize(m);
  net.output_weights.resize(m);
  const auto& weights = j.at("weights");
  const auto& biases = j.at("biases");
  const auto& beta = j.at("output_weights");
  if (static_cast<Index>(weights.size()) != m || static_cast<Index>(biases.size()) != m ||
      static_cast<Index>(beta.size()) != m)
    throw std::runtime_error("model_from_json: array length mismatch");
  for (Index i = 0; i < m; ++i) {
    const auto& row = weights.at(static_cast<std::size_t>(i));
    if (static_cast<Index>(row.size()) != n)
      throw std::runtime_error("model_from_json: weight row length mismatch");
    for (Index c = 0; c < n; ++c)
      net.hidden.weights(i, c) = row.at(static_cast<std::size_t>(c)).get<double>();
    net.hidden.biases(i) = biases.at(static_cast<std::size_t>(i)).get<double>();
    net.output_weights(i) = beta.at(static_cast<std::size_t>(i)).get<double>();
  }
  if (j.contains("target_normalization") && !j.at("target_normalization").is_null()) {
    const auto& rec = j.at("target_normalization");
    net.normalization = NormalizationRecord{rec.at("y_min").get<double>(),
                                            rec.at("y_max").get<double>()};
  }
  if (!net.hidden.weights.allFinite() || !net.hidden.biases.allFinite() ||
      !net.output_weights.allFinite())
    throw std::runtime_error("model_from_json: non-finite parameter");
  return net;
}

inline void save_model(const TrainedNetwork& net, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_model: cannot open '" + path + "'");
  out << model_to_json(net).dump(2) << "\n";
}

inline TrainedNetwork load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_model: cannot open '" + path + "'");
  nlohmann::json j;
  in >> j;
  return model_from_json(j);
}

}  // namespace randfnn
