#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "randfnn/rng.hpp"

namespace randfnn {

using Index = Eigen::Index;

/// Target range collapsed to a single value; min-max scaling is undefined.
struct DegenerateRangeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// CSV could not be read or parsed; the message carries row/column context.
struct CsvError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A sample set: N input rows of dimension n plus N scalar targets.
/// Immutable by convention; every operation below returns a new Dataset.
struct Dataset {
  Eigen::MatrixXd inputs;   // N x n, one sample per row
  Eigen::VectorXd targets;  // N

  Dataset(Eigen::MatrixXd in, Eigen::VectorXd tg)
      : inputs(std::move(in)), targets(std::move(tg)) {
    if (inputs.rows() != targets.size())
      throw std::invalid_argument("dataset: input rows and target count differ");
    if (inputs.rows() < 1 || inputs.cols() < 1)
      throw std::invalid_argument("dataset: needs at least one sample and one feature");
    if (!inputs.allFinite() || !targets.allFinite())
      throw std::invalid_argument("dataset: non-finite entry");
  }

  Index size() const { return inputs.rows(); }
  Index dim() const { return inputs.cols(); }
};

/// Affine target map fitted on training data and reused on test data.
struct NormalizationRecord {
  double y_min = 0.0;
  double y_max = 1.0;

  double apply(double y) const { return (y - y_min) / (y_max - y_min); }
  double invert(double t) const { return y_min + t * (y_max - y_min); }
};

/// Half-width c of the additive uniform noise U(-c, c).
struct NoiseSpec {
  double bound = 0.0;
};

/// Anchor point plus its k nearest training rows (anchor excluded from the
/// members, members ordered by distance with ties broken by ascending index).
struct Neighborhood {
  Eigen::VectorXd anchor;
  double anchor_target = 0.0;
  std::vector<Index> member_indices;
  Eigen::MatrixXd members;         // k x n
  Eigen::VectorXd member_targets;  // k
};

/// 1-D benchmark function: sin(20 e^x) x^2.
inline double tf1_value(double x) {
  return std::sin(20.0 * std::exp(x)) * x * x;
}

/// 2-D benchmark function: additive tf1 in each coordinate.
inline double tf2_value(double x1, double x2) {
  return tf1_value(x1) + tf1_value(x2);
}

/// N samples of tf1 with inputs i.i.d. uniform on [0,1]. Raw targets;
/// normalization and noise are separate steps.
inline Dataset generate_tf1(Index num_points, std::uint64_t seed) {
  if (num_points < 1) throw std::invalid_argument("generate_tf1: num_points < 1");
  Rng rng(seed);
  Eigen::MatrixXd x(num_points, 1);
  Eigen::VectorXd y(num_points);
  for (Index i = 0; i < num_points; ++i) {
    x(i, 0) = rng.uniform();
    y(i) = tf1_value(x(i, 0));
  }
  return {std::move(x), std::move(y)};
}

/// N samples of tf2 with inputs i.i.d. uniform on [0,1]^2.
inline Dataset generate_tf2(Index num_points, std::uint64_t seed) {
  if (num_points < 1) throw std::invalid_argument("generate_tf2: num_points < 1");
  Rng rng(seed);
  Eigen::MatrixXd x(num_points, 2);
  Eigen::VectorXd y(num_points);
  for (Index i = 0; i < num_points; ++i) {
    x(i, 0) = rng.uniform();
    x(i, 1) = rng.uniform();
    y(i) = tf2_value(x(i, 0), x(i, 1));
  }
  return {std::move(x), std::move(y)};
}

/// Regular lattice over [0,1]^2 with noiseless tf2 targets. The caller maps
/// the targets through its stored normalization record.
inline Dataset generate_test_grid_2d(Index points_per_axis) {
  if (points_per_axis < 2)
    throw std::invalid_argument("generate_test_grid_2d: points_per_axis < 2");
  const Index p = points_per_axis;
  const double step = 1.0 / static_cast<double>(p - 1);
  Eigen::MatrixXd x(p * p, 2);
  Eigen::VectorXd y(p * p);
  Index row = 0;
  for (Index i = 0; i < p; ++i) {
    for (Index j = 0; j < p; ++j, ++row) {
      x(row, 0) = static_cast<double>(i) * step;
      x(row, 1) = static_cast<double>(j) * step;
      y(row) = tf2_value(x(row, 0), x(row, 1));
    }
  }
  return {std::move(x), std::move(y)};
}

/// Min-max scales targets to [0,1] and returns the map used, so test targets
/// can be pushed through the same affine transform (no clamping).
inline std::pair<Dataset, NormalizationRecord> normalize_targets(const Dataset& data) {
  const double lo = data.targets.minCoeff();
  const double hi = data.targets.maxCoeff();
  if (lo == hi)
    throw DegenerateRangeError("normalize_targets: all targets equal");
  NormalizationRecord rec{lo, hi};
  Eigen::VectorXd scaled = (data.targets.array() - lo) / (hi - lo);
  return {Dataset(data.inputs, std::move(scaled)), rec};
}

/// Applies an existing normalization record to a dataset's targets.
inline Dataset apply_normalization(const Dataset& data, const NormalizationRecord& rec) {
  Eigen::VectorXd scaled =
      (data.targets.array() - rec.y_min) / (rec.y_max - rec.y_min);
  return {data.inputs, std::move(scaled)};
}

/// Adds an independent U(-c, c) draw to every target; inputs are untouched.
inline Dataset add_uniform_noise(const Dataset& data, const NoiseSpec& spec,
                                 std::uint64_t seed) {
  if (spec.bound < 0.0)
    throw std::invalid_argument("add_uniform_noise: negative noise bound");
  if (spec.bound == 0.0) return data;
  Rng rng(seed);
  Eigen::VectorXd noisy = data.targets;
  for (Index i = 0; i < noisy.size(); ++i)
    noisy(i) += rng.uniform(-spec.bound, spec.bound);
  return {data.inputs, std::move(noisy)};
}

/// Exact brute-force k-nearest-neighbor query under the Euclidean metric.
/// The anchor's own row is excluded; ties break by ascending index. Requires
/// n <= k <= N-1 (a local hyperplane needs at least n+1 points).
inline Neighborhood k_nearest_neighbors(const Dataset& data, Index anchor_index,
                                        Index k) {
  const Index n = data.dim();
  const Index count = data.size();
  if (anchor_index < 0 || anchor_index >= count)
    throw std::invalid_argument("k_nearest_neighbors: anchor index out of range");
  if (k < n)
    throw std::invalid_argument("k_nearest_neighbors: k must be at least the input dimension");
  if (k >= count)
    throw std::invalid_argument("k_nearest_neighbors: k must be smaller than the dataset");

  std::vector<std::pair<double, Index>> dist;
  dist.reserve(static_cast<std::size_t>(count - 1));
  const auto anchor = data.inputs.row(anchor_index);
  for (Index i = 0; i < count; ++i) {
    if (i == anchor_index) continue;
    dist.emplace_back((data.inputs.row(i) - anchor).squaredNorm(), i);
  }
  std::partial_sort(dist.begin(), dist.begin() + k, dist.end());

  Neighborhood nb;
  nb.anchor = anchor.transpose();
  nb.anchor_target = data.targets(anchor_index);
  nb.member_indices.reserve(static_cast<std::size_t>(k));
  nb.members.resize(k, n);
  nb.member_targets.resize(k);
  for (Index j = 0; j < k; ++j) {
    const Index src = dist[static_cast<std::size_t>(j)].second;
    nb.member_indices.push_back(src);
    nb.members.row(j) = data.inputs.row(src);
    nb.member_targets(j) = data.targets(src);
  }
  return nb;
}

/// Rows of `data` selected by index, in the order given.
inline Dataset subset(const Dataset& data, const std::vector<Index>& indices) {
  if (indices.empty()) throw std::invalid_argument("subset: empty index list");
  Eigen::MatrixXd x(static_cast<Index>(indices.size()), data.dim());
  Eigen::VectorXd y(static_cast<Index>(indices.size()));
  for (std::size_t i = 0; i < indices.size(); ++i) {
    const Index src = indices[i];
    if (src < 0 || src >= data.size())
      throw std::invalid_argument("subset: index out of range");
    x.row(static_cast<Index>(i)) = data.inputs.row(src);
    y(static_cast<Index>(i)) = data.targets(src);
  }
  return {std::move(x), std::move(y)};
}

/// Seeded random partition without overlap. Indices within each part are
/// ascending, so the split is a deterministic function of (data, fraction, seed).
inline std::pair<Dataset, Dataset> split_train_test(const Dataset& data,
                                                    double train_fraction,
                                                    std::uint64_t seed) {
  const Index count = data.size();
  if (!(train_fraction > 0.0 && train_fraction < 1.0))
    throw std::invalid_argument("split_train_test: fraction must be in (0,1)");
  const Index train_count =
      static_cast<Index>(std::llround(train_fraction * static_cast<double>(count)));
  if (train_count < 1 || train_count >= count)
    throw std::invalid_argument("split_train_test: a part would be empty");

  std::vector<Index> order(static_cast<std::size_t>(count));
  for (Index i = 0; i < count; ++i) order[static_cast<std::size_t>(i)] = i;
  Rng rng(seed);
  for (std::size_t i = order.size() - 1; i > 0; --i)
    std::swap(order[i], order[rng.index(i + 1)]);

  std::vector<Index> train_idx(order.begin(), order.begin() + train_count);
  std::vector<Index> test_idx(order.begin() + train_count, order.end());
  std::sort(train_idx.begin(), train_idx.end());
  std::sort(test_idx.begin(), test_idx.end());
  return {subset(data, train_idx), subset(data, test_idx)};
}

/// Disjoint covering folds with sizes differing by at most one.
inline std::vector<std::vector<Index>> k_fold_indices(Index count, Index folds,
                                                      std::uint64_t seed) {
  if (folds < 2) throw std::invalid_argument("k_fold_indices: folds < 2");
  if (folds > count) throw std::invalid_argument("k_fold_indices: folds > N");

  std::vector<Index> order(static_cast<std::size_t>(count));
  for (Index i = 0; i < count; ++i) order[static_cast<std::size_t>(i)] = i;
  Rng rng(seed);
  for (std::size_t i = order.size() - 1; i > 0; --i)
    std::swap(order[i], order[rng.index(i + 1)]);

  std::vector<std::vector<Index>> out(static_cast<std::size_t>(folds));
  const Index base = count / folds;
  const Index extra = count % folds;
  std::size_t pos = 0;
  for (Index f = 0; f < folds; ++f) {
    const Index len = base + (f < extra ? 1 : 0);
    auto& fold = out[static_cast<std::size_t>(f)];
    fold.assign(order.begin() + static_cast<std::ptrdiff_t>(pos),
                order.begin() + static_cast<std::ptrdiff_t>(pos + static_cast<std::size_t>(len)));
    std::sort(fold.begin(), fold.end());
    pos += static_cast<std::size_t>(len);
  }
  return out;
}

/// Target column selector: zero-based position or header name.
using TargetColumn = std::variant<Index, std::string>;

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cur;
  std::stringstream ss(line);
  while (std::getline(ss, cur, ',')) cells.push_back(trim(cur));
  if (!line.empty() && line.back() == ',') cells.push_back("");
  return cells;
}

inline bool parse_double(const std::string& cell, double& out) {
  std::string s = cell;
  if (!s.empty() && s.front() == '+') s.erase(s.begin());
  if (s.empty()) return false;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last && std::isfinite(out);
}

}  // namespace detail

/// Loads a numeric CSV (optional single header row). The selected column
/// becomes the targets; the remaining columns become inputs in file order.
/// Inputs are min-max scaled per column to [0,1] unless normalize_inputs is
/// false; a constant column maps to 0. Targets are left as-is.
inline Dataset load_csv(const std::string& path,
                        const std::optional<TargetColumn>& target = std::nullopt,
                        bool normalize_inputs = true) {
  std::ifstream in(path);
  if (!in) throw CsvError("load_csv: cannot open '" + path + "'");

  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::trim(line).empty()) continue;
    const auto cells = detail::split_csv_line(line);
    std::vector<double> values(cells.size());
    bool numeric = true;
    std::size_t bad_col = 0;
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (!detail::parse_double(cells[c], values[c])) {
        numeric = false;
        bad_col = c;
        break;
      }
    }
    if (!numeric) {
      if (rows.empty() && header.empty()) {
        header = cells;  // first non-numeric row is the header
        continue;
      }
      throw CsvError("load_csv: non-numeric cell at row " + std::to_string(line_no) +
                     ", column " + std::to_string(bad_col + 1) + " of '" + path + "'");
    }
    if (!rows.empty() && values.size() != rows.front().size())
      throw CsvError("load_csv: inconsistent column count at row " + std::to_string(line_no));
    if (!header.empty() && values.size() != header.size())
      throw CsvError("load_csv: row " + std::to_string(line_no) + " does not match header width");
    rows.push_back(std::move(values));
  }
  if (rows.empty()) throw CsvError("load_csv: no data rows in '" + path + "'");
  const std::size_t cols = rows.front().size();
  if (cols < 2) throw CsvError("load_csv: need at least two columns (inputs + target)");

  std::size_t target_col = cols - 1;
  if (target.has_value()) {
    if (const Index* pos = std::get_if<Index>(&*target)) {
      if (*pos < 0 || static_cast<std::size_t>(*pos) >= cols)
        throw CsvError("load_csv: target column position out of range");
      target_col = static_cast<std::size_t>(*pos);
    } else {
      const std::string& name = std::get<std::string>(*target);
      if (header.empty())
        throw CsvError("load_csv: target column named '" + name + "' but file has no header");
      const auto it = std::find(header.begin(), header.end(), name);
      if (it == header.end())
        throw CsvError("load_csv: no column named '" + name + "'");
      target_col = static_cast<std::size_t>(it - header.begin());
    }
  }

  const Index count = static_cast<Index>(rows.size());
  const Index dim = static_cast<Index>(cols - 1);
  Eigen::MatrixXd x(count, dim);
  Eigen::VectorXd y(count);
  for (Index r = 0; r < count; ++r) {
    const auto& row = rows[static_cast<std::size_t>(r)];
    Index c_out = 0;
    for (std::size_t c = 0; c < cols; ++c) {
      if (c == target_col)
        y(r) = row[c];
      else
        x(r, c_out++) = row[c];
    }
  }
  if (normalize_inputs) {
    for (Index c = 0; c < dim; ++c) {
      const double lo = x.col(c).minCoeff();
      const double hi = x.col(c).maxCoeff();
      if (hi > lo)
        x.col(c) = (x.col(c).array() - lo) / (hi - lo);
      else
        x.col(c).setZero();
    }
  }
  return {std::move(x), std::move(y)};
}

/// Full-precision double formatting ("%.17g"): parses back bit-exactly.
inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// Writes a dataset as CSV with header x1..xn,y (target last).
inline void write_csv(const Dataset& data, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw CsvError("write_csv: cannot open '" + path + "' for writing");
  for (Index c = 0; c < data.dim(); ++c) out << "x" << (c + 1) << ",";
  out << "y\n";
  for (Index r = 0; r < data.size(); ++r) {
    for (Index c = 0; c < data.dim(); ++c)
      out << format_double(data.inputs(r, c)) << ",";
    out << format_double(data.targets(r)) << "\n";
  }
  if (!out) throw CsvError("write_csv: failed writing '" + path + "'");
}

}  // namespace randfnn
