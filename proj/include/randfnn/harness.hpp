#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "randfnn/dataset.hpp"
#include "randfnn/generators.hpp"
#include "randfnn/network.hpp"
#include "randfnn/parallel.hpp"
#include "randfnn/rng.hpp"

namespace randfnn {

inline constexpr const char* kReportSchema = "randfnn-report/1";
inline constexpr const char* kSweepSchema = "randfnn-sweep/1";
inline constexpr const char* kBenchmarkSchema = "randfnn-benchmark/1";

/// Root-mean-square error, the only accuracy metric used anywhere.
inline double rmse(const Eigen::VectorXd& predicted, const Eigen::VectorXd& actual) {
  if (predicted.size() != actual.size())
    throw std::invalid_argument("rmse: length mismatch");
  if (predicted.size() < 1) throw std::invalid_argument("rmse: empty vectors");
  return std::sqrt((predicted - actual).squaredNorm() /
                   static_cast<double>(predicted.size()));
}

// ---------------------------------------------------------------------------
// Trial records and summary statistics
// ---------------------------------------------------------------------------

struct TrialReport {
  std::string method;
  std::string params;
  Index nodes = 0;
  std::uint64_t seed = 0;
  double train_rmse = std::numeric_limits<double>::quiet_NaN();
  double test_rmse = std::numeric_limits<double>::quiet_NaN();
  double seconds = 0.0;
  bool failed = false;
  std::string error;
};

struct Summary {
  Index count = 0;
  double mean = 0.0;
  double stddev = 0.0;  // unbiased sample deviation; 0 for a single value
  double min = 0.0;
  double max = 0.0;
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
};

namespace detail {

/// Linearly interpolated quantile of a sorted vector (the numpy default).
inline double quantile_sorted(const std::vector<double>& sorted, double p) {
  const std::size_t n = sorted.size();
  if (n == 1) return sorted[0];
  const double h = p * static_cast<double>(n - 1);
  const std::size_t lo = static_cast<std::size_t>(h);
  if (lo + 1 >= n) return sorted[n - 1];
  const double frac = h - static_cast<double>(lo);
  return sorted[lo] + (sorted[lo + 1] - sorted[lo]) * frac;
}

}  // namespace detail

inline Summary summarize_values(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("summarize: empty list");
  std::sort(values.begin(), values.end());
  Summary s;
  s.count = static_cast<Index>(values.size());
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / static_cast<double>(values.size());
  double ss = 0.0;
  for (double v : values) ss += (v - s.mean) * (v - s.mean);
  s.stddev = values.size() > 1
                 ? std::sqrt(ss / static_cast<double>(values.size() - 1))
                 : 0.0;
  s.min = values.front();
  s.max = values.back();
  s.q1 = detail::quantile_sorted(values, 0.25);
  s.median = detail::quantile_sorted(values, 0.5);
  s.q3 = detail::quantile_sorted(values, 0.75);
  return s;
}

/// Statistics over the successful trials' test RMSE.
inline Summary summarize(const std::vector<TrialReport>& reports) {
  std::vector<double> values;
  values.reserve(reports.size());
  for (const auto& r : reports)
    if (!r.failed) values.push_back(r.test_rmse);
  return summarize_values(std::move(values));
}

// ---------------------------------------------------------------------------
// Trials
// ---------------------------------------------------------------------------

namespace seed_tag {
inline constexpr std::uint64_t kData = 1;
inline constexpr std::uint64_t kTrial = 2;
inline constexpr std::uint64_t kCell = 3;
inline constexpr std::uint64_t kFold = 4;
inline constexpr std::uint64_t kEntry = 5;
inline constexpr std::uint64_t kTrainDraw = 6;
inline constexpr std::uint64_t kNoise = 7;
inline constexpr std::uint64_t kTestDraw = 8;
}  // namespace seed_tag

/// One generate/fit/score pass. Generation and solver errors are captured in
/// the report instead of thrown, so a batch never aborts on one bad trial.
inline TrialReport run_single_trial(const Dataset& train, const Dataset& test,
                                    const GeneratorConfig& config, Index nodes,
                                    std::uint64_t seed) {
  TrialReport rep;
  rep.method = method_name(config);
  rep.params = describe_params(config);
  rep.nodes = nodes;
  rep.seed = seed;
  const auto start = std::chrono::steady_clock::now();
  try {
    const HiddenParams params = generate_hidden_params(train, nodes, config, seed);
    const TrainedNetwork net = fit_output_weights(params, train);
    rep.train_rmse = rmse(predict(net, train), train.targets);
    rep.test_rmse = rmse(predict(net, test), test.targets);
  } catch (const std::exception& e) {
    rep.failed = true;
    rep.error = e.what();
  }
  rep.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

/// Repeated independent trials. Trial t draws its seed from (master_seed, t),
/// so reports are independent of scheduling and of the total trial count.
inline std::vector<TrialReport> run_trials(const Dataset& train, const Dataset& test,
                                           const GeneratorConfig& config, Index nodes,
                                           Index num_trials, std::uint64_t master_seed) {
  if (num_trials < 1) throw std::invalid_argument("run_trials: num_trials < 1");
  std::vector<TrialReport> reports(static_cast<std::size_t>(num_trials));
  parallel_for(num_trials, [&](std::int64_t t) {
    reports[static_cast<std::size_t>(t)] = run_single_trial(
        train, test, config, nodes,
        derive_seed(master_seed, seed_tag::kTrial, static_cast<std::uint64_t>(t)));
  });
  return reports;
}

// ---------------------------------------------------------------------------
// Sweeps and grid search
// ---------------------------------------------------------------------------

struct SweepCell {
  std::vector<std::pair<std::string, double>> coords;  // axis name -> value
  std::string label;                                   // e.g. "ddm k=34 k_prime=35"
  std::vector<TrialReport> reports;
  Summary stats;  // over successful trials; meaningless when excluded
  Index ok_count = 0;
  Index failed_count = 0;
  bool excluded = false;  // every trial failed
};

struct SweepResult {
  std::vector<std::string> axes;
  std::vector<SweepCell> cells;
};

namespace detail {

inline void finalize_cell(SweepCell& cell) {
  for (const auto& r : cell.reports) (r.failed ? cell.failed_count : cell.ok_count)++;
  if (cell.ok_count > 0)
    cell.stats = summarize(cell.reports);
  else
    cell.excluded = true;
}

inline double cell_coord(const SweepCell& cell, const std::string& axis) {
  for (const auto& [name, value] : cell.coords)
    if (name == axis) return value;
  throw std::invalid_argument("cell_coord: no axis '" + axis + "'");
}

/// Argmin over mean test RMSE. Ties break toward fewer nodes, then toward
/// earlier grid order. Excluded cells never win.
inline std::size_t select_best(const std::vector<SweepCell>& cells,
                               const std::string& node_axis = "m") {
  std::size_t best = cells.size();
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (cells[i].excluded) continue;
    if (best == cells.size()) {
      best = i;
      continue;
    }
    const double mean = cells[i].stats.mean;
    const double best_mean = cells[best].stats.mean;
    if (mean < best_mean) {
      best = i;
    } else if (mean == best_mean &&
               cell_coord(cells[i], node_axis) < cell_coord(cells[best], node_axis)) {
      best = i;
    }
  }
  if (best == cells.size())
    throw std::runtime_error("select_best: every grid cell failed");
  return best;
}

}  // namespace detail

struct GridSearchOutcome {
  GeneratorConfig best_config;
  Index best_nodes = 0;
  double best_mean = 0.0;
  SweepResult sweep;
};

/// K-fold cross-validated grid search over the Cartesian product of scheme
/// configurations and node counts. Hidden parameters are regenerated for
/// every fold and trial; the per-cell score is the mean validation RMSE over
/// folds x trials. Cells whose trials all failed are excluded and flagged.
inline GridSearchOutcome grid_search_cv(const Dataset& train,
                                        const std::vector<GeneratorConfig>& config_grid,
                                        const std::vector<Index>& node_grid,
                                        Index folds, Index trials_per_cell,
                                        std::uint64_t master_seed) {
  if (config_grid.empty() || node_grid.empty())
    throw std::invalid_argument("grid_search_cv: empty grid");
  if (folds < 2) throw std::invalid_argument("grid_search_cv: folds < 2");
  if (trials_per_cell < 1)
    throw std::invalid_argument("grid_search_cv: trials_per_cell < 1");

  const auto fold_sets =
      k_fold_indices(train.size(), folds, derive_seed(master_seed, seed_tag::kFold));
  std::vector<Dataset> fit_parts;
  std::vector<Dataset> val_parts;
  fit_parts.reserve(static_cast<std::size_t>(folds));
  val_parts.reserve(static_cast<std::size_t>(folds));
  for (Index f = 0; f < folds; ++f) {
    std::vector<Index> fit_idx;
    fit_idx.reserve(static_cast<std::size_t>(train.size()));
    for (Index g = 0; g < folds; ++g) {
      if (g == f) continue;
      const auto& fold = fold_sets[static_cast<std::size_t>(g)];
      fit_idx.insert(fit_idx.end(), fold.begin(), fold.end());
    }
    std::sort(fit_idx.begin(), fit_idx.end());
    fit_parts.push_back(subset(train, fit_idx));
    val_parts.push_back(subset(train, fold_sets[static_cast<std::size_t>(f)]));
  }

  SweepResult sweep;
  sweep.axes = {"config_index", "m"};
  const std::size_t cell_count = config_grid.size() * node_grid.size();
  sweep.cells.resize(cell_count);
  parallel_for(static_cast<std::int64_t>(cell_count), [&](std::int64_t flat) {
    const std::size_t ci = static_cast<std::size_t>(flat) / node_grid.size();
    const std::size_t mi = static_cast<std::size_t>(flat) % node_grid.size();
    const GeneratorConfig& config = config_grid[ci];
    const Index nodes = node_grid[mi];
    SweepCell cell;
    cell.coords = {{"config_index", static_cast<double>(ci)},
                   {"m", static_cast<double>(nodes)}};
    cell.label = method_name(config) + " " + describe_params(config);
    for (Index f = 0; f < folds; ++f) {
      for (Index t = 0; t < trials_per_cell; ++t) {
        const std::uint64_t seed =
            derive_seed(master_seed, seed_tag::kCell, ci, mi,
                        static_cast<std::uint64_t>(f), static_cast<std::uint64_t>(t));
        cell.reports.push_back(run_single_trial(fit_parts[static_cast<std::size_t>(f)],
                                                val_parts[static_cast<std::size_t>(f)],
                                                config, nodes, seed));
      }
    }
    detail::finalize_cell(cell);
    sweep.cells[static_cast<std::size_t>(flat)] = std::move(cell);
  });

  const std::size_t best = detail::select_best(sweep.cells);
  GridSearchOutcome out;
  out.best_config = config_grid[best / node_grid.size()];
  out.best_nodes = node_grid[best % node_grid.size()];
  out.best_mean = sweep.cells[best].stats.mean;
  out.sweep = std::move(sweep);
  return out;
}

// ---------------------------------------------------------------------------
// Synthetic benchmark protocol
// ---------------------------------------------------------------------------

enum class TfId { tf1, tf2 };

inline std::string to_string(TfId tf) { return tf == TfId::tf1 ? "tf1" : "tf2"; }

inline TfId tf_from_string(const std::string& s) {
  if (s == "tf1") return TfId::tf1;
  if (s == "tf2") return TfId::tf2;
  throw std::invalid_argument("unknown target function '" + s + "'");
}

struct SyntheticSpec {
  TfId tf = TfId::tf2;
  Index n_train = 5000;
  double noise_c = 0.2;
  Index n_test = 5000;        // tf1 test draw size
  Index grid_per_axis = 100;  // tf2 test lattice resolution
};

struct SyntheticData {
  Dataset train;
  Dataset test;
  NormalizationRecord record;
};

/// Builds a (train, test) pair under the benchmark protocol. The 1-D
/// benchmark perturbs raw targets and then scales the noisy values to [0,1];
/// the 2-D benchmark scales first and perturbs the normalized targets. Test
/// targets are always the noiseless function values pushed through the
/// training normalization.
inline SyntheticData make_synthetic(const SyntheticSpec& spec, std::uint64_t seed) {
  const std::uint64_t train_seed = derive_seed(seed, seed_tag::kTrainDraw);
  const std::uint64_t noise_seed = derive_seed(seed, seed_tag::kNoise);
  const std::uint64_t test_seed = derive_seed(seed, seed_tag::kTestDraw);
  if (spec.tf == TfId::tf1) {
    const Dataset raw = generate_tf1(spec.n_train, train_seed);
    const Dataset noisy = add_uniform_noise(raw, NoiseSpec{spec.noise_c}, noise_seed);
    auto [train, record] = normalize_targets(noisy);
    const Dataset test_raw = generate_tf1(spec.n_test, test_seed);
    return {std::move(train), apply_normalization(test_raw, record), record};
  }
  const Dataset raw = generate_tf2(spec.n_train, train_seed);
  auto [clean, record] = normalize_targets(raw);
  Dataset train = add_uniform_noise(clean, NoiseSpec{spec.noise_c}, noise_seed);
  const Dataset test_raw = generate_test_grid_2d(spec.grid_per_axis);
  return {std::move(train), apply_normalization(test_raw, record), record};
}

/// Test RMSE of the data-driven scheme across noise levels c and neighborhood
/// sizes k' at a fixed node count. Training data is regenerated per noise
/// level; every (c, k') cell runs `trials` seeded trials.
inline SweepResult noise_sensitivity_sweep(TfId tf, const std::vector<double>& c_values,
                                           const std::vector<Index>& k_prime_values,
                                           Index nodes_fixed, Index trials,
                                           std::uint64_t master_seed,
                                           Index n_train = 5000, Index n_test = 5000,
                                           Index grid_per_axis = 100) {
  if (c_values.empty() || k_prime_values.empty())
    throw std::invalid_argument("noise_sensitivity_sweep: empty grid");
  SweepResult sweep;
  sweep.axes = {"c", "k_prime"};
  for (std::size_t ci = 0; ci < c_values.size(); ++ci) {
    const SyntheticData data =
        make_synthetic({tf, n_train, c_values[ci], n_test, grid_per_axis},
                       derive_seed(master_seed, seed_tag::kData, ci));
    for (std::size_t ki = 0; ki < k_prime_values.size(); ++ki) {
      const Index k_prime = k_prime_values[ki];
      if (k_prime < 2)
        throw std::invalid_argument("noise_sensitivity_sweep: k' must be at least 2");
      SweepCell cell;
      cell.coords = {{"c", c_values[ci]}, {"k_prime", static_cast<double>(k_prime)}};
      const GeneratorConfig config = DdmConfig{k_prime - 1};
      cell.label = "ddm " + describe_params(config);
      cell.reports = run_trials(data.train, data.test, config, nodes_fixed, trials,
                                derive_seed(master_seed, seed_tag::kCell, ci, ki));
      detail::finalize_cell(cell);
      sweep.cells.push_back(std::move(cell));
    }
  }
  return sweep;
}

/// Test RMSE of the data-driven scheme across noise levels c and node counts
/// m at a fixed neighborhood size k'.
inline SweepResult node_sensitivity_sweep(TfId tf, const std::vector<double>& c_values,
                                          const std::vector<Index>& node_values,
                                          Index k_prime_fixed, Index trials,
                                          std::uint64_t master_seed,
                                          Index n_train = 5000, Index n_test = 5000,
                                          Index grid_per_axis = 100) {
  if (c_values.empty() || node_values.empty())
    throw std::invalid_argument("node_sensitivity_sweep: empty grid");
  if (k_prime_fixed < 2)
    throw std::invalid_argument("node_sensitivity_sweep: k' must be at least 2");
  SweepResult sweep;
  sweep.axes = {"c", "m"};
  for (std::size_t ci = 0; ci < c_values.size(); ++ci) {
    const SyntheticData data =
        make_synthetic({tf, n_train, c_values[ci], n_test, grid_per_axis},
                       derive_seed(master_seed, seed_tag::kData, ci));
    for (std::size_t mi = 0; mi < node_values.size(); ++mi) {
      SweepCell cell;
      cell.coords = {{"c", c_values[ci]},
                     {"m", static_cast<double>(node_values[mi])}};
      const GeneratorConfig config = DdmConfig{k_prime_fixed - 1};
      cell.label = "ddm " + describe_params(config);
      cell.reports = run_trials(data.train, data.test, config, node_values[mi], trials,
                                derive_seed(master_seed, seed_tag::kCell, ci, mi));
      detail::finalize_cell(cell);
      sweep.cells.push_back(std::move(cell));
    }
  }
  return sweep;
}

// ---------------------------------------------------------------------------
// Multi-method benchmark
// ---------------------------------------------------------------------------

struct BenchmarkEntry {
  GeneratorConfig config;
  Index nodes = 0;
};

struct BenchmarkRow {
  std::string method;
  std::string params;
  Index nodes = 0;
  Summary stats;  // over successful test RMSE
  Index ok_count = 0;
  Index failed_count = 0;
  double mean_train_rmse = 0.0;
  double total_seconds = 0.0;
  std::vector<TrialReport> reports;
};

/// Runs the trial protocol for every entry. A failing method never aborts
/// the others; its row reports the failure counts.
inline std::vector<BenchmarkRow> run_benchmark(const Dataset& train, const Dataset& test,
                                               const std::vector<BenchmarkEntry>& entries,
                                               Index trials, std::uint64_t master_seed) {
  if (entries.empty()) throw std::invalid_argument("run_benchmark: no entries");
  std::vector<BenchmarkRow> rows;
  rows.reserve(entries.size());
  for (std::size_t ei = 0; ei < entries.size(); ++ei) {
    const auto& entry = entries[ei];
    BenchmarkRow row;
    row.method = method_name(entry.config);
    row.params = describe_params(entry.config);
    row.nodes = entry.nodes;
    row.reports = run_trials(train, test, entry.config, entry.nodes, trials,
                             derive_seed(master_seed, seed_tag::kEntry, ei));
    double train_sum = 0.0;
    for (const auto& rep : row.reports) {
      row.total_seconds += rep.seconds;
      if (rep.failed) {
        ++row.failed_count;
      } else {
        ++row.ok_count;
        train_sum += rep.train_rmse;
      }
    }
    if (row.ok_count > 0) {
      row.stats = summarize(row.reports);
      row.mean_train_rmse = train_sum / static_cast<double>(row.ok_count);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Emission: flat CSV (deterministic, no wall-clock fields) and JSON
// ---------------------------------------------------------------------------

namespace detail {

inline std::string csv_safe(std::string s) {
  for (char& c : s)
    if (c == ',' || c == '\n' || c == '\r') c = ';';
  return s;
}

inline std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  return out;
}

}  // namespace detail

/// One row per trial. Wall-clock durations are deliberately omitted so reruns
/// with the same master seed are byte-identical.
inline void write_trials_csv(const std::string& path,
                             const std::vector<TrialReport>& reports) {
  auto out = detail::open_out(path);
  out << "trial,method,params,m,seed,train_rmse,test_rmse,failed,error\n";
  for (std::size_t t = 0; t < reports.size(); ++t) {
    const auto& r = reports[t];
    out << t << "," << r.method << "," << detail::csv_safe(r.params) << "," << r.nodes
        << "," << r.seed << "," << format_double(r.train_rmse) << ","
        << format_double(r.test_rmse) << "," << (r.failed ? 1 : 0) << ","
        << detail::csv_safe(r.error) << "\n";
  }
}

inline void write_sweep_trials_csv(const std::string& path, const SweepResult& sweep) {
  auto out = detail::open_out(path);
  for (const auto& axis : sweep.axes) out << axis << ",";
  out << "trial,method,params,m,seed,train_rmse,test_rmse,failed,error\n";
  for (const auto& cell : sweep.cells) {
    for (std::size_t t = 0; t < cell.reports.size(); ++t) {
      const auto& r = cell.reports[t];
      for (const auto& [name, value] : cell.coords) out << format_double(value) << ",";
      out << t << "," << r.method << "," << detail::csv_safe(r.params) << ","
          << r.nodes << "," << r.seed << "," << format_double(r.train_rmse) << ","
          << format_double(r.test_rmse) << "," << (r.failed ? 1 : 0) << ","
          << detail::csv_safe(r.error) << "\n";
    }
  }
}

/// One row per grid cell with aggregate statistics.
inline void write_sweep_cells_csv(const std::string& path, const SweepResult& sweep) {
  auto out = detail::open_out(path);
  for (const auto& axis : sweep.axes) out << axis << ",";
  out << "label,mean_test_rmse,std_test_rmse,min_test_rmse,max_test_rmse,"
         "q1_test_rmse,median_test_rmse,q3_test_rmse,trials_ok,trials_failed,"
         "excluded\n";
  for (const auto& cell : sweep.cells) {
    for (const auto& [name, value] : cell.coords) out << format_double(value) << ",";
    out << detail::csv_safe(cell.label) << ",";
    if (cell.excluded)
      out << ",,,,,,,";
    else
      out << format_double(cell.stats.mean) << "," << format_double(cell.stats.stddev)
          << "," << format_double(cell.stats.min) << "," << format_double(cell.stats.max)
          << "," << format_double(cell.stats.q1) << ","
          << format_double(cell.stats.median) << "," << format_double(cell.stats.q3)
          << ",";
    out << cell.ok_count << "," << cell.failed_count << "," << (cell.excluded ? 1 : 0)
        << "\n";
  }
}

inline void write_benchmark_csv(const std::string& path,
                                const std::vector<BenchmarkRow>& rows) {
  auto out = detail::open_out(path);
  out << "method,params,m,trials_ok,trials_failed,mean_test_rmse,std_test_rmse,"
         "min_test_rmse,max_test_rmse,mean_train_rmse\n";
  for (const auto& row : rows) {
    out << row.method << "," << detail::csv_safe(row.params) << "," << row.nodes << ","
        << row.ok_count << "," << row.failed_count << ",";
    if (row.ok_count > 0)
      out << format_double(row.stats.mean) << "," << format_double(row.stats.stddev)
          << "," << format_double(row.stats.min) << "," << format_double(row.stats.max)
          << "," << format_double(row.mean_train_rmse);
    else
      out << ",,,,";
    out << "\n";
  }
}

inline nlohmann::json trial_to_json(const TrialReport& r) {
  nlohmann::json j;
  j["schema"] = kReportSchema;
  j["method"] = r.method;
  j["params"] = r.params;
  j["m"] = r.nodes;
  j["seed"] = r.seed;
  j["train_rmse"] = r.failed ? nlohmann::json() : nlohmann::json(r.train_rmse);
  j["test_rmse"] = r.failed ? nlohmann::json() : nlohmann::json(r.test_rmse);
  j["seconds"] = r.seconds;
  j["failed"] = r.failed;
  if (r.failed) j["error"] = r.error;
  return j;
}

inline nlohmann::json summary_to_json(const Summary& s) {
  return {{"count", s.count}, {"mean", s.mean},     {"stddev", s.stddev},
          {"min", s.min},     {"max", s.max},       {"q1", s.q1},
          {"median", s.median}, {"q3", s.q3}};
}

inline nlohmann::json sweep_to_json(const SweepResult& sweep) {
  nlohmann::json j;
  j["schema"] = kSweepSchema;
  j["axes"] = sweep.axes;
  auto cells = nlohmann::json::array();
  for (const auto& cell : sweep.cells) {
    nlohmann::json cj;
    for (const auto& [name, value] : cell.coords) cj["coords"][name] = value;
    cj["label"] = cell.label;
    cj["trials_ok"] = cell.ok_count;
    cj["trials_failed"] = cell.failed_count;
    cj["excluded"] = cell.excluded;
    if (!cell.excluded) cj["stats"] = summary_to_json(cell.stats);
    auto reports = nlohmann::json::array();
    for (const auto& r : cell.reports) reports.push_back(trial_to_json(r));
    cj["trials"] = std::move(reports);
    cells.push_back(std::move(cj));
  }
  j["cells"] = std::move(cells);
  return j;
}

inline nlohmann::json benchmark_to_json(const std::vector<BenchmarkRow>& rows) {
  nlohmann::json j;
  j["schema"] = kBenchmarkSchema;
  auto arr = nlohmann::json::array();
  for (const auto& row : rows) {
    nlohmann::json rj;
    rj["method"] = row.method;
    rj["params"] = row.params;
    rj["m"] = row.nodes;
    rj["trials_ok"] = row.ok_count;
    rj["trials_failed"] = row.failed_count;
    if (row.ok_count > 0) {
      rj["stats"] = summary_to_json(row.stats);
      rj["mean_train_rmse"] = row.mean_train_rmse;
    }
    rj["total_seconds"] = row.total_seconds;
    auto reports = nlohmann::json::array();
    for (const auto& r : row.reports) reports.push_back(trial_to_json(r));
    rj["trials"] = std::move(reports);
    arr.push_back(std::move(rj));
  }
  j["methods"] = std::move(arr);
  return j;
}

}  // namespace randfnn
