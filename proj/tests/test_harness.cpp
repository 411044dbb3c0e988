#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>

#include "randfnn/harness.hpp"
#include "test_util.hpp"

using namespace randfnn;
using Catch::Approx;

namespace {

bool same_outcome(const TrialReport& a, const TrialReport& b) {
  // wall time legitimately differs between runs
  return a.method == b.method && a.params == b.params && a.nodes == b.nodes &&
         a.seed == b.seed && a.failed == b.failed && a.error == b.error &&
         ((std::isnan(a.train_rmse) && std::isnan(b.train_rmse)) ||
          a.train_rmse == b.train_rmse) &&
         ((std::isnan(a.test_rmse) && std::isnan(b.test_rmse)) ||
          a.test_rmse == b.test_rmse);
}

}  // namespace

TEST_CASE("rmse: fixed values and the hand-computed oracle") {
  Eigen::VectorXd a(3), b(3);
  a << 1, 2, 3;
  b << 1, 2, 3;
  REQUIRE(rmse(a, b) == 0.0);
  b.array() += 0.25;
  REQUIRE(rmse(a, b) == Approx(0.25).margin(1e-15));

  Eigen::VectorXd p(2), q(2);
  p << 0, 0;
  q << 3, 4;
  REQUIRE(rmse(p, q) == Approx(3.5355339059327378).margin(1e-15));

  REQUIRE_THROWS_AS(rmse(a, p), std::invalid_argument);
  REQUIRE_THROWS_AS(rmse(Eigen::VectorXd(), Eigen::VectorXd()), std::invalid_argument);
}

TEST_CASE("summarize_values: degenerate and small lists") {
  const Summary one = summarize_values({1.25});
  REQUIRE(one.count == 1);
  REQUIRE(one.mean == 1.25);
  REQUIRE(one.stddev == 0.0);
  REQUIRE(one.median == 1.25);

  const Summary three = summarize_values({3.0, 1.0, 2.0});
  REQUIRE(three.mean == Approx(2.0).margin(1e-15));
  REQUIRE(three.stddev == Approx(1.0).margin(1e-15));
  REQUIRE(three.min == 1.0);
  REQUIRE(three.max == 3.0);
  REQUIRE(three.median == 2.0);

  REQUIRE_THROWS_AS(summarize_values({}), std::invalid_argument);
}

TEST_CASE("summarize_values: quartiles match a sort-based oracle") {
  Rng rng(5);
  for (int t = 0; t < 25; ++t) {
    const std::size_t n = 1 + rng.index(40);
    std::vector<double> values(n);
    for (auto& v : values) v = rng.uniform(-10.0, 10.0);
    const Summary s = summarize_values(values);

    std::vector<double> sorted = values;
    std::sort(sorted.begin(), sorted.end());
    auto quantile = [&](double p) {
      if (sorted.size() == 1) return sorted[0];
      const double pos = p * static_cast<double>(sorted.size() - 1);
      const std::size_t lo = static_cast<std::size_t>(pos);
      if (lo + 1 == sorted.size()) return sorted.back();
      return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[lo + 1] - sorted[lo]);
    };
    REQUIRE(s.q1 == Approx(quantile(0.25)).margin(1e-12));
    REQUIRE(s.median == Approx(quantile(0.5)).margin(1e-12));
    REQUIRE(s.q3 == Approx(quantile(0.75)).margin(1e-12));
    // self-consistency: mean/std recomputable from the raw values
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(n);
    REQUIRE(s.mean == Approx(mean).margin(1e-12));
  }
}

TEST_CASE("run_trials: determinism and child-seed independence") {
  const SyntheticData data = make_synthetic({TfId::tf2, 300, 0.2, 100, 15}, 42);
  const auto five = run_trials(data.train, data.test, DdmConfig{4}, 15, 5, 99);
  REQUIRE(five.size() == 5);
  for (const auto& rep : five) {
    REQUIRE_FALSE(rep.failed);
    REQUIRE(rep.test_rmse >= 0.0);
    REQUIRE(std::isfinite(rep.test_rmse));
    REQUIRE(rep.method == "ddm");
  }

  const auto again = run_trials(data.train, data.test, DdmConfig{4}, 15, 5, 99);
  for (std::size_t t = 0; t < 5; ++t) REQUIRE(same_outcome(five[t], again[t]));

  // trial seeds depend only on (master, t): a shorter batch is a prefix
  const auto three = run_trials(data.train, data.test, DdmConfig{4}, 15, 3, 99);
  for (std::size_t t = 0; t < 3; ++t) REQUIRE(same_outcome(five[t], three[t]));

  const auto other = run_trials(data.train, data.test, DdmConfig{4}, 15, 5, 100);
  REQUIRE_FALSE(same_outcome(five[0], other[0]));
}

TEST_CASE("run_trials: failures are recorded without aborting the batch") {
  const SyntheticData data = make_synthetic({TfId::tf2, 50, 0.2, 100, 10}, 7);
  // k >= N makes every generation attempt fail
  const auto reports = run_trials(data.train, data.test, DdmConfig{50}, 5, 4, 11);
  REQUIRE(reports.size() == 4);
  for (const auto& rep : reports) {
    REQUIRE(rep.failed);
    REQUIRE_FALSE(rep.error.empty());
    REQUIRE(std::isnan(rep.test_rmse));
  }
  REQUIRE_THROWS_AS(summarize(reports), std::invalid_argument);
}

TEST_CASE("summarize skips failed trials") {
  std::vector<TrialReport> reports(3);
  reports[0].test_rmse = 1.0;
  reports[1].failed = true;
  reports[2].test_rmse = 3.0;
  const Summary s = summarize(reports);
  REQUIRE(s.count == 2);
  REQUIRE(s.mean == 2.0);
}

TEST_CASE("grid_search_cv: single cell returns that cell") {
  const SyntheticData data = make_synthetic({TfId::tf1, 120, 0.2, 50, 10}, 3);
  const auto outcome =
      grid_search_cv(data.train, {GeneratorConfig{DdmConfig{3}}}, {12}, 3, 1, 5);
  REQUIRE(outcome.best_nodes == 12);
  REQUIRE(method_name(outcome.best_config) == "ddm");
  REQUIRE(outcome.sweep.cells.size() == 1);
  REQUIRE(outcome.sweep.cells[0].reports.size() == 3);  // folds x trials
  REQUIRE(outcome.best_mean == outcome.sweep.cells[0].stats.mean);
}

TEST_CASE("grid_search_cv: cell statistics are independent of the grid around them") {
  const SyntheticData data = make_synthetic({TfId::tf1, 100, 0.2, 50, 10}, 13);
  const std::vector<GeneratorConfig> small = {GeneratorConfig{FimConfig{}}};
  const std::vector<GeneratorConfig> large = {GeneratorConfig{FimConfig{}},
                                              GeneratorConfig{OimConfig{2.0}}};
  const auto a = grid_search_cv(data.train, small, {8, 16}, 3, 2, 77);
  const auto b = grid_search_cv(data.train, large, {8, 16, 24}, 3, 2, 77);
  // the (fim, m=8) and (fim, m=16) cells must be identical in both runs
  for (std::size_t cell = 0; cell < 2; ++cell) {
    const auto& ra = a.sweep.cells[cell].reports;
    const auto& rb = b.sweep.cells[cell].reports;
    REQUIRE(ra.size() == rb.size());
    for (std::size_t i = 0; i < ra.size(); ++i) REQUIRE(same_outcome(ra[i], rb[i]));
  }
}

TEST_CASE("grid_search_cv: cells that always fail are excluded but flagged") {
  const SyntheticData data = make_synthetic({TfId::tf1, 60, 0.2, 30, 10}, 21);
  // ddm with k >= fold-training size always fails; fim always succeeds
  const std::vector<GeneratorConfig> grid = {GeneratorConfig{DdmConfig{59}},
                                             GeneratorConfig{FimConfig{}}};
  const auto outcome = grid_search_cv(data.train, grid, {6}, 3, 1, 31);
  REQUIRE(method_name(outcome.best_config) == "fim");
  REQUIRE(outcome.sweep.cells[0].excluded);
  REQUIRE(outcome.sweep.cells[0].failed_count == 3);
  REQUIRE_FALSE(outcome.sweep.cells[1].excluded);
}

TEST_CASE("select_best: tie breaking prefers fewer nodes, then grid order") {
  auto cell = [](double mean, double m, bool excluded = false) {
    SweepCell c;
    c.coords = {{"config_index", 0.0}, {"m", m}};
    c.stats.mean = mean;
    c.ok_count = excluded ? 0 : 1;
    c.excluded = excluded;
    return c;
  };
  REQUIRE(detail::select_best({cell(0.5, 100), cell(0.4, 200), cell(0.6, 50)}) == 1);
  REQUIRE(detail::select_best({cell(0.5, 100), cell(0.5, 50)}) == 1);   // smaller m
  REQUIRE(detail::select_best({cell(0.5, 100), cell(0.5, 100)}) == 0);  // grid order
  REQUIRE(detail::select_best({cell(0.1, 10, true), cell(0.5, 100)}) == 1);
  REQUIRE_THROWS_AS(detail::select_best({cell(0.1, 10, true)}), std::runtime_error);
}

TEST_CASE("make_synthetic: protocol details") {
  const SyntheticData tf1_data = make_synthetic({TfId::tf1, 400, 0.2, 150, 10}, 5);
  REQUIRE(tf1_data.train.size() == 400);
  REQUIRE(tf1_data.train.dim() == 1);
  REQUIRE(tf1_data.test.size() == 150);
  // 1-D protocol scales the noisy draws, so the training targets span [0,1]
  REQUIRE(tf1_data.train.targets.minCoeff() == 0.0);
  REQUIRE(tf1_data.train.targets.maxCoeff() == 1.0);

  const SyntheticData tf2_data = make_synthetic({TfId::tf2, 500, 0.0, 100, 21}, 6);
  REQUIRE(tf2_data.train.dim() == 2);
  REQUIRE(tf2_data.test.size() == 21 * 21);
  // noiseless 2-D: training targets land exactly on [0,1]
  REQUIRE(tf2_data.train.targets.minCoeff() == 0.0);
  REQUIRE(tf2_data.train.targets.maxCoeff() == 1.0);
  // test targets are the raw lattice values pushed through the train record
  const Dataset lattice = generate_test_grid_2d(21);
  for (Index i = 0; i < lattice.size(); ++i)
    REQUIRE(tf2_data.test.targets(i) == tf2_data.record.apply(lattice.targets(i)));

  const SyntheticData again = make_synthetic({TfId::tf2, 500, 0.0, 100, 21}, 6);
  REQUIRE(again.train.targets == tf2_data.train.targets);
}

TEST_CASE("noise sweep: single cell reduces to run_trials") {
  const std::uint64_t master = 404;
  const auto sweep = noise_sensitivity_sweep(TfId::tf2, {0.3}, {6}, 10, 3, master,
                                             200, 100, 12);
  REQUIRE(sweep.cells.size() == 1);
  const auto& cell = sweep.cells[0];
  REQUIRE(cell.coords[0].second == 0.3);
  REQUIRE(cell.coords[1].second == 6.0);

  const SyntheticData data = make_synthetic({TfId::tf2, 200, 0.3, 100, 12},
                                            derive_seed(master, seed_tag::kData, 0));
  const auto direct = run_trials(data.train, data.test, DdmConfig{5}, 10, 3,
                                 derive_seed(master, seed_tag::kCell, 0, 0));
  REQUIRE(cell.reports.size() == direct.size());
  for (std::size_t i = 0; i < direct.size(); ++i)
    REQUIRE(same_outcome(cell.reports[i], direct[i]));

  // aggregate self-consistency: mean recomputable from the raw reports
  double mean = 0.0;
  for (const auto& rep : cell.reports) mean += rep.test_rmse;
  mean /= static_cast<double>(cell.reports.size());
  REQUIRE(cell.stats.mean == Approx(mean).margin(1e-12));
}

TEST_CASE("node sweep: axes and cell layout") {
  const auto sweep =
      node_sensitivity_sweep(TfId::tf2, {0.1, 0.5}, {8, 16, 24}, 5, 2, 7, 150, 100, 11);
  REQUIRE(sweep.axes == std::vector<std::string>{"c", "m"});
  REQUIRE(sweep.cells.size() == 6);
  REQUIRE(sweep.cells[4].coords[0].second == 0.5);
  REQUIRE(sweep.cells[4].coords[1].second == 16.0);
  for (const auto& cell : sweep.cells) REQUIRE(cell.reports.size() == 2);
  REQUIRE_THROWS_AS(node_sensitivity_sweep(TfId::tf2, {}, {8}, 5, 2, 7),
                    std::invalid_argument);
  REQUIRE_THROWS_AS(node_sensitivity_sweep(TfId::tf2, {0.1}, {8}, 1, 2, 7),
                    std::invalid_argument);
}

TEST_CASE("run_benchmark: one row per entry, deterministic CSV emission") {
  const SyntheticData data = make_synthetic({TfId::tf2, 250, 0.2, 100, 12}, 88);
  const std::vector<BenchmarkEntry> entries = {{FimConfig{}, 10},
                                               {OimConfig{3.0}, 10},
                                               {DdmConfig{4}, 12}};
  const auto rows = run_benchmark(data.train, data.test, entries, 3, 17);
  REQUIRE(rows.size() == 3);
  for (const auto& row : rows) {
    REQUIRE(row.ok_count == 3);
    REQUIRE(row.failed_count == 0);
    REQUIRE(row.reports.size() == 3);
  }
  REQUIRE(rows[2].method == "ddm");

  const auto dir = testutil::make_temp_dir("bench");
  write_benchmark_csv((dir / "a.csv").string(), rows);
  const auto rows2 = run_benchmark(data.train, data.test, entries, 3, 17);
  write_benchmark_csv((dir / "b.csv").string(), rows2);
  REQUIRE(testutil::read_file(dir / "a.csv") == testutil::read_file(dir / "b.csv"));

  std::vector<TrialReport> all, all2;
  for (const auto& row : rows) all.insert(all.end(), row.reports.begin(), row.reports.end());
  for (const auto& row : rows2) all2.insert(all2.end(), row.reports.begin(), row.reports.end());
  write_trials_csv((dir / "ta.csv").string(), all);
  write_trials_csv((dir / "tb.csv").string(), all2);
  REQUIRE(testutil::read_file(dir / "ta.csv") == testutil::read_file(dir / "tb.csv"));
  std::filesystem::remove_all(dir);
}

TEST_CASE("sweep CSV writers produce stable headers and one line per unit") {
  const auto sweep =
      noise_sensitivity_sweep(TfId::tf2, {0.1, 0.2}, {5, 7}, 8, 2, 55, 150, 100, 11);
  const auto dir = testutil::make_temp_dir("sweepcsv");
  write_sweep_cells_csv((dir / "cells.csv").string(), sweep);
  write_sweep_trials_csv((dir / "trials.csv").string(), sweep);
  const std::string cells = testutil::read_file(dir / "cells.csv");
  const std::string trials = testutil::read_file(dir / "trials.csv");
  REQUIRE(static_cast<std::size_t>(std::count(cells.begin(), cells.end(), '\n')) ==
          1 + sweep.cells.size());
  REQUIRE(static_cast<std::size_t>(std::count(trials.begin(), trials.end(), '\n')) ==
          1 + 4 * 2);
  REQUIRE(cells.rfind("c,k_prime,label,", 0) == 0);
  REQUIRE(trials.rfind("c,k_prime,trial,", 0) == 0);
  std::filesystem::remove_all(dir);
}
