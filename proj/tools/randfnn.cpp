// randfnn: benchmark CLI for randomized single-hidden-layer network learning.
//
// Subcommands wire the library's dataset builders, hidden-node generation
// schemes, least-squares training and the experiment harness into
// reproducible, file-based runs. Every run writes a manifest.json with the
// effective options; every random step is driven by the mandatory --seed.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "randfnn/dataset.hpp"
#include "randfnn/generators.hpp"
#include "randfnn/harness.hpp"
#include "randfnn/network.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace randfnn;

namespace {

constexpr const char* kManifestSchema = "randfnn-manifest/1";
constexpr const char* kErrorSchema = "randfnn-error/1";
constexpr const char* kEvalSchema = "randfnn-eval/1";
constexpr const char* kBestSchema = "randfnn-best/1";

void emit_error_json(const std::string& type, const std::string& message) {
  json j;
  j["schema"] = kErrorSchema;
  j["type"] = type;
  j["message"] = message;
  std::cerr << j.dump() << std::endl;
}

void write_json_file(const fs::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  out << j.dump(2) << "\n";
}

void write_manifest(const fs::path& out_dir, const std::string& command, json options,
                    json extra = json::object()) {
  json j = std::move(extra);
  j["schema"] = kManifestSchema;
  j["command"] = command;
  j["options"] = std::move(options);
  write_json_file(out_dir / "manifest.json", j);
}

// ---------------------------------------------------------------------------
// Shared option blocks
// ---------------------------------------------------------------------------

struct DataOpts {
  std::string tf;                        // "tf1" | "tf2" | "" (CSV source)
  std::string csv_path;
  std::string target_col;                // name or 0-based position; "" = last
  std::string input_scaling = "minmax";  // "minmax" | "none"
  Index n_train = 5000;
  double noise = 0.2;
  Index n_test = 5000;
  Index grid = 100;
};

void add_data_options(CLI::App* cmd, DataOpts& opts, bool synthetic_only = false) {
  auto* tf = cmd->add_option("--tf", opts.tf, "Synthetic target function (tf1 or tf2)")
                 ->check(CLI::IsMember({"tf1", "tf2"}));
  cmd->add_option("--n-train", opts.n_train, "Synthetic training set size")
      ->capture_default_str();
  cmd->add_option("--noise", opts.noise, "Uniform noise half-width c")
      ->capture_default_str();
  cmd->add_option("--n-test", opts.n_test, "Synthetic test draw size (tf1)")
      ->capture_default_str();
  cmd->add_option("--grid", opts.grid, "Test lattice points per axis (tf2)")
      ->capture_default_str();
  if (synthetic_only) {
    tf->required();
    return;
  }
  auto* data = cmd->add_option("--data", opts.csv_path, "Numeric CSV dataset");
  cmd->add_option("--target-col", opts.target_col,
                  "Target column name or 0-based position (default: last)");
  cmd->add_option("--input-scaling", opts.input_scaling,
                  "CSV input scaling: minmax or none")
      ->check(CLI::IsMember({"minmax", "none"}))
      ->capture_default_str();
  tf->excludes(data);
  data->excludes(tf);
}

std::optional<TargetColumn> parse_target_col(const std::string& s) {
  if (s.empty()) return std::nullopt;
  if (s.find_first_not_of("0123456789") == std::string::npos)
    return TargetColumn{static_cast<Index>(std::stoll(s))};
  return TargetColumn{s};
}

Dataset load_csv_opts(const DataOpts& opts) {
  return load_csv(opts.csv_path, parse_target_col(opts.target_col),
                  opts.input_scaling == "minmax");
}

SyntheticSpec synthetic_spec(const DataOpts& opts) {
  return {tf_from_string(opts.tf), opts.n_train, opts.noise, opts.n_test, opts.grid};
}

json data_options_json(const DataOpts& opts) {
  json j;
  if (!opts.tf.empty()) {
    j["tf"] = opts.tf;
    j["n_train"] = opts.n_train;
    j["noise"] = opts.noise;
    if (opts.tf == "tf1")
      j["n_test"] = opts.n_test;
    else
      j["grid"] = opts.grid;
  } else {
    j["data"] = opts.csv_path;
    j["target_col"] = opts.target_col.empty() ? json("(last)") : json(opts.target_col);
    j["input_scaling"] = opts.input_scaling;
  }
  return j;
}

struct MethodOpts {
  std::string method;
  double u = 1.0;
  double r = 0.1;
  double s = 2.0;
  double alpha_min = 0.0;
  double alpha_max = 90.0;
  Index k = 1;
};

void add_method_options(CLI::App* cmd, MethodOpts& opts) {
  cmd->add_option("--method", opts.method, "Generation scheme")
      ->check(CLI::IsMember({"fim", "oim", "rsm", "rarsm", "ddm"}))
      ->required();
  cmd->add_option("--u", opts.u, "oim: interval half-width");
  cmd->add_option("--r", opts.r, "rsm: slope parameter r in (0,0.5)");
  cmd->add_option("--s", opts.s, "rsm: slope parameter s > 1");
  cmd->add_option("--alpha-min", opts.alpha_min, "rarsm: minimum slope angle (deg)");
  cmd->add_option("--alpha-max", opts.alpha_max, "rarsm: maximum slope angle (deg)");
  cmd->add_option("--k", opts.k, "ddm: nearest-neighbor count (k' = k+1)");
}

GeneratorConfig build_config(const MethodOpts& opts) {
  if (opts.method == "fim") return FimConfig{};
  if (opts.method == "oim") return OimConfig{opts.u};
  if (opts.method == "rsm") return RsmConfig{opts.r, opts.s};
  if (opts.method == "rarsm") return RarsmConfig{opts.alpha_min, opts.alpha_max};
  if (opts.method == "ddm") return DdmConfig{opts.k};
  throw std::invalid_argument("unknown method '" + opts.method + "'");
}

json config_to_json(const GeneratorConfig& config) {
  json j;
  j["method"] = method_name(config);
  if (const auto* oim = std::get_if<OimConfig>(&config)) {
    j["u"] = oim->u;
  } else if (const auto* rsm = std::get_if<RsmConfig>(&config)) {
    j["r"] = rsm->r;
    j["s"] = rsm->s;
  } else if (const auto* rarsm = std::get_if<RarsmConfig>(&config)) {
    j["alpha_min"] = rarsm->alpha_min_deg;
    j["alpha_max"] = rarsm->alpha_max_deg;
  } else if (const auto* ddm = std::get_if<DdmConfig>(&config)) {
    j["k"] = ddm->k;
    j["k_prime"] = ddm->k + 1;
  }
  return j;
}

std::vector<double> parse_double_list(const std::string& text, const char* what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      out.push_back(std::stod(tok));
    } catch (const std::exception&) {
      throw std::invalid_argument(std::string(what) + ": cannot parse '" + tok + "'");
    }
  }
  if (out.empty()) throw std::invalid_argument(std::string(what) + ": empty list");
  return out;
}

std::vector<Index> parse_index_list(const std::string& text, const char* what) {
  std::vector<Index> out;
  for (double v : parse_double_list(text, what)) out.push_back(static_cast<Index>(v));
  return out;
}

// ---------------------------------------------------------------------------
// gen-data
// ---------------------------------------------------------------------------

struct GenDataArgs {
  DataOpts data;
  std::uint64_t seed = 0;
  std::string out;
};

void run_gen_data(const GenDataArgs& args) {
  const fs::path out_dir(args.out);
  fs::create_directories(out_dir);
  const SyntheticSpec spec = synthetic_spec(args.data);
  const SyntheticData data = make_synthetic(spec, derive_seed(args.seed, seed_tag::kData));
  write_csv(data.train, (out_dir / "train.csv").string());
  write_csv(data.test, (out_dir / "test.csv").string());

  json options = data_options_json(args.data);
  options["seed"] = args.seed;
  options["out"] = args.out;
  json extra;
  extra["target_normalization"] = {{"y_min", data.record.y_min},
                                   {"y_max", data.record.y_max}};
  write_manifest(out_dir, "gen-data", options, extra);

  std::cout << "wrote " << (out_dir / "train.csv").string() << " (" << data.train.size()
            << " rows), " << (out_dir / "test.csv").string() << " (" << data.test.size()
            << " rows)\n";
}

// ---------------------------------------------------------------------------
// train
// ---------------------------------------------------------------------------

struct TrainArgs {
  DataOpts data;
  MethodOpts method;
  Index nodes = 100;
  std::uint64_t seed = 0;
  std::string out;
};

void run_train(const TrainArgs& args) {
  const fs::path out_dir(args.out);
  fs::create_directories(out_dir);
  const GeneratorConfig config = build_config(args.method);

  std::optional<SyntheticData> synthetic;
  std::optional<Dataset> csv_data;
  if (!args.data.tf.empty())
    synthetic = make_synthetic(synthetic_spec(args.data),
                               derive_seed(args.seed, seed_tag::kData));
  else
    csv_data = load_csv_opts(args.data);
  const Dataset& train = synthetic ? synthetic->train : *csv_data;

  TrialReport rep;
  rep.method = method_name(config);
  rep.params = describe_params(config);
  rep.nodes = args.nodes;
  rep.seed = args.seed;
  const auto start = std::chrono::steady_clock::now();
  const HiddenParams params =
      generate_hidden_params(train, args.nodes, config, args.seed);
  TrainedNetwork net = fit_output_weights(params, train);
  if (synthetic) net.normalization = synthetic->record;
  rep.train_rmse = rmse(predict(net, train), train.targets);
  if (synthetic) rep.test_rmse = rmse(predict(net, synthetic->test), synthetic->test.targets);
  rep.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  save_model(net, (out_dir / "model.json").string());
  write_json_file(out_dir / "report.json", trial_to_json(rep));

  json options = data_options_json(args.data);
  options["seed"] = args.seed;
  options["m"] = args.nodes;
  options["out"] = args.out;
  options["config"] = config_to_json(config);
  write_manifest(out_dir, "train", options);

  std::cout << "method=" << rep.method << " params=[" << rep.params
            << "] m=" << rep.nodes << " train_rmse=" << format_double(rep.train_rmse);
  if (synthetic) std::cout << " test_rmse=" << format_double(rep.test_rmse);
  std::cout << "\nmodel written to " << (out_dir / "model.json").string() << "\n";
}

// ---------------------------------------------------------------------------
// eval
// ---------------------------------------------------------------------------

struct EvalArgs {
  DataOpts data;
  std::string model_path;
  std::uint64_t seed = 0;
  bool seed_given = false;
  std::string out;
};

void run_eval(const EvalArgs& args) {
  const fs::path out_dir(args.out);
  fs::create_directories(out_dir);
  const TrainedNetwork net = load_model(args.model_path);

  std::optional<Dataset> data;
  if (!args.data.tf.empty()) {
    if (!args.seed_given)
      throw std::invalid_argument("eval: --seed is required with --tf");
    data = make_synthetic(synthetic_spec(args.data),
                          derive_seed(args.seed, seed_tag::kData))
               .test;
  } else {
    data = load_csv_opts(args.data);
  }
  if (net.hidden.dim() != data->dim())
    throw std::invalid_argument(
        "eval: model expects " + std::to_string(net.hidden.dim()) +
        " inputs but dataset has " + std::to_string(data->dim()));

  const double err = rmse(predict(net, *data), data->targets);
  json j;
  j["schema"] = kEvalSchema;
  j["model"] = args.model_path;
  j["rows"] = data->size();
  j["rmse"] = err;
  write_json_file(out_dir / "eval.json", j);

  json options = data_options_json(args.data);
  options["model"] = args.model_path;
  if (args.seed_given) options["seed"] = args.seed;
  options["out"] = args.out;
  write_manifest(out_dir, "eval", options);

  std::cout << "rmse " << format_double(err) << "\n";
}

// ---------------------------------------------------------------------------
// grid-search
// ---------------------------------------------------------------------------

struct GridSearchArgs {
  DataOpts data;
  std::string method;
  std::string m_grid;
  std::string u_grid;
  std::string r_grid;
  std::string s_grid;
  std::string alpha_min_grid;
  std::string alpha_max_grid;
  std::string k_prime_grid;
  Index folds = 10;
  Index trials = 1;
  std::uint64_t seed = 0;
  std::string out;
};

std::vector<GeneratorConfig> build_config_grid(const GridSearchArgs& args) {
  std::vector<GeneratorConfig> grid;
  if (args.method == "fim") {
    grid.push_back(FimConfig{});
  } else if (args.method == "oim") {
    std::vector<double> us = {0.1, 0.5, 1,  2,  3,  4,   5,   10,  15,
                              20,  30,  40, 50, 100, 200, 300, 400, 500};
    if (!args.u_grid.empty()) us = parse_double_list(args.u_grid, "--u-grid");
    for (double u : us) grid.push_back(OimConfig{u});
  } else if (args.method == "rsm") {
    // r = 0.5 would zero the slope interval and violates r in (0, 0.5)
    std::vector<double> rs = {0.0001, 0.001, 0.01, 0.015, 0.02, 0.3, 0.4, 0.49};
    std::vector<double> ss = {2, 4, 6, 8, 10, 20, 30};
    if (!args.r_grid.empty()) rs = parse_double_list(args.r_grid, "--r-grid");
    if (!args.s_grid.empty()) ss = parse_double_list(args.s_grid, "--s-grid");
    for (double r : rs)
      for (double s : ss) grid.push_back(RsmConfig{r, s});
  } else if (args.method == "rarsm") {
    std::vector<double> mins, maxs;
    for (double a = 0; a <= 85; a += 5) mins.push_back(a);
    for (double a = 5; a <= 90; a += 5) maxs.push_back(a);
    if (!args.alpha_min_grid.empty())
      mins = parse_double_list(args.alpha_min_grid, "--alpha-min-grid");
    if (!args.alpha_max_grid.empty())
      maxs = parse_double_list(args.alpha_max_grid, "--alpha-max-grid");
    for (double lo : mins)
      for (double hi : maxs)
        if (lo < hi) grid.push_back(RarsmConfig{lo, hi});
  } else if (args.method == "ddm") {
    std::vector<Index> kps = {5, 10, 15, 20, 25, 30, 35, 40, 45, 50};
    if (!args.k_prime_grid.empty())
      kps = parse_index_list(args.k_prime_grid, "--k-prime-grid");
    for (Index kp : kps) {
      if (kp < 2) throw std::invalid_argument("--k-prime-grid: k' must be at least 2");
      grid.push_back(DdmConfig{kp - 1});
    }
  } else {
    throw std::invalid_argument("unknown method '" + args.method + "'");
  }
  return grid;
}

void run_grid_search(const GridSearchArgs& args) {
  const fs::path out_dir(args.out);
  fs::create_directories(out_dir);

  std::optional<Dataset> train;
  if (!args.data.tf.empty())
    train = make_synthetic(synthetic_spec(args.data),
                           derive_seed(args.seed, seed_tag::kData))
                .train;
  else
    train = load_csv_opts(args.data);

  std::vector<Index> m_grid = {50,  100, 150, 200, 250, 300, 350, 400, 450, 500,
                               550, 600, 650, 700, 750, 800, 850, 900, 950, 1000};
  if (!args.m_grid.empty()) m_grid = parse_index_list(args.m_grid, "--m-grid");

  const auto configs = build_config_grid(args);
  const GridSearchOutcome outcome =
      grid_search_cv(*train, configs, m_grid, args.folds, args.trials, args.seed);

  json best;
  best["schema"] = kBestSchema;
  best["config"] = config_to_json(outcome.best_config);
  best["m"] = outcome.best_nodes;
  best["mean_validation_rmse"] = outcome.best_mean;
  write_json_file(out_dir / "best.json", best);
  write_sweep_cells_csv((out_dir / "cells.csv").string(), outcome.sweep);
  write_sweep_trials_csv((out_dir / "trials.csv").string(), outcome.sweep);

  json options = data_options_json(args.data);
  options["method"] = args.method;
  options["folds"] = args.folds;
  options["trials"] = args.trials;
  options["seed"] = args.seed;
  options["m_grid"] = m_grid;
  options["config_cells"] = configs.size();
  options["out"] = args.out;
  write_manifest(out_dir, "grid-search", options);

  std::cout << "best: method=" << method_name(outcome.best_config) << " params=["
            << describe_params(outcome.best_config) << "] m=" << outcome.best_nodes
            << " mean_validation_rmse=" << format_double(outcome.best_mean) << "\n";
}

// ---------------------------------------------------------------------------
// benchmark
// ---------------------------------------------------------------------------

struct BenchmarkArgs {
  DataOpts data;
  std::vector<std::string> runs;
  double train_fraction = 0.75;
  Index trials = 10;
  std::uint64_t seed = 0;
  std::string out;
};

BenchmarkEntry parse_run_spec(const std::string& spec) {
  std::vector<std::string> tokens;
  std::stringstream ss(spec);
  std::string tok;
  while (std::getline(ss, tok, ':')) tokens.push_back(tok);
  if (tokens.empty()) throw std::invalid_argument("--run: empty spec");

  MethodOpts opts;
  opts.method = tokens[0];
  Index nodes = 0;
  for (std::size_t i = 1; i < tokens.size(); ++i) {
    const auto eq = tokens[i].find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("--run: expected key=value, got '" + tokens[i] + "'");
    const std::string key = tokens[i].substr(0, eq);
    const double value = std::stod(tokens[i].substr(eq + 1));
    if (key == "m") nodes = static_cast<Index>(value);
    else if (key == "u") opts.u = value;
    else if (key == "r") opts.r = value;
    else if (key == "s") opts.s = value;
    else if (key == "k") opts.k = static_cast<Index>(value);
    else if (key == "amin" || key == "alpha_min") opts.alpha_min = value;
    else if (key == "amax" || key == "alpha_max") opts.alpha_max = value;
    else throw std::invalid_argument("--run: unknown key '" + key + "'");
  }
  if (nodes < 1)
    throw std::invalid_argument("--run: spec '" + spec + "' needs m=<nodes>");
  return {build_config(opts), nodes};
}

void run_benchmark_cmd(const BenchmarkArgs& args) {
  const fs::path out_dir(args.out);
  fs::create_directories(out_dir);

  std::vector<BenchmarkEntry> entries;
  for (const auto& spec : args.runs) entries.push_back(parse_run_spec(spec));

  std::optional<Dataset> train, test;
  if (!args.data.tf.empty()) {
    SyntheticData data = make_synthetic(synthetic_spec(args.data),
                                        derive_seed(args.seed, seed_tag::kData));
    train = std::move(data.train);
    test = std::move(data.test);
  } else {
    // real-data protocol: scale targets over the whole file, then split
    const Dataset full = load_csv_opts(args.data);
    auto [scaled, record] = normalize_targets(full);
    auto parts = split_train_test(scaled, args.train_fraction,
                                  derive_seed(args.seed, seed_tag::kData));
    train = std::move(parts.first);
    test = std::move(parts.second);
  }

  const auto rows = run_benchmark(*train, *test, entries, args.trials, args.seed);

  write_benchmark_csv((out_dir / "benchmark.csv").string(), rows);
  write_json_file(out_dir / "benchmark.json", benchmark_to_json(rows));
  std::vector<TrialReport> all_reports;
  for (const auto& row : rows)
    all_reports.insert(all_reports.end(), row.reports.begin(), row.reports.end());
  write_trials_csv((out_dir / "trials.csv").string(), all_reports);

  json options = data_options_json(args.data);
  options["runs"] = args.runs;
  options["trials"] = args.trials;
  options["seed"] = args.seed;
  if (args.data.tf.empty()) options["train_fraction"] = args.train_fraction;
  options["out"] = args.out;
  write_manifest(out_dir, "benchmark", options);

  std::printf("%-6s %-28s %6s %12s %12s %8s\n", "method", "params", "m", "mean_rmse",
              "std_rmse", "failed");
  for (const auto& row : rows) {
    if (row.ok_count > 0)
      std::printf("%-6s %-28s %6lld %12.5f %12.5f %8lld\n", row.method.c_str(),
                  row.params.c_str(), static_cast<long long>(row.nodes), row.stats.mean,
                  row.stats.stddev, static_cast<long long>(row.failed_count));
    else
      std::printf("%-6s %-28s %6lld %12s %12s %8lld\n", row.method.c_str(),
                  row.params.c_str(), static_cast<long long>(row.nodes), "-", "-",
                  static_cast<long long>(row.failed_count));
  }
}

// ---------------------------------------------------------------------------
// sweep
// ---------------------------------------------------------------------------

struct SweepArgs {
  std::string axis;  // "noise" | "nodes"
  DataOpts data;
  std::string c_grid;
  std::string k_prime_grid;
  std::string m_grid;
  Index nodes_fixed = 300;
  Index k_prime_fixed = 20;
  Index trials = 10;
  std::uint64_t seed = 0;
  std::string out;
};

void run_sweep(const SweepArgs& args) {
  const fs::path out_dir(args.out);
  fs::create_directories(out_dir);
  const TfId tf = tf_from_string(args.data.tf);

  std::vector<double> c_values = {0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
  if (!args.c_grid.empty()) c_values = parse_double_list(args.c_grid, "--c-grid");

  SweepResult sweep;
  json options = data_options_json(args.data);
  if (args.axis == "noise") {
    std::vector<Index> k_primes = {3, 5, 7, 10, 20, 30, 40, 50, 60, 70, 80, 90, 100};
    if (!args.k_prime_grid.empty())
      k_primes = parse_index_list(args.k_prime_grid, "--k-prime-grid");
    sweep = noise_sensitivity_sweep(tf, c_values, k_primes, args.nodes_fixed,
                                    args.trials, args.seed, args.data.n_train,
                                    args.data.n_test, args.data.grid);
    options["m"] = args.nodes_fixed;
  } else {
    std::vector<Index> m_values = {50, 100, 150, 200, 250, 300, 350, 400, 450, 500};
    if (!args.m_grid.empty()) m_values = parse_index_list(args.m_grid, "--m-grid");
    sweep = node_sensitivity_sweep(tf, c_values, m_values, args.k_prime_fixed,
                                   args.trials, args.seed, args.data.n_train,
                                   args.data.n_test, args.data.grid);
    options["k_prime"] = args.k_prime_fixed;
  }

  write_sweep_cells_csv((out_dir / "cells.csv").string(), sweep);
  write_sweep_trials_csv((out_dir / "trials.csv").string(), sweep);
  write_json_file(out_dir / "sweep.json", sweep_to_json(sweep));

  options["axis"] = args.axis;
  options["trials"] = args.trials;
  options["seed"] = args.seed;
  options["out"] = args.out;
  write_manifest(out_dir, "sweep", options);

  std::cout << "sweep cells: " << sweep.cells.size() << ", results in "
            << (out_dir / "cells.csv").string() << "\n";
}

// ---------------------------------------------------------------------------
// decompose
// ---------------------------------------------------------------------------

struct DecomposeArgs {
  std::string model_path;
  Index grid_size = 500;
  double x_min = 0.0;
  double x_max = 1.0;
  std::string out;
};

void run_decompose(const DecomposeArgs& args) {
  const fs::path out_dir(args.out);
  fs::create_directories(out_dir);
  const TrainedNetwork net = load_model(args.model_path);
  if (net.hidden.dim() != 1)
    throw std::invalid_argument(
        "decompose: per-node curves are defined for single-input models only "
        "(model has n=" + std::to_string(net.hidden.dim()) + ")");
  if (args.grid_size < 2)
    throw std::invalid_argument("decompose: grid size must be at least 2");
  if (!(args.x_min < args.x_max))
    throw std::invalid_argument("decompose: need x_min < x_max");

  const Index g = args.grid_size;
  Eigen::MatrixXd x(g, 1);
  for (Index i = 0; i < g; ++i)
    x(i, 0) = args.x_min + (args.x_max - args.x_min) * static_cast<double>(i) /
                               static_cast<double>(g - 1);
  const Dataset grid(x, Eigen::VectorXd::Zero(g));
  const Decomposition dec = decompose(net, grid);

  std::ofstream out(out_dir / "decompose.csv");
  if (!out) throw std::runtime_error("cannot open decompose.csv for writing");
  out << "x,fitted";
  for (Index i = 0; i < net.hidden.nodes(); ++i) out << ",h_" << (i + 1);
  for (Index i = 0; i < net.hidden.nodes(); ++i) out << ",wh_" << (i + 1);
  out << "\n";
  for (Index row = 0; row < g; ++row) {
    out << format_double(grid.inputs(row, 0)) << "," << format_double(dec.fitted(row));
    for (Index i = 0; i < net.hidden.nodes(); ++i)
      out << "," << format_double(dec.raw(row, i));
    for (Index i = 0; i < net.hidden.nodes(); ++i)
      out << "," << format_double(dec.weighted(row, i));
    out << "\n";
  }
  out.close();

  json options;
  options["model"] = args.model_path;
  options["grid_size"] = args.grid_size;
  options["x_min"] = args.x_min;
  options["x_max"] = args.x_max;
  options["out"] = args.out;
  write_manifest(out_dir, "decompose", options);

  std::cout << "wrote " << (out_dir / "decompose.csv").string() << " (" << g
            << " rows, " << net.hidden.nodes() << " nodes)\n";
}

std::string error_type(const std::exception& e) {
  if (dynamic_cast<const CsvError*>(&e)) return "csv_error";
  if (dynamic_cast<const DegenerateRangeError*>(&e)) return "degenerate_range";
  if (dynamic_cast<const SolverError*>(&e)) return "solver_error";
  if (dynamic_cast<const std::invalid_argument*>(&e)) return "argument_error";
  return "runtime_error";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"randomized single-hidden-layer network learning: five hidden-node "
               "generation schemes with least-squares output weights"};
  app.require_subcommand(1);
  app.set_config("--config", "", "Read options from a config file");

  GenDataArgs gen_args;
  auto* gen = app.add_subcommand("gen-data", "Write synthetic train/test CSVs");
  add_data_options(gen, gen_args.data, /*synthetic_only=*/true);
  gen->add_option("--seed", gen_args.seed, "Master seed")->envname("RANDFNN_SEED")->required();
  gen->add_option("--out", gen_args.out, "Output directory")->required();

  TrainArgs train_args;
  auto* train = app.add_subcommand("train", "Fit one network and save the model");
  add_data_options(train, train_args.data);
  add_method_options(train, train_args.method);
  train->add_option("--m", train_args.nodes, "Hidden node count")->required();
  train->add_option("--seed", train_args.seed, "Master seed")->envname("RANDFNN_SEED")->required();
  train->add_option("--out", train_args.out, "Output directory")->required();

  EvalArgs eval_args;
  auto* eval = app.add_subcommand("eval", "Evaluate a saved model on a dataset");
  add_data_options(eval, eval_args.data);
  eval->add_option("--model", eval_args.model_path, "Model JSON path")->required();
  auto* eval_seed = eval->add_option("--seed", eval_args.seed, "Master seed (required with --tf)");
  eval->add_option("--out", eval_args.out, "Output directory")->required();

  GridSearchArgs gs_args;
  auto* gs = app.add_subcommand("grid-search",
                                "Cross-validated hyperparameter search for one scheme");
  add_data_options(gs, gs_args.data);
  gs->add_option("--method", gs_args.method, "Generation scheme")
      ->check(CLI::IsMember({"fim", "oim", "rsm", "rarsm", "ddm"}))
      ->required();
  gs->add_option("--m-grid", gs_args.m_grid, "Node counts (comma list; default 50..1000)");
  gs->add_option("--u-grid", gs_args.u_grid, "oim u values");
  gs->add_option("--r-grid", gs_args.r_grid, "rsm r values");
  gs->add_option("--s-grid", gs_args.s_grid, "rsm s values");
  gs->add_option("--alpha-min-grid", gs_args.alpha_min_grid, "rarsm alpha_min values (deg)");
  gs->add_option("--alpha-max-grid", gs_args.alpha_max_grid, "rarsm alpha_max values (deg)");
  gs->add_option("--k-prime-grid", gs_args.k_prime_grid, "ddm k' values");
  gs->add_option("--folds", gs_args.folds, "Cross-validation folds")->capture_default_str();
  gs->add_option("--trials", gs_args.trials, "Trials per fold")->capture_default_str();
  gs->add_option("--seed", gs_args.seed, "Master seed")->envname("RANDFNN_SEED")->required();
  gs->add_option("--out", gs_args.out, "Output directory")->required();

  BenchmarkArgs bench_args;
  auto* bench = app.add_subcommand("benchmark", "Compare methods on one dataset");
  add_data_options(bench, bench_args.data);
  bench->add_option("--run", bench_args.runs,
                    "Method spec, repeatable, e.g. ddm:m=300:k=34 or rsm:m=450:r=0.4:s=30")
      ->required()
      ->take_all();
  bench->add_option("--train-fraction", bench_args.train_fraction,
                    "CSV split fraction")->capture_default_str();
  bench->add_option("--trials", bench_args.trials, "Trials per method")
      ->capture_default_str();
  bench->add_option("--seed", bench_args.seed, "Master seed")->envname("RANDFNN_SEED")->required();
  bench->add_option("--out", bench_args.out, "Output directory")->required();

  SweepArgs sweep_args;
  auto* sweep = app.add_subcommand("sweep", "Noise/node sensitivity sweeps (ddm)");
  sweep->add_option("--axis", sweep_args.axis, "Sweep axis: noise or nodes")
      ->check(CLI::IsMember({"noise", "nodes"}))
      ->required();
  add_data_options(sweep, sweep_args.data, /*synthetic_only=*/true);
  sweep->add_option("--c-grid", sweep_args.c_grid, "Noise bounds (default 0..1 step 0.1)");
  sweep->add_option("--k-prime-grid", sweep_args.k_prime_grid,
                    "k' grid for --axis noise (default 3,5,7,10,20..100)");
  sweep->add_option("--m-grid", sweep_args.m_grid,
                    "m grid for --axis nodes (default 50..500)");
  sweep->add_option("--m", sweep_args.nodes_fixed, "Fixed m for --axis noise")
      ->capture_default_str();
  sweep->add_option("--k-prime", sweep_args.k_prime_fixed, "Fixed k' for --axis nodes")
      ->capture_default_str();
  sweep->add_option("--trials", sweep_args.trials, "Trials per cell")->capture_default_str();
  sweep->add_option("--seed", sweep_args.seed, "Master seed")->envname("RANDFNN_SEED")->required();
  sweep->add_option("--out", sweep_args.out, "Output directory")->required();

  DecomposeArgs dec_args;
  auto* dec = app.add_subcommand("decompose",
                                 "Write per-node sigmoid curves of a 1-D model");
  dec->add_option("--model", dec_args.model_path, "Model JSON path")->required();
  dec->add_option("--grid-size", dec_args.grid_size, "Evaluation grid size")
      ->capture_default_str();
  dec->add_option("--x-min", dec_args.x_min, "Grid start")->capture_default_str();
  dec->add_option("--x-max", dec_args.x_max, "Grid end")->capture_default_str();
  dec->add_option("--out", dec_args.out, "Output directory")->required();

  gen->callback([&] { run_gen_data(gen_args); });
  train->callback([&] { run_train(train_args); });
  eval->callback([&] {
    eval_args.seed_given = eval_seed->count() > 0;
    run_eval(eval_args);
  });
  gs->callback([&] { run_grid_search(gs_args); });
  bench->callback([&] { run_benchmark_cmd(bench_args); });
  sweep->callback([&] { run_sweep(sweep_args); });
  dec->callback([&] { run_decompose(dec_args); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    if (code != 0) emit_error_json("argument_error", e.get_name() + std::string(": ") + e.what());
    return code;
  } catch (const std::exception& e) {
    emit_error_json(error_type(e), e.what());
    return 1;
  }
  return 0;
}
