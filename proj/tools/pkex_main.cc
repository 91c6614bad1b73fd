/*
 * Copyright 2026 The pkex Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// pkex command-line front end.
//
// Exit codes: 0 success, 2 usage or input error, 3 numerical failure.
// Payloads go to stdout (or --out); diagnostics go to stderr.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pkex/datagen.h"
#include "pkex/error.h"
#include "pkex/experiments.h"
#include "pkex/hsic.h"
#include "pkex/kernels.h"
#include "pkex/mmd.h"
#include "pkex/model.h"
#include "pkex/model_io.h"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr int kExitInput = 2;
constexpr int kExitNumerical = 3;
constexpr double kOracleTolerance = 1e-7;

struct Globals {
  std::uint64_t seed = 0;
  int threads = 0;
};

void Emit(const std::string& payload, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << payload;
    std::cout.flush();
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw pkex::Error(pkex::ErrorCode::kInvalidInput, "cannot write " + out_path);
  out << payload;
  std::cerr << "wrote " << out_path << "\n";
}

void EmitJson(const json& j, const std::string& out_path) {
  Emit(j.dump(2) + "\n", out_path);
}

std::vector<double> ParseNumberList(const std::string& text) {
  std::vector<double> values;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || item.find_first_not_of(" \t", used) != std::string::npos) {
      throw pkex::Error(pkex::ErrorCode::kInvalidInput,
                        "not a number in list: \"" + item + "\"");
    }
    values.push_back(v);
  }
  if (values.empty()) {
    throw pkex::Error(pkex::ErrorCode::kInvalidInput, "empty number list");
  }
  return values;
}

std::vector<std::size_t> ParseSizeList(const std::string& text) {
  std::vector<std::size_t> sizes;
  for (const double v : ParseNumberList(text)) {
    if (v < 0 || v != static_cast<double>(static_cast<std::size_t>(v))) {
      throw pkex::Error(pkex::ErrorCode::kInvalidInput,
                        "expected non-negative integers, got \"" + text + "\"");
    }
    sizes.push_back(static_cast<std::size_t>(v));
  }
  return sizes;
}

// "median" uses the median heuristic on `reference`; otherwise one
// bandwidth for all features or one per feature.
pkex::ProductKernelSpec MakeKernel(const std::string& kind,
                                   const std::string& bandwidth,
                                   const pkex::FeatureMatrix& reference,
                                   std::uint64_t seed) {
  const pkex::BaseKernelKind k = pkex::KindFromName(kind);
  const auto d = static_cast<std::size_t>(reference.cols());
  if (bandwidth == "median") {
    return pkex::ProductKernelSpec::Uniform(
        k, pkex::MedianHeuristicBandwidths(reference, seed));
  }
  const std::vector<double> values = ParseNumberList(bandwidth);
  if (values.size() == 1) return pkex::ProductKernelSpec::Isotropic(k, values[0], d);
  if (values.size() != d) {
    throw pkex::Error(pkex::ErrorCode::kInvalidInput,
                      "got " + std::to_string(values.size()) + " bandwidths for " +
                          std::to_string(d) + " features");
  }
  return pkex::ProductKernelSpec::Uniform(
      k, Eigen::Map<const Eigen::VectorXd>(values.data(),
                                            static_cast<Eigen::Index>(d)));
}

pkex::EspBackend ParseBackend(const std::string& name) {
  return name == "newton" ? pkex::EspBackend::kNewton : pkex::EspBackend::kStable;
}

pkex::FeatureMatrix Pooled(const pkex::FeatureMatrix& a, const pkex::FeatureMatrix& b) {
  if (a.cols() != b.cols()) {
    throw pkex::Error(pkex::ErrorCode::kInvalidInput,
                      "samples have " + std::to_string(a.cols()) + " and " +
                          std::to_string(b.cols()) + " columns");
  }
  pkex::FeatureMatrix pooled(a.rows() + b.rows(), a.cols());
  pooled << a, b;
  return pooled;
}

// explain

struct ExplainArgs {
  std::string model;
  std::string data;
  std::string backend = "stable";
  std::string target;
  bool normalized = false;
  std::string out;
};

void RunExplain(const ExplainArgs& args, const Globals& g) {
  const pkex::FittedModel model = pkex::LoadModel(args.model);
  const pkex::Table table = pkex::LoadTable(
      args.data, args.target.empty() ? std::nullopt
                                     : std::optional<std::string_view>(args.target));
  if (static_cast<std::size_t>(table.x.cols()) != model.dim()) {
    throw pkex::Error(pkex::ErrorCode::kInvalidInput,
                      args.data + " has " + std::to_string(table.x.cols()) +
                          " feature columns but the model expects " +
                          std::to_string(model.dim()));
  }
  auto attributions =
      pkex::ExplainBatch(model, table.x, {ParseBackend(args.backend), g.threads});
  json rows = json::array();
  for (auto& a : attributions) {
    rows.push_back(pkex::AttributionToJson(args.normalized
                                               ? pkex::NormalizedAttribution(a)
                                               : a));
  }
  EmitJson({{"bias", model.bias}, {"attributions", std::move(rows)}}, args.out);
}

// mmd

struct MmdArgs {
  std::string x;
  std::string z;
  std::string kernel = "rbf";
  std::string bandwidth = "median";
  std::string backend = "stable";
  std::string out;
};

void RunMmd(const MmdArgs& args, const Globals& g) {
  pkex::TwoSample sample;
  sample.x = pkex::LoadTable(args.x).x;
  sample.z = pkex::LoadTable(args.z).x;
  sample.kernel =
      MakeKernel(args.kernel, args.bandwidth, Pooled(sample.x, sample.z), g.seed);
  const pkex::Attribution a =
      pkex::ExplainMmd(sample, {ParseBackend(args.backend), g.threads});
  EmitJson(pkex::AttributionToJson(a), args.out);
}

// hsic

struct HsicArgs {
  std::string x;
  std::string y;
  std::string z;
  std::string target_kernel = "rbf";
  std::string target_column;
  std::string kernel = "rbf";
  std::string bandwidth = "median";
  std::string side = "both";
  std::string backend = "stable";
  std::size_t max_features = 256;
  std::string out;
};

Eigen::MatrixXd LoadTarget(const HsicArgs& args) {
  if (!args.target_column.empty()) {
    const pkex::Table t = pkex::LoadTable(args.y, args.target_column);
    return *t.target;
  }
  // A single column may hold category labels; wider files must be numeric.
  std::ifstream probe(args.y);
  std::string header;
  std::getline(probe, header);
  if (!header.empty() && header.back() == '\r') header.pop_back();
  if (probe && header.find(',') == std::string::npos) {
    std::string name = header;
    if (name.size() >= 2 && name.front() == '"' && name.back() == '"') {
      name = name.substr(1, name.size() - 2);
    }
    const pkex::Table t = pkex::LoadTable(args.y, name);
    return *t.target;
  }
  return pkex::LoadTable(args.y).x;
}

void RunHsic(const HsicArgs& args, const Globals& g) {
  const pkex::FeatureMatrix x = pkex::LoadTable(args.x).x;
  pkex::HsicOptions options;
  options.explain = {ParseBackend(args.backend), g.threads};
  options.max_features = args.max_features;
  const pkex::ProductKernelSpec kernel_x = MakeKernel(args.kernel, args.bandwidth, x, g.seed);

  if (!args.z.empty()) {
    const pkex::FeatureMatrix z = pkex::LoadTable(args.z).x;
    const pkex::BivariateSide side = args.side == "x"   ? pkex::BivariateSide::kX
                                     : args.side == "z" ? pkex::BivariateSide::kZ
                                                        : pkex::BivariateSide::kBoth;
    const auto result = pkex::ExplainHsicBivariate(
        x, z, kernel_x, MakeKernel(args.kernel, "median", z, g.seed), side, options);
    json j = json::object();
    if (result.x) j["x"] = pkex::AttributionToJson(*result.x);
    if (result.z) j["z"] = pkex::AttributionToJson(*result.z);
    EmitJson(j, args.out);
    return;
  }

  const Eigen::MatrixXd y = LoadTarget(args);
  if (y.rows() != x.rows()) {
    throw pkex::Error(pkex::ErrorCode::kInvalidInput,
                      args.x + " has " + std::to_string(x.rows()) + " rows but " +
                          args.y + " has " + std::to_string(y.rows()));
  }
  pkex::HsicInput input;
  input.x = x;
  input.kernel_x = kernel_x;
  input.target_gram = pkex::TargetGram(
      y, args.target_kernel == "categorical" ? pkex::TargetKernel::kCategorical
                                             : pkex::TargetKernel::kRbf,
      g.seed);
  EmitJson(pkex::AttributionToJson(pkex::ExplainHsic(input, options)), args.out);
}

// fit

struct FitArgs {
  std::string data;
  std::string target;
  double ridge = 1e-2;
  std::string kernel = "rbf";
  std::string bandwidth = "median";
  std::string out;
};

void RunFit(const FitArgs& args, const Globals& g) {
  const pkex::Table table = pkex::LoadTable(args.data, args.target);
  if (table.target_categorical) {
    throw pkex::Error(pkex::ErrorCode::kInvalidInput,
                      "target column \"" + args.target + "\" is not numeric");
  }
  const pkex::FittedModel model =
      pkex::FitKrr(table.x, *table.target,
                   MakeKernel(args.kernel, args.bandwidth, table.x, g.seed), args.ridge);
  EmitJson(pkex::ModelToJson(model), args.out);
}

// benchmark

struct BenchmarkArgs {
  std::string experiment = "regression";
  std::string dims;
  std::string coalitions;
  std::size_t instances = 0;
  std::size_t train_rows = 0;
  std::optional<double> ridge;
  std::optional<double> bandwidth;
  std::optional<double> noise;
  std::size_t n = 500;
  std::size_t d = 20;
  double dof = pkex::kDefaultStudentDof;
  std::size_t replications = 100;
  std::size_t repeats = 15;
  std::string out;
};

void RunBenchmark(const BenchmarkArgs& args, const Globals& g) {
  std::ostringstream csv;
  if (args.experiment == "regression") {
    pkex::RegressionBenchmarkConfig config;
    if (!args.dims.empty()) config.dims = ParseSizeList(args.dims);
    if (!args.coalitions.empty()) config.coalition_counts = ParseSizeList(args.coalitions);
    if (args.instances) config.instances = args.instances;
    if (args.train_rows) config.train_rows = args.train_rows;
    if (args.ridge) config.ridge = *args.ridge;
    if (args.bandwidth) config.bandwidth = *args.bandwidth;
    if (args.noise) config.noise = *args.noise;
    config.seed = g.seed;
    config.threads = g.threads;
    const auto records = pkex::RunRegressionBenchmark(config);
    pkex::WriteBenchmarkCsv(csv, records);
    for (const std::size_t d : config.dims) {
      std::cerr << "d=" << d;
      for (const std::size_t m : config.coalition_counts) {
        std::cerr << "  m=" << m << ": median " << pkex::MedianDeviation(records, d, m);
      }
      std::cerr << "\n";
    }
  } else if (args.experiment == "mmd-sign") {
    pkex::SignPatternConfig config;
    config.n = args.n;
    config.d = args.d;
    config.dof = args.dof;
    config.replications = args.replications;
    config.seed = g.seed;
    config.threads = g.threads;
    const auto records = pkex::RunMmdSignPattern(config);
    pkex::WriteSignPatternCsv(csv, records);
    std::size_t first = 0;
    std::size_t second = 0;
    for (const auto& r : records) {
      first += r.median_first <= 0.0;
      second += r.median_second > 0.0;
    }
    std::cerr << "median phi <= 0 on the first half in " << first << "/"
              << records.size() << " replications; > 0 on the second half in "
              << second << "/" << records.size() << "\n";
  } else if (args.experiment == "complexity") {
    pkex::ComplexityConfig config;
    if (!args.dims.empty()) config.dims = ParseSizeList(args.dims);
    if (args.train_rows) config.train_rows = args.train_rows;
    config.repeats = args.repeats;
    config.seed = g.seed;
    const auto result = pkex::RunComplexity(config);
    csv << "d,median_ms\n";
    csv.precision(17);
    for (std::size_t i = 0; i < result.dims.size(); ++i) {
      csv << result.dims[i] << ',' << result.median_ms[i] << '\n';
    }
    std::cerr << "log-log slope " << result.slope << "\n";
  }
  Emit(csv.str(), args.out);
}

// oracle-check

struct OracleArgs {
  std::size_t max_features = 10;
  std::size_t problems = 20;
  std::string backend = "stable";
};

int RunOracle(const OracleArgs& args, const Globals& g) {
  pkex::OracleCheckConfig config;
  config.max_features = args.max_features;
  config.problems_per_size = args.problems;
  config.seed = g.seed;
  config.backend = ParseBackend(args.backend);
  const pkex::OracleReport report = pkex::RunOracleCheck(config);
  const bool ok = report.Max() <= kOracleTolerance;
  EmitJson({{"max_abs_deviation",
             {{"model", report.model}, {"mmd", report.mmd}, {"hsic", report.hsic}}},
            {"problems", report.problems},
            {"tolerance", kOracleTolerance},
            {"passed", ok}},
           "");
  if (!ok) {
    std::cerr << "oracle deviation " << report.Max() << " exceeds "
              << kOracleTolerance << "\n";
    return kExitNumerical;
  }
  return 0;
}

// datagen

struct DatagenArgs {
  std::string kind = "linear";
  std::size_t n = 1000;
  std::size_t d = 10;
  double noise = 0.1;
  double dof = pkex::kDefaultStudentDof;
  std::string prefix;
};

std::vector<std::string> ColumnNames(std::size_t d) {
  std::vector<std::string> names;
  for (std::size_t j = 1; j <= d; ++j) names.push_back("x" + std::to_string(j));
  return names;
}

void RunDatagen(const DatagenArgs& args, const Globals& g) {
  const auto names = ColumnNames(args.d);
  const std::string x_path = args.prefix + "_x.csv";
  if (args.kind == "mmd") {
    const pkex::SamplePair pair = pkex::GenMmdPair(args.n, args.d, args.dof, g.seed);
    pkex::SaveTable(x_path, names, pair.x);
    pkex::SaveTable(args.prefix + "_z.csv", names, pair.z);
    std::cerr << "wrote " << x_path << " and " << args.prefix << "_z.csv\n";
    return;
  }
  pkex::FeatureMatrix x;
  Eigen::VectorXd y;
  if (args.kind == "linear") {
    pkex::LinearData data = pkex::GenLinear(args.n, args.d, args.noise, g.seed);
    x = std::move(data.x);
    y = std::move(data.y);
  } else {
    pkex::NonlinearData data = pkex::GenNonlinear(
        pkex::NonlinearTaskFromName(args.kind), args.n, args.d, g.seed);
    x = std::move(data.x);
    y = std::move(data.y);
    std::cerr << "active features: 1.." << data.active.size() << "\n";
  }
  pkex::SaveTable(x_path, names, x);
  pkex::SaveTable(args.prefix + "_y.csv", {"y"}, y);
  std::cerr << "wrote " << x_path << " and " << args.prefix << "_y.csv\n";
}

int DefaultThreads() {
  const char* env = std::getenv("PKEX_THREADS");
  if (env == nullptr || *env == '\0') return 0;
  char* end = nullptr;
  const long v = std::strtol(env, &end, 10);
  if (*end != '\0' || v < 0) {
    throw pkex::Error(pkex::ErrorCode::kInvalidInput,
                      std::string("PKEX_THREADS must be a non-negative integer, got \"") +
                          env + "\"");
  }
  return static_cast<int>(v);
}

int Main(int argc, char** argv) {
  CLI::App app{"Exact Shapley values for product-kernel models, MMD and HSIC"};
  app.require_subcommand(1);
  Globals g;
  g.threads = DefaultThreads();
  app.add_option("--seed", g.seed, "Random seed")->capture_default_str();
  app.add_option("--threads", g.threads, "Worker threads, 0 = all cores (env PKEX_THREADS)")
      ->check(CLI::NonNegativeNumber);

  const auto backend_check = CLI::IsMember({"stable", "newton"});
  const auto kind_check = CLI::IsMember({"rbf", "laplacian_rbf", "cauchy", "categorical"});

  ExplainArgs ex;
  auto* explain = app.add_subcommand("explain", "Explain model predictions row by row");
  explain->add_option("--model", ex.model, "Model JSON")->required();
  explain->add_option("--data", ex.data, "CSV of points to explain")->required();
  explain->add_option("--backend", ex.backend)->check(backend_check)->capture_default_str();
  explain->add_option("--target", ex.target, "Column of --data to ignore");
  explain->add_flag("--normalized", ex.normalized, "Split the baseline over features");
  explain->add_option("--out", ex.out, "Output file (default stdout)");

  MmdArgs mm;
  auto* mmd = app.add_subcommand("mmd", "Attribute the MMD between two samples");
  mmd->add_option("--x", mm.x, "First sample CSV")->required();
  mmd->add_option("--z", mm.z, "Second sample CSV")->required();
  mmd->add_option("--kernel", mm.kernel)->check(kind_check)->capture_default_str();
  mmd->add_option("--bandwidth", mm.bandwidth, "median or comma-separated list")
      ->capture_default_str();
  mmd->add_option("--backend", mm.backend)->check(backend_check)->capture_default_str();
  mmd->add_option("--out", mm.out);

  HsicArgs hs;
  auto* hsic = app.add_subcommand("hsic", "Attribute HSIC to the features of X");
  hsic->add_option("--x", hs.x, "Feature CSV")->required();
  auto* y_opt = hsic->add_option("--y", hs.y, "Target CSV");
  auto* z_opt = hsic->add_option("--z", hs.z, "Second multivariate sample (bivariate mode)");
  y_opt->excludes(z_opt);
  hsic->add_option("--target-kernel", hs.target_kernel)
      ->check(CLI::IsMember({"rbf", "categorical"}))
      ->capture_default_str();
  hsic->add_option("--target-column", hs.target_column, "Column of --y to use");
  hsic->add_option("--kernel", hs.kernel, "Base kernel for X (and Z)")
      ->check(kind_check)
      ->capture_default_str();
  hsic->add_option("--bandwidth", hs.bandwidth, "X bandwidths: median or list")
      ->capture_default_str();
  hsic->add_option("--side", hs.side, "Bivariate side to explain")
      ->check(CLI::IsMember({"both", "x", "z"}))
      ->capture_default_str();
  hsic->add_option("--max-features", hs.max_features)->capture_default_str();
  hsic->add_option("--backend", hs.backend)->check(backend_check)->capture_default_str();
  hsic->add_option("--out", hs.out);

  FitArgs ft;
  auto* fit = app.add_subcommand("fit", "Fit a kernel ridge regression model");
  fit->add_option("--data", ft.data, "Training CSV")->required();
  fit->add_option("--target", ft.target, "Target column name")->required();
  fit->add_option("--ridge", ft.ridge)->check(CLI::NonNegativeNumber)->capture_default_str();
  fit->add_option("--kernel", ft.kernel)->check(kind_check)->capture_default_str();
  fit->add_option("--bandwidth", ft.bandwidth, "median or comma-separated list")
      ->capture_default_str();
  fit->add_option("--out", ft.out, "Model JSON (default stdout)");

  BenchmarkArgs bm;
  auto* bench = app.add_subcommand("benchmark", "Run a reproduction experiment");
  bench->add_option("--experiment", bm.experiment)
      ->check(CLI::IsMember({"regression", "mmd-sign", "complexity"}))
      ->capture_default_str();
  bench->add_option("--dims", bm.dims, "Comma-separated feature counts");
  bench->add_option("--coalitions", bm.coalitions, "Comma-separated coalition counts");
  bench->add_option("--instances", bm.instances, "Instances per d");
  bench->add_option("--train-rows", bm.train_rows, "Training rows");
  bench->add_option("--ridge", bm.ridge);
  bench->add_option("--bandwidth", bm.bandwidth, "RBF bandwidth, 0 = median distance");
  bench->add_option("--noise", bm.noise);
  bench->add_option("--n", bm.n, "mmd-sign: rows per sample")->capture_default_str();
  bench->add_option("--d", bm.d, "mmd-sign: features")->capture_default_str();
  bench->add_option("--dof", bm.dof, "mmd-sign: Student-t dof")->capture_default_str();
  bench->add_option("--replications", bm.replications)->capture_default_str();
  bench->add_option("--repeats", bm.repeats, "complexity: timings per d")
      ->capture_default_str();
  bench->add_option("--out", bm.out, "CSV output (default stdout)");

  OracleArgs oc;
  auto* oracle = app.add_subcommand("oracle-check", "Compare exact values with brute force");
  oracle->add_option("--max-features", oc.max_features)->capture_default_str();
  oracle->add_option("--problems", oc.problems, "Problems per size and kind")
      ->capture_default_str();
  oracle->add_option("--backend", oc.backend)->check(backend_check)->capture_default_str();

  DatagenArgs dg;
  auto* datagen = app.add_subcommand("datagen", "Write synthetic CSV data");
  datagen->add_option("--kind", dg.kind)
      ->check(CLI::IsMember({"linear", "poly5", "poly10", "sqexp", "mmd"}))
      ->capture_default_str();
  datagen->add_option("--n", dg.n)->capture_default_str();
  datagen->add_option("--d", dg.d)->capture_default_str();
  datagen->add_option("--noise", dg.noise)->capture_default_str();
  datagen->add_option("--dof", dg.dof)->capture_default_str();
  datagen->add_option("--prefix", dg.prefix, "Output path prefix")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (app.exit(e) == 0) return 0;
    std::cerr << app.help();
    return kExitInput;
  }

  if (*hsic && hs.y.empty() && hs.z.empty()) {
    std::cerr << "hsic: one of --y or --z is required\n" << hsic->help();
    return kExitInput;
  }

  if (*explain) RunExplain(ex, g);
  if (*mmd) RunMmd(mm, g);
  if (*hsic) RunHsic(hs, g);
  if (*fit) RunFit(ft, g);
  if (*bench) RunBenchmark(bm, g);
  if (*oracle) return RunOracle(oc, g);
  if (*datagen) RunDatagen(dg, g);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return Main(argc, argv);
  } catch (const pkex::Error& e) {
    std::cerr << "pkex: " << pkex::ErrorCodeName(e.code()) << ": " << e.what() << "\n";
    return e.IsNumerical() ? kExitNumerical : kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "pkex: " << e.what() << "\n";
    return kExitInput;
  }
}
