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

#ifndef PKEX_EXPERIMENTS_H_
#define PKEX_EXPERIMENTS_H_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include <Eigen/Dense>

#include "pkex/attribution.h"

namespace pkex {

// Exact attributions against the regression estimator on kernel ridge models
// fitted to linear data.
struct RegressionBenchmarkConfig {
  std::vector<std::size_t> dims = {10, 20, 30, 50};
  std::vector<std::size_t> coalition_counts = {200, 1000, 10000};
  std::size_t instances = 100;
  std::size_t train_rows = 1000;
  double noise = 0.1;
  double ridge = 1.0;
  // Per-feature RBF bandwidth shared by every d; 0 selects the median
  // pairwise distance of the training rows.
  double bandwidth = 10.0;
  std::uint64_t seed = 0;
  int threads = 0;
};

struct BenchmarkRecord {
  std::size_t d = 0;
  std::size_t n_coalitions = 0;
  std::size_t instance_id = 0;
  double relative_deviation = 0.0;
  std::size_t skipped = 0;
  double wall_time_ms = 0.0;
};

// Per d: X, y from GenLinear, an isotropic RBF kernel and FitKrr with
// `ridge`. Instances are fresh
// draws of the same feature distribution. Records are ordered by d,
// coalition count, then instance.
std::vector<BenchmarkRecord> RunRegressionBenchmark(
    const RegressionBenchmarkConfig& config);

// Header d,n_coalitions,instance_id,relative_deviation,wall_time_ms.
void WriteBenchmarkCsv(std::ostream& out,
                       const std::vector<BenchmarkRecord>& records);

// Median relative deviation for one (d, count) cell; NaN if empty.
double MedianDeviation(const std::vector<BenchmarkRecord>& records,
                       std::size_t d, std::size_t n_coalitions);

struct SignPatternConfig {
  std::size_t n = 500;
  std::size_t d = 20;
  double dof = 3.0;
  std::size_t replications = 100;
  std::uint64_t seed = 0;
  int threads = 0;
};

struct SignPatternRecord {
  std::size_t replication = 0;
  double mmd = 0.0;
  double median_first = 0.0;   // median phi over features 1..d/2
  double median_second = 0.0;  // median phi over features d/2+1..d
  Eigen::VectorXd phi;
};

// One GenMmdPair sample per replication, explained with a pooled-median RBF
// kernel.
std::vector<SignPatternRecord> RunMmdSignPattern(const SignPatternConfig& config);

void WriteSignPatternCsv(std::ostream& out,
                         const std::vector<SignPatternRecord>& records);

struct OracleCheckConfig {
  std::size_t max_features = 10;
  std::size_t problems_per_size = 20;
  std::uint64_t seed = 0;
  EspBackend backend = EspBackend::kStable;
};

struct OracleReport {
  double model = 0.0;
  double mmd = 0.0;
  double hsic = 0.0;
  std::size_t problems = 0;

  double Max() const;
};

// Random small problems for every d in 1..max_features, each compared with
// the brute-force oracle. Reports max absolute deviations.
OracleReport RunOracleCheck(const OracleCheckConfig& config);

struct ComplexityConfig {
  std::vector<std::size_t> dims = {16, 32, 64, 128};
  std::size_t train_rows = 500;
  std::size_t repeats = 15;
  std::uint64_t seed = 0;
  EspBackend backend = EspBackend::kStable;
};

struct ComplexityResult {
  std::vector<std::size_t> dims;
  std::vector<double> median_ms;
  double slope = 0.0;  // least-squares slope of log time on log d
};

// Single-threaded ExplainInstance timings on random models.
ComplexityResult RunComplexity(const ComplexityConfig& config);

}  // namespace pkex

#endif  // PKEX_EXPERIMENTS_H_
