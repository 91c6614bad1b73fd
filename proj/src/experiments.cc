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

#include "pkex/experiments.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <ostream>

#include "pkex/datagen.h"
#include "pkex/error.h"
#include "pkex/estimators.h"
#include "pkex/hsic.h"
#include "pkex/mmd.h"
#include "pkex/model.h"
#include "pkex/model_io.h"
#include "pkex/oracle.h"
#include "pkex/parallel.h"
#include "pkex/rng.h"

namespace pkex {
namespace {

using Clock = std::chrono::steady_clock;

double ElapsedMs(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

double Median(std::vector<double> v) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  const double upper = v[mid];
  if (v.size() % 2 == 1) return upper;
  return 0.5 * (*std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid)) +
                upper);
}

FeatureMatrix NormalMatrix(std::size_t rows, std::size_t cols, CounterRng& rng) {
  FeatureMatrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) = rng.Normal();
  }
  return m;
}

ProductKernelSpec MixedKernel(std::size_t d, CounterRng& rng) {
  constexpr BaseKernelKind kKinds[] = {BaseKernelKind::kRbf,
                                       BaseKernelKind::kLaplacianRbf,
                                       BaseKernelKind::kCauchy};
  const double scale = std::sqrt(static_cast<double>(d));
  ProductKernelSpec spec;
  for (std::size_t j = 0; j < d; ++j) {
    spec.per_feature.push_back({kKinds[rng.UniformInt(3)],
                                scale * (0.5 + 1.5 * rng.Uniform())});
  }
  return spec;
}

double MaxAbsDiff(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

// v(S) = alpha^T prod_{j in S} F[:, j] with F the per-feature kernel
// vectors of one instance.
ValueFunctionHandle FactorGame(const Eigen::MatrixXd& factors,
                               const Eigen::VectorXd& alpha) {
  const auto d = static_cast<std::size_t>(factors.cols());
  return {[&factors, &alpha, d](CoalitionMask mask) {
            Eigen::ArrayXd prod = Eigen::ArrayXd::Ones(factors.rows());
            for (std::size_t j = 0; j < d; ++j) {
              if (mask >> j & 1U) prod *= factors.col(static_cast<Eigen::Index>(j)).array();
            }
            return alpha.dot(prod.matrix());
          },
          d};
}

}  // namespace

std::vector<BenchmarkRecord> RunRegressionBenchmark(
    const RegressionBenchmarkConfig& config) {
  if (config.instances == 0 || config.train_rows < 2) {
    throw Error(ErrorCode::kInvalidInput,
                "benchmark needs instances >= 1 and train_rows >= 2");
  }
  std::vector<BenchmarkRecord> records;
  for (const std::size_t d : config.dims) {
    if (d < 2 || d > kMaxRegressionPlayers) {
      throw Error(ErrorCode::kInvalidInput,
                  "benchmark dimension must lie in [2, " +
                      std::to_string(kMaxRegressionPlayers) + "]");
    }
    const LinearData data =
        GenLinear(config.train_rows, d, config.noise, DeriveSeed(config.seed, d));
    const double bandwidth = config.bandwidth > 0.0
                                 ? config.bandwidth
                                 : MedianPairwiseDistance(data.x, config.seed);
    const FittedModel model =
        FitKrr(data.x, data.y,
               ProductKernelSpec::Isotropic(BaseKernelKind::kRbf, bandwidth, d),
               config.ridge);
    const FeatureMatrix points =
        GenLinear(config.instances, d, 0.0, DeriveSeed(config.seed, 1000 + d)).x;

    const std::size_t counts = config.coalition_counts.size();
    std::vector<BenchmarkRecord> cell(config.instances * counts);
    ParallelFor(config.instances, config.threads, [&](std::size_t i) {
      const Eigen::VectorXd x = points.row(static_cast<Eigen::Index>(i)).transpose();
      const Attribution exact = ExplainInstance(model, x, EspBackend::kStable);
      Eigen::MatrixXd factors(model.train_x.rows(), static_cast<Eigen::Index>(d));
      for (std::size_t j = 0; j < d; ++j) {
        factors.col(static_cast<Eigen::Index>(j)) =
            FeatureKernelVector(model.kernel, j, model.train_x, x);
      }
      const ValueFunctionHandle game = FactorGame(factors, model.alpha);
      for (std::size_t c = 0; c < counts; ++c) {
        const std::size_t m = config.coalition_counts[c];
        const auto start = Clock::now();
        const CoalitionSample sample = SampleCoalitionsPaired(
            d, m, DeriveSeed(DeriveSeed(config.seed, d), i * counts + c));
        const Attribution approx = KernelShapRegression(game, sample);
        const double ms = ElapsedMs(start);
        const RelativeDeviation dev = ComputeRelativeDeviation(exact, approx);
        cell[c * config.instances + i] = {d, m, i, dev.value, dev.skipped, ms};
      }
    });
    records.insert(records.end(), cell.begin(), cell.end());
  }
  return records;
}

void WriteBenchmarkCsv(std::ostream& out,
                       const std::vector<BenchmarkRecord>& records) {
  out << "d,n_coalitions,instance_id,relative_deviation,wall_time_ms\n";
  out.precision(17);
  for (const auto& r : records) {
    out << r.d << ',' << r.n_coalitions << ',' << r.instance_id << ','
        << r.relative_deviation << ',' << r.wall_time_ms << '\n';
  }
}

double MedianDeviation(const std::vector<BenchmarkRecord>& records,
                       std::size_t d, std::size_t n_coalitions) {
  std::vector<double> values;
  for (const auto& r : records) {
    if (r.d == d && r.n_coalitions == n_coalitions) {
      values.push_back(r.relative_deviation);
    }
  }
  return Median(std::move(values));
}

std::vector<SignPatternRecord> RunMmdSignPattern(const SignPatternConfig& config) {
  std::vector<SignPatternRecord> records(config.replications);
  const std::size_t half = config.d / 2;
  ParallelFor(config.replications, config.threads, [&](std::size_t r) {
    const SamplePair pair =
        GenMmdPair(config.n, config.d, config.dof, DeriveSeed(config.seed, r));
    TwoSample sample{pair.x, pair.z,
                     PooledMedianKernel(pair.x, pair.z, BaseKernelKind::kRbf,
                                        config.seed)};
    const Attribution a = ExplainMmd(sample, {EspBackend::kStable, 1});
    SignPatternRecord& rec = records[r];
    rec.replication = r;
    rec.mmd = a.v_full;
    rec.phi = a.phi;
    const auto h = static_cast<Eigen::Index>(half);
    rec.median_first = Median({a.phi.data(), a.phi.data() + h});
    rec.median_second = Median({a.phi.data() + h, a.phi.data() + a.phi.size()});
  });
  return records;
}

void WriteSignPatternCsv(std::ostream& out,
                         const std::vector<SignPatternRecord>& records) {
  out << "replication,mmd,median_phi_first_half,median_phi_second_half";
  const Eigen::Index d = records.empty() ? 0 : records.front().phi.size();
  for (Eigen::Index j = 0; j < d; ++j) out << ",phi_" << j + 1;
  out << '\n';
  out.precision(17);
  for (const auto& r : records) {
    out << r.replication << ',' << r.mmd << ',' << r.median_first << ','
        << r.median_second;
    for (const double v : r.phi) out << ',' << v;
    out << '\n';
  }
}

double OracleReport::Max() const { return std::max({model, mmd, hsic}); }

OracleReport RunOracleCheck(const OracleCheckConfig& config) {
  if (config.max_features == 0 || config.max_features > kBruteForceMaxPlayers) {
    throw Error(ErrorCode::kInvalidInput,
                "oracle check supports 1.." +
                    std::to_string(kBruteForceMaxPlayers) + " features");
  }
  OracleReport report;
  CounterRng rng(config.seed);
  for (std::size_t d = 1; d <= config.max_features; ++d) {
    for (std::size_t p = 0; p < config.problems_per_size; ++p) {
      {
        FittedModel m;
        m.train_x = NormalMatrix(1 + rng.UniformInt(50), d, rng);
        m.alpha.resize(m.train_x.rows());
        for (auto& a : m.alpha) a = rng.Normal();
        m.kernel = MixedKernel(d, rng);
        m.bias = rng.Normal();
        const FeatureMatrix xs = NormalMatrix(1, d, rng);
        const Eigen::VectorXd x = xs.row(0).transpose();
        const Attribution exact = ExplainInstance(m, x, config.backend);
        const Attribution oracle = ShapleyBruteForce(
            {[&](CoalitionMask mask) {
               return ValueFunction(m, x, MaskToSet(mask, d));
             },
             d});
        report.model = std::max(report.model, MaxAbsDiff(exact.phi, oracle.phi));
      }
      {
        TwoSample s;
        s.x = NormalMatrix(2 + rng.UniformInt(19), d, rng);
        s.z = NormalMatrix(2 + rng.UniformInt(19), d, rng);
        s.z.array() += 0.5;
        s.kernel = MixedKernel(d, rng);
        const Attribution exact = ExplainMmd(s, {config.backend, 1});
        const Attribution oracle = ShapleyBruteForce(
            {[&](CoalitionMask mask) {
               return MmdValueFunction(s, MaskToSet(mask, d));
             },
             d});
        report.mmd = std::max(report.mmd, MaxAbsDiff(exact.phi, oracle.phi));
      }
      {
        HsicInput in;
        const std::size_t n = 3 + rng.UniformInt(6);
        in.x = NormalMatrix(n, d, rng);
        in.kernel_x = MixedKernel(d, rng);
        Eigen::MatrixXd y = in.x.rowwise().sum();
        for (Eigen::Index i = 0; i < y.rows(); ++i) y(i, 0) += 0.3 * rng.Normal();
        in.target_gram = TargetGram(y, TargetKernel::kRbf, config.seed);
        const Attribution exact = ExplainHsic(in, {{config.backend, 1}});
        const Attribution oracle = ShapleyBruteForce(
            {[&](CoalitionMask mask) {
               return HsicValueFunction(in, MaskToSet(mask, d));
             },
             d});
        report.hsic = std::max(report.hsic, MaxAbsDiff(exact.phi, oracle.phi));
      }
      report.problems += 3;
    }
  }
  return report;
}

ComplexityResult RunComplexity(const ComplexityConfig& config) {
  if (config.dims.size() < 2 || config.repeats == 0) {
    throw Error(ErrorCode::kInvalidInput,
                "complexity check needs two or more sizes and repeats >= 1");
  }
  ComplexityResult result;
  result.dims = config.dims;
  CounterRng rng(config.seed);
  std::vector<FittedModel> models;
  std::vector<Eigen::VectorXd> points;
  for (const std::size_t d : config.dims) {
    FittedModel m;
    m.train_x = NormalMatrix(config.train_rows, d, rng);
    m.alpha.resize(m.train_x.rows());
    for (auto& a : m.alpha) a = rng.Normal();
    m.kernel = MixedKernel(d, rng);
    points.push_back(NormalMatrix(1, d, rng).row(0).transpose());
    ExplainInstance(m, points.back(), config.backend);  // warm-up
    models.push_back(std::move(m));
  }
  // Rounds interleave the sizes so that load changes hit all of them alike.
  std::vector<std::vector<double>> times(models.size());
  for (std::size_t r = 0; r < config.repeats; ++r) {
    for (std::size_t i = 0; i < models.size(); ++i) {
      const auto start = Clock::now();
      const Attribution a = ExplainInstance(models[i], points[i], config.backend);
      times[i].push_back(ElapsedMs(start));
      if (!a.phi.allFinite()) {
        throw Error(ErrorCode::kIllConditioned, "non-finite attribution");
      }
    }
  }
  for (auto& t : times) result.median_ms.push_back(Median(std::move(t)));
  const auto k = static_cast<double>(result.dims.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < result.dims.size(); ++i) {
    const double lx = std::log(static_cast<double>(result.dims[i]));
    const double ly = std::log(result.median_ms[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  result.slope = (k * sxy - sx * sy) / (k * sxx - sx * sx);
  return result;
}

}  // namespace pkex
