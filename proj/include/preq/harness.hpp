#pragma once

// Experiment configuration, k-sweeps and report persistence for the CLI.

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "preq/invariants.hpp"

namespace preq::harness {

struct ExperimentConfig {
  std::string experiment;  // theorem1, prop53, defect, distance or toeplitz-dump
  std::string preset = "zero";
  std::map<std::string, double> params;
  std::string presetB;  // second path for `defect`
  std::map<std::string, double> paramsB;
  std::vector<int> ks;
  int band = 24;           // quantum grid: make_grid(k / 2 + band, k + 2 band)
  int classicalGrid = 16;  // nTheta of the grid for Cal, Sh and the curvature pairing
  int steps = 0;           // 0 lets the propagator choose
  std::uint64_t seed = 1;
  int instances = 200;      // random instances for `distance`
  double tolerance = 1e-5;  // |residual| bound for theorem1 and prop53
  double time = 0.0;        // symbol time for `toeplitz-dump`
  std::string output = "out";
  std::string expect = "bounded";  // `defect`: "bounded" or "zero"

  /// Throws ConfigError on unknown keys, bad types or broken invariants.
  static ExperimentConfig from_json(const nlohmann::json& j);
  static ExperimentConfig load(const std::filesystem::path& file);
  nlohmann::json to_json() const;

  PathPtr path_a() const;
  PathPtr path_b() const;
};

struct SweepRow {
  int k = 0;
  double measured = 0.0;
  double predicted = 0.0;
  double residual = 0.0;  // measured - predicted
  double cal = 0.0;
  double sh = 0.0;
  double lambdaPrime = 0.0;
  int steps = 0;
  double seconds = 0.0;
  std::map<std::string, double> extra;
};

struct SweepReport {
  std::string experiment;
  std::vector<SweepRow> rows;
  nlohmann::json summary = nlohmann::json::object();
  nlohmann::json metadata = nlohmann::json::object();
  std::vector<std::string> failures;  // in-run checks that did not hold

  bool passed() const { return failures.empty(); }
};

/// Residuals below this are treated as numerical noise in slope fits:
/// ten times the 1e-7 ODE tolerance.
inline constexpr double kResidualFloor = 1e-6;

struct SlopeFit {
  double slope = 0.0;
  int used = 0;  // points above the floor
};

/// Least squares of log|v| against log k over the points with |v| >= floor.
/// With fewer than two such points the slope is reported as 0.
SlopeFit fit_loglog_slope(const std::vector<int>& ks, const std::vector<double>& values,
                          double floor = kResidualFloor);

/// Successive increments of a sequence sampled at doubling k shrink by at
/// least `ratio` each time; the limit is then at most last + tail.
struct BoundednessCheck {
  bool contracting = false;
  double worstRatio = 0.0;
  double tailBound = 0.0;  // geometric bound on the growth beyond the last sample
};
BoundednessCheck check_bounded(const std::vector<double>& values, double ratio = 0.9,
                               double floor = kResidualFloor);

SweepReport run_theorem1_holomorphic(const ExperimentConfig& cfg, Exec exec = Exec::Parallel);
SweepReport run_prop53(const ExperimentConfig& cfg, Exec exec = Exec::Parallel);
SweepReport run_defect(const ExperimentConfig& cfg, Exec exec = Exec::Parallel);
SweepReport run_distance_tests(const ExperimentConfig& cfg);
/// Writes T_k(H_t) and Pi K_k(H_t) Pi for each k as CSV (real and imaginary
/// parts) into cfg.output and reports their Hermitian defects.
SweepReport run_toeplitz_dump(const ExperimentConfig& cfg, Exec exec = Exec::Parallel);

SweepReport run(const ExperimentConfig& cfg, Exec exec = Exec::Parallel);

/// <dir>/<experiment>.csv (rows), <dir>/<experiment>.json (summary and
/// metadata) and <dir>/<experiment>_timings.csv. The first two depend only on
/// the configuration.
void write_report(const SweepReport& report, const std::filesystem::path& dir);

/// Exhaustive search over offsets |n_i| <= reach; used to audit solve_lattice.
double brute_force_lattice(const unimetric::LatticeProblem& p, int reach = 4);

}  // namespace preq::harness
