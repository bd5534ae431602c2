#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "heavycoin/bag_env.hpp"
#include "heavycoin/core_model.hpp"

namespace heavycoin {

enum class StrategyKind { FixedSample, AdaptiveSprt, DoublingEpsilon, DoublingAlpha, FullyAdaptive };

std::string_view to_string(StrategyKind kind);
StrategyKind parse_strategy(std::string_view name);
const std::vector<StrategyKind>& all_strategies();

/// Strategy choice plus the parameters it is told. Unset assumptions default to
/// the true instance values, giving the well-specified configuration.
struct StrategyParams {
  StrategyKind kind = StrategyKind::AdaptiveSprt;
  double delta = 0.1;
  std::optional<double> alpha0;    ///< assumed alpha (or its lower bound)
  std::optional<double> epsilon0;  ///< assumed gap (or its lower bound)
  std::optional<double> theta0;    ///< assumed light mean (fixed sample)
  std::optional<double> theta1;    ///< assumed heavy mean (fixed sample)
};

struct ExperimentConfig {
  MixtureSpec spec;
  StrategyParams strategy;
  std::uint64_t trials = 1000;
  std::uint64_t base_seed = 0;
  std::uint64_t max_total_samples = 100'000'000;
  std::optional<double> heavy_probability_override;
  unsigned threads = 0;  ///< 0 picks std::thread::hardware_concurrency()
  bool trace_first_trial = false;
  std::string output;  ///< CSV path; empty means none

  void validate() const;
};

/// Runs trial `index` on RandomSource(base_seed, index).
StrategyOutcome run_trial(const ExperimentConfig& cfg, std::uint64_t index, bool record_trace = false);

enum class TrialCategory { Success, LightError, Null, Budget };

TrialCategory categorize(const StrategyOutcome& outcome);

struct TrialRecord {
  TrialCategory category = TrialCategory::Null;
  std::uint64_t arms_drawn = 0;
  std::uint64_t total_samples = 0;
  std::optional<int> stage;
  std::optional<std::pair<int, int>> landmark;
};

struct TrialBatchResult {
  std::uint64_t trials = 0;
  std::uint64_t success_count = 0;
  std::uint64_t light_error_count = 0;
  std::uint64_t null_count = 0;
  std::uint64_t budget_count = 0;
  double mean_T = 0.0;
  double stddev_T = 0.0;
  double mean_N = 0.0;
  double ci_success = 0.0;
  double ci_light_error = 0.0;
  double ci_null = 0.0;
  double ci_budget = 0.0;
  std::uint64_t max_T = 0;
  std::uint64_t max_N = 0;
  std::vector<TrialRecord> records;  ///< in trial-index order
  std::vector<TraceEvent> first_trace;

  double rate(std::uint64_t count) const {
    return trials == 0 ? 0.0 : static_cast<double>(count) / static_cast<double>(trials);
  }
  double success_rate() const { return rate(success_count); }
  double light_error_rate() const { return rate(light_error_count); }
  double null_rate() const { return rate(null_count); }
  double budget_rate() const { return rate(budget_count); }
};

/// Wilson score interval half-width for `count` successes in `n` trials.
double wilson_radius(std::uint64_t count, std::uint64_t n, double z = 1.96);

/// Runs the trials on a worker pool and aggregates in trial-index order, so the
/// result does not depend on the thread count.
TrialBatchResult run_batch(const ExperimentConfig& cfg);

/// Fixed CSV schema shared by simulate and sweep.
std::string csv_header();
std::string csv_row(const ExperimentConfig& cfg, const TrialBatchResult& result);

/// Writes header plus rows to `path`; throws std::runtime_error on I/O failure.
void write_csv_file(const std::string& path, const std::vector<std::string>& rows);

struct SweepPoint {
  double alpha;
  double epsilon;
};

struct SweepConfig {
  std::vector<SweepPoint> points;
  std::vector<StrategyKind> strategies;
  ArmFamily family = ArmFamily::bernoulli();
  double center = 0.5;  ///< theta0, theta1 = center -/+ epsilon / 2
  double delta = 0.1;
  std::uint64_t trials = 200;
  std::uint64_t base_seed = 0;
  std::uint64_t max_total_samples = 100'000'000;
  unsigned threads = 0;
};

struct SweepRow {
  ExperimentConfig config;
  TrialBatchResult result;
};

/// One batch per (point, strategy), points outermost.
std::vector<SweepRow> sweep(const SweepConfig& cfg);

enum class WalkDistribution { Rademacher, Uniform, Zero };

WalkDistribution parse_walk(std::string_view name);
std::string_view to_string(WalkDistribution w);

struct LemmaProbeResult {
  std::uint64_t trials = 0;
  std::uint64_t crossings = 0;
  std::uint64_t horizon = 0;
  double estimate = 0.0;
  double ci_radius = 0.0;
  double bound = 0.0;  ///< 7 exp(-slope offset / 2)
};

/// Default horizon ceil(16 offset / slope).
std::uint64_t default_lemma_horizon(double slope, double offset);

/// Monte Carlo estimate of P(exists n <= horizon: X_1 + ... + X_n >= slope n + offset)
/// for zero-mean increments in [-1/2, 1/2]. Walk i uses RandomSource(seed, i).
LemmaProbeResult probe_lemma1(double slope, double offset, WalkDistribution walk,
                              std::uint64_t horizon, std::uint64_t trials, std::uint64_t seed);

}  // namespace heavycoin
