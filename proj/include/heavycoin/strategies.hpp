#pragma once

#include <cstdint>
#include <vector>

#include "heavycoin/bag_env.hpp"

namespace heavycoin {

/// Fixed-sample-size strategy parameters. Every arm is flipped m times and at
/// most n_hat arms are examined.
struct FixedSampleConfig {
  double alpha = 0.0;
  double theta0 = 0.0;
  double theta1 = 0.0;
  double delta = 0.0;
  std::uint64_t n_hat = 0;  ///< ceil(ln(2/delta) / alpha)
  std::uint64_t m = 0;      ///< ceil(2 ln(4 n_hat / delta) / (theta1 - theta0)^2)

  static FixedSampleConfig make(double alpha, double theta0, double theta1, double delta);

  double midpoint() const { return 0.5 * (theta0 + theta1); }
};

/// Parameters of the SPRT-like search with lower bounds alpha0 <= alpha and
/// epsilon0 <= theta1 - theta0.
struct SprtConfig {
  double delta = 0.0;
  double alpha0 = 0.0;
  double epsilon0 = 0.0;
  std::uint64_t n = 0;   ///< arms examined after estimation
  std::uint64_t m = 0;   ///< per-arm sample cap
  double lower = 0.0;    ///< A < 0, abandon boundary
  double upper = 0.0;    ///< B > 0, declare boundary
  std::uint64_t k1 = 5;  ///< arms used to estimate theta0
  std::uint64_t k2 = 0;  ///< samples per estimation arm

  /// delta in (0, 1), alpha0 in (0, 1/2], epsilon0 > 0.
  static SprtConfig make(double delta, double alpha0, double epsilon0);

  /// Deterministic bound on the samples one search can take.
  std::uint64_t sample_cap() const { return k1 * k2 + n * m; }
};

/// Flips each drawn arm cfg.m times and declares the first whose empirical mean
/// reaches the midpoint (ties declare). The n_hat-th arm is declared if none
/// crosses, so N <= n_hat and T = m N.
StrategyOutcome run_fixed_sample(const FixedSampleConfig& cfg, BagSession& session);

/// One pass of the SPRT-like search on a live session. Returns true with the
/// heavy candidate left as the current arm, false for a null result. Declares
/// nothing; BudgetExhausted propagates.
bool sprt_search(const SprtConfig& cfg, BagSession& session);

/// sprt_search followed by the terminal declaration.
StrategyOutcome run_adaptive_sprt(const SprtConfig& cfg, BagSession& session);

/// Known alpha, unknown gap: stage k runs the search with confidence
/// delta / (2 k^2) and epsilon0 = 2^-k until one returns an arm.
StrategyOutcome run_doubling_epsilon(double delta, double alpha, BagSession& session);

/// Known gap, unknown alpha: stage k uses alpha0 = 2^-k.
StrategyOutcome run_doubling_alpha(double delta, double epsilon, BagSession& session);

/// Stage confidence delta / (2 k^2) shared by both doubling schedules.
double doubling_stage_delta(double delta, int k);

struct Landmark {
  double alpha;
  double epsilon;
};

/// Landmarks of level l: alpha_k = 2^k / 2^l and epsilon_k = sqrt(1 / (2 alpha_k 2^l))
/// for k = 0..l-1.
std::vector<Landmark> landmarks(int level);

/// No prior knowledge: level l = 1, 2, ... tries every landmark with
/// confidence delta / (2 l^3).
StrategyOutcome run_fully_adaptive(double delta, BagSession& session);

}  // namespace heavycoin
