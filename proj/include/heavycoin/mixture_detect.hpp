#pragma once

#include <cstdint>
#include <span>
#include <string_view>

namespace heavycoin {

/// Threshold test for H0: N(theta0, sigma^2) against
/// H1: (1 - alpha) N(theta0, sigma^2) + alpha N(theta1, sigma^2).
struct GaussianTestPlan {
  double theta0 = 0.0;
  double theta1 = 0.0;
  double sigma = 1.0;
  double alpha = 0.0;
  double delta = 0.0;
  double p0 = 0.0;           ///< P0(X > theta1) = Q(Delta)
  double p1 = 0.0;           ///< P1(X > theta1) = (1 - alpha) Q(Delta) + alpha / 2
  double gamma = 0.0;        ///< (p0 + p1) / 2
  double epsilon_gap = 0.0;  ///< alpha (1/2 - Q(Delta))
  double rate = 0.0;         ///< alpha^2 min{Delta^2 / (64 pi), 1/32}
  std::uint64_t n = 0;
  double error_bound = 0.0;  ///< exp(-n rate)

  double snr() const { return (theta1 - theta0) / sigma; }
};

/// Smallest n with exp(-n rate) <= delta.
GaussianTestPlan plan_gaussian_test(double theta0, double theta1, double sigma, double alpha,
                                    double delta);

enum class Decision { H0, H1 };

std::string_view to_string(Decision d);

/// H1 iff the fraction of samples above theta1 exceeds gamma. Requires exactly
/// plan.n samples.
Decision run_gaussian_test(const GaussianTestPlan& plan, std::span<const double> samples);

enum class Hypothesis { H0, H1 };

Hypothesis parse_hypothesis(std::string_view name);

struct DetectionErrorEstimate {
  std::uint64_t trials = 0;
  std::uint64_t errors = 0;
  double rate = 0.0;
  double ci_radius = 0.0;  ///< Wilson radius at z = 1.96
};

/// Monte Carlo error rate of the planned test under `truth`. Trial i draws from
/// RandomSource(seed, i).
DetectionErrorEstimate simulate_gaussian_test(const GaussianTestPlan& plan, Hypothesis truth,
                                              std::uint64_t trials, std::uint64_t seed);

}  // namespace heavycoin
