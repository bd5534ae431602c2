#include "heavycoin/mixture_detect.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "heavycoin/core_model.hpp"
#include "heavycoin/harness.hpp"
#include "heavycoin/random.hpp"

namespace heavycoin {

GaussianTestPlan plan_gaussian_test(double theta0, double theta1, double sigma, double alpha,
                                    double delta) {
  if (!(std::isfinite(theta0) && std::isfinite(theta1))) {
    throw PreconditionError("theta0 and theta1 must be finite");
  }
  if (!(theta1 > theta0)) throw PreconditionError("theta1 > theta0 is required");
  if (!(sigma > 0.0 && std::isfinite(sigma))) throw PreconditionError("sigma > 0 is required");
  if (!(alpha > 0.0 && alpha <= 0.5)) throw PreconditionError("alpha must lie in (0, 1/2]");
  if (!(delta > 0.0 && delta < 1.0)) throw PreconditionError("delta must lie in (0, 1)");

  GaussianTestPlan p;
  p.theta0 = theta0;
  p.theta1 = theta1;
  p.sigma = sigma;
  p.alpha = alpha;
  p.delta = delta;
  const double snr = p.snr();
  const double q = gaussian_tail_q(snr);
  p.p0 = q;
  p.p1 = (1.0 - alpha) * q + alpha / 2.0;
  p.gamma = 0.5 * (p.p0 + p.p1);
  p.epsilon_gap = alpha * (0.5 - q);
  p.rate = alpha * alpha * std::min(snr * snr / (64.0 * std::numbers::pi), 1.0 / 32.0);

  const double target = std::log(1.0 / delta);
  double n = std::ceil(target / p.rate);
  // Floating error in the division can land one off the minimal integer.
  while (n > 1.0 && (n - 1.0) * p.rate >= target) n -= 1.0;
  while (n * p.rate < target) n += 1.0;
  if (!(n < 4.0e18)) throw std::overflow_error("planned sample count exceeds the 64-bit range");
  p.n = static_cast<std::uint64_t>(std::max(n, 1.0));
  p.error_bound = std::exp(-static_cast<double>(p.n) * p.rate);
  return p;
}

std::string_view to_string(Decision d) { return d == Decision::H0 ? "H0" : "H1"; }

Hypothesis parse_hypothesis(std::string_view name) {
  if (name == "H0" || name == "h0") return Hypothesis::H0;
  if (name == "H1" || name == "h1") return Hypothesis::H1;
  throw PreconditionError("hypothesis must be H0 or H1, got '" + std::string(name) + "'");
}

Decision run_gaussian_test(const GaussianTestPlan& plan, std::span<const double> samples) {
  if (samples.size() != plan.n) {
    throw PreconditionError("expected " + std::to_string(plan.n) + " samples, got " +
                            std::to_string(samples.size()));
  }
  const auto above = static_cast<std::uint64_t>(
      std::count_if(samples.begin(), samples.end(), [&](double x) { return x > plan.theta1; }));
  // above / n > gamma, ties decide H0.
  const double fraction = static_cast<double>(above) / static_cast<double>(plan.n);
  return fraction > plan.gamma ? Decision::H1 : Decision::H0;
}

DetectionErrorEstimate simulate_gaussian_test(const GaussianTestPlan& plan, Hypothesis truth,
                                              std::uint64_t trials, std::uint64_t seed) {
  if (trials < 1) throw PreconditionError("trials >= 1 is required");
  const Decision wrong = truth == Hypothesis::H0 ? Decision::H1 : Decision::H0;
  std::vector<double> buf(plan.n);
  DetectionErrorEstimate est;
  est.trials = trials;
  for (std::uint64_t i = 0; i < trials; ++i) {
    RandomSource rng(seed, i);
    for (auto& x : buf) {
      double mean = plan.theta0;
      if (truth == Hypothesis::H1 && rng.uniform() < plan.alpha) mean = plan.theta1;
      x = mean + plan.sigma * rng.normal();
    }
    if (run_gaussian_test(plan, buf) == wrong) ++est.errors;
  }
  est.rate = static_cast<double>(est.errors) / static_cast<double>(trials);
  est.ci_radius = wilson_radius(est.errors, trials);
  return est;
}

}  // namespace heavycoin
