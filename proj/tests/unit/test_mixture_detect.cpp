#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "heavycoin/core_model.hpp"
#include "heavycoin/mixture_detect.hpp"

using namespace heavycoin;

TEST_SUITE("mixture_detect") {

TEST_CASE("plan at unit snr") {
  const auto p = plan_gaussian_test(0.0, 1.0, 1.0, 0.2, 0.1);
  const double q1 = 0.15865525393145705141;
  CHECK(p.p0 == doctest::Approx(q1).epsilon(1e-13));
  CHECK(p.p1 == doctest::Approx(0.8 * q1 + 0.1).epsilon(1e-13));
  CHECK(p.gamma == doctest::Approx(0.192790).epsilon(1e-6));
  CHECK(p.epsilon_gap == doctest::Approx(0.068269).epsilon(1e-5));
  CHECK(std::abs(p.epsilon_gap - (p.p1 - p.p0)) <= 1e-12);
  CHECK(p.n == 11575);
  CHECK(p.error_bound <= 0.1);
  const double rate = 0.04 / (64 * std::numbers::pi);
  CHECK(std::exp(-double(p.n - 1) * rate) > 0.1);
}

TEST_CASE("plan scales with the signal") {
  const auto big = plan_gaussian_test(0.0, 10.0, 1.0, 0.2, 0.1);
  CHECK(big.n == static_cast<std::uint64_t>(std::ceil(32 * std::log(10.0) / 0.04)));
  const auto p = plan_gaussian_test(0.0, 1.0, 1.0, 0.2, 0.1);
  const auto half = plan_gaussian_test(0.0, 1.0, 1.0, 0.2, 0.05);
  const double rate = 0.04 / (64 * std::numbers::pi);
  CHECK(half.n > p.n);
  CHECK(half.n - p.n <= static_cast<std::uint64_t>(std::ceil(std::log(2.0) / rate)));
  // sigma rescales Delta.
  CHECK(plan_gaussian_test(0.0, 2.0, 2.0, 0.2, 0.1).n == p.n);
}

TEST_CASE("plan preconditions") {
  CHECK_THROWS_AS(plan_gaussian_test(1.0, 1.0, 1.0, 0.2, 0.1), PreconditionError);
  CHECK_THROWS_AS(plan_gaussian_test(0.0, 1.0, 0.0, 0.2, 0.1), PreconditionError);
  CHECK_THROWS_AS(plan_gaussian_test(0.0, 1.0, 1.0, 0.6, 0.1), PreconditionError);
  CHECK_THROWS_AS(plan_gaussian_test(0.0, 1.0, 1.0, 0.2, 1.0), PreconditionError);
}

TEST_CASE("decisions at the extremes and ties") {
  const auto p = plan_gaussian_test(0.0, 10.0, 1.0, 0.5, 0.4);
  std::vector<double> below(p.n, 0.0), above(p.n, 11.0);
  CHECK(run_gaussian_test(p, below) == Decision::H0);
  CHECK(run_gaussian_test(p, above) == Decision::H1);
  std::vector<double> at(p.n, 10.0);
  CHECK(run_gaussian_test(p, at) == Decision::H0);
  std::vector<double> short_batch(p.n - 1, 0.0);
  CHECK_THROWS_AS(run_gaussian_test(p, short_batch), PreconditionError);

  // Exactly gamma * n exceedances is a tie and decides H0.
  auto tie = p;
  tie.n = 4;
  tie.gamma = 0.25;
  std::vector<double> one_of_four = {11.0, 0.0, 0.0, 0.0};
  CHECK(run_gaussian_test(tie, one_of_four) == Decision::H0);
  std::vector<double> two_of_four = {11.0, 11.0, 0.0, 0.0};
  CHECK(run_gaussian_test(tie, two_of_four) == Decision::H1);
}

TEST_CASE("two-sided validity at desk scale") {
  for (double snr : {0.5, 1.0}) {
    for (double alpha : {0.1, 0.2}) {
      const auto p = plan_gaussian_test(0.0, snr, 1.0, alpha, 0.1);
      const auto h0 = simulate_gaussian_test(p, Hypothesis::H0, 2000, 1);
      const auto h1 = simulate_gaussian_test(p, Hypothesis::H1, 2000, 2);
      CAPTURE(snr);
      CAPTURE(alpha);
      CHECK(h0.rate <= p.error_bound + 3 * h0.ci_radius);
      CHECK(h1.rate <= p.error_bound + 3 * h1.ci_radius);
    }
  }
}

}  // TEST_SUITE
