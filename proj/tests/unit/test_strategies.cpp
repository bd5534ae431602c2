#include <doctest.h>

#include <cmath>

#include "heavycoin/harness.hpp"
#include "heavycoin/strategies.hpp"

using namespace heavycoin;

namespace {

BagSession session_for(const MixtureSpec& spec, std::uint64_t stream, bool trace = false,
                       std::optional<double> heavy = std::nullopt) {
  SessionOptions opts;
  opts.record_trace = trace;
  opts.heavy_probability_override = heavy;
  return BagSession(spec, RandomSource(2718, stream), opts);
}

void check_trace(const StrategyOutcome& out) {
  std::uint64_t latest = 0, samples = 0;
  int terminals = 0;
  for (const auto& e : out.trace) {
    if (e.kind == EventKind::DrawArm) {
      latest = e.arm;
    } else if (e.kind == EventKind::Sample) {
      CHECK(e.arm == latest);
      ++samples;
    } else {
      ++terminals;
    }
  }
  CHECK(terminals == 1);
  CHECK(samples == out.total_samples);
  CHECK(latest == out.arms_drawn);
}

}  // namespace

TEST_SUITE("strategies") {

TEST_CASE("fixed sample parameters") {
  const auto cfg = FixedSampleConfig::make(0.1, 0.4, 0.6, 0.1);
  CHECK(cfg.n_hat == 30);
  CHECK(cfg.m == 355);
  const auto desk = FixedSampleConfig::make(0.2, 0.4, 0.6, 0.1);
  CHECK(desk.n_hat == 15);
  CHECK(desk.m == 320);
  CHECK_THROWS_AS(FixedSampleConfig::make(0.0, 0.4, 0.6, 0.1), PreconditionError);
  CHECK_THROWS_AS(FixedSampleConfig::make(0.1, 0.6, 0.4, 0.1), PreconditionError);
}

TEST_CASE("sprt parameters") {
  const auto cfg = SprtConfig::make(0.1, 0.1, 0.2);
  CHECK(cfg.n == 44);
  CHECK(cfg.m == 13962);
  CHECK(cfg.lower == doctest::Approx(-121.7808975089369198600).epsilon(1e-13));
  CHECK(cfg.upper == doctest::Approx(349.0332822611026184575).epsilon(1e-13));
  CHECK(cfg.k1 == 5);
  CHECK(cfg.k2 == 1726);
  CHECK(cfg.sample_cap() == 5 * 1726 + 44 * 13962);
  CHECK_THROWS_AS(SprtConfig::make(0.1, 0.6, 0.2), PreconditionError);
  CHECK_THROWS_AS(SprtConfig::make(1.0, 0.1, 0.2), PreconditionError);
  CHECK_THROWS_AS(SprtConfig::make(0.1, 0.1, 0.0), PreconditionError);
  CHECK_THROWS_AS(SprtConfig::make(0.1, 1e-30, 1e-9), std::overflow_error);
}

TEST_CASE("fixed sample on separated coins declares arm 1 with T = m") {
  const auto spec = MixtureSpec::make(0.5, 0.0, 1.0);
  const auto cfg = FixedSampleConfig::make(0.5, 0.0, 1.0, 0.1);
  auto s = session_for(spec, 0, false, 1.0);
  const auto out = run_fixed_sample(cfg, s);
  CHECK(out.declared == 1u);
  CHECK(out.correct == true);
  CHECK(out.total_samples == cfg.m);
}

TEST_CASE("fixed sample caps and protocol over many runs") {
  const auto spec = MixtureSpec::make(0.2, 0.4, 0.7);
  const auto cfg = FixedSampleConfig::make(0.2, 0.4, 0.7, 0.1);
  for (std::uint64_t i = 0; i < 200; ++i) {
    auto s = session_for(spec, i, true);
    const auto out = run_fixed_sample(cfg, s);
    CHECK(out.arms_drawn <= cfg.n_hat);
    CHECK(out.total_samples == cfg.m * out.arms_drawn);
    CHECK(out.termination == Termination::DeclaredHeavy);
    check_trace(out);
  }
}

TEST_CASE("fixed sample declares the last arm when none crosses") {
  const auto spec = MixtureSpec::make(0.2, 0.0, 1.0);
  const auto cfg = FixedSampleConfig::make(0.2, 0.0, 1.0, 0.1);
  auto s = session_for(spec, 0, false, 0.0);
  const auto out = run_fixed_sample(cfg, s);
  CHECK(out.arms_drawn == cfg.n_hat);
  CHECK(out.declared == cfg.n_hat);
  CHECK(out.correct == false);
}

TEST_CASE("sprt hard cap and protocol") {
  const auto spec = MixtureSpec::make(0.2, 0.4, 0.7);
  const auto cfg = SprtConfig::make(0.1, 0.2, 0.3);
  for (std::uint64_t i = 0; i < 100; ++i) {
    auto s = session_for(spec, i, true);
    const auto out = run_adaptive_sprt(cfg, s);
    CHECK(out.total_samples <= cfg.sample_cap());
    CHECK(out.arms_drawn <= cfg.k1 + cfg.n);
    check_trace(out);
  }
}

TEST_CASE("sprt on an all-light bag returns null within the cap") {
  const auto spec = MixtureSpec::make(0.0, 0.4, 0.7);
  const auto cfg = SprtConfig::make(0.1, 0.25, 0.3);
  int nulls = 0;
  for (std::uint64_t i = 0; i < 50; ++i) {
    auto s = session_for(spec, i);
    const auto out = run_adaptive_sprt(cfg, s);
    CHECK(out.total_samples <= cfg.sample_cap());
    nulls += out.termination == Termination::DeclaredNull;
  }
  CHECK(nulls >= 45);
}

TEST_CASE("budget exhaustion surfaces as an outcome") {
  const auto spec = MixtureSpec::make(0.2, 0.4, 0.7);
  SessionOptions opts;
  opts.max_total_samples = 100;
  BagSession s(spec, RandomSource(1, 1), opts);
  const auto out = run_adaptive_sprt(SprtConfig::make(0.1, 0.2, 0.3), s);
  CHECK(out.termination == Termination::BudgetExhausted);
  CHECK(out.total_samples == 100);
  CHECK_FALSE(out.correct.has_value());
}

TEST_CASE("doubling schedules") {
  CHECK(doubling_stage_delta(0.1, 1) == doctest::Approx(0.05));
  CHECK(doubling_stage_delta(0.1, 3) == doctest::Approx(0.1 / 18));
  double total = 0;
  for (int k = 1; k < 100000; ++k) total += doubling_stage_delta(0.1, k);
  CHECK(total <= 0.1);

  const auto spec = MixtureSpec::make(0.3, 0.35, 0.65);
  for (std::uint64_t i = 0; i < 30; ++i) {
    auto s = session_for(spec, i, true);
    const auto out = run_doubling_epsilon(0.1, 0.3, s);
    REQUIRE(out.stage.has_value());
    CHECK(*out.stage >= 1);
    check_trace(out);
  }
  const auto spec2 = MixtureSpec::make(0.05, 0.4, 0.7);
  for (std::uint64_t i = 0; i < 30; ++i) {
    auto s = session_for(spec2, i, true);
    const auto out = run_doubling_alpha(0.1, 0.3, s);
    REQUIRE(out.stage.has_value());
    check_trace(out);
  }
}

TEST_CASE("landmark grid") {
  const auto l3 = landmarks(3);
  REQUIRE(l3.size() == 3);
  CHECK(l3[0].alpha == 0.125);
  CHECK(l3[0].epsilon == doctest::Approx(0.70710678118654752).epsilon(1e-14));
  CHECK(l3[1].alpha == 0.25);
  CHECK(l3[1].epsilon == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(l3[2].alpha == 0.5);
  CHECK(l3[2].epsilon == doctest::Approx(0.35355339059327376).epsilon(1e-14));
  for (int level = 1; level <= 12; ++level) {
    for (const auto& mark : landmarks(level)) {
      CHECK(1.0 / (mark.alpha * mark.epsilon * mark.epsilon) ==
            doctest::Approx(2.0 * std::ldexp(1.0, level)).epsilon(1e-12));
      CHECK(mark.alpha <= 0.5);
    }
  }
  CHECK_THROWS_AS(landmarks(0), PreconditionError);
}

TEST_CASE("fully adaptive records its landmark") {
  const auto spec = MixtureSpec::make(0.2, 0.4, 0.7);
  for (std::uint64_t i = 0; i < 20; ++i) {
    auto s = session_for(spec, i, true);
    const auto out = run_fully_adaptive(0.1, s);
    REQUIRE(out.landmark.has_value());
    CHECK(out.landmark->second < out.landmark->first);
    check_trace(out);
  }
}

TEST_CASE("doubling stage tail is geometric") {
  // With epsilon = 0.3 the first stage with 2^-k <= 0.3 is k* = 2.
  ExperimentConfig cfg;
  cfg.spec = MixtureSpec::make(0.3, 0.35, 0.65);
  cfg.strategy.kind = StrategyKind::DoublingEpsilon;
  cfg.trials = 1000;
  cfg.base_seed = 4;
  const auto r = run_batch(cfg);
  const int k_star = 2;
  for (int extra = 1; extra <= 3; ++extra) {
    std::uint64_t late = 0;
    for (const auto& rec : r.records) late += rec.stage && *rec.stage >= k_star + extra;
    const double rate = late / double(cfg.trials);
    CAPTURE(extra);
    CHECK(rate <= 1.25 * std::pow(0.2, extra) + 3 * wilson_radius(late, cfg.trials));
  }
}

TEST_CASE("fully adaptive mean T within a constant of the unknown-all rate") {
  ExperimentConfig cfg;
  cfg.spec = MixtureSpec::make(0.2, 0.4, 0.7);
  cfg.strategy.kind = StrategyKind::FullyAdaptive;
  cfg.trials = 300;
  cfg.base_seed = 8;
  const auto r = run_batch(cfg);
  CHECK(r.success_rate() >= 0.9 - 3 * r.ci_success);
  const double h = 1.0 / (0.2 * 0.09);
  const double rate = h * std::log(h) * std::log(std::log(h) / 0.1);
  CHECK(r.mean_T <= 50.0 * rate);
}

}  // TEST_SUITE
