#include "heavycoin/strategies.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace heavycoin {

namespace {

constexpr double kMaxCount = 4.0e18;

std::uint64_t ceil_count(double x, const char* what) {
  if (!(x < kMaxCount)) throw std::overflow_error(std::string(what) + " exceeds the 64-bit range");
  return static_cast<std::uint64_t>(std::ceil(x));
}

StrategyOutcome finish_on_budget(BagSession& session) { return session.take_outcome(); }

}  // namespace

FixedSampleConfig FixedSampleConfig::make(double alpha, double theta0, double theta1, double delta) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw PreconditionError("fixed sample requires alpha in (0, 1]");
  if (!(theta0 < theta1)) throw PreconditionError("fixed sample requires theta0 < theta1");
  if (!(delta > 0.0 && delta < 1.0)) throw PreconditionError("fixed sample requires delta in (0, 1)");
  FixedSampleConfig cfg{alpha, theta0, theta1, delta, 0, 0};
  cfg.n_hat = ceil_count(std::log(2.0 / delta) / alpha, "n_hat");
  const double gap = theta1 - theta0;
  cfg.m = ceil_count(2.0 * std::log(4.0 * static_cast<double>(cfg.n_hat) / delta) / (gap * gap), "m");
  cfg.n_hat = std::max<std::uint64_t>(cfg.n_hat, 1);
  cfg.m = std::max<std::uint64_t>(cfg.m, 1);
  return cfg;
}

SprtConfig SprtConfig::make(double delta, double alpha0, double epsilon0) {
  if (!(delta > 0.0 && delta < 1.0)) throw PreconditionError("sprt requires delta in (0, 1)");
  if (!(alpha0 > 0.0 && alpha0 <= 0.5)) throw PreconditionError("sprt requires alpha0 in (0, 1/2]");
  if (!(epsilon0 > 0.0 && std::isfinite(epsilon0))) {
    throw PreconditionError("sprt requires epsilon0 > 0");
  }
  SprtConfig cfg;
  cfg.delta = delta;
  cfg.alpha0 = alpha0;
  cfg.epsilon0 = epsilon0;
  cfg.n = ceil_count(2.0 * std::log(9.0) / alpha0, "n");
  const double log_term = std::log(14.0 * static_cast<double>(cfg.n) / delta);
  const double inv_eps = 1.0 / epsilon0;
  cfg.m = ceil_count(64.0 * inv_eps * inv_eps * log_term, "m");
  cfg.lower = -8.0 * inv_eps * std::log(21.0);
  cfg.upper = 8.0 * inv_eps * log_term;
  cfg.k1 = 5;
  const double confidence =
      std::min(delta / 8.0, 1.0 / (static_cast<double>(cfg.m) * epsilon0 * epsilon0));
  cfg.k2 = ceil_count(
      8.0 * inv_eps * inv_eps * std::log(2.0 * static_cast<double>(cfg.k1) / confidence), "k2");
  const double cap = static_cast<double>(cfg.k1) * static_cast<double>(cfg.k2) +
                     static_cast<double>(cfg.n) * static_cast<double>(cfg.m);
  if (!(cap < kMaxCount)) throw std::overflow_error("sprt sample cap exceeds the 64-bit range");
  return cfg;
}

StrategyOutcome run_fixed_sample(const FixedSampleConfig& cfg, BagSession& session) {
  const double threshold = cfg.midpoint() * static_cast<double>(cfg.m);
  try {
    for (std::uint64_t i = 1; i <= cfg.n_hat; ++i) {
      session.draw_next();
      double sum = 0.0;
      for (std::uint64_t j = 0; j < cfg.m; ++j) sum += session.sample_current();
      // sum / m >= midpoint, compared without the division.
      if (sum >= threshold || i == cfg.n_hat) return session.declare_heavy();
    }
  } catch (const BudgetExhausted&) {
    return finish_on_budget(session);
  }
  return session.declare_null();
}

bool sprt_search(const SprtConfig& cfg, BagSession& session) {
  // Estimate theta0 from the smallest of k1 empirical means.
  double theta0_hat = std::numeric_limits<double>::infinity();
  for (std::uint64_t i = 0; i < cfg.k1; ++i) {
    session.draw_next();
    double sum = 0.0;
    for (std::uint64_t j = 0; j < cfg.k2; ++j) sum += session.sample_current();
    theta0_hat = std::min(theta0_hat, sum / static_cast<double>(cfg.k2));
  }
  const double drift = theta0_hat + cfg.epsilon0 / 2.0;

  for (std::uint64_t i = 0; i < cfg.n; ++i) {
    session.draw_next();
    double walk = 0.0;
    for (std::uint64_t j = 0; j < cfg.m; ++j) {
      walk += session.sample_current() - drift;
      if (walk > cfg.upper) return true;
      if (walk < cfg.lower) break;
    }
  }
  return false;
}

StrategyOutcome run_adaptive_sprt(const SprtConfig& cfg, BagSession& session) {
  try {
    if (sprt_search(cfg, session)) return session.declare_heavy();
    return session.declare_null();
  } catch (const BudgetExhausted&) {
    return finish_on_budget(session);
  }
}

double doubling_stage_delta(double delta, int k) {
  return delta / (2.0 * static_cast<double>(k) * static_cast<double>(k));
}

namespace {

template <typename StageConfig>
StrategyOutcome run_doubling(BagSession& session, StageConfig stage_config) {
  try {
    for (int k = 1;; ++k) {
      if (sprt_search(stage_config(k), session)) {
        StrategyOutcome out = session.declare_heavy();
        out.stage = k;
        return out;
      }
    }
  } catch (const BudgetExhausted&) {
    return finish_on_budget(session);
  }
}

}  // namespace

StrategyOutcome run_doubling_epsilon(double delta, double alpha, BagSession& session) {
  if (!(delta > 0.0 && delta < 1.0)) throw PreconditionError("doubling requires delta in (0, 1)");
  if (!(alpha > 0.0 && alpha <= 0.5)) throw PreconditionError("doubling requires alpha in (0, 1/2]");
  return run_doubling(session, [&](int k) {
    return SprtConfig::make(doubling_stage_delta(delta, k), alpha, std::ldexp(1.0, -k));
  });
}

StrategyOutcome run_doubling_alpha(double delta, double epsilon, BagSession& session) {
  if (!(delta > 0.0 && delta < 1.0)) throw PreconditionError("doubling requires delta in (0, 1)");
  if (!(epsilon > 0.0 && std::isfinite(epsilon))) {
    throw PreconditionError("doubling requires epsilon > 0");
  }
  return run_doubling(session, [&](int k) {
    return SprtConfig::make(doubling_stage_delta(delta, k), std::ldexp(1.0, -k), epsilon);
  });
}

std::vector<Landmark> landmarks(int level) {
  if (level < 1) throw PreconditionError("landmark level must be >= 1");
  const double budget = std::ldexp(1.0, level);
  std::vector<Landmark> out;
  out.reserve(static_cast<std::size_t>(level));
  for (int k = 0; k < level; ++k) {
    const double a = std::ldexp(1.0, k) / budget;
    out.push_back({a, std::sqrt(1.0 / (2.0 * a * budget))});
  }
  return out;
}

StrategyOutcome run_fully_adaptive(double delta, BagSession& session) {
  if (!(delta > 0.0 && delta < 1.0)) throw PreconditionError("fully adaptive requires delta in (0, 1)");
  try {
    for (int level = 1;; ++level) {
      const double l = static_cast<double>(level);
      const double level_delta = delta / (2.0 * l * l * l);
      const auto marks = landmarks(level);
      for (int k = 0; k < level; ++k) {
        const auto& mark = marks[static_cast<std::size_t>(k)];
        if (sprt_search(SprtConfig::make(level_delta, mark.alpha, mark.epsilon), session)) {
          StrategyOutcome out = session.declare_heavy();
          out.landmark = std::make_pair(level, k);
          return out;
        }
      }
    }
  } catch (const BudgetExhausted&) {
    return finish_on_budget(session);
  }
}

}  // namespace heavycoin
