#include "heavycoin/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "heavycoin/random.hpp"
#include "heavycoin/strategies.hpp"

namespace heavycoin {

namespace {

struct StrategyName {
  StrategyKind kind;
  std::string_view name;
};

constexpr StrategyName kStrategyNames[] = {
    {StrategyKind::FixedSample, "fixed-sample"},
    {StrategyKind::AdaptiveSprt, "adaptive-sprt"},
    {StrategyKind::DoublingEpsilon, "doubling-epsilon"},
    {StrategyKind::DoublingAlpha, "doubling-alpha"},
    {StrategyKind::FullyAdaptive, "fully-adaptive"},
};

std::string fmt_real(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::string fmt_uint(std::uint64_t x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%" PRIu64, x);
  return buf;
}

unsigned resolve_threads(unsigned requested, std::uint64_t work) {
  unsigned t = requested != 0 ? requested : std::max(1u, std::thread::hardware_concurrency());
  return static_cast<unsigned>(std::min<std::uint64_t>(t, std::max<std::uint64_t>(work, 1)));
}

/// Calls fn(i) for i in [0, n) across `threads` workers. The first exception
/// thrown by any worker is rethrown.
template <typename Fn>
void parallel_for(std::uint64_t n, unsigned threads, Fn fn) {
  if (threads <= 1) {
    for (std::uint64_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::uint64_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (;;) {
      const std::uint64_t i = next.fetch_add(1);
      if (i >= n || failed.load()) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        failed = true;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace

std::string_view to_string(StrategyKind kind) {
  for (const auto& s : kStrategyNames) {
    if (s.kind == kind) return s.name;
  }
  return "?";
}

StrategyKind parse_strategy(std::string_view name) {
  for (const auto& s : kStrategyNames) {
    if (s.name == name) return s.kind;
  }
  throw PreconditionError("unknown strategy '" + std::string(name) + "'");
}

const std::vector<StrategyKind>& all_strategies() {
  static const std::vector<StrategyKind> kinds = {
      StrategyKind::FixedSample, StrategyKind::AdaptiveSprt, StrategyKind::DoublingEpsilon,
      StrategyKind::DoublingAlpha, StrategyKind::FullyAdaptive};
  return kinds;
}

void ExperimentConfig::validate() const {
  spec.validate();
  if (trials < 1) throw PreconditionError("trials >= 1 is required");
  if (max_total_samples < 1) throw PreconditionError("max_total_samples >= 1 is required");
  if (!(strategy.delta > 0.0 && strategy.delta < 1.0)) {
    throw PreconditionError("delta must lie in (0, 1)");
  }
  if (heavy_probability_override &&
      !(*heavy_probability_override >= 0.0 && *heavy_probability_override <= 1.0)) {
    throw PreconditionError("heavy probability override must lie in [0, 1]");
  }
  const bool needs_alpha = strategy.kind == StrategyKind::FixedSample ||
                           strategy.kind == StrategyKind::AdaptiveSprt ||
                           strategy.kind == StrategyKind::DoublingEpsilon;
  if (needs_alpha && !strategy.alpha0 && !(spec.alpha > 0.0)) {
    throw PreconditionError("alpha > 0 is required by " + std::string(to_string(strategy.kind)));
  }
}

StrategyOutcome run_trial(const ExperimentConfig& cfg, std::uint64_t index, bool record_trace) {
  SessionOptions opts;
  opts.max_total_samples = cfg.max_total_samples;
  opts.record_trace = record_trace;
  opts.heavy_probability_override = cfg.heavy_probability_override;
  BagSession session(cfg.spec, RandomSource(cfg.base_seed, index), opts);

  const StrategyParams& p = cfg.strategy;
  const double alpha = p.alpha0.value_or(cfg.spec.alpha);
  const double theta0 = p.theta0.value_or(cfg.spec.theta0);
  const double theta1 = p.theta1.value_or(cfg.spec.theta1);
  const double epsilon = p.epsilon0.value_or(theta1 - theta0);
  switch (p.kind) {
    case StrategyKind::FixedSample:
      return run_fixed_sample(FixedSampleConfig::make(alpha, theta0, theta1, p.delta), session);
    case StrategyKind::AdaptiveSprt:
      return run_adaptive_sprt(SprtConfig::make(p.delta, alpha, epsilon), session);
    case StrategyKind::DoublingEpsilon:
      return run_doubling_epsilon(p.delta, alpha, session);
    case StrategyKind::DoublingAlpha:
      return run_doubling_alpha(p.delta, epsilon, session);
    case StrategyKind::FullyAdaptive:
      return run_fully_adaptive(p.delta, session);
  }
  throw std::logic_error("unhandled strategy");
}

TrialCategory categorize(const StrategyOutcome& outcome) {
  switch (outcome.termination) {
    case Termination::DeclaredHeavy:
      return outcome.correct.value_or(false) ? TrialCategory::Success : TrialCategory::LightError;
    case Termination::DeclaredNull: return TrialCategory::Null;
    case Termination::BudgetExhausted: return TrialCategory::Budget;
  }
  return TrialCategory::Null;
}

double wilson_radius(std::uint64_t count, std::uint64_t n, double z) {
  if (n == 0) return 0.0;
  const double nd = static_cast<double>(n);
  const double p = static_cast<double>(count) / nd;
  const double z2 = z * z;
  return z / (1.0 + z2 / nd) * std::sqrt(p * (1.0 - p) / nd + z2 / (4.0 * nd * nd));
}

TrialBatchResult run_batch(const ExperimentConfig& cfg) {
  cfg.validate();
  // Surface configuration errors once, before spawning workers.
  {
    ExperimentConfig probe = cfg;
    probe.max_total_samples = 1;
    (void)run_trial(probe, 0);
  }

  TrialBatchResult r;
  r.trials = cfg.trials;
  r.records.resize(cfg.trials);
  parallel_for(cfg.trials, resolve_threads(cfg.threads, cfg.trials), [&](std::uint64_t i) {
    const bool trace = cfg.trace_first_trial && i == 0;
    StrategyOutcome out = run_trial(cfg, i, trace);
    TrialRecord& rec = r.records[i];
    rec.category = categorize(out);
    rec.arms_drawn = out.arms_drawn;
    rec.total_samples = out.total_samples;
    rec.stage = out.stage;
    rec.landmark = out.landmark;
    if (trace) r.first_trace = std::move(out.trace);
  });

  double sum_t = 0.0;
  double sum_n = 0.0;
  for (const auto& rec : r.records) {
    switch (rec.category) {
      case TrialCategory::Success: ++r.success_count; break;
      case TrialCategory::LightError: ++r.light_error_count; break;
      case TrialCategory::Null: ++r.null_count; break;
      case TrialCategory::Budget: ++r.budget_count; break;
    }
    sum_t += static_cast<double>(rec.total_samples);
    sum_n += static_cast<double>(rec.arms_drawn);
    r.max_T = std::max(r.max_T, rec.total_samples);
    r.max_N = std::max(r.max_N, rec.arms_drawn);
  }
  const double n = static_cast<double>(r.trials);
  r.mean_T = sum_t / n;
  r.mean_N = sum_n / n;
  if (r.trials > 1) {
    double ss = 0.0;
    for (const auto& rec : r.records) {
      const double d = static_cast<double>(rec.total_samples) - r.mean_T;
      ss += d * d;
    }
    r.stddev_T = std::sqrt(ss / (n - 1.0));
  }
  r.ci_success = wilson_radius(r.success_count, r.trials);
  r.ci_light_error = wilson_radius(r.light_error_count, r.trials);
  r.ci_null = wilson_radius(r.null_count, r.trials);
  r.ci_budget = wilson_radius(r.budget_count, r.trials);
  return r;
}

std::string csv_header() {
  return "strategy,family,alpha,theta0,theta1,delta,trials,success_rate,light_error_rate,"
         "null_rate,budget_rate,mean_T,stddev_T,mean_N,ci_success,base_seed";
}

std::string csv_row(const ExperimentConfig& cfg, const TrialBatchResult& r) {
  std::string row;
  auto add = [&row](const std::string& field) {
    if (!row.empty()) row += ',';
    row += field;
  };
  add(std::string(to_string(cfg.strategy.kind)));
  add(std::string(cfg.spec.family.name()));
  add(fmt_real(cfg.spec.alpha));
  add(fmt_real(cfg.spec.theta0));
  add(fmt_real(cfg.spec.theta1));
  add(fmt_real(cfg.strategy.delta));
  add(fmt_uint(r.trials));
  add(fmt_real(r.success_rate()));
  add(fmt_real(r.light_error_rate()));
  add(fmt_real(r.null_rate()));
  add(fmt_real(r.budget_rate()));
  add(fmt_real(r.mean_T));
  add(fmt_real(r.stddev_T));
  add(fmt_real(r.mean_N));
  add(fmt_real(r.ci_success));
  add(fmt_uint(cfg.base_seed));
  return row;
}

void write_csv_file(const std::string& path, const std::vector<std::string>& rows) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << csv_header() << '\n';
  for (const auto& row : rows) out << row << '\n';
  out.flush();
  if (!out) throw std::runtime_error("write to " + path + " failed");
}

std::vector<SweepRow> sweep(const SweepConfig& cfg) {
  if (cfg.points.empty()) throw PreconditionError("sweep grid must be nonempty");
  if (cfg.strategies.empty()) throw PreconditionError("sweep needs at least one strategy");
  std::vector<SweepRow> rows;
  rows.reserve(cfg.points.size() * cfg.strategies.size());
  for (const auto& pt : cfg.points) {
    if (!(pt.epsilon > 0.0)) throw PreconditionError("sweep epsilon must be > 0");
    const MixtureSpec spec = MixtureSpec::make(pt.alpha, cfg.center - pt.epsilon / 2.0,
                                               cfg.center + pt.epsilon / 2.0, cfg.family);
    for (auto kind : cfg.strategies) {
      ExperimentConfig ec;
      ec.spec = spec;
      ec.strategy.kind = kind;
      ec.strategy.delta = cfg.delta;
      ec.trials = cfg.trials;
      ec.base_seed = cfg.base_seed;
      ec.max_total_samples = cfg.max_total_samples;
      ec.threads = cfg.threads;
      TrialBatchResult result = run_batch(ec);
      rows.push_back({std::move(ec), std::move(result)});
    }
  }
  return rows;
}

WalkDistribution parse_walk(std::string_view name) {
  if (name == "rademacher") return WalkDistribution::Rademacher;
  if (name == "uniform") return WalkDistribution::Uniform;
  if (name == "zero") return WalkDistribution::Zero;
  throw PreconditionError("walk must be rademacher, uniform or zero, got '" + std::string(name) +
                          "'");
}

std::string_view to_string(WalkDistribution w) {
  switch (w) {
    case WalkDistribution::Rademacher: return "rademacher";
    case WalkDistribution::Uniform: return "uniform";
    case WalkDistribution::Zero: return "zero";
  }
  return "?";
}

std::uint64_t default_lemma_horizon(double slope, double offset) {
  if (!(slope > 0.0 && offset > 0.0)) throw PreconditionError("slope and offset must be > 0");
  return static_cast<std::uint64_t>(std::ceil(16.0 * offset / slope));
}

LemmaProbeResult probe_lemma1(double slope, double offset, WalkDistribution walk,
                              std::uint64_t horizon, std::uint64_t trials, std::uint64_t seed) {
  if (!(slope > 0.0 && offset > 0.0)) throw PreconditionError("slope and offset must be > 0");
  if (!(slope * offset >= 1.0)) throw PreconditionError("slope * offset >= 1 is required");
  if (horizon < 1) throw PreconditionError("horizon >= 1 is required");
  if (trials < 1) throw PreconditionError("trials >= 1 is required");

  LemmaProbeResult r;
  r.trials = trials;
  r.horizon = horizon;
  r.bound = 7.0 * std::exp(-slope * offset / 2.0);

  const double hd = static_cast<double>(horizon);
  // Increments never exceed 1/2, so from step n the walk gains at most
  // (horizon - n) / 2 and the line gains slope (horizon - n).
  const bool reachable = walk != WalkDistribution::Zero && slope < 0.5;
  const double final_line = slope * hd + offset;
  if (reachable) {
    for (std::uint64_t i = 0; i < trials; ++i) {
      RandomSource rng(seed, i);
      double s = 0.0;
      std::uint64_t bits = 0;
      int bits_left = 0;
      for (std::uint64_t n = 1; n <= horizon; ++n) {
        if (walk == WalkDistribution::Rademacher) {
          if (bits_left == 0) {
            bits = rng.next_u64();
            bits_left = 64;
          }
          s += (bits & 1u) ? 0.5 : -0.5;
          bits >>= 1;
          --bits_left;
        } else {
          s += rng.uniform() - 0.5;
        }
        const double nd = static_cast<double>(n);
        if (s >= slope * nd + offset) {
          ++r.crossings;
          break;
        }
        if (s + 0.5 * (hd - nd) < final_line) break;
      }
    }
  }
  r.estimate = static_cast<double>(r.crossings) / static_cast<double>(trials);
  r.ci_radius = wilson_radius(r.crossings, trials);
  return r;
}

}  // namespace heavycoin
