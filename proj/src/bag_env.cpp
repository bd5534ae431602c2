#include "heavycoin/bag_env.hpp"

#include <ostream>

namespace heavycoin {

std::string_view to_string(EventKind kind) {
  switch (kind) {
    case EventKind::DrawArm: return "draw";
    case EventKind::Sample: return "sample";
    case EventKind::DeclareHeavy: return "declare_heavy";
    case EventKind::DeclareNull: return "declare_null";
    case EventKind::BudgetExhausted: return "budget_exhausted";
  }
  return "unknown";
}

std::string_view to_string(Termination termination) {
  switch (termination) {
    case Termination::DeclaredHeavy: return "declared_heavy";
    case Termination::DeclaredNull: return "declared_null";
    case Termination::BudgetExhausted: return "budget_exhausted";
  }
  return "unknown";
}

void write_trace_jsonl(std::ostream& os, const std::vector<TraceEvent>& trace) {
  for (const auto& e : trace) {
    os << "{\"kind\":\"" << to_string(e.kind) << "\",\"arm\":" << e.arm << ",\"t\":" << e.t
       << "}\n";
  }
}

BagSession::BagSession(MixtureSpec spec, RandomSource rng, SessionOptions options)
    : spec_(spec), rng_(rng), options_(options), heavy_probability_(spec.alpha) {
  if (options_.heavy_probability_override) {
    const double p = *options_.heavy_probability_override;
    if (!(p >= 0.0 && p <= 1.0)) {
      throw PreconditionError("heavy probability override must lie in [0, 1]");
    }
    // The override only relaxes the alpha range; means are still checked.
    MixtureSpec relaxed = spec_;
    relaxed.alpha = 0.0;
    relaxed.validate();
    heavy_probability_ = p;
  } else {
    spec_.validate();
  }
  if (options_.max_total_samples == 0) {
    throw PreconditionError("max_total_samples must be positive");
  }
}

void BagSession::require_live(const char* op) const {
  if (terminated()) throw ProtocolError(std::string(op) + " called after the session terminated");
}

void BagSession::record(EventKind kind, double value) {
  if (options_.record_trace) trace_.push_back({kind, current_arm_, total_samples_, value});
}

std::uint64_t BagSession::draw_next() {
  require_live("draw_next");
  ++arms_drawn_;
  current_arm_ = arms_drawn_;
  current_samples_ = 0;
  current_label_ = draw_label(heavy_probability_, rng_);
  current_mean_ = current_label_ == Label::Heavy ? spec_.theta1 : spec_.theta0;
  record(EventKind::DrawArm);
  return current_arm_;
}

double BagSession::sample_current() {
  require_live("sample_current");
  if (current_arm_ == 0) throw ProtocolError("sample_current called with no arm drawn");
  if (total_samples_ >= options_.max_total_samples) {
    finish(Termination::BudgetExhausted);
    throw BudgetExhausted{};
  }
  const double x = spec_.family.kind() == FamilyKind::Bernoulli
                       ? (rng_.uniform() < current_mean_ ? 1.0 : 0.0)
                       : sample_arm(spec_.family, current_mean_, rng_);
  ++current_samples_;
  ++total_samples_;
  record(EventKind::Sample, x);
  return x;
}

StrategyOutcome& BagSession::finish(Termination termination) {
  switch (termination) {
    case Termination::DeclaredHeavy: record(EventKind::DeclareHeavy); break;
    case Termination::DeclaredNull: record(EventKind::DeclareNull); break;
    case Termination::BudgetExhausted: record(EventKind::BudgetExhausted); break;
  }
  StrategyOutcome out;
  out.termination = termination;
  out.arms_drawn = arms_drawn_;
  out.total_samples = total_samples_;
  if (termination == Termination::DeclaredHeavy) {
    out.declared = current_arm_;
    out.truth = current_label_;
    out.correct = current_label_ == Label::Heavy;
  }
  out.trace = trace_;
  outcome_ = std::move(out);
  return *outcome_;
}

StrategyOutcome BagSession::declare_heavy() {
  require_live("declare_heavy");
  if (current_arm_ == 0) throw ProtocolError("declare_heavy called with no arm drawn");
  return finish(Termination::DeclaredHeavy);
}

StrategyOutcome BagSession::declare_null() {
  require_live("declare_null");
  return finish(Termination::DeclaredNull);
}

const StrategyOutcome& BagSession::outcome() const {
  if (!outcome_) throw ProtocolError("outcome requested from a live session");
  return *outcome_;
}

StrategyOutcome BagSession::take_outcome() {
  if (!outcome_) throw ProtocolError("outcome requested from a live session");
  return std::move(*outcome_);
}

}  // namespace heavycoin
