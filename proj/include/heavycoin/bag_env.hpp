#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string_view>
#include <utility>
#include <vector>

#include "heavycoin/core_model.hpp"
#include "heavycoin/random.hpp"

namespace heavycoin {

enum class EventKind { DrawArm, Sample, DeclareHeavy, DeclareNull, BudgetExhausted };

std::string_view to_string(EventKind kind);

struct TraceEvent {
  EventKind kind;
  std::uint64_t arm;  ///< 1-based arm index; 0 before any draw.
  std::uint64_t t;    ///< Cumulative samples at the time of the event.
  double value = 0.0; ///< Observation for Sample events.
};

/// Writes one JSON object per line: {"kind":..., "arm":..., "t":...}.
void write_trace_jsonl(std::ostream& os, const std::vector<TraceEvent>& trace);

enum class Termination { DeclaredHeavy, DeclaredNull, BudgetExhausted };

std::string_view to_string(Termination termination);

/// Terminal report of a session.
struct StrategyOutcome {
  Termination termination = Termination::DeclaredNull;
  std::optional<std::uint64_t> declared;  ///< Declared arm index, if any.
  std::optional<Label> truth;             ///< Hidden label of the declared arm.
  std::optional<bool> correct;            ///< Null iff nothing was declared.
  std::uint64_t arms_drawn = 0;           ///< N
  std::uint64_t total_samples = 0;        ///< T
  std::optional<int> stage;               ///< Doubling stage k.
  std::optional<std::pair<int, int>> landmark;  ///< (level, k) of the landmark grid.
  std::vector<TraceEvent> trace;          ///< Empty unless tracing was requested.
};

/// Raised by a protocol violation (sampling with no arm out, acting after the
/// session terminated).
class ProtocolError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Thrown by sample_current() when the sample budget is spent. The session has
/// already recorded its BudgetExhausted terminal event when this propagates.
struct BudgetExhausted {};

struct SessionOptions {
  std::uint64_t max_total_samples = 100'000'000;
  bool record_trace = false;
  /// Replaces spec.alpha when drawing labels; test instances may set 1.
  std::optional<double> heavy_probability_override;
};

/// The one-coin-at-a-time environment. Only the most recently drawn arm can be
/// sampled or declared; drawing a new arm returns the previous one to the bag
/// for good. Drawing is free, every sample costs one unit of T.
class BagSession {
 public:
  BagSession(MixtureSpec spec, RandomSource rng, SessionOptions options = {});

  /// Draws the next arm and returns its 1-based index.
  std::uint64_t draw_next();

  /// Samples the current arm.
  double sample_current();

  StrategyOutcome declare_heavy();
  StrategyOutcome declare_null();

  bool terminated() const { return outcome_.has_value(); }
  bool has_current_arm() const { return current_arm_ != 0; }
  std::uint64_t current_arm() const { return current_arm_; }
  std::uint64_t current_samples() const { return current_samples_; }
  std::uint64_t arms_drawn() const { return arms_drawn_; }
  std::uint64_t total_samples() const { return total_samples_; }
  std::uint64_t max_total_samples() const { return options_.max_total_samples; }
  const MixtureSpec& spec() const { return spec_; }
  const std::vector<TraceEvent>& trace() const { return trace_; }

  /// The terminal outcome; throws if the session is still live.
  const StrategyOutcome& outcome() const;
  StrategyOutcome take_outcome();

 private:
  void require_live(const char* op) const;
  void record(EventKind kind, double value = 0.0);
  StrategyOutcome& finish(Termination termination);

  MixtureSpec spec_;
  RandomSource rng_;
  SessionOptions options_;
  double heavy_probability_;
  std::uint64_t current_arm_ = 0;
  Label current_label_ = Label::Light;
  double current_mean_ = 0.0;
  std::uint64_t current_samples_ = 0;
  std::uint64_t arms_drawn_ = 0;
  std::uint64_t total_samples_ = 0;
  std::vector<TraceEvent> trace_;
  std::optional<StrategyOutcome> outcome_;
};

}  // namespace heavycoin
