#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "heavycoin/random.hpp"

namespace heavycoin {

/// Raised when an input violates a stated precondition. The message names the
/// violated condition.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class FamilyKind { Bernoulli, Gaussian, BoundedBeta };

/// Single-parameter arm family indexed by its mean.
///
/// Gaussian carries a known standard deviation. BoundedBeta draws
/// Beta(c * theta, c * (1 - theta)) so samples stay in [0, 1] with mean theta.
class ArmFamily {
 public:
  static ArmFamily bernoulli() { return ArmFamily(FamilyKind::Bernoulli, 0.0); }
  static ArmFamily gaussian(double sigma);
  static ArmFamily bounded_beta(double concentration);

  /// Parses "bernoulli", "gaussian" or "beta"; `scale` is sigma or concentration.
  static ArmFamily parse(std::string_view name, double scale = 1.0);

  FamilyKind kind() const { return kind_; }
  double sigma() const;
  double concentration() const;
  std::string_view name() const;

  /// Whether `theta` is a legal mean for this family.
  bool admits(double theta) const;

  friend bool operator==(const ArmFamily&, const ArmFamily&) = default;

 private:
  ArmFamily(FamilyKind kind, double scale) : kind_(kind), scale_(scale) {}

  FamilyKind kind_;
  double scale_;
};

/// One problem instance: heavy arms with mean theta1 appear with probability
/// alpha, light arms with mean theta0 otherwise.
struct MixtureSpec {
  double alpha = 0.0;
  double theta0 = 0.0;
  double theta1 = 0.0;
  ArmFamily family = ArmFamily::bernoulli();

  /// Builds and validates.
  static MixtureSpec make(double alpha, double theta0, double theta1,
                          ArmFamily family = ArmFamily::bernoulli());

  /// Throws PreconditionError if alpha is outside [0, 1/2], theta0 >= theta1,
  /// or a mean is illegal for the family. Bernoulli accepts the closed [0, 1]
  /// so point-mass coins are expressible; beta needs the open interval.
  void validate() const;

  double gap() const { return theta1 - theta0; }
};

enum class Label { Light, Heavy };

std::string_view to_string(Label label);

/// Heavy with probability spec.alpha.
Label draw_label(const MixtureSpec& spec, RandomSource& rng);

/// Label draw with an explicit heavy probability in [0, 1].
Label draw_label(double heavy_probability, RandomSource& rng);

/// One observation from the arm with mean `theta`.
double sample_arm(const ArmFamily& family, double theta, RandomSource& rng);

/// Upper tail of the standard normal, Q(x) = P(Z > x).
double gaussian_tail_q(double x);

}  // namespace heavycoin
