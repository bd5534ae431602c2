#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>

#include "heavycoin/core_model.hpp"

namespace heavycoin {

/// Divergences that are undefined or unbounded come back as this value. It is
/// produced explicitly, never by floating overflow, so callers can branch on
/// is_infinite_divergence().
inline constexpr double kInfiniteDivergence = std::numeric_limits<double>::infinity();

inline bool is_infinite_divergence(double d) { return d == kInfiniteDivergence; }

/// Raised when numeric integration cannot certify its tolerance.
class NumericFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// KL(P_thetaP | P_thetaQ), natural log.
double kl(const ArmFamily& family, double theta_p, double theta_q);

/// chi^2(P_thetaP | P_thetaQ).
double chi2(const ArmFamily& family, double theta_p, double theta_q);

/// chi^2 between the m-fold products, (1 + chi2)^m - 1.
double chi2_product(const ArmFamily& family, double theta_p, double theta_q, std::uint64_t m);

/// chi^2((1 - alpha) f_theta0 + alpha f_theta1 | f_reference) where f is the
/// m-fold product of the spec's family.
///
/// Bernoulli reduces to the Binomial(m) sufficient statistic and is summed
/// exactly over {0..m}. Gaussian reduces to the sample sum and is integrated
/// with adaptive Gauss-Kronrod to relative error 1e-10; NumericFailure is
/// thrown if the error estimate cannot be certified below 1e-8.
double chi2_mixture_vs_single(const MixtureSpec& spec, std::uint64_t m, double reference_theta);

/// Single-parameter exponential family for the sufficient statistic of m
/// iid draws: f_theta(x) = h(x) exp(eta(theta) x - b(eta(theta))).
///
/// Binomial(m): eta = logit(theta), b(v) = m log(1 + e^v), mean m theta.
/// Gaussian(sigma, m) on the sum: eta = theta / sigma^2,
/// b(v) = m sigma^2 v^2 / 2, mean m theta.
class ExpFamily {
 public:
  static ExpFamily binomial(std::uint64_t m);
  static ExpFamily gaussian(double sigma, std::uint64_t m);

  /// Binomial for Bernoulli arms, Gaussian for Gaussian arms; throws otherwise.
  static ExpFamily for_arms(const ArmFamily& family, std::uint64_t m);

  double eta(double theta) const;
  double eta_inv(double nu) const;
  double log_partition(double nu) const;
  double mean_map(double nu) const;
  double mean_map_inv(double x) const;

  /// Centered moments of the sufficient statistic under theta.
  double moment2(double theta) const;
  double moment4(double theta) const;

  /// phi_x(mean_map_inv(x)): the density at x of the member whose mean is x.
  /// Binomial extends the pmf to real x through Gamma functions.
  double envelope(double x) const;

  bool is_binomial() const { return binomial_; }
  std::uint64_t m() const { return m_; }

 private:
  ExpFamily(bool binomial, double sigma, std::uint64_t m) : binomial_(binomial), sigma_(sigma), m_(m) {}

  bool binomial_;
  double sigma_;
  std::uint64_t m_;
};

/// The constants of the exponential-family chi^2 bound for a mixture against
/// its geometric mixture point theta_star.
struct Theorem3Constants {
  double theta_star = 0.0;
  double theta_minus = 0.0;
  double theta_plus = 0.0;
  double kappa = 0.0;
  double gamma_envelope = 0.0;
  double c = 0.0;
  /// Right-hand side c * (alpha (1 - alpha) (eta1 - eta0)^2 / 2)^2.
  double chi2_bound = 0.0;
};

/// theta_star = eta^{-1}((1 - alpha) eta(theta0) + alpha eta(theta1)).
double geometric_mixture_point(const MixtureSpec& spec);

/// Evaluates theta_star, theta_minus, theta_plus, kappa, gamma and c for the
/// m-fold Bernoulli (Binomial) or Gaussian family.
Theorem3Constants theorem3_constants(const MixtureSpec& spec, std::uint64_t m);

/// Minimiser and maximiser of theta (1 - theta) over [theta0, theta1].
struct VarianceExtremes {
  double theta_low;
  double theta_high;
};
VarianceExtremes bernoulli_variance_extremes(double theta0, double theta1);

}  // namespace heavycoin
