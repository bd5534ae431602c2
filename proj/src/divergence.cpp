#include "heavycoin/divergence.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/digamma.hpp>

namespace heavycoin {

namespace {

constexpr double kQuadratureTolerance = 1e-10;
constexpr double kQuadratureCertified = 1e-8;
constexpr double kGaussianHalfWidth = 12.0;

double xlogy(double x, double y) { return x == 0.0 ? 0.0 : x * std::log(y); }

double log_beta_fn(double a, double b) { return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b); }

void require_theta(const ArmFamily& family, double theta) {
  if (!family.admits(theta)) {
    throw PreconditionError("parameter " + std::to_string(theta) + " is not valid for the " +
                            std::string(family.name()) + " family");
  }
}

// log |r - 1| with r = (1 - alpha) e^{d0} + alpha e^{d1}; -inf when r == 1.
template <typename T>
T log_abs_ratio_minus_one(T d0, T d1, T alpha) {
  const T inf = std::numeric_limits<T>::infinity();
  const T hi = std::max(d0, d1);
  if (hi > T(30)) {
    const T a = alpha < T(1) ? std::log1p(-alpha) + d0 : -inf;
    const T b = alpha > T(0) ? std::log(alpha) + d1 : -inf;
    const T top = std::max(a, b);
    const T log_r = top + std::log(std::exp(a - top) + std::exp(b - top));
    if (log_r > T(1e-3)) return log_r + std::log1p(-std::exp(-log_r));
  }
  const T v = (T(1) - alpha) * std::expm1(d0) + alpha * std::expm1(d1);
  return v == T(0) ? -inf : std::log(std::fabs(v));
}

// Log-likelihood ratio of x successes in m trials under theta against ref.
// Both must lie strictly inside (0, 1).
long double log_binomial_ratio(std::uint64_t m, std::uint64_t x, long double theta, long double ref) {
  const auto xd = static_cast<long double>(x);
  const auto rest = static_cast<long double>(m - x);
  long double out = 0.0L;
  if (x > 0) out += xd * (std::log(theta) - std::log(ref));
  if (m > x) out += rest * (std::log1p(-theta) - std::log1p(-ref));
  return out;
}

long double log_binomial_pmf(std::uint64_t m, std::uint64_t x, long double theta) {
  const auto md = static_cast<long double>(m);
  const auto xd = static_cast<long double>(x);
  if (theta == 0.0L) return x == 0 ? 0.0L : -INFINITY;
  if (theta == 1.0L) return x == m ? 0.0L : -INFINITY;
  return std::lgamma(md + 1.0L) - std::lgamma(xd + 1.0L) - std::lgamma(md - xd + 1.0L) +
         xd * std::log(theta) + (md - xd) * std::log1p(-theta);
}

// Exact finite sum over x = 0..m, carried in extended precision.
double binomial_mixture_chi2(const MixtureSpec& spec, std::uint64_t m, double ref_in) {
  const long double alpha = spec.alpha;
  const long double t0 = spec.theta0;
  const long double t1 = spec.theta1;
  const long double ref = ref_in;
  const bool interior = ref > 0.0L && ref < 1.0L;
  long double sum = 0.0L;
  for (std::uint64_t x = 0; x <= m; ++x) {
    const long double lr = log_binomial_pmf(m, x, ref);
    if (lr == -INFINITY) {
      const long double mixture = (1.0L - alpha) * std::exp(log_binomial_pmf(m, x, t0)) +
                                  alpha * std::exp(log_binomial_pmf(m, x, t1));
      if (mixture > 0.0L) return kInfiniteDivergence;
      continue;
    }
    long double d0, d1;
    if (interior && t0 > 0.0L && t0 < 1.0L && t1 > 0.0L && t1 < 1.0L) {
      d0 = log_binomial_ratio(m, x, t0, ref);
      d1 = log_binomial_ratio(m, x, t1, ref);
    } else {
      d0 = log_binomial_pmf(m, x, t0) - lr;
      d1 = log_binomial_pmf(m, x, t1) - lr;
    }
    const long double log_dev = log_abs_ratio_minus_one(d0, d1, alpha);
    if (log_dev != -INFINITY) sum += std::exp(lr + 2.0L * log_dev);
  }
  return static_cast<double>(sum);
}

double gaussian_mixture_chi2(const MixtureSpec& spec, std::uint64_t m, double ref) {
  const double s = spec.family.sigma() / std::sqrt(static_cast<double>(m));
  const double two_s2 = 2.0 * s * s;
  const double log_norm = std::log(s * std::sqrt(2.0 * std::numbers::pi));
  const double alpha = spec.alpha;
  const double t0 = spec.theta0;
  const double t1 = spec.theta1;

  auto integrand = [&](double x) {
    const double qr = (x - ref) * (x - ref);
    const double d0 = (qr - (x - t0) * (x - t0)) / two_s2;
    const double d1 = (qr - (x - t1) * (x - t1)) / two_s2;
    const double log_dev = log_abs_ratio_minus_one<double>(d0, d1, alpha);
    if (log_dev == -INFINITY) return 0.0;
    return std::exp(-qr / two_s2 - log_norm + 2.0 * log_dev);
  };

  std::vector<double> knots{t0, t1, ref, 2.0 * t0 - ref, 2.0 * t1 - ref, t0 + t1 - ref};
  std::sort(knots.begin(), knots.end());
  const double lo = knots.front() - kGaussianHalfWidth * s;
  const double hi = knots.back() + kGaussianHalfWidth * s;

  // Panels no wider than two standard deviations keep every bump resolved.
  std::vector<double> edges{lo};
  for (double k : knots) {
    if (k > edges.back()) edges.push_back(k);
  }
  edges.push_back(hi);
  std::vector<double> panels{edges.front()};
  for (std::size_t i = 1; i < edges.size(); ++i) {
    const double a = edges[i - 1];
    const double b = edges[i];
    const auto pieces = static_cast<int>(std::ceil((b - a) / (2.0 * s)));
    for (int j = 1; j <= pieces; ++j) panels.push_back(a + (b - a) * j / pieces);
  }

  using Kronrod = boost::math::quadrature::gauss_kronrod<double, 61>;
  double total = 0.0;
  double total_error = 0.0;
  for (std::size_t i = 1; i < panels.size(); ++i) {
    double error = 0.0;
    total += Kronrod::integrate(integrand, panels[i - 1], panels[i], 15, kQuadratureTolerance, &error);
    total_error += error;
  }
  if (!std::isfinite(total) || total_error > kQuadratureCertified * std::fabs(total) + 1e-15) {
    throw NumericFailure("gaussian chi2 quadrature did not converge (error estimate " +
                         std::to_string(total_error) + ")");
  }
  return total;
}

}  // namespace

double kl(const ArmFamily& family, double p, double q) {
  require_theta(family, p);
  require_theta(family, q);
  if (p == q) return 0.0;
  switch (family.kind()) {
    case FamilyKind::Bernoulli:
      if (q == 0.0 || q == 1.0) return kInfiniteDivergence;
      return xlogy(p, p / q) + xlogy(1.0 - p, (1.0 - p) / (1.0 - q));
    case FamilyKind::Gaussian: {
      const double s = family.sigma();
      return (p - q) * (p - q) / (2.0 * s * s);
    }
    case FamilyKind::BoundedBeta: {
      using boost::math::digamma;
      const double c = family.concentration();
      const double a1 = c * p, b1 = c * (1.0 - p);
      const double a2 = c * q, b2 = c * (1.0 - q);
      return log_beta_fn(a2, b2) - log_beta_fn(a1, b1) + (a1 - a2) * digamma(a1) +
             (b1 - b2) * digamma(b1) + (a2 - a1 + b2 - b1) * digamma(a1 + b1);
    }
  }
  throw std::logic_error("unreachable family kind");
}

double chi2(const ArmFamily& family, double p, double q) {
  require_theta(family, p);
  require_theta(family, q);
  if (p == q) return 0.0;
  switch (family.kind()) {
    case FamilyKind::Bernoulli:
      if (q == 0.0 || q == 1.0) return kInfiniteDivergence;
      return (p - q) * (p - q) / (q * (1.0 - q));
    case FamilyKind::Gaussian: {
      const double s = family.sigma();
      const double z = (p - q) * (p - q) / (s * s);
      if (z > 700.0) return kInfiniteDivergence;
      return std::expm1(z);
    }
    case FamilyKind::BoundedBeta: {
      const double c = family.concentration();
      const double a1 = c * p, b1 = c * (1.0 - p);
      const double a2 = c * q, b2 = c * (1.0 - q);
      const double a = 2.0 * a1 - a2;
      const double b = 2.0 * b1 - b2;
      if (a <= 0.0 || b <= 0.0) return kInfiniteDivergence;
      const double log_moment = log_beta_fn(a, b) + log_beta_fn(a2, b2) - 2.0 * log_beta_fn(a1, b1);
      if (log_moment > 700.0) return kInfiniteDivergence;
      return std::expm1(log_moment);
    }
  }
  throw std::logic_error("unreachable family kind");
}

double chi2_product(const ArmFamily& family, double p, double q, std::uint64_t m) {
  if (m == 0) throw PreconditionError("chi2_product requires m >= 1");
  const double single = chi2(family, p, q);
  if (is_infinite_divergence(single)) return kInfiniteDivergence;
  long double base = single;
  if (family.kind() == FamilyKind::Bernoulli) {
    const long double lp = p, lq = q;
    base = (lp - lq) * (lp - lq) / (lq * (1.0L - lq));
  }
  const long double log_growth = static_cast<long double>(m) * std::log1p(base);
  if (log_growth > 700.0L) return kInfiniteDivergence;
  return static_cast<double>(std::expm1(log_growth));
}

double chi2_mixture_vs_single(const MixtureSpec& spec, std::uint64_t m, double reference_theta) {
  spec.validate();
  if (m == 0) throw PreconditionError("chi2_mixture_vs_single requires m >= 1");
  require_theta(spec.family, reference_theta);
  switch (spec.family.kind()) {
    case FamilyKind::Bernoulli: return binomial_mixture_chi2(spec, m, reference_theta);
    case FamilyKind::Gaussian: return gaussian_mixture_chi2(spec, m, reference_theta);
    case FamilyKind::BoundedBeta: break;
  }
  throw PreconditionError("chi2_mixture_vs_single supports bernoulli and gaussian families only");
}

ExpFamily ExpFamily::binomial(std::uint64_t m) {
  if (m == 0) throw PreconditionError("binomial family requires m >= 1");
  return ExpFamily(true, 0.0, m);
}

ExpFamily ExpFamily::gaussian(double sigma, std::uint64_t m) {
  if (m == 0) throw PreconditionError("gaussian family requires m >= 1");
  if (!(sigma > 0.0)) throw PreconditionError("gaussian family requires sigma > 0");
  return ExpFamily(false, sigma, m);
}

ExpFamily ExpFamily::for_arms(const ArmFamily& family, std::uint64_t m) {
  switch (family.kind()) {
    case FamilyKind::Bernoulli: return binomial(m);
    case FamilyKind::Gaussian: return gaussian(family.sigma(), m);
    case FamilyKind::BoundedBeta: break;
  }
  throw PreconditionError("exponential-family machinery supports bernoulli and gaussian only");
}

double ExpFamily::eta(double theta) const {
  if (binomial_) return std::log(theta) - std::log1p(-theta);
  return theta / (sigma_ * sigma_);
}

double ExpFamily::eta_inv(double nu) const {
  if (binomial_) return 1.0 / (1.0 + std::exp(-nu));
  return nu * sigma_ * sigma_;
}

double ExpFamily::log_partition(double nu) const {
  const double md = static_cast<double>(m_);
  if (binomial_) {
    // Softplus without overflow.
    return md * (nu > 0.0 ? nu + std::log1p(std::exp(-nu)) : std::log1p(std::exp(nu)));
  }
  return md * sigma_ * sigma_ * nu * nu / 2.0;
}

double ExpFamily::mean_map(double nu) const {
  const double md = static_cast<double>(m_);
  if (binomial_) return md / (1.0 + std::exp(-nu));
  return md * sigma_ * sigma_ * nu;
}

double ExpFamily::mean_map_inv(double x) const {
  const double md = static_cast<double>(m_);
  if (binomial_) return eta(x / md);
  return x / (md * sigma_ * sigma_);
}

double ExpFamily::moment2(double theta) const {
  const double md = static_cast<double>(m_);
  if (binomial_) return md * theta * (1.0 - theta);
  return md * sigma_ * sigma_;
}

double ExpFamily::moment4(double theta) const {
  const double md = static_cast<double>(m_);
  if (binomial_) {
    const double v = theta * (1.0 - theta);
    return md * v * (3.0 * v * (md - 2.0) + 1.0);
  }
  const double var = md * sigma_ * sigma_;
  return 3.0 * var * var;
}

double ExpFamily::envelope(double x) const {
  const double md = static_cast<double>(m_);
  if (!binomial_) return 1.0 / std::sqrt(2.0 * std::numbers::pi * md * sigma_ * sigma_);
  if (x < 0.0 || x > md) return 0.0;
  const double theta = x / md;
  return std::exp(std::lgamma(md + 1.0) - std::lgamma(x + 1.0) - std::lgamma(md - x + 1.0) +
                  xlogy(x, theta) + xlogy(md - x, 1.0 - theta));
}

VarianceExtremes bernoulli_variance_extremes(double theta0, double theta1) {
  const double lo = std::min(theta0, theta1);
  const double hi = std::max(theta0, theta1);
  // theta (1 - theta) is concave and symmetric about 1/2.
  const double far = std::fabs(lo - 0.5) >= std::fabs(hi - 0.5) ? lo : hi;
  double near;
  if (lo <= 0.5 && 0.5 <= hi) {
    near = 0.5;
  } else {
    near = std::fabs(lo - 0.5) < std::fabs(hi - 0.5) ? lo : hi;
  }
  return {far, near};
}

double geometric_mixture_point(const MixtureSpec& spec) {
  spec.validate();
  const ExpFamily ef = ExpFamily::for_arms(spec.family, 1);
  return ef.eta_inv((1.0 - spec.alpha) * ef.eta(spec.theta0) + spec.alpha * ef.eta(spec.theta1));
}

Theorem3Constants theorem3_constants(const MixtureSpec& spec, std::uint64_t m) {
  spec.validate();
  const ExpFamily ef = ExpFamily::for_arms(spec.family, m);
  const double alpha = spec.alpha;
  const double md = static_cast<double>(m);
  const double eta0 = ef.eta(spec.theta0);
  const double eta1 = ef.eta(spec.theta1);
  const double eta_gap = eta1 - eta0;
  const double eta_star = (1.0 - alpha) * eta0 + alpha * eta1;
  const double eta_minus = eta0 - alpha * eta_gap;
  const double eta_plus = eta1 + (1.0 - alpha) * eta_gap;

  Theorem3Constants out;
  out.theta_star = ef.eta_inv(eta_star);
  out.theta_minus = ef.eta_inv(eta_minus);
  out.theta_plus = ef.eta_inv(eta_plus);

  const double gap = spec.gap();
  double sup_m2;
  if (ef.is_binomial()) {
    const double v_star = out.theta_star * (1.0 - out.theta_star);
    const auto [theta_low, theta_high] = bernoulli_variance_extremes(spec.theta0, spec.theta1);
    out.kappa = md * gap * gap / v_star;
    out.gamma_envelope = 2.0 / std::sqrt(md * theta_low * (1.0 - theta_low));
    sup_m2 = ef.moment2(theta_high);
  } else {
    const double sigma = spec.family.sigma();
    out.kappa = md * gap * gap / (sigma * sigma);
    out.gamma_envelope = ef.envelope(0.0);
    sup_m2 = ef.moment2(spec.theta0);
  }

  const double spread = ef.mean_map(eta_plus) - ef.mean_map(eta_minus);
  const double g = out.gamma_envelope;
  out.c = std::exp(out.kappa) *
          (sup_m2 * sup_m2 * (2.0 + g * spread) + 8.0 * ef.moment4(out.theta_minus) +
           8.0 * ef.moment4(out.theta_plus) + 16.0 * std::pow(spread, 4) +
           0.4 * g * std::pow(spread, 5));
  const double core = 0.5 * alpha * (1.0 - alpha) * eta_gap * eta_gap;
  out.chi2_bound = out.c * core * core;
  return out;
}

}  // namespace heavycoin
