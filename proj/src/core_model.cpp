#include "heavycoin/core_model.hpp"

#include <cmath>
#include <string>

namespace heavycoin {

ArmFamily ArmFamily::gaussian(double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw PreconditionError("gaussian family requires sigma > 0");
  }
  return ArmFamily(FamilyKind::Gaussian, sigma);
}

ArmFamily ArmFamily::bounded_beta(double concentration) {
  if (!(concentration > 0.0) || !std::isfinite(concentration)) {
    throw PreconditionError("bounded-beta family requires concentration > 0");
  }
  return ArmFamily(FamilyKind::BoundedBeta, concentration);
}

ArmFamily ArmFamily::parse(std::string_view name, double scale) {
  if (name == "bernoulli") return bernoulli();
  if (name == "gaussian") return gaussian(scale);
  if (name == "beta" || name == "bounded-beta") return bounded_beta(scale);
  throw PreconditionError("unknown family '" + std::string(name) +
                          "' (expected bernoulli, gaussian or beta)");
}

double ArmFamily::sigma() const {
  if (kind_ != FamilyKind::Gaussian) throw std::logic_error("sigma() on a non-gaussian family");
  return scale_;
}

double ArmFamily::concentration() const {
  if (kind_ != FamilyKind::BoundedBeta) {
    throw std::logic_error("concentration() on a non-beta family");
  }
  return scale_;
}

std::string_view ArmFamily::name() const {
  switch (kind_) {
    case FamilyKind::Bernoulli: return "bernoulli";
    case FamilyKind::Gaussian: return "gaussian";
    case FamilyKind::BoundedBeta: return "beta";
  }
  return "unknown";
}

bool ArmFamily::admits(double theta) const {
  switch (kind_) {
    case FamilyKind::Bernoulli: return theta >= 0.0 && theta <= 1.0;
    case FamilyKind::Gaussian: return std::isfinite(theta);
    case FamilyKind::BoundedBeta: return theta > 0.0 && theta < 1.0;
  }
  return false;
}

MixtureSpec MixtureSpec::make(double alpha, double theta0, double theta1, ArmFamily family) {
  MixtureSpec spec{alpha, theta0, theta1, family};
  spec.validate();
  return spec;
}

void MixtureSpec::validate() const {
  if (!(alpha >= 0.0 && alpha <= 0.5)) throw PreconditionError("alpha must lie in [0, 1/2]");
  if (!(theta0 < theta1)) throw PreconditionError("theta0 < theta1 is required");
  if (family.kind() == FamilyKind::Gaussian) {
    if (!std::isfinite(theta0) || !std::isfinite(theta1)) {
      throw PreconditionError("gaussian means must be finite");
    }
  } else if (family.kind() == FamilyKind::Bernoulli) {
    if (!(theta0 >= 0.0 && theta1 <= 1.0)) {
      throw PreconditionError("bernoulli means must lie in [0, 1]");
    }
  } else if (!(theta0 > 0.0 && theta1 < 1.0)) {
    throw PreconditionError("beta means must lie in (0, 1)");
  }
}

std::string_view to_string(Label label) { return label == Label::Heavy ? "heavy" : "light"; }

Label draw_label(double heavy_probability, RandomSource& rng) {
  return rng.uniform() < heavy_probability ? Label::Heavy : Label::Light;
}

Label draw_label(const MixtureSpec& spec, RandomSource& rng) { return draw_label(spec.alpha, rng); }

double sample_arm(const ArmFamily& family, double theta, RandomSource& rng) {
  switch (family.kind()) {
    case FamilyKind::Bernoulli:
      if (!(theta >= 0.0 && theta <= 1.0)) {
        throw PreconditionError("bernoulli mean must lie in [0, 1]");
      }
      return rng.uniform() < theta ? 1.0 : 0.0;
    case FamilyKind::Gaussian:
      if (!std::isfinite(theta)) throw PreconditionError("gaussian mean must be finite");
      return theta + family.sigma() * rng.normal();
    case FamilyKind::BoundedBeta: {
      if (!(theta > 0.0 && theta < 1.0)) throw PreconditionError("beta mean must lie in (0, 1)");
      const double c = family.concentration();
      return rng.beta(c * theta, c * (1.0 - theta));
    }
  }
  throw std::logic_error("unreachable family kind");
}

double gaussian_tail_q(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

}  // namespace heavycoin
