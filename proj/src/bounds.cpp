#include "heavycoin/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "heavycoin/divergence.hpp"

namespace heavycoin {

namespace {

void require_unit_open(double x, const char* what) {
  if (!(x > 0.0 && x < 1.0)) throw PreconditionError(std::string(what) + " must lie in (0, 1)");
}

void require_order(double theta0, double theta1) {
  if (!(theta0 < theta1)) throw PreconditionError("theta0 < theta1 is required");
}

std::vector<NamedValue> echo(double alpha, double delta, double theta0, double theta1) {
  return {{"alpha", alpha}, {"delta", delta}, {"theta0", theta0}, {"theta1", theta1}};
}

void clamp_nonnegative(BoundReport& r) {
  if (r.value < 0.0) {
    r.value = 0.0;
    r.notes.emplace_back("negative expression clamped to 0");
  }
}

}  // namespace

std::string_view to_string(BoundKind kind) {
  return kind == BoundKind::LowerBound ? "lower" : "upper";
}

std::string_view to_string(FormulaId id) {
  switch (id) {
    case FormulaId::AdaptiveKnownLower: return "lb_adaptive_known";
    case FormulaId::FixedKnownLower: return "lb_fixed_known";
    case FormulaId::FixedUnknownLower: return "lb_fixed_unknown";
    case FormulaId::Table1Upper: return "ub_table1";
  }
  return "?";
}

std::string_view to_string(Table1Row row) {
  switch (row) {
    case Table1Row::FixedKnown: return "fixed-known";
    case Table1Row::AdaptiveKnown: return "adaptive-known";
    case Table1Row::UnknownThetas: return "unknown-thetas";
    case Table1Row::UnknownAlpha: return "unknown-alpha";
    case Table1Row::UnknownAll: return "unknown-all";
  }
  return "?";
}

Table1Row parse_table1_row(std::string_view name) {
  for (auto row : {Table1Row::FixedKnown, Table1Row::AdaptiveKnown, Table1Row::UnknownThetas,
                   Table1Row::UnknownAlpha, Table1Row::UnknownAll}) {
    if (to_string(row) == name) return row;
  }
  throw PreconditionError("unknown table row '" + std::string(name) + "'");
}

double BoundReport::branch(std::string_view name) const {
  for (const auto& [k, v] : branches) {
    if (k == name) return v;
  }
  throw std::out_of_range("no branch named " + std::string(name));
}

BoundReport lb_adaptive_known(double alpha, double delta, const ArmFamily& family, double theta0,
                              double theta1) {
  require_unit_open(alpha, "alpha");
  if (!(delta > 0.0 && delta <= 1.0)) throw PreconditionError("delta must lie in (0, 1]");
  require_order(theta0, theta1);
  BoundReport r;
  r.kind = BoundKind::LowerBound;
  r.formula = FormulaId::AdaptiveKnownLower;
  r.constant_known = false;
  r.inputs = echo(alpha, delta, theta0, theta1);

  const double first = (1.0 - delta) / alpha;
  r.branches.emplace_back("draw", first);
  const double d = kl(family, theta0, theta1);
  if (is_infinite_divergence(d)) {
    r.value = first;
    r.notes.emplace_back("KL is infinite; only the (1-delta)/alpha branch applies");
  } else {
    const double second = (1.0 - delta) / (alpha * d);
    r.branches.emplace_back("divergence", second);
    r.value = std::max(first, second);
  }
  if (alpha > delta) r.notes.emplace_back("validity_unknown: alpha > delta");
  clamp_nonnegative(r);
  return r;
}

BoundReport lb_fixed_known(double alpha, double delta, const ArmFamily& family, double theta0,
                           double theta1, std::uint64_t m) {
  require_unit_open(alpha, "alpha");
  if (!(delta > 0.0 && delta <= 1.0)) throw PreconditionError("delta must lie in (0, 1]");
  require_order(theta0, theta1);
  if (m < 1) throw PreconditionError("m >= 1 is required");
  if (!family.admits(theta0) || !family.admits(theta1)) {
    throw PreconditionError("means must be legal for the family");
  }
  BoundReport r;
  r.kind = BoundKind::LowerBound;
  r.formula = FormulaId::FixedKnownLower;
  r.constant_known = true;
  r.inputs = echo(alpha, delta, theta0, theta1);
  r.inputs.emplace_back("m", static_cast<double>(m));

  const double first = (1.0 - delta) / alpha;
  const double md = static_cast<double>(m);
  double growth = 0.0;  // e^{m chi} - 1
  switch (family.kind()) {
    case FamilyKind::Bernoulli: {
      const double gap = theta1 - theta0;
      growth = std::expm1(md * gap * gap / (theta0 * (1.0 - theta0)));
      break;
    }
    case FamilyKind::Gaussian: {
      const double z = (theta1 - theta0) / family.sigma();
      growth = std::expm1(md * z * z);
      break;
    }
    case FamilyKind::BoundedBeta:
      growth = chi2_product(family, theta1, theta0, m);
      break;
  }
  const double second = std::log(1.0 / delta) / (alpha * alpha * growth);
  r.branches.emplace_back("draw", first);
  r.branches.emplace_back("divergence", second);
  r.value = std::max(first, second);
  clamp_nonnegative(r);
  return r;
}

BoundReport lb_fixed_unknown(double alpha, double delta, double theta0, double theta1,
                             std::uint64_t m) {
  if (!(alpha > 0.0 && alpha <= 0.5)) throw PreconditionError("alpha must lie in (0, 1/2]");
  require_unit_open(delta, "delta");
  require_order(theta0, theta1);
  if (!(theta0 > 0.0 && theta1 < 1.0)) throw PreconditionError("means must lie in (0, 1)");
  if (m < 1) throw PreconditionError("m >= 1 is required");
  const double eps = theta1 - theta0;
  const double v0 = theta0 * (1.0 - theta0);
  const double v1 = theta1 * (1.0 - theta1);
  if (!(2.0 * eps <= std::min(v0, v1))) {
    throw PreconditionError(
        "2 (theta1 - theta0) <= min{theta0 (1 - theta0), theta1 (1 - theta1)} is violated");
  }
  const MixtureSpec spec = MixtureSpec::make(alpha, theta0, theta1);
  const double ts = geometric_mixture_point(spec);
  const double vs = ts * (1.0 - ts);
  const double md = static_cast<double>(m);
  if (!(md <= vs / (eps * eps))) {
    throw PreconditionError("m <= theta* (1 - theta*) / (theta1 - theta0)^2 is violated");
  }

  BoundReport r;
  r.kind = BoundKind::LowerBound;
  r.formula = FormulaId::FixedUnknownLower;
  r.constant_known = false;
  r.inputs = echo(alpha, delta, theta0, theta1);
  r.inputs.emplace_back("m", md);
  r.theta_star = ts;
  const double ratio = alpha * (1.0 - alpha) * eps * eps / vs;
  r.value = std::min(1.0 / md, vs) / (md * ratio * ratio) * std::log(1.0 / delta);
  r.branches.emplace_back("value", r.value);
  clamp_nonnegative(r);
  return r;
}

BoundReport ub_table1(Table1Row row, double alpha, double delta, double theta0, double theta1) {
  require_unit_open(alpha, "alpha");
  require_unit_open(delta, "delta");
  require_order(theta0, theta1);
  const double eps = theta1 - theta0;
  const double e2 = eps * eps;
  BoundReport r;
  r.kind = BoundKind::UpperBound;
  r.formula = FormulaId::Table1Upper;
  r.constant_known = false;
  r.inputs = echo(alpha, delta, theta0, theta1);
  const double scale = 1.0 / (alpha * e2);
  switch (row) {
    case Table1Row::FixedKnown:
      r.value = scale * std::log(1.0 / (delta * alpha));
      break;
    case Table1Row::AdaptiveKnown:
      r.constant_known = true;
      r.value = 16.0 / e2 *
                ((1.0 - alpha) / alpha +
                 std::log((1.0 - alpha) * (1.0 - delta) / (alpha * delta)));
      break;
    case Table1Row::UnknownThetas:
      r.value = scale * std::log(std::log(1.0 / e2) / delta);
      break;
    case Table1Row::UnknownAlpha:
      r.value = scale * std::log(std::log(1.0 / alpha) / delta);
      break;
    case Table1Row::UnknownAll:
      r.value = scale * std::log(scale) * std::log(std::log(scale) / delta);
      break;
  }
  r.branches.emplace_back(std::string(to_string(row)), r.value);
  if (std::isnan(r.value)) {
    r.value = 0.0;
    r.notes.emplace_back("log factor undefined at these inputs; reported as 0");
  }
  clamp_nonnegative(r);
  return r;
}

}  // namespace heavycoin
