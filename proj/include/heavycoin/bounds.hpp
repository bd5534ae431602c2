#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "heavycoin/core_model.hpp"

namespace heavycoin {

enum class BoundKind { LowerBound, UpperBound };

enum class FormulaId { AdaptiveKnownLower, FixedKnownLower, FixedUnknownLower, Table1Upper };

enum class Table1Row { FixedKnown, AdaptiveKnown, UnknownThetas, UnknownAlpha, UnknownAll };

std::string_view to_string(BoundKind kind);
std::string_view to_string(FormulaId id);
std::string_view to_string(Table1Row row);
Table1Row parse_table1_row(std::string_view name);

using NamedValue = std::pair<std::string, double>;

/// Evaluated bound. `value` may be +inf. Constants that the source statement
/// leaves unnamed are set to 1 and flagged with constant_known = false.
struct BoundReport {
  double value = 0.0;
  BoundKind kind = BoundKind::LowerBound;
  bool constant_known = false;
  FormulaId formula = FormulaId::AdaptiveKnownLower;
  std::vector<NamedValue> inputs;
  std::vector<NamedValue> branches;
  std::vector<std::string> notes;
  std::optional<double> theta_star;

  /// Looks up a branch by name; throws std::out_of_range if absent.
  double branch(std::string_view name) const;
};

/// Adaptive lower bound on E[T] with known parameters:
/// max{(1 - delta) / alpha, (1 - delta) / (alpha KL(theta0 || theta1))}.
BoundReport lb_adaptive_known(double alpha, double delta, const ArmFamily& family, double theta0,
                              double theta1);

/// Lower bound on E[N_m] for fixed-sample strategies with known parameters:
/// max{(1 - delta) / alpha, ln(1/delta) / (alpha^2 (e^{m chi}-1))} where
/// chi = (theta1 - theta0)^2 / (theta0 (1 - theta0)) for Bernoulli arms.
BoundReport lb_fixed_known(double alpha, double delta, const ArmFamily& family, double theta0,
                           double theta1, std::uint64_t m);

/// Lower bound on E[N] for fixed-sample strategies on Bernoulli arms with
/// unknown parameters. Requires 2 eps <= min{theta0 (1 - theta0), theta1 (1 - theta1)}
/// and m <= theta* (1 - theta*) / eps^2.
BoundReport lb_fixed_unknown(double alpha, double delta, double theta0, double theta1,
                             std::uint64_t m);

/// Upper bounds on E[T] from the summary table, eps = theta1 - theta0.
BoundReport ub_table1(Table1Row row, double alpha, double delta, double theta0, double theta1);

}  // namespace heavycoin
