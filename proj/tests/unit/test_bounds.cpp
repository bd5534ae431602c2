#include <doctest.h>

#include <cmath>

#include "heavycoin/bounds.hpp"

using namespace heavycoin;

TEST_SUITE("bounds") {

TEST_CASE("adaptive known lower bound") {
  const auto bern = ArmFamily::bernoulli();
  const auto r = lb_adaptive_known(0.01, 0.1, bern, 0.4, 0.6);
  CHECK(r.value == doctest::Approx(0.9 / (0.01 * 0.081093021621632876396)).epsilon(1e-12));
  CHECK(r.value == doctest::Approx(1109.8).epsilon(1e-3));
  CHECK(r.branch("draw") == doctest::Approx(90.0));
  CHECK_FALSE(r.constant_known);
  CHECK(r.kind == BoundKind::LowerBound);

  const auto wide = lb_adaptive_known(0.05, 0.1, bern, 0.05, 0.95);
  CHECK(wide.value == doctest::Approx(0.9 / 0.05));
  CHECK(lb_adaptive_known(0.05, 1.0, bern, 0.4, 0.6).value == 0.0);

  const auto inf = lb_adaptive_known(0.05, 0.1, bern, 0.4, 1.0);
  CHECK(inf.value == doctest::Approx(18.0));
  CHECK(inf.branches.size() == 1);
  CHECK_FALSE(inf.notes.empty());

  const auto note = lb_adaptive_known(0.2, 0.1, bern, 0.4, 0.6);
  bool flagged = false;
  for (const auto& n : note.notes) flagged |= n.find("validity_unknown") != std::string::npos;
  CHECK(flagged);
}

TEST_CASE("fixed known lower bound") {
  const auto bern = ArmFamily::bernoulli();
  const auto r = lb_fixed_known(0.1, 0.1, bern, 0.5, 0.6, 5);
  CHECK(r.constant_known);
  CHECK(r.branch("draw") == doctest::Approx(9.0));
  CHECK(r.value == doctest::Approx(1039.998377675260038862607).epsilon(1e-12));
  const auto wider = lb_fixed_known(0.1, 0.1, bern, 0.5, 0.7, 5);
  CHECK(wider.value == doctest::Approx(187.8831656668084738701158).epsilon(1e-12));

  CHECK(lb_fixed_known(0.1, 1.0, bern, 0.5, 0.6, 5).value == 0.0);
  double prev = INFINITY;
  for (std::uint64_t m = 1; m <= 50; ++m) {
    const double b = lb_fixed_known(0.1, 0.1, bern, 0.5, 0.6, m).branch("divergence");
    CHECK(b < prev);
    prev = b;
  }
  const auto g = lb_fixed_known(0.1, 0.1, ArmFamily::gaussian(2.0), 0.0, 1.0, 3);
  CHECK(g.branch("divergence") == doctest::Approx(std::log(10.0) / (0.01 * std::expm1(0.75))));
  CHECK_THROWS_AS(lb_fixed_known(0.1, 0.1, bern, 0.5, 0.6, 0), PreconditionError);
}

TEST_CASE("fixed unknown lower bound") {
  const auto r = lb_fixed_unknown(0.1, 0.1, 0.45, 0.5, 10);
  CHECK_FALSE(r.constant_known);
  REQUIRE(r.theta_star.has_value());
  CHECK(*r.theta_star == doctest::Approx(0.4549714209790016225628782916667388086442).epsilon(1e-12));
  CHECK(r.value == doctest::Approx(27967.74414990648779314573939625983377856).epsilon(1e-11));
  CHECK_THROWS_WITH_AS(lb_fixed_unknown(0.1, 0.1, 0.45, 0.5, 200),
                       doctest::Contains("m <= theta*"), PreconditionError);
  CHECK_THROWS_WITH_AS(lb_fixed_unknown(0.1, 0.1, 0.3, 0.5, 1),
                       doctest::Contains("2 (theta1 - theta0)"), PreconditionError);
}

TEST_CASE("fixed unknown scales as alpha^-2 up to the theta* shift") {
  // theta* moves with alpha, so compare after removing its factor.
  auto normalised = [](double a) {
    const auto r = lb_fixed_unknown(a, 0.1, 0.45, 0.5, 10);
    const double v = *r.theta_star * (1 - *r.theta_star);
    return r.value * a * a * (1 - a) * (1 - a) / (std::min(0.1, v) * v * v);
  };
  CHECK(normalised(0.02) == doctest::Approx(normalised(0.2)).epsilon(1e-12));
  const double r1 = lb_fixed_unknown(0.01, 0.1, 0.45, 0.5, 10).value;
  const double r2 = lb_fixed_unknown(0.02, 0.1, 0.45, 0.5, 10).value;
  CHECK(r1 / r2 == doctest::Approx(4.0).epsilon(0.02));
}

TEST_CASE("fixed unknown over fixed known grows as the gap shrinks") {
  const auto bern = ArmFamily::bernoulli();
  for (double a : {0.05, 0.1, 0.2}) {
    double prev = 0.0;
    for (double eps : {0.08, 0.04, 0.02, 0.01, 0.005}) {
      const double t0 = 0.5 - eps / 2, t1 = 0.5 + eps / 2;
      const auto unknown = lb_fixed_unknown(a, 0.1, t0, t1, 4);
      const auto known = lb_fixed_known(a, 0.1, bern, t0, t1, 4);
      const double ratio = unknown.value / known.branch("divergence");
      CAPTURE(a);
      CAPTURE(eps);
      CHECK(ratio > prev);
      prev = ratio;
    }
  }
}

TEST_CASE("table rows") {
  const auto eq1 = ub_table1(Table1Row::AdaptiveKnown, 0.5, 0.5, 0.0, 1.0);
  CHECK(eq1.value == doctest::Approx(16.0).epsilon(1e-14));
  CHECK(eq1.constant_known);
  CHECK(ub_table1(Table1Row::AdaptiveKnown, 0.2, 0.1, 0.4, 0.7).value ==
        doctest::Approx(1348.181144614419555844436).epsilon(1e-12));
  CHECK_FALSE(ub_table1(Table1Row::FixedKnown, 0.2, 0.1, 0.4, 0.7).constant_known);

  const double ua = ub_table1(Table1Row::UnknownAlpha, 0.1, 0.1, 0.4, 0.5).value;
  const double ul = ub_table1(Table1Row::UnknownAll, 0.1, 0.1, 0.4, 0.5).value;
  const double h = 1.0 / (0.1 * 0.01);
  CHECK(ul / ua == doctest::Approx(std::log(h) * std::log(std::log(h) / 0.1) /
                                   std::log(std::log(1.0 / 0.1) / 0.1)).epsilon(1e-10));

  for (auto row : {Table1Row::FixedKnown, Table1Row::AdaptiveKnown, Table1Row::UnknownThetas,
                   Table1Row::UnknownAlpha, Table1Row::UnknownAll}) {
    double prev = 0.0;
    for (double eps : {0.2, 0.1, 0.05, 0.01, 0.001}) {
      const double v = ub_table1(row, 0.1, 0.1, 0.5 - eps / 2, 0.5 + eps / 2).value;
      CHECK(v >= 0.0);
      CHECK(v > prev);
      prev = v;
    }
  }
  CHECK(parse_table1_row("unknown-all") == Table1Row::UnknownAll);
  CHECK_THROWS_AS(parse_table1_row("nope"), PreconditionError);
}

TEST_CASE("adaptive upper bound dominates the adaptive lower bound") {
  const auto bern = ArmFamily::bernoulli();
  for (double a : {0.01, 0.05, 0.1, 0.2}) {
    for (double eps : {0.01, 0.05, 0.1, 0.2}) {
      for (double d : {0.01, 0.05, 0.1}) {
        const double t0 = 0.5 - eps / 2, t1 = 0.5 + eps / 2;
        const double lb = lb_adaptive_known(a, d, bern, t0, t1).value;
        const double ub = ub_table1(Table1Row::AdaptiveKnown, a, d, t0, t1).value;
        CHECK(ub / lb >= 1.0);
      }
    }
  }
}

TEST_CASE("values are never negative") {
  const auto r = ub_table1(Table1Row::UnknownThetas, 0.4, 0.9, 0.0, 0.95);
  CHECK(r.value >= 0.0);
}

}  // TEST_SUITE
