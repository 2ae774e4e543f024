#include "doctest.h"
#include "hml/asymptotics.hpp"
#include "hml/errors.hpp"
#include "hml/golden.hpp"
#include "oracles.hpp"

using namespace hml;

TEST_CASE("rate probe on monomials") {
  for (int n = 1; n <= 3; ++n)
    for (double p : {1.0, 2.0, 3.0}) {
      const RateProbeResult rp = rate_probe(AnalyticFunction::monomial(n), MeanParams(p, 0.0));
      CHECK(rp.verdict == RateVerdict::consistent);
      CHECK(std::abs(rp.beta) <= 0.05);
      REQUIRE(rp.radii.size() == 9);
      for (std::size_t i = 0; i < rp.radii.size(); ++i) {
        const double r = rp.radii[i];
        CHECK(rp.derivs[i] == doctest::Approx(oracle::monomial_mean_deriv(n, p, 0.0, r)).epsilon(1e-10));
        CHECK(rp.products[i] == doctest::Approx((1 - r) * rp.derivs[i]).epsilon(1e-15));
        CHECK(rp.normalized[i] == doctest::Approx(n * p / r).epsilon(1e-10));
      }
    }
}

TEST_CASE("rate probe on a weighted binomial member") {
  const RateProbeResult rp = rate_probe(AnalyticFunction::binomial(0.9), MeanParams(2.0, 1.0));
  CHECK(rp.verdict == RateVerdict::consistent);
  CHECK(rp.beta < 1.0 - 2.0 * rp.beta_stderr);
  CHECK(rp.converged);
}

TEST_CASE("rate probe refuses functions outside the space") {
  CHECK_THROWS_AS(rate_probe(AnalyticFunction::binomial(0.9), MeanParams(2.0, 0.0)), PreconditionError);
  CHECK_THROWS_AS(rate_probe(AnalyticFunction::binomial(2.0), MeanParams(1.0, 0.0)), PreconditionError);
}

TEST_CASE("rate verdict names") {
  CHECK(std::string(to_string(RateVerdict::consistent)) == "consistent-with-theorem");
  CHECK(std::string(to_string(RateVerdict::inconsistent)) == "inconsistent");
  CHECK(std::string(to_string(RateVerdict::inconclusive)) == "inconclusive");
}

TEST_CASE("integral means are non-decreasing in r") {
  const std::vector<double> grid = default_monotone_grid();
  REQUIRE(grid.size() == 17);
  CHECK(grid.front() == doctest::Approx(0.1));
  CHECK(grid.back() == doctest::Approx(0.9));
  for (const GoldenFunction& g : golden_functions())
    for (double p : {0.5, 1.0, 2.5}) {
      const MonotonicityResult m = monotonicity_check(g.f, p, grid);
      INFO(g.name, " p=", p);
      CHECK(m.pass);
      CHECK(m.max_violation == 0.0);
    }
  const MonotonicityResult m = monotonicity_check(AnalyticFunction::monomial(2), 1.5, grid);
  for (std::size_t i = 0; i < grid.size(); ++i)
    CHECK(m.means[i] == doctest::Approx(oracle::monomial_mean(2, 1.5, 0.0, grid[i])).epsilon(1e-12));
  CHECK_THROWS_AS(monotonicity_check(AnalyticFunction::monomial(1), 1.0, {0.5, 0.4}), InvariantError);
}

TEST_CASE("log of the integral mean is convex in log r") {
  const std::vector<double> grid = default_convexity_grid();
  REQUIRE(grid.size() == 16);
  CHECK(grid.front() == doctest::Approx(0.1));
  CHECK(grid.back() == doctest::Approx(0.9));
  for (const GoldenFunction& g : golden_functions())
    for (double p : {0.5, 1.0, 2.5}) {
      const LogConvexityResult lc = logconvexity_check(g.f, p, grid);
      INFO(g.name, " p=", p);
      CHECK(lc.pass);
      CHECK(lc.min_second_difference >= -kConvexitySlack);
    }
  // For z^n the log norm is exactly linear in log r.
  for (int n = 1; n <= 3; ++n) {
    const LogConvexityResult lc = logconvexity_check(AnalyticFunction::monomial(n), 1.5, grid);
    for (double d : lc.second_differences) CHECK(std::abs(d) <= 1e-12);
  }
  CHECK_THROWS_AS(logconvexity_check(AnalyticFunction::monomial(1), 1.0, {0.1, 0.2, 0.4, 0.7}), InvariantError);
}

TEST_CASE("membership scan classifications") {
  const MembershipScanResult div = membership_scan(AnalyticFunction::binomial(2.0), MeanParams(1.0, 0.0));
  CHECK(div.classification == MembershipClass::diverging);
  const MembershipScanResult bd = membership_scan(AnalyticFunction::monomial(2), MeanParams(2.0, 0.0));
  CHECK(bd.classification == MembershipClass::bounded);
  CHECK(bd.sup_estimate == doctest::Approx(bd.norms.back()));
  CHECK(bd.norms.back() == doctest::Approx(std::pow(bd.radii.back(), 2.0)).epsilon(1e-12));
  const MembershipScanResult wb = membership_scan(AnalyticFunction::binomial(0.9), MeanParams(2.0, 1.0));
  CHECK(wb.classification == MembershipClass::bounded);
  CHECK(std::string(to_string(MembershipClass::diverging)) == "diverging");
}
