#include "doctest.h"
#include "hml/errors.hpp"
#include "hml/golden.hpp"
#include "hml/identities.hpp"
#include "oracles.hpp"

using namespace hml;
using oracle::pi;

namespace {

constexpr IdentityTag kFinite[] = {IdentityTag::growth, IdentityTag::lemma2, IdentityTag::theorem1,
                                   IdentityTag::corollary_finite};

IdentityReport run(IdentityTag tag, const AnalyticFunction& f, MeanParams mp, double r) {
  return run_identity(tag, f, mp, r, {}, {});
}

}  // namespace

TEST_CASE("growth identity for monomials against the closed-form derivative") {
  for (int n = 1; n <= 3; ++n)
    for (double p : {0.5, 1.0, 2.0, 3.0})
      for (double q : {0.0, 0.5, 1.0, 2.0}) {
        const double r = 0.8;
        const IdentityReport rep = check_growth_identity(AnalyticFunction::monomial(n), MeanParams(p, q), r);
        const double expect = 2 * pi * r * oracle::monomial_mean_deriv(n, p, q, r);
        CHECK(rep.pass);
        CHECK(rep.lhs == doctest::Approx(expect).epsilon(1e-11));
        CHECK(rep.rhs == doctest::Approx(expect).epsilon(1e-8));
      }
  // z^2 with p = 2: 2 pi r * 4 r^3 at r = 0.8.
  const IdentityReport rep = check_growth_identity(AnalyticFunction::monomial(2), MeanParams(2.0, 0.0), 0.8);
  CHECK(rep.rhs == doctest::Approx(8 * pi * 0.4096).epsilon(1e-10));
}

TEST_CASE("lemma2 and Hardy-Stein values for monomials") {
  const IdentityReport l2 = check_lemma2_identity(AnalyticFunction::monomial(1), MeanParams(2.0, 0.0), 0.5);
  CHECK(l2.pass);
  CHECK(l2.lhs == doctest::Approx(pi / 2).epsilon(1e-13));
  CHECK(l2.rhs == doctest::Approx(pi / 2).epsilon(1e-9));
  for (int n = 1; n <= 3; ++n)
    for (double p : {0.5, 1.0, 2.0, 3.0})
      for (double r : {0.5, 0.9}) {
        const double a = n * p;
        const IdentityReport hs = check_hardy_stein(AnalyticFunction::monomial(n), p, r);
        CHECK(hs.pass);
        CHECK(hs.lhs == doctest::Approx(std::pow(r, a)).epsilon(1e-12));
        CHECK(hs.rhs == doctest::Approx(a * a * oracle::log_moment(a, r)).epsilon(1e-7));
      }
}

TEST_CASE("finite identities hold across the golden families") {
  for (const GoldenFunction& g : golden_functions()) {
    for (const MeanParams mp : {MeanParams(1.5, 0.0), MeanParams(2.0, 1.0), MeanParams(0.7, 0.5)}) {
      for (IdentityTag tag : kFinite) {
        double r = 0.65;
        IdentityReport rep;
        for (;; r += kRadiusPerturbation) {
          try {
            rep = run(tag, g.f, mp, r);
            break;
          } catch (const CircleProximityError&) {
          }
        }
        INFO(g.name, " ", std::string(to_string(tag)), " p=", mp.p, " q=", mp.q);
        CHECK(rep.pass);
        CHECK(rep.converged);
        CHECK(rep.abs_residual <= 1e-7 * std::max(1.0, std::abs(rep.lhs)));
      }
    }
  }
}

TEST_CASE("scaling by a constant multiplies both sides by its p-th power") {
  const AnalyticFunction f = golden_random_polynomial();
  const AnalyticFunction g = AnalyticFunction::scaled_rotation(f, 3.0, 0.0);
  const MeanParams mp(1.5, 1.0);
  const double k = std::pow(3.0, mp.p);
  for (IdentityTag tag : kFinite) {
    const IdentityReport a = run(tag, f, mp, 0.55);
    const IdentityReport b = run(tag, g, mp, 0.55);
    CHECK(b.lhs == doctest::Approx(k * a.lhs).epsilon(1e-9));
    CHECK(b.rhs == doctest::Approx(k * a.rhs).epsilon(1e-7));
  }
}

TEST_CASE("rotating the argument leaves both sides unchanged") {
  const AnalyticFunction f = AnalyticFunction::blaschke({{{0.3, 0.2}, 1}, {-0.5, 2}});
  const AnalyticFunction g = AnalyticFunction::scaled_rotation(f, 1.0, 1.1);
  const MeanParams mp(1.5, 0.5);
  for (IdentityTag tag : kFinite) {
    const IdentityReport a = run(tag, f, mp, 0.7);
    const IdentityReport b = run(tag, g, mp, 0.7);
    CHECK(b.lhs == doctest::Approx(a.lhs).epsilon(1e-9));
    CHECK(b.rhs == doctest::Approx(a.rhs).epsilon(1e-7));
  }
}

TEST_CASE("at q = 0 lemma2 reduces to Hardy-Stein") {
  const AnalyticFunction f = AnalyticFunction::binomial(0.5);
  for (double p : {1.0, 2.5}) {
    const double r = 0.75;
    const IdentityReport l2 = check_lemma2_identity(f, MeanParams(p, 0.0), r);
    const IdentityReport hs = check_hardy_stein(f, p, r);
    const double f0 = std::pow(std::abs(eval(f, 0.0)), p);
    CHECK(l2.lhs / (2 * pi) + f0 == doctest::Approx(hs.lhs).epsilon(1e-13));
    CHECK(l2.rhs / (2 * pi) + f0 == doctest::Approx(hs.rhs).epsilon(1e-13));
  }
}

TEST_CASE("theorem1 differs from lemma2 by the growth term") {
  const AnalyticFunction f = golden_random_polynomial();
  const MeanParams mp(2.0, 1.0);
  const double r = 0.6;
  const IdentityReport l2 = check_lemma2_identity(f, mp, r);
  const IdentityReport t1 = check_theorem1_identity(f, mp, r);
  const IdentityReport gr = check_growth_identity(f, mp, r);
  CHECK(t1.lhs - l2.lhs == doctest::Approx(-std::log(r) * gr.lhs).epsilon(1e-11));
  CHECK(t1.rhs - l2.rhs == doctest::Approx(-std::log(r) * gr.rhs).epsilon(1e-7));
}

TEST_CASE("corollary limit tends to four pi times the Hardy norm") {
  for (const AnalyticFunction& f : {AnalyticFunction::monomial(2), AnalyticFunction::constant(1.0)}) {
    const IdentityReport rep = check_corollary_limit(f, MeanParams(2.0, 0.0));
    CHECK(rep.pass);
    CHECK(rep.lhs == doctest::Approx(4 * pi).epsilon(1e-4));
    CHECK(rep.rhs == doctest::Approx(4 * pi).epsilon(1e-4));
  }
  CHECK_THROWS_AS(check_corollary_limit(AnalyticFunction::binomial(0.9), MeanParams(2.0, 0.0)),
                  PreconditionError);
}

TEST_CASE("ring limits around the origin and around zeros") {
  const AnalyticFunction g = AnalyticFunction::polynomial({1.0, 1.0});
  const LimitReport a =
      check_lemma1_limits(g, MeanParams(2.0, 0.0), 0.0, Kernel::log_r_over_abs(0.9), 0.9, eps_schedule(3, 14));
  CHECK(a.pass);
  CHECK(a.expected_limit == doctest::Approx(2 * pi));
  CHECK(a.final_deviation <= kLimitTolerance);
  CHECK(std::isnan(a.slope_bound));

  const AnalyticFunction dbl = AnalyticFunction::polynomial({0.16, -0.8, 1.0});
  const LimitReport b =
      check_lemma1_limits(dbl, MeanParams(2.0, 0.0), 0.4, Kernel::log_r_over_abs(0.9), 0.9, eps_schedule(3, 14));
  CHECK(b.pass);
  CHECK(b.expected_limit == 0.0);
  CHECK(b.slope_bound == doctest::Approx(2.8));
  CHECK(b.slope >= b.slope_bound);

  CHECK_THROWS_AS(check_lemma1_limits(g, MeanParams(2.0, 0.0), 0.3, Kernel::log_r_over_abs(0.9), 0.9,
                                      eps_schedule(3, 14)),
                  PreconditionError);
  CHECK_THROWS_AS(check_lemma1_limits(dbl, MeanParams(2.0, 0.0), 0.4, Kernel::log_r_over_abs(0.9), 0.9,
                                      eps_schedule(0, 6)),
                  GeometryError);
}

TEST_CASE("residual bookkeeping") {
  IdentityReport rep;
  rep.lhs = 2.0;
  rep.rhs = 2.0 + 1e-8;
  rep.tolerance = 1e-8;
  finalize(rep);
  CHECK(rep.abs_residual == doctest::Approx(1e-8));
  CHECK(rep.rel_residual == doctest::Approx(1e-8 / (2.0 + 1e-8)));
  CHECK(rep.pass);
  rep.rhs = 2.0 + 1e-7;
  finalize(rep);
  CHECK_FALSE(rep.pass);
  rep.budget = 2e-7;
  finalize(rep);
  CHECK(rep.pass);
}

TEST_CASE("schedules and tags") {
  const RadiusSchedule s{2, 4};
  const std::vector<double> r = s.radii();
  REQUIRE(r.size() == 3);
  CHECK(r[0] == 0.75);
  CHECK(r[2] == 0.9375);
  CHECK_THROWS_AS((RadiusSchedule{3, 4}.validate()), InvariantError);
  CHECK_THROWS_AS((RadiusSchedule{0, 10}.validate()), InvariantError);
  const std::vector<double> e = eps_schedule(3, 5);
  REQUIRE(e.size() == 3);
  CHECK(e[0] == 0.125);
  CHECK(e[2] == 0.03125);
  CHECK_THROWS_AS(eps_schedule(5, 6), InvariantError);
  for (IdentityTag t : all_identity_tags()) CHECK(identity_tag_from_string(to_string(t)) == t);
  CHECK_FALSE(identity_tag_from_string("theorem2").has_value());
}
