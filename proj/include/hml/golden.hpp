#pragma once

// The curated function families every checker runs over.

#include <string>
#include <vector>

#include "hml/report.hpp"

namespace hml {

struct GoldenFunction {
  std::string name;
  AnalyticFunction f;
};

/// A golden function with the parameters and radii the suite runs it at.
struct GoldenCase {
  std::string name;
  AnalyticFunction f;
  std::vector<MeanParams> params;
  std::vector<double> radii;
  /// Whether the suite extrapolates the corollary limit for q = 0 members.
  bool corollary_limit = false;
};

std::vector<GoldenCase> golden_cases();

/// z, z^2, z^3, two constants, 1 + z, the seeded degree-5 polynomial, the
/// Blaschke factor at 0.5 and the binomial family at alpha = 0.5, 0.9.
std::vector<GoldenFunction> golden_functions();

/// Degree 5, coefficients drawn from a fixed-seed mt19937_64 stream.
AnalyticFunction golden_random_polynomial();

/// Runs every identity and probe over the golden families.  Entries come out
/// in a fixed order regardless of worker count; the timestamp is left empty.
SuiteReport golden_suite(const QuadratureSpec& spec = {});

}  // namespace hml
