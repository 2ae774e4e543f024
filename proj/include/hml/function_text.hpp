#pragma once

// Text form of function descriptions:
//
//   poly:c0,c1,...          ascending complex coefficients
//   const:c                 constant
//   rat:n0,n1,...|d0,d1,... numerator | denominator
//   blaschke:a[^m],...[|u]  zeros with optional multiplicity and unimodular prefactor
//   binom:alpha             (1 - z)^(-alpha)
//
// followed by optional "*scale" and "@rotation" suffixes meaning
// scale * f(exp(i rotation) z).  Complex numbers are written "a", "bi" or
// "a+bi"; rendering uses 17 significant digits so text round-trips exactly.

#include <string>
#include <string_view>

#include "hml/function_model.hpp"

namespace hml {

/// Throws ParseError naming the offending field.
AnalyticFunction parse_function(std::string_view text);
std::string render_function(const AnalyticFunction& f);

cplx parse_complex(std::string_view text, const std::string& field);
std::string render_complex(cplx c);
/// %.17g
std::string render_real(double x);

}  // namespace hml
