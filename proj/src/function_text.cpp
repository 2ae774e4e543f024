#include "hml/function_text.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <optional>
#include <regex>

#include "hml/errors.hpp"

namespace hml {
namespace {

std::string trim(std::string_view s) {
  std::size_t a = 0;
  std::size_t b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return std::string(s.substr(a, b - a));
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == sep) {
      out.push_back(trim(s.substr(start, i - start)));
      start = i + 1;
    }
  }
  return out;
}

double parse_real(const std::string& s, const std::string& field) {
  if (s.empty()) throw ParseError(field, "expected a number");
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (*first == '+') ++first;
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr != last) throw ParseError(field, "malformed number '" + s + "'");
  return v;
}

std::vector<cplx> parse_complex_list(const std::string& s, const std::string& field) {
  std::vector<cplx> out;
  int idx = 0;
  for (const std::string& item : split(s, ','))
    out.push_back(parse_complex(item, field + "[" + std::to_string(idx++) + "]"));
  return out;
}

std::string render_list(std::span<const cplx> c) {
  std::string out;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (i) out += ',';
    out += render_complex(c[i]);
  }
  return out;
}

AnalyticFunction parse_base(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw ParseError("variant", "expected 'variant:payload'");
  const std::string variant = trim(std::string_view(text).substr(0, colon));
  const std::string payload = trim(std::string_view(text).substr(colon + 1));
  try {
    if (variant == "poly") return AnalyticFunction::polynomial(parse_complex_list(payload, "coefficients"));
    if (variant == "const") return AnalyticFunction::constant(parse_complex(payload, "constant"));
    if (variant == "rat") {
      const auto bar = payload.find('|');
      if (bar == std::string::npos) throw ParseError("rat", "expected 'num|den'");
      return AnalyticFunction::rational(parse_complex_list(payload.substr(0, bar), "numerator"),
                                        parse_complex_list(payload.substr(bar + 1), "denominator"));
    }
    if (variant == "blaschke") {
      std::string zeros = payload;
      cplx prefactor = 1.0;
      if (const auto bar = payload.find('|'); bar != std::string::npos) {
        zeros = payload.substr(0, bar);
        prefactor = parse_complex(trim(payload.substr(bar + 1)), "prefactor");
      }
      std::vector<BlaschkeFactor> factors;
      if (!trim(zeros).empty()) {
        int idx = 0;
        for (const std::string& item : split(zeros, ',')) {
          const std::string field = "zeros[" + std::to_string(idx++) + "]";
          BlaschkeFactor bf;
          if (const auto caret = item.find('^'); caret != std::string::npos) {
            bf.zero = parse_complex(trim(item.substr(0, caret)), field);
            const double m = parse_real(trim(item.substr(caret + 1)), field + ".multiplicity");
            if (m < 1 || m != std::floor(m) || m > 64)
              throw ParseError(field, "multiplicity must be an integer in [1, 64]");
            bf.multiplicity = static_cast<int>(m);
          } else {
            bf.zero = parse_complex(item, field);
          }
          if (!(std::abs(bf.zero) < 1.0)) throw ParseError(field, "zero modulus >= 1");
          factors.push_back(bf);
        }
      }
      return AnalyticFunction::blaschke(std::move(factors), prefactor);
    }
    if (variant == "binom") return AnalyticFunction::binomial(parse_real(payload, "alpha"));
  } catch (const InvariantError& e) {
    throw ParseError(variant, e.what());
  }
  throw ParseError("variant", "unknown variant '" + variant + "'");
}

}  // namespace

std::string render_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

cplx parse_complex(std::string_view text_in, const std::string& field) {
  static const std::regex number(R"(^[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?|^[+-]?(?:inf|nan))");
  const std::string text = trim(text_in);
  if (text.empty()) throw ParseError(field, "expected a complex number");
  std::smatch m;
  std::string rest = text;
  double re = 0.0;
  double im = 0.0;
  if (!std::regex_search(rest, m, number)) {
    // Bare "i", "+i", "-i".
    if (rest == "i" || rest == "+i") return {0.0, 1.0};
    if (rest == "-i") return {0.0, -1.0};
    throw ParseError(field, "malformed complex number '" + text + "'");
  }
  const std::string first = m.str(0);
  rest = rest.substr(first.size());
  if (rest == "i") return {0.0, parse_real(first, field)};
  re = parse_real(first, field);
  if (rest.empty()) return {re, 0.0};
  if (rest == "+i") return {re, 1.0};
  if (rest == "-i") return {re, -1.0};
  if (std::regex_search(rest, m, number) && (rest[0] == '+' || rest[0] == '-')) {
    const std::string second = m.str(0);
    if (rest.substr(second.size()) == "i") {
      im = parse_real(second, field);
      return {re, im};
    }
  }
  throw ParseError(field, "malformed complex number '" + text + "'");
}

std::string render_complex(cplx c) {
  std::string out = render_real(c.real());
  const std::string im = render_real(std::abs(c.imag()));
  out += std::signbit(c.imag()) ? '-' : '+';
  out += im;
  out += 'i';
  return out;
}

AnalyticFunction parse_function(std::string_view text_in) {
  std::string text = trim(text_in);
  if (text.empty()) throw ParseError("fn", "empty function description");
  // Suffixes bind outermost first: base*scale@rotation.
  std::optional<double> rotation;
  std::optional<cplx> scale;
  if (const auto at = text.rfind('@'); at != std::string::npos) {
    rotation = parse_real(trim(text.substr(at + 1)), "rotation");
    text = trim(text.substr(0, at));
  }
  if (const auto star = text.rfind('*'); star != std::string::npos) {
    scale = parse_complex(trim(text.substr(star + 1)), "scale");
    text = trim(text.substr(0, star));
  }
  AnalyticFunction base = parse_base(text);
  if (!scale && !rotation) return base;
  try {
    return AnalyticFunction::scaled_rotation(std::move(base), scale.value_or(cplx{1.0, 0.0}),
                                             rotation.value_or(0.0));
  } catch (const InvariantError& e) {
    throw ParseError("scale", e.what());
  }
}

std::string render_function(const AnalyticFunction& f) {
  return std::visit(
      [](const auto& m) -> std::string {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, PolynomialFn>) {
          return "poly:" + render_list(m.poly.coeffs());
        } else if constexpr (std::is_same_v<T, RationalFn>) {
          return "rat:" + render_list(m.num.coeffs()) + "|" + render_list(m.den.coeffs());
        } else if constexpr (std::is_same_v<T, BlaschkeFn>) {
          std::string out = "blaschke:";
          for (std::size_t i = 0; i < m.factors.size(); ++i) {
            if (i) out += ',';
            out += render_complex(m.factors[i].zero);
            if (m.factors[i].multiplicity != 1) out += "^" + std::to_string(m.factors[i].multiplicity);
          }
          if (m.prefactor != cplx{1.0, 0.0}) out += "|" + render_complex(m.prefactor);
          return out;
        } else if constexpr (std::is_same_v<T, BinomialFn>) {
          return "binom:" + render_real(m.alpha);
        } else {
          // Nested wrappers cannot be expressed by one suffix pair.
          if (std::holds_alternative<ScaledRotationFn>(m.inner->variant()))
            throw InvariantError("nested scaled-rotation wrappers have no text form");
          return render_function(*m.inner) + "*" + render_complex(m.scale) + "@" +
                 render_real(m.rotation);
        }
      },
      f.variant());
}

}  // namespace hml
