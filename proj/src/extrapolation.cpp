#include "hml/extrapolation.hpp"

#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "hml/errors.hpp"

namespace hml {
namespace {

// Correction terms h^k, h^(k+1), ... fitted alongside the limit.
constexpr int kMaxTerms = 3;

struct Step {
  double value;
  double order;
  bool ok;
};

// Classic three-sample estimate from a0, a1, a2 at h, h/2, h/4.
Step extrapolate3(double a0, double a1, double a2) {
  const double d1 = a1 - a0;
  const double d2 = a2 - a1;
  if (d2 == 0.0) return {a2, std::numeric_limits<double>::infinity(), true};
  const double ratio = d1 / d2;
  if (!(ratio > 1.0)) return {a2, 0.0, false};
  const double k = std::log2(ratio);
  return {a2 + d2 / (ratio - 1.0), k, true};
}

// Fits A(h) = A0 + sum_m C_m h^(k+m), m < terms, with k unknown, exactly
// through the last terms + 2 samples.  For fixed k the model is linear; the
// remaining sample pins k, found by a bracketing scan then bisection.
class SeriesFit {
 public:
  SeriesFit(std::span<const double> h, std::span<const double> a, int terms)
      : h_(h), a_(a), terms_(terms) {}

  double limit(double k) const { return solve(k)(0); }

  // Misfit at the earliest sample of the model fitted through the later ones.
  double misfit(double k) const {
    const Eigen::VectorXd x = solve(k);
    double model = x(0);
    for (int m = 0; m < terms_; ++m) model += x(1 + m) * std::pow(h_[0], k + m);
    return a_[0] - model;
  }

 private:
  Eigen::VectorXd solve(double k) const {
    const int n = terms_ + 1;
    Eigen::MatrixXd m(n, n);
    Eigen::VectorXd rhs(n);
    for (int i = 0; i < n; ++i) {
      m(i, 0) = 1.0;
      for (int t = 0; t < terms_; ++t) m(i, 1 + t) = std::pow(h_[1 + i], k + t);
      rhs(i) = a_[1 + i];
    }
    return m.fullPivLu().solve(rhs);
  }

  std::span<const double> h_;
  std::span<const double> a_;
  int terms_;
};

// Order roots of the misfit on (0, 8]; the one closest to the hint wins.
std::optional<Step> series_step(std::span<const double> values, int terms, double hint) {
  const std::size_t n = values.size();
  const std::size_t w = static_cast<std::size_t>(terms) + 2;
  std::vector<double> h(w);
  for (std::size_t i = 0; i < w; ++i) h[i] = std::ldexp(1.0, -static_cast<int>(n - w + i));
  const SeriesFit fit(h, values.subspan(n - w), terms);
  constexpr int kScan = 800;
  constexpr double kLo = 0.01;
  constexpr double kHi = 8.0;
  std::optional<double> best;
  double prev_k = kLo;
  double prev_g = fit.misfit(kLo);
  for (int i = 1; i <= kScan; ++i) {
    const double k = kLo + (kHi - kLo) * i / kScan;
    const double g = fit.misfit(k);
    if (std::isfinite(g) && std::isfinite(prev_g) && (prev_g == 0.0 || prev_g * g < 0.0)) {
      double lo = prev_k;
      double hi = k;
      double glo = prev_g;
      for (int it = 0; it < 60 && glo != 0.0; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double gm = fit.misfit(mid);
        if (glo * gm <= 0.0) {
          hi = mid;
        } else {
          lo = mid;
          glo = gm;
        }
      }
      const double root = glo == 0.0 ? lo : 0.5 * (lo + hi);
      if (!best || std::abs(root - hint) < std::abs(*best - hint)) best = root;
    }
    prev_k = k;
    prev_g = g;
  }
  if (!best) return std::nullopt;
  const double value = fit.limit(*best);
  if (!std::isfinite(value)) return std::nullopt;
  return Step{value, *best, true};
}

Step estimate(std::span<const double> values) {
  const std::size_t n = values.size();
  const Step classic = extrapolate3(values[n - 3], values[n - 2], values[n - 1]);
  if (!std::isfinite(classic.order)) return classic;
  const int terms = std::min<int>(kMaxTerms, static_cast<int>(n) - 2);
  if (terms < 2) return classic;
  const double hint = classic.ok ? classic.order : 1.0;
  if (auto s = series_step(values, terms, hint)) return *s;
  return classic;
}

}  // namespace

Extrapolation richardson_halving(std::span<const double> values) {
  if (values.size() < 3) throw InvariantError("extrapolation needs at least three samples");
  const std::size_t n = values.size();
  Extrapolation out;
  const Step last = estimate(values);
  out.value = last.value;
  out.order = last.order;
  out.converged = last.ok;
  if (!last.ok) {
    out.spread = std::abs(values[n - 1] - values[n - 2]);
    return out;
  }
  if (!std::isfinite(last.order)) {
    out.spread = 0.0;
    return out;
  }
  if (n >= 4) {
    const Step prev = estimate(values.first(n - 1));
    out.spread = prev.ok ? std::abs(last.value - prev.value) : std::abs(values[n - 1] - values[n - 2]);
  } else {
    out.spread = std::abs(values[n - 1] - values[n - 2]);
  }
  return out;
}

LinearFit fit_line(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  if (n < 2 || y.size() != n) throw InvariantError("fit needs at least two paired samples");
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw InvariantError("fit abscissae are all equal");
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ssr = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double e = y[i] - (fit.intercept + fit.slope * x[i]);
    ssr += e * e;
  }
  fit.residual = std::sqrt(ssr / static_cast<double>(n));
  fit.slope_stderr = n > 2 ? std::sqrt(ssr / static_cast<double>(n - 2) / sxx) : 0.0;
  return fit;
}

}  // namespace hml
