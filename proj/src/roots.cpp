#include <algorithm>
#include <cmath>
#include <numbers>

#include "hml/errors.hpp"
#include "hml/function_model.hpp"

namespace hml {
namespace {

constexpr int kMaxIterations = 800;
constexpr double kClusterTolerance = 1e-6;

struct HornerPair {
  cplx value;
  cplx deriv;
};

HornerPair horner(std::span<const cplx> c, cplx z) {
  cplx f = c.back();
  cplx d = 0.0;
  for (std::size_t k = c.size() - 1; k-- > 0;) {
    d = d * z + f;
    f = f * z + c[k];
  }
  return {f, d};
}

// Simple roots of a polynomial with c[0] != 0 and c.back() != 0.
std::vector<cplx> aberth(std::span<const cplx> c) {
  const int n = static_cast<int>(c.size()) - 1;
  std::vector<cplx> z(static_cast<std::size_t>(n));
  if (n == 0) return z;
  if (n == 1) {
    z[0] = -c[0] / c[1];
    return z;
  }

  // Start on a circle whose radius is the geometric mean of the root moduli.
  const double radius = std::pow(std::abs(c[0]) / std::abs(c.back()), 1.0 / n);
  for (int k = 0; k < n; ++k) {
    const double theta = 2.0 * std::numbers::pi * k / n + 0.4;
    z[static_cast<std::size_t>(k)] = std::polar(radius, theta);
  }

  std::vector<bool> done(static_cast<std::size_t>(n), false);
  for (int iter = 0; iter < kMaxIterations; ++iter) {
    bool all_done = true;
    for (int i = 0; i < n; ++i) {
      const auto ui = static_cast<std::size_t>(i);
      if (done[ui]) continue;
      const auto [f, d] = horner(c, z[ui]);
      if (f == cplx{}) {
        done[ui] = true;
        continue;
      }
      const cplx ratio = f / d;
      cplx repulsion = 0.0;
      for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        const cplx diff = z[ui] - z[static_cast<std::size_t>(j)];
        if (diff != cplx{}) repulsion += 1.0 / diff;
      }
      const cplx step = ratio / (1.0 - ratio * repulsion);
      if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) {
        done[ui] = true;
        continue;
      }
      z[ui] -= step;
      if (std::abs(step) <= 4e-16 * std::max(1.0, std::abs(z[ui])))
        done[ui] = true;
      else
        all_done = false;
    }
    if (all_done) return z;
  }
  // Slow (multiple-root) convergence is acceptable if residuals are tiny.
  double scale = 0.0;
  for (const cplx& ci : c) scale = std::max(scale, std::abs(ci));
  for (const cplx& zi : z) {
    double mag = 0.0;
    double pw = 1.0;
    for (const cplx& ci : c) {
      mag += std::abs(ci) * pw;
      pw *= std::abs(zi);
    }
    if (std::abs(horner(c, zi).value) > 1e-10 * mag)
      throw ConvergenceError("polynomial root iteration did not converge");
  }
  return z;
}

}  // namespace

std::vector<Zero> polynomial_zeros(std::span<const cplx> coeffs_in) {
  std::vector<cplx> c(coeffs_in.begin(), coeffs_in.end());
  while (c.size() > 1 && c.back() == cplx{}) c.pop_back();
  if (c.size() == 1) {
    if (c[0] == cplx{}) throw InvariantError("zero polynomial has no isolated zeros");
    return {};
  }
  if (static_cast<int>(c.size()) - 1 > kMaxPolynomialDegree)
    throw InvariantError("polynomial degree exceeds 64");

  std::vector<Zero> zeros;
  std::size_t origin_order = 0;
  while (c[origin_order] == cplx{}) ++origin_order;
  if (origin_order > 0) zeros.push_back({cplx{0.0, 0.0}, static_cast<int>(origin_order)});
  c.erase(c.begin(), c.begin() + static_cast<std::ptrdiff_t>(origin_order));

  double scale = 0.0;
  for (const cplx& ci : c) scale = std::max(scale, std::abs(ci));
  for (cplx& ci : c) ci /= scale;

  std::vector<cplx> roots = aberth(c);
  std::sort(roots.begin(), roots.end(), [](cplx a, cplx b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });

  // Group numerically coincident roots into multiple zeros.
  std::vector<bool> used(roots.size(), false);
  for (std::size_t i = 0; i < roots.size(); ++i) {
    if (used[i]) continue;
    std::vector<std::size_t> members{i};
    used[i] = true;
    for (std::size_t m = 0; m < members.size(); ++m) {
      for (std::size_t j = 0; j < roots.size(); ++j) {
        if (used[j]) continue;
        const cplx a = roots[members[m]];
        if (std::abs(a - roots[j]) <= kClusterTolerance * std::max(1.0, std::abs(a))) {
          used[j] = true;
          members.push_back(j);
        }
      }
    }
    cplx mean = 0.0;
    for (std::size_t m : members) mean += roots[m];
    mean /= static_cast<double>(members.size());
    zeros.push_back({mean, static_cast<int>(members.size())});
  }
  return zeros;
}

}  // namespace hml
