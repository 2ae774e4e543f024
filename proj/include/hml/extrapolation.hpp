#pragma once

#include <span>

namespace hml {

/// Richardson extrapolation of A(h) -> A(0) for samples at h, h/2, h/4, ...
/// The leading order k is fitted, never assumed: the last samples are matched
/// exactly by A0 + C0 h^k + C1 h^(k+1) + ..., and the classic three-sample
/// order estimate picks among candidate roots for k.
struct Extrapolation {
  double value = 0.0;
  /// Fitted leading order k in A(h) - A(0) ~ C h^k; infinite when the tail is already flat.
  double order = 0.0;
  /// |estimate - estimate from the samples one step earlier|.
  double spread = 0.0;
  bool converged = false;
};

Extrapolation richardson_halving(std::span<const double> values);

/// Least-squares slope of y on x with its standard error.
struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
  double residual = 0.0;  // RMS residual
};

LinearFit fit_line(std::span<const double> x, std::span<const double> y);

}  // namespace hml
