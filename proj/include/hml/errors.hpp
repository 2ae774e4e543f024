#pragma once

#include <stdexcept>
#include <string>

namespace hml {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Evaluation outside the domain of a model (e.g. the binomial family at z = 1).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A model or parameter invariant was violated at construction.
class InvariantError : public Error {
 public:
  using Error::Error;
};

/// A zero of f lies too close to the circle |z| = r; perturb r and retry.
class CircleProximityError : public Error {
 public:
  CircleProximityError(const std::string& what, double radius, double distance)
      : Error(what), radius_(radius), distance_(distance) {}
  double radius() const noexcept { return radius_; }
  double distance() const noexcept { return distance_; }

 private:
  double radius_;
  double distance_;
};

class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// A field was requested exactly at (within the guard radius of) a singular zero.
class SingularPointError : public Error {
 public:
  using Error::Error;
};

/// A contour or disk leaves the admissible region.
class GeometryError : public Error {
 public:
  using Error::Error;
};

/// A check was refused because its precondition on f does not hold.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& field, const std::string& what)
      : Error(field + ": " + what), field_(field) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

}  // namespace hml
