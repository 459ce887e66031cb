#pragma once

#include <stdexcept>
#include <string>

namespace dunkl {

/// Parameter outside the documented range (nonpositive multiplicity, bad m, ...).
class InvalidParameter : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Argument outside the mathematical domain of an operation (t <= 0, r <= 0).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Operation called on an object it does not support (e.g. dihedral Lambda on a product system).
class InvalidUsage : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Group closure exceeded its cap; the generating roots do not span a finite group.
class NonFiniteGroup : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Exhaustive enumeration would exceed its configured size cap.
class OracleTooLarge : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Quadrature failed to converge within the maximum order.
class PrecisionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UnsupportedDimension : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Finite-difference stencil would straddle a reflection wall.
class WallProximity : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Explicit step violated positivity; carries a suggested smaller time step.
class CflError : public std::runtime_error {
 public:
  CflError(const std::string& what, double suggested_dt)
      : std::runtime_error(what), suggested_dt_(suggested_dt) {}
  double suggested_dt() const noexcept { return suggested_dt_; }

 private:
  double suggested_dt_;
};

/// PDE kernel estimate not resolved to the requested band.
class ResolutionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace dunkl
