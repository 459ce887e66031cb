#pragma once

#include <cmath>

#include "dunkl/lambda.hpp"
#include "dunkl/volume.hpp"

namespace dunkl {

enum class LambdaMode { dp, dihedral };

/// log of w(B(x, sqrt t))^-1 exp(-c d(x, y)^2 / t) Lambda(x, y, t), with the comparable volume.
inline double log_envelope(const RootSystem& rs, const ReflectionGroup& grp, const Vec& x,
                           const Vec& y, double t, double c, LambdaMode mode = LambdaMode::dp) {
  detail::require_positive_t(t, "envelope");
  if (!(c > 0.0)) throw DomainError("envelope: c must be > 0");
  const double d = orbit_distance(rs, grp, x, y).d;
  const double lam =
      mode == LambdaMode::dp ? lambda_dp(rs, grp, x, y, t) : lambda_dihedral(rs, grp, x, y, t);
  return -log_volume_comparable(rs, x, std::sqrt(t)) - c * d * d / t + std::log(lam);
}

inline double envelope(const RootSystem& rs, const ReflectionGroup& grp, const Vec& x,
                       const Vec& y, double t, double c, LambdaMode mode = LambdaMode::dp) {
  return std::exp(log_envelope(rs, grp, x, y, t, c, mode));
}

}  // namespace dunkl
