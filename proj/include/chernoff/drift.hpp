#pragma once

#include <string>
#include <vector>

namespace chernoff {

/// Polynomial with ascending coefficients, c[0] + c[1] h + ...
struct Polynomial {
  std::vector<double> coeffs;

  double operator()(double h) const noexcept;
  bool is_zero() const noexcept;
};

/// The drift Q of the limit process. Q(0) = 0 in every branch.
struct DriftSpec {
  enum class Kind { Zero, InteriorPoly, BoundaryQuadratic, BoundaryFull };

  Kind kind = Kind::Zero;
  Polynomial poly;

  static DriftSpec zero();
  /// coef * h^(alpha+1)
  static DriftSpec interior(int alpha, double coef);
  /// coef * h^2
  static DriftSpec boundary_quadratic(double coef);
  /// sum_{l=1..alpha} coef_l h^(l+1), coefficients given for l = 1..alpha.
  static DriftSpec boundary_full(const std::vector<double>& coef_by_l);

  double operator()(double h) const noexcept { return poly(h); }
  bool is_zero() const noexcept { return poly.is_zero(); }
  std::string describe() const;
};

}  // namespace chernoff
