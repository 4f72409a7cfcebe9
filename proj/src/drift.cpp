#include "chernoff/drift.hpp"

#include <cmath>
#include <sstream>

#include "chernoff/errors.hpp"

namespace chernoff {

double Polynomial::operator()(double h) const noexcept {
  if (coeffs.empty()) return 0.0;
  double p = coeffs.back();
  for (std::size_t k = coeffs.size() - 1; k-- > 0;) p = p * h + coeffs[k];
  return p;
}

bool Polynomial::is_zero() const noexcept {
  for (double c : coeffs) {
    if (c != 0.0) return false;
  }
  return true;
}

DriftSpec DriftSpec::zero() { return {}; }

DriftSpec DriftSpec::interior(int alpha, double coef) {
  if (alpha < 1) throw ConfigError("interior drift needs alpha >= 1");
  if (!std::isfinite(coef)) throw ConfigError("drift coefficient not finite");
  DriftSpec d;
  d.kind = Kind::InteriorPoly;
  d.poly.coeffs.assign(static_cast<std::size_t>(alpha) + 2, 0.0);
  d.poly.coeffs.back() = coef;
  return d;
}

DriftSpec DriftSpec::boundary_quadratic(double coef) {
  if (!std::isfinite(coef)) throw ConfigError("drift coefficient not finite");
  DriftSpec d;
  d.kind = Kind::BoundaryQuadratic;
  d.poly.coeffs = {0.0, 0.0, coef};
  return d;
}

DriftSpec DriftSpec::boundary_full(const std::vector<double>& coef_by_l) {
  if (coef_by_l.empty()) throw ConfigError("boundary drift needs alpha >= 1");
  DriftSpec d;
  d.kind = Kind::BoundaryFull;
  d.poly.coeffs.assign(coef_by_l.size() + 2, 0.0);
  for (std::size_t l = 1; l <= coef_by_l.size(); ++l) {
    if (!std::isfinite(coef_by_l[l - 1])) throw ConfigError("drift coefficient not finite");
    d.poly.coeffs[l + 1] = coef_by_l[l - 1];
  }
  return d;
}

std::string DriftSpec::describe() const {
  std::ostringstream os;
  os.precision(17);
  switch (kind) {
    case Kind::Zero: os << "zero"; break;
    case Kind::InteriorPoly: os << "interior"; break;
    case Kind::BoundaryQuadratic: os << "boundary_quadratic"; break;
    case Kind::BoundaryFull: os << "boundary_full"; break;
  }
  os << '[';
  for (std::size_t k = 0; k < poly.coeffs.size(); ++k) os << (k ? "," : "") << poly.coeffs[k];
  os << ']';
  return os.str();
}

}  // namespace chernoff
