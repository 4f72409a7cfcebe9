#include "chernoff/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "chernoff/errors.hpp"
#include "chernoff/stats.hpp"

namespace chernoff {
namespace {

constexpr double kBranchTol = 1e-12;

double factorial(int k) {
  double r = 1.0;
  for (int m = 2; m <= k; ++m) r *= m;
  return r;
}

enum class Branch { Interior, BoundarySlow, BoundaryCritical, BoundaryFast };

Branch branch_of(const ScenarioSpec& spec, int alpha) {
  if (!spec.point.boundary) return Branch::Interior;
  const double rho = spec.point.rho;
  if (!(rho > 0.0 && rho < 1.0)) throw ConfigError("rho must lie in (0, 1)");
  if (!is_finite_order(alpha)) return Branch::BoundaryFast;
  const double thr = 1.0 / (2.0 * alpha + 1.0);
  if (std::fabs(rho - thr) <= kBranchTol) return Branch::BoundaryCritical;
  return rho < thr ? Branch::BoundarySlow : Branch::BoundaryFast;
}

struct Term {
  double exponent;
  double log_power;
};

}  // namespace

OracleRates oracle_rates(const ScenarioSpec& spec, std::size_t n) {
  if (n < 2) throw DomainError("oracle rates need n >= 2");
  const Smoothness s = spec.smoothness();
  const Branch br = branch_of(spec, s.alpha);
  const double nn = static_cast<double>(n);
  const bool finite = is_finite_order(s.alpha);
  const double a = finite ? static_cast<double>(s.alpha) : 0.0;
  const double rho = spec.point.rho;

  double r_exp = 0.0;  // r_n = n^-r_exp
  switch (br) {
    case Branch::Interior: r_exp = finite ? 1.0 / (2.0 * a + 1.0) : 0.0; break;
    case Branch::BoundarySlow: r_exp = (1.0 - 2.0 * rho * (a - 1.0)) / 3.0; break;
    case Branch::BoundaryCritical:
    case Branch::BoundaryFast: r_exp = rho; break;
  }

  const bool random = spec.random_design();
  const double log_r = (finite && random) ? 1.0 : 0.0;
  const bool beta_finite = spec.design.kind == DesignSpec::Kind::RandomBetaRegular;
  const bool star_finite = is_finite_order(s.alpha_star);
  std::vector<Term> terms;
  switch (br) {
    case Branch::Interior:
    case Branch::BoundaryCritical:
      terms.push_back({finite ? a / (2.0 * a + 1.0) : 0.5, log_r});
      if (finite && star_finite) terms.push_back({(s.alpha_star - a) / (2.0 * a + 1.0), 0.0});
      if (finite && beta_finite) terms.push_back({spec.design.beta / (2.0 * a + 1.0), 0.0});
      break;
    case Branch::BoundarySlow:
      terms.push_back({(1.0 - (2.0 * a + 1.0) * rho) / 3.0, 0.0});
      if (star_finite) terms.push_back({rho * (s.alpha_star - a), 0.0});
      break;
    case Branch::BoundaryFast:
      terms.push_back({(1.0 - rho) / 2.0, log_r});
      if (finite) terms.push_back({((2.0 * a + 1.0) * rho - 1.0) / 2.0, 0.0});
      break;
  }

  OracleRates out{};
  out.r_n = std::pow(nn, -r_exp);
  out.omega_inv = std::sqrt(nn * out.r_n);
  out.B_n = -1.0;
  for (const Term& t : terms) {
    const double v = std::pow(nn, -t.exponent) * std::pow(std::log(nn), t.log_power);
    if (v > out.B_n) {
      out.B_n = v;
      out.B_exponent = t.exponent;
      out.B_log_power = t.log_power;
    }
  }
  return out;
}

DriftSpec drift_Q(const ScenarioSpec& spec) {
  const Smoothness s = spec.smoothness();
  if (!is_finite_order(s.alpha)) return DriftSpec::zero();
  switch (branch_of(spec, s.alpha)) {
    case Branch::Interior:
      return DriftSpec::interior(s.alpha, s.f_alpha / factorial(s.alpha + 1));
    case Branch::BoundarySlow:
      return DriftSpec::boundary_quadratic(s.f_alpha / (2.0 * factorial(s.alpha - 1)));
    case Branch::BoundaryCritical: {
      std::vector<double> c(static_cast<std::size_t>(s.alpha));
      for (int l = 1; l <= s.alpha; ++l) {
        c[static_cast<std::size_t>(l - 1)] =
            s.f_alpha / (factorial(s.alpha - l) * factorial(l + 1));
      }
      return DriftSpec::boundary_full(c);
    }
    case Branch::BoundaryFast: return DriftSpec::zero();
  }
  return DriftSpec::zero();
}

double local_average(double x_star, double r_n, double h1, double h2,
                     const RegressionSample& sample) {
  sample.validate();
  const double lo = x_star - h1 * r_n;
  const double hi = x_star + h2 * r_n;
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    if (sample.xs[i] >= lo && sample.xs[i] <= hi) {
      sum += sample.ys[i];
      ++count;
    }
  }
  if (count == 0) throw DomainError("local average window holds no design point");
  return sum / static_cast<double>(count);
}

BiasExpansion bias_expansion(const ScenarioSpec& spec, std::size_t n, double h1, double h2) {
  if (!(h1 >= 0.0 && h2 >= 0.0 && h1 + h2 > 0.0)) throw DomainError("need h1, h2 >= 0, h1 + h2 > 0");
  const Smoothness s = spec.smoothness();
  if (!is_finite_order(s.alpha)) return {0.0, 0.0};
  const OracleRates rates = oracle_rates(spec, n);
  const double r = rates.r_n;
  const double d = spec.point.boundary ? x_star(spec, n) : 0.0;

  double leading = 0.0;
  for (int l = 1; l <= s.alpha; ++l) {
    const double c = s.f_alpha / (factorial(s.alpha - l) * factorial(l + 1));
    leading += c * std::pow(d, s.alpha - l) * std::pow(r, l) *
               (std::pow(h2, l + 1) - std::pow(-h1, l + 1)) / (h1 + h2);
  }

  const double reach = d + r * std::max(h1, h2);
  double remainder = 0.0;
  if (is_finite_order(s.alpha_star)) {
    remainder = std::fabs(s.f_alpha_star) / factorial(s.alpha_star) *
                std::pow(reach, s.alpha_star);
  }
  const double slope = s.f_alpha / factorial(s.alpha - 1) * std::pow(reach, s.alpha - 1);
  const double nn = static_cast<double>(n);
  const double spread =
      spec.random_design()
          ? r * (h1 + h2) / std::sqrt(std::max(1.0, nn * r * (h1 + h2) * spec.lambda0()))
          : 1.0 / (spec.lambda0() * nn);
  remainder = std::max(remainder, slope * spread);
  return {leading, remainder};
}

double oracle_limit_cdf(double t, double h1, double h2, double sigma, double lambda0,
                        const DriftSpec& Q) {
  const double h = h1 + h2;
  if (!(h > 0.0)) throw DomainError("oracle limit needs h1 + h2 > 0");
  if (!(lambda0 > 0.0)) throw DomainError("Lambda0 must be positive");
  const double mu = (Q(h2) - Q(-h1)) / h;
  const double sd = sigma / std::sqrt(lambda0 * h);
  if (sd == 0.0) return t >= mu ? 1.0 : 0.0;
  return normal_cdf((t - mu) / sd);
}

}  // namespace chernoff
