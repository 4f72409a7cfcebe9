#include "chernoff/dgp.hpp"

#include <algorithm>
#include <cmath>

#include "chernoff/errors.hpp"

namespace chernoff {
namespace {

constexpr int kMaxScannedOrder = 16;
constexpr double kVanishing = 1e-12;

double falling_factorial(int j, int k) {
  double r = 1.0;
  for (int m = 0; m < k; ++m) r *= static_cast<double>(j - m);
  return r;
}

// sum_j c_j (x - s)^j with exact derivatives.
TruthFunction polynomial_truth(std::string name, std::vector<double> c, double s) {
  auto value = [c, s](double x) {
    double p = 0.0;
    for (std::size_t j = c.size(); j-- > 0;) p = p * (x - s) + c[j];
    return p;
  };
  auto deriv = [c, s](int k, double x) {
    double p = 0.0;
    for (std::size_t j = c.size(); j-- > static_cast<std::size_t>(k);) {
      p = p * (x - s) + c[j] * falling_factorial(static_cast<int>(j), k);
    }
    return p;
  };
  return {std::move(name), value, deriv};
}

std::vector<TruthFunction> make_catalog() {
  std::vector<TruthFunction> v;
  v.push_back(polynomial_truth("linear", {0.0, 1.0}, 0.0));
  v.push_back({"exp", [](double x) { return std::exp(x); },
               [](int, double x) { return std::exp(x); }});
  v.push_back(polynomial_truth("cubic", {0.0, 0.0, 0.0, 1.0}, 0.5));
  v.push_back(polynomial_truth("cubic_quintic", {0.0, 0.0, 0.0, 1.0, 0.0, 1.0}, 0.5));
  v.push_back(polynomial_truth("quadratic_quartic", {0.0, 0.0, 1.0, 0.0, 1.0}, 0.0));
  v.push_back(polynomial_truth("fig1_quadratic", {0.0, 0.0, 2.0}, 0.0));
  v.push_back(polynomial_truth("fig1_quartic", {0.0, 0.0, 0.0, 0.0, 4.0}, 0.0));
  v.push_back(polynomial_truth("constant", {0.0}, 0.0));
  return v;
}

}  // namespace

const std::vector<TruthFunction>& builtin_truths() {
  static const std::vector<TruthFunction> catalog = make_catalog();
  return catalog;
}

const TruthFunction& find_truth(const std::string& name) {
  for (const auto& t : builtin_truths()) {
    if (t.name == name) return t;
  }
  throw ConfigError("unknown truth function '" + name + "'");
}

Smoothness smoothness_at(const TruthFunction& truth, double x0) {
  Smoothness s;
  for (int k = 1; k <= kMaxScannedOrder; ++k) {
    const double d = truth.derivative(k, x0);
    if (std::fabs(d) <= kVanishing) continue;
    if (!is_finite_order(s.alpha)) {
      s.alpha = k;
      s.f_alpha = d;
    } else {
      s.alpha_star = k;
      s.f_alpha_star = d;
      break;
    }
  }
  return s;
}

PointSpec PointSpec::interior(double x0) { return {false, x0, 0.0}; }
PointSpec PointSpec::boundary_at(double rho) { return {true, 0.0, rho}; }

DesignSpec DesignSpec::fixed(double lambda0) { return {Kind::Fixed, lambda0, 1, 0.0}; }
DesignSpec DesignSpec::random_uniform() { return {Kind::RandomUniform, 1.0, 1, 0.0}; }
DesignSpec DesignSpec::beta_regular(int beta, double kappa) {
  return {Kind::RandomBetaRegular, 1.0, beta, kappa};
}

const char* to_string(ErrorLaw law) noexcept {
  switch (law) {
    case ErrorLaw::Rademacher: return "rademacher";
    case ErrorLaw::Gaussian: return "gaussian";
    case ErrorLaw::Laplace: return "laplace";
    case ErrorLaw::CenteredExponential: return "centered_exponential";
  }
  return "?";
}

ErrorLaw parse_error_law(const std::string& name) {
  for (ErrorLaw l : {ErrorLaw::Rademacher, ErrorLaw::Gaussian, ErrorLaw::Laplace,
                     ErrorLaw::CenteredExponential}) {
    if (name == to_string(l)) return l;
  }
  throw ConfigError("unknown error law '" + name + "'");
}

const TruthFunction& ScenarioSpec::truth_function() const { return find_truth(truth); }

Smoothness ScenarioSpec::smoothness() const { return smoothness_at(truth_function(), x0()); }

namespace {

// BetaRegular: pi(x) = c (1 + kappa (x - x0)^beta) on [0, 1].
double beta_normalizer(const DesignSpec& d, double x0) {
  const double b1 = d.beta + 1.0;
  const double mass = 1.0 + d.kappa * (std::pow(1.0 - x0, b1) - std::pow(-x0, b1)) / b1;
  return 1.0 / mass;
}

}  // namespace

double ScenarioSpec::lambda0() const {
  switch (design.kind) {
    case DesignSpec::Kind::Fixed: return design.lambda0;
    case DesignSpec::Kind::RandomUniform: return 1.0;
    case DesignSpec::Kind::RandomBetaRegular: return beta_normalizer(design, x0());
  }
  return 1.0;
}

void ScenarioSpec::validate() const {
  const TruthFunction& tf = truth_function();
  (void)tf;
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw ConfigError("sigma must be >= 0");
  const Smoothness s = smoothness();
  if (point.boundary) {
    if (!(point.rho > 0.0 && point.rho < 1.0)) throw ConfigError("rho must lie in (0, 1)");
  } else if (!(point.x0 > 0.0 && point.x0 < 1.0)) {
    throw ConfigError("interior point must lie in (0, 1)");
  }
  if (is_finite_order(s.alpha)) {
    if (!point.boundary && s.alpha % 2 == 0) {
      throw ConfigError("first non-vanishing derivative at an interior point must be odd");
    }
    if (!(s.f_alpha > 0.0)) throw ConfigError("first non-vanishing derivative must be positive");
  }
  const bool global = !is_finite_order(s.alpha) ||
                      (point.boundary && point.rho >= 1.0 / (2.0 * s.alpha + 1.0));
  switch (design.kind) {
    case DesignSpec::Kind::Fixed:
      if (!(design.lambda0 > 0.0) || !std::isfinite(design.lambda0)) {
        throw ConfigError("Lambda0 must be positive");
      }
      if (global && design.lambda0 != 1.0) {
        throw ConfigError("this scenario requires the globally equally spaced design");
      }
      break;
    case DesignSpec::Kind::RandomUniform: break;
    case DesignSpec::Kind::RandomBetaRegular: {
      if (global) throw ConfigError("this scenario requires the uniform random design");
      if (design.beta < 1) throw ConfigError("beta must be >= 1");
      for (int i = 0; i <= 1000; ++i) {
        const double p = design_density(*this, i / 1000.0);
        if (!(p >= 0.5 && p <= 1.5)) {
          throw ConfigError("design density leaves [1/2, 3/2]; reduce kappa");
        }
      }
      break;
    }
  }
}

ScenarioSpec canonical_scenario() {
  ScenarioSpec s;
  s.truth = "fig1_quadratic";
  s.point = PointSpec::interior(0.5);
  s.design = DesignSpec::fixed(1.0);
  s.error = ErrorLaw::Rademacher;
  s.sigma = 1.0;
  return s;
}

ScenarioSpec flat_scenario() {
  ScenarioSpec s = canonical_scenario();
  s.truth = "constant";
  return s;
}

double x_star(const ScenarioSpec& spec, std::size_t n) {
  if (!spec.point.boundary) return spec.point.x0;
  return std::pow(static_cast<double>(n), -spec.point.rho);
}

double design_density(const ScenarioSpec& spec, double x) {
  switch (spec.design.kind) {
    case DesignSpec::Kind::Fixed: throw ConfigError("a fixed design has no sampling density");
    case DesignSpec::Kind::RandomUniform: return 1.0;
    case DesignSpec::Kind::RandomBetaRegular: {
      const double c = beta_normalizer(spec.design, spec.x0());
      return c * (1.0 + spec.design.kappa * std::pow(x - spec.x0(), spec.design.beta));
    }
  }
  return 1.0;
}

double design_cdf(const ScenarioSpec& spec, double x) {
  x = std::clamp(x, 0.0, 1.0);
  switch (spec.design.kind) {
    case DesignSpec::Kind::Fixed: throw ConfigError("a fixed design has no sampling density");
    case DesignSpec::Kind::RandomUniform: return x;
    case DesignSpec::Kind::RandomBetaRegular: {
      const double x0 = spec.x0();
      const double b1 = spec.design.beta + 1.0;
      const double c = beta_normalizer(spec.design, x0);
      return c * (x + spec.design.kappa * (std::pow(x - x0, b1) - std::pow(-x0, b1)) / b1);
    }
  }
  return x;
}

namespace {

// Index-to-location map with spacing 1/(Lambda0 n) on a block around x0 and
// linear interpolation to (0, 0) and (n, 1) outside it.
std::vector<double> locally_spaced_design(double x0, double lambda0, std::size_t n) {
  std::vector<double> xs(n);
  const double nn = static_cast<double>(n);
  if (lambda0 == 1.0) {
    for (std::size_t i = 0; i < n; ++i) xs[i] = static_cast<double>(i + 1) / nn;
    return xs;
  }
  const double spacing = 1.0 / (lambda0 * nn);
  const double delta0 = 0.25 * std::min({x0 > 0.0 ? x0 : 1.0, 1.0 - x0, 1.0 / lambda0});
  const long long i0 = x0 > 0.0 ? std::llround(nn * x0) : 0;
  long long m = static_cast<long long>(std::floor(delta0 * lambda0 * nn));
  m = std::min({m, i0 > 0 ? i0 - 1 : m, static_cast<long long>(n) - i0 - 1});
  if (m < 0) m = 0;
  const long long lo = x0 > 0.0 ? i0 - m : 1;
  const long long hi = x0 > 0.0 ? i0 + m : m;
  auto block = [&](long long i) { return x0 + static_cast<double>(i - i0) * spacing; };
  const double x_lo = block(lo);
  const double x_hi = block(hi);
  for (long long i = 1; i <= static_cast<long long>(n); ++i) {
    double x;
    if (i >= lo && i <= hi) {
      x = block(i);
    } else if (i < lo) {
      x = x_lo * static_cast<double>(i) / static_cast<double>(lo);
    } else {
      x = x_hi + (1.0 - x_hi) * static_cast<double>(i - hi) / static_cast<double>(n - hi);
    }
    xs[static_cast<std::size_t>(i - 1)] = x;
  }
  return xs;
}

double invert_cdf(const ScenarioSpec& spec, double p) {
  double lo = 0.0, hi = 1.0, x = p;
  for (int it = 0; it < 100; ++it) {
    const double f = design_cdf(spec, x) - p;
    if (f > 0.0) hi = x; else lo = x;
    if (std::fabs(f) < 1e-15) break;
    double next = x - f / design_density(spec, x);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (next == x) break;
    x = next;
  }
  return x;
}

}  // namespace

std::vector<double> gen_design(const ScenarioSpec& spec, std::size_t n, Stream& rng) {
  if (n == 0) throw InputError("design size must be positive");
  switch (spec.design.kind) {
    case DesignSpec::Kind::Fixed: return locally_spaced_design(spec.x0(), spec.design.lambda0, n);
    case DesignSpec::Kind::RandomUniform: {
      std::vector<double> xs(n);
      for (double& x : xs) x = rng.uniform();
      std::sort(xs.begin(), xs.end());
      return xs;
    }
    case DesignSpec::Kind::RandomBetaRegular: {
      std::vector<double> xs(n);
      for (double& x : xs) x = invert_cdf(spec, rng.uniform());
      std::sort(xs.begin(), xs.end());
      return xs;
    }
  }
  return {};
}

void gen_errors(ErrorLaw law, double sigma, Stream& rng, std::span<double> out) {
  switch (law) {
    case ErrorLaw::Rademacher: {
      std::size_t i = 0;
      while (i < out.size()) {
        std::uint32_t bits = rng.next_u32();
        for (int b = 0; b < 32 && i < out.size(); ++b, bits >>= 1) {
          out[i++] = (bits & 1u) ? sigma : -sigma;
        }
      }
      break;
    }
    case ErrorLaw::Gaussian:
      for (double& e : out) e = sigma * rng.normal();
      break;
    case ErrorLaw::Laplace: {
      const double b = sigma / std::sqrt(2.0);
      for (double& e : out) {
        const double u = rng.uniform();
        e = u < 0.5 ? b * std::log(2.0 * u) : -b * std::log(2.0 * (1.0 - u));
      }
      break;
    }
    case ErrorLaw::CenteredExponential:
      for (double& e : out) e = sigma * (-std::log(rng.uniform()) - 1.0);
      break;
  }
}

RegressionSample gen_sample(const ScenarioSpec& spec, std::size_t n, Stream& rng) {
  RegressionSample s;
  s.xs = gen_design(spec, n, rng);
  const TruthFunction& tf = spec.truth_function();
  s.truth.resize(n);
  for (std::size_t i = 0; i < n; ++i) s.truth[i] = tf.f(s.xs[i]);
  s.ys.resize(n);
  gen_errors(spec.error, spec.sigma, rng, s.ys);
  for (std::size_t i = 0; i < n; ++i) s.ys[i] += s.truth[i];
  return s;
}

}  // namespace chernoff
