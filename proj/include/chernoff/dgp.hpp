#pragma once

#include <climits>
#include <functional>
#include <string>
#include <vector>

#include "chernoff/isotonic.hpp"
#include "chernoff/rng.hpp"

namespace chernoff {

/// Smoothness orders are positive integers; kInfiniteOrder marks "no such
/// derivative".
inline constexpr int kInfiniteOrder = INT_MAX;

inline bool is_finite_order(int k) noexcept { return k != kInfiniteOrder; }

struct TruthFunction {
  std::string name;
  std::function<double(double)> f;
  /// k-th derivative at x, k >= 1.
  std::function<double(int, double)> derivative;
};

/// Built-in truths: linear, exp, cubic, cubic_quintic, quadratic_quartic,
/// fig1_quadratic (2x^2), fig1_quartic (4x^4), constant.
const std::vector<TruthFunction>& builtin_truths();
const TruthFunction& find_truth(const std::string& name);

struct Smoothness {
  int alpha = kInfiniteOrder;
  int alpha_star = kInfiniteOrder;
  double f_alpha = 0.0;       // f0^(alpha)(x0)
  double f_alpha_star = 0.0;  // f0^(alpha*)(x0)
};

/// First and second non-vanishing derivative orders at x0.
Smoothness smoothness_at(const TruthFunction& truth, double x0);

struct PointSpec {
  bool boundary = false;
  double x0 = 0.5;   // interior point; 0 when boundary
  double rho = 0.0;  // boundary rate, evaluation at n^-rho

  static PointSpec interior(double x0);
  static PointSpec boundary_at(double rho);
};

struct DesignSpec {
  enum class Kind { Fixed, RandomUniform, RandomBetaRegular };

  Kind kind = Kind::Fixed;
  double lambda0 = 1.0;  // fixed design local density
  int beta = 1;          // BetaRegular smoothness order
  double kappa = 0.0;    // BetaRegular amplitude

  static DesignSpec fixed(double lambda0 = 1.0);
  static DesignSpec random_uniform();
  static DesignSpec beta_regular(int beta, double kappa);
};

enum class ErrorLaw { Rademacher, Gaussian, Laplace, CenteredExponential };

const char* to_string(ErrorLaw law) noexcept;
ErrorLaw parse_error_law(const std::string& name);

struct ScenarioSpec {
  std::string truth = "fig1_quadratic";
  PointSpec point;
  DesignSpec design;
  ErrorLaw error = ErrorLaw::Rademacher;
  double sigma = 1.0;

  /// Throws ConfigError on any violated invariant.
  void validate() const;

  const TruthFunction& truth_function() const;
  /// Orders and derivatives at x0 (0 for boundary points).
  Smoothness smoothness() const;
  double x0() const noexcept { return point.boundary ? 0.0 : point.x0; }
  /// Design density at x0.
  double lambda0() const;
  bool random_design() const noexcept { return design.kind != DesignSpec::Kind::Fixed; }
};

/// The canonical scenario: 2x^2 at 1/2, X_i = i/n, Rademacher errors.
ScenarioSpec canonical_scenario();
/// f = 0 at 1/2, X_i = i/n, Rademacher errors.
ScenarioSpec flat_scenario();

/// Evaluation point x* (x0, or n^-rho at the boundary).
double x_star(const ScenarioSpec& spec, std::size_t n);

/// Design density and distribution function used by gen_design.
double design_density(const ScenarioSpec& spec, double x);
double design_cdf(const ScenarioSpec& spec, double x);

std::vector<double> gen_design(const ScenarioSpec& spec, std::size_t n, Stream& rng);

/// Fills `out` with i.i.d. errors of the given law and standard deviation.
void gen_errors(ErrorLaw law, double sigma, Stream& rng, std::span<double> out);

RegressionSample gen_sample(const ScenarioSpec& spec, std::size_t n, Stream& rng);

}  // namespace chernoff
