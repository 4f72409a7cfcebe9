#pragma once

#include <cstdint>
#include <limits>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "chernoff/dgp.hpp"
#include "chernoff/drift.hpp"
#include "chernoff/ecdf.hpp"
#include "chernoff/paths.hpp"
#include "chernoff/rng.hpp"

namespace chernoff {

inline constexpr double kUnbounded = std::numeric_limits<double>::infinity();

/**
 * sup_{h1 in H1} inf_{h2 in H2} of
 *   (sigma / sqrt(Lambda0)) (B(h2) - B(-h1)) / (h1 + h2) + (Q(h2) - Q(-h1)) / (h1 + h2)
 * with H1 = (0, u1], H2 = [0, u2]. Unbounded ends are truncated at trunc1 /
 * trunc2 (0 selects default_truncation).
 */
struct LimitSpec {
  double sigma = 1.0;
  double lambda0 = 1.0;
  DriftSpec Q;
  double u1 = kUnbounded;
  double u2 = kUnbounded;
  double step = 1e-4;
  double trunc1 = 0.0;
  double trunc2 = 0.0;
  /// Smoothness order driving the default truncation (kInfiniteOrder allowed).
  int alpha = 1;

  void validate() const;
  double left_end() const;   // -u1 or -T1
  double right_end() const;  // u2 or T2
  std::string canonical() const;
};

/// max(3, log(1/step)^(1/(2 alpha))).
double default_truncation(double step, int alpha);

/// Table 1 ranges and the drift for a scenario.
LimitSpec limit_spec_for(const ScenarioSpec& spec);

/// Sup-inf draws for one LimitSpec. The grid and drift values are built once;
/// sample() needs a per-thread Workspace.
class LimitSampler {
 public:
  struct Workspace {
    std::vector<double> values;
    std::vector<std::size_t> stack;
  };

  explicit LimitSampler(LimitSpec spec);

  const LimitSpec& spec() const noexcept { return spec_; }
  const Grid& grid() const noexcept { return *grid_; }

  double sample(Stream& rng, Workspace& ws) const;
  /// The functional on a given standard BM path (values on grid()).
  double evaluate(std::span<double> bm_values, std::vector<std::size_t>& stack) const;

 private:
  LimitSpec spec_;
  std::shared_ptr<const Grid> grid_;
  std::vector<double> drift_;
  double scale_;
  bool cap_at_zero_;
};

double sample_limit_supinf(const LimitSpec& spec, Stream& rng);

/// Brute-force O(grid^2) double scan of the same functional; test oracle.
double supinf_bruteforce(std::span<const double> times, std::span<const double> path);

/// Slope at 0 of the GCM of B(t) + t^(alpha+1) on [-T, T].
double sample_D_alpha(int alpha, double T, double step, Stream& rng);

/// 2 * first argmax of noise * B(t) - t^2 on [-T, T].
double sample_D1_argmax(double T, double step, Stream& rng, double noise = 1.0);

class ArgmaxSampler {
 public:
  ArgmaxSampler(double T, double step, double noise = 1.0);

  double sample(Stream& rng, std::vector<double>& values) const;
  /// 2 * first argmax on a given standard BM path.
  double evaluate(std::span<double> bm_values) const;
  const Grid& grid() const noexcept { return *grid_; }

 private:
  std::shared_ptr<const Grid> grid_;
  double noise_;
};

/// LimitSpec for D_alpha: sigma = 1, Q = t^(alpha+1), symmetric truncation T.
LimitSpec d_alpha_spec(int alpha, double T, double step);

/// (f_alpha / (alpha + 1)!)^(1 / (2 alpha + 1)); 1 for alpha = infinity.
double c_alpha(double f_alpha_deriv, int alpha);

/// Monte Carlo CDF of the sup-inf functional.
EmpiricalCdf limit_cdf_table(const LimitSpec& spec, std::span<const double> t_grid,
                             std::uint64_t n_reps, std::uint64_t seed, unsigned workers = 1);

/// CSV with header t,prob,n_reps,seed,spec_hash.
void write_cdf_table(const std::string& path, const EmpiricalCdf& table,
                     const std::string& spec_hash, const std::string& comment = {});
struct StoredCdfTable {
  EmpiricalCdf table;
  std::string spec_hash;
};
StoredCdfTable read_cdf_table(const std::string& path);

/// Linear interpolation of a stored table; exact at grid points.
double interpolate_cdf(const EmpiricalCdf& table, double t);

}  // namespace chernoff
