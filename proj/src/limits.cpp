#include "chernoff/limits.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "chernoff/errors.hpp"
#include "chernoff/gcm.hpp"
#include "chernoff/oracle.hpp"
#include "chernoff/parallel.hpp"
#include "chernoff/simd/kernels.hpp"

namespace chernoff {

double default_truncation(double step, int alpha) {
  if (!(step > 0.0 && step < 1.0)) throw ConfigError("step must lie in (0, 1)");
  if (!is_finite_order(alpha)) return 3.0;
  return std::max(3.0, std::pow(std::log(1.0 / step), 1.0 / (2.0 * alpha)));
}

void LimitSpec::validate() const {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw ConfigError("limit sigma must be positive");
  if (!(lambda0 > 0.0) || !std::isfinite(lambda0)) throw ConfigError("limit Lambda0 must be positive");
  if (!(step > 0.0 && step < 1.0)) throw ConfigError("limit step must lie in (0, 1)");
  if (!(u1 >= step)) throw ConfigError("H1 = (0, u1] needs u1 >= step");
  if (!(u2 >= 0.0)) throw ConfigError("H2 = [0, u2] needs u2 >= 0");
  if (trunc1 < 0.0 || trunc2 < 0.0) throw ConfigError("truncations must be nonnegative");
  if (std::isinf(u1) && trunc1 != 0.0 && trunc1 < step) throw ConfigError("truncation below step");
  if (std::isinf(u2) && trunc2 != 0.0 && trunc2 < step) throw ConfigError("truncation below step");
}

double LimitSpec::left_end() const {
  if (std::isfinite(u1)) return -u1;
  return -(trunc1 > 0.0 ? trunc1 : default_truncation(step, alpha));
}

double LimitSpec::right_end() const {
  if (std::isfinite(u2)) return u2;
  return trunc2 > 0.0 ? trunc2 : default_truncation(step, alpha);
}

std::string LimitSpec::canonical() const {
  std::ostringstream os;
  os.precision(17);
  os << "sigma=" << sigma << ";lambda0=" << lambda0 << ";Q=" << Q.describe()
     << ";H1=(0," << -left_end() << "];H2=[0," << right_end() << "]"
     << ";u1_bounded=" << std::isfinite(u1) << ";u2_bounded=" << std::isfinite(u2)
     << ";step=" << step;
  return os.str();
}

LimitSpec limit_spec_for(const ScenarioSpec& spec) {
  spec.validate();
  const Smoothness s = spec.smoothness();
  LimitSpec out;
  out.sigma = spec.sigma;
  out.lambda0 = spec.lambda0();
  out.Q = drift_Q(spec);
  out.alpha = s.alpha;
  if (is_finite_order(s.alpha)) {
    const bool wide = !spec.point.boundary ||
                      spec.point.rho < 1.0 / (2.0 * s.alpha + 1.0) - 1e-12;
    out.u1 = wide ? kUnbounded : 1.0;
    out.u2 = kUnbounded;
  } else if (!spec.point.boundary) {
    out.u1 = spec.point.x0;
    out.u2 = 1.0 - spec.point.x0;
  } else {
    out.u1 = 1.0;
    out.u2 = kUnbounded;
  }
  return out;
}

LimitSampler::LimitSampler(LimitSpec spec) : spec_(std::move(spec)) {
  spec_.validate();
  grid_ = std::make_shared<const Grid>(Grid::uniform(spec_.left_end(), spec_.right_end(), spec_.step));
  if (grid_->zero_index() == 0) throw ConfigError("limit grid has no point left of 0");
  drift_.assign(grid_->size(), 0.0);
  add_polynomial(grid_->times(), drift_, spec_.Q.poly);
  scale_ = spec_.sigma / std::sqrt(spec_.lambda0);
  // With Q = 0 the chord slope tends to 0 as h2 -> infinity, so the infimum
  // over an unbounded H2 never exceeds 0.
  cap_at_zero_ = spec_.Q.is_zero() && std::isinf(spec_.u2);
}

double LimitSampler::evaluate(std::span<double> bm, std::vector<std::size_t>& stack) const {
  for (std::size_t i = 0; i < bm.size(); ++i) bm[i] = scale_ * bm[i] + drift_[i];
  const double slope = gcm_left_slope_at_index(grid_->times(), bm, grid_->zero_index(), stack);
  return cap_at_zero_ ? std::min(slope, 0.0) : slope;
}

double LimitSampler::sample(Stream& rng, Workspace& ws) const {
  ws.values.resize(grid_->size());
  sample_bm_values(*grid_, rng, ws.values);
  return evaluate(ws.values, ws.stack);
}

double sample_limit_supinf(const LimitSpec& spec, Stream& rng) {
  LimitSampler sampler(spec);
  LimitSampler::Workspace ws;
  return sampler.sample(rng, ws);
}

double supinf_bruteforce(std::span<const double> times, std::span<const double> path) {
  if (times.size() != path.size()) throw InputError("brute force: length mismatch");
  const auto it = std::find(times.begin(), times.end(), 0.0);
  if (it == times.end() || it == times.begin()) throw InputError("brute force needs 0 inside");
  const auto z = static_cast<std::size_t>(it - times.begin());
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < z; ++i) {
    double inner = std::numeric_limits<double>::infinity();
    for (std::size_t j = z; j < times.size(); ++j) {
      inner = std::min(inner, (path[j] - path[i]) / (times[j] - times[i]));
    }
    best = std::max(best, inner);
  }
  return best;
}

LimitSpec d_alpha_spec(int alpha, double T, double step) {
  if (alpha < 1 || alpha % 2 == 0) throw ConfigError("D_alpha needs an odd positive alpha");
  if (!(T > 0.0)) throw ConfigError("truncation must be positive");
  LimitSpec s;
  s.Q = DriftSpec::interior(alpha, 1.0);
  s.step = step;
  s.trunc1 = T;
  s.trunc2 = T;
  s.alpha = alpha;
  return s;
}

double sample_D_alpha(int alpha, double T, double step, Stream& rng) {
  return sample_limit_supinf(d_alpha_spec(alpha, T, step), rng);
}

ArgmaxSampler::ArgmaxSampler(double T, double step, double noise)
    : grid_(std::make_shared<const Grid>(Grid::uniform(-T, T, step))), noise_(noise) {
  if (!(T > 0.0)) throw ConfigError("truncation must be positive");
}

double ArgmaxSampler::evaluate(std::span<double> bm) const {
  if (noise_ != 1.0) {
    for (double& v : bm) v *= noise_;
  }
  static constexpr double kParabola[3] = {0.0, 0.0, -1.0};
  const auto loc = simd::max_poly(grid_->times(), bm, kParabola);
  return 2.0 * grid_->times()[loc.index];
}

double ArgmaxSampler::sample(Stream& rng, std::vector<double>& values) const {
  values.resize(grid_->size());
  sample_bm_values(*grid_, rng, values);
  return evaluate(values);
}

double sample_D1_argmax(double T, double step, Stream& rng, double noise) {
  ArgmaxSampler s(T, step, noise);
  std::vector<double> values;
  return s.sample(rng, values);
}

double c_alpha(double f_alpha_deriv, int alpha) {
  if (!is_finite_order(alpha)) return 1.0;
  if (alpha < 1) throw DomainError("alpha must be positive");
  if (!(f_alpha_deriv > 0.0)) throw DomainError("c_alpha needs a positive derivative");
  double fact = 1.0;
  for (int m = 2; m <= alpha + 1; ++m) fact *= m;
  return std::pow(f_alpha_deriv / fact, 1.0 / (2.0 * alpha + 1.0));
}

EmpiricalCdf limit_cdf_table(const LimitSpec& spec, std::span<const double> t_grid,
                             std::uint64_t n_reps, std::uint64_t seed, unsigned workers) {
  if (n_reps < 10000) throw ConfigError("limit tables need at least 10^4 replications");
  auto sampler = std::make_shared<const LimitSampler>(spec);
  SamplerFactory factory = [sampler]() -> Sampler {
    auto ws = std::make_shared<LimitSampler::Workspace>();
    return [sampler, ws](Stream& rng) { return sampler->sample(rng, *ws); };
  };
  std::vector<double> draws = parallel_draw(factory, n_reps, seed, workers);
  std::sort(draws.begin(), draws.end());
  return ecdf_from_sorted(draws, t_grid, seed);
}

void write_cdf_table(const std::string& path, const EmpiricalCdf& table,
                     const std::string& spec_hash, const std::string& comment) {
  table.validate();
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + tmp + " for writing");
    if (!comment.empty()) out << "# " << comment << '\n';
    out << "t,prob,n_reps,seed,spec_hash\n";
    char buf[160];
    for (std::size_t i = 0; i < table.t_grid.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,%llu,%llu,", table.t_grid[i], table.probs[i],
                    static_cast<unsigned long long>(table.n_reps),
                    static_cast<unsigned long long>(table.seed));
      out << buf << spec_hash << '\n';
    }
    if (!out) throw IoError("write to " + tmp + " failed");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("cannot move " + tmp + " to " + path + ": " + ec.message());
}

StoredCdfTable read_cdf_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  StoredCdfTable out;
  std::string line;
  std::size_t line_no = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    if (!header) {
      if (line != "t,prob,n_reps,seed,spec_hash") {
        throw IoError(path + ":" + std::to_string(line_no) + ": unexpected header");
      }
      header = true;
      continue;
    }
    std::istringstream row(line);
    std::string f[5];
    for (auto& field : f) std::getline(row, field, ',');
    try {
      out.table.t_grid.push_back(std::stod(f[0]));
      out.table.probs.push_back(std::stod(f[1]));
      out.table.n_reps = std::stoull(f[2]);
      out.table.seed = std::stoull(f[3]);
      out.spec_hash = f[4];
    } catch (const std::exception&) {
      throw IoError(path + ":" + std::to_string(line_no) + ": malformed row");
    }
  }
  if (!header || out.table.t_grid.empty()) throw IoError(path + ": no table rows");
  out.table.validate();
  return out;
}

double interpolate_cdf(const EmpiricalCdf& table, double t) {
  const auto& g = table.t_grid;
  if (g.empty()) throw InputError("empty cdf table");
  if (t <= g.front()) return table.probs.front();
  if (t >= g.back()) return table.probs.back();
  const auto j = static_cast<std::size_t>(std::lower_bound(g.begin(), g.end(), t) - g.begin());
  if (g[j] == t) return table.probs[j];
  const double w = (t - g[j - 1]) / (g[j] - g[j - 1]);
  return table.probs[j - 1] + w * (table.probs[j] - table.probs[j - 1]);
}

}  // namespace chernoff
