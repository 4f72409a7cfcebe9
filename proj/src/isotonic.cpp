#include "chernoff/isotonic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "chernoff/errors.hpp"

namespace chernoff {

void RegressionSample::validate() const {
  if (ys.empty()) throw InputError("regression sample is empty");
  if (xs.size() != ys.size()) throw InputError("xs and ys differ in length");
  if (!truth.empty() && truth.size() != ys.size()) throw InputError("truth length differs");
  for (std::size_t i = 1; i < xs.size(); ++i) {
    if (xs[i] < xs[i - 1]) throw InputError("design points not sorted");
  }
}

const Block& IsotonicFit::block_of(std::size_t i) const {
  const auto it = std::upper_bound(blocks.begin(), blocks.end(), i,
                                   [](std::size_t x, const Block& b) { return x < b.end; });
  if (it == blocks.end()) throw InputError("index past the end of the fit");
  return *it;
}

IsotonicFit pava(std::span<const double> ys, std::span<const double> weights) {
  if (ys.empty()) throw InputError("pava on empty input");
  if (!weights.empty() && weights.size() != ys.size()) throw InputError("weights length differs");

  struct Acc {
    std::size_t begin, end;
    double sum, weight, level;
  };
  std::vector<Acc> st;
  st.reserve(ys.size());
  for (std::size_t i = 0; i < ys.size(); ++i) {
    const double w = weights.empty() ? 1.0 : weights[i];
    if (!(w > 0.0)) throw InputError("pava weights must be positive");
    st.push_back({i, i + 1, w * ys[i], w, ys[i]});
    while (st.size() >= 2 && st[st.size() - 2].level >= st.back().level) {
      Acc cur = st.back();
      st.pop_back();
      Acc& prev = st.back();
      const bool equal = prev.level == cur.level;
      prev.end = cur.end;
      prev.sum += cur.sum;
      prev.weight += cur.weight;
      if (!equal) prev.level = prev.sum / prev.weight;
    }
  }

  IsotonicFit fit;
  fit.blocks.reserve(st.size());
  fit.fitted.resize(ys.size());
  for (const Acc& a : st) {
    fit.blocks.push_back({a.begin, a.end, a.level, a.weight});
    std::fill(fit.fitted.begin() + static_cast<std::ptrdiff_t>(a.begin),
              fit.fitted.begin() + static_cast<std::ptrdiff_t>(a.end), a.level);
  }
  return fit;
}

IsotonicFit pava(const RegressionSample& sample) {
  sample.validate();
  return pava(sample.ys);
}

std::size_t evaluation_index(std::span<const double> xs, double x_star) {
  if (xs.empty()) throw InputError("no design points");
  if (!(x_star <= xs.back())) throw DomainError("evaluation point right of the design");
  return static_cast<std::size_t>(std::lower_bound(xs.begin(), xs.end(), x_star) - xs.begin());
}

MaxMinResult maxmin_at(double x_star, const RegressionSample& sample) {
  sample.validate();
  const auto& xs = sample.xs;
  const auto& ys = sample.ys;
  const std::size_t n = ys.size();
  if (!(x_star >= xs.front() && x_star <= xs.back())) {
    throw DomainError("max-min evaluation point outside the design range");
  }
  const std::size_t k = evaluation_index(xs, x_star);

  std::vector<double> prefix(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + ys[i];
  auto avg = [&](std::size_t i, std::size_t j) {
    return (prefix[j + 1] - prefix[i]) / static_cast<double>(j - i + 1);
  };

  MaxMinResult best{-std::numeric_limits<double>::infinity(), 0, 0, 0.0, 0.0};
  for (std::size_t i = 0; i <= k; ++i) {
    double inner = std::numeric_limits<double>::infinity();
    std::size_t arg = k;
    for (std::size_t j = k; j < n; ++j) {
      const double a = avg(i, j);
      if (a <= inner) {
        inner = a;
        arg = j;
      }
    }
    if (inner > best.value) {
      best.value = inner;
      best.first = i;
      best.last = arg;
    }
  }
  best.u_star = std::min(xs[best.first], x_star);
  best.v_star = std::max(xs[best.last], x_star);
  return best;
}

namespace {

TouchPoints make_touch(double u, double v, double x_star, double r_n) {
  if (!(r_n > 0.0)) throw DomainError("bandwidth unit must be positive");
  TouchPoints tp;
  tp.u_star = u;
  tp.v_star = v;
  tp.h1_star = (x_star - u) / r_n;
  tp.h2_star = (v - x_star) / r_n;
  return tp;
}

}  // namespace

TouchPoints touch_points(const RegressionSample& sample, double x_star, double r_n) {
  const MaxMinResult m = maxmin_at(x_star, sample);
  return make_touch(m.u_star, m.v_star, x_star, r_n);
}

TouchPoints touch_points(const IsotonicFit& fit, std::span<const double> xs, double x_star,
                         double r_n) {
  const std::size_t k = evaluation_index(xs, x_star);
  const Block& b = fit.block_of(k);
  return make_touch(std::min(xs[b.begin], x_star), std::max(xs[b.end - 1], x_star), x_star, r_n);
}

}  // namespace chernoff
