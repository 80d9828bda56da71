#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <span>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace xroads {

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;  // estimated absolute error
  int panels = 0;
  bool converged = false;
};

struct QuadratureOptions {
  double rel_tol = 1e-10;
  double abs_tol = 0.0;
  int max_panels = 4000;
};

/// Globally adaptive Gauss-Kronrod integration over consecutive panels
/// [breaks[0], breaks[1]], [breaks[1], breaks[2]], ...
///
/// Each panel is evaluated with the 31-point Kronrod rule (error taken as the
/// Kronrod/Gauss difference); the panel with the largest error is bisected
/// until the summed error drops below max(abs_tol, rel_tol * |value|) or the
/// panel budget is exhausted. `converged` reports which of the two happened.
template <class F>
QuadratureResult integrate_panels(const F& f, std::span<const double> breaks,
                                  const QuadratureOptions& opts = {}) {
  using Rule = boost::math::quadrature::gauss_kronrod<double, 31>;

  struct Panel {
    double a, b, value, error;
    bool operator<(const Panel& o) const { return error < o.error; }
  };
  auto eval = [&f](double a, double b) {
    double err = 0.0;
    const double v = Rule::integrate(f, a, b, 0, 0.0, &err);
    return Panel{a, b, v, err};
  };

  QuadratureResult res;
  if (breaks.size() < 2) {
    res.converged = true;
    return res;
  }

  std::priority_queue<Panel> queue;
  double total = 0.0;
  double total_err = 0.0;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    if (breaks[i + 1] == breaks[i]) continue;
    Panel p = eval(breaks[i], breaks[i + 1]);
    total += p.value;
    total_err += p.error;
    queue.push(p);
  }

  auto target = [&] { return std::max(opts.abs_tol, opts.rel_tol * std::abs(total)); };

  int panels = static_cast<int>(queue.size());
  while (!queue.empty() && total_err > target() && panels < opts.max_panels) {
    const Panel worst = queue.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) break;  // cannot split further
    queue.pop();
    const Panel left = eval(worst.a, mid);
    const Panel right = eval(mid, worst.b);
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    queue.push(left);
    queue.push(right);
    ++panels;
  }

  // Re-sum from the panels to shed the drift of incremental updates.
  total = 0.0;
  total_err = 0.0;
  while (!queue.empty()) {
    total += queue.top().value;
    total_err += queue.top().error;
    queue.pop();
  }
  res.value = total;
  res.error = total_err;
  res.panels = panels;
  res.converged = total_err <= std::max(opts.abs_tol, opts.rel_tol * std::abs(total));
  return res;
}

}  // namespace xroads
