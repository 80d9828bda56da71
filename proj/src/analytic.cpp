#include "xroads/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "xroads/bell.hpp"
#include "xroads/errors.hpp"

namespace xroads {

namespace {

constexpr double kClampSlack = 1e-9;

// (h^2 + u^2)^(alpha/2) without pow() for the two exponents used in practice.
double path_power(double h2, double u, double alpha) {
  const double q = h2 + u * u;
  if (alpha == 2.0) return q;
  if (alpha == 4.0) return q * q;
  return std::pow(q, 0.5 * alpha);
}

// Upper bound on the one-sided tail integral beyond T of the order-k kernel.
// k = 0: s / (s + a) <= s u^-alpha; k >= 1: k! a / (s + a)^(k+1) <= k! u^(-alpha k).
double tail_bound(int k, double s, double alpha, double T) {
  if (k == 0) return s * std::pow(T, 1.0 - alpha) / (alpha - 1.0);
  const double e = alpha * k;
  return factorial(k) * std::pow(T, 1.0 - e) / (e - 1.0);
}

// Smallest T with tail_bound(k, s, alpha, T) <= budget.
double tail_cutoff(int k, double s, double alpha, double budget) {
  if (k == 0) return std::pow(s / ((alpha - 1.0) * budget), 1.0 / (alpha - 1.0));
  const double e = alpha * k;
  return std::pow(factorial(k) / ((e - 1.0) * budget), 1.0 / (e - 1.0));
}

void require_lane_params(double s, const char* what) {
  if (!(s >= 0.0) || !std::isfinite(s))
    throw DomainError(std::string(what) + ": transform argument must be finite and >= 0, got " +
                      std::to_string(s));
}

double lane_h(const Lane& lane, const Scenario& scenario) {
  return perpendicular_distance(destination_position(scenario.geometry), lane.axis, lane.offset);
}

AnalyticResult assemble(const Scenario& scenario, const LaplaceEvalConfig& cfg) {
  const int m = scenario.channel.m;
  const double G = laplace_argument(scenario);
  const auto lx = axis_laplace_derivatives(Axis::X, m - 1, G, scenario, cfg);
  const auto ly = axis_laplace_derivatives(Axis::Y, m - 1, G, scenario, cfg);

  AnalyticResult res;
  res.per_term.resize(static_cast<std::size_t>(m));
  double success = 0.0;
  double scale = 1.0;  // (-G)^k / k!
  for (int k = 0; k < m; ++k) {
    double inner = 0.0;
    for (int n = 0; n <= k; ++n) inner += binomial(k, n) * lx[k - n] * ly[n];
    res.per_term[k] = scale * inner;
    success += res.per_term[k];
    scale *= -G / (k + 1);
  }

  if (!std::isfinite(success) || success < -kClampSlack || success > 1.0 + kClampSlack) {
    const double excess = success < 0.0 ? -success : success - 1.0;
    throw NumericError("success probability left [0, 1]: " + std::to_string(success), excess);
  }
  success = std::clamp(success, 0.0, 1.0);

  res.success_prob = success;
  res.outage_prob = 1.0 - success;
  res.throughput = success * std::log2(1.0 + scenario.theta_threshold);
  return res;
}

}  // namespace

void check_config(const LaplaceEvalConfig& cfg) {
  if (!(cfg.rel_tol > 0.0 && cfg.rel_tol <= 1e-6))
    throw DomainError("rel_tol must lie in (0, 1e-6]");
  if (!(cfg.truncation > 0.0) || !std::isfinite(cfg.truncation))
    throw DomainError("truncation must be positive");
}

namespace detail {

QuadratureResult lane_kernel_integral(int k, double s, double h, double alpha,
                                      const LaplaceEvalConfig& cfg) {
  check_config(cfg);
  if (k < 0 || k > kMaxDerivativeOrder)
    throw DomainError("derivative order must lie in [0, " + std::to_string(kMaxDerivativeOrder) +
                      "], got " + std::to_string(k));
  require_lane_params(s, "lane integral");
  if (s == 0.0) {
    if (k == 0) return {0.0, 0.0, 0, true};
    throw DomainError("derivatives of order >= 1 need s > 0");
  }

  const double h2 = h * h;
  const double kfact = factorial(k);
  const double sign = (k % 2 == 1) ? 1.0 : -1.0;  // (-1)^(k+1)
  auto kernel = [=](double u) {
    const double a = path_power(h2, u, alpha);
    if (k == 0) return s / (s + a);
    return sign * kfact * a / std::pow(s + a, k + 1);
  };

  // The integrand is even in u; integrate [0, inf) and double. Geometric
  // breakpoints around the kernel's length scale let the adaptive driver
  // start from a sensible partition, with one breakpoint at the peak u = 0.
  const double scale = std::max(h, std::pow(s, 1.0 / alpha));
  const double window = std::max(cfg.truncation, 16.0 * scale);
  std::vector<double> breaks{0.0};
  for (double b = scale / 64.0; b < window; b *= 2.0) breaks.push_back(b);
  breaks.push_back(window);

  QuadratureOptions opts;
  opts.rel_tol = cfg.rel_tol / 4.0;
  QuadratureResult core = integrate_panels(kernel, breaks, opts);

  // Widen the window until the analytic tail bound (both sides) is below
  // half the relative budget.
  const double budget = 0.25 * cfg.rel_tol * std::abs(core.value);
  double cutoff = window;
  if (tail_bound(k, s, alpha, window) > budget && budget > 0.0) {
    cutoff = tail_cutoff(k, s, alpha, budget);
    if (!std::isfinite(cutoff) || cutoff > 1e200)
      throw NumericError("interference tail decays too slowly for rel_tol", 1.0);
    std::vector<double> outer{window};
    for (double b = 2.0 * window; b < cutoff; b *= 2.0) outer.push_back(b);
    outer.push_back(cutoff);
    const QuadratureResult ext = integrate_panels(kernel, outer, opts);
    core.value += ext.value;
    core.error += ext.error;
    core.panels += ext.panels;
    core.converged = core.converged && ext.converged;
  }

  QuadratureResult out;
  out.value = 2.0 * core.value;
  out.error = 2.0 * (core.error + tail_bound(k, s, alpha, cutoff));
  out.panels = core.panels;
  out.converged = out.error <= cfg.rel_tol * std::abs(out.value);
  if (!out.converged) {
    throw NumericError("lane quadrature did not reach rel_tol " + std::to_string(cfg.rel_tol),
                       out.error / std::abs(out.value));
  }
  return out;
}

}  // namespace detail

double laplace_numeric(double s, const Lane& lane, const Scenario& scenario,
                       const LaplaceEvalConfig& cfg) {
  // The relative error of exp(g) is the absolute error of g, so a large
  // exponent needs a proportionally tighter integral.
  const double g = exponent_derivative(0, s, lane, scenario, cfg);
  if (std::abs(g) <= 1.0) return std::exp(g);
  LaplaceEvalConfig tight = cfg;
  tight.rel_tol = std::max(cfg.rel_tol / std::abs(g), 1e-14);
  return std::exp(exponent_derivative(0, s, lane, scenario, tight));
}

double closed_form_v_alpha4(double s, double h) {
  const double h2 = h * h;
  const double q = std::sqrt(h2 * h2 + s);
  // (q - h^2) rewritten as s / (q + h^2).
  return std::sqrt(2.0 * q + 2.0 * h2) * s / (2.0 * q * (q + h2));
}

double laplace_closed_alpha4(double s, const Lane& lane, const Scenario& scenario) {
  if (scenario.channel.alpha != 4.0)
    throw UnsupportedExponent("alpha = 4 closed form requested for alpha = " +
                              std::to_string(scenario.channel.alpha));
  require_lane_params(s, "laplace_closed_alpha4");
  const double pl = scenario.p * scenario.intensity(lane);
  if (s == 0.0 || pl == 0.0) return 1.0;
  return std::exp(-pl * std::numbers::pi * closed_form_v_alpha4(s, lane_h(lane, scenario)));
}

double laplace_closed_alpha2(double s, const Lane& lane, const Scenario& scenario) {
  if (scenario.channel.alpha != 2.0)
    throw UnsupportedExponent("alpha = 2 closed form requested for alpha = " +
                              std::to_string(scenario.channel.alpha));
  require_lane_params(s, "laplace_closed_alpha2");
  const double pl = scenario.p * scenario.intensity(lane);
  if (s == 0.0 || pl == 0.0) return 1.0;
  const double h = lane_h(lane, scenario);
  return std::exp(-pl * std::numbers::pi * s / std::sqrt(s + h * h));
}

double exponent_derivative(int k, double s, const Lane& lane, const Scenario& scenario,
                           const LaplaceEvalConfig& cfg) {
  if (k < 0 || k > kMaxDerivativeOrder)
    throw DomainError("derivative order must lie in [0, " + std::to_string(kMaxDerivativeOrder) +
                      "], got " + std::to_string(k));
  require_lane_params(s, "exponent_derivative");
  if (k >= 1 && s == 0.0) throw DomainError("derivatives of order >= 1 need s > 0");
  const double pl = scenario.p * scenario.intensity(lane);
  if (pl == 0.0 || s == 0.0) return 0.0;
  const auto q = detail::lane_kernel_integral(k, s, lane_h(lane, scenario),
                                              scenario.channel.alpha, cfg);
  return -pl * q.value;
}

double laplace_derivative(int n, double s, const Lane& lane, const Scenario& scenario,
                          const LaplaceEvalConfig& cfg) {
  if (n < 0 || n > kMaxDerivativeOrder)
    throw DomainError("derivative order must lie in [0, " + std::to_string(kMaxDerivativeOrder) +
                      "], got " + std::to_string(n));
  std::vector<double> g(static_cast<std::size_t>(n) + 1);
  for (int k = 0; k <= n; ++k) g[k] = exponent_derivative(k, s, lane, scenario, cfg);
  return std::exp(g[0]) * complete_bell(std::span<const double>(g).subspan(1));
}

std::vector<double> axis_exponent_derivatives(Axis axis, int max_order, double s,
                                              const Scenario& scenario,
                                              const LaplaceEvalConfig& cfg) {
  std::vector<double> g(static_cast<std::size_t>(max_order) + 1, 0.0);
  for (double w : scenario.layout.offsets(axis)) {
    const Lane lane{axis, w};
    for (int k = 0; k <= max_order; ++k) g[k] += exponent_derivative(k, s, lane, scenario, cfg);
  }
  return g;
}

std::vector<double> axis_laplace_derivatives(Axis axis, int max_order, double s,
                                             const Scenario& scenario,
                                             const LaplaceEvalConfig& cfg) {
  const auto g = axis_exponent_derivatives(axis, max_order, s, scenario, cfg);
  const auto bell = complete_bell_sequence(std::span<const double>(g).subspan(1));
  const double base = std::exp(g[0]);
  std::vector<double> out(bell.size());
  for (std::size_t n = 0; n < bell.size(); ++n) out[n] = base * bell[n];
  return out;
}

double laplace_argument(const Scenario& scenario) {
  const auto& ch = scenario.channel;
  return ch.m * scenario.theta_threshold / (ch.mu * scenario.link.path_loss(ch.alpha));
}

double success_probability(const Scenario& scenario, const LaplaceEvalConfig& cfg) {
  return assemble(scenario, cfg).success_prob;
}

AnalyticResult outage_probability(const Scenario& scenario, const LaplaceEvalConfig& cfg) {
  return assemble(scenario, cfg);
}

}  // namespace xroads
