#pragma once

#include <vector>

#include "xroads/model.hpp"
#include "xroads/quadrature.hpp"

namespace xroads {

/// Accuracy controls for the lane integrals.
///
/// `truncation` is the half-width of the initial quadrature window around the
/// destination; the window is widened until an analytic bound on the
/// remaining tail falls below half of `rel_tol`.
struct LaplaceEvalConfig {
  double rel_tol = 1e-9;
  double truncation = 1000.0;
};

/// Throws DomainError unless rel_tol is in (0, 1e-6] and truncation > 0.
void check_config(const LaplaceEvalConfig& cfg);

struct AnalyticResult {
  double success_prob = 1.0;
  double outage_prob = 0.0;
  double throughput = 0.0;       // bits/s/Hz
  std::vector<double> per_term;  // k = 0 .. m-1 summands of the success sum
};

inline constexpr int kMaxDerivativeOrder = 8;

namespace detail {

/// Integral over the whole lane of the k-th s-derivative of
/// s / (s + (h^2 + u^2)^(alpha/2)), with u the along-lane offset from the
/// destination's foot point. Error includes the tail bound.
QuadratureResult lane_kernel_integral(int k, double s, double h, double alpha,
                                      const LaplaceEvalConfig& cfg);

}  // namespace detail

/// Laplace transform E[exp(-s I_lane)] of one lane's aggregate interference,
/// evaluated by quadrature of the PGFL exponent.
double laplace_numeric(double s, const Lane& lane, const Scenario& scenario,
                       const LaplaceEvalConfig& cfg = {});

/// Closed form of laplace_numeric for alpha = 4:
///   exp(-p lambda pi V(s; h)),
///   V = sqrt(2 sqrt(h^4 + s) + 2 h^2) (sqrt(h^4 + s) - h^2) / (2 sqrt(h^4 + s)).
double laplace_closed_alpha4(double s, const Lane& lane, const Scenario& scenario);

/// Closed form of laplace_numeric for alpha = 2: exp(-p lambda pi s / sqrt(s + h^2)).
double laplace_closed_alpha2(double s, const Lane& lane, const Scenario& scenario);

/// V(s; h) of the alpha = 4 closed form, arranged to avoid cancellation
/// when s << h^4.
double closed_form_v_alpha4(double s, double h);

/// k-th derivative of the lane exponent g(s) = ln L(s) = -p lambda * integral.
double exponent_derivative(int k, double s, const Lane& lane, const Scenario& scenario,
                           const LaplaceEvalConfig& cfg = {});

/// n-th derivative of the lane Laplace transform, exp(g) * B_n(g', ..., g^(n)).
double laplace_derivative(int n, double s, const Lane& lane, const Scenario& scenario,
                          const LaplaceEvalConfig& cfg = {});

/// g_axis^(0..max_order)(s) with every lane of `axis` folded into one exponent.
std::vector<double> axis_exponent_derivatives(Axis axis, int max_order, double s,
                                              const Scenario& scenario,
                                              const LaplaceEvalConfig& cfg = {});

/// L_axis^(0..max_order)(s) for the folded per-road interference. A road
/// without lanes or intensity yields 1, 0, 0, ...
std::vector<double> axis_laplace_derivatives(Axis axis, int max_order, double s,
                                             const Scenario& scenario,
                                             const LaplaceEvalConfig& cfg = {});

/// m Theta / (mu l_SD), the argument at which the Laplace transforms are taken.
double laplace_argument(const Scenario& scenario);

/// P(SIR >= Theta) = sum_{k<m} (-G)^k / k! sum_{n<=k} C(k,n) L_X^(k-n)(G) L_Y^(n)(G).
double success_probability(const Scenario& scenario, const LaplaceEvalConfig& cfg = {});

AnalyticResult outage_probability(const Scenario& scenario, const LaplaceEvalConfig& cfg = {});

}  // namespace xroads
