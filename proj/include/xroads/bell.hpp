#pragma once

#include <span>
#include <vector>

namespace xroads {

/// Complete Bell polynomials B_0 .. B_n evaluated at x = (x_1, ..., x_n),
/// where n = x.size().
///
/// With x_j = g^(j)(s) these are the coefficients in
///   d^n/ds^n exp(g(s)) = exp(g(s)) * B_n(g'(s), ..., g^(n)(s)),
/// computed by the recurrence B_{k+1} = sum_{i=0}^{k} C(k, i) B_{k-i} x_{i+1}.
std::vector<double> complete_bell_sequence(std::span<const double> x);

/// B_n(x_1, ..., x_n) for n = x.size(); B_0 = 1.
double complete_bell(std::span<const double> x);

double binomial(int n, int k);
double factorial(int n);

}  // namespace xroads
