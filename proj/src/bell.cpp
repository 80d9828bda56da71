#include "xroads/bell.hpp"

namespace xroads {

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double c = 1.0;
  for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
  return c;
}

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

std::vector<double> complete_bell_sequence(std::span<const double> x) {
  const int n = static_cast<int>(x.size());
  std::vector<double> b(static_cast<std::size_t>(n) + 1, 0.0);
  b[0] = 1.0;
  for (int k = 0; k < n; ++k) {
    double acc = 0.0;
    for (int i = 0; i <= k; ++i) acc += binomial(k, i) * b[k - i] * x[i];
    b[k + 1] = acc;
  }
  return b;
}

double complete_bell(std::span<const double> x) {
  return complete_bell_sequence(x).back();
}

}  // namespace xroads
