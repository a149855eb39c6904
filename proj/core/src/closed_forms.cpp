#include "rtn/closed_forms.hpp"

#include <cmath>

#include "rtn/errors.hpp"

namespace rtn {

namespace {

// log(1 + exp(x)), stable for large x
double softplus(double x) {
  if (x > 30.0) return x + std::exp(-x);
  return std::log1p(std::exp(x));
}

}  // namespace

double log_haar_ipr(double big_d, int k) {
  if (big_d < 2.0) throw ParameterError("haar_ipr: D must be >= 2");
  if (k < 1) throw ParameterError("haar_ipr: k must be >= 1");
  double acc = 0.0;
  for (int j = 2; j <= k; ++j) acc += std::log(static_cast<double>(j));
  for (int j = 1; j < k; ++j) acc -= std::log(big_d + j);
  return acc;
}

double haar_ipr(double big_d, int k) { return std::exp(log_haar_ipr(big_d, k)); }

double page_purity(double d_a, double d_b) {
  if (d_a < 1.0 || d_b < 1.0) throw ParameterError("page_purity: dimensions must be >= 1");
  return (d_a + d_b) / (d_a * d_b + 1.0);
}

double log_orthogonal_ipr_stat(double big_d, int k) {
  if (big_d < 2.0) throw ParameterError("orthogonal_ipr_stat: D must be >= 2");
  if (k < 1) throw ParameterError("orthogonal_ipr_stat: k must be >= 1");
  double acc = 0.0;
  for (int j = 1; j <= 2 * k - 1; j += 2) acc += std::log(static_cast<double>(j));
  for (int m = 1; m < k; ++m) acc -= std::log(big_d + 2 * m);
  return acc;
}

double orthogonal_ipr_stat(double big_d, int k) {
  return std::exp(log_orthogonal_ipr_stat(big_d, k));
}

double log_clifford_ipr_stat(int d, int n_qudits, int k) {
  if (d < 2) throw ParameterError("clifford_ipr_stat: d must be >= 2");
  if (n_qudits < 1) throw ParameterError("clifford_ipr_stat: N must be >= 1");
  if (k < 1) throw ParameterError("clifford_ipr_stat: k must be >= 1");
  const double ld = std::log(static_cast<double>(d));
  double acc = 0.0;
  for (int m = 0; m < n_qudits; ++m) {
    acc += softplus((2 - k + m) * ld);  // 1 + d^{2-k+m}
    acc -= softplus((1 + m) * ld);      // 1 + d^{1+m}
  }
  return acc;
}

double clifford_ipr_stat(int d, int n_qudits, int k) {
  return std::exp(log_clifford_ipr_stat(d, n_qudits, k));
}

int plateau_depth(int n_sites) {
  if (n_sites < 2) throw ParameterError("plateau_depth: N must be >= 2");
  int bits = 0;
  while ((1 << bits) < n_sites) ++bits;
  return 4 * bits + 20;
}

}  // namespace rtn
