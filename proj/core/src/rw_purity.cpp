#include <cmath>

#include "rtn/errors.hpp"
#include "rtn/oracle.hpp"

namespace rtn {

namespace {

// absorption kernel of the reflecting-at-0, absorbing-at-the-edges walk
double rw_u(int N, int z, int s) {
  if (s <= 0) return 0.0;
  const double pi = 3.14159265358979323846;
  double acc = 0.0;
  for (int nu = 0; nu < N / 2; ++nu) {
    const double theta = pi * (2 * nu + 1) / N;
    acc += (2.0 / N) * std::sin(theta) * std::pow(std::cos(theta), s - 1) *
           std::sin(theta * z);
  }
  return acc;
}

}  // namespace

double rw_absorption_sum(int N, int z, int s_max) {
  double acc = 0.0;
  for (int s = 1; s <= s_max; ++s) acc += rw_u(N, z, s);
  return acc;
}

double rw_purity(int N, int ell, int d, int t) {
  if (N < 2 || N % 2 != 0) throw ParameterError("rw_purity: N must be even and >= 2");
  if (ell < 1 || ell > N - 1) throw ParameterError("rw_purity: need 1 <= ell <= N-1");
  if (d < 2) throw ParameterError("rw_purity: d must be >= 2");
  if (t < 0) throw ParameterError("rw_purity: t must be >= 0");

  // the wall only moves on layers whose gates straddle it, so the purity is a
  // staircase: evaluate at the largest t' <= t with t' = ell (mod 2)
  int teff = (t % 2 == ell % 2) ? t : t - 1;
  if (teff < 0) return 1.0;

  const double two_k = 2.0 * d / (static_cast<double>(d) * d + 1.0);
  double absorbed = 0.0;
  double weighted = 0.0;
  for (int s = 1; s <= teff; ++s) {
    const double u = rw_u(N, ell, s);
    absorbed += u;
    weighted += std::pow(two_k, s) * u;
  }
  return std::pow(two_k, teff) * (1.0 - absorbed) + weighted;
}

}  // namespace rtn
