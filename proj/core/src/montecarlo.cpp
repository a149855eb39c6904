#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include "rtn/errors.hpp"
#include "rtn/oracle.hpp"

namespace rtn {

namespace {

using Cplx = std::complex<double>;

std::uint64_t splitmix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::int64_t ipow(int base, int exp) {
  std::int64_t r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

// strided transform of the adjacent site pair (a, a+1), site 0 most significant
void apply_gate_vec(Eigen::VectorXcd& psi, const Eigen::MatrixXcd& u, int d, int n_sites, int a) {
  const int q = d * d;
  const std::int64_t right = ipow(d, n_sites - 2 - a);
  const std::int64_t high = psi.size() / (q * right);
  Eigen::VectorXcd x(q), y(q);
  for (std::int64_t h = 0; h < high; ++h) {
    const std::int64_t base = h * q * right;
    for (std::int64_t r = 0; r < right; ++r) {
      for (int s = 0; s < q; ++s) x(s) = psi(base + s * right + r);
      y.noalias() = u * x;
      for (int s = 0; s < q; ++s) psi(base + s * right + r) = y(s);
    }
  }
}

// rho <- U_loc rho U_loc^dagger
void apply_gate_rho(Eigen::MatrixXcd& rho, const Eigen::MatrixXcd& u, int d, int n_sites, int a) {
  const int q = d * d;
  const std::int64_t dim = rho.rows();
  const std::int64_t right = ipow(d, n_sites - 2 - a);
  const std::int64_t high = dim / (q * right);
  const Eigen::MatrixXcd uc = u.conjugate();
  Eigen::VectorXcd x(q), y(q);
  for (std::int64_t c = 0; c < dim; ++c) {
    for (std::int64_t h = 0; h < high; ++h) {
      const std::int64_t base = h * q * right;
      for (std::int64_t r = 0; r < right; ++r) {
        for (int s = 0; s < q; ++s) x(s) = rho(base + s * right + r, c);
        y.noalias() = u * x;
        for (int s = 0; s < q; ++s) rho(base + s * right + r, c) = y(s);
      }
    }
  }
  for (std::int64_t rrow = 0; rrow < dim; ++rrow) {
    for (std::int64_t h = 0; h < high; ++h) {
      const std::int64_t base = h * q * right;
      for (std::int64_t r = 0; r < right; ++r) {
        for (int s = 0; s < q; ++s) x(s) = rho(rrow, base + s * right + r);
        y.noalias() = uc * x;
        for (int s = 0; s < q; ++s) rho(rrow, base + s * right + r) = y(s);
      }
    }
  }
}

// rho <- (1-p) rho + (p/d) I_s (x) Tr_s rho
void apply_dep_rho(Eigen::MatrixXcd& rho, double p, int d, int n_sites, int s) {
  if (p == 0.0) return;
  const std::int64_t stride = ipow(d, n_sites - 1 - s);
  const std::int64_t dim = rho.rows();
  const std::int64_t high = dim / (d * stride);
  const double keep = 1.0 - p;
  const double mix = p / d;
  for (std::int64_t hr = 0; hr < high; ++hr)
    for (std::int64_t lr = 0; lr < stride; ++lr)
      for (std::int64_t hc = 0; hc < high; ++hc)
        for (std::int64_t lc = 0; lc < stride; ++lc) {
          const std::int64_t rbase = hr * d * stride + lr;
          const std::int64_t cbase = hc * d * stride + lc;
          Cplx tr = 0.0;
          for (int v = 0; v < d; ++v) tr += rho(rbase + v * stride, cbase + v * stride);
          for (int v = 0; v < d; ++v)
            for (int w = 0; w < d; ++w) {
              Cplx val = keep * rho(rbase + v * stride, cbase + w * stride);
              if (v == w) val += mix * tr;
              rho(rbase + v * stride, cbase + w * stride) = val;
            }
        }
}

Eigen::VectorXcd initial_state(int d, int n_sites, int bell_pairs) {
  const std::int64_t dim = ipow(d, n_sites);
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(dim);
  const std::int64_t d_k = ipow(d, bell_pairs);
  const double amp = 1.0 / std::sqrt(static_cast<double>(d_k));
  for (std::int64_t v = 0; v < d_k; ++v) {
    std::int64_t idx = 0;
    std::int64_t rest = v;
    for (int j = bell_pairs - 1; j >= 0; --j) {
      const std::int64_t digit = rest % d;
      rest /= d;
      idx += digit * (ipow(d, n_sites - 1 - j) + ipow(d, n_sites - 1 - bell_pairs - j));
    }
    psi(idx) = amp;
  }
  return psi;
}

Eigen::MatrixXcd reduced_density(const Eigen::VectorXcd& psi, int d, int n_sites, int lo, int hi) {
  const std::int64_t left = ipow(d, lo);
  const std::int64_t mid = ipow(d, hi - lo);
  const std::int64_t right = ipow(d, n_sites - hi);
  Eigen::MatrixXcd rho_a = Eigen::MatrixXcd::Zero(mid, mid);
  for (std::int64_t l = 0; l < left; ++l)
    for (std::int64_t r = 0; r < right; ++r) {
      const std::int64_t base = l * mid * right + r;
      for (std::int64_t m = 0; m < mid; ++m)
        for (std::int64_t mm = 0; mm < mid; ++mm)
          rho_a(m, mm) += psi(base + m * right) * std::conj(psi(base + mm * right));
    }
  return rho_a;
}

Eigen::MatrixXcd reduced_density(const Eigen::MatrixXcd& rho, int d, int n_sites, int lo, int hi) {
  const std::int64_t left = ipow(d, lo);
  const std::int64_t mid = ipow(d, hi - lo);
  const std::int64_t right = ipow(d, n_sites - hi);
  Eigen::MatrixXcd rho_a = Eigen::MatrixXcd::Zero(mid, mid);
  for (std::int64_t l = 0; l < left; ++l)
    for (std::int64_t r = 0; r < right; ++r) {
      const std::int64_t base = l * mid * right + r;
      for (std::int64_t m = 0; m < mid; ++m)
        for (std::int64_t mm = 0; mm < mid; ++mm)
          rho_a(m, mm) += rho(base + m * right, base + mm * right);
    }
  return rho_a;
}

double trace_power(const Eigen::MatrixXcd& rho_a, int k) {
  if (k == 2) return rho_a.squaredNorm();
  Eigen::MatrixXcd acc = rho_a;
  for (int i = 1; i < k; ++i) acc = acc * rho_a;
  return acc.trace().real();
}

double pairwise_sum(const std::vector<double>& v, std::size_t lo, std::size_t hi) {
  if (hi - lo <= 8) {
    double acc = 0.0;
    for (std::size_t i = lo; i < hi; ++i) acc += v[i];
    return acc;
  }
  const std::size_t mid = lo + (hi - lo) / 2;
  return pairwise_sum(v, lo, mid) + pairwise_sum(v, mid, hi);
}

}  // namespace

std::mt19937_64 RngStream::engine_for(std::uint64_t index) const {
  const std::uint64_t z = splitmix64(seed + (index + 1) * 0x9E3779B97F4A7C15ULL);
  return std::mt19937_64(splitmix64(z));
}

Eigen::MatrixXcd sample_gate(Ensemble ensemble, int q, std::mt19937_64& rng) {
  if (q < 2) throw ParameterError("sample_gate: q must be >= 2");
  std::normal_distribution<double> gauss(0.0, 1.0);
  if (ensemble == Ensemble::unitary) {
    Eigen::MatrixXcd a(q, q);
    for (int i = 0; i < q; ++i)
      for (int j = 0; j < q; ++j) {
        const double re = gauss(rng);
        const double im = gauss(rng);
        a(i, j) = Cplx(re, im) / std::sqrt(2.0);
      }
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(a);
    Eigen::MatrixXcd u = qr.householderQ() * Eigen::MatrixXcd::Identity(q, q);
    const Eigen::MatrixXcd r = qr.matrixQR().template triangularView<Eigen::Upper>();
    for (int j = 0; j < q; ++j) {
      const Cplx rjj = r(j, j);
      const double mag = std::abs(rjj);
      const Cplx phase = (mag > 0.0) ? rjj / mag : Cplx(1.0, 0.0);
      u.col(j) *= phase;
    }
    return u;
  }
  if (ensemble == Ensemble::orthogonal) {
    Eigen::MatrixXd a(q, q);
    for (int i = 0; i < q; ++i)
      for (int j = 0; j < q; ++j) a(i, j) = gauss(rng);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
    Eigen::MatrixXd u = qr.householderQ() * Eigen::MatrixXd::Identity(q, q);
    const Eigen::MatrixXd r = qr.matrixQR().template triangularView<Eigen::Upper>();
    for (int j = 0; j < q; ++j)
      if (r(j, j) < 0.0) u.col(j) *= -1.0;
    return u.cast<Cplx>();
  }
  throw ParameterError("sample_gate: sampling covers the unitary and orthogonal ensembles");
}

McResult mc_average(Ensemble ensemble, int d, int N, int t, const McObservable& obs, double p,
                    std::int64_t n_samples, std::uint64_t seed) {
  if (ensemble != Ensemble::unitary && ensemble != Ensemble::orthogonal)
    throw ParameterError("mc_average: sampling covers the unitary and orthogonal ensembles");
  if (d < 2) throw ParameterError("mc_average: d must be >= 2");
  if (N < 2 || N % 2 != 0) throw ParameterError("mc_average: N must be even and >= 2");
  if (t < 1) throw ParameterError("mc_average: t must be >= 1");
  if (p < 0.0 || p > 1.0) throw ParameterError("mc_average: p must lie in [0, 1]");
  if (n_samples < 1) throw ParameterError("mc_average: need n_samples >= 1");
  if (obs.k < 1) throw ParameterError("mc_average: k must be >= 1");
  if (obs.bell_pairs < 0 || obs.bell_pairs > N)
    throw ParameterError("mc_average: bell_pairs must lie in [0, N]");

  const int n_sites = obs.bell_pairs + N;
  std::int64_t dim = 1;
  for (int s = 0; s < n_sites; ++s) {
    dim *= d;
    if (dim > 4096) throw ResourceError("mc_average: d^(bell_pairs + N) exceeds 4096");
  }
  const bool noisy = p > 0.0;
  const bool is_xeb = obs.kind == McObservable::Kind::xeb;
  if (is_xeb && obs.bell_pairs != 0)
    throw ParameterError("mc_average: xeb does not take reference qudits");
  if (obs.kind == McObservable::Kind::purity &&
      (obs.lo < 0 || obs.lo >= obs.hi || obs.hi > n_sites))
    throw ParameterError("mc_average: purity region out of range");

  const Eigen::VectorXcd psi0 = initial_state(d, n_sites, obs.bell_pairs);
  const RngStream stream{seed};
  std::vector<double> vals(static_cast<std::size_t>(n_samples));

  for (std::int64_t s = 0; s < n_samples; ++s) {
    std::mt19937_64 rng = stream.engine_for(static_cast<std::uint64_t>(s));
    Eigen::VectorXcd psi;
    Eigen::MatrixXcd rho;
    const bool track_vec = !noisy || is_xeb;
    const bool track_rho = noisy;
    if (track_vec) psi = psi0;
    if (track_rho) rho = psi0 * psi0.adjoint();

    for (int layer = 1; layer <= t; ++layer) {
      const int start = (layer % 2 == 1) ? 0 : 1;
      for (int i = start; i + 1 < N; i += 2) {
        const Eigen::MatrixXcd u = sample_gate(ensemble, d * d, rng);
        const int a = obs.bell_pairs + i;
        if (track_vec) apply_gate_vec(psi, u, d, n_sites, a);
        if (track_rho) {
          apply_gate_rho(rho, u, d, n_sites, a);
          apply_dep_rho(rho, p, d, n_sites, a);
          apply_dep_rho(rho, p, d, n_sites, a + 1);
        }
      }
    }

    double val = 0.0;
    switch (obs.kind) {
      case McObservable::Kind::ipr: {
        if (noisy) {
          for (std::int64_t x = 0; x < dim; ++x) val += std::pow(rho(x, x).real(), obs.k);
        } else {
          for (std::int64_t x = 0; x < dim; ++x) val += std::pow(std::norm(psi(x)), obs.k);
        }
        break;
      }
      case McObservable::Kind::purity: {
        const Eigen::MatrixXcd rho_a = noisy
                                           ? reduced_density(rho, d, n_sites, obs.lo, obs.hi)
                                           : reduced_density(psi, d, n_sites, obs.lo, obs.hi);
        val = trace_power(rho_a, obs.k);
        break;
      }
      case McObservable::Kind::xeb: {
        double overlap = 0.0;
        if (noisy) {
          for (std::int64_t x = 0; x < dim; ++x) overlap += std::norm(psi(x)) * rho(x, x).real();
        } else {
          for (std::int64_t x = 0; x < dim; ++x) overlap += std::norm(psi(x)) * std::norm(psi(x));
        }
        val = static_cast<double>(dim) * overlap - 1.0;
        break;
      }
    }
    vals[static_cast<std::size_t>(s)] = val;
  }

  McResult res;
  res.n_samples = n_samples;
  res.mean = pairwise_sum(vals, 0, vals.size()) / static_cast<double>(n_samples);
  if (n_samples > 1) {
    std::vector<double> sq(vals.size());
    for (std::size_t i = 0; i < vals.size(); ++i) {
      const double dv = vals[i] - res.mean;
      sq[i] = dv * dv;
    }
    const double var = pairwise_sum(sq, 0, sq.size()) / static_cast<double>(n_samples - 1);
    res.std_error = std::sqrt(var / static_cast<double>(n_samples));
  }
  return res;
}

}  // namespace rtn
