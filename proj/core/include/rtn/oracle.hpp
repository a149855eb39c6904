#pragma once

#include <cstdint>
#include <random>

#include "rtn/observables.hpp"

namespace rtn {

inline constexpr std::int64_t kDenseCap = 2000000;

// Truncation-free contraction of the full n_B^N replica vector; same gate and
// boundary builders as the MPS path, no SVD anywhere.
double dense_contract(const CommutantBasis& basis, int d, int N, int t,
                      const BoundarySpec& boundary, const ChannelStack* stack,
                      const std::vector<Eigen::VectorXd>* init_overlaps = nullptr,
                      double* log_value_out = nullptr);

// Exact single-domain-wall closed form for the k=2 purity of the first ell
// sites. The underlying walk advances only on layers whose gates straddle the
// wall, so the value is evaluated at the largest t' <= t with t' = ell (mod 2)
// (the exact purity is a staircase in t).
double rw_purity(int N, int ell, int d, int t);

// Sum of the absorption kernel u_{z,s} over s = 1..s_max (tail identity helper).
double rw_absorption_sum(int N, int z, int s_max);

struct RngStream {
  std::uint64_t seed = 0;

  // deterministic per-sample engine, independent of evaluation order
  std::mt19937_64 engine_for(std::uint64_t index) const;
};

// Haar gate: QR of a Ginibre matrix with the phase (unitary) or sign
// (orthogonal) of the R diagonal pushed back into Q.
Eigen::MatrixXcd sample_gate(Ensemble ensemble, int q, std::mt19937_64& rng);

struct McObservable {
  enum class Kind { ipr, purity, xeb };
  Kind kind = Kind::ipr;
  int k = 2;
  int lo = 0, hi = 0;   // purity region over the full chain (references included)
  int bell_pairs = 0;    // reference qudits prepended to the chain, Bell-paired
                         // with the first bell_pairs evolved sites
};

struct McResult {
  double mean = 0.0;
  double std_error = 0.0;
  std::int64_t n_samples = 0;
};

// Samples brickwork circuits gate-by-gate. N counts the evolved sites; gates
// and (for p > 0) depolarising noise act on those only. p = 0 runs a
// statevector, p > 0 a density matrix; xeb always pairs a clean statevector
// with a noisy density matrix driven by the same gates.
McResult mc_average(Ensemble ensemble, int d, int N, int t, const McObservable& obs, double p,
                    std::int64_t n_samples, std::uint64_t seed);

}  // namespace rtn
