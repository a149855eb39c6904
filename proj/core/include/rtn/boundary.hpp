#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rtn/channels.hpp"

namespace rtn {

// Top-boundary descriptor. Site vectors are materialized per (N, channel stack)
// by boundary_site_vectors; a purity region is [lo, hi) in 0-based sites.
struct BoundarySpec {
  enum class Kind { ipr, purity };
  Kind kind = Kind::ipr;
  int k = 2;
  int lo = 0, hi = 0;
  double log_prefactor = 0.0;
  std::string label;
};

BoundarySpec ipr_boundary(const CommutantBasis& basis, int d);
BoundarySpec purity_boundary(const CommutantBasis& basis, int d, std::pair<int, int> region,
                             int k);

// Per-site amplitude b_i(sigma); stack != nullptr dresses the boundary with the
// pending per-site channels (<<Omega| (x)N |sigma>>).
std::vector<Eigen::VectorXd> boundary_site_vectors(const BoundarySpec& spec,
                                                   const CommutantBasis& basis, int d, int N,
                                                   const ChannelStack* stack);

// Overlap of the k-replica diagonal projector with each (possibly noise-dressed)
// basis vector; equals d on every permutation and Brauer crossing.
Eigen::VectorXd ipr_site_vector(const CommutantBasis& basis, int d, const ChannelStack* stack);

// Row <<eta| N |sigma>> of the (noisy) Gram at dimension d.
Eigen::VectorXd perm_bra_site_vector(const CommutantBasis& basis, int d, const Permutation& eta,
                                     const ChannelStack* stack);

// Effective initial overlap of a system site Bell-paired to an untouched
// reference whose top boundary carries permutation beta: v(tau) =
// d^{#(tau*beta) - k}. k = 2 only.
Eigen::VectorXd bell_init_overlaps(const Permutation& beta, int k, int d);

}  // namespace rtn
