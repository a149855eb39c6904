#include "rtn/boundary.hpp"

#include <cmath>

#include "rtn/errors.hpp"

namespace rtn {

namespace {

Eigen::VectorXd diagonal_projector_vector(int k, int d) {
  const std::int64_t dim = replica_dim(k, d);
  Eigen::VectorXd proj = Eigen::VectorXd::Zero(dim);
  for (int x = 0; x < d; ++x) {
    std::int64_t idx = 0;
    for (int m = 0; m < k; ++m) idx = (idx * d + x) * d + x;
    proj(idx) = 1.0;
  }
  return proj;
}

}  // namespace

BoundarySpec ipr_boundary(const CommutantBasis& basis, int d) {
  if (d < 2) throw ParameterError("ipr_boundary: d must be >= 2");
  BoundarySpec b;
  b.kind = BoundarySpec::Kind::ipr;
  b.k = basis.k;
  b.label = "ipr";
  return b;
}

BoundarySpec purity_boundary(const CommutantBasis& basis, int d, std::pair<int, int> region,
                             int k) {
  if (d < 2) throw ParameterError("purity_boundary: d must be >= 2");
  if (k != basis.k) throw ParameterError("purity_boundary: k != basis.k");
  if (basis.find_permutation(Permutation::cyclic(basis.k)) < 0)
    throw ParameterError("purity_boundary: basis lacks the cyclic permutation");
  if (region.first < 0 || region.second < region.first)
    throw ParameterError("purity_boundary: bad region");
  BoundarySpec b;
  b.kind = BoundarySpec::Kind::purity;
  b.k = k;
  b.lo = region.first;
  b.hi = region.second;
  b.label = "purity";
  return b;
}

Eigen::VectorXd ipr_site_vector(const CommutantBasis& basis, int d, const ChannelStack* stack) {
  const Eigen::VectorXd proj = diagonal_projector_vector(basis.k, d);
  Eigen::VectorXd out(basis.size());
  for (int i = 0; i < basis.size(); ++i) {
    Eigen::VectorXd v = element_vector(basis, i, d);
    if (stack) v = apply_stack(*stack, v, d, basis.k);
    out(i) = proj.dot(v);
  }
  return out;
}

Eigen::VectorXd perm_bra_site_vector(const CommutantBasis& basis, int d, const Permutation& eta,
                                     const ChannelStack* stack) {
  const int idx = basis.find_permutation(eta);
  if (idx < 0) throw ParameterError("perm_bra_site_vector: permutation not in basis");
  if (!stack || stack->is_identity()) return gram_matrix(basis, d).entries.row(idx).transpose();
  return noisy_gram(basis, d, *stack).entries.row(idx).transpose();
}

std::vector<Eigen::VectorXd> boundary_site_vectors(const BoundarySpec& spec,
                                                   const CommutantBasis& basis, int d, int N,
                                                   const ChannelStack* stack) {
  std::vector<Eigen::VectorXd> out(N);
  if (spec.kind == BoundarySpec::Kind::ipr) {
    const Eigen::VectorXd v = ipr_site_vector(basis, d, stack);
    for (int i = 0; i < N; ++i) out[i] = v;
    return out;
  }
  if (spec.hi > N) throw ParameterError("boundary_site_vectors: region exceeds chain");
  const Eigen::VectorXd a =
      perm_bra_site_vector(basis, d, Permutation::cyclic(basis.k), stack);
  const Eigen::VectorXd b =
      perm_bra_site_vector(basis, d, Permutation::identity(basis.k), stack);
  for (int i = 0; i < N; ++i) out[i] = (i >= spec.lo && i < spec.hi) ? a : b;
  return out;
}

Eigen::VectorXd bell_init_overlaps(const Permutation& beta, int k, int d) {
  if (k != 2) throw ParameterError("bell_init_overlaps: k = 2 only");
  if (beta.k() != 2) throw ParameterError("bell_init_overlaps: beta must act on 2 replicas");
  CommutantBasis basis = symmetric_basis(2);
  Eigen::VectorXd v(basis.size());
  for (int i = 0; i < basis.size(); ++i) {
    const int cycles = cycle_count(basis.elements[i].perm.compose(beta));
    v(i) = std::pow(static_cast<double>(d), cycles - k);
  }
  return v;
}

}  // namespace rtn
