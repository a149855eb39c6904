#pragma once

#include <iosfwd>

#include <Eigen/Dense>

#include "rtn/basis.hpp"

namespace rtn {

struct GramMatrix {
  Eigen::MatrixXd entries;
  int dim_q = 0;
};

struct WeingartenMatrix {
  Eigen::MatrixXd entries;
  int dim_q = 0;
  int rank = 0;
};

// Pairwise overlaps of the basis vectors at dimension q. Unitary: q^{cycles};
// orthogonal: q^{loops}; clifford: exact vector inner products at q = d_hint,
// or the entrywise square of those at q = d_hint^2 (two-site vectors factorize).
GramMatrix gram_matrix(const CommutantBasis& basis, int q);

// Moore-Penrose pseudo-inverse of the Gram (exact inverse at full rank).
WeingartenMatrix weingarten_matrix(const CommutantBasis& basis, int q);

// Pseudo-inverse of a symmetric matrix; eigenvalues below rel_cut * max are
// treated as zero.
Eigen::MatrixXd sym_pseudo_inverse(const Eigen::MatrixXd& m, double rel_cut = 1e-10,
                                   int* rank_out = nullptr);

// Row-major CSV dump with 17 significant digits.
void write_matrix_csv(std::ostream& os, const Eigen::MatrixXd& m);

}  // namespace rtn
