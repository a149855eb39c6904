#include "rtn/gram.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include "rtn/errors.hpp"

namespace rtn {

namespace {

double ipow(int q, int e) {
  double r = 1.0;
  for (int i = 0; i < e; ++i) r *= q;
  return r;
}

Eigen::MatrixXd clifford_gram_numeric(const CommutantBasis& basis, int d) {
  const int n = basis.size();
  std::vector<Eigen::VectorXd> vecs(n);
  for (int i = 0; i < n; ++i) vecs[i] = element_vector(basis, i, d);
  Eigen::MatrixXd g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) g(i, j) = g(j, i) = vecs[i].dot(vecs[j]);
  return g;
}

}  // namespace

GramMatrix gram_matrix(const CommutantBasis& basis, int q) {
  if (q < 2) throw ParameterError("gram_matrix: q must be >= 2");
  const int n = basis.size();
  GramMatrix g;
  g.dim_q = q;

  if (basis.ensemble == Ensemble::clifford) {
    const int d = basis.d_hint;
    if (q == d) {
      g.entries = clifford_gram_numeric(basis, d);
    } else if (q == d * d) {
      // two-site element vectors are tensor squares of the single-site ones
      Eigen::MatrixXd base = clifford_gram_numeric(basis, d);
      g.entries = base.cwiseProduct(base);
    } else {
      throw ParameterError("gram_matrix: clifford basis supports q = d or q = d^2 only");
    }
    return g;
  }

  g.entries.resize(n, n);
  if (basis.ensemble == Ensemble::unitary) {
    for (int i = 0; i < n; ++i) {
      const Permutation inv = basis.elements[i].perm.inverse();
      for (int j = 0; j < n; ++j)
        g.entries(i, j) = ipow(q, cycle_count(inv.compose(basis.elements[j].perm)));
    }
  } else {
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j)
        g.entries(i, j) = g.entries(j, i) =
            ipow(q, loop_count(basis.elements[i].diagram, basis.elements[j].diagram));
  }
  return g;
}

Eigen::MatrixXd sym_pseudo_inverse(const Eigen::MatrixXd& m, double rel_cut, int* rank_out) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
  const Eigen::VectorXd& ev = es.eigenvalues();
  const double cut = rel_cut * ev.cwiseAbs().maxCoeff();
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(ev.size());
  int rank = 0;
  for (int i = 0; i < ev.size(); ++i) {
    if (std::abs(ev(i)) > cut) {
      inv(i) = 1.0 / ev(i);
      ++rank;
    }
  }
  if (rank_out) *rank_out = rank;
  return es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().transpose();
}

WeingartenMatrix weingarten_matrix(const CommutantBasis& basis, int q) {
  GramMatrix g = gram_matrix(basis, q);
  WeingartenMatrix w;
  w.dim_q = q;
  w.entries = sym_pseudo_inverse(g.entries, 1e-10, &w.rank);
  return w;
}

void write_matrix_csv(std::ostream& os, const Eigen::MatrixXd& m) {
  char buf[64];
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      std::snprintf(buf, sizeof(buf), "%.17g", m(i, j));
      os << (j ? "," : "") << buf;
    }
    os << "\n";
  }
}

}  // namespace rtn
