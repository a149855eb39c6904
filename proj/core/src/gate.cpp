#include "rtn/gate.hpp"

#include "rtn/errors.hpp"

namespace rtn {

DressedGate dressed_gate(const CommutantBasis& basis, int d, const GramMatrix& gram_left,
                         const GramMatrix& gram_right) {
  const int n = basis.size();
  if (gram_left.entries.rows() != n || gram_right.entries.rows() != n)
    throw ParameterError("dressed_gate: gram size mismatch");
  WeingartenMatrix wg = weingarten_matrix(basis, d * d);

  DressedGate g;
  g.phys = n;
  g.t = Eigen::MatrixXd::Zero(n * n, n * n);
  for (int s = 0; s < n; ++s) {
    // A_s(t1,t2) = sum_pi Wg(s,pi) GL(pi,t1) GR(pi,t2)
    Eigen::MatrixXd a = gram_left.entries.transpose() *
                        wg.entries.row(s).asDiagonal() * gram_right.entries;
    for (int t1 = 0; t1 < n; ++t1)
      for (int t2 = 0; t2 < n; ++t2) g.t(s * n + s, t1 * n + t2) = a(t1, t2);
  }
  return g;
}

Eigen::VectorXd initial_pair_amplitudes(const CommutantBasis& basis, int d,
                                        const Eigen::VectorXd& v_left,
                                        const Eigen::VectorXd& v_right) {
  const int n = basis.size();
  if (v_left.size() != n || v_right.size() != n)
    throw ParameterError("initial_pair_amplitudes: vector length mismatch");
  WeingartenMatrix wg = weingarten_matrix(basis, d * d);
  return wg.entries * v_left.cwiseProduct(v_right);
}

DressedGate irrep_reduce_gate(const DressedGate& g, const IrrepProjector& pr) {
  const int n = g.phys;
  if (pr.P.cols() != n) throw ParameterError("irrep_reduce_gate: projector shape mismatch");
  const int r = pr.d_red;
  // (P x P) rows: kron without forming it on the large side explicitly
  Eigen::MatrixXd pp(r * r, n * n);
  for (int a = 0; a < r; ++a)
    for (int b = 0; b < r; ++b)
      for (int s1 = 0; s1 < n; ++s1)
        for (int s2 = 0; s2 < n; ++s2) pp(a * r + b, s1 * n + s2) = pr.P(a, s1) * pr.P(b, s2);
  DressedGate out;
  out.phys = r;
  out.reduced = true;
  out.t = pp * g.t * pp.transpose();
  return out;
}

}  // namespace rtn
