#include "rtn/irrep.hpp"

#include <cmath>

#include "rtn/errors.hpp"

namespace rtn {

IrrepProjector irrep_projector(const GramMatrix& g) {
  const Eigen::MatrixXd& m = g.entries;
  if (m.rows() != m.cols()) throw ParameterError("irrep_projector: Gram must be square");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
  const Eigen::VectorXd& ev = es.eigenvalues();
  const double cut = 1e-10 * ev.cwiseAbs().maxCoeff();

  IrrepProjector pr;
  int kept = 0;
  for (int i = 0; i < ev.size(); ++i)
    if (std::abs(ev(i)) > cut) ++kept;
  pr.d_red = kept;
  pr.P.resize(kept, m.rows());
  // eigenvalue-descending row order (Eigen sorts ascending), deterministic sign
  int row = 0;
  for (int i = static_cast<int>(ev.size()) - 1; i >= 0; --i) {
    if (std::abs(ev(i)) <= cut) continue;
    Eigen::VectorXd v = es.eigenvectors().col(i);
    int arg = 0;
    v.cwiseAbs().maxCoeff(&arg);
    if (v(arg) < 0) v = -v;
    pr.P.row(row++) = v.transpose();
  }
  return pr;
}

Eigen::VectorXd irrep_reduce_boundary(const Eigen::VectorXd& b, const IrrepProjector& pr) {
  if (b.size() != pr.P.cols()) throw ParameterError("irrep_reduce_boundary: length mismatch");
  return pr.P * b;
}

Eigen::MatrixXd irrep_reduce_pair(const Eigen::MatrixXd& w, const IrrepProjector& pr) {
  if (w.rows() != pr.P.cols() || w.cols() != pr.P.cols())
    throw ParameterError("irrep_reduce_pair: shape mismatch");
  return pr.P * w * pr.P.transpose();
}

}  // namespace rtn
