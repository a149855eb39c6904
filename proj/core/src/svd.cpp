#include "rtn/svd.hpp"

#include <algorithm>

#ifdef RTN_HAVE_LAPACKE
#include <lapacke.h>
#endif

namespace rtn {

#ifdef RTN_HAVE_LAPACKE
namespace {

bool lapack_svd(const Eigen::MatrixXd& m, SvdResult& out) {
  const lapack_int rows = static_cast<lapack_int>(m.rows());
  const lapack_int cols = static_cast<lapack_int>(m.cols());
  const lapack_int r = std::min(rows, cols);
  Eigen::MatrixXd a = m;  // column-major scratch, overwritten by LAPACK
  out.u.resize(rows, r);
  out.s.resize(r);
  Eigen::MatrixXd vt(r, cols);
  lapack_int info = LAPACKE_dgesdd(LAPACK_COL_MAJOR, 'S', rows, cols, a.data(), rows,
                                   out.s.data(), out.u.data(), rows, vt.data(), r);
  if (info != 0) return false;
  out.vt = std::move(vt);
  return true;
}

}  // namespace
#endif

SvdResult thin_svd(const Eigen::MatrixXd& m) {
  SvdResult out;
#ifdef RTN_HAVE_LAPACKE
  if (lapack_svd(m, out)) return out;
#endif
  Eigen::BDCSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  out.u = svd.matrixU();
  out.s = svd.singularValues();
  out.vt = svd.matrixV().transpose();
  return out;
}

TruncationDecision decide_truncation(const Eigen::VectorXd& s, double cutoff, int chi_cap) {
  TruncationDecision d;
  const int n = static_cast<int>(s.size());
  if (n == 0) return d;
  const double smax = s(0);
  const double thresh = cutoff * smax;

  // values within 1e-12 (relative) of the last kept value ride along; the
  // boundary stays fixed while expanding so a noise tail cannot chain in
  const auto absorb_ties = [&](int keep) {
    const double floor = s(keep - 1) * (1.0 - 1e-12);
    while (keep < n && s(keep) >= floor) ++keep;
    return keep;
  };

  int keep = 0;
  while (keep < n && s(keep) > thresh) ++keep;
  if (keep == 0) keep = 1;
  keep = absorb_ties(keep);

  if (chi_cap > 0 && keep > chi_cap) {
    // soft cap: a degenerate multiplet straddling the cap is kept whole
    keep = absorb_ties(chi_cap);
  }

  double total = 0.0, kept = 0.0;
  for (int i = 0; i < n; ++i) total += s(i) * s(i);
  for (int i = 0; i < keep; ++i) kept += s(i) * s(i);
  d.keep = keep;
  d.discarded_weight = total > 0.0 ? (total - kept) / total : 0.0;
  return d;
}

}  // namespace rtn
