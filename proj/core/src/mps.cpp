#include "rtn/mps.hpp"

#include <cmath>

#include "rtn/errors.hpp"

namespace rtn {

namespace {

constexpr double kNormLo = 1e-2;
constexpr double kNormHi = 1e2;

void rescale_center(RowMPS& mps) {
  if (mps.ortho < 0) return;
  double m = 0.0;
  for (const Eigen::MatrixXd& a : mps.site[mps.ortho])
    m = std::max(m, a.cwiseAbs().maxCoeff());
  if (m > 0.0 && (m < kNormLo || m > kNormHi)) {
    for (Eigen::MatrixXd& a : mps.site[mps.ortho]) a /= m;
    mps.log_scale += std::log(m);
  }
}

// right-move of the center across bond (i, i+1) via thin QR
void shift_right(RowMPS& mps, int i) {
  const int p = mps.phys();
  const int cl = mps.left_dim(i), cr = mps.right_dim(i);
  Eigen::MatrixXd m(cl * p, cr);
  for (int s = 0; s < p; ++s) m.middleRows(s * cl, cl) = mps.site[i][s];
  const int rank = std::min<int>(cl * p, cr);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(m);
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(cl * p, rank);
  Eigen::MatrixXd r = qr.matrixQR().topRows(rank).triangularView<Eigen::Upper>();
  for (int s = 0; s < p; ++s) mps.site[i][s] = q.middleRows(s * cl, cl);
  for (int s = 0; s < p; ++s) mps.site[i + 1][s] = r * mps.site[i + 1][s];
  mps.ortho = i + 1;
}

// left-move of the center across bond (i-1, i) via LQ (QR of the transpose)
void shift_left(RowMPS& mps, int i) {
  const int p = mps.phys();
  const int cl = mps.left_dim(i), cr = mps.right_dim(i);
  Eigen::MatrixXd m(cl, p * cr);
  for (int s = 0; s < p; ++s) m.middleCols(s * cr, cr) = mps.site[i][s];
  const int rank = std::min<int>(cl, p * cr);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(m.transpose());
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(p * cr, rank);
  Eigen::MatrixXd r = qr.matrixQR().topRows(rank).triangularView<Eigen::Upper>();
  // m = r^T q^T
  for (int s = 0; s < p; ++s) mps.site[i][s] = q.middleRows(s * cr, cr).transpose();
  for (int s = 0; s < p; ++s) mps.site[i - 1][s] = mps.site[i - 1][s] * r.transpose();
  mps.ortho = i - 1;
}

}  // namespace

int RowMPS::max_bond() const {
  int m = 1;
  for (int i = 0; i + 1 < n_sites(); ++i) m = std::max(m, right_dim(i));
  return m;
}

RowMPS init_mps_pairs(int N, const std::vector<Eigen::MatrixXd>& pair_mats, bool rescaled) {
  if (N < 2 || N % 2 != 0) throw ParameterError("init_mps: N must be even and >= 2");
  if (static_cast<int>(pair_mats.size()) != N / 2)
    throw ParameterError("init_mps: need N/2 pair matrices");
  const int p = static_cast<int>(pair_mats[0].rows());
  RowMPS mps;
  mps.site.resize(N);
  for (int j = 0; j < N / 2; ++j) {
    Eigen::MatrixXd w = pair_mats[j];
    if (w.rows() != p || w.cols() != p) throw ParameterError("init_mps: pair matrix shape mismatch");
    if (rescaled) {
      const double m = w.cwiseAbs().maxCoeff();
      if (m > 0.0) {
        w /= m;
        mps.log_scale += std::log(m);
      }
    }
    auto& left = mps.site[2 * j];
    auto& right = mps.site[2 * j + 1];
    left.resize(p);
    right.resize(p);
    for (int s = 0; s < p; ++s) {
      left[s] = w.row(s);                          // 1 x p
      right[s] = Eigen::MatrixXd::Zero(p, 1);      // p x 1
      right[s](s, 0) = 1.0;
    }
  }
  return mps;
}

RowMPS init_mps(int N, const CommutantBasis& basis, int d,
                const std::vector<Eigen::VectorXd>& init_overlaps, bool rescaled) {
  if (N < 2 || N % 2 != 0) throw ParameterError("init_mps: N must be even and >= 2");
  if (static_cast<int>(init_overlaps.size()) != N)
    throw ParameterError("init_mps: need N per-site overlap vectors");
  std::vector<Eigen::MatrixXd> pairs(N / 2);
  for (int j = 0; j < N / 2; ++j) {
    Eigen::VectorXd c =
        initial_pair_amplitudes(basis, d, init_overlaps[2 * j], init_overlaps[2 * j + 1]);
    pairs[j] = c.asDiagonal();
  }
  return init_mps_pairs(N, pairs, rescaled);
}

void canonicalize(RowMPS& mps) {
  for (int i = mps.n_sites() - 1; i >= 1; --i) {
    mps.ortho = i;  // shift_left only uses the tensors at i-1, i
    shift_left(mps, i);
  }
  mps.ortho = 0;
  rescale_center(mps);
}

void move_center(RowMPS& mps, int to) {
  if (mps.ortho < 0) {
    canonicalize(mps);
  }
  while (mps.ortho < to) shift_right(mps, mps.ortho);
  while (mps.ortho > to) shift_left(mps, mps.ortho);
}

namespace {

void apply_gate_bond(RowMPS& mps, const DressedGate& gate, int i, const TruncationParams& trunc,
                     int chi_cap, LayerStats& st) {
  const int p = mps.phys();
  const int cl = mps.left_dim(i), cr = mps.right_dim(i + 1);

  // theta blocks, flattened column-major into columns of TH
  Eigen::MatrixXd th(cl * cr, p * p);
  for (int s1 = 0; s1 < p; ++s1)
    for (int s2 = 0; s2 < p; ++s2) {
      Eigen::MatrixXd blk = mps.site[i][s1] * mps.site[i + 1][s2];
      th.col(s1 * p + s2) = Eigen::Map<Eigen::VectorXd>(blk.data(), cl * cr);
    }
  Eigen::MatrixXd out = th * gate.t.transpose();

  // regroup to (o1, l) x (o2, r)
  Eigen::MatrixXd m(p * cl, p * cr);
  for (int o1 = 0; o1 < p; ++o1)
    for (int o2 = 0; o2 < p; ++o2) {
      Eigen::Map<const Eigen::MatrixXd> blk(out.col(o1 * p + o2).data(), cl, cr);
      m.block(o1 * cl, o2 * cr, cl, cr) = blk;
    }

  SvdResult svd = thin_svd(m);
  TruncationDecision dec = decide_truncation(svd.s, trunc.cutoff, chi_cap);
  const int keep = dec.keep;
  st.max_discarded = std::max(st.max_discarded, dec.discarded_weight);

  for (int o1 = 0; o1 < p; ++o1) mps.site[i][o1] = svd.u.block(o1 * cl, 0, cl, keep);
  Eigen::MatrixXd sv = svd.s.head(keep).asDiagonal() * svd.vt.topRows(keep);
  for (int o2 = 0; o2 < p; ++o2) mps.site[i + 1][o2] = sv.middleCols(o2 * cr, cr);
  mps.ortho = i + 1;
  st.max_chi = std::max(st.max_chi, keep);
}

}  // namespace

LayerStats apply_layer(RowMPS& mps, const DressedGate& gate, Parity parity,
                       const TruncationParams& trunc) {
  const int p = mps.phys();
  if (gate.phys != p) throw ParameterError("apply_layer: gate side != mps physical dimension");
  const int chi_cap = trunc.chi_max > 0 ? trunc.chi_max : 4 * p * p;
  LayerStats st;
  const int start = parity == Parity::odd ? 0 : 1;
  if (mps.ortho < 0) canonicalize(mps);
  for (int i = start; i + 1 < mps.n_sites(); i += 2) {
    move_center(mps, i);
    apply_gate_bond(mps, gate, i, trunc, chi_cap, st);
  }
  rescale_center(mps);
  st.max_chi = std::max(st.max_chi, mps.max_bond());
  return st;
}

std::pair<double, double> contract_top(const RowMPS& mps,
                                       const std::vector<Eigen::VectorXd>& per_site_amplitudes) {
  const int n = mps.n_sites();
  const int p = mps.phys();
  if (static_cast<int>(per_site_amplitudes.size()) != n)
    throw ParameterError("contract_top: need one amplitude vector per site");
  Eigen::RowVectorXd l = Eigen::RowVectorXd::Ones(1);
  double log_acc = mps.log_scale;
  for (int i = 0; i < n; ++i) {
    const Eigen::VectorXd& b = per_site_amplitudes[i];
    if (b.size() != p) throw ParameterError("contract_top: amplitude length != phys dim");
    Eigen::MatrixXd c = b(0) * mps.site[i][0];
    for (int s = 1; s < p; ++s) c += b(s) * mps.site[i][s];
    l = l * c;
    const double m = l.cwiseAbs().maxCoeff();
    if (m == 0.0) return {0.0, log_acc};
    if (m < kNormLo || m > kNormHi) {
      l /= m;
      log_acc += std::log(m);
    }
  }
  return {l(0), log_acc};
}

}  // namespace rtn
