#pragma once

#include <Eigen/Dense>

namespace rtn {

struct SvdResult {
  Eigen::MatrixXd u;   // m x r
  Eigen::VectorXd s;   // r, descending
  Eigen::MatrixXd vt;  // r x n
};

// Thin SVD; LAPACK divide-and-conquer when available, Eigen BDCSVD otherwise.
SvdResult thin_svd(const Eigen::MatrixXd& m);

struct TruncationParams {
  int chi_max = 0;        // 0: resolved to 4 * phys^2 by the contraction driver
  double cutoff = 1e-13;  // relative singular-value threshold
};

struct TruncationDecision {
  int keep = 0;
  double discarded_weight = 0.0;  // sum of discarded s^2 over total s^2
};

// Keep values above cutoff * s_max without splitting near-degenerate multiplets
// (ties within 1e-12 relative to the boundary value). chi_cap is soft in the
// same sense: values tied with the capped boundary ride along, so the bond can
// exceed chi_cap by the width of one multiplet. At least one value survives.
TruncationDecision decide_truncation(const Eigen::VectorXd& s, double cutoff, int chi_cap);

}  // namespace rtn
