#pragma once

#include <Eigen/Dense>

#include "rtn/channels.hpp"
#include "rtn/gram.hpp"
#include "rtn/irrep.hpp"

namespace rtn {

// Averaged two-site transfer gate with Weingarten and link-Gram factors folded
// in. Stored as a (p^2)x(p^2) matrix: row (sigma1*p + sigma2), column
// (tau1*p + tau2). Before irrep reduction rows with sigma1 != sigma2 vanish.
struct DressedGate {
  Eigen::MatrixXd t;
  int phys = 0;
  bool reduced = false;
};

// T[sigma,sigma,tau1,tau2] = sum_pi Wg_{sigma,pi}(d^2) G^L_{pi,tau1} G^R_{pi,tau2}
DressedGate dressed_gate(const CommutantBasis& basis, int d, const GramMatrix& gram_left,
                         const GramMatrix& gram_right);

// c(sigma) = sum_tau Wg_{sigma,tau}(d^2) v_left(tau) v_right(tau)
Eigen::VectorXd initial_pair_amplitudes(const CommutantBasis& basis, int d,
                                        const Eigen::VectorXd& v_left,
                                        const Eigen::VectorXd& v_right);

// (P x P) T (P x P)^T
DressedGate irrep_reduce_gate(const DressedGate& g, const IrrepProjector& pr);

}  // namespace rtn
