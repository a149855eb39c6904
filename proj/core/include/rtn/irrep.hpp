#pragma once

#include <Eigen/Dense>

#include "rtn/gram.hpp"

namespace rtn {

// Orthonormal-row projector onto the column space of a Gram matrix.
struct IrrepProjector {
  Eigen::MatrixXd P;  // d_red x n_B
  int d_red = 0;
};

IrrepProjector irrep_projector(const GramMatrix& g);

// b -> P b (equivalently, the boundary bra picks up P^T on the right).
Eigen::VectorXd irrep_reduce_boundary(const Eigen::VectorXd& b, const IrrepProjector& pr);

// pair amplitude matrix W -> P W P^T
Eigen::MatrixXd irrep_reduce_pair(const Eigen::MatrixXd& w, const IrrepProjector& pr);

}  // namespace rtn
