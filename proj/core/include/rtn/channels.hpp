#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rtn/basis.hpp"
#include "rtn/gram.hpp"

namespace rtn {

// Single-qudit channel in doubled (vectorized-operator) form: a d^2 x d^2 matrix
// acting on vec(rho) with index (ket*d + bra).
struct ChannelSuperop {
  Eigen::MatrixXcd matrix;
  int d = 0;
  std::string label;
  double p = 0.0;

  bool is_identity() const { return label == "id"; }
};

ChannelSuperop identity_choi(int d);
ChannelSuperop depolarising_choi(int d, double p);

// Grammar: "id" | "dep:<p>"
ChannelSuperop parse_channel(const std::string& spec, int d);

// One channel per replica.
struct ChannelStack {
  std::vector<ChannelSuperop> channels;

  int k() const { return static_cast<int>(channels.size()); }
  int d() const { return channels.empty() ? 0 : channels.front().d; }
  bool is_identity() const;
};

ChannelStack identity_stack(int d, int k);
ChannelStack uniform_stack(const ChannelSuperop& c, int k);

// Apply the k-fold replica stack to a length-d^{2k} vector (channel a acts on
// the (ket_a, bra_a) digit pair); complex leakage above 1e-12 is an error.
Eigen::VectorXd apply_stack(const ChannelStack& stack, const Eigen::VectorXd& v, int d, int k);

// Entries <<pi| N_1 x ... x N_k |sigma>> at single-site dimension d.
GramMatrix noisy_gram(const CommutantBasis& basis, int d, const ChannelStack& stack);

}  // namespace rtn
