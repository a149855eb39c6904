#pragma once

#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "rtn/gate.hpp"
#include "rtn/svd.hpp"

namespace rtn {

enum class Parity { odd, even };

struct LayerStats {
  int max_chi = 0;
  double max_discarded = 0.0;
};

// Coefficient MPS over the commutant basis: site[i][s] is the chiL x chiR slice
// for physical label s. Magnitudes are kept O(1); the true scale lives in
// log_scale.
struct RowMPS {
  std::vector<std::vector<Eigen::MatrixXd>> site;
  double log_scale = 0.0;
  int ortho = -1;  // orthogonality center, -1 when unknown

  int n_sites() const { return static_cast<int>(site.size()); }
  int phys() const { return site.empty() ? 0 : static_cast<int>(site[0].size()); }
  int left_dim(int i) const { return static_cast<int>(site[i][0].rows()); }
  int right_dim(int i) const { return static_cast<int>(site[i][0].cols()); }
  int max_bond() const;
};

// Product of N/2 nearest-neighbour pair states; pair j spans sites (2j, 2j+1)
// with amplitude matrix W_j (pair state sum_{s,s'} W(s,s') |s>|s'>). In
// rescaled mode each pair is normalized to unit max-amplitude and the factor
// moves into log_scale.
RowMPS init_mps_pairs(int N, const std::vector<Eigen::MatrixXd>& pair_mats, bool rescaled);

// Pair-correlated initial state from per-site overlap vectors: pair amplitudes
// c = Wg(d^2) (v_left . v_right), diagonal pair matrices.
RowMPS init_mps(int N, const CommutantBasis& basis, int d,
                const std::vector<Eigen::VectorXd>& init_overlaps, bool rescaled);

void canonicalize(RowMPS& mps);  // right-canonical, center at site 0
void move_center(RowMPS& mps, int to);

// One brickwork layer: odd parity acts on bonds (0,1),(2,3),...; even parity on
// (1,2),(3,4),... with the edge sites idle.
LayerStats apply_layer(RowMPS& mps, const DressedGate& gate, Parity parity,
                       const TruncationParams& trunc);

// (mantissa, log_scale) of sum_config prod_i b_i(s_i) psi(s_1..s_N); read-only.
std::pair<double, double> contract_top(const RowMPS& mps,
                                       const std::vector<Eigen::VectorXd>& per_site_amplitudes);

}  // namespace rtn
