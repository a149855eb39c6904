#pragma once

namespace rtn {

// k-th Haar moment of the inverse participation ratio, k! D! / (D+k-1)!.
double haar_ipr(double big_d, int k);
double log_haar_ipr(double big_d, int k);

// Haar-average subsystem purity (D_A + D_B) / (D_A D_B + 1).
double page_purity(double d_a, double d_b);

// Orthogonal-Haar stationary IPR, (2k-1)!! / prod_{m=1}^{k-1} (D + 2m).
double orthogonal_ipr_stat(double big_d, int k);
double log_orthogonal_ipr_stat(double big_d, int k);

// Clifford stationary IPR, (-d^{2-k}; d)_N / (-d; d)_N with the q-Pochhammer
// (a; x)_N = prod_{m=0}^{N-1} (1 - a x^m); telescopes to 2/(D+1) at k = 2.
double clifford_ipr_stat(int d, int n_qudits, int k);
double log_clifford_ipr_stat(int d, int n_qudits, int k);

// Depth at which plateau-level tests are evaluated: 4 ceil(log2 N) + 20.
int plateau_depth(int n_sites);

}  // namespace rtn
