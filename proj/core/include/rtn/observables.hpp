#pragma once

#include <utility>
#include <vector>

#include "rtn/boundary.hpp"
#include "rtn/closed_forms.hpp"
#include "rtn/mps.hpp"

namespace rtn {

struct RunResult {
  double value = 0.0;      // mantissa * exp(log_scale); underflows to 0 harmlessly
  double log_value = 0.0;  // NaN when the contraction is not positive
  double mantissa = 0.0;
  double log_scale = 0.0;
  int chi_used = 1;
  double discarded_weight = 0.0;
};

// Everything the bulk contraction needs: averaged gate for layers >= 2 and the
// pair-correlated bottom row (layer 1 absorbed). In the uniform noise model
// every bulk link carries the noisy Gram and, at the top, every site still owes
// one pending channel (layer 1 acts on all sites, so all flags stay set).
struct NetworkPlan {
  CommutantBasis basis;
  int d = 2;
  int N = 0;
  int phys = 0;
  DressedGate gate;
  std::vector<Eigen::MatrixXd> pair_mats;
  bool noisy = false;
  ChannelStack stack;  // meaningful when noisy
};

NetworkPlan make_plan(const CommutantBasis& basis, int d, int N, const ChannelStack* stack,
                      const std::vector<Eigen::VectorXd>* init_overlaps);

// Reduced twin of a plan (projector from the link Gram's column space).
NetworkPlan reduce_plan(const NetworkPlan& plan, const IrrepProjector& pr);

// Boundary vectors for the plan, dressed with its pending channels; reduced
// plans get the projected vectors.
std::vector<Eigen::VectorXd> plan_boundary(const NetworkPlan& plan, const BoundarySpec& spec,
                                           const IrrepProjector* pr = nullptr);

// Evolve once, contract at each requested depth (ascending, >= 1) against each
// boundary vector set. result[t_index][boundary_index].
std::vector<std::vector<RunResult>> run_network(
    const NetworkPlan& plan, const std::vector<int>& depths,
    const std::vector<std::vector<Eigen::VectorXd>>& boundaries, const TruncationParams& trunc);

double brickwork_average(const CommutantBasis& basis, int d, int N, int t,
                         const BoundarySpec& boundary, const TruncationParams& trunc,
                         RunResult* detail = nullptr);

double noisy_brickwork_average(const CommutantBasis& basis, int d, int N, int t,
                               const BoundarySpec& boundary, const ChannelStack& stack,
                               const TruncationParams& trunc, RunResult* detail = nullptr);

std::vector<RunResult> brickwork_sweep(const CommutantBasis& basis, int d, int N,
                                       const std::vector<int>& depths,
                                       const BoundarySpec& boundary, const ChannelStack* stack,
                                       const TruncationParams& trunc);

// log( full-swap contraction / IPR contraction ), same bulk for both.
double relative_coherence(int d, int N, int t, const ChannelStack& stack,
                          const TruncationParams& trunc, RunResult* numerator = nullptr,
                          RunResult* denominator = nullptr);

std::vector<std::pair<RunResult, RunResult>> coherence_sweep(int d, int N,
                                                             const std::vector<int>& depths,
                                                             const ChannelStack* stack,
                                                             const TruncationParams& trunc);

struct CoherentInfoResult {
  double ic = 0.0;          // (-log Tr rho_B^2) - (-log Tr rho_RB^2)
  double normalized = 0.0;  // ic / (K log d)
  RunResult run_b, run_rb;
};

// Noisy brickwork on the B chain only; the K reference qudits are contracted
// analytically into Bell initial overlaps on the first K sites.
CoherentInfoResult coherent_information(int d, int n_b, int big_k, int t, double p,
                                        const TruncationParams& trunc);

std::vector<CoherentInfoResult> coherent_information_sweep(int d, int n_b, int big_k,
                                                           const std::vector<int>& depths,
                                                           double p,
                                                           const TruncationParams& trunc);

// chi = d^N * E[sum_x p_clean(x) p_device(x)] - 1, stack = [identity, device].
double xeb(int d, int N, int t, const ChannelSuperop& device, const TruncationParams& trunc,
           RunResult* kernel = nullptr);

std::vector<double> xeb_sweep(int d, int N, const std::vector<int>& depths,
                              const ChannelSuperop& device, const TruncationParams& trunc,
                              std::vector<RunResult>* kernels = nullptr);

}  // namespace rtn
