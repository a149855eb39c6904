#include "rtn/observables.hpp"

#include <cmath>
#include <limits>

#include "rtn/errors.hpp"

namespace rtn {

namespace {

RunResult finish(std::pair<double, double> contracted, int chi, double disc) {
  RunResult r;
  r.mantissa = contracted.first;
  r.log_scale = contracted.second;
  r.chi_used = chi;
  r.discarded_weight = disc;
  if (r.mantissa > 0.0) {
    r.log_value = std::log(r.mantissa) + r.log_scale;
    r.value = std::exp(r.log_value);
  } else if (r.mantissa == 0.0) {
    r.log_value = -std::numeric_limits<double>::infinity();
    r.value = 0.0;
  } else {
    r.log_value = std::numeric_limits<double>::quiet_NaN();
    r.value = r.mantissa * std::exp(r.log_scale);
  }
  return r;
}

}  // namespace

NetworkPlan make_plan(const CommutantBasis& basis, int d, int N, const ChannelStack* stack,
                      const std::vector<Eigen::VectorXd>* init_overlaps) {
  if (N < 2 || N % 2 != 0) throw ParameterError("make_plan: N must be even and >= 2");
  NetworkPlan plan;
  plan.basis = basis;
  plan.d = d;
  plan.N = N;
  plan.phys = basis.size();
  plan.noisy = stack && !stack->is_identity();
  if (plan.noisy) plan.stack = *stack;

  GramMatrix link = plan.noisy ? noisy_gram(basis, d, plan.stack) : gram_matrix(basis, d);
  plan.gate = dressed_gate(basis, d, link, link);

  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(basis.size());
  plan.pair_mats.resize(N / 2);
  for (int j = 0; j < N / 2; ++j) {
    const Eigen::VectorXd& vl = init_overlaps ? init_overlaps->at(2 * j) : ones;
    const Eigen::VectorXd& vr = init_overlaps ? init_overlaps->at(2 * j + 1) : ones;
    Eigen::VectorXd c = initial_pair_amplitudes(basis, d, vl, vr);
    plan.pair_mats[j] = c.asDiagonal();
  }
  return plan;
}

NetworkPlan reduce_plan(const NetworkPlan& plan, const IrrepProjector& pr) {
  NetworkPlan red = plan;
  red.phys = pr.d_red;
  red.gate = irrep_reduce_gate(plan.gate, pr);
  for (Eigen::MatrixXd& w : red.pair_mats) w = irrep_reduce_pair(w, pr);
  return red;
}

std::vector<Eigen::VectorXd> plan_boundary(const NetworkPlan& plan, const BoundarySpec& spec,
                                           const IrrepProjector* pr) {
  const ChannelStack* stack = plan.noisy ? &plan.stack : nullptr;
  std::vector<Eigen::VectorXd> b =
      boundary_site_vectors(spec, plan.basis, plan.d, plan.N, stack);
  if (pr)
    for (Eigen::VectorXd& v : b) v = irrep_reduce_boundary(v, *pr);
  return b;
}

std::vector<std::vector<RunResult>> run_network(
    const NetworkPlan& plan, const std::vector<int>& depths,
    const std::vector<std::vector<Eigen::VectorXd>>& boundaries, const TruncationParams& trunc) {
  if (depths.empty()) return {};
  for (size_t i = 0; i < depths.size(); ++i) {
    if (depths[i] < 1) throw ParameterError("run_network: depths must be >= 1");
    if (i > 0 && depths[i] <= depths[i - 1])
      throw ParameterError("run_network: depths must be strictly ascending");
  }

  RowMPS mps = init_mps_pairs(plan.N, plan.pair_mats, true);
  std::vector<std::vector<RunResult>> out(depths.size());
  int chi = 1;
  double disc = 0.0;
  size_t next = 0;
  const int t_max = depths.back();
  for (int t = 1; t <= t_max; ++t) {
    if (t >= 2) {
      LayerStats st =
          apply_layer(mps, plan.gate, t % 2 == 0 ? Parity::even : Parity::odd, trunc);
      chi = std::max(chi, st.max_chi);
      disc = std::max(disc, st.max_discarded);
    }
    if (next < depths.size() && depths[next] == t) {
      for (const auto& b : boundaries) out[next].push_back(finish(contract_top(mps, b), chi, disc));
      ++next;
    }
  }
  return out;
}

std::vector<RunResult> brickwork_sweep(const CommutantBasis& basis, int d, int N,
                                       const std::vector<int>& depths,
                                       const BoundarySpec& boundary, const ChannelStack* stack,
                                       const TruncationParams& trunc) {
  NetworkPlan plan = make_plan(basis, d, N, stack, nullptr);
  auto grid = run_network(plan, depths, {plan_boundary(plan, boundary)}, trunc);
  std::vector<RunResult> out;
  out.reserve(grid.size());
  for (auto& row : grid) out.push_back(row[0]);
  return out;
}

double brickwork_average(const CommutantBasis& basis, int d, int N, int t,
                         const BoundarySpec& boundary, const TruncationParams& trunc,
                         RunResult* detail) {
  std::vector<RunResult> r = brickwork_sweep(basis, d, N, {t}, boundary, nullptr, trunc);
  if (detail) *detail = r[0];
  return r[0].value;
}

double noisy_brickwork_average(const CommutantBasis& basis, int d, int N, int t,
                               const BoundarySpec& boundary, const ChannelStack& stack,
                               const TruncationParams& trunc, RunResult* detail) {
  std::vector<RunResult> r = brickwork_sweep(basis, d, N, {t}, boundary, &stack, trunc);
  if (detail) *detail = r[0];
  return r[0].value;
}

std::vector<std::pair<RunResult, RunResult>> coherence_sweep(int d, int N,
                                                             const std::vector<int>& depths,
                                                             const ChannelStack* stack,
                                                             const TruncationParams& trunc) {
  CommutantBasis basis = symmetric_basis(2);
  NetworkPlan plan = make_plan(basis, d, N, stack, nullptr);
  BoundarySpec swap_all = purity_boundary(basis, d, {0, N}, 2);
  BoundarySpec ipr = ipr_boundary(basis, d);
  auto grid =
      run_network(plan, depths, {plan_boundary(plan, swap_all), plan_boundary(plan, ipr)}, trunc);
  std::vector<std::pair<RunResult, RunResult>> out;
  out.reserve(grid.size());
  for (auto& row : grid) out.emplace_back(row[0], row[1]);
  return out;
}

double relative_coherence(int d, int N, int t, const ChannelStack& stack,
                          const TruncationParams& trunc, RunResult* numerator,
                          RunResult* denominator) {
  auto rows = coherence_sweep(d, N, {t}, &stack, trunc);
  const RunResult& num = rows[0].first;
  const RunResult& den = rows[0].second;
  if (numerator) *numerator = num;
  if (denominator) *denominator = den;
  if (!(num.mantissa > 0.0) || !(den.mantissa > 0.0))
    throw NumericError("relative_coherence: non-positive contraction");
  return num.log_value - den.log_value;
}

std::vector<CoherentInfoResult> coherent_information_sweep(int d, int n_b, int big_k,
                                                           const std::vector<int>& depths,
                                                           double p,
                                                           const TruncationParams& trunc) {
  if (big_k < 1 || 2 * big_k > n_b)
    throw ParameterError("coherent_information: need 1 <= K <= N_B/2");
  CommutantBasis basis = symmetric_basis(2);
  ChannelStack stack = uniform_stack(depolarising_choi(d, p), 2);
  const ChannelStack* sp = stack.is_identity() ? nullptr : &stack;

  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(basis.size());
  auto overlaps_for = [&](const Permutation& beta) {
    std::vector<Eigen::VectorXd> v(n_b, ones);
    for (int i = 0; i < big_k; ++i) v[i] = bell_init_overlaps(beta, 2, d);
    return v;
  };

  BoundarySpec swap_b = purity_boundary(basis, d, {0, n_b}, 2);
  std::vector<CoherentInfoResult> out(depths.size());
  for (int variant = 0; variant < 2; ++variant) {
    const Permutation beta =
        variant == 0 ? Permutation::identity(2) : Permutation::transposition(2, 0, 1);
    auto overlaps = overlaps_for(beta);
    NetworkPlan plan = make_plan(basis, d, n_b, sp, &overlaps);
    auto grid = run_network(plan, depths, {plan_boundary(plan, swap_b)}, trunc);
    for (size_t i = 0; i < depths.size(); ++i)
      (variant == 0 ? out[i].run_b : out[i].run_rb) = grid[i][0];
  }
  const double norm = big_k * std::log(static_cast<double>(d));
  for (CoherentInfoResult& r : out) {
    if (!(r.run_b.mantissa > 0.0) || !(r.run_rb.mantissa > 0.0))
      throw NumericError("coherent_information: non-positive contraction");
    r.ic = r.run_rb.log_value - r.run_b.log_value;
    r.normalized = r.ic / norm;
  }
  return out;
}

CoherentInfoResult coherent_information(int d, int n_b, int big_k, int t, double p,
                                        const TruncationParams& trunc) {
  return coherent_information_sweep(d, n_b, big_k, {t}, p, trunc)[0];
}

std::vector<double> xeb_sweep(int d, int N, const std::vector<int>& depths,
                              const ChannelSuperop& device, const TruncationParams& trunc,
                              std::vector<RunResult>* kernels) {
  CommutantBasis basis = symmetric_basis(2);
  ChannelStack stack;
  stack.channels = {identity_choi(d), device};
  const ChannelStack* sp = stack.is_identity() ? nullptr : &stack;
  NetworkPlan plan = make_plan(basis, d, N, sp, nullptr);
  BoundarySpec ipr = ipr_boundary(basis, d);
  auto grid = run_network(plan, depths, {plan_boundary(plan, ipr)}, trunc);
  std::vector<double> out(depths.size());
  if (kernels) kernels->resize(depths.size());
  for (size_t i = 0; i < depths.size(); ++i) {
    const RunResult& r = grid[i][0];
    if (kernels) (*kernels)[i] = r;
    if (!(r.mantissa > 0.0)) throw NumericError("xeb: non-positive kernel contraction");
    out[i] = std::expm1(N * std::log(static_cast<double>(d)) + r.log_value);
  }
  return out;
}

double xeb(int d, int N, int t, const ChannelSuperop& device, const TruncationParams& trunc,
           RunResult* kernel) {
  std::vector<RunResult> ks;
  double chi = xeb_sweep(d, N, {t}, device, trunc, &ks)[0];
  if (kernel) *kernel = ks[0];
  return chi;
}

}  // namespace rtn
