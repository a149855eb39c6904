#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "cli.hpp"
#include "rtn/closed_forms.hpp"
#include "rtn/errors.hpp"
#include "rtn/irrep.hpp"
#include "rtn/observables.hpp"
#include "rtn/oracle.hpp"
#include "rtn/records.hpp"

namespace rtncli {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

std::vector<int> depth_list(const RunManifest& m) {
  std::vector<int> out;
  for (int t = m.t_lo; t <= m.t_hi; ++t) out.push_back(t);
  return out;
}

rtn::CommutantBasis build_basis(const RunManifest& m) {
  switch (m.ensemble) {
    case rtn::Ensemble::unitary: return rtn::symmetric_basis(m.k);
    case rtn::Ensemble::orthogonal: return rtn::brauer_basis(m.k);
    case rtn::Ensemble::clifford: return rtn::clifford_basis(m.k, m.d);
  }
  throw rtn::ParameterError("unknown ensemble");
}

rtn::ChannelStack build_stack(const RunManifest& m) {
  if (m.channel_specs.empty()) return rtn::identity_stack(m.d, m.k);
  std::vector<std::string> specs = m.channel_specs;
  if (specs.size() == 1) specs.assign(static_cast<std::size_t>(m.k), specs.front());
  if (static_cast<int>(specs.size()) != m.k)
    throw rtn::ParameterError("--channels takes one entry or exactly k entries");
  rtn::ChannelStack st;
  for (const std::string& s : specs) st.channels.push_back(rtn::parse_channel(s, m.d));
  return st;
}

double log_ipr_reference(rtn::Ensemble e, int k, int d, int N) {
  const double big_d = std::pow(static_cast<double>(d), N);
  switch (e) {
    case rtn::Ensemble::unitary: return rtn::log_haar_ipr(big_d, k);
    case rtn::Ensemble::orthogonal: return rtn::log_orthogonal_ipr_stat(big_d, k);
    case rtn::Ensemble::clifford: return rtn::log_clifford_ipr_stat(d, N, k);
  }
  return kNan;
}

struct TaskOut {
  std::vector<rtn::ResultRow> rows;
  std::vector<std::string> errors;
  bool failed = false;
};

using Task = std::function<TaskOut()>;

rtn::ResultRow base_row(const RunManifest& m, const std::string& ensemble, int N, int t) {
  rtn::ResultRow r;
  r.ensemble = ensemble;
  r.k = m.k;
  r.d = m.d;
  r.N = N;
  r.t = t;
  r.value = kNan;
  r.log_value = kNan;
  r.reference_value = kNan;
  r.deviation = kNan;
  r.chi_used = 0;
  r.discarded_weight = 0.0;
  r.seed = m.seed;
  return r;
}

void fill_value(rtn::ResultRow& r, const rtn::RunResult& res) {
  r.value = res.value;
  r.log_value = res.log_value;
  r.chi_used = res.chi_used;
  r.discarded_weight = res.discarded_weight;
}

// deviation = value / reference - 1, computed in log space when possible
void set_log_reference(rtn::ResultRow& r, double log_ref) {
  if (!std::isfinite(log_ref)) return;
  r.reference_value = std::exp(log_ref);
  r.deviation = std::expm1(r.log_value - log_ref);
}

void set_linear_reference(rtn::ResultRow& r, double ref) {
  if (!std::isfinite(ref)) return;
  r.reference_value = ref;
  if (ref > 0.0 && std::isfinite(r.log_value))
    r.deviation = std::expm1(r.log_value - std::log(ref));
  else if (ref != 0.0)
    r.deviation = r.value / ref - 1.0;
}

void spread_wall_time(TaskOut& out, std::chrono::steady_clock::time_point t0) {
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (out.rows.empty()) return;
  const double share = secs / static_cast<double>(out.rows.size());
  for (rtn::ResultRow& r : out.rows) r.wall_time_s = share;
}

void fail_task(TaskOut& out, const RunManifest& m, const std::string& ensemble,
               const std::vector<int>& ns, const std::vector<int>& depths, const char* what) {
  out.failed = true;
  out.errors.push_back(what);
  out.rows.clear();
  for (int n : ns)
    for (int t : depths) out.rows.push_back(base_row(m, ensemble, n, t));
}

rtn::TruncationParams trunc_of(const RunManifest& m) {
  rtn::TruncationParams tr;
  tr.chi_max = m.chi;
  tr.cutoff = m.cutoff;
  return tr;
}

std::pair<int, int> resolve_region(const RunManifest& m, int N) {
  if (!m.region_set) return {0, N / 2};
  return {m.region_lo, m.region_hi};
}

enum class PurityRef { none, rw, page };

PurityRef resolve_purity_reference(const RunManifest& m, int N, int lo, int hi, bool noisy) {
  const bool edge = (lo == 0) != (hi == N);
  const int ell = (lo == 0) ? hi : N - lo;
  const bool rw_ok = m.k == 2 && m.ensemble == rtn::Ensemble::unitary && !noisy && edge &&
                     ell >= 1 && ell <= N - 1;
  if (m.reference == "rw") {
    if (!rw_ok)
      throw rtn::ParameterError(
          "--reference rw needs k=2, the unitary ensemble, no noise, and an edge-aligned proper "
          "region");
    return PurityRef::rw;
  }
  if (m.reference == "page") {
    if (m.k != 2) throw rtn::ParameterError("--reference page is defined for k=2");
    return PurityRef::page;
  }
  if (m.reference == "none") return PurityRef::none;
  if (m.reference != "auto") throw rtn::ParameterError("--reference must be auto|rw|page|none");
  if (rw_ok) return PurityRef::rw;
  if (m.k == 2 && m.ensemble == rtn::Ensemble::unitary && !noisy) return PurityRef::page;
  return PurityRef::none;
}

Task ipr_task(const RunManifest& m, int N) {
  return [&m, N]() {
    TaskOut out;
    const auto t0 = std::chrono::steady_clock::now();
    const std::vector<int> depths = depth_list(m);
    const std::string name = rtn::ensemble_name(m.ensemble);
    try {
      const rtn::CommutantBasis basis = build_basis(m);
      const rtn::ChannelStack stack = build_stack(m);
      const bool noisy = !stack.is_identity();
      const rtn::NetworkPlan plan = rtn::make_plan(basis, m.d, N, noisy ? &stack : nullptr, nullptr);
      const rtn::BoundarySpec spec = rtn::ipr_boundary(basis, m.d);
      const auto bnd = rtn::plan_boundary(plan, spec);
      const auto res = rtn::run_network(plan, depths, {bnd}, trunc_of(m));
      const double log_ref = noisy ? kNan : log_ipr_reference(m.ensemble, m.k, m.d, N);
      for (std::size_t i = 0; i < depths.size(); ++i) {
        rtn::ResultRow r = base_row(m, name, N, depths[i]);
        fill_value(r, res[i][0]);
        set_log_reference(r, log_ref);
        out.rows.push_back(r);
      }
    } catch (const std::exception& e) {
      fail_task(out, m, name, {N}, depths, e.what());
    }
    spread_wall_time(out, t0);
    return out;
  };
}

Task purity_task(const RunManifest& m, int N) {
  return [&m, N]() {
    TaskOut out;
    const auto t0 = std::chrono::steady_clock::now();
    const std::vector<int> depths = depth_list(m);
    const std::string name = rtn::ensemble_name(m.ensemble);
    try {
      const rtn::CommutantBasis basis = build_basis(m);
      const rtn::ChannelStack stack = build_stack(m);
      const bool noisy = !stack.is_identity();
      const auto [lo, hi] = resolve_region(m, N);
      const PurityRef ref = resolve_purity_reference(m, N, lo, hi, noisy);
      const rtn::NetworkPlan plan = rtn::make_plan(basis, m.d, N, noisy ? &stack : nullptr, nullptr);
      const rtn::BoundarySpec spec = rtn::purity_boundary(basis, m.d, {lo, hi}, m.k);
      const auto bnd = rtn::plan_boundary(plan, spec);
      const auto res = rtn::run_network(plan, depths, {bnd}, trunc_of(m));
      const int ell = (lo == 0) ? hi : N - lo;
      const int len = hi - lo;
      for (std::size_t i = 0; i < depths.size(); ++i) {
        rtn::ResultRow r = base_row(m, name, N, depths[i]);
        fill_value(r, res[i][0]);
        if (ref == PurityRef::rw)
          set_linear_reference(r, rtn::rw_purity(N, ell, m.d, depths[i]));
        else if (ref == PurityRef::page)
          set_linear_reference(r, rtn::page_purity(std::pow(m.d, len), std::pow(m.d, N - len)));
        out.rows.push_back(r);
      }
    } catch (const std::exception& e) {
      fail_task(out, m, name, {N}, depths, e.what());
    }
    spread_wall_time(out, t0);
    return out;
  };
}

Task coherence_task(const RunManifest& m, int N) {
  return [&m, N]() {
    TaskOut out;
    const auto t0 = std::chrono::steady_clock::now();
    const std::vector<int> depths = depth_list(m);
    try {
      const rtn::ChannelStack stack = build_stack(m);
      const bool noisy = !stack.is_identity();
      const auto res =
          rtn::coherence_sweep(m.d, N, depths, noisy ? &stack : nullptr, trunc_of(m));
      for (std::size_t i = 0; i < depths.size(); ++i) {
        rtn::ResultRow r = base_row(m, "unitary", N, depths[i]);
        const rtn::RunResult& num = res[i].first;
        const rtn::RunResult& den = res[i].second;
        r.value = num.log_value - den.log_value;  // already a log-scale quantity
        r.log_value = r.value;
        r.chi_used = std::max(num.chi_used, den.chi_used);
        r.discarded_weight = std::max(num.discarded_weight, den.discarded_weight);
        out.rows.push_back(r);
      }
    } catch (const std::exception& e) {
      fail_task(out, m, "unitary", {N}, depths, e.what());
    }
    spread_wall_time(out, t0);
    return out;
  };
}

Task coherent_info_task(const RunManifest& m, int N) {
  return [&m, N]() {
    TaskOut out;
    const auto t0 = std::chrono::steady_clock::now();
    const std::vector<int> depths = depth_list(m);
    try {
      const auto res =
          rtn::coherent_information_sweep(m.d, N, m.big_k, depths, m.p, trunc_of(m));
      for (std::size_t i = 0; i < depths.size(); ++i) {
        rtn::ResultRow r = base_row(m, "unitary", N, depths[i]);
        r.value = res[i].normalized;
        r.log_value = res[i].ic;
        r.chi_used = std::max(res[i].run_b.chi_used, res[i].run_rb.chi_used);
        r.discarded_weight =
            std::max(res[i].run_b.discarded_weight, res[i].run_rb.discarded_weight);
        if (m.p == 0.0) {
          r.reference_value = 1.0;
          r.deviation = r.value - 1.0;
        }
        out.rows.push_back(r);
      }
    } catch (const std::exception& e) {
      fail_task(out, m, "unitary", {N}, depths, e.what());
    }
    spread_wall_time(out, t0);
    return out;
  };
}

Task xeb_task(const RunManifest& m, int N) {
  return [&m, N]() {
    TaskOut out;
    const auto t0 = std::chrono::steady_clock::now();
    const std::vector<int> depths = depth_list(m);
    try {
      const rtn::ChannelSuperop device = rtn::parse_channel(m.device_spec, m.d);
      std::vector<rtn::RunResult> kernels;
      const auto chis = rtn::xeb_sweep(m.d, N, depths, device, trunc_of(m), &kernels);
      const double big_d = std::pow(static_cast<double>(m.d), N);
      const double plateau = 1.0 - 2.0 / (big_d + 1.0);
      for (std::size_t i = 0; i < depths.size(); ++i) {
        rtn::ResultRow r = base_row(m, "unitary", N, depths[i]);
        r.value = chis[i];
        r.log_value = chis[i] > 0.0 ? std::log(chis[i]) : kNan;
        r.chi_used = kernels[i].chi_used;
        r.discarded_weight = kernels[i].discarded_weight;
        if (device.is_identity()) set_linear_reference(r, plateau);
        out.rows.push_back(r);
      }
    } catch (const std::exception& e) {
      fail_task(out, m, "unitary", {N}, depths, e.what());
    }
    spread_wall_time(out, t0);
    return out;
  };
}

double oracle_log_reference(const RunManifest& m, int N) {
  if (m.p > 0.0) return kNan;
  if (m.observable == "ipr") return log_ipr_reference(m.ensemble, m.k, m.d, N);
  return kNan;
}

Task oracle_dense_task(const RunManifest& m, int N) {
  return [&m, N]() {
    TaskOut out;
    const auto t0 = std::chrono::steady_clock::now();
    const std::vector<int> depths = depth_list(m);
    const std::string name = rtn::ensemble_name(m.ensemble);
    try {
      const rtn::CommutantBasis basis = build_basis(m);
      rtn::ChannelStack dep = rtn::uniform_stack(rtn::depolarising_choi(m.d, m.p), m.k);
      const rtn::ChannelStack* stack = (m.p > 0.0) ? &dep : nullptr;
      const double log_ref = oracle_log_reference(m, N);
      for (int t : depths) {
        rtn::ResultRow r = base_row(m, name, N, t);
        r.n_samples = 0;
        if (m.observable == "ipr") {
          const rtn::BoundarySpec spec = rtn::ipr_boundary(basis, m.d);
          double logv = kNan;
          r.value = rtn::dense_contract(basis, m.d, N, t, spec, stack, nullptr, &logv);
          r.log_value = logv;
          set_log_reference(r, log_ref);
        } else if (m.observable == "purity") {
          const auto [lo, hi] = resolve_region(m, N);
          const PurityRef ref = resolve_purity_reference(m, N, lo, hi, m.p > 0.0);
          const rtn::BoundarySpec spec = rtn::purity_boundary(basis, m.d, {lo, hi}, m.k);
          double logv = kNan;
          r.value = rtn::dense_contract(basis, m.d, N, t, spec, stack, nullptr, &logv);
          r.log_value = logv;
          const int ell = (lo == 0) ? hi : N - lo;
          if (ref == PurityRef::rw)
            set_linear_reference(r, rtn::rw_purity(N, ell, m.d, t));
          else if (ref == PurityRef::page)
            set_linear_reference(
                r, rtn::page_purity(std::pow(m.d, hi - lo), std::pow(m.d, N - (hi - lo))));
        } else if (m.observable == "xeb") {
          rtn::ChannelStack pair;
          pair.channels = {rtn::identity_choi(m.d),
                           m.p > 0.0 ? rtn::depolarising_choi(m.d, m.p) : rtn::identity_choi(m.d)};
          const rtn::BoundarySpec spec = rtn::ipr_boundary(basis, m.d);
          double logk = kNan;
          rtn::dense_contract(basis, m.d, N, t, spec, &pair, nullptr, &logk);
          r.value = std::expm1(N * std::log(static_cast<double>(m.d)) + logk);
          r.log_value = r.value > 0.0 ? std::log(r.value) : kNan;
          if (m.p == 0.0) {
            const double big_d = std::pow(static_cast<double>(m.d), N);
            set_linear_reference(r, 1.0 - 2.0 / (big_d + 1.0));
          }
        } else {  // coherent-info
          std::vector<Eigen::VectorXd> ov_b, ov_rb;
          const Eigen::VectorXd bell_b =
              rtn::bell_init_overlaps(rtn::Permutation::identity(2), 2, m.d);
          const Eigen::VectorXd bell_rb =
              rtn::bell_init_overlaps(rtn::Permutation::transposition(2, 0, 1), 2, m.d);
          const Eigen::VectorXd ones = Eigen::VectorXd::Ones(basis.size());
          for (int s = 0; s < N; ++s) {
            ov_b.push_back(s < m.big_k ? bell_b : ones);
            ov_rb.push_back(s < m.big_k ? bell_rb : ones);
          }
          const rtn::BoundarySpec spec = rtn::purity_boundary(basis, m.d, {0, N}, 2);
          double log_b = kNan, log_rb = kNan;
          rtn::dense_contract(basis, m.d, N, t, spec, stack, &ov_b, &log_b);
          rtn::dense_contract(basis, m.d, N, t, spec, stack, &ov_rb, &log_rb);
          const double ic = log_rb - log_b;
          r.value = ic / (m.big_k * std::log(static_cast<double>(m.d)));
          r.log_value = ic;
          if (m.p == 0.0) {
            r.reference_value = 1.0;
            r.deviation = r.value - 1.0;
          }
        }
        out.rows.push_back(r);
      }
    } catch (const std::exception& e) {
      fail_task(out, m, name, {N}, depths, e.what());
      for (rtn::ResultRow& r : out.rows) r.n_samples = 0;
    }
    spread_wall_time(out, t0);
    return out;
  };
}

Task oracle_mc_task(const RunManifest& m, int N) {
  return [&m, N]() {
    TaskOut out;
    const auto t0 = std::chrono::steady_clock::now();
    const std::vector<int> depths = depth_list(m);
    const std::string name = rtn::ensemble_name(m.ensemble);
    try {
      const double log_ref = oracle_log_reference(m, N);
      for (int t : depths) {
        rtn::ResultRow r = base_row(m, name, N, t);
        r.n_samples = m.n_samples;
        if (m.observable == "coherent-info") {
          rtn::McObservable ob;
          ob.kind = rtn::McObservable::Kind::purity;
          ob.k = 2;
          ob.bell_pairs = m.big_k;
          ob.lo = m.big_k;
          ob.hi = m.big_k + N;
          const rtn::McResult res_b =
              rtn::mc_average(m.ensemble, m.d, N, t, ob, m.p, m.n_samples, m.seed);
          ob.lo = 0;
          const rtn::McResult res_rb =
              rtn::mc_average(m.ensemble, m.d, N, t, ob, m.p, m.n_samples, m.seed);
          const double norm = m.big_k * std::log(static_cast<double>(m.d));
          const double ic = std::log(res_rb.mean) - std::log(res_b.mean);
          r.value = ic / norm;
          r.log_value = ic;
          const double rel_b = res_b.std_error / res_b.mean;
          const double rel_rb = res_rb.std_error / res_rb.mean;
          r.std_error = std::sqrt(rel_b * rel_b + rel_rb * rel_rb) / norm;
          if (m.p == 0.0) {
            r.reference_value = 1.0;
            r.deviation = r.value - 1.0;
          }
        } else {
          rtn::McObservable ob;
          ob.k = m.k;
          if (m.observable == "ipr") {
            ob.kind = rtn::McObservable::Kind::ipr;
          } else if (m.observable == "purity") {
            ob.kind = rtn::McObservable::Kind::purity;
            const auto [lo, hi] = resolve_region(m, N);
            ob.lo = lo;
            ob.hi = hi;
          } else {
            ob.kind = rtn::McObservable::Kind::xeb;
          }
          const rtn::McResult res =
              rtn::mc_average(m.ensemble, m.d, N, t, ob, m.p, m.n_samples, m.seed);
          r.value = res.mean;
          r.log_value = res.mean > 0.0 ? std::log(res.mean) : kNan;
          r.std_error = res.std_error;
          if (m.observable == "ipr") {
            set_log_reference(r, log_ref);
          } else if (m.observable == "purity" && m.k == 2) {
            const auto [lo, hi] = resolve_region(m, N);
            const PurityRef ref = resolve_purity_reference(m, N, lo, hi, m.p > 0.0);
            const int ell = (lo == 0) ? hi : N - lo;
            if (ref == PurityRef::rw)
              set_linear_reference(r, rtn::rw_purity(N, ell, m.d, t));
            else if (ref == PurityRef::page)
              set_linear_reference(
                  r, rtn::page_purity(std::pow(m.d, hi - lo), std::pow(m.d, N - (hi - lo))));
          } else if (m.observable == "xeb" && m.p == 0.0) {
            const double big_d = std::pow(static_cast<double>(m.d), N);
            set_linear_reference(r, 1.0 - 2.0 / (big_d + 1.0));
          }
        }
        out.rows.push_back(r);
      }
    } catch (const std::exception& e) {
      fail_task(out, m, name, {N}, depths, e.what());
      for (rtn::ResultRow& r : out.rows) r.n_samples = m.n_samples;
    }
    spread_wall_time(out, t0);
    return out;
  };
}

Task reduce_bench_task(const RunManifest& m, int N) {
  return [&m, N]() {
    TaskOut out;
    const std::vector<int> depths = depth_list(m);
    try {
      const rtn::CommutantBasis basis = rtn::symmetric_basis(m.k);
      const rtn::NetworkPlan plan = rtn::make_plan(basis, m.d, N, nullptr, nullptr);
      const rtn::IrrepProjector pr = rtn::irrep_projector(rtn::gram_matrix(basis, m.d));
      const rtn::NetworkPlan red = rtn::reduce_plan(plan, pr);
      const rtn::BoundarySpec spec = rtn::ipr_boundary(basis, m.d);
      const auto bnd_full = rtn::plan_boundary(plan, spec);
      const auto bnd_red = rtn::plan_boundary(red, spec, &pr);
      const double log_ref = log_ipr_reference(rtn::Ensemble::unitary, m.k, m.d, N);

      const auto t_full0 = std::chrono::steady_clock::now();
      const auto res_full = rtn::run_network(plan, depths, {bnd_full}, trunc_of(m));
      const double full_secs =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t_full0).count();
      const auto t_red0 = std::chrono::steady_clock::now();
      const auto res_red = rtn::run_network(red, depths, {bnd_red}, trunc_of(m));
      const double red_secs =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t_red0).count();

      for (std::size_t i = 0; i < depths.size(); ++i) {
        rtn::ResultRow rf = base_row(m, "unitary", N, depths[i]);
        fill_value(rf, res_full[i][0]);
        set_log_reference(rf, log_ref);
        rf.wall_time_s = full_secs / static_cast<double>(depths.size());
        out.rows.push_back(rf);

        rtn::ResultRow rr = base_row(m, "unitary:reduced", N, depths[i]);
        fill_value(rr, res_red[i][0]);
        set_linear_reference(rr, res_full[i][0].value);
        rr.wall_time_s = red_secs / static_cast<double>(depths.size());
        out.rows.push_back(rr);
      }
    } catch (const std::exception& e) {
      const auto t0 = std::chrono::steady_clock::now();
      fail_task(out, m, "unitary", {N}, depths, e.what());
      spread_wall_time(out, t0);
    }
    return out;
  };
}

void validate_manifest(const RunManifest& m) {
  if (m.command == Command::none) throw rtn::ParameterError("no subcommand given");
  if (m.n_list.empty()) throw rtn::ParameterError("--N needs at least one chain length");
  for (int n : m.n_list)
    if (n < 2 || n % 2 != 0)
      throw rtn::ParameterError("--N values must be even and >= 2");
  if (m.t_lo < 1 || m.t_hi < m.t_lo)
    throw rtn::ParameterError("--t range must satisfy 1 <= a <= b");
  if (m.d < 2) throw rtn::ParameterError("--d must be >= 2");
  if (m.k < 1) throw rtn::ParameterError("--k must be >= 1");
  if (m.chi < 0) throw rtn::ParameterError("--chi must be >= 0");
  if (!(m.cutoff >= 0.0) || m.cutoff >= 1.0)
    throw rtn::ParameterError("--cutoff must lie in [0, 1)");
  if (m.threads < 1) throw rtn::ParameterError("--threads must be >= 1");
  if (m.p < 0.0 || m.p > 1.0) throw rtn::ParameterError("--p must lie in [0, 1]");

  const bool wants_basis = m.command == Command::ipr || m.command == Command::purity ||
                           m.command == Command::oracle || m.command == Command::reduce_bench;
  if (wants_basis) build_basis(m);  // rejects unsupported (ensemble, k, d) combos
  if (m.command == Command::ipr || m.command == Command::purity ||
      m.command == Command::coherence)
    build_stack(m);  // rejects malformed channel specs

  if (m.region_set) {
    if (m.region_lo < 0 || m.region_lo >= m.region_hi)
      throw rtn::ParameterError("--region must be a nonempty 1-based inclusive range a..b");
    for (int n : m.n_list)
      if (m.region_hi > n)
        throw rtn::ParameterError("--region extends past the chain for some --N");
  }

  if (m.command == Command::purity) {
    const rtn::ChannelStack st = build_stack(m);
    for (int n : m.n_list) {
      const auto [lo, hi] = resolve_region(m, n);
      resolve_purity_reference(m, n, lo, hi, !st.is_identity());
    }
  }
  if (m.command == Command::coherence || m.command == Command::coherent_info ||
      m.command == Command::xeb) {
    if (m.ensemble != rtn::Ensemble::unitary)
      throw rtn::ParameterError("this subcommand covers the unitary ensemble");
    if (m.k != 2) throw rtn::ParameterError("this subcommand is defined at k = 2");
  }
  if (m.command == Command::coherent_info) {
    if (m.big_k < 1) throw rtn::ParameterError("--K must be >= 1");
    for (int n : m.n_list)
      if (m.big_k > n / 2)
        throw rtn::ParameterError("--K must satisfy K <= N/2 for every --N");
  }
  if (m.command == Command::xeb) rtn::parse_channel(m.device_spec, m.d);
  if (m.command == Command::oracle) {
    if (m.method != "dense" && m.method != "mc")
      throw rtn::ParameterError("--method must be dense or mc");
    if (m.observable != "ipr" && m.observable != "purity" && m.observable != "xeb" &&
        m.observable != "coherent-info")
      throw rtn::ParameterError("--observable must be ipr|purity|xeb|coherent-info");
    if (m.method == "mc") {
      if (m.ensemble == rtn::Ensemble::clifford)
        throw rtn::ParameterError("sampling covers the unitary and orthogonal ensembles");
      if (m.n_samples < 1) throw rtn::ParameterError("--samples must be >= 1");
    }
    if (m.observable == "coherent-info" || m.observable == "xeb") {
      if (m.ensemble != rtn::Ensemble::unitary && m.method == "dense")
        throw rtn::ParameterError("dense xeb and coherent-info cover the unitary ensemble");
      if (m.k != 2) throw rtn::ParameterError("this observable is defined at k = 2");
    }
    if (m.observable == "coherent-info") {
      if (m.big_k < 1) throw rtn::ParameterError("--K must be >= 1");
      for (int n : m.n_list)
        if (m.big_k > n / 2)
          throw rtn::ParameterError("--K must satisfy K <= N/2 for every --N");
    }
  }
}

std::vector<Task> build_tasks(const RunManifest& m) {
  std::vector<Task> tasks;
  for (int n : m.n_list) {
    switch (m.command) {
      case Command::ipr: tasks.push_back(ipr_task(m, n)); break;
      case Command::purity: tasks.push_back(purity_task(m, n)); break;
      case Command::coherence: tasks.push_back(coherence_task(m, n)); break;
      case Command::coherent_info: tasks.push_back(coherent_info_task(m, n)); break;
      case Command::xeb: tasks.push_back(xeb_task(m, n)); break;
      case Command::oracle:
        tasks.push_back(m.method == "dense" ? oracle_dense_task(m, n) : oracle_mc_task(m, n));
        break;
      case Command::reduce_bench: tasks.push_back(reduce_bench_task(m, n)); break;
      case Command::none: break;
    }
  }
  return tasks;
}

}  // namespace

int run_manifest(const RunManifest& m, std::ostream& fallback_out, std::ostream& err) {
  try {
    validate_manifest(m);
  } catch (const rtn::ParameterError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  const std::vector<Task> tasks = build_tasks(m);
  std::vector<TaskOut> results(tasks.size());
  const int n_workers = std::min<int>(m.threads, static_cast<int>(tasks.size()));
  if (n_workers <= 1) {
    for (std::size_t i = 0; i < tasks.size(); ++i) results[i] = tasks[i]();
  } else {
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
      while (true) {
        const std::size_t i = next.fetch_add(1);
        if (i >= tasks.size()) break;
        results[i] = tasks[i]();
      }
    };
    std::vector<std::thread> pool;
    for (int w = 0; w < n_workers; ++w) pool.emplace_back(worker);
    for (std::thread& th : pool) th.join();
  }

  bool any_failed = false;
  std::vector<rtn::ResultRow> rows;
  for (const TaskOut& res : results) {
    if (res.failed) any_failed = true;
    for (const std::string& msg : res.errors) err << "error: " << msg << "\n";
    rows.insert(rows.end(), res.rows.begin(), res.rows.end());
  }
  rtn::sort_rows(rows);

  const bool sampling = m.command == Command::oracle;
  std::ostringstream buf;
  if (m.format == "json")
    rtn::write_rows_json(buf, rows, sampling);
  else
    rtn::write_rows_csv(buf, rows, sampling);

  if (!m.output.empty()) {
    std::ofstream f(m.output, std::ios::binary);
    if (!f) {
      err << "error: cannot open output file " << m.output << "\n";
      return 3;
    }
    f << buf.str();
  } else {
    fallback_out << buf.str();
  }
  return any_failed ? 3 : 0;
}

namespace {

void parse_range(const std::string& s, int& lo, int& hi, const char* what) {
  const auto pos = s.find("..");
  try {
    std::size_t used = 0;
    if (pos == std::string::npos) {
      lo = std::stoi(s, &used);
      if (used != s.size()) throw std::invalid_argument(s);
      hi = lo;
    } else {
      const std::string a = s.substr(0, pos);
      const std::string b = s.substr(pos + 2);
      lo = std::stoi(a, &used);
      if (used != a.size()) throw std::invalid_argument(a);
      hi = std::stoi(b, &used);
      if (used != b.size()) throw std::invalid_argument(b);
    }
  } catch (const std::exception&) {
    throw rtn::ParameterError(std::string(what) + " must be an integer or a range a..b");
  }
}

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty() || !out.empty()) out.push_back(cur);
  return out;
}

}  // namespace

ParseOutcome parse_args(int argc, const char* const* argv, RunManifest& m, std::ostream& err) {
  CLI::App app{"ensemble-averaged observables of 1D brickwork random circuits"};
  app.require_subcommand(1);

  std::string ensemble_str = "unitary";
  std::string t_str;
  std::string region_str;
  std::string channels_str;

  const auto add_common = [&](CLI::App* sc) {
    sc->add_option("--output", m.output, "write rows to this file instead of stdout");
    sc->add_option("--format", m.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    sc->add_option("--chi", m.chi, "bond dimension cap, 0 = structural cap only");
    sc->add_option("--cutoff", m.cutoff, "relative singular value cutoff");
    sc->add_option("--threads", m.threads, "worker threads across chain lengths");
    sc->add_option("--seed", m.seed, "run seed, echoed into every row");
  };
  const auto add_grid = [&](CLI::App* sc) {
    sc->add_option("-N,--N", m.n_list, "chain lengths, comma separated")
        ->delimiter(',')
        ->required();
    sc->add_option("-t,--t", t_str, "depth or inclusive depth range a..b")->required();
  };
  const auto add_model = [&](CLI::App* sc, bool with_ensemble) {
    if (with_ensemble)
      sc->add_option("--ensemble", ensemble_str, "unitary, orthogonal, or clifford")
          ->check(CLI::IsMember({"unitary", "orthogonal", "clifford"}));
    sc->add_option("-k,--k", m.k, "replica order");
    sc->add_option("-d,--d", m.d, "local dimension");
  };

  CLI::App* ipr = app.add_subcommand("ipr", "averaged k-th inverse participation ratio");
  add_model(ipr, true);
  add_grid(ipr);
  ipr->add_option("--channels", channels_str, "per-replica channels, e.g. id,dep:0.1");
  add_common(ipr);
  ipr->callback([&m]() { m.command = Command::ipr; });

  CLI::App* purity = app.add_subcommand("purity", "averaged subsystem replica purity");
  add_model(purity, true);
  add_grid(purity);
  purity->add_option("--region", region_str, "1-based inclusive site range a..b");
  purity->add_option("--reference", m.reference, "auto, rw, page, or none");
  purity->add_option("--channels", channels_str, "per-replica channels");
  add_common(purity);
  purity->callback([&m]() { m.command = Command::purity; });

  CLI::App* coh = app.add_subcommand("coherence", "averaged relative coherence of the output");
  add_model(coh, false);
  add_grid(coh);
  coh->add_option("--channels", channels_str, "per-replica channels");
  add_common(coh);
  coh->callback([&m]() { m.command = Command::coherence; });

  CLI::App* cinfo = app.add_subcommand("coherent-info", "coherent information proxy of the channel");
  add_model(cinfo, false);
  add_grid(cinfo);
  cinfo->add_option("--K", m.big_k, "Bell-paired input sites");
  cinfo->add_option("--p", m.p, "depolarising strength per gated site");
  add_common(cinfo);
  cinfo->callback([&m]() { m.command = Command::coherent_info; });

  CLI::App* xebc = app.add_subcommand("xeb", "linear cross-entropy benchmark average");
  add_model(xebc, false);
  add_grid(xebc);
  xebc->add_option("--device", m.device_spec, "device channel, id or dep:<p>");
  add_common(xebc);
  xebc->callback([&m]() { m.command = Command::xeb; });

  CLI::App* oracle = app.add_subcommand("oracle", "brute-force cross-checks (dense or sampled)");
  oracle->add_option("--method", m.method, "dense or mc")
      ->check(CLI::IsMember({"dense", "mc"}));
  oracle->add_option("--observable", m.observable, "ipr, purity, xeb, or coherent-info")
      ->check(CLI::IsMember({"ipr", "purity", "xeb", "coherent-info"}));
  add_model(oracle, true);
  add_grid(oracle);
  oracle->add_option("--region", region_str, "1-based inclusive site range a..b");
  oracle->add_option("--K", m.big_k, "Bell-paired input sites (coherent-info)");
  oracle->add_option("--p", m.p, "depolarising strength per gated site");
  oracle->add_option("--samples", m.n_samples, "circuit samples (mc)");
  add_common(oracle);
  oracle->callback([&m]() { m.command = Command::oracle; });

  CLI::App* rb = app.add_subcommand("reduce-bench", "full vs reduced transfer basis timing");
  add_model(rb, false);
  add_grid(rb);
  add_common(rb);
  rb->callback([&m, rb]() {
    m.command = Command::reduce_bench;
    if (rb->count("--k") == 0) m.k = 4;
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e, err, err);
    return {false, rc == 0 ? 0 : 2};
  }

  try {
    m.ensemble = rtn::parse_ensemble(ensemble_str);
    if (!t_str.empty()) {
      parse_range(t_str, m.t_lo, m.t_hi, "--t");
      if (m.t_lo < 1 || m.t_hi < m.t_lo)
        throw rtn::ParameterError("--t must satisfy 1 <= a <= b");
    }
    if (!channels_str.empty()) m.channel_specs = split_commas(channels_str);
    if (!region_str.empty()) {
      int a = 0, b = 0;
      parse_range(region_str, a, b, "--region");
      if (a < 1 || b < a) throw rtn::ParameterError("--region must satisfy 1 <= a <= b");
      m.region_lo = a - 1;
      m.region_hi = b;
      m.region_set = true;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return {false, 2};
  }
  return {true, 0};
}

}  // namespace rtncli
