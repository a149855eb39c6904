#include <cmath>
#include <limits>

#include "rtn/errors.hpp"
#include "rtn/oracle.hpp"

namespace rtn {

namespace {

// gate application on the adjacent site pair (i, i+1) of a base-p register,
// site 0 most significant
void apply_dense_gate(Eigen::VectorXd& psi, const Eigen::MatrixXd& g, int p, int N, int i) {
  std::int64_t high = 1;
  for (int s = 0; s < i; ++s) high *= p;
  std::int64_t right = 1;
  for (int s = i + 2; s < N; ++s) right *= p;
  const int pp = p * p;
  Eigen::VectorXd x(pp), y(pp);
  for (std::int64_t h = 0; h < high; ++h) {
    const std::int64_t base = h * pp * right;
    for (std::int64_t r = 0; r < right; ++r) {
      for (int s = 0; s < pp; ++s) x(s) = psi(base + s * right + r);
      y.noalias() = g * x;
      for (int s = 0; s < pp; ++s) psi(base + s * right + r) = y(s);
    }
  }
}

void rescale_into(Eigen::VectorXd& psi, double& log_acc) {
  const double m = psi.cwiseAbs().maxCoeff();
  if (m > 0.0 && std::isfinite(m)) {
    psi /= m;
    log_acc += std::log(m);
  }
}

}  // namespace

double dense_contract(const CommutantBasis& basis, int d, int N, int t,
                      const BoundarySpec& boundary, const ChannelStack* stack,
                      const std::vector<Eigen::VectorXd>* init_overlaps, double* log_value_out) {
  if (t < 1) throw ParameterError("dense_contract: depth must be >= 1");
  const int p = basis.size();
  std::int64_t dim = 1;
  for (int s = 0; s < N; ++s) {
    dim *= p;
    if (dim > kDenseCap) throw ResourceError("dense_contract: n_B^N exceeds the dense cap");
  }

  NetworkPlan plan = make_plan(basis, d, N, stack, init_overlaps);

  // product of the diagonal pair tensors, site 0 most significant
  Eigen::VectorXd psi = Eigen::VectorXd::Ones(1);
  double log_acc = 0.0;
  for (int j = 0; j < N / 2; ++j) {
    const Eigen::MatrixXd& w = plan.pair_mats[static_cast<std::size_t>(j)];
    Eigen::VectorXd pair(p * p);
    for (int s1 = 0; s1 < p; ++s1)
      for (int s2 = 0; s2 < p; ++s2) pair(s1 * p + s2) = w(s1, s2);
    Eigen::VectorXd next(psi.size() * pair.size());
    for (Eigen::Index a = 0; a < psi.size(); ++a)
      for (Eigen::Index b = 0; b < pair.size(); ++b) next(a * pair.size() + b) = psi(a) * pair(b);
    psi.swap(next);
    rescale_into(psi, log_acc);
  }

  for (int layer = 2; layer <= t; ++layer) {
    const int start = (layer % 2 == 0) ? 1 : 0;
    for (int i = start; i + 1 < N; i += 2) apply_dense_gate(psi, plan.gate.t, p, N, i);
    rescale_into(psi, log_acc);
  }

  const std::vector<Eigen::VectorXd> site_vecs = boundary_site_vectors(boundary, basis, d, N, stack);
  for (int site = N - 1; site >= 0; --site) {
    const Eigen::VectorXd& b = site_vecs[static_cast<std::size_t>(site)];
    const std::int64_t outer = psi.size() / p;
    Eigen::VectorXd next(outer);
    for (std::int64_t o = 0; o < outer; ++o) {
      double acc = 0.0;
      for (int s = 0; s < p; ++s) acc += psi(o * p + s) * b(s);
      next(o) = acc;
    }
    psi.swap(next);
    if (site > 0) rescale_into(psi, log_acc);
  }

  log_acc += boundary.log_prefactor;
  const double mantissa = psi(0);
  if (log_value_out != nullptr) {
    if (mantissa > 0.0)
      *log_value_out = std::log(mantissa) + log_acc;
    else if (mantissa == 0.0)
      *log_value_out = -std::numeric_limits<double>::infinity();
    else
      *log_value_out = std::numeric_limits<double>::quiet_NaN();
  }
  return mantissa * std::exp(log_acc);
}

}  // namespace rtn
