#include "rtn/channels.hpp"

#include <cmath>

#include "rtn/errors.hpp"

namespace rtn {

ChannelSuperop identity_choi(int d) {
  if (d < 2) throw ParameterError("identity_choi: d must be >= 2");
  ChannelSuperop c;
  c.d = d;
  c.label = "id";
  c.matrix = Eigen::MatrixXcd::Identity(d * d, d * d);
  return c;
}

ChannelSuperop depolarising_choi(int d, double p) {
  if (d < 2) throw ParameterError("depolarising_choi: d must be >= 2");
  if (!(p >= 0.0 && p <= 1.0)) throw ParameterError("depolarising_choi: p must be in [0,1]");
  ChannelSuperop c;
  c.d = d;
  c.label = "dep";
  c.p = p;
  // (1-p) rho + p tr(rho) I/d, on vec(rho) with index ket*d + bra. The mixing
  // weight is snapped to a multiple of 2^-52 so every partial sum of a trace
  // column is exactly representable; the trace functional is then a fixed left
  // eigenvector bitwise, independent of summation order.
  const double quantum = std::ldexp(1.0, -52);
  const double x = std::nearbyint((p / d) / quantum) * quantum;
  Eigen::MatrixXcd m = (1.0 - p) * Eigen::MatrixXcd::Identity(d * d, d * d);
  for (int a = 0; a < d; ++a) {
    for (int b = 0; b < d; ++b)
      if (b != a) m(b * d + b, a * d + a) = x;
    m(a * d + a, a * d + a) = 1.0 - (d - 1) * x;
  }
  c.matrix = m;
  return c;
}

ChannelSuperop parse_channel(const std::string& spec, int d) {
  if (spec == "id") return identity_choi(d);
  if (spec.rfind("dep:", 0) == 0) {
    double p = 0.0;
    std::size_t used = 0;
    const std::string arg = spec.substr(4);
    try {
      p = std::stod(arg, &used);
    } catch (const std::exception&) {
      throw ParameterError("parse_channel: bad rate in '" + spec + "'");
    }
    if (used != arg.size()) throw ParameterError("parse_channel: bad rate in '" + spec + "'");
    return depolarising_choi(d, p);
  }
  throw ParameterError("parse_channel: unknown channel '" + spec + "' (expected id | dep:<p>)");
}

bool ChannelStack::is_identity() const {
  for (const ChannelSuperop& c : channels)
    if (!c.is_identity()) return false;
  return true;
}

ChannelStack identity_stack(int d, int k) {
  ChannelStack s;
  s.channels.assign(k, identity_choi(d));
  return s;
}

ChannelStack uniform_stack(const ChannelSuperop& c, int k) {
  ChannelStack s;
  s.channels.assign(k, c);
  return s;
}

Eigen::VectorXd apply_stack(const ChannelStack& stack, const Eigen::VectorXd& v, int d, int k) {
  if (stack.k() != k) throw ParameterError("apply_stack: stack length != k");
  if (stack.d() != d) throw ParameterError("apply_stack: stack dimension != d");
  const std::int64_t dim = replica_dim(k, d);
  if (v.size() != dim) throw ParameterError("apply_stack: vector length mismatch");
  const int dd = d * d;
  Eigen::VectorXcd w = v.cast<std::complex<double>>();
  // replica a occupies one base-d^2 digit, replica 0 most significant
  std::int64_t right = dim / dd;
  for (int a = 0; a < k; ++a) {
    const Eigen::MatrixXcd& m = stack.channels[a].matrix;
    const std::int64_t left = dim / (right * dd);
    Eigen::VectorXcd tmp(dd);
    for (std::int64_t l = 0; l < left; ++l) {
      for (std::int64_t r = 0; r < right; ++r) {
        const std::int64_t base = l * dd * right + r;
        for (int s = 0; s < dd; ++s) tmp(s) = w(base + s * right);
        tmp = m * tmp;
        for (int s = 0; s < dd; ++s) w(base + s * right) = tmp(s);
      }
    }
    right /= dd;
  }
  const double leak = w.imag().cwiseAbs().maxCoeff();
  if (leak > 1e-12) throw NumericError("apply_stack: complex leakage");
  return w.real();
}

GramMatrix noisy_gram(const CommutantBasis& basis, int d, const ChannelStack& stack) {
  if (stack.k() != basis.k) throw ParameterError("noisy_gram: stack length != basis.k");
  if (stack.is_identity()) return gram_matrix(basis, d);
  const int n = basis.size();
  GramMatrix g;
  g.dim_q = d;
  g.entries.resize(n, n);
  std::vector<Eigen::VectorXd> vecs(n);
  for (int i = 0; i < n; ++i) vecs[i] = element_vector(basis, i, d);
  for (int j = 0; j < n; ++j) {
    Eigen::VectorXd w = apply_stack(stack, vecs[j], d, basis.k);
    for (int i = 0; i < n; ++i) g.entries(i, j) = vecs[i].dot(w);
  }
  return g;
}

}  // namespace rtn
