#include <doctest.h>

#include <cmath>

#include "rtn/channels.hpp"
#include "rtn/errors.hpp"

using namespace rtn;

TEST_CASE("channel parsing") {
  const ChannelSuperop id = parse_channel("id", 3);
  CHECK(id.is_identity());
  CHECK(id.d == 3);
  const ChannelSuperop dep = parse_channel("dep:0.25", 2);
  CHECK(dep.p == doctest::Approx(0.25));
  CHECK_FALSE(dep.is_identity());
  CHECK_THROWS_AS(parse_channel("dep:", 2), ParameterError);
  CHECK_THROWS_AS(parse_channel("dep:1.5", 2), ParameterError);
  CHECK_THROWS_AS(parse_channel("dep:-0.1", 2), ParameterError);
  CHECK_THROWS_AS(parse_channel("dep:0.1x", 2), ParameterError);
  CHECK_THROWS_AS(parse_channel("foo", 2), ParameterError);
  CHECK_THROWS_AS(parse_channel("", 2), ParameterError);
  CHECK_THROWS_AS(depolarising_choi(2, 1.0001), ParameterError);
}

TEST_CASE("depolarising superoperator acts as (1-p) rho + p tr(rho) I/d") {
  const int d = 3;
  const double p = 0.4;
  const ChannelSuperop dep = depolarising_choi(d, p);
  // random-ish hermitian input in vectorized (ket*d + bra) layout
  Eigen::MatrixXcd rho(d, d);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b)
      rho(a, b) = std::complex<double>(0.1 * (a + 1) * (b + 2), 0.05 * (a - b));
  rho = (rho + rho.adjoint()).eval();
  Eigen::VectorXcd vec(d * d);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) vec(a * d + b) = rho(a, b);
  const Eigen::VectorXcd out = dep.matrix * vec;
  const std::complex<double> tr = rho.trace();
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) {
      std::complex<double> expect = (1.0 - p) * rho(a, b);
      if (a == b) expect += p * tr / static_cast<double>(d);
      CHECK(std::abs(out(a * d + b) - expect) < 1e-14);
    }
}

TEST_CASE("depolarising preserves the trace exactly and fixes the identity") {
  for (int d : {2, 3}) {
    for (double p : {0.0, 0.3, 1.0}) {
      const ChannelSuperop dep = depolarising_choi(d, p);
      // trace functional <<I| is a left fixed point
      Eigen::RowVectorXcd bra_id = Eigen::RowVectorXcd::Zero(d * d);
      for (int a = 0; a < d; ++a) bra_id(a * d + a) = 1.0;
      const Eigen::RowVectorXcd out = bra_id * dep.matrix;
      CHECK((out - bra_id).cwiseAbs().maxCoeff() == 0.0);
      // unitality: vec(I) is a right fixed point
      const Eigen::VectorXcd ket_id = bra_id.transpose();
      CHECK((dep.matrix * ket_id - ket_id).cwiseAbs().maxCoeff() < 1e-15);
    }
  }
}

TEST_CASE("stack application on replica basis vectors") {
  const CommutantBasis s2 = symmetric_basis(2);
  const int d = 2;
  const Eigen::VectorXd id_vec = element_vector(s2, 0, d);
  const Eigen::VectorXd sw_vec = element_vector(s2, 1, d);

  const ChannelStack idstack = identity_stack(d, 2);
  CHECK(idstack.is_identity());
  CHECK((apply_stack(idstack, sw_vec, d, 2) - sw_vec).cwiseAbs().maxCoeff() < 1e-15);

  // full depolarising on both replicas sends the swap vector to id/d and fixes id
  const ChannelStack dep1 = uniform_stack(depolarising_choi(d, 1.0), 2);
  CHECK((apply_stack(dep1, sw_vec, d, 2) - id_vec / d).cwiseAbs().maxCoeff() < 1e-14);
  CHECK((apply_stack(dep1, id_vec, d, 2) - id_vec).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("noisy gram for one ideal and one depolarised replica") {
  const CommutantBasis s2 = symmetric_basis(2);
  const int d = 2;
  for (double p : {0.0, 0.3, 1.0}) {
    ChannelStack st;
    st.channels = {identity_choi(d), depolarising_choi(d, p)};
    const GramMatrix g = noisy_gram(s2, d, st);
    CHECK(g.entries(0, 0) == doctest::Approx(4.0).epsilon(1e-14));
    CHECK(g.entries(0, 1) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(g.entries(1, 0) == doctest::Approx(2.0).epsilon(1e-14));
    // (1-p) d^2 + p d^2/d^2... the swap-swap overlap loses 3p at d = 2
    CHECK(g.entries(1, 1) == doctest::Approx(4.0 - 3.0 * p).epsilon(1e-14));
  }
  // p = 0 reduces to the clean gram
  ChannelStack clean;
  clean.channels = {identity_choi(d), depolarising_choi(d, 0.0)};
  const GramMatrix g0 = noisy_gram(s2, d, clean);
  const GramMatrix ref = gram_matrix(s2, d);
  CHECK((g0.entries - ref.entries).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("noisy gram with both replicas fully depolarised") {
  const CommutantBasis s2 = symmetric_basis(2);
  const ChannelStack dep1 = uniform_stack(depolarising_choi(2, 1.0), 2);
  const GramMatrix g = noisy_gram(s2, 2, dep1);
  Eigen::MatrixXd expect(2, 2);
  expect << 4.0, 2.0, 2.0, 1.0;
  CHECK((g.entries - expect).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("noisy gram is symmetric for self-adjoint channels") {
  const CommutantBasis b2 = brauer_basis(2);
  const ChannelStack st = uniform_stack(depolarising_choi(3, 0.35), 2);
  const GramMatrix g = noisy_gram(b2, 3, st);
  CHECK((g.entries - g.entries.transpose()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("stack shape mismatches are rejected") {
  const ChannelStack st = uniform_stack(depolarising_choi(2, 0.5), 2);
  Eigen::VectorXd wrong = Eigen::VectorXd::Ones(8);
  CHECK_THROWS_AS(apply_stack(st, wrong, 2, 2), ParameterError);
}
