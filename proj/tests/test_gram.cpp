#include <doctest.h>

#include <cmath>

#include "rtn/errors.hpp"
#include "rtn/gram.hpp"
#include "rtn/irrep.hpp"

using namespace rtn;

namespace {

// Gram matrix straight from the embedded vectors, no combinatorics.
Eigen::MatrixXd gram_by_vectors(const CommutantBasis& basis, int q) {
  const int n = basis.size();
  Eigen::MatrixXd g(n, n);
  std::vector<Eigen::VectorXd> vecs;
  for (int i = 0; i < n; ++i) vecs.push_back(element_vector(basis, i, q));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = vecs[i].dot(vecs[j]);
  return g;
}

}  // namespace

TEST_CASE("two-replica gram and weingarten in closed form") {
  const CommutantBasis s2 = symmetric_basis(2);
  for (int q : {2, 4, 9, 16}) {
    const GramMatrix g = gram_matrix(s2, q);
    CHECK(g.entries(0, 0) == doctest::Approx(q * q).epsilon(1e-14));
    CHECK(g.entries(0, 1) == doctest::Approx(q).epsilon(1e-14));
    CHECK(g.entries(1, 0) == doctest::Approx(q).epsilon(1e-14));
    CHECK(g.entries(1, 1) == doctest::Approx(q * q).epsilon(1e-14));
    const WeingartenMatrix wg = weingarten_matrix(s2, q);
    const double qq = static_cast<double>(q) * q;
    const double denom = qq * (qq - 1.0);
    CHECK(std::abs(wg.entries(0, 0) - qq / denom) < 1e-12);
    CHECK(std::abs(wg.entries(0, 1) + q / denom) < 1e-12);
    CHECK(std::abs(wg.entries(1, 0) + q / denom) < 1e-12);
    CHECK(std::abs(wg.entries(1, 1) - qq / denom) < 1e-12);
    CHECK(wg.rank == 2);
  }
}

TEST_CASE("weingarten sums") {
  // total sum at k=2 is 2/(D(D+1)); every row sums to 1/prod_m (D+m)
  const CommutantBasis s2 = symmetric_basis(2);
  for (double big_d : {4.0, 64.0, 4096.0}) {
    const int q = static_cast<int>(big_d);
    const WeingartenMatrix wg = weingarten_matrix(s2, q);
    const double total = wg.entries.sum();
    CHECK(std::abs(total - 2.0 / (big_d * (big_d + 1.0))) < 1e-12 * total);
  }
  for (int k : {2, 3, 4}) {
    const CommutantBasis sk = symmetric_basis(k);
    const int q = 7;
    const WeingartenMatrix wg = weingarten_matrix(sk, q);
    double expect = 1.0;
    for (int m = 0; m < k; ++m) expect /= (q + m);
    const Eigen::VectorXd rows = wg.entries.rowwise().sum();
    for (int i = 0; i < rows.size(); ++i) CHECK(std::abs(rows(i) - expect) < 1e-12 * expect);
  }
}

TEST_CASE("pseudo-inverse identity G Wg G = G") {
  for (int q : {2, 3, 4, 9}) {
    for (int k : {2, 3, 4}) {
      const CommutantBasis sk = symmetric_basis(k);
      const GramMatrix g = gram_matrix(sk, q);
      const WeingartenMatrix wg = weingarten_matrix(sk, q);
      const Eigen::MatrixXd resid = g.entries * wg.entries * g.entries - g.entries;
      CHECK(resid.cwiseAbs().maxCoeff() < 1e-10 * g.entries.cwiseAbs().maxCoeff());
    }
    const CommutantBasis b3 = brauer_basis(3);
    const GramMatrix g = gram_matrix(b3, q);
    const WeingartenMatrix wg = weingarten_matrix(b3, q);
    const Eigen::MatrixXd resid = g.entries * wg.entries * g.entries - g.entries;
    CHECK(resid.cwiseAbs().maxCoeff() < 1e-10 * g.entries.cwiseAbs().maxCoeff());
  }
}

TEST_CASE("gram against embedded vectors") {
  for (int q : {2, 3}) {
    for (int k : {2, 3}) {
      const CommutantBasis sk = symmetric_basis(k);
      const GramMatrix g = gram_matrix(sk, q);
      const Eigen::MatrixXd ref = gram_by_vectors(sk, q);
      CHECK((g.entries - ref).cwiseAbs().maxCoeff() < 1e-12 * ref.cwiseAbs().maxCoeff());
    }
  }
  // k = 4 at d = 2: 24 x 24 against 256-component vectors
  {
    const CommutantBasis s4 = symmetric_basis(4);
    const GramMatrix g = gram_matrix(s4, 2);
    const Eigen::MatrixXd ref = gram_by_vectors(s4, 2);
    CHECK((g.entries - ref).cwiseAbs().maxCoeff() < 1e-12 * ref.cwiseAbs().maxCoeff());
  }
  for (int q : {2, 3}) {
    for (int k : {2, 3}) {
      const CommutantBasis bk = brauer_basis(k);
      const GramMatrix g = gram_matrix(bk, q);
      const Eigen::MatrixXd ref = gram_by_vectors(bk, q);
      CHECK((g.entries - ref).cwiseAbs().maxCoeff() < 1e-12 * ref.cwiseAbs().maxCoeff());
    }
  }
}

TEST_CASE("gram diagonal is q^k") {
  for (int q : {2, 5}) {
    for (int k : {2, 3, 4}) {
      const CommutantBasis sk = symmetric_basis(k);
      const GramMatrix g = gram_matrix(sk, q);
      for (int i = 0; i < g.entries.rows(); ++i)
        CHECK(g.entries(i, i) == doctest::Approx(std::pow(q, k)).epsilon(1e-13));
      const CommutantBasis bk = brauer_basis(k == 4 ? 3 : k);
      const GramMatrix gb = gram_matrix(bk, q);
      for (int i = 0; i < gb.entries.rows(); ++i)
        CHECK(gb.entries(i, i) ==
              doctest::Approx(std::pow(q, bk.k)).epsilon(1e-13));
    }
  }
}

TEST_CASE("permutation sector of the matching gram matches the symmetric gram") {
  for (int q : {2, 3, 4}) {
    for (int k : {2, 3}) {
      const CommutantBasis sk = symmetric_basis(k);
      const CommutantBasis bk = brauer_basis(k);
      const GramMatrix gs = gram_matrix(sk, q);
      const GramMatrix gb = gram_matrix(bk, q);
      const int nf = sk.size();
      CHECK((gb.entries.topLeftCorner(nf, nf) - gs.entries).cwiseAbs().maxCoeff() < 1e-12);
    }
  }
}

TEST_CASE("clifford gram: numeric at q = d, entrywise square at q = d^2") {
  const CommutantBasis c33 = clifford_basis(3, 3);
  const GramMatrix g3 = gram_matrix(c33, 3);
  const GramMatrix g9 = gram_matrix(c33, 9);
  CHECK((g9.entries - g3.entries.cwiseProduct(g3.entries)).cwiseAbs().maxCoeff() < 1e-9);
  CHECK_THROWS_AS(gram_matrix(c33, 4), ParameterError);
  // numeric gram against the raw vectors
  const Eigen::MatrixXd ref = gram_by_vectors(c33, 3);
  CHECK((g3.entries - ref).cwiseAbs().maxCoeff() < 1e-10);
  // permutation sector still counts cycles
  const CommutantBasis s3 = symmetric_basis(3);
  const GramMatrix gs = gram_matrix(s3, 3);
  CHECK((g3.entries.topLeftCorner(6, 6) - gs.entries).cwiseAbs().maxCoeff() < 1e-10);
  // k = 2 clifford basis is the symmetric one
  const CommutantBasis c25 = clifford_basis(2, 5);
  const GramMatrix gc = gram_matrix(c25, 5);
  const GramMatrix gu = gram_matrix(symmetric_basis(2), 5);
  CHECK((gc.entries - gu.entries).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("projector onto the link gram column space") {
  struct Case {
    int k, d, d_red;
  };
  // rank of the S_k gram at q = d
  const Case cases[] = {{2, 2, 2}, {3, 2, 5}, {3, 3, 6}, {4, 2, 14},
                        {4, 3, 23}, {4, 4, 24}, {5, 2, 42}};
  for (const Case& c : cases) {
    const CommutantBasis sk = symmetric_basis(c.k);
    const GramMatrix g = gram_matrix(sk, c.d);
    const IrrepProjector pr = irrep_projector(g);
    CHECK(pr.d_red == c.d_red);
    const int n = sk.size();
    REQUIRE(pr.P.rows() == pr.d_red);
    REQUIRE(pr.P.cols() == n);
    // orthonormal rows
    const Eigen::MatrixXd ppt = pr.P * pr.P.transpose();
    CHECK((ppt - Eigen::MatrixXd::Identity(pr.d_red, pr.d_red)).cwiseAbs().maxCoeff() < 1e-10);
    // P^T P is the orthogonal projector onto col(G)
    const Eigen::MatrixXd gpg = sym_pseudo_inverse(g.entries) * g.entries;
    CHECK((pr.P.transpose() * pr.P - gpg).cwiseAbs().maxCoeff() < 1e-8);
  }
}

TEST_CASE("gram rejects bad dimensions") {
  const CommutantBasis s2 = symmetric_basis(2);
  CHECK_THROWS_AS(gram_matrix(s2, 1), ParameterError);
  CHECK_THROWS_AS(gram_matrix(s2, 0), ParameterError);
}
