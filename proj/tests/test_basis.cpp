#include <doctest.h>

#include <set>

#include "rtn/basis.hpp"
#include "rtn/errors.hpp"

using namespace rtn;

TEST_CASE("permutation composition and inverse") {
  const Permutation c = Permutation::cyclic(3);
  CHECK(c.images == std::vector<int>{1, 2, 0});
  const Permutation t = Permutation::transposition(3, 0, 1);
  // (c * t)(m) = c(t(m))
  const Permutation ct = c.compose(t);
  CHECK(ct.images == std::vector<int>{2, 1, 0});
  CHECK(c.compose(c.inverse()) == Permutation::identity(3));
  CHECK(cycle_count(Permutation::identity(4)) == 4);
  CHECK(cycle_count(Permutation::cyclic(4)) == 1);
  CHECK(cycle_count(ct) == 2);
}

TEST_CASE("symmetric basis sizes and ordering") {
  CHECK(symmetric_basis(1).size() == 1);
  CHECK(symmetric_basis(2).size() == 2);
  CHECK(symmetric_basis(3).size() == 6);
  CHECK(symmetric_basis(4).size() == 24);
  CHECK(symmetric_basis(5).size() == 120);
  // identity first
  const CommutantBasis s3 = symmetric_basis(3);
  CHECK(s3.elements[0].perm == Permutation::identity(3));
  // all distinct
  std::set<std::vector<int>> seen;
  for (const BasisElement& e : s3.elements) seen.insert(e.perm.images);
  CHECK(seen.size() == 6);
  CHECK_THROWS_AS(symmetric_basis(0), ParameterError);
  CHECK_THROWS_AS(symmetric_basis(6), ParameterError);
}

TEST_CASE("brauer basis enumerates perfect matchings") {
  CHECK(brauer_basis(1).size() == 1);
  CHECK(brauer_basis(2).size() == 3);
  CHECK(brauer_basis(3).size() == 15);
  CHECK(brauer_basis(4).size() == 105);
  // first k! elements are the permutation matchings, in symmetric-basis order
  const CommutantBasis b3 = brauer_basis(3);
  const CommutantBasis s3 = symmetric_basis(3);
  for (int i = 0; i < 6; ++i) {
    CHECK(b3.elements[i].kind == BasisElement::Kind::permutation);
    CHECK(b3.elements[i].perm == s3.elements[i].perm);
  }
  for (int i = 6; i < 15; ++i) CHECK(b3.elements[i].kind == BasisElement::Kind::diagram);
  // distinct involutions without fixed points
  std::set<std::vector<int>> seen;
  for (const BasisElement& e : b3.elements) {
    const BrauerDiagram dg = e.kind == BasisElement::Kind::permutation
                                 ? BrauerDiagram::from_permutation(e.perm)
                                 : e.diagram;
    REQUIRE(dg.partner.size() == 6);
    for (int p = 0; p < 6; ++p) {
      CHECK(dg.partner[p] != p);
      CHECK(dg.partner[dg.partner[p]] == p);
    }
    seen.insert(dg.partner);
  }
  CHECK(seen.size() == 15);
}

TEST_CASE("matching round trip through permutations") {
  const CommutantBasis s3 = symmetric_basis(3);
  for (const BasisElement& e : s3.elements) {
    const BrauerDiagram dg = BrauerDiagram::from_permutation(e.perm);
    CHECK(dg.is_permutation_like());
    CHECK(dg.to_permutation() == e.perm);
  }
  // the k=2 crossing pairs kets together: not permutation-like
  BrauerDiagram cross;
  cross.partner = {1, 0, 3, 2};
  CHECK_FALSE(cross.is_permutation_like());
}

TEST_CASE("loop counts of matching unions") {
  const BrauerDiagram id2 = BrauerDiagram::from_permutation(Permutation::identity(2));
  const BrauerDiagram sw2 = BrauerDiagram::from_permutation(Permutation::transposition(2, 0, 1));
  BrauerDiagram cross;
  cross.partner = {1, 0, 3, 2};
  CHECK(loop_count(id2, id2) == 2);
  CHECK(loop_count(sw2, sw2) == 2);
  CHECK(loop_count(cross, cross) == 2);
  CHECK(loop_count(id2, sw2) == 1);
  CHECK(loop_count(id2, cross) == 1);
  CHECK(loop_count(sw2, cross) == 1);
}

TEST_CASE("clifford basis coverage") {
  const CommutantBasis c22 = clifford_basis(2, 2);
  CHECK(c22.size() == 2);
  CHECK(c22.d_hint == 2);
  const CommutantBasis c25 = clifford_basis(2, 5);
  CHECK(c25.size() == 2);
  const CommutantBasis c33 = clifford_basis(3, 3);
  CHECK(c33.size() == 8);
  int n_q3 = 0;
  for (const BasisElement& e : c33.elements)
    if (e.kind == BasisElement::Kind::q3) ++n_q3;
  CHECK(n_q3 == 2);
  CHECK_THROWS_AS(clifford_basis(3, 2), ParameterError);
  CHECK_THROWS_AS(clifford_basis(4, 2), ParameterError);
}

TEST_CASE("replica dimension guard") {
  CHECK(replica_dim(2, 2) == 16);
  CHECK(replica_dim(4, 2) == 256);
  CHECK(replica_dim(2, 3) == 81);
  CHECK_THROWS_AS(replica_dim(5, 50), ResourceError);
}

TEST_CASE("element vectors of the two-replica permutations") {
  const CommutantBasis s2 = symmetric_basis(2);
  // interleaved digits (ket1, bra1, ket2, bra2), ket1 most significant
  const Eigen::VectorXd id_vec = element_vector(s2, 0, 2);
  const Eigen::VectorXd sw_vec = element_vector(s2, 1, 2);
  REQUIRE(id_vec.size() == 16);
  std::set<int> id_support, sw_support;
  for (int i = 0; i < 16; ++i) {
    if (id_vec(i) != 0.0) id_support.insert(i);
    if (sw_vec(i) != 0.0) sw_support.insert(i);
  }
  CHECK(id_support == std::set<int>{0, 3, 12, 15});
  CHECK(sw_support == std::set<int>{0, 6, 9, 15});
  CHECK(id_vec.dot(id_vec) == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(id_vec.dot(sw_vec) == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("element vectors of the k=2 crossing") {
  const CommutantBasis b2 = brauer_basis(2);
  const int q = 3;
  // the non-permutation matching pairs (ket1,ket2) and (bra1,bra2)
  Eigen::VectorXd cross;
  int idx = -1;
  for (int i = 0; i < b2.size(); ++i)
    if (b2.elements[i].kind == BasisElement::Kind::diagram) idx = i;
  REQUIRE(idx >= 0);
  cross = element_vector(b2, idx, q);
  const Eigen::VectorXd id_vec = element_vector(b2, 0, q);
  const Eigen::VectorXd sw_vec = element_vector(b2, 1, q);
  CHECK(cross.dot(cross) == doctest::Approx(q * q).epsilon(1e-14));
  CHECK(cross.dot(id_vec) == doctest::Approx(q).epsilon(1e-14));
  CHECK(cross.dot(sw_vec) == doctest::Approx(q).epsilon(1e-14));
}

TEST_CASE("labels name elements by action") {
  const CommutantBasis s2 = symmetric_basis(2);
  CHECK(s2.label(0).find("perm") != std::string::npos);
  const CommutantBasis b2 = brauer_basis(2);
  bool any_match_label = false;
  for (int i = 0; i < b2.size(); ++i)
    if (b2.label(i).find("match") != std::string::npos) any_match_label = true;
  CHECK(any_match_label);
  const CommutantBasis c33 = clifford_basis(3, 3);
  bool any_q3 = false;
  for (int i = 0; i < c33.size(); ++i)
    if (c33.label(i).find("Q3") != std::string::npos) any_q3 = true;
  CHECK(any_q3);
}
