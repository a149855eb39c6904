#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace rtn {

enum class Ensemble { unitary, orthogonal, clifford };

std::string ensemble_name(Ensemble e);
Ensemble parse_ensemble(const std::string& name);

// Permutation of {0,...,k-1} in one-line notation: images[m] = sigma(m).
struct Permutation {
  std::vector<int> images;

  int k() const { return static_cast<int>(images.size()); }
  static Permutation identity(int k);
  static Permutation cyclic(int k);  // (0 1 ... k-1)
  static Permutation transposition(int k, int a, int b);
  Permutation inverse() const;
  // (this * other)(m) = this(other(m))
  Permutation compose(const Permutation& other) const;
  bool operator==(const Permutation&) const = default;
};

int cycle_count(const Permutation& p);

// Perfect matching of 2k points. Points 0..k-1 are the ket slots, k..2k-1 the
// bra slots; partner[p] is the point matched with p (fixed-point-free involution).
struct BrauerDiagram {
  std::vector<int> partner;

  int k() const { return static_cast<int>(partner.size()) / 2; }
  static BrauerDiagram from_permutation(const Permutation& p);
  // true when every pair joins a ket slot with a bra slot
  bool is_permutation_like() const;
  Permutation to_permutation() const;
  bool operator==(const BrauerDiagram&) const = default;
};

// Number of connected components of the union multigraph of the two matchings.
int loop_count(const BrauerDiagram& a, const BrauerDiagram& b);

struct BasisElement {
  enum class Kind { permutation, diagram, q3 };
  Kind kind = Kind::permutation;
  Permutation perm;       // permutation and q3 kinds (for q3: the attached sigma)
  BrauerDiagram diagram;  // diagram kind only
};

struct CommutantBasis {
  Ensemble ensemble = Ensemble::unitary;
  int k = 0;
  int d_hint = 0;  // clifford only: qudit dimension the basis is valid for
  std::vector<BasisElement> elements;

  int size() const { return static_cast<int>(elements.size()); }
  int find_permutation(const Permutation& p) const;  // -1 if absent
  std::string label(int index) const;
};

// All k! permutations, lexicographic in one-line notation; element 0 = identity.
CommutantBasis symmetric_basis(int k);  // 1 <= k <= 5

// All (2k-1)!! perfect matchings; the k! permutation-like diagrams come first,
// ordered as symmetric_basis(k); the rest follow in lexicographic partner order.
CommutantBasis brauer_basis(int k);  // 1 <= k <= 4

// k=2 (any d): the symmetric basis retagged; (k=3, d=3): 6 permutations plus
// Q3(), Q3(01). Other (k, d) pairs are unsupported.
CommutantBasis clifford_basis(int k, int d);

inline constexpr std::int64_t kElementVectorCap = 1 << 22;

// Explicit single-site replica vector of length d^{2k}, interleaved index order
// (ket_1, bra_1, ..., ket_k, bra_k) with ket_1 the most significant digit.
Eigen::VectorXd element_vector(const CommutantBasis& basis, int index, int d,
                               std::int64_t cap = kElementVectorCap);

// Flat length of an element vector, with the same cap check.
std::int64_t replica_dim(int k, int d, std::int64_t cap = kElementVectorCap);

}  // namespace rtn
