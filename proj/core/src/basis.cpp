#include "rtn/basis.hpp"

#include <algorithm>
#include <complex>
#include <numeric>
#include <sstream>

#include "rtn/errors.hpp"

namespace rtn {

std::string ensemble_name(Ensemble e) {
  switch (e) {
    case Ensemble::unitary: return "unitary";
    case Ensemble::orthogonal: return "orthogonal";
    case Ensemble::clifford: return "clifford";
  }
  return "?";
}

Ensemble parse_ensemble(const std::string& name) {
  if (name == "unitary") return Ensemble::unitary;
  if (name == "orthogonal") return Ensemble::orthogonal;
  if (name == "clifford") return Ensemble::clifford;
  throw ParameterError("unknown ensemble: " + name);
}

Permutation Permutation::identity(int k) {
  Permutation p;
  p.images.resize(k);
  std::iota(p.images.begin(), p.images.end(), 0);
  return p;
}

Permutation Permutation::cyclic(int k) {
  Permutation p;
  p.images.resize(k);
  for (int m = 0; m < k; ++m) p.images[m] = (m + 1) % k;
  return p;
}

Permutation Permutation::transposition(int k, int a, int b) {
  Permutation p = identity(k);
  std::swap(p.images[a], p.images[b]);
  return p;
}

Permutation Permutation::inverse() const {
  Permutation p;
  p.images.resize(images.size());
  for (int m = 0; m < k(); ++m) p.images[images[m]] = m;
  return p;
}

Permutation Permutation::compose(const Permutation& other) const {
  Permutation p;
  p.images.resize(images.size());
  for (int m = 0; m < k(); ++m) p.images[m] = images[other.images[m]];
  return p;
}

int cycle_count(const Permutation& p) {
  const int k = p.k();
  std::vector<char> seen(k, 0);
  int count = 0;
  for (int m = 0; m < k; ++m) {
    if (seen[m]) continue;
    ++count;
    int j = m;
    while (!seen[j]) {
      seen[j] = 1;
      j = p.images[j];
    }
  }
  return count;
}

BrauerDiagram BrauerDiagram::from_permutation(const Permutation& p) {
  const int k = p.k();
  BrauerDiagram d;
  d.partner.resize(2 * k);
  for (int m = 0; m < k; ++m) {
    d.partner[m] = k + p.images[m];
    d.partner[k + p.images[m]] = m;
  }
  return d;
}

bool BrauerDiagram::is_permutation_like() const {
  const int n = k();
  for (int m = 0; m < n; ++m)
    if (partner[m] < n) return false;
  return true;
}

Permutation BrauerDiagram::to_permutation() const {
  if (!is_permutation_like()) throw ParameterError("diagram is not permutation-like");
  const int n = k();
  Permutation p;
  p.images.resize(n);
  for (int m = 0; m < n; ++m) p.images[m] = partner[m] - n;
  return p;
}

int loop_count(const BrauerDiagram& a, const BrauerDiagram& b) {
  if (a.partner.size() != b.partner.size()) throw ParameterError("diagram size mismatch");
  const int n = static_cast<int>(a.partner.size());
  std::vector<char> seen(n, 0);
  int count = 0;
  for (int start = 0; start < n; ++start) {
    if (seen[start]) continue;
    ++count;
    // alternate a-edges and b-edges until the walk closes
    int p = start;
    while (!seen[p]) {
      seen[p] = 1;
      int q = a.partner[p];
      seen[q] = 1;
      p = b.partner[q];
    }
  }
  return count;
}

int CommutantBasis::find_permutation(const Permutation& p) const {
  for (int i = 0; i < size(); ++i)
    if (elements[i].kind == BasisElement::Kind::permutation && elements[i].perm == p) return i;
  return -1;
}

std::string CommutantBasis::label(int index) const {
  const BasisElement& e = elements.at(index);
  std::ostringstream os;
  switch (e.kind) {
    case BasisElement::Kind::permutation: {
      os << "perm(";
      for (int m = 0; m < e.perm.k(); ++m) os << (m ? " " : "") << e.perm.images[m];
      os << ")";
      break;
    }
    case BasisElement::Kind::diagram: {
      os << "match(";
      bool first = true;
      for (int p = 0; p < 2 * e.diagram.k(); ++p) {
        if (e.diagram.partner[p] < p) continue;
        os << (first ? "" : " ") << p << "-" << e.diagram.partner[p];
        first = false;
      }
      os << ")";
      break;
    }
    case BasisElement::Kind::q3: {
      bool id = e.perm == Permutation::identity(e.perm.k());
      os << (id ? "Q3()" : "Q3(01)");
      break;
    }
  }
  return os.str();
}

CommutantBasis symmetric_basis(int k) {
  if (k < 1 || k > 5) throw ParameterError("symmetric_basis: k must be in [1,5]");
  CommutantBasis b;
  b.ensemble = Ensemble::unitary;
  b.k = k;
  std::vector<int> v(k);
  std::iota(v.begin(), v.end(), 0);
  do {
    BasisElement e;
    e.kind = BasisElement::Kind::permutation;
    e.perm.images = v;
    b.elements.push_back(std::move(e));
  } while (std::next_permutation(v.begin(), v.end()));
  return b;
}

namespace {

void enumerate_matchings(std::vector<int>& partner, std::vector<BrauerDiagram>& out) {
  const int n = static_cast<int>(partner.size());
  int lo = -1;
  for (int p = 0; p < n; ++p)
    if (partner[p] < 0) { lo = p; break; }
  if (lo < 0) {
    BrauerDiagram d;
    d.partner = partner;
    out.push_back(std::move(d));
    return;
  }
  for (int q = lo + 1; q < n; ++q) {
    if (partner[q] >= 0) continue;
    partner[lo] = q;
    partner[q] = lo;
    enumerate_matchings(partner, out);
    partner[lo] = -1;
    partner[q] = -1;
  }
}

}  // namespace

CommutantBasis brauer_basis(int k) {
  if (k < 1 || k > 4) throw ParameterError("brauer_basis: k must be in [1,4]");
  std::vector<int> partner(2 * k, -1);
  std::vector<BrauerDiagram> all;
  enumerate_matchings(partner, all);

  CommutantBasis b;
  b.ensemble = Ensemble::orthogonal;
  b.k = k;
  // permutation-like diagrams first, in symmetric_basis order; both the
  // permutation and its matching are kept so every consumer can use either view
  CommutantBasis sym = symmetric_basis(k);
  for (const BasisElement& se : sym.elements) {
    BasisElement e;
    e.kind = BasisElement::Kind::permutation;
    e.perm = se.perm;
    e.diagram = BrauerDiagram::from_permutation(se.perm);
    b.elements.push_back(std::move(e));
  }
  for (const BrauerDiagram& d : all) {
    if (d.is_permutation_like()) continue;
    BasisElement e;
    e.kind = BasisElement::Kind::diagram;
    e.diagram = d;
    b.elements.push_back(std::move(e));
  }
  return b;
}

CommutantBasis clifford_basis(int k, int d) {
  if (d < 2) throw ParameterError("clifford_basis: d must be >= 2");
  if (k == 2) {
    CommutantBasis b = symmetric_basis(2);
    b.ensemble = Ensemble::clifford;
    b.d_hint = d;
    return b;
  }
  if (k == 3 && d == 3) {
    CommutantBasis b = symmetric_basis(3);
    b.ensemble = Ensemble::clifford;
    b.d_hint = 3;
    BasisElement q0;
    q0.kind = BasisElement::Kind::q3;
    q0.perm = Permutation::identity(3);
    b.elements.push_back(std::move(q0));
    BasisElement q1;
    q1.kind = BasisElement::Kind::q3;
    q1.perm = Permutation::transposition(3, 0, 1);
    b.elements.push_back(std::move(q1));
    return b;
  }
  throw ParameterError("clifford_basis: supported (k,d) are (2,any) and (3,3)");
}

std::int64_t replica_dim(int k, int d, std::int64_t cap) {
  if (k < 1) throw ParameterError("replica_dim: k must be positive");
  if (d < 2) throw ParameterError("replica_dim: d must be >= 2");
  std::int64_t dim = 1;
  for (int i = 0; i < 2 * k; ++i) {
    if (dim > cap / d) throw ResourceError("replica vector dimension d^{2k} exceeds cap");
    dim *= d;
  }
  if (dim > cap) throw ResourceError("replica vector dimension d^{2k} exceeds cap");
  return dim;
}

namespace {

// flat interleaved index from per-replica (ket, bra) digits, replica 0 most significant
std::int64_t interleaved_index(const std::vector<int>& ket, const std::vector<int>& bra, int d) {
  std::int64_t idx = 0;
  for (size_t m = 0; m < ket.size(); ++m) idx = (idx * d + ket[m]) * d + bra[m];
  return idx;
}

Eigen::VectorXd q3_vector(const Permutation& sigma, int d) {
  using cx = std::complex<double>;
  const int k = 3;
  const int D3 = d * d * d;
  Eigen::MatrixXcd X = Eigen::MatrixXcd::Zero(d, d);
  Eigen::MatrixXcd Z = Eigen::MatrixXcd::Zero(d, d);
  const double two_pi = 2.0 * std::acos(-1.0);
  for (int j = 0; j < d; ++j) {
    X((j + 1) % d, j) = 1.0;
    Z(j, j) = std::exp(cx(0.0, two_pi * j / d));
  }
  auto kron3 = [d, D3](const Eigen::MatrixXcd& m) {
    Eigen::MatrixXcd out(D3, D3);
    for (int r1 = 0; r1 < d; ++r1)
      for (int r2 = 0; r2 < d; ++r2)
        for (int r3 = 0; r3 < d; ++r3)
          for (int c1 = 0; c1 < d; ++c1)
            for (int c2 = 0; c2 < d; ++c2)
              for (int c3 = 0; c3 < d; ++c3)
                out((r1 * d + r2) * d + r3, (c1 * d + c2) * d + c3) =
                    m(r1, c1) * m(r2, c2) * m(r3, c3);
    return out;
  };
  Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(D3, D3);
  Eigen::MatrixXcd Xa = Eigen::MatrixXcd::Identity(d, d);
  for (int a = 0; a < d; ++a) {
    Eigen::MatrixXcd Zb = Eigen::MatrixXcd::Identity(d, d);
    for (int b = 0; b < d; ++b) {
      acc += kron3(Xa * Zb);
      Zb *= Z;
    }
    Xa *= X;
  }
  acc /= static_cast<double>(d);

  // right-multiply by the permutation operator: <x|Perm(sigma)|y> = prod_m delta(x_m, y_{sigma(m)})
  Eigen::MatrixXcd perm = Eigen::MatrixXcd::Zero(D3, D3);
  std::vector<int> y(k);
  for (int col = 0; col < D3; ++col) {
    int c = col;
    for (int m = k - 1; m >= 0; --m) { y[m] = c % d; c /= d; }
    int row = 0;
    for (int m = 0; m < k; ++m) row = row * d + y[sigma.images[m]];
    perm(row, col) = 1.0;
  }
  Eigen::MatrixXcd op = acc * perm;

  Eigen::VectorXd out(static_cast<std::int64_t>(D3) * D3);
  std::vector<int> ket(k), bra(k);
  double max_imag = 0.0;
  for (int r = 0; r < D3; ++r) {
    int rr = r;
    for (int m = k - 1; m >= 0; --m) { ket[m] = rr % d; rr /= d; }
    for (int c = 0; c < D3; ++c) {
      int cc = c;
      for (int m = k - 1; m >= 0; --m) { bra[m] = cc % d; cc /= d; }
      cx v = op(r, c);
      max_imag = std::max(max_imag, std::abs(v.imag()));
      out(interleaved_index(ket, bra, d)) = v.real();
    }
  }
  if (max_imag > 1e-12) throw NumericError("Q3 element vector has complex leakage");
  return out;
}

}  // namespace

Eigen::VectorXd element_vector(const CommutantBasis& basis, int index, int d, std::int64_t cap) {
  if (index < 0 || index >= basis.size()) throw ParameterError("element_vector: index out of range");
  if (basis.ensemble == Ensemble::clifford && basis.d_hint != d)
    throw ParameterError("element_vector: clifford basis requires d = d_hint");
  const int k = basis.k;
  const std::int64_t dim = replica_dim(k, d, cap);
  const BasisElement& e = basis.elements[index];

  if (e.kind == BasisElement::Kind::q3) return q3_vector(e.perm, d);

  Eigen::VectorXd v = Eigen::VectorXd::Zero(dim);
  std::vector<int> ket(k), bra(k);
  if (e.kind == BasisElement::Kind::permutation) {
    // component prod_m delta(b_m, bbar_{sigma(m)}): bras determined by kets
    std::int64_t nk = 1;
    for (int i = 0; i < k; ++i) nk *= d;
    for (std::int64_t a = 0; a < nk; ++a) {
      std::int64_t aa = a;
      for (int m = k - 1; m >= 0; --m) { ket[m] = static_cast<int>(aa % d); aa /= d; }
      for (int m = 0; m < k; ++m) bra[e.perm.images[m]] = ket[m];
      v(interleaved_index(ket, bra, d)) = 1.0;
    }
  } else {
    // each matched pair of slots carries one free value
    std::vector<std::pair<int, int>> pairs;
    for (int p = 0; p < 2 * k; ++p)
      if (e.diagram.partner[p] > p) pairs.emplace_back(p, e.diagram.partner[p]);
    std::vector<int> val(k, 0);
    std::vector<int> point(2 * k);
    while (true) {
      for (size_t j = 0; j < pairs.size(); ++j) {
        point[pairs[j].first] = val[j];
        point[pairs[j].second] = val[j];
      }
      for (int m = 0; m < k; ++m) { ket[m] = point[m]; bra[m] = point[k + m]; }
      v(interleaved_index(ket, bra, d)) = 1.0;
      int j = k - 1;
      while (j >= 0 && val[j] == d - 1) { val[j] = 0; --j; }
      if (j < 0) break;
      ++val[j];
    }
  }
  return v;
}

}  // namespace rtn
