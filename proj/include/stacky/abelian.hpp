#pragma once

#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "stacky/int_matrix.hpp"

namespace stacky {

// Coordinates on the generators of a finitely generated abelian group,
// interpreted modulo the relation lattice of that group.
struct GroupElement {
  std::vector<Int> v;

  GroupElement() = default;
  explicit GroupElement(std::size_t n) : v(n, Int(0)) {}
  GroupElement(std::vector<Int> coords) : v(std::move(coords)) {}
  GroupElement(std::initializer_list<Int> coords) : v(coords) {}

  std::size_t size() const { return v.size(); }
  Int& operator[](std::size_t i) { return v[i]; }
  const Int& operator[](std::size_t i) const { return v[i]; }
  auto begin() const { return v.begin(); }
  auto end() const { return v.end(); }

  bool operator==(const GroupElement& o) const { return v == o.v; }
  bool operator<(const GroupElement& o) const { return v < o.v; }
};

inline GroupElement group_zero(std::size_t n) { return GroupElement(n); }

inline GroupElement operator+(const GroupElement& a, const GroupElement& b) {
  if (a.size() != b.size()) fail(errc::dimension_mismatch, "group element sum");
  GroupElement out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return out;
}

inline GroupElement operator-(const GroupElement& a, const GroupElement& b) {
  if (a.size() != b.size()) fail(errc::dimension_mismatch, "group element difference");
  GroupElement out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

inline GroupElement operator*(const Int& c, const GroupElement& a) {
  GroupElement out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = c * a[i];
  return out;
}

// Z^n modulo the column lattice of relation_matrix.  The cached Smith form
// provides canonical coordinates: w = U v with the torsion positions reduced
// into [0, d_i).  Two elements are equal iff their canonical forms agree.
class FgAbelianGroup {
 public:
  FgAbelianGroup() : n_(0) {}

  FgAbelianGroup(std::size_t n_generators, IntMatrix relation_matrix)
      : n_(n_generators), rel_(std::move(relation_matrix)) {
    if (rel_.rows() == 0 && rel_.cols() == 0) rel_ = IntMatrix(n_, 0);
    if (rel_.rows() != n_) fail(errc::dimension_mismatch, "relation matrix must have one row per generator");
    snf_ = smith_normal_form(rel_);
  }

  static FgAbelianGroup free_group(std::size_t rank) { return FgAbelianGroup(rank, IntMatrix(rank, 0)); }

  std::size_t n_generators() const { return n_; }
  const IntMatrix& relation_matrix() const { return rel_; }
  const SmithForm& smith() const { return snf_; }
  bool is_free() const { return rel_.is_zero(); }

  const std::vector<Int>& invariant_factors() const { return snf_.invariant_factors; }

  std::size_t rank() const { return n_ - snf_.invariant_factors.size(); }

  std::vector<Int> torsion_factors() const {
    std::vector<Int> out;
    for (const Int& d : snf_.invariant_factors)
      if (d > 1) out.push_back(d);
    return out;
  }

  // d_1 | d_2 | ... so the torsion exponent is the last nontrivial factor.
  Int torsion_exponent() const {
    auto t = torsion_factors();
    return t.empty() ? Int(1) : t.back();
  }

  // Canonical coordinates: indices [0, k) carry Z/d_i (value in [0, d_i)),
  // the rest are free Z coordinates.
  GroupElement canonical_form(const GroupElement& v) const {
    check_dim(v);
    GroupElement w = snf_.U.apply(v.v);
    const auto& f = snf_.invariant_factors;
    for (std::size_t i = 0; i < f.size(); ++i) {
      w[i] %= f[i];
      if (w[i] < 0) w[i] += f[i];
    }
    return w;
  }

  // Canonical form with the trivial (d_i = 1) coordinates dropped and the
  // free coordinates listed first.  Stable printable representative.
  GroupElement compact_form(const GroupElement& v) const {
    GroupElement w = canonical_form(v);
    const auto& f = snf_.invariant_factors;
    std::vector<Int> out;
    for (std::size_t i = f.size(); i < n_; ++i) out.push_back(w[i]);
    for (std::size_t i = 0; i < f.size(); ++i)
      if (f[i] > 1) out.push_back(w[i]);
    return GroupElement(std::move(out));
  }

  std::size_t compact_size() const { return rank() + torsion_factors().size(); }

  bool is_zero(const GroupElement& v) const {
    GroupElement w = canonical_form(v);
    for (const Int& x : w)
      if (x != 0) return false;
    return true;
  }

  // Free coordinates of v (the image in the torsion-free quotient).
  std::vector<Int> free_part(const GroupElement& v) const {
    GroupElement w = canonical_form(v);
    return std::vector<Int>(w.begin() + static_cast<long>(snf_.invariant_factors.size()), w.end());
  }

  void check_dim(const GroupElement& v) const {
    if (v.size() != n_) fail(errc::dimension_mismatch, "coordinate length != generator count");
  }

 private:
  std::size_t n_;
  IntMatrix rel_;
  SmithForm snf_;
};

inline bool element_equal(const GroupElement& g1, const GroupElement& g2, const FgAbelianGroup& g) {
  g.check_dim(g1);
  g.check_dim(g2);
  return g.canonical_form(g1) == g.canonical_form(g2);
}

// Group homomorphism given by an integer matrix on generators.  The matrix
// must map every source relator into the relation lattice of the target; this
// is checked once at construction.
struct GroupHom {
  GroupHom(FgAbelianGroup src, FgAbelianGroup tgt, IntMatrix m)
      : source(std::move(src)), target(std::move(tgt)), matrix(std::move(m)) {
    if (matrix.rows() != target.n_generators() || matrix.cols() != source.n_generators())
      fail(errc::dimension_mismatch, "hom matrix shape");
    const IntMatrix& rel = source.relation_matrix();
    for (std::size_t j = 0; j < rel.cols(); ++j) {
      if (!target.is_zero(matrix.apply(rel.column(j))))
        fail(errc::invalid_input, "matrix does not descend to a homomorphism");
    }
  }

  GroupElement apply(const GroupElement& v) const {
    source.check_dim(v);
    return matrix.apply(v.v);
  }

  FgAbelianGroup source;
  FgAbelianGroup target;
  IntMatrix matrix;
};

// Free subgroup of Z^ambient_rank with a chosen basis in column Hermite form.
struct Sublattice {
  std::size_t ambient_rank = 0;
  IntMatrix basis;  // columns, Hermite-canonical

  std::size_t rank() const { return basis.cols(); }

  // Solve basis * x = v over Z (the basis columns are independent, so the
  // Hermite structure gives forward substitution).
  std::optional<std::vector<Int>> coordinates(const GroupElement& v) const {
    if (v.size() != ambient_rank) fail(errc::dimension_mismatch, "sublattice membership");
    GroupElement r = v;
    std::vector<Int> x(basis.cols(), Int(0));
    for (std::size_t j = 0; j < basis.cols(); ++j) {
      std::size_t p = 0;
      while (p < ambient_rank && basis.at(p, j) == 0) ++p;
      if (p == ambient_rank) continue;
      if (r[p] % basis.at(p, j) != 0) return std::nullopt;
      Int q = r[p] / basis.at(p, j);
      x[j] = q;
      for (std::size_t i = 0; i < ambient_rank; ++i) r[i] -= q * basis.at(i, j);
    }
    for (const Int& e : r)
      if (e != 0) return std::nullopt;
    return x;
  }

  bool contains(const GroupElement& v) const { return coordinates(v).has_value(); }

  GroupElement basis_vector(std::size_t j) const { return basis.column(j); }
};

// Kernel of a homomorphism out of a free group: all v with h(v) = 0 in the
// target group (torsion included).  The returned basis Z-spans that kernel.
inline Sublattice kernel_lattice(const GroupHom& h) {
  if (!h.source.is_free()) fail(errc::non_free_source, "kernel_lattice needs a free source");
  const std::size_t s = h.source.n_generators();
  const IntMatrix& rel = h.target.relation_matrix();
  IntMatrix block(h.target.n_generators(), s + rel.cols());
  for (std::size_t i = 0; i < h.target.n_generators(); ++i) {
    for (std::size_t j = 0; j < s; ++j) block.at(i, j) = h.matrix.at(i, j);
    for (std::size_t j = 0; j < rel.cols(); ++j) block.at(i, s + j) = rel.at(i, j);
  }
  IntMatrix ker = integer_kernel(block);
  IntMatrix proj(s, ker.cols());
  for (std::size_t i = 0; i < s; ++i)
    for (std::size_t j = 0; j < ker.cols(); ++j) proj.at(i, j) = ker.at(i, j);
  Sublattice out;
  out.ambient_rank = s;
  out.basis = column_hermite_form(proj);
  return out;
}

// |Hom(G, F_q^x)| = (q-1)^rank * prod gcd(d_i, q-1).
inline Int dual_group_order(const FgAbelianGroup& g, const Int& q) {
  if (q < 2) fail(errc::invalid_input, "q must be at least 2");
  Int out = 1;
  Int units = q - 1;
  for (std::size_t i = 0; i < g.rank(); ++i) out *= units;
  for (const Int& d : g.invariant_factors()) out *= gcd(d, units);
  return out;
}

}  // namespace stacky
