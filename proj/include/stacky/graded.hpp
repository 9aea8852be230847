#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "stacky/abelian.hpp"
#include "stacky/poly.hpp"

namespace stacky {

// Multivariate polynomial ring over an exact field, graded by a finitely
// generated abelian group, with homogeneous relations.  Structural algebra
// (graded components, Hilbert values) is done over Q; finite fields only
// enter through point enumeration.
class GradedPresentation {
 public:
  GradedPresentation() = default;

  GradedPresentation(std::vector<std::string> var_names, std::vector<GroupElement> var_degrees,
                     std::vector<Poly> relations, FgAbelianGroup grading)
      : names_(std::move(var_names)),
        degrees_(std::move(var_degrees)),
        relations_(std::move(relations)),
        grading_(std::move(grading)) {
    if (names_.size() != degrees_.size())
      fail(errc::dimension_mismatch, "one degree per variable required");
    for (const auto& d : degrees_) grading_.check_dim(d);
    for (const auto& r : relations_) {
      if (r.nvars() != names_.size()) fail(errc::dimension_mismatch, "relation arity");
      if (!is_homogeneous(r)) fail(errc::non_homogeneous, "relation is not graded-homogeneous");
    }
  }

  std::size_t nvars() const { return names_.size(); }
  const std::vector<std::string>& var_names() const { return names_; }
  const std::vector<GroupElement>& var_degrees() const { return degrees_; }
  const std::vector<Poly>& relations() const { return relations_; }
  const FgAbelianGroup& grading() const { return grading_; }

  GroupElement monomial_degree(const Monomial& m) const {
    if (m.size() != nvars()) fail(errc::dimension_mismatch, "monomial arity");
    GroupElement d = group_zero(grading_.n_generators());
    for (std::size_t v = 0; v < m.size(); ++v)
      if (m[v] != 0) d = d + Int(m[v]) * degrees_[v];
    return d;
  }

  bool is_homogeneous(const Poly& f) const {
    if (f.is_zero()) return true;
    std::optional<GroupElement> deg;
    for (const auto& [m, c] : f.terms()) {
      GroupElement d = grading_.canonical_form(monomial_degree(m));
      if (!deg)
        deg = d;
      else if (*deg != d)
        return false;
    }
    return true;
  }

  std::optional<GroupElement> degree_of(const Poly& f) const {
    if (f.is_zero()) return std::nullopt;
    return monomial_degree(f.terms().begin()->first);
  }

 private:
  std::vector<std::string> names_;
  std::vector<GroupElement> degrees_;
  std::vector<Poly> relations_;
  FgAbelianGroup grading_;
};

namespace detail {

// Canonical-linear coordinates (U * v) of a degree; torsion positions are
// compared modulo the invariant factors only at the end so partial sums stay
// linear during enumeration.
inline bool canon_coords_match(const FgAbelianGroup& g, const std::vector<Int>& sum,
                               const std::vector<Int>& target) {
  const auto& f = g.invariant_factors();
  for (std::size_t i = 0; i < sum.size(); ++i) {
    if (i < f.size()) {
      if ((sum[i] - target[i]) % f[i] != 0) return false;
    } else {
      if (sum[i] != target[i]) return false;
    }
  }
  return true;
}

}  // namespace detail

// All exponent vectors e >= 0 with sum_v e_v deg(v) = d in the grading group,
// each exponent bounded by the cap, in ascending lexicographic order.  For a
// rank-1 grading whose variable degrees all sit on one side of zero the cap
// may be omitted: the free coordinate of d bounds every exponent.
inline std::vector<Monomial> monomials_of_degree(const GradedPresentation& p, const GroupElement& d,
                                                 std::optional<long> exponent_cap = std::nullopt) {
  const FgAbelianGroup& g = p.grading();
  const std::size_t nv = p.nvars();
  const std::size_t k = g.invariant_factors().size();

  std::vector<std::vector<Int>> canon(nv);
  for (std::size_t v = 0; v < nv; ++v) canon[v] = g.smith().U.apply(p.var_degrees()[v].v);
  std::vector<Int> target = g.smith().U.apply(d.v);

  // Per-variable exponent bounds.
  std::vector<long> bound(nv, 0);
  const bool rank1 = g.rank() == 1;
  long sign = 0;  // common sign of free degrees in the rank-1 case
  if (rank1) {
    std::size_t free_ix = g.n_generators() - 1;  // single free coordinate sits past the factors
    bool all_pos = true, all_neg = true;
    for (std::size_t v = 0; v < nv; ++v) {
      if (canon[v][free_ix] <= 0) all_pos = false;
      if (canon[v][free_ix] >= 0) all_neg = false;
    }
    if (all_pos || all_neg) sign = all_pos ? 1 : -1;
    if (sign != 0) {
      Int tfree = sign * target[free_ix];
      if (tfree < 0) return {};
      for (std::size_t v = 0; v < nv; ++v) {
        Int b = tfree / (sign * canon[v][free_ix]);
        bound[v] = static_cast<long>(b);
        if (exponent_cap && *exponent_cap < bound[v]) bound[v] = *exponent_cap;
      }
    }
  }
  if ((!rank1 || sign == 0)) {
    if (!exponent_cap)
      fail(errc::missing_exponent_cap,
           "grading has no one-sided rank-1 free part; supply an exponent cap");
    for (std::size_t v = 0; v < nv; ++v) bound[v] = *exponent_cap;
  }

  // Suffix sign summaries for pruning on free coordinates.
  const std::size_t ncoord = g.n_generators();
  std::vector<std::vector<int>> suffix_sign(nv + 1, std::vector<int>(ncoord, 0));
  // 0: all remaining zero, +1: all >= 0, -1: all <= 0, 2: mixed
  for (std::size_t c = k; c < ncoord; ++c) {
    for (std::size_t v = nv; v-- > 0;) {
      int s = suffix_sign[v + 1][c];
      const Int& x = canon[v][c];
      int xs = x == 0 ? 0 : (x > 0 ? 1 : -1);
      if (xs == 0)
        suffix_sign[v][c] = s;
      else if (s == 0 || s == xs)
        suffix_sign[v][c] = xs;
      else
        suffix_sign[v][c] = 2;
    }
  }

  std::vector<Monomial> out;
  Monomial e(nv, 0);
  std::vector<Int> sum(ncoord, Int(0));
  std::function<void(std::size_t)> rec = [&](std::size_t v) {
    // prune on free coordinates where the remaining variables cannot move
    for (std::size_t c = k; c < ncoord; ++c) {
      Int rem = target[c] - sum[c];
      int s = suffix_sign[v][c];
      if (s == 0 && rem != 0) return;
      if (s == 1 && rem < 0) return;
      if (s == -1 && rem > 0) return;
    }
    if (v == nv) {
      if (detail::canon_coords_match(g, sum, target)) out.push_back(e);
      return;
    }
    for (long x = 0; x <= bound[v]; ++x) {
      e[v] = x;
      rec(v + 1);
      for (std::size_t c = 0; c < ncoord; ++c) sum[c] += canon[v][c];
    }
    for (std::size_t c = 0; c < ncoord; ++c) sum[c] -= Int(bound[v] + 1) * canon[v][c];
    e[v] = 0;
  };
  rec(0);
  std::sort(out.begin(), out.end());
  return out;
}

// Exact row-echelon data for the degree-d slice of the relation ideal,
// expressed on the monomial coordinates of that degree.
struct DegreeSlice {
  std::vector<Monomial> monomials;           // ascending lex
  std::vector<std::vector<Rat>> rref;        // reduced rows of the ideal slice
  std::vector<std::size_t> pivot_cols;       // one per rref row
  std::vector<std::size_t> basis;            // non-pivot monomial indices

  std::size_t index_of(const Monomial& m) const {
    auto it = std::lower_bound(monomials.begin(), monomials.end(), m);
    if (it == monomials.end() || *it != m) fail(errc::invalid_input, "monomial outside slice");
    return static_cast<std::size_t>(it - monomials.begin());
  }

  // Class of a coefficient vector in the quotient, on the basis monomials.
  std::vector<Rat> reduce(std::vector<Rat> v) const {
    for (std::size_t r = 0; r < rref.size(); ++r) {
      const Rat& x = v[pivot_cols[r]];
      if (x == 0) continue;
      Rat c = x;
      for (std::size_t j = 0; j < v.size(); ++j) v[j] -= c * rref[r][j];
    }
    std::vector<Rat> out(basis.size());
    for (std::size_t b = 0; b < basis.size(); ++b) out[b] = v[basis[b]];
    return out;
  }

  std::vector<Rat> reduce_monomial(const Monomial& m) const {
    std::vector<Rat> v(monomials.size(), Rat(0));
    v[index_of(m)] = 1;
    return reduce(std::move(v));
  }
};

namespace detail {

inline void rref_insert(std::vector<std::vector<Rat>>& rows, std::vector<std::size_t>& pivots,
                        std::vector<Rat> v) {
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const Rat& x = v[pivots[r]];
    if (x == 0) continue;
    Rat c = x;
    for (std::size_t j = 0; j < v.size(); ++j) v[j] -= c * rows[r][j];
  }
  std::size_t p = 0;
  while (p < v.size() && v[p] == 0) ++p;
  if (p == v.size()) return;
  Rat lead = v[p];
  for (auto& x : v) x /= lead;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const Rat& x = rows[r][p];
    if (x == 0) continue;
    Rat c = x;
    for (std::size_t j = 0; j < v.size(); ++j) rows[r][j] -= c * v[j];
  }
  // keep rows ordered by pivot column
  std::size_t pos = 0;
  while (pos < pivots.size() && pivots[pos] < p) ++pos;
  rows.insert(rows.begin() + static_cast<long>(pos), std::move(v));
  pivots.insert(pivots.begin() + static_cast<long>(pos), p);
}

}  // namespace detail

inline DegreeSlice compute_degree_slice(const GradedPresentation& p, const GroupElement& d,
                                        std::optional<long> exponent_cap = std::nullopt) {
  DegreeSlice slice;
  slice.monomials = monomials_of_degree(p, d, exponent_cap);
  const std::size_t n = slice.monomials.size();
  if (n == 0) return slice;
  for (const Poly& r : p.relations()) {
    if (r.is_zero()) continue;
    GroupElement delta = p.monomial_degree(r.terms().begin()->first);
    std::vector<Monomial> mult = monomials_of_degree(p, d - delta, exponent_cap);
    for (const Monomial& u : mult) {
      std::vector<Rat> row(n, Rat(0));
      bool in_slice = true;
      for (const auto& [m, c] : r.terms()) {
        Monomial prod = u * m;
        auto it = std::lower_bound(slice.monomials.begin(), slice.monomials.end(), prod);
        if (it == slice.monomials.end() || *it != prod) {
          // product escapes the capped slice; the supplied cap must dominate
          // the queried degrees for the slice to be exact
          in_slice = false;
          break;
        }
        row[static_cast<std::size_t>(it - slice.monomials.begin())] =
            c.is_rational() ? c.rat() : Rat(c.residue());
      }
      if (in_slice) detail::rref_insert(slice.rref, slice.pivot_cols, std::move(row));
    }
  }
  std::vector<bool> is_pivot(n, false);
  for (std::size_t p_ : slice.pivot_cols) is_pivot[p_] = true;
  for (std::size_t j = 0; j < n; ++j)
    if (!is_pivot[j]) slice.basis.push_back(j);
  return slice;
}

inline std::vector<Monomial> graded_component_basis(const GradedPresentation& p, const GroupElement& d,
                                                    std::optional<long> exponent_cap = std::nullopt) {
  DegreeSlice s = compute_degree_slice(p, d, exponent_cap);
  std::vector<Monomial> out;
  for (std::size_t b : s.basis) out.push_back(s.monomials[b]);
  return out;
}

inline std::size_t hilbert_value(const GradedPresentation& p, const GroupElement& d,
                                 std::optional<long> exponent_cap = std::nullopt) {
  return compute_degree_slice(p, d, exponent_cap).basis.size();
}

// ---- point enumeration over F_q ------------------------------------------

using Point = std::vector<std::int64_t>;

inline Int pow_int(Int base, std::size_t e) {
  Int out = 1;
  for (std::size_t i = 0; i < e; ++i) out *= base;
  return out;
}

// Compiled relation set for the mod-q fast path.
struct ModRelations {
  std::int64_t q = 0;
  struct Term {
    std::int64_t coeff;
    Monomial expo;
  };
  std::vector<std::vector<Term>> relations;

  bool vanish_at(const Point& pt) const {
    for (const auto& rel : relations) {
      std::int64_t acc = 0;
      for (const auto& t : rel) {
        std::int64_t val = t.coeff;
        for (std::size_t v = 0; v < t.expo.size(); ++v)
          for (int e = 0; e < t.expo[v]; ++e) val = val * pt[v] % q;
        acc = (acc + val) % q;
      }
      if (acc % q != 0) return false;
    }
    return true;
  }
};

inline ModRelations compile_mod_relations(const GradedPresentation& p, std::int64_t q) {
  ModRelations out;
  out.q = q;
  for (const Poly& r : p.relations()) {
    Poly rq = r.over_field(q);
    std::vector<ModRelations::Term> terms;
    for (const auto& [m, c] : rq.terms()) terms.push_back({c.residue(), m});
    out.relations.push_back(std::move(terms));
  }
  return out;
}

inline Point decode_point(Int index, std::size_t nvars, std::int64_t q) {
  Point pt(nvars);
  for (std::size_t v = nvars; v-- > 0;) {
    pt[v] = static_cast<std::int64_t>(index % q);
    index /= q;
  }
  return pt;
}

// All assignments variables -> F_q on which every relation vanishes, scanned
// over the index range [lo, hi).  Disjoint ranges concatenate to the full
// enumeration, which is the partitioning contract used by the verifier.
inline std::vector<Point> enumerate_points_range(const GradedPresentation& p, std::int64_t q,
                                                 const Int& lo, const Int& hi) {
  ModRelations rels = compile_mod_relations(p, q);
  std::vector<Point> out;
  for (Int i = lo; i < hi; ++i) {
    Point pt = decode_point(i, p.nvars(), q);
    if (rels.vanish_at(pt)) out.push_back(std::move(pt));
  }
  return out;
}

inline std::vector<Point> enumerate_points(const GradedPresentation& p, std::int64_t q,
                                           const Int& budget) {
  if (!is_prime_u64(q)) fail(errc::invalid_input, "q must be prime");
  Int total = pow_int(Int(q), p.nvars());
  if (total > budget) fail(errc::budget_exceeded, "q^nvars exceeds the enumeration budget");
  return enumerate_points_range(p, q, 0, total);
}

inline FieldScalar evaluate(const Poly& f, const std::vector<FieldScalar>& point) {
  for (const auto& [m, c] : f.terms())
    for (const auto& x : point)
      if (x.prime() != c.prime()) fail(errc::field_mismatch, "point field differs from coefficient field");
  return f.evaluate(point);
}

}  // namespace stacky
