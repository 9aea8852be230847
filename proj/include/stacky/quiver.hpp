#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "stacky/glps.hpp"

namespace stacky {

struct Arrow {
  int tail = 0;
  int head = 0;
  Monomial label;  // monomial in the Cox variables, degree = deg(head) - deg(tail)
};

// Quiver of sections on a list of line-bundle classes; index 0 is the
// distinguished class 0.
struct Quiver {
  std::vector<GroupElement> vertices;  // classes in L
  std::vector<Arrow> arrows;

  std::size_t n_vertices() const { return vertices.size(); }
  std::size_t n_arrows() const { return arrows.size(); }
};

// A path stored as its arrow-id sequence in composition order; the empty
// sequence is the lazy path at `tail`.
struct Path {
  int tail = 0;
  std::vector<int> arrows;

  bool operator==(const Path& o) const { return tail == o.tail && arrows == o.arrows; }
  bool operator<(const Path& o) const {
    return arrows != o.arrows ? arrows < o.arrows : tail < o.tail;
  }
};

inline int path_head(const Quiver& q, const Path& p) {
  return p.arrows.empty() ? p.tail : q.arrows[static_cast<std::size_t>(p.arrows.back())].head;
}

inline Monomial path_monomial(const Quiver& q, const Path& p, std::size_t cox_nvars) {
  Monomial m = monomial_one(cox_nvars);
  for (int a : p.arrows) m = m * q.arrows[static_cast<std::size_t>(a)].label;
  return m;
}

// Homogeneous linear combination of parallel paths with exact coefficients.
using PathRelation = std::vector<std::pair<Rat, Path>>;

struct VertexPair {
  int i = 0, j = 0;
  bool operator<(const VertexPair& o) const { return i != o.i ? i < o.i : j < o.j; }
  bool operator==(const VertexPair& o) const { return i == o.i && j == o.j; }
};

// Paths whose images form a basis of the graded component R_{deg j - deg i},
// one list per ordered vertex pair.
using PeirceBasis = std::map<VertexPair, std::vector<Path>>;

struct PathAlgebra {
  Quiver quiver;
  std::vector<PathRelation> relations;
};

struct QuiverAlgebra {
  PathAlgebra algebra;
  PeirceBasis peirce;

  const Quiver& quiver() const { return algebra.quiver; }
};

namespace detail {

inline bool try_insert_independent(std::vector<std::vector<Rat>>& rows,
                                   std::vector<std::size_t>& pivots, std::vector<Rat> v) {
  std::size_t before = rows.size();
  rref_insert(rows, pivots, std::move(v));
  return rows.size() > before;
}

// Solve sum_r x_r columns[r] = target over Q; the target is known to lie in
// the span of the (independent) columns.
inline std::vector<Rat> solve_in_span(const std::vector<std::vector<Rat>>& columns,
                                      const std::vector<Rat>& target) {
  const std::size_t m = target.size(), n = columns.size();
  std::vector<std::vector<Rat>> aug(m, std::vector<Rat>(n + 1, Rat(0)));
  for (std::size_t c = 0; c < n; ++c)
    for (std::size_t r = 0; r < m; ++r) aug[r][c] = columns[c][r];
  for (std::size_t r = 0; r < m; ++r) aug[r][n] = target[r];
  std::vector<std::size_t> pivot_row(n, m);
  std::size_t row = 0;
  for (std::size_t c = 0; c < n && row < m; ++c) {
    std::size_t p = row;
    while (p < m && aug[p][c] == 0) ++p;
    if (p == m) continue;
    std::swap(aug[p], aug[row]);
    for (std::size_t r = 0; r < m; ++r) {
      if (r == row || aug[r][c] == 0) continue;
      Rat f = aug[r][c] / aug[row][c];
      for (std::size_t t = c; t <= n; ++t) aug[r][t] -= f * aug[row][t];
    }
    pivot_row[c] = row;
    ++row;
  }
  std::vector<Rat> x(n, Rat(0));
  for (std::size_t c = 0; c < n; ++c)
    if (pivot_row[c] != m) x[c] = aug[pivot_row[c]][n] / aug[pivot_row[c]][c];
  return x;
}

}  // namespace detail

// For each ordered pair (i, j) the arrows form a monomial basis of the
// cokernel of  (+)_k R_{k-i} (x) R_{j-k} -> R_{j-i}  over the intermediate
// collection vertices k.  Single-variable monomials are preferred as labels,
// ties broken lexicographically; this reproduces the y_i arrows of GL data.
inline Quiver build_quiver_of_sections(const CoxData& cox, const std::vector<GroupElement>& classes,
                                       std::optional<long> cap = std::nullopt) {
  const GradedPresentation& R = cox.presentation;
  const FgAbelianGroup& L = R.grading();
  Quiver q;
  q.vertices = classes;
  const std::size_t nv = classes.size();
  for (std::size_t a = 0; a < nv; ++a)
    for (std::size_t b = 0; b < nv; ++b)
      if (a != b && element_equal(classes[a], classes[b], L))
        fail(errc::invalid_input, "vertex classes must be pairwise distinct in L");
  bool zero_first = nv > 0 && L.is_zero(classes[0]);
  if (!zero_first) fail(errc::invalid_input, "the class 0 must be the first vertex");

  // Hilbert values between all pairs, reused for the intermediate scan.
  std::vector<std::vector<DegreeSlice>> slices(nv, std::vector<DegreeSlice>(nv));
  for (std::size_t i = 0; i < nv; ++i)
    for (std::size_t j = 0; j < nv; ++j)
      if (i != j) slices[i][j] = compute_degree_slice(R, classes[j] - classes[i], cap);

  for (std::size_t i = 0; i < nv; ++i) {
    for (std::size_t j = 0; j < nv; ++j) {
      if (i == j) continue;
      const DegreeSlice& slice = slices[i][j];
      if (slice.basis.empty()) continue;
      std::vector<std::vector<Rat>> span;
      std::vector<std::size_t> pivots;
      for (std::size_t k = 0; k < nv; ++k) {
        if (k == i || k == j) continue;
        const DegreeSlice& left = slices[i][k];
        const DegreeSlice& right = slices[k][j];
        if (left.basis.empty() || right.basis.empty()) continue;
        for (std::size_t bu : left.basis)
          for (std::size_t bw : right.basis) {
            Monomial prod = left.monomials[bu] * right.monomials[bw];
            detail::try_insert_independent(span, pivots, slice.reduce_monomial(prod));
          }
      }
      // candidate labels: single variables first, then all slice monomials
      std::vector<Monomial> candidates;
      for (const Monomial& m : slice.monomials) {
        int total = 0;
        for (int e : m) total += e;
        if (total == 1) candidates.push_back(m);
      }
      for (const Monomial& m : slice.monomials) candidates.push_back(m);
      for (const Monomial& m : candidates) {
        if (span.size() == slice.basis.size()) break;
        if (detail::try_insert_independent(span, pivots, slice.reduce_monomial(m)))
          q.arrows.push_back({static_cast<int>(i), static_cast<int>(j), m});
      }
      if (span.size() != slice.basis.size())
        fail(errc::basis_mismatch, "cokernel completion failed");
    }
  }
  std::sort(q.arrows.begin(), q.arrows.end(), [](const Arrow& a, const Arrow& b) {
    if (a.tail != b.tail) return a.tail < b.tail;
    if (a.head != b.head) return a.head < b.head;
    return a.label < b.label;
  });
  return q;
}

inline bool quiver_is_acyclic(const Quiver& q, std::vector<int>* topo_order = nullptr) {
  const std::size_t n = q.n_vertices();
  std::vector<int> indeg(n, 0);
  for (const Arrow& a : q.arrows) ++indeg[static_cast<std::size_t>(a.head)];
  std::vector<int> queue;
  for (std::size_t v = 0; v < n; ++v)
    if (indeg[v] == 0) queue.push_back(static_cast<int>(v));
  std::size_t seen = 0;
  while (!queue.empty()) {
    int v = queue.back();
    queue.pop_back();
    ++seen;
    if (topo_order) topo_order->push_back(v);
    for (const Arrow& a : q.arrows)
      if (a.tail == v && --indeg[static_cast<std::size_t>(a.head)] == 0)
        queue.push_back(a.head);
  }
  return seen == n;
}

// All paths i -> j in ascending lex order on arrow-id sequences.
inline std::vector<Path> enumerate_paths(const Quiver& q, int i, int j, std::size_t budget) {
  if (!quiver_is_acyclic(q)) fail(errc::path_explosion, "quiver has directed cycles");
  std::vector<Path> out;
  if (i == j) {
    out.push_back({i, {}});
    return out;
  }
  std::vector<int> stack;
  std::function<void(int)> dfs = [&](int at) {
    if (at == j) {
      out.push_back({i, stack});
      if (out.size() > budget) fail(errc::path_explosion, "path count exceeds the budget");
      return;  // acyclic: nothing returns to j
    }
    for (std::size_t a = 0; a < q.n_arrows(); ++a) {
      if (q.arrows[a].tail != at) continue;
      stack.push_back(static_cast<int>(a));
      dfs(q.arrows[a].head);
      stack.pop_back();
    }
  };
  dfs(i);
  return out;
}

// Relations of kQ -> End(T): per pair, the kernel of the path -> monomial map
// computed by exact elimination in the graded slice.  Paths are processed in
// lex order; pivot paths become the Peirce basis and every dependent path
// yields one reduced-echelon relation  path - sum(coeff * pivot path).
inline QuiverAlgebra compute_relations(const Quiver& q, const CoxData& cox,
                                       std::size_t path_budget = 100000,
                                       std::optional<long> cap = std::nullopt) {
  const GradedPresentation& R = cox.presentation;
  QuiverAlgebra out;
  out.algebra.quiver = q;
  const std::size_t nv = q.n_vertices();
  for (std::size_t i = 0; i < nv; ++i) {
    for (std::size_t j = 0; j < nv; ++j) {
      if (i == j) {
        out.peirce[{static_cast<int>(i), static_cast<int>(j)}] = {Path{static_cast<int>(i), {}}};
        continue;
      }
      DegreeSlice slice = compute_degree_slice(R, q.vertices[j] - q.vertices[i], cap);
      if (slice.basis.empty()) continue;
      std::vector<Path> paths = enumerate_paths(q, static_cast<int>(i), static_cast<int>(j), path_budget);
      if (paths.empty()) continue;
      std::vector<Path> pivot_paths;
      std::vector<std::vector<Rat>> rows;        // echelon span of pivot classes
      std::vector<std::size_t> pivot_cols;
      std::vector<std::vector<Rat>> pivot_raw;   // raw classes of the pivot paths
      for (const Path& p : paths) {
        std::vector<Rat> cls = slice.reduce_monomial(path_monomial(q, p, R.nvars()));
        if (detail::try_insert_independent(rows, pivot_cols, cls)) {
          pivot_paths.push_back(p);
          pivot_raw.push_back(cls);
        } else {
          std::vector<Rat> x = detail::solve_in_span(pivot_raw, cls);
          PathRelation rel;
          rel.emplace_back(Rat(1), p);
          for (std::size_t r = 0; r < pivot_paths.size(); ++r)
            if (x[r] != 0) rel.emplace_back(-x[r], pivot_paths[r]);
          out.algebra.relations.push_back(std::move(rel));
        }
      }
      if (pivot_paths.size() != slice.basis.size())
        fail(errc::basis_mismatch, "paths do not span the graded component");
      out.peirce[{static_cast<int>(i), static_cast<int>(j)}] = std::move(pivot_paths);
    }
  }
  return out;
}

// Check a path relation maps to zero under path -> Cox monomial.
inline bool relation_is_sound(const Quiver& q, const CoxData& cox, const PathRelation& rel,
                              std::optional<long> cap = std::nullopt) {
  if (rel.empty()) return true;
  const GradedPresentation& R = cox.presentation;
  int i = rel.front().second.tail;
  int j = path_head(q, rel.front().second);
  DegreeSlice slice = compute_degree_slice(R, q.vertices[static_cast<std::size_t>(j)] -
                                                  q.vertices[static_cast<std::size_t>(i)], cap);
  std::vector<Rat> acc(slice.basis.size(), Rat(0));
  for (const auto& [c, p] : rel) {
    std::vector<Rat> cls = slice.reduce_monomial(path_monomial(q, p, R.nvars()));
    for (std::size_t t = 0; t < acc.size(); ++t) acc[t] += c * cls[t];
  }
  for (const Rat& x : acc)
    if (x != 0) return false;
  return true;
}

// The canonical identification of matching Peirce components: both are the
// same graded component of R, so basis paths match through their raw Cox
// monomials.
inline std::vector<std::pair<Path, Path>> gamma_iso(const QuiverAlgebra& qa,
                                                    const Sublattice& lambda_r, int i, int j, int k,
                                                    int l, std::size_t cox_nvars) {
  const Quiver& q = qa.quiver();
  GroupElement kappa(lambda_r.ambient_rank);
  auto bump = [&](int v, long s) {
    if (v != 0) kappa[static_cast<std::size_t>(v - 1)] += s;
  };
  bump(i, 1);
  bump(l, 1);
  bump(j, -1);
  bump(k, -1);
  if (!lambda_r.contains(kappa))
    fail(errc::not_in_lambda_r, "(chi_i + chi_l) - (chi_j + chi_k) is not in Lambda_r");
  auto it_src = qa.peirce.find({i, j});
  auto it_dst = qa.peirce.find({k, l});
  std::vector<std::pair<Path, Path>> out;
  if (it_src == qa.peirce.end()) return out;
  if (it_dst == qa.peirce.end()) fail(errc::basis_mismatch, "matched component is empty");
  for (const Path& p : it_src->second) {
    Monomial m = path_monomial(q, p, cox_nvars);
    const Path* match = nullptr;
    for (const Path& cand : it_dst->second)
      if (path_monomial(q, cand, cox_nvars) == m) match = &cand;
    if (!match) fail(errc::basis_mismatch, "no matching basis path with the same monomial");
    out.emplace_back(p, *match);
  }
  return out;
}

inline std::string path_str(const Quiver& q, const Path& p) {
  if (p.arrows.empty()) return "e" + std::to_string(p.tail);
  std::string s;
  for (std::size_t t = 0; t < p.arrows.size(); ++t) {
    if (t) s += "*";
    s += "a" + std::to_string(p.arrows[t]);
  }
  return s;
}

}  // namespace stacky
