#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "stacky/graded.hpp"

namespace stacky {

namespace detail {

// Solve A x = b over Q; A square nonsingular.
inline std::vector<Rat> solve_rational(std::vector<std::vector<Rat>> a, std::vector<Rat> b) {
  const std::size_t n = a.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && a[p][c] == 0) ++p;
    if (p == n) fail(errc::invalid_input, "singular linear system");
    std::swap(a[p], a[c]);
    std::swap(b[p], b[c]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c || a[r][c] == 0) continue;
      Rat f = a[r][c] / a[c][c];
      for (std::size_t j = c; j < n; ++j) a[r][j] -= f * a[c][j];
      b[r] -= f * b[c];
    }
  }
  std::vector<Rat> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = b[i] / a[i][i];
  return x;
}

}  // namespace detail

// Input data of a Geigle-Lenzing projective space: dimension d, weights p_i
// and linear forms l_i in t_0..t_d over Q.
struct GLData {
  int d = 0;
  std::vector<long> weights;
  std::vector<Poly> forms;  // in d+1 variables t_0..t_d

  std::size_t nforms() const { return forms.size(); }
};

struct GeneralPositionResult {
  bool ok = true;
  std::vector<std::size_t> witness;  // offending subset when not ok
};

inline void check_linear_forms(const GLData& g) {
  for (const Poly& f : g.forms) {
    if (f.is_zero()) fail(errc::non_linear_form, "zero form");
    if (f.nvars() != static_cast<std::size_t>(g.d) + 1)
      fail(errc::dimension_mismatch, "form arity must be d+1");
    for (const auto& [m, c] : f.terms()) {
      int total = 0;
      for (int e : m) total += e;
      if (total != 1) fail(errc::non_linear_form, "forms must be homogeneous linear");
    }
  }
}

inline std::vector<Rat> form_coeffs(const Poly& f, std::size_t nvars) {
  std::vector<Rat> c(nvars, Rat(0));
  for (const auto& [m, k] : f.terms())
    for (std::size_t v = 0; v < nvars; ++v)
      if (m[v] == 1) c[v] = k.rat();
  return c;
}

inline std::size_t rat_rank(std::vector<std::vector<Rat>> rows) {
  std::size_t rank = 0;
  const std::size_t nc = rows.empty() ? 0 : rows[0].size();
  for (std::size_t c = 0; c < nc && rank < rows.size(); ++c) {
    std::size_t p = rank;
    while (p < rows.size() && rows[p][c] == 0) ++p;
    if (p == rows.size()) continue;
    std::swap(rows[p], rows[rank]);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (r == rank || rows[r][c] == 0) continue;
      Rat f = rows[r][c] / rows[rank][c];
      for (std::size_t j = c; j < nc; ++j) rows[r][j] -= f * rows[rank][j];
    }
    ++rank;
  }
  return rank;
}

// Every subset of at most d+1 forms must be linearly independent.
inline GeneralPositionResult validate_general_position(const GLData& g) {
  check_linear_forms(g);
  const std::size_t n = g.nforms(), nv = static_cast<std::size_t>(g.d) + 1;
  const std::size_t max_size = std::min(n, nv);
  std::vector<std::size_t> subset;
  GeneralPositionResult res;
  std::function<bool(std::size_t, std::size_t)> scan = [&](std::size_t start, std::size_t size) {
    if (subset.size() == size) {
      std::vector<std::vector<Rat>> rows;
      for (std::size_t i : subset) rows.push_back(form_coeffs(g.forms[i], nv));
      if (rat_rank(rows) != size) {
        res.ok = false;
        res.witness = subset;
        return true;
      }
      return false;
    }
    for (std::size_t i = start; i < n; ++i) {
      subset.push_back(i);
      if (scan(i + 1, size)) return true;
      subset.pop_back();
    }
    return false;
  };
  for (std::size_t size = 1; size <= max_size; ++size) {
    subset.clear();
    if (scan(0, size)) break;
  }
  return res;
}

// Adjoin weight-1 coordinate forms until n >= d, choosing for each new slot
// the first t_i that is not already a form and keeps general position.
inline GLData normalize(const GLData& g) {
  check_linear_forms(g);
  GLData out = g;
  const std::size_t nv = static_cast<std::size_t>(g.d) + 1;
  while (out.nforms() < nv) {
    bool placed = false;
    for (std::size_t i = 0; i < nv && !placed; ++i) {
      Poly ti = Poly::variable(nv, i);
      bool already = false;
      for (const Poly& f : out.forms)
        if (f == ti) already = true;
      if (already) continue;
      GLData trial = out;
      trial.forms.push_back(ti);
      trial.weights.push_back(1);
      if (validate_general_position(trial).ok) {
        out = std::move(trial);
        placed = true;
      }
    }
    if (!placed) fail(errc::general_position_violated, "cannot adjoin a coordinate form");
  }
  return out;
}

// Cox data: the ring R presented on the y-variables alone, its grading group
// L, the class of c, and the hard-coded irrelevant locus V(B) = {0}.
struct CoxData {
  GradedPresentation presentation;
  std::vector<GroupElement> generator_classes;
  GroupElement c_class;  // valid iff has_c
  bool has_c = false;
  std::vector<long> weights;  // normalized weights (GL inputs only)
  int d = 0;

  const FgAbelianGroup& picard() const { return presentation.grading(); }
};

// R = k[y_0..y_n] / (n-d homogeneous relations expressing y_j^{p_j}, j > d,
// in y_0^{p_0}..y_d^{p_d}), graded by L = Z^{n+1} + Zc / <p_i y_i - c>.
inline CoxData build_cox_data(const GLData& input) {
  GLData g = normalize(input);
  GeneralPositionResult gp = validate_general_position(g);
  if (!gp.ok) fail(errc::general_position_violated, "forms are not in general position");
  const std::size_t n1 = g.nforms();              // n + 1 variables y_i
  const std::size_t nv = static_cast<std::size_t>(g.d) + 1;  // t variables

  // L on generators y_0..y_n, c.
  IntMatrix rel(n1 + 1, n1);
  for (std::size_t i = 0; i < n1; ++i) {
    rel.at(i, i) = g.weights[i];
    rel.at(n1, i) = -1;
  }
  FgAbelianGroup L(n1 + 1, rel);

  std::vector<GroupElement> degs(n1);
  for (std::size_t i = 0; i < n1; ++i) {
    degs[i] = group_zero(n1 + 1);
    degs[i][i] = 1;
  }
  GroupElement c = group_zero(n1 + 1);
  c[n1] = 1;

  // Change coordinates so the first d+1 forms become t_0..t_d, then express
  // each later form in that basis: y_j^{p_j} = sum_i x_i y_i^{p_i}.
  std::vector<std::vector<Rat>> basis_cols(nv, std::vector<Rat>(nv));
  for (std::size_t i = 0; i < nv; ++i) {
    std::vector<Rat> ci = form_coeffs(g.forms[i], nv);
    for (std::size_t r = 0; r < nv; ++r) basis_cols[r][i] = ci[r];
  }
  std::vector<Poly> relations;
  for (std::size_t j = nv; j < n1; ++j) {
    std::vector<Rat> x = detail::solve_rational(basis_cols, form_coeffs(g.forms[j], nv));
    Poly r(n1);
    r.add_term(monomial_var(n1, j, static_cast<int>(g.weights[j])), FieldScalar::rational(1));
    for (std::size_t i = 0; i < nv; ++i)
      r.add_term(monomial_var(n1, i, static_cast<int>(g.weights[i])), FieldScalar::rational(-x[i]));
    relations.push_back(std::move(r));
  }

  std::vector<std::string> names(n1);
  for (std::size_t i = 0; i < n1; ++i) names[i] = "y" + std::to_string(i);

  CoxData out;
  out.presentation = GradedPresentation(std::move(names), degs, std::move(relations), L);
  out.generator_classes = std::move(degs);
  out.c_class = std::move(c);
  out.has_c = true;
  out.weights = g.weights;
  out.d = g.d;
  return out;
}

// y <= z iff the graded component R_{z-y} is nonzero.
inline bool leq(const CoxData& cox, const GroupElement& y, const GroupElement& z,
                std::optional<long> cap = std::nullopt) {
  return hilbert_value(cox.presentation, z - y, cap) > 0;
}

// All classes t with 0 <= t <= d*c under the effectivity order, found through
// the normal form t = sum a_i y_i + m c with 0 <= a_i < p_i, 0 <= m <= d.
// Ordered by compact canonical coordinates (free part, then torsion).
inline std::vector<GroupElement> tilting_interval(const CoxData& cox) {
  if (!cox.has_c) fail(errc::invalid_input, "tilting_interval needs GL Cox data");
  const FgAbelianGroup& L = cox.picard();
  GroupElement dc = Int(cox.d) * cox.c_class;
  std::map<GroupElement, GroupElement> seen;  // canonical -> raw representative
  std::vector<long> a(cox.weights.size(), 0);
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == a.size()) {
      for (int m = 0; m <= cox.d; ++m) {
        GroupElement raw = group_zero(L.n_generators());
        for (std::size_t v = 0; v < a.size(); ++v) raw = raw + Int(a[v]) * cox.generator_classes[v];
        raw = raw + Int(m) * cox.c_class;
        GroupElement canon = L.canonical_form(raw);
        if (seen.count(canon)) continue;
        if (leq(cox, group_zero(L.n_generators()), raw) && leq(cox, raw, dc)) seen.emplace(canon, raw);
      }
      return;
    }
    for (a[i] = 0; a[i] < cox.weights[i]; ++a[i]) rec(i + 1);
    a[i] = 0;
  };
  rec(0);
  std::vector<GroupElement> out;
  for (const auto& [canon, raw] : seen) out.push_back(raw);
  // The Smith transform fixes the free coordinate only up to sign; orient it
  // so that c sits on the positive side and the class 0 sorts first.
  Int csign = cox.picard().free_part(cox.c_class)[0] > 0 ? 1 : -1;
  auto key = [&](const GroupElement& v) {
    GroupElement k = L.compact_form(v);
    for (std::size_t i = 0; i < L.rank(); ++i) k[i] *= csign;
    return k;
  };
  std::sort(out.begin(), out.end(),
            [&](const GroupElement& x, const GroupElement& y) { return key(x) < key(y); });
  return out;
}

}  // namespace stacky
