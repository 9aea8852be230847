#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "stacky/quiver.hpp"

namespace stacky {

// Lambda_Q = Z^{Q_0 \ {0}} on the characters chi_i, the degree map
// f*: Lambda_Q -> Pic, and its kernel Lambda_r with a fixed Hermite basis.
struct QuiverLattices {
  FgAbelianGroup lambda_q;
  GroupHom f_star;
  Sublattice lambda_r;
  bool f_star_surjective = false;

  std::size_t chi_rank() const { return lambda_q.n_generators(); }

  // chi_j - chi_i as a Lambda_Q vector (chi_0 = 0).
  GroupElement chi_diff(int j, int i) const {
    GroupElement v(chi_rank());
    if (j != 0) v[static_cast<std::size_t>(j - 1)] += 1;
    if (i != 0) v[static_cast<std::size_t>(i - 1)] -= 1;
    return v;
  }

  GroupElement pair_kappa(int i, int j, int k, int l) const {
    return chi_diff(i, j) + chi_diff(l, k);
  }
};

inline QuiverLattices build_lattices(const Quiver& q, const CoxData& cox) {
  const FgAbelianGroup& L = cox.presentation.grading();
  const std::size_t n = q.n_vertices();
  IntMatrix m(L.n_generators(), n - 1);
  for (std::size_t j = 1; j < n; ++j)
    for (std::size_t i = 0; i < L.n_generators(); ++i) m.at(i, j - 1) = q.vertices[j][i];
  FgAbelianGroup lambda_q = FgAbelianGroup::free_group(n - 1);
  GroupHom f_star(lambda_q, L, m);
  Sublattice lambda_r = kernel_lattice(f_star);

  // f* is surjective iff [matrix | relators] spans Z^{gens} with trivial cokernel.
  const IntMatrix& rel = L.relation_matrix();
  IntMatrix block(L.n_generators(), m.cols() + rel.cols());
  for (std::size_t i = 0; i < L.n_generators(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) block.at(i, j) = m.at(i, j);
    for (std::size_t j = 0; j < rel.cols(); ++j) block.at(i, m.cols() + j) = rel.at(i, j);
  }
  SmithForm s = smith_normal_form(block);
  bool surj = s.invariant_factors.size() == L.n_generators();
  for (const Int& d : s.invariant_factors)
    if (d != 1) surj = false;

  return {std::move(lambda_q), std::move(f_star), std::move(lambda_r), surj};
}

// The coordinate ring S of the representation space: one variable per arrow,
// graded by Lambda_Q, relations = the path relations rewritten commutatively
// (dimension vector 1 makes parallel composition commutative).
struct SPresentation {
  GradedPresentation pres;                 // Lambda_Q-graded
  std::vector<GroupElement> pic_degrees;   // degree of each variable in L
};

inline Monomial path_to_s_monomial(const Path& p, std::size_t n_arrows) {
  Monomial m(n_arrows, 0);
  for (int a : p.arrows) ++m[static_cast<std::size_t>(a)];
  return m;
}

inline SPresentation build_s_presentation(const PathAlgebra& pa, const QuiverLattices& ql) {
  const Quiver& q = pa.quiver;
  const std::size_t na = q.n_arrows();
  std::vector<std::string> names(na);
  std::vector<GroupElement> degs(na);
  std::vector<GroupElement> pic(na);
  for (std::size_t a = 0; a < na; ++a) {
    names[a] = "a" + std::to_string(a);
    degs[a] = ql.chi_diff(q.arrows[a].head, q.arrows[a].tail);
    pic[a] = q.vertices[static_cast<std::size_t>(q.arrows[a].head)] -
             q.vertices[static_cast<std::size_t>(q.arrows[a].tail)];
  }
  std::vector<Poly> rels;
  for (const PathRelation& rel : pa.relations) {
    Poly f(na);
    for (const auto& [c, p] : rel) f.add_term(path_to_s_monomial(p, na), FieldScalar::rational(c));
    rels.push_back(std::move(f));
  }
  SPresentation out;
  out.pres = GradedPresentation(std::move(names), std::move(degs), std::move(rels), ql.lambda_q);
  out.pic_degrees = std::move(pic);
  return out;
}

// One commuting-square constraint of the refinement diagram: for the basis
// path `path` of e_i A e_j matched with the pair (k,l), the scalar reading is
// m_{gamma(path)} = g(kappa) * m_path with kappa = (chi_i+chi_l)-(chi_j+chi_k).
struct RefinementConstraint {
  Path path;
  int i = 0, j = 0, k = 0, l = 0;
  std::vector<Int> kappa_br;  // coordinates of kappa on the basis B_r
  Path gamma;
  bool trivial = false;  // (k,l) == (i,j)
};

inline std::vector<RefinementConstraint> diagram_constraints(const QuiverAlgebra& qa,
                                                             const QuiverLattices& ql,
                                                             std::size_t cox_nvars) {
  std::vector<RefinementConstraint> out;
  std::vector<VertexPair> pairs;
  for (const auto& [pr, basis] : qa.peirce)
    if (!basis.empty()) pairs.push_back(pr);
  for (const VertexPair& src : pairs) {
    for (const VertexPair& dst : pairs) {
      GroupElement kappa = ql.pair_kappa(src.i, src.j, dst.i, dst.j);
      auto coords = ql.lambda_r.coordinates(kappa);
      if (!coords) continue;
      bool kappa_zero = true;
      for (const Int& x : *coords)
        if (x != 0) kappa_zero = false;
      auto matching = gamma_iso(qa, ql.lambda_r, src.i, src.j, dst.i, dst.j, cox_nvars);
      for (const auto& [p, gp] : matching) {
        RefinementConstraint c;
        c.path = p;
        c.i = src.i;
        c.j = src.j;
        c.k = dst.i;
        c.l = dst.j;
        c.kappa_br = *coords;
        c.gamma = gp;
        c.trivial = kappa_zero;
        out.push_back(std::move(c));
      }
    }
  }
  return out;
}

// Generators y - gamma(y) of the de-indexing ideal, one per non-representative
// member of each gamma-matching orbit of Peirce basis paths.
inline std::vector<Poly> de_ideal_generators(const QuiverAlgebra& qa, const QuiverLattices& ql,
                                             std::size_t cox_nvars) {
  const std::size_t na = qa.quiver().n_arrows();
  // collect nodes (pair, path) and union-find over gamma matches
  struct Node {
    VertexPair pr;
    Path path;
  };
  std::vector<Node> nodes;
  std::map<std::pair<std::pair<int, int>, Path>, std::size_t> index;
  for (const auto& [pr, basis] : qa.peirce)
    for (const Path& p : basis) {
      index[{{pr.i, pr.j}, p}] = nodes.size();
      nodes.push_back({pr, p});
    }
  std::vector<std::size_t> parent(nodes.size());
  std::iota(parent.begin(), parent.end(), 0);
  std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  auto unite = [&](std::size_t a, std::size_t b) { parent[find(a)] = find(b); };

  std::vector<VertexPair> pairs;
  for (const auto& [pr, basis] : qa.peirce)
    if (!basis.empty()) pairs.push_back(pr);
  for (const VertexPair& src : pairs)
    for (const VertexPair& dst : pairs) {
      if (src == dst) continue;
      GroupElement kappa = ql.pair_kappa(src.i, src.j, dst.i, dst.j);
      auto coords = ql.lambda_r.coordinates(kappa);
      if (!coords) continue;
      bool kappa_zero = true;
      for (const Int& x : *coords)
        if (x != 0) kappa_zero = false;
      if (kappa_zero) continue;  // lazy-path identifications carry no relation
      for (const auto& [p, gp] : gamma_iso(qa, ql.lambda_r, src.i, src.j, dst.i, dst.j, cox_nvars))
        unite(index.at({{src.i, src.j}, p}), index.at({{dst.i, dst.j}, gp}));
    }

  std::map<std::size_t, std::vector<std::size_t>> orbits;
  for (std::size_t t = 0; t < nodes.size(); ++t) orbits[find(t)].push_back(t);
  std::vector<Poly> out;
  for (auto& [root, members] : orbits) {
    if (members.size() < 2) continue;
    std::sort(members.begin(), members.end(), [&](std::size_t a, std::size_t b) {
      const Node& x = nodes[a];
      const Node& y = nodes[b];
      if (!(x.pr == y.pr)) return x.pr < y.pr;
      return x.path < y.path;
    });
    Monomial rep = path_to_s_monomial(nodes[members[0]].path, na);
    for (std::size_t t = 1; t < members.size(); ++t) {
      Poly gen(na);
      gen.add_term(rep, FieldScalar::rational(1));
      gen.add_term(path_to_s_monomial(nodes[members[t]].path, na), FieldScalar::rational(-1));
      out.push_back(std::move(gen));
    }
  }
  return out;
}

// A point of the refined representation space: per-arrow scalars and a
// multiplicative character on Lambda_r given by its values on the basis B_r.
struct RefinedRep {
  std::int64_t prime = 0;  // 0 = rational
  std::vector<FieldScalar> m;
  std::vector<FieldScalar> g;

  FieldScalar one() const {
    return prime == 0 ? FieldScalar::rational(1) : FieldScalar::mod_p(1, prime);
  }

  FieldScalar g_of(const std::vector<Int>& kappa_br) const {
    FieldScalar acc = one();
    for (std::size_t b = 0; b < kappa_br.size(); ++b) acc = acc * g[b].pow(kappa_br[b]);
    return acc;
  }

  FieldScalar path_value(const Path& p) const {
    FieldScalar acc = one();
    for (int a : p.arrows) acc = acc * m[static_cast<std::size_t>(a)];
    return acc;
  }
};

// True iff every S-relation vanishes at m and every diagram constraint holds:
// m_{gamma(a)} = g(kappa) * m_a.
inline bool check_refined(const RefinedRep& rep, const SPresentation& s,
                          const std::vector<RefinementConstraint>& constraints) {
  std::vector<FieldScalar> pt = rep.m;
  for (const Poly& r : s.pres.relations()) {
    Poly rf = rep.prime == 0 ? r : r.over_field(rep.prime);
    if (!rf.evaluate(pt).is_zero()) return false;
  }
  for (const RefinementConstraint& c : constraints) {
    if (rep.path_value(c.gamma) != rep.g_of(c.kappa_br) * rep.path_value(c.path)) return false;
  }
  return true;
}

// Change of basis by units t_i (t_0 = 1): arrows rescale by t_head/t_tail and
// g(kappa) by t^kappa.
inline RefinedRep gauge_act(const std::vector<FieldScalar>& t, const Quiver& q,
                            const QuiverLattices& ql, const RefinedRep& rep) {
  if (t.size() != q.n_vertices() - 1) fail(errc::dimension_mismatch, "one unit per vertex != 0");
  for (const auto& u : t)
    if (u.is_zero()) fail(errc::invalid_input, "gauge units must be nonzero");
  RefinedRep out = rep;
  auto unit = [&](int v) { return v == 0 ? rep.one() : t[static_cast<std::size_t>(v - 1)]; };
  for (std::size_t a = 0; a < q.n_arrows(); ++a)
    out.m[a] = unit(q.arrows[a].head) * unit(q.arrows[a].tail).inverse() * rep.m[a];
  for (std::size_t b = 0; b < rep.g.size(); ++b) {
    GroupElement kappa = ql.lambda_r.basis_vector(b);
    FieldScalar tk = rep.one();
    for (std::size_t i = 0; i < kappa.size(); ++i) tk = tk * t[i].pow(kappa[i]);
    out.g[b] = tk * rep.g[b];
  }
  return out;
}

// Homogenisation s^h of a Pic-homogeneous element of S: every term is tagged
// with the kappa in Lambda_r that lifts it to the Lambda_Q-degree of the
// lexicographically leading term (which carries kappa = 0).
struct HomogenizedTerm {
  Monomial monomial;
  FieldScalar coeff;
  std::vector<Int> kappa_br;
};

inline std::vector<HomogenizedTerm> homogenize(const Poly& s, const SPresentation& sp,
                                               const QuiverLattices& ql) {
  std::vector<HomogenizedTerm> out;
  if (s.is_zero()) return out;
  GroupElement lead_deg = sp.pres.monomial_degree(s.terms().begin()->first);
  for (const auto& [m, c] : s.terms()) {
    GroupElement diff = lead_deg - sp.pres.monomial_degree(m);
    auto coords = ql.lambda_r.coordinates(diff);
    if (!coords)
      fail(errc::not_pic_homogeneous, "term degrees do not differ by elements of Lambda_r");
    out.push_back({m, c, *coords});
  }
  return out;
}

// Specialisation of a homogenized element at a character g.
inline Poly specialize(const std::vector<HomogenizedTerm>& sh, const RefinedRep& rep,
                       std::size_t nvars) {
  Poly out(nvars);
  for (const auto& t : sh) {
    FieldScalar c = rep.prime == 0 ? t.coeff : FieldScalar::reduce(t.coeff.rat(), rep.prime);
    out.add_term(t.monomial, rep.g_of(t.kappa_br) * c);
  }
  return out;
}

// King stability for dimension vector (1,...,1) with theta on the non-zero
// vertices and theta_0 = -sum.  A subset S of vertices is a subrepresentation
// support when it is closed under nonzero arrows (tail in S forces head in).
// In restricted mode only subsets orthogonal to Lambda_r are tested.
struct StabilityParam {
  std::vector<Int> theta;  // per vertex i != 0

  Int theta0() const {
    Int s = 0;
    for (const Int& x : theta) s += x;
    return -s;
  }
};

namespace detail {

struct StabilityContext {
  std::vector<std::uint32_t> candidate_masks;  // subsets worth testing (bit v = vertex v)
  std::vector<Int> theta_of_mask;
};

inline StabilityContext make_stability_context(const Quiver& q, const QuiverLattices& ql,
                                               const StabilityParam& theta, bool restricted) {
  const std::size_t n = q.n_vertices();
  if (theta.theta.size() != n - 1) fail(errc::dimension_mismatch, "theta needs one entry per vertex != 0");
  StabilityContext ctx;
  const std::uint32_t full = (1u << n) - 1;
  for (std::uint32_t mask = 1; mask < full; ++mask) {
    if (restricted) {
      bool ortho = true;
      for (std::size_t b = 0; b < ql.lambda_r.rank() && ortho; ++b) {
        GroupElement kappa = ql.lambda_r.basis_vector(b);
        Int dot = 0;
        for (std::size_t i = 0; i + 1 < n; ++i)
          if (mask & (1u << (i + 1))) dot += kappa[i];
        ortho = dot == 0;
      }
      if (!ortho) continue;
    }
    Int th = 0;
    if (mask & 1u) th += theta.theta0();
    for (std::size_t i = 0; i + 1 < n; ++i)
      if (mask & (1u << (i + 1))) th += theta.theta[i];
    ctx.candidate_masks.push_back(mask);
    ctx.theta_of_mask.push_back(th);
  }
  return ctx;
}

inline bool mask_closed(const Quiver& q, std::uint32_t mask, const std::vector<bool>& arrow_nonzero) {
  for (std::size_t a = 0; a < q.n_arrows(); ++a) {
    if (!arrow_nonzero[a]) continue;
    if ((mask & (1u << q.arrows[a].tail)) && !(mask & (1u << q.arrows[a].head))) return false;
  }
  return true;
}

}  // namespace detail

inline bool is_theta_stable(const RefinedRep& rep, const Quiver& q, const QuiverLattices& ql,
                            const StabilityParam& theta, bool restricted = true,
                            bool strict = true) {
  detail::StabilityContext ctx = detail::make_stability_context(q, ql, theta, restricted);
  std::vector<bool> nz(q.n_arrows());
  for (std::size_t a = 0; a < q.n_arrows(); ++a) nz[a] = !rep.m[a].is_zero();
  for (std::size_t t = 0; t < ctx.candidate_masks.size(); ++t) {
    bool destabilizing = strict ? ctx.theta_of_mask[t] <= 0 : ctx.theta_of_mask[t] < 0;
    if (!destabilizing) continue;
    if (detail::mask_closed(q, ctx.candidate_masks[t], nz)) return false;
  }
  return true;
}

inline bool is_theta_semistable(const RefinedRep& rep, const Quiver& q, const QuiverLattices& ql,
                                const StabilityParam& theta, bool restricted = true) {
  return is_theta_stable(rep, q, ql, theta, restricted, /*strict=*/false);
}

// ---- captures-the-Cox-ring check ------------------------------------------

struct CapturesCoxReport {
  bool captures = false;
  std::vector<std::string> unreached_generators;
  struct Mismatch {
    GroupElement degree;  // in L
    std::size_t dim_s_mod_ide;
    std::size_t dim_r;
  };
  std::vector<Mismatch> hilbert_mismatches;
  std::vector<GroupElement> degrees_checked;
};

// Pic-graded presentation of S/I_de: same variables, degrees pushed along f*.
inline GradedPresentation s_mod_ide_pic(const SPresentation& s, const std::vector<Poly>& ide,
                                        const FgAbelianGroup& pic) {
  std::vector<Poly> rels = s.pres.relations();
  for (const Poly& g : ide) rels.push_back(g);
  return GradedPresentation(s.pres.var_names(), s.pic_degrees, std::move(rels), pic);
}

// Verdict true iff every Cox generator appears as an arrow label (the
// surjectivity witness for h) and the Hilbert values of S/I_de and R agree at
// every supplied degree.  Certified only up to those degrees.
inline CapturesCoxReport captures_cox_check(const CoxData& cox, const Quiver& q,
                                            const SPresentation& s, const std::vector<Poly>& ide,
                                            const std::vector<GroupElement>& test_degrees,
                                            std::optional<long> cap = std::nullopt) {
  if (test_degrees.empty()) fail(errc::invalid_input, "test_degrees must be nonempty");
  CapturesCoxReport rep;
  const GradedPresentation& R = cox.presentation;
  for (std::size_t v = 0; v < R.nvars(); ++v) {
    Monomial want = monomial_var(R.nvars(), v);
    bool reached = false;
    for (const Arrow& a : q.arrows) reached = reached || a.label == want;
    if (!reached) rep.unreached_generators.push_back(R.var_names()[v]);
  }
  GradedPresentation quot = s_mod_ide_pic(s, ide, R.grading());
  for (const GroupElement& d : test_degrees) {
    std::size_t hs = hilbert_value(quot, d, cap);
    std::size_t hr = hilbert_value(R, d, cap);
    if (hs != hr) rep.hilbert_mismatches.push_back({d, hs, hr});
    rep.degrees_checked.push_back(d);
  }
  rep.captures = rep.unreached_generators.empty() && rep.hilbert_mismatches.empty();
  return rep;
}

// ---- pipeline glue ---------------------------------------------------------

// Everything the verifier and the CLI need, built in one deterministic pass.
struct Pipeline {
  CoxData cox;
  std::vector<GroupElement> vertices;
  QuiverAlgebra qa;
  QuiverLattices lattices;
  SPresentation s;
  std::vector<Poly> de_ideal;
  std::vector<RefinementConstraint> constraints;

  const Quiver& quiver() const { return qa.quiver(); }
};

inline Pipeline build_pipeline(const CoxData& cox, const std::vector<GroupElement>& vertices,
                               std::size_t path_budget = 100000,
                               std::optional<long> cap = std::nullopt) {
  Quiver q = build_quiver_of_sections(cox, vertices, cap);
  QuiverAlgebra qa = compute_relations(q, cox, path_budget, cap);
  QuiverLattices ql = build_lattices(q, cox);
  SPresentation s = build_s_presentation(qa.algebra, ql);
  std::vector<Poly> ide = de_ideal_generators(qa, ql, cox.presentation.nvars());
  std::vector<RefinementConstraint> cons = diagram_constraints(qa, ql, cox.presentation.nvars());
  return Pipeline{cox,          vertices,       std::move(qa), std::move(ql),
                  std::move(s), std::move(ide), std::move(cons)};
}

}  // namespace stacky
