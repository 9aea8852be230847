#pragma once

#include <chrono>
#include <map>
#include <thread>
#include <vector>

#include "stacky/refined.hpp"

namespace stacky {

// Groupoid-mass comparison record between the Cox-side stack count and the
// stable refined representation count over F_q.
struct MassReport {
  std::int64_t q = 0;
  Rat stack_mass;
  Rat refined_mass;
  Int stable_point_count;
  Int gauge_order;
  bool match = false;
  double timing_seconds = 0.0;  // diagnostics only; never serialized
  std::map<Int, Int> stabilizer_profile;  // stabilizer order -> point count
};

namespace detail {

inline void require_prime(std::int64_t q) {
  if (!is_prime_u64(q)) fail(errc::invalid_input, "q must be prime");
}

inline void require_residue(const FgAbelianGroup& pic, std::int64_t q) {
  Int e = pic.torsion_exponent();
  if ((Int(q) - 1) % e != 0)
    fail(errc::bad_residue, "q != 1 mod the torsion exponent of the grading group");
}

inline std::int64_t primitive_root(std::int64_t q) {
  for (std::int64_t w = 2; w < q; ++w) {
    std::int64_t x = w;
    bool prim = true;
    for (std::int64_t k = 1; k + 1 < q; ++k) {
      if (x == 1) {
        prim = false;
        break;
      }
      x = x * w % q;
    }
    if (prim) return w;
  }
  return q == 2 ? 1 : 0;
}

}  // namespace detail

// |(Spec R \ {0})(F_q)| divided by the order of the connected gauge torus
// (q-1)^rank(L).  Summing the point count over all L^dual-torsor twists of
// Spec R multiplies it by the torsion factors of |L^dual(F_q)|, so this ratio
// is the full groupoid mass of [Spec R \ {0} / L^dual] over F_q.
inline Rat stack_mass(const CoxData& cox, std::int64_t q, const Int& budget) {
  detail::require_prime(q);
  const GradedPresentation& R = cox.presentation;
  detail::require_residue(R.grading(), q);
  Int total = pow_int(Int(q), R.nvars());
  if (total > budget) fail(errc::budget_exceeded, "q^nvars exceeds the enumeration budget");
  ModRelations rels = compile_mod_relations(R, q);
  Int count = 0;
  for (Int i = 0; i < total; ++i)
    if (rels.vanish_at(decode_point(i, R.nvars(), q))) ++count;
  Point origin(R.nvars(), 0);
  if (rels.vanish_at(origin)) count -= 1;
  Int denom = 1;
  for (std::size_t i = 0; i < R.grading().rank(); ++i) denom *= q - 1;
  return Rat(count, denom);
}

// Compiled enumeration state for the refined count at a fixed prime.
class RefinedCounter {
 public:
  RefinedCounter(const Pipeline& p, std::int64_t q, const StabilityParam& theta, bool restricted)
      : p_(p), q_(q), units_(q - 1) {
    detail::require_prime(q);
    detail::require_residue(p.cox.presentation.grading(), q);
    na_ = p.quiver().n_arrows();
    nr_ = p.lattices.lambda_r.rank();
    rels_ = compile_mod_relations(p.s.pres, q);

    // stability candidates: destabilizing subsets and the genericity check
    detail::StabilityContext ctx =
        detail::make_stability_context(p.quiver(), p.lattices, theta, restricted);
    for (std::size_t t = 0; t < ctx.candidate_masks.size(); ++t) {
      if (ctx.theta_of_mask[t] == 0)
        fail(errc::non_generic_theta, "a tested subset pairs to zero with theta");
      if (ctx.theta_of_mask[t] < 0 || ctx.theta_of_mask[t] == 0)
        destabilizing_.push_back(ctx.candidate_masks[t]);
    }

    // constraint matrix over Z/(q-1) in discrete-log form
    for (const RefinementConstraint& c : p.constraints) {
      CompiledConstraint cc;
      for (int a : c.path.arrows) cc.path.push_back(a);
      for (int a : c.gamma.arrows) cc.gamma.push_back(a);
      for (const Int& x : c.kappa_br) {
        Int r = x % units_;
        if (r < 0) r += units_;
        cc.kappa.push_back(static_cast<std::int64_t>(r));
      }
      constraints_.push_back(std::move(cc));
    }
    if (constraints_.size() > 64)
      fail(errc::invalid_input, "constraint system too large for the counter");

    root_ = detail::primitive_root(q);
    dlog_.assign(static_cast<std::size_t>(q), 0);
    std::int64_t x = 1;
    for (std::int64_t k = 0; k + 1 < q; ++k) {
      dlog_[static_cast<std::size_t>(x)] = k;
      x = x * root_ % q;
    }
  }

  Int total_m() const { return pow_int(Int(q_), na_); }
  Int total_candidates() const {
    Int g = 1;
    for (std::size_t b = 0; b < nr_; ++b) g *= units_;
    return total_m() * g;
  }
  Int gauge_order() const {
    Int g = 1;
    for (std::size_t v = 0; v + 1 < p_.quiver().n_vertices(); ++v) g *= units_;
    return g;
  }

  struct RangeResult {
    Int stable_count = 0;
    std::map<Int, Int> stabilizer_profile;
  };

  // Scan arrow-scalar indices in [lo, hi); for each representing a stable
  // A-module, count the admissible characters by solving the congruence
  // system kappa . e = dlog(m_gamma / m_path) over Z/(q-1).
  RangeResult scan(const Int& lo, const Int& hi) const {
    RangeResult out;
    std::map<std::uint64_t, SmithForm> snf_cache;
    for (Int idx = lo; idx < hi; ++idx) {
      Point m = decode_point(idx, na_, q_);
      if (!rels_.vanish_at(m)) continue;
      if (!stable(m)) continue;
      Int gcount = g_solutions(m, snf_cache);
      if (gcount == 0) continue;
      out.stable_count += gcount;
      out.stabilizer_profile[stabilizer_order(m)] += gcount;
    }
    return out;
  }

  RangeResult run(int workers = 1) const {
    Int total = total_m();
    if (workers <= 1) return scan(0, total);
    std::vector<RangeResult> parts(static_cast<std::size_t>(workers));
    std::vector<std::thread> pool;
    Int chunk = total / workers + 1;
    for (int w = 0; w < workers; ++w) {
      Int lo = chunk * w, hi = chunk * (w + 1);
      if (hi > total) hi = total;
      if (lo > total) lo = total;
      pool.emplace_back([&, w, lo, hi]() { parts[static_cast<std::size_t>(w)] = scan(lo, hi); });
    }
    for (auto& t : pool) t.join();
    RangeResult out;
    for (const auto& part : parts) {
      out.stable_count += part.stable_count;
      for (const auto& [k, v] : part.stabilizer_profile) out.stabilizer_profile[k] += v;
    }
    return out;
  }

 private:
  struct CompiledConstraint {
    std::vector<int> path, gamma;
    std::vector<std::int64_t> kappa;
  };

  std::int64_t path_value(const Point& m, const std::vector<int>& arrows) const {
    std::int64_t v = 1;
    for (int a : arrows) v = v * m[static_cast<std::size_t>(a)] % q_;
    return v;
  }

  bool stable(const Point& m) const {
    std::vector<bool> nz(na_);
    for (std::size_t a = 0; a < na_; ++a) nz[a] = m[a] != 0;
    for (std::uint32_t mask : destabilizing_)
      if (detail::mask_closed(p_.quiver(), mask, nz)) return false;
    return true;
  }

  // Number of characters g in (F_q^x)^{rank} satisfying all constraints at m.
  // Constraints whose two path values both vanish are vacuous and get dropped
  // from the congruence system; the reduced Smith forms are cached per
  // vacuity pattern.
  Int g_solutions(const Point& m, std::map<std::uint64_t, SmithForm>& cache) const {
    const std::size_t nc = constraints_.size();
    std::vector<Int> rhs;
    rhs.reserve(nc);
    std::uint64_t live_mask = 0;
    for (std::size_t r = 0; r < nc; ++r) {
      std::int64_t vp = path_value(m, constraints_[r].path);
      std::int64_t vg = path_value(m, constraints_[r].gamma);
      if (vp == 0 && vg == 0) continue;
      if (vp == 0 || vg == 0) return 0;
      live_mask |= std::uint64_t(1) << r;
      rhs.push_back(dlog_[static_cast<std::size_t>(vg)] - dlog_[static_cast<std::size_t>(vp)]);
    }
    auto it = cache.find(live_mask);
    if (it == cache.end()) {
      IntMatrix alive(rhs.size(), nr_);
      std::size_t at = 0;
      for (std::size_t r = 0; r < nc; ++r) {
        if (!(live_mask & (std::uint64_t(1) << r))) continue;
        for (std::size_t c = 0; c < nr_; ++c) alive.at(at, c) = constraints_[r].kappa[c];
        ++at;
      }
      it = cache.emplace(live_mask, smith_normal_form(alive)).first;
    }
    return count_congruence_solutions(it->second, rhs);
  }

  Int count_congruence_solutions(const SmithForm& s, const std::vector<Int>& b) const {
    std::vector<Int> ub = s.U.apply(b);
    const std::size_t rank = s.invariant_factors.size();
    Int count = 1;
    for (std::size_t i = 0; i < ub.size(); ++i) {
      if (i < rank) {
        Int g = gcd(s.invariant_factors[i], units_);
        if (ub[i] % g != 0) return 0;
        count *= g;
      } else {
        if (ub[i] % units_ != 0) return 0;
      }
    }
    for (std::size_t c = rank; c < nr_; ++c) count *= units_;
    return count;
  }

  // Order of the PGL(1) stabilizer of any point (m, g) with this support:
  // solutions t of t_head = t_tail on supported arrows and t^kappa = 1,
  // counted as a congruence system mod (q-1).
  Int stabilizer_order(const Point& m) const {
    const std::size_t n = p_.quiver().n_vertices();
    std::vector<std::vector<Int>> rows;
    for (std::size_t a = 0; a < na_; ++a) {
      if (m[a] == 0) continue;
      const Arrow& ar = p_.quiver().arrows[a];
      std::vector<Int> row(n - 1, Int(0));
      if (ar.head != 0) row[static_cast<std::size_t>(ar.head - 1)] += 1;
      if (ar.tail != 0) row[static_cast<std::size_t>(ar.tail - 1)] -= 1;
      rows.push_back(std::move(row));
    }
    for (std::size_t b = 0; b < nr_; ++b) {
      GroupElement kappa = p_.lattices.lambda_r.basis_vector(b);
      std::vector<Int> row(n - 1, Int(0));
      for (std::size_t i = 0; i + 1 < n; ++i) row[i] = kappa[i];
      rows.push_back(std::move(row));
    }
    IntMatrix a(rows.size(), n - 1);
    for (std::size_t r = 0; r < rows.size(); ++r)
      for (std::size_t c = 0; c + 1 < n; ++c) a.at(r, c) = rows[r][c];
    SmithForm s = smith_normal_form(a);
    Int count = 1;
    for (const Int& d : s.invariant_factors) count *= gcd(d, units_);
    for (std::size_t c = s.invariant_factors.size(); c + 1 < n; ++c) count *= units_;
    return count;
  }

  const Pipeline& p_;
  std::int64_t q_;
  Int units_;
  std::size_t na_ = 0, nr_ = 0;
  ModRelations rels_;
  std::vector<CompiledConstraint> constraints_;
  std::vector<std::uint32_t> destabilizing_;
  std::int64_t root_ = 0;
  std::vector<std::int64_t> dlog_;
};

inline MassReport refined_mass(const Pipeline& p, std::int64_t q, const StabilityParam& theta,
                               bool restricted, const Int& budget, int workers = 1) {
  auto t0 = std::chrono::steady_clock::now();
  RefinedCounter counter(p, q, theta, restricted);
  if (counter.total_candidates() > budget)
    fail(errc::budget_exceeded, "q^{Q_1} (q-1)^{rank} exceeds the enumeration budget");
  RefinedCounter::RangeResult res = counter.run(workers);
  MassReport out;
  out.q = q;
  out.stable_point_count = res.stable_count;
  out.gauge_order = counter.gauge_order();
  out.refined_mass = Rat(res.stable_count, out.gauge_order);
  out.stabilizer_profile = std::move(res.stabilizer_profile);
  out.timing_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

inline MassReport compare_masses_single(const Pipeline& p, std::int64_t q,
                                        const StabilityParam& theta, bool restricted,
                                        const Int& budget, int workers = 1) {
  MassReport rep = refined_mass(p, q, theta, restricted, budget, workers);
  rep.stack_mass = stack_mass(p.cox, q, budget);
  rep.match = rep.stack_mass == rep.refined_mass;
  return rep;
}

inline std::vector<MassReport> compare_masses(const Pipeline& p, const std::vector<std::int64_t>& qs,
                                              const StabilityParam& theta, bool restricted,
                                              const Int& budget, int workers = 1) {
  std::vector<MassReport> out;
  for (std::int64_t q : qs) out.push_back(compare_masses_single(p, q, theta, restricted, budget, workers));
  return out;
}

// The fiber of the refined space over the trivial character must be exactly
// Spec(S/I_de)(F_q).
inline bool fiber_check(const Pipeline& p, const SPresentation& s, const std::vector<Poly>& ide,
                        const std::vector<RefinementConstraint>& constraints, std::int64_t q,
                        const Int& budget) {
  detail::require_prime(q);
  detail::require_residue(p.cox.presentation.grading(), q);
  const std::size_t na = s.pres.nvars();
  Int total = pow_int(Int(q), na);
  if (total > budget) fail(errc::budget_exceeded, "q^{Q_1} exceeds the enumeration budget");
  GradedPresentation quot = s_mod_ide_pic(s, ide, p.cox.presentation.grading());
  std::vector<Point> ideal_points = enumerate_points(quot, q, budget);
  std::vector<Point> fiber;
  for (Int idx = 0; idx < total; ++idx) {
    Point pt = decode_point(idx, na, q);
    RefinedRep rep;
    rep.prime = q;
    for (auto x : pt) rep.m.push_back(FieldScalar::mod_p(x, q));
    for (std::size_t b = 0; b < p.lattices.lambda_r.rank(); ++b)
      rep.g.push_back(FieldScalar::mod_p(1, q));
    if (check_refined(rep, s, constraints)) fiber.push_back(pt);
  }
  return fiber == ideal_points;
}

inline bool fiber_check(const Pipeline& p, std::int64_t q, const Int& budget) {
  return fiber_check(p, p.s, p.de_ideal, p.constraints, q, budget);
}

}  // namespace stacky
