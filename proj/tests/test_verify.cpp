#include <catch2/catch_amalgamated.hpp>

#include "stacky/verify.hpp"

using namespace stacky;

namespace {

const Int kBudget = Int(100000000);

Poly lin(std::size_t nvars, std::initializer_list<long> coeffs) {
  Poly f(nvars);
  std::size_t v = 0;
  for (long c : coeffs) {
    if (c != 0) f.add_term(monomial_var(nvars, v), FieldScalar::rational(c));
    ++v;
  }
  return f;
}

CoxData cox_p12() {
  CoxData c;
  c.presentation = GradedPresentation({"y1", "y2"}, {GroupElement{1}, GroupElement{2}}, {},
                                      FgAbelianGroup::free_group(1));
  c.generator_classes = {GroupElement{1}, GroupElement{2}};
  return c;
}

Pipeline pipe_p12() {
  return build_pipeline(cox_p12(), {GroupElement{0}, GroupElement{1}, GroupElement{2}});
}

Pipeline pipe_w11() {
  CoxData c = build_cox_data({1, {1, 1}, {lin(2, {1, 0}), lin(2, {0, 1})}});
  return build_pipeline(c, tilting_interval(c));
}

Pipeline pipe_w23() {
  CoxData c = build_cox_data({1, {2, 3}, {lin(2, {1, 0}), lin(2, {0, 1})}});
  return build_pipeline(c, tilting_interval(c));
}

Pipeline pipe_w222() {
  CoxData c = build_cox_data({1, {2, 2, 2}, {lin(2, {1, 0}), lin(2, {0, 1}), lin(2, {1, 1})}});
  return build_pipeline(c, tilting_interval(c));
}

// Definitional brute force over all (m, g): check_refined + is_theta_stable.
Int brute_refined_count(const Pipeline& p, std::int64_t q, const StabilityParam& theta,
                        bool restricted) {
  const std::size_t na = p.quiver().n_arrows();
  const std::size_t nr = p.lattices.lambda_r.rank();
  Int count = 0;
  Int mtotal = pow_int(Int(q), na);
  Int gtotal = pow_int(Int(q - 1), nr);
  for (Int mi = 0; mi < mtotal; ++mi) {
    Point m = decode_point(mi, na, q);
    for (Int gi = 0; gi < gtotal; ++gi) {
      RefinedRep rep;
      rep.prime = q;
      for (auto x : m) rep.m.push_back(FieldScalar::mod_p(x, q));
      Int g = gi;
      for (std::size_t b = 0; b < nr; ++b) {
        rep.g.push_back(FieldScalar::mod_p(1 + static_cast<std::int64_t>(g % (q - 1)), q));
        g /= (q - 1);
      }
      if (check_refined(rep, p.s, p.constraints) &&
          is_theta_stable(rep, p.quiver(), p.lattices, theta, restricted))
        ++count;
    }
  }
  return count;
}

}  // namespace

TEST_CASE("stack_mass examples") {
  SECTION("P(1,2) at q = 5: (25-1)/4") {
    REQUIRE(stack_mass(cox_p12(), 5, kBudget) == Rat(6));
  }
  SECTION("P^1 at q = 3: (9-1)/2 = q+1") {
    Pipeline p = pipe_w11();
    REQUIRE(stack_mass(p.cox, 3, kBudget) == Rat(4));
  }
  SECTION("weights (2,3) at q = 7: (49-1)/6") {
    Pipeline p = pipe_w23();
    REQUIRE(stack_mass(p.cox, 7, kBudget) == Rat(8));
  }
  SECTION("point count side matches the independent enumeration") {
    Pipeline p = pipe_w222();
    // 9 points on the quadric cone over F_3, origin removed, (q-1)^1 torus
    REQUIRE(stack_mass(p.cox, 3, kBudget) == Rat(8, 2));
  }
  SECTION("q = 2 fails the residue condition when L has 2-torsion") {
    Pipeline p = pipe_w222();
    REQUIRE_THROWS_AS(stack_mass(p.cox, 2, kBudget), error);
  }
  SECTION("budget enforcement") {
    REQUIRE_THROWS_AS(stack_mass(cox_p12(), 5, Int(3)), error);
  }
}

TEST_CASE("refined_mass on P(1,2)") {
  Pipeline p = pipe_p12();
  StabilityParam theta{{1, 1}};
  SECTION("q = 5: mass 6 out of 500 candidates") {
    MassReport rep = refined_mass(p, 5, theta, true, kBudget);
    REQUIRE(rep.refined_mass == Rat(6));
    REQUIRE(rep.gauge_order == 16);
    REQUIRE(rep.stable_point_count == 96);
  }
  SECTION("q = 3: mass 4") {
    MassReport rep = refined_mass(p, 3, theta, true, kBudget);
    REQUIRE(rep.refined_mass == Rat(4));
  }
  SECTION("degenerate theta is rejected") {
    REQUIRE_THROWS_AS(refined_mass(p, 5, StabilityParam{{0, 0}}, true, kBudget), error);
  }
  SECTION("stable counts agree with the definitional brute force") {
    for (std::int64_t q : {3, 5}) {
      MassReport rep = refined_mass(p, q, theta, true, kBudget);
      REQUIRE(rep.stable_point_count == brute_refined_count(p, q, theta, true));
    }
  }
  SECTION("plain King mode also matches its brute force") {
    MassReport rep = refined_mass(p, 5, theta, false, kBudget);
    REQUIRE(rep.stable_point_count == brute_refined_count(p, 5, theta, false));
  }
}

TEST_CASE("refined_mass on weights (2,2,2) agrees with brute force at q = 3") {
  Pipeline p = pipe_w222();
  StabilityParam theta{{1, 1, 1, 1}};
  MassReport rep = refined_mass(p, 3, theta, true, kBudget);
  REQUIRE(rep.stable_point_count == brute_refined_count(p, 3, theta, true));
  REQUIRE(rep.refined_mass == Rat(4));
}

TEST_CASE("compare_masses") {
  SECTION("P(1,2): masses 4 and 6 at q = 3, 5") {
    Pipeline p = pipe_p12();
    auto reps = compare_masses(p, {3, 5}, StabilityParam{{1, 1}}, true, kBudget);
    REQUIRE(reps.size() == 2);
    REQUIRE(reps[0].match);
    REQUIRE(reps[0].stack_mass == Rat(4));
    REQUIRE(reps[1].match);
    REQUIRE(reps[1].stack_mass == Rat(6));
  }
  SECTION("P^1: mass q + 1") {
    Pipeline p = pipe_w11();
    auto reps = compare_masses(p, {3, 5}, StabilityParam{{1}}, true, kBudget);
    REQUIRE(reps[0].match);
    REQUIRE(reps[0].refined_mass == Rat(4));
    REQUIRE(reps[1].match);
    REQUIRE(reps[1].refined_mass == Rat(6));
  }
  SECTION("weights (2,3) at q = 7: mass 8") {
    Pipeline p = pipe_w23();
    auto reps = compare_masses(p, {7}, StabilityParam{{1, 1, 1, 1}}, true, kBudget);
    REQUIRE(reps[0].match);
    REQUIRE(reps[0].refined_mass == Rat(8));
  }
  SECTION("weights (2,2,2) at q = 3, 5") {
    Pipeline p = pipe_w222();
    auto reps = compare_masses(p, {3, 5}, StabilityParam{{1, 1, 1, 1}}, true, kBudget);
    REQUIRE(reps[0].match);
    REQUIRE(reps[0].refined_mass == Rat(4));
    REQUIRE(reps[1].match);
    REQUIRE(reps[1].refined_mass == Rat(6));
  }
}

TEST_CASE("stabilizer profile") {
  SECTION("P(1,2) at q = 5: eighty free points and sixteen with mu_2") {
    Pipeline p = pipe_p12();
    MassReport rep = refined_mass(p, 5, StabilityParam{{1, 1}}, true, kBudget);
    REQUIRE(rep.stabilizer_profile.size() == 2);
    REQUIRE(rep.stabilizer_profile.at(Int(1)) == 80);
    REQUIRE(rep.stabilizer_profile.at(Int(2)) == 16);
  }
  SECTION("profile counts always add up to the stable count") {
    Pipeline p = pipe_w222();
    MassReport rep = refined_mass(p, 3, StabilityParam{{1, 1, 1, 1}}, true, kBudget);
    Int sum = 0;
    for (const auto& [k, v] : rep.stabilizer_profile) sum += v;
    REQUIRE(sum == rep.stable_point_count);
  }
  SECTION("stabilizer orders divide the lcm of the weights on GL fixtures") {
    struct Case {
      Pipeline p;
      std::int64_t q;
      Int weight_lcm;
    };
    std::vector<Case> cases;
    cases.push_back({pipe_p12(), 5, 2});
    cases.push_back({pipe_w23(), 7, 6});
    cases.push_back({pipe_w222(), 3, 2});
    for (auto& c : cases) {
      std::size_t nz = c.p.quiver().n_vertices() - 1;
      StabilityParam theta{std::vector<Int>(nz, Int(1))};
      MassReport rep = refined_mass(c.p, c.q, theta, true, kBudget);
      for (const auto& [order, count] : rep.stabilizer_profile)
        REQUIRE(c.weight_lcm % order == 0);
    }
  }
}

TEST_CASE("partitioned refined counting is additive and order-independent") {
  Pipeline p = pipe_p12();
  RefinedCounter counter(p, 5, StabilityParam{{1, 1}}, true);
  auto full = counter.scan(0, counter.total_m());
  Int acc = 0;
  for (Int lo = 0; lo < counter.total_m(); lo += 7) {
    Int hi = lo + 7 < counter.total_m() ? lo + 7 : counter.total_m();
    acc += counter.scan(lo, hi).stable_count;
  }
  REQUIRE(acc == full.stable_count);
  auto threaded = counter.run(4);
  REQUIRE(threaded.stable_count == full.stable_count);
  REQUIRE(threaded.stabilizer_profile == full.stabilizer_profile);
}

TEST_CASE("fiber_check") {
  SECTION("P(1,2) at q = 5") {
    Pipeline p = pipe_p12();
    REQUIRE(fiber_check(p, 5, kBudget));
  }
  SECTION("weights (2,2,2) at q = 3") {
    Pipeline p = pipe_w222();
    REQUIRE(fiber_check(p, 3, kBudget));
  }
  SECTION("perturbing a de-ideal generator flips the verdict") {
    Pipeline p = pipe_p12();
    std::vector<Poly> broken = p.de_ideal;
    Poly twist(3);
    twist.add_term({1, 0, 0}, FieldScalar::rational(1));
    twist.add_term({0, 0, 1}, FieldScalar::rational(-2));  // y_a - 2 y_b
    broken[0] = twist;
    REQUIRE_FALSE(fiber_check(p, p.s, broken, p.constraints, 5, kBudget));
  }
}

TEST_CASE("budget errors on the refined side") {
  Pipeline p = pipe_w23();
  REQUIRE_THROWS_AS(refined_mass(p, 7, StabilityParam{{1, 1, 1, 1}}, true, Int(1000)), error);
}
