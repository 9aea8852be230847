#include <catch2/catch_amalgamated.hpp>

#include <algorithm>

#include "stacky/glps.hpp"

using namespace stacky;

namespace {

Poly lin(std::size_t nvars, std::initializer_list<long> coeffs) {
  Poly f(nvars);
  std::size_t v = 0;
  for (long c : coeffs) {
    if (c != 0) f.add_term(monomial_var(nvars, v), FieldScalar::rational(c));
    ++v;
  }
  return f;
}

GLData gl_p12() { return {1, {1, 2}, {lin(2, {1, 0}), lin(2, {0, 1})}}; }
GLData gl_w23() { return {1, {2, 3}, {lin(2, {1, 0}), lin(2, {0, 1})}}; }
GLData gl_w222() {
  return {1, {2, 2, 2}, {lin(2, {1, 0}), lin(2, {0, 1}), lin(2, {1, 1})}};
}

// Oriented free coordinate: positive on the effective cone.
Int height(const CoxData& c, const GroupElement& v) {
  Int s = c.picard().free_part(c.c_class)[0] > 0 ? 1 : -1;
  return s * c.picard().free_part(v)[0];
}

}  // namespace

TEST_CASE("validate_general_position") {
  SECTION("three forms on the line in general position") {
    REQUIRE(validate_general_position(gl_w222()).ok);
  }
  SECTION("repeated form is rejected with a witness") {
    GLData g{1, {2, 2}, {lin(2, {1, 0}), lin(2, {1, 0})}};
    auto res = validate_general_position(g);
    REQUIRE_FALSE(res.ok);
    REQUIRE(res.witness == std::vector<std::size_t>{0, 1});
  }
  SECTION("coordinate forms on the plane") {
    GLData g{2, {2, 2, 2}, {lin(3, {1, 0, 0}), lin(3, {0, 1, 0}), lin(3, {0, 0, 1})}};
    REQUIRE(validate_general_position(g).ok);
  }
  SECTION("non-linear forms are rejected") {
    Poly quad(2);
    quad.add_term({2, 0}, FieldScalar::rational(1));
    GLData g{1, {2}, {quad}};
    REQUIRE_THROWS_AS(validate_general_position(g), error);
  }
}

TEST_CASE("normalize") {
  SECTION("plain P^1 gains both coordinate forms with weight 1") {
    GLData g{1, {}, {}};
    GLData n = normalize(g);
    REQUIRE(n.weights == std::vector<long>{1, 1});
    REQUIRE(n.forms[0] == lin(2, {1, 0}));
    REQUIRE(n.forms[1] == lin(2, {0, 1}));
  }
  SECTION("single form t0+t1 with weight 2 gains l1 = t0") {
    GLData g{1, {2}, {lin(2, {1, 1})}};
    GLData n = normalize(g);
    REQUIRE(n.weights == std::vector<long>{2, 1});
    REQUIRE(n.forms.size() == 2);
    REQUIRE(n.forms[1] == lin(2, {1, 0}));
  }
  SECTION("already normalized input is unchanged") {
    GLData n = normalize(gl_w23());
    REQUIRE(n.weights == gl_w23().weights);
    REQUIRE(n.forms.size() == 2);
    REQUIRE(n.forms[0] == gl_w23().forms[0]);
    REQUIRE(n.forms[1] == gl_w23().forms[1]);
  }
}

TEST_CASE("build_cox_data") {
  SECTION("P(1,2): free rank-1 grading, variable heights {1,2}, no relations") {
    CoxData c = build_cox_data(gl_p12());
    REQUIRE(c.presentation.relations().empty());
    REQUIRE(c.picard().rank() == 1);
    REQUIRE(c.picard().torsion_factors().empty());
    std::vector<Int> hs{height(c, c.generator_classes[0]), height(c, c.generator_classes[1])};
    std::sort(hs.begin(), hs.end());
    REQUIRE(hs == std::vector<Int>{1, 2});
    REQUIRE(height(c, c.c_class) == 2);
  }
  SECTION("weights (2,3): heights 3 and 2, c = 6, no relations") {
    CoxData c = build_cox_data(gl_w23());
    REQUIRE(c.presentation.relations().empty());
    REQUIRE(c.picard().rank() == 1);
    REQUIRE(c.picard().torsion_factors().empty());
    REQUIRE(height(c, c.generator_classes[0]) == 3);
    REQUIRE(height(c, c.generator_classes[1]) == 2);
    REQUIRE(height(c, c.c_class) == 6);
  }
  SECTION("weights (2,2,2): one relation y2^2 = y0^2 + y1^2 and 2-torsion") {
    CoxData c = build_cox_data(gl_w222());
    REQUIRE(c.presentation.relations().size() == 1);
    Poly expect(3);
    expect.add_term({0, 0, 2}, FieldScalar::rational(1));
    expect.add_term({2, 0, 0}, FieldScalar::rational(-1));
    expect.add_term({0, 2, 0}, FieldScalar::rational(-1));
    REQUIRE(c.presentation.relations()[0] == expect);
    REQUIRE(c.picard().rank() == 1);
    REQUIRE(c.picard().torsion_factors() == std::vector<Int>{2, 2});
    REQUIRE(height(c, c.c_class) == 2);
    REQUIRE(height(c, c.generator_classes[0]) == 1);
  }
  SECTION("p_i * y_i = c holds in L on every fixture") {
    for (const GLData& g : {gl_p12(), gl_w23(), gl_w222()}) {
      CoxData c = build_cox_data(g);
      for (std::size_t i = 0; i < c.weights.size(); ++i)
        REQUIRE(element_equal(Int(c.weights[i]) * c.generator_classes[i], c.c_class, c.picard()));
    }
  }
}

TEST_CASE("leq") {
  CoxData p12 = build_cox_data(gl_p12());
  GroupElement zero = group_zero(3);
  SECTION("0 <= 2 on P(1,2)") { REQUIRE(leq(p12, zero, Int(2) * p12.c_class)); }
  SECTION("reflexive") { REQUIRE(leq(p12, p12.generator_classes[1], p12.generator_classes[1])); }
  SECTION("weights (2,3): height-1 differences are not effective") {
    CoxData w = build_cox_data(gl_w23());
    REQUIRE_FALSE(leq(w, w.generator_classes[1], w.generator_classes[0]));  // height 3-2 = 1
  }
}

TEST_CASE("tilting_interval") {
  SECTION("P(1,2): three classes of heights 0,1,2") {
    CoxData c = build_cox_data(gl_p12());
    auto vs = tilting_interval(c);
    REQUIRE(vs.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) REQUIRE(height(c, vs[i]) == Int(i));
  }
  SECTION("weights (2,3): heights {0,2,3,4,6}") {
    CoxData c = build_cox_data(gl_w23());
    auto vs = tilting_interval(c);
    std::vector<Int> hs;
    for (const auto& v : vs) hs.push_back(height(c, v));
    REQUIRE(hs == std::vector<Int>{0, 2, 3, 4, 6});
  }
  SECTION("weights (2,2,2): {0, y0, y1, y2, c}") {
    CoxData c = build_cox_data(gl_w222());
    auto vs = tilting_interval(c);
    REQUIRE(vs.size() == 5);
    const auto& L = c.picard();
    REQUIRE(L.is_zero(vs[0]));
    for (std::size_t i = 0; i < 3; ++i) {
      bool found = false;
      for (const auto& v : vs) found = found || element_equal(v, c.generator_classes[i], L);
      REQUIRE(found);
    }
    REQUIRE(element_equal(vs[4], c.c_class, L));
  }
  SECTION("interval contains 0 and dc and is closed under t -> dc - t") {
    for (const GLData& g : {gl_p12(), gl_w23(), gl_w222()}) {
      CoxData c = build_cox_data(g);
      auto vs = tilting_interval(c);
      const auto& L = c.picard();
      GroupElement dc = Int(c.d) * c.c_class;
      REQUIRE(L.is_zero(vs.front()));
      REQUIRE(element_equal(vs.back(), dc, L));
      for (const auto& t : vs) {
        bool found = false;
        for (const auto& u : vs) found = found || element_equal(u, dc - t, L);
        REQUIRE(found);
      }
    }
  }
  SECTION("leq is reflexive and transitive on the interval") {
    CoxData c = build_cox_data(gl_w23());
    auto vs = tilting_interval(c);
    for (const auto& a : vs) REQUIRE(leq(c, a, a));
    for (const auto& a : vs)
      for (const auto& b : vs)
        for (const auto& d : vs)
          if (leq(c, a, b) && leq(c, b, d)) REQUIRE(leq(c, a, d));
  }
}
