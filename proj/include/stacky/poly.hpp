#pragma once

#include <map>
#include <string>
#include <vector>

#include "stacky/field.hpp"

namespace stacky {

// Exponent vector indexed by ring variables.
using Monomial = std::vector<int>;

inline Monomial monomial_one(std::size_t nvars) { return Monomial(nvars, 0); }

inline Monomial monomial_var(std::size_t nvars, std::size_t v, int e = 1) {
  Monomial m(nvars, 0);
  m[v] = e;
  return m;
}

inline Monomial operator*(const Monomial& a, const Monomial& b) {
  if (a.size() != b.size()) fail(errc::dimension_mismatch, "monomial product");
  Monomial out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return out;
}

// Descending lexicographic order on exponent vectors; the leading term of a
// polynomial is the lex-largest monomial.
struct MonomialLexGreater {
  bool operator()(const Monomial& a, const Monomial& b) const { return a > b; }
};

// Sparse polynomial with exact coefficients; zero coefficients are never
// stored and terms iterate in descending lex order.
class Poly {
 public:
  Poly() = default;
  explicit Poly(std::size_t nvars) : nvars_(nvars) {}

  static Poly constant(std::size_t nvars, const FieldScalar& c) {
    Poly p(nvars);
    p.add_term(monomial_one(nvars), c);
    return p;
  }
  static Poly variable(std::size_t nvars, std::size_t v) {
    Poly p(nvars);
    p.add_term(monomial_var(nvars, v), FieldScalar::rational(1));
    return p;
  }

  std::size_t nvars() const { return nvars_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t term_count() const { return terms_.size(); }
  const std::map<Monomial, FieldScalar, MonomialLexGreater>& terms() const { return terms_; }

  void add_term(const Monomial& m, const FieldScalar& c) {
    if (m.size() != nvars_) fail(errc::dimension_mismatch, "term arity");
    if (c.is_zero()) return;
    auto it = terms_.find(m);
    if (it == terms_.end()) {
      terms_.emplace(m, c);
    } else {
      it->second = it->second + c;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }

  Poly operator+(const Poly& o) const {
    Poly out = *this;
    for (const auto& [m, c] : o.terms_) out.add_term(m, c);
    return out;
  }
  Poly operator-(const Poly& o) const {
    Poly out = *this;
    for (const auto& [m, c] : o.terms_) out.add_term(m, -c);
    return out;
  }
  Poly operator*(const Poly& o) const {
    Poly out(nvars_);
    for (const auto& [m1, c1] : terms_)
      for (const auto& [m2, c2] : o.terms_) out.add_term(m1 * m2, c1 * c2);
    return out;
  }
  Poly scaled(const FieldScalar& c) const {
    Poly out(nvars_);
    for (const auto& [m, k] : terms_) out.add_term(m, k * c);
    return out;
  }

  bool operator==(const Poly& o) const { return nvars_ == o.nvars_ && terms_ == o.terms_; }

  FieldScalar evaluate(const std::vector<FieldScalar>& point) const {
    if (point.size() != nvars_) fail(errc::dimension_mismatch, "evaluation point arity");
    FieldScalar acc = terms_.empty() || terms_.begin()->second.is_rational()
                          ? FieldScalar::rational(0)
                          : FieldScalar::mod_p(0, terms_.begin()->second.prime());
    for (const auto& [m, c] : terms_) {
      FieldScalar t = c;
      for (std::size_t v = 0; v < nvars_; ++v)
        for (int e = 0; e < m[v]; ++e) t = t * point[v];
      acc = acc + t;
    }
    return acc;
  }

  // Coefficients reduced into F_p (p == 0 keeps rationals).
  Poly over_field(std::int64_t p) const {
    Poly out(nvars_);
    for (const auto& [m, c] : terms_) {
      if (!c.is_rational()) fail(errc::field_mismatch, "expected rational coefficients");
      out.add_term(m, FieldScalar::reduce(c.rat(), p));
    }
    return out;
  }

  std::string str(const std::vector<std::string>& var_names) const {
    if (terms_.empty()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [m, c] : terms_) {
      FieldScalar coeff = c;
      std::string cs = coeff.str();
      bool neg = !cs.empty() && cs[0] == '-';
      if (first) {
        if (neg) out += "-";
      } else {
        out += neg ? " - " : " + ";
      }
      if (neg) cs = cs.substr(1);
      std::string mono = monomial_str(m, var_names);
      if (mono == "1") {
        out += cs;
      } else {
        if (cs != "1") out += cs + "*";
        out += mono;
      }
      first = false;
    }
    return out;
  }

  static std::string monomial_str(const Monomial& m, const std::vector<std::string>& var_names) {
    std::string out;
    for (std::size_t v = 0; v < m.size(); ++v) {
      if (m[v] == 0) continue;
      if (!out.empty()) out += "*";
      out += var_names[v];
      if (m[v] > 1) out += "^" + std::to_string(m[v]);
    }
    return out.empty() ? "1" : out;
  }

 private:
  std::size_t nvars_ = 0;
  std::map<Monomial, FieldScalar, MonomialLexGreater> terms_;
};

}  // namespace stacky
