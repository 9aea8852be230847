#pragma once

#include <cstdint>
#include <sstream>
#include <string>

#include "stacky/int_matrix.hpp"

namespace stacky {

// Modular arithmetic for small primes (enumeration fast path).
inline std::int64_t mod_norm(std::int64_t x, std::int64_t p) {
  x %= p;
  return x < 0 ? x + p : x;
}

inline std::int64_t mod_pow(std::int64_t b, std::int64_t e, std::int64_t p) {
  b = mod_norm(b, p);
  std::int64_t r = 1 % p;
  while (e > 0) {
    if (e & 1) r = r * b % p;
    b = b * b % p;
    e >>= 1;
  }
  return r;
}

inline std::int64_t mod_inv(std::int64_t x, std::int64_t p) {
  x = mod_norm(x, p);
  if (x == 0) fail(errc::division_by_zero, "inverse of 0 mod p");
  return mod_pow(x, p - 2, p);  // p prime
}

inline bool is_prime_u64(std::int64_t n) {
  if (n < 2) return false;
  for (std::int64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

// Exact field scalar: a rational number (prime() == 0) or an element of F_p
// for a declared prime p.  Mixed-field arithmetic is rejected.
class FieldScalar {
 public:
  FieldScalar() : p_(0), v_(0) {}

  static FieldScalar rational(Rat r) {
    FieldScalar s;
    s.p_ = 0;
    s.r_ = std::move(r);
    return s;
  }
  static FieldScalar rational(long n) { return rational(Rat(n)); }

  static FieldScalar mod_p(std::int64_t value, std::int64_t p) {
    if (p < 2) fail(errc::invalid_input, "modulus must be a prime >= 2");
    FieldScalar s;
    s.p_ = p;
    s.v_ = mod_norm(value, p);
    return s;
  }

  // Reduce an exact rational into F_p; the denominator must be a unit mod p.
  static FieldScalar reduce(const Rat& r, std::int64_t p) {
    if (p == 0) return rational(r);
    Int num = numerator(r) % p, den = denominator(r) % p;
    if (den == 0) fail(errc::field_mismatch, "denominator vanishes mod p");
    std::int64_t n = static_cast<std::int64_t>(num), d = static_cast<std::int64_t>(den);
    return mod_p(n * mod_inv(d, p) % p, p);
  }

  std::int64_t prime() const { return p_; }
  bool is_rational() const { return p_ == 0; }
  const Rat& rat() const { return r_; }
  std::int64_t residue() const { return v_; }

  bool is_zero() const { return p_ == 0 ? r_ == 0 : v_ == 0; }
  bool is_one() const { return p_ == 0 ? r_ == 1 : v_ == 1 % p_; }

  friend FieldScalar operator+(const FieldScalar& a, const FieldScalar& b) {
    a.match(b);
    return a.p_ == 0 ? rational(a.r_ + b.r_) : mod_p(a.v_ + b.v_, a.p_);
  }
  friend FieldScalar operator-(const FieldScalar& a, const FieldScalar& b) {
    a.match(b);
    return a.p_ == 0 ? rational(a.r_ - b.r_) : mod_p(a.v_ - b.v_, a.p_);
  }
  friend FieldScalar operator*(const FieldScalar& a, const FieldScalar& b) {
    a.match(b);
    return a.p_ == 0 ? rational(a.r_ * b.r_) : mod_p(a.v_ * b.v_, a.p_);
  }
  friend FieldScalar operator/(const FieldScalar& a, const FieldScalar& b) {
    a.match(b);
    if (b.is_zero()) fail(errc::division_by_zero, "field division by zero");
    return a.p_ == 0 ? rational(a.r_ / b.r_) : mod_p(a.v_ * mod_inv(b.v_, a.p_), a.p_);
  }
  FieldScalar operator-() const { return p_ == 0 ? rational(-r_) : mod_p(-v_, p_); }

  FieldScalar inverse() const {
    if (is_zero()) fail(errc::division_by_zero, "inverse of zero");
    return p_ == 0 ? rational(Rat(1) / r_) : mod_p(mod_inv(v_, p_), p_);
  }

  FieldScalar pow(const Int& e) const {
    if (e < 0) return inverse().pow(-e);
    FieldScalar acc = p_ == 0 ? rational(1) : mod_p(1, p_);
    FieldScalar base = *this;
    Int k = e;
    while (k > 0) {
      if (k % 2 == 1) acc = acc * base;
      base = base * base;
      k /= 2;
    }
    return acc;
  }

  bool operator==(const FieldScalar& o) const {
    return p_ == o.p_ && (p_ == 0 ? r_ == o.r_ : v_ == o.v_);
  }
  bool operator!=(const FieldScalar& o) const { return !(*this == o); }

  std::string str() const {
    std::ostringstream os;
    if (p_ == 0)
      os << r_;
    else
      os << v_;
    return os.str();
  }

 private:
  void match(const FieldScalar& o) const {
    if (p_ != o.p_) fail(errc::field_mismatch, "mixed-field arithmetic");
  }

  std::int64_t p_;
  Rat r_;
  std::int64_t v_;
};

}  // namespace stacky
