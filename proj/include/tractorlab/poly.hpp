#pragma once

// Sparse multivariate polynomials over the rationals.
//
// Terms are kept sorted in descending graded-lexicographic order with x1 the
// most significant variable, so the first term is the leading term and two
// polynomials are equal iff their term vectors are equal.

#include <gmpxx.h>

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace tractorlab {

using Rational = mpq_class;
using Integer = mpz_class;

inline constexpr int kMaxVars = 8;

/// p / q in canonical form (q may be negative).
inline Rational ratio(long p, long q) {
  Rational r(p, q);
  r.canonicalize();
  return r;
}

/// Exponent vector packed one byte per variable; x1 occupies the high byte so
/// that comparing the packed words is lexicographic order.
class Monomial {
 public:
  Monomial() = default;
  static Monomial from_exponents(std::span<const int> exps);
  static Monomial variable(int var, int power = 1);

  int exponent(int var) const {
    return static_cast<int>((bits_ >> (8 * (kMaxVars - 1 - var))) & 0xffu);
  }
  int degree() const { return degree_; }
  std::uint64_t bits() const { return bits_; }

  /// Throws DimensionError when a single exponent would exceed 255.
  Monomial operator*(const Monomial& other) const;
  bool divides(const Monomial& other) const;
  /// Precondition: divides(other).
  Monomial quotient_of(const Monomial& other) const;

  friend bool operator==(const Monomial&, const Monomial&) = default;
  /// Graded lex: total degree first, then lex with x1 > x2 > ...
  friend bool grlex_less(const Monomial& a, const Monomial& b) {
    return a.degree_ != b.degree_ ? a.degree_ < b.degree_ : a.bits_ < b.bits_;
  }

 private:
  std::uint64_t bits_ = 0;
  int degree_ = 0;
};

struct Term {
  Monomial mono;
  Rational coef;
};

class Poly {
 public:
  Poly() = default;
  explicit Poly(int nvars);
  Poly(int nvars, const Rational& c);

  static Poly variable(int nvars, int var);
  static Poly monomial(int nvars, const Monomial& m, const Rational& c);
  /// Builds from arbitrary (possibly duplicated / zero) terms.
  static Poly from_terms(int nvars, std::vector<Term> terms);

  int nvars() const { return nvars_; }
  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  /// Coefficient of the constant monomial.
  Rational constant_term() const;
  const Term& leading_term() const { return terms_.front(); }
  int degree() const;
  int degree_in(int var) const;
  bool uses_variable(int var) const;

  Poly operator-() const;
  Poly& operator+=(const Poly& o);
  Poly& operator-=(const Poly& o);
  Poly& operator*=(const Rational& c);
  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator*(const Poly& a, const Poly& b);
  friend Poly operator*(Poly a, const Rational& c) { return a *= c; }
  friend Poly operator*(const Rational& c, Poly a) { return a *= c; }
  friend bool operator==(const Poly& a, const Poly& b);

  Poly pow(int e) const;
  Poly derivative(int var) const;
  Rational evaluate(std::span<const Rational> point) const;
  /// Scales so that the leading coefficient is 1 (zero stays zero).
  Poly monic() const;

  /// Coefficients with respect to `var`: result[d] is the coefficient of
  /// var^d, a polynomial not involving var.
  std::vector<Poly> coefficients_in(int var) const;
  static Poly from_coefficients_in(int nvars, int var,
                                   const std::vector<Poly>& coeffs);

  std::string to_string() const;

 private:
  void check_same(const Poly& o) const;
  void normalize();

  int nvars_ = 0;
  std::vector<Term> terms_;
};

/// Exact quotient a / b. Throws Error when b does not divide a.
Poly exact_quotient(const Poly& a, const Poly& b);
/// Returns true and sets q when b divides a.
bool try_divide(const Poly& a, const Poly& b, Poly& q);
/// Monic greatest common divisor (content/primitive-part recursion with
/// pseudo-remainder sequences). gcd(0, 0) = 0.
Poly gcd(const Poly& a, const Poly& b);

std::string rational_to_string(const Rational& r);

}  // namespace tractorlab
