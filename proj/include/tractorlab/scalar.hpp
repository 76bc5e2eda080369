#pragma once

// Elements of the rational function field Q(x1, ..., xn).

#include <span>
#include <string>
#include <vector>

#include "tractorlab/poly.hpp"

namespace tractorlab {

/// num / den with den monic and gcd(num, den) = 1. Zero is 0 / 1.
/// The denominator is also kept as a product of powers of monic bases so
/// that reductions only need gcds against the (small) bases.
class Scalar {
 public:
  Scalar() = default;
  explicit Scalar(int nvars) : num_(nvars), den_(nvars, 1) {}
  Scalar(int nvars, const Rational& c) : num_(nvars, c), den_(nvars, 1) {}
  Scalar(Poly p);  // NOLINT(google-explicit-constructor)
  /// Throws Error on a zero denominator.
  Scalar(Poly num, Poly den);

  int nvars() const { return num_.nvars(); }
  const Poly& num() const { return num_; }
  const Poly& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  bool is_polynomial() const { return den_.is_constant(); }
  bool is_constant() const { return num_.is_constant() && den_.is_constant(); }
  /// Precondition: is_polynomial().
  const Poly& as_poly() const;

  Scalar operator-() const;
  Scalar& operator+=(const Scalar& o);
  Scalar& operator-=(const Scalar& o);
  Scalar& operator*=(const Scalar& o);
  Scalar& operator*=(const Rational& c);
  Scalar& operator/=(const Scalar& o);
  friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
  friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
  friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
  friend Scalar operator*(Scalar a, const Rational& c) { return a *= c; }
  friend Scalar operator*(const Rational& c, Scalar a) { return a *= c; }
  friend Scalar operator/(Scalar a, const Scalar& b) { return a /= b; }
  friend bool operator==(const Scalar& a, const Scalar& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }

  Scalar inverse() const;
  /// Quotient rule for fractions. var is 0-based.
  Scalar derivative(int var) const;
  /// Throws EvaluationError at a pole.
  Rational evaluate(std::span<const Rational> point) const;
  std::string to_string() const;

 private:
  struct Factor {
    Poly base;
    int exp;
  };

  void normalize();
  void reduce();
  void expand_den();
  void check_same(const Scalar& o) const;

  Poly num_;
  Poly den_;
  std::vector<Factor> fac_;
};

}  // namespace tractorlab
