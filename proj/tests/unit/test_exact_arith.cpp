#include <doctest.h>

#include <vector>

#include "tractorlab/errors.hpp"
#include "tractorlab/poly_parser.hpp"
#include "tractorlab/random.hpp"
#include "tractorlab/scalar.hpp"

using namespace tractorlab;

namespace {

Poly P(const char* s, int n = 2) { return parse_poly(s, n); }
Scalar S(const char* s, int n = 2) { return Scalar(parse_poly(s, n)); }

std::vector<Rational> random_point(Rng& rng, int n) {
  std::vector<Rational> pt;
  for (int i = 0; i < n; ++i) pt.push_back(rng.small_rational(7));
  return pt;
}

}  // namespace

TEST_SUITE("exact_arith") {
  TEST_CASE("additive cancellation and products") {
    CHECK(S("x1+1", 1) + S("-1", 1) == S("x1", 1));
    CHECK(S("x1", 1) * S("x1", 1) == S("x1^2", 1));
    CHECK((S("x1", 1) - S("x1", 1)).is_zero());
    CHECK(Poly(3).degree() == -1);
    CHECK((P("x1+x2") * P("x1-x2")).degree() == 2);
  }

  TEST_CASE("quotient through the inverse agrees with pointwise division") {
    const Scalar q = S("x1^2-1", 1) * S("x1-1", 1).inverse();
    CHECK(q == S("x1+1", 1));
    CHECK(q.is_polynomial());
    Rng rng(11);
    int checked = 0;
    while (checked < 5) {
      auto pt = random_point(rng, 1);
      const Rational den = P("x1-1", 1).evaluate(pt);
      if (den == 0) continue;
      CHECK(q.evaluate(pt) == P("x1^2-1", 1).evaluate(pt) / den);
      ++checked;
    }
  }

  TEST_CASE("derivatives") {
    CHECK(S("x1^2*x2").derivative(0) == S("2*x1*x2"));
    CHECK(S("7").derivative(1).is_zero());
    const Scalar inv = S("x1", 1).inverse();
    CHECK(inv.derivative(0) == -(S("x1^2", 1).inverse()));
    // (p * p^-1)' = 0 through the product rule
    const Scalar p = S("x1^3+2*x1", 1);
    const Scalar pi = p.inverse();
    CHECK((p.derivative(0) * pi + p * pi.derivative(0)).is_zero());
    CHECK_THROWS_AS(P("x1").derivative(2), DimensionError);
  }

  TEST_CASE("evaluation") {
    const std::vector<Rational> pt{2, 3};
    CHECK(S("x1^2+x2").evaluate(pt) == 7);
    CHECK(Scalar(2).evaluate(pt) == 0);
    const Scalar r(P("x1^2-1", 1), P("x1-1", 1));
    CHECK(r.evaluate(std::vector<Rational>{3}) == 4);
    const Scalar pole(P("1", 1), P("x1-2", 1));
    CHECK_THROWS_AS(pole.evaluate(std::vector<Rational>{2}), EvaluationError);
    CHECK_THROWS_AS(S("x1").evaluate(std::vector<Rational>{1}), DimensionError);
  }

  TEST_CASE("normalization: reduced with monic denominator") {
    const Scalar r(P("2*x1^2-2*x2^2"), P("4*x1-4*x2"));
    CHECK(r == S("x1+x2") * Rational(1, 2));
    CHECK(r.is_polynomial());
    const Scalar s(P("x1"), P("3*x2+6"));
    CHECK(s.den().leading_term().coef == 1);
    CHECK(s.num() == P("x1") * Rational(1, 3));
    CHECK_THROWS(Scalar(P("x1"), Poly(2)));
  }

  TEST_CASE("multivariate gcd") {
    const Poly a = P("(x1+x2)*(x1-x2)^2*(x2+3)");
    const Poly b = P("(x1-x2)*(x1+2)*(x2+3)^2");
    CHECK(gcd(a, b) == P("(x1-x2)*(x2+3)").monic());
    CHECK(gcd(P("x1^2+1"), P("x1+x2")).is_constant());
    const Poly c = P("(1+x1^2+x2^2)^3", 2);
    CHECK(gcd(c, P("(1+x1^2+x2^2)^2*x1")) == P("(1+x1^2+x2^2)^2"));
  }

  TEST_CASE("mismatched nvars") {
    CHECK_THROWS_AS(S("x1", 1) + S("x1", 2), DimensionError);
    CHECK_THROWS_AS(S("x1", 1) * S("x1", 2), DimensionError);
  }

  TEST_CASE("ring axioms, Leibniz and commuting derivatives on random inputs") {
    Rng rng(2024);
    for (int trial = 0; trial < 25; ++trial) {
      const int n = rng.uniform(1, 4);
      const Scalar a(random_poly(rng, n, 3, 4)), b(random_poly(rng, n, 3, 4)),
          c(random_poly(rng, n, 3, 4));
      CHECK((a * b) * c == a * (b * c));
      CHECK((a + b) + c == a + (b + c));
      CHECK(a * (b + c) == a * b + a * c);
      CHECK(a * b == b * a);
      for (int i = 0; i < n; ++i) {
        CHECK((a * b).derivative(i) == a * b.derivative(i) + b * a.derivative(i));
        for (int j = 0; j < n; ++j) CHECK(a.derivative(i).derivative(j) == a.derivative(j).derivative(i));
      }
      if (!b.is_zero()) {
        const Scalar f = a / b;
        CHECK(f * b == a);
        for (int i = 0; i < n; ++i) {
          CHECK((f * b).derivative(i) == f * b.derivative(i) + b * f.derivative(i));
        }
      }
    }
  }

  TEST_CASE("parser") {
    CHECK(parse_poly("1+|x|^2", 3) == P("1+x1^2+x2^2+x3^2", 3));
    CHECK(parse_poly("-(x1 - 2)^2 * x2", 2) == P("-x1^2*x2+4*x1*x2-4*x2"));
    CHECK_THROWS_AS(parse_poly("x4", 3), SchemaError);
    CHECK_THROWS_AS(parse_poly("1+", 3), SchemaError);
    CHECK_THROWS_AS(parse_poly("|x|^3", 3), SchemaError);
    CHECK(P("3*x1^2 - x2 + 1").to_string() == "3*x1^2 - x2 + 1");
  }
}
