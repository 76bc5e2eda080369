#include <doctest.h>

#include "tractorlab/errors.hpp"
#include "tractorlab/poly_parser.hpp"
#include "tractorlab/random.hpp"
#include "tractorlab/riemannian.hpp"

using namespace tractorlab;

namespace {

Scalar S(const char* s, int n) { return Scalar(parse_poly(s, n)); }

// Schouten tensor of sigma^-2 * delta assembled from Christoffel symbols
// Gamma^c_ab = d^c_a U_b + d^c_b U_a - d_ab U^c, U = -grad(sigma)/sigma,
// evaluated at a point.
struct Oracle {
  std::vector<std::vector<Rational>> P;  // at the point
  Rational J;                             // trace with the metric sigma^-2 delta
};

Oracle christoffel_oracle(const Scalar& sigma, const std::vector<Rational>& pt) {
  const int n = sigma.nvars();
  std::vector<Scalar> U;
  for (int a = 0; a < n; ++a) U.push_back(-(sigma.derivative(a) / sigma));
  auto gamma = [&](int c, int a, int b) {
    Scalar g(n);
    if (c == a) g += U[b];
    if (c == b) g += U[a];
    if (a == b) g -= U[c];
    return g;
  };
  // R^d_{cab} = d_a G^d_bc - d_b G^d_ac + G^d_ae G^e_bc - G^d_be G^e_ac
  std::vector<std::vector<Rational>> ric(n, std::vector<Rational>(n, 0));
  for (int c = 0; c < n; ++c) {
    for (int b = 0; b < n; ++b) {
      Rational sum = 0;
      for (int a = 0; a < n; ++a) {
        const int d = a;
        sum += gamma(d, b, c).derivative(a).evaluate(pt) - gamma(d, a, c).derivative(b).evaluate(pt);
        for (int e = 0; e < n; ++e) {
          sum += gamma(d, a, e).evaluate(pt) * gamma(e, b, c).evaluate(pt) -
                 gamma(d, b, e).evaluate(pt) * gamma(e, a, c).evaluate(pt);
        }
      }
      ric[c][b] = sum;
    }
  }
  const Rational s = sigma.evaluate(pt);
  Rational scal = 0;
  for (int a = 0; a < n; ++a) scal += s * s * ric[a][a];
  Oracle o;
  o.P.assign(n, std::vector<Rational>(n, 0));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      o.P[a][b] = (ric[a][b] - (a == b ? scal / (2 * (n - 1)) / (s * s) : Rational(0))) / (n - 2);
  o.J = scal / (2 * (n - 1));
  return o;
}

WeightedTensorField random_tensor(Rng& rng, int n, int rank, int w) {
  auto t = WeightedTensorField::covariant(n, rank, w);
  for (std::size_t f = 0; f < t.size(); ++f) t[f] = Scalar(random_poly(rng, n, 2, 3));
  return t;
}

}  // namespace

TEST_SUITE("riemannian") {
  TEST_CASE("a scale is parallel for its own connection") {
    for (const char* s : {"1+|x|^2", "x1", "2+x1*x2-x3^2", "1"}) {
      const Scalar sigma = S(s, 3);
      const auto sc = ScaleSpec::from_sigma(sigma);
      CHECK(covderiv(WeightedTensorField::density(sigma, 1), sc).is_zero());
      CHECK(covderiv(WeightedTensorField::metric(3), sc).is_zero());
      CHECK(covderiv(WeightedTensorField::metric(3, true), sc).is_zero());
    }
    CHECK_THROWS(ScaleSpec::from_sigma(Scalar(3)));
  }

  TEST_CASE("flat derivative in the reference scale") {
    const int n = 3;
    auto k = WeightedTensorField::covariant(n, 1, 2);
    for (int a = 0; a < n; ++a) k.at({a}) = Scalar(Poly::variable(n, a));
    auto dk = covderiv(k, ScaleSpec::reference(n));
    CHECK(dk == WeightedTensorField::metric(n));
    // In the sigma-scale the Levi-Civita derivative of a dilation is again pure trace
    const auto sc = ScaleSpec::from_sigma(S("1+|x|^2", n));
    auto d2 = covderiv(k, sc);
    CHECK(antisymmetrize(d2, {0, 1}).is_zero());
  }

  TEST_CASE("Schouten tensor against the Christoffel oracle") {
    Rng rng(77);
    for (const char* s : {"1+|x|^2", "1-|x|^2", "x1", "3+x1-2*x2+|x|^2", "1+x1^2", "2+x1*x2+x3"}) {
      const Scalar sigma = S(s, 3);
      const auto sc = ScaleSpec::from_sigma(sigma);
      int checked = 0;
      while (checked < 10) {
        std::vector<Rational> pt{rng.small_rational(5), rng.small_rational(5), rng.small_rational(5)};
        if (sigma.evaluate(pt) == 0) continue;
        const Oracle o = christoffel_oracle(sigma, pt);
        for (int a = 0; a < 3; ++a)
          for (int b = 0; b < 3; ++b) CHECK(sc.schouten(a, b).evaluate(pt) == o.P[a][b]);
        const Rational sv = sigma.evaluate(pt);
        CHECK(sc.j().evaluate(pt) * sv * sv == o.J);
        ++checked;
      }
    }
  }

  TEST_CASE("Schouten of the reference and of quadric scales") {
    const auto ref = schouten(ScaleSpec::reference(3));
    CHECK(ref.schouten.is_zero());
    CHECK(ref.j.is_zero());
    const Scalar sigma = S("1+|x|^2", 3);
    const auto c = schouten(ScaleSpec::from_sigma(sigma));
    const Scalar two_over = Scalar(3, 2) / (sigma * sigma);
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) CHECK(c.schouten.at({a, b}) == (a == b ? two_over : Scalar(3)));
    CHECK(c.j == two_over * Rational(3));
    // iota = -2 J sigma^2 / n
    CHECK(c.j * sigma * sigma * Rational(-2, 3) == Scalar(3, -4));
    // sigma = x1 is the half-space model: Einstein with P = -g/2, not flat.
    const auto hs = schouten(ScaleSpec::from_sigma(S("x1", 3)));
    for (int a = 0; a < 3; ++a)
      CHECK(hs.schouten.at({a, a}) == Scalar(3, Rational(-1, 2)) / S("x1^2", 3));
    CHECK(tracefree_sym2(hs.schouten).is_zero());
    Rng rng(3);
    for (int trial = 0; trial < 6; ++trial) {
      const int n = 3;
      Poly q(n, rng.uniform(1, 4));
      for (int a = 0; a < n; ++a) q += Poly::variable(n, a) * Rational(rng.uniform(-3, 3));
      q += parse_poly("|x|^2", n) * Rational(rng.uniform(-2, 2));
      const auto cd = schouten(ScaleSpec::from_sigma(Scalar(q)));
      CHECK(tracefree_sym2(cd.schouten).is_zero());
    }
  }

  TEST_CASE("laplacian") {
    const auto ref = ScaleSpec::reference(3);
    auto lap = laplacian(WeightedTensorField::density(S("|x|^2", 3), 2), ref);
    CHECK(lap.value() == Scalar(3, 6));
    CHECK(lap.weight() == 0);
    CHECK(laplacian(WeightedTensorField::density(Scalar(3, 5), 0), ref).value().is_zero());
    CHECK(laplacian(WeightedTensorField::density(S("x1", 3), 1), ref).value().is_zero());
  }

  TEST_CASE("covariant derivative commutes with traces; densities have flat connections") {
    Rng rng(19);
    const int n = 3;
    for (const char* s : {"1+|x|^2", "2+x1-x2*x3"}) {
      const auto sc = ScaleSpec::from_sigma(S(s, n));
      auto t = random_tensor(rng, n, 2, 1);
      CHECK(covderiv(trace(t, 0, 1), sc) == trace(covderiv(t, sc), 1, 2));
      auto f = WeightedTensorField::density(Scalar(random_poly(rng, n, 3, 4)), rng.uniform(-2, 3));
      auto dd = covderiv(covderiv(f, sc), sc);
      CHECK(antisymmetrize(dd, {0, 1}).is_zero());
    }
  }

  TEST_CASE("trace-free symmetrized gradient is the same in every scale") {
    Rng rng(23);
    const int n = 3;
    const auto ref = ScaleSpec::reference(n);
    for (const char* s : {"1+|x|^2", "x1+2", "3+x1*x2"}) {
      const auto sc = ScaleSpec::from_sigma(S(s, n));
      // rank 1, weight 2
      auto k = random_tensor(rng, n, 1, 2);
      auto a1 = tracefree_sym2(symmetrize(covderiv(k, ref), {0, 1}));
      auto b1 = tracefree_sym2(symmetrize(covderiv(k, sc), {0, 1}));
      CHECK(a1 == b1);
      // rank 2, weight 4: trace-free part of the full symmetrization
      auto k2 = symmetrize(random_tensor(rng, n, 2, 4), {0, 1});
      auto s0 = symmetrize(covderiv(k2, ref), {0, 1, 2});
      auto s1 = symmetrize(covderiv(k2, sc), {0, 1, 2});
      auto diff = s0 - s1;
      // the difference must be pure trace: diff_abc = g_(ab t_c)
      auto t = trace(diff, 0, 1);
      auto pure = symmetrize(tensor_product(WeightedTensorField::metric(n), t), {0, 1, 2});
      CHECK(diff == pure * Scalar(n, Rational(3, n + 2)));
    }
  }

  TEST_CASE("potential splittings") {
    const auto sc = ScaleSpec::from_potential(S("x1^2+x2", 3));
    CHECK_FALSE(sc.has_sigma());
    CHECK_THROWS_AS(sc.sigma(), PreconditionError);
    CHECK(sc.upsilon(0) == S("2*x1", 3));
    CHECK(sc.schouten(0, 0).is_polynomial());
  }
}
