#include <doctest.h>

#include "tractorlab/errors.hpp"
#include "tractorlab/poly_parser.hpp"
#include "tractorlab/random.hpp"
#include "tractorlab/tensor_field.hpp"

using namespace tractorlab;

namespace {

Scalar S(const char* s, int n) { return Scalar(parse_poly(s, n)); }

WeightedTensorField x_tensor_x(int n) {
  auto t = WeightedTensorField::covariant(n, 2, 4);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      t.at({a, b}) = Scalar(Poly::variable(n, a) * Poly::variable(n, b));
  return t;
}

WeightedTensorField random_tensor(Rng& rng, int n, int rank, int w) {
  auto t = WeightedTensorField::covariant(n, rank, w);
  for (std::size_t f = 0; f < t.size(); ++f) t[f] = Scalar(random_poly(rng, n, 2, 3));
  return t;
}

}  // namespace

TEST_SUITE("tensor_fields") {
  TEST_CASE("symmetrize") {
    const int n = 2;
    auto t = WeightedTensorField::covariant(n, 2, 0);
    t.at({0, 1}) = S("x1", n);
    auto s = symmetrize(t, {0, 1});
    CHECK(s.at({0, 1}) == S("x1", n) * Rational(1, 2));
    CHECK(s.at({1, 0}) == S("x1", n) * Rational(1, 2));
    CHECK(symmetrize(s, {0, 1}) == s);
    // sym of delta_{a1} x_b: entries (1,b) = x_b/2, (a,1) += x_a/2
    auto d = WeightedTensorField::covariant(n, 2, 0);
    for (int b = 0; b < n; ++b) d.at({0, b}) = Scalar(Poly::variable(n, b));
    auto ds = symmetrize(d, {0, 1});
    CHECK(ds.at({0, 0}) == S("x1", n));
    CHECK(ds.at({0, 1}) == S("x2", n) * Rational(1, 2));
    CHECK(ds.at({1, 1}).is_zero());
  }

  TEST_CASE("antisymmetrize") {
    const int n = 3;
    auto e12 = WeightedTensorField::covariant(n, 2, 0);
    e12.at({0, 1}) = Scalar(n, 1);
    auto w = antisymmetrize(e12, {0, 1});
    CHECK(w.at({0, 1}) == Scalar(n, Rational(1, 2)));
    CHECK(w.at({1, 0}) == Scalar(n, Rational(-1, 2)));
    CHECK(antisymmetrize(w, {0, 1}) == w);
    CHECK(antisymmetrize(x_tensor_x(n), {0, 1}).is_zero());
    std::vector<Variance> mixed{Variance::Covariant, Variance::Contravariant};
    CHECK_THROWS_AS(antisymmetrize(WeightedTensorField(n, mixed, 0), {0, 1}), DimensionError);
  }

  TEST_CASE("traces and weights") {
    const int n = 3;
    WeightedTensorField delta(n, {Variance::Covariant, Variance::Contravariant}, 0);
    for (int a = 0; a < n; ++a) delta.at({a, a}) = Scalar(n, 1);
    auto tr = trace(delta, 0, 1);
    CHECK(tr.value() == Scalar(n, 3));
    CHECK(tr.weight() == 0);
    auto xx = trace(x_tensor_x(n), 0, 1);
    CHECK(xx.value() == S("|x|^2", n));
    CHECK(xx.weight() == 2);
    CHECK(trace(WeightedTensorField::metric(n, true), 0, 1).weight() == 0);
    CHECK_THROWS_AS(trace(delta, 0, 0), DimensionError);
  }

  TEST_CASE("tracefree_sym2") {
    const int n = 3;
    CHECK(tracefree_sym2(WeightedTensorField::metric(n)).is_zero());
    auto tf = tracefree_sym2(x_tensor_x(n));
    CHECK(tf.at({0, 0}) == S("x1^2", n) - S("|x|^2", n) * Rational(1, 3));
    CHECK(tf.at({0, 1}) == S("x1*x2", n));
    CHECK(trace(tf, 0, 1).is_zero());
    CHECK(tracefree_sym2(tf) == tf);
    auto bad = WeightedTensorField::covariant(n, 2, 0);
    bad.at({0, 1}) = Scalar(n, 1);
    CHECK_THROWS_AS(tracefree_sym2(bad), PreconditionError);
  }

  TEST_CASE("products, contractions, permutations") {
    const int n = 3;
    Rng rng(5);
    auto a = random_tensor(rng, n, 2, 1), b = random_tensor(rng, n, 1, 2), c = random_tensor(rng, n, 2, 0);
    auto one = WeightedTensorField::density(Scalar(n, 1), 0);
    CHECK(tensor_product(one, a) == a);
    CHECK(tensor_product(a, b).weight() == 3);
    // contraction of a product equals product of a contraction on disjoint slots
    CHECK(trace(tensor_product(a, c), 0, 1) == tensor_product(trace(a, 0, 1), c));
    // point evaluation oracle for contract(a, 1, b, 0) = sum_k a_ik b_k
    auto ab = contract(a, 1, b, 0);
    const std::vector<Rational> pt{Rational(1, 2), Rational(-3), Rational(2, 5)};
    for (int i = 0; i < n; ++i) {
      Rational expect = 0;
      for (int k = 0; k < n; ++k) expect += a.at({i, k}).evaluate(pt) * b.at({k}).evaluate(pt);
      CHECK(ab.at({i}).evaluate(pt) == expect);
    }
    auto p = permute_slots(a, {1, 0});
    CHECK(p.at({0, 1}) == a.at({1, 0}));
  }

  TEST_CASE("decompositions and index gymnastics") {
    Rng rng(9);
    for (int trial = 0; trial < 5; ++trial) {
      const int n = 3;
      auto t = random_tensor(rng, n, 2, 2);
      CHECK(symmetrize(t, {0, 1}) + antisymmetrize(t, {0, 1}) == t);
      CHECK(symmetrize(antisymmetrize(t, {0, 1}), {0, 1}).is_zero());
      auto r3 = random_tensor(rng, n, 3, 0);
      CHECK(symmetrize(antisymmetrize(r3, {0, 1, 2}), {0, 1, 2}).is_zero());
      CHECK(symmetrize(antisymmetrize(r3, {0, 2}), {0, 2}).is_zero());
      auto up = raise_index(t, 1);
      CHECK(up.weight() == 0);
      CHECK(lower_index(up, 1) == t);
      CHECK_THROWS_AS(lower_index(t, 0), DimensionError);
    }
  }
}
