#include <doctest.h>

#include "tractorlab/errors.hpp"
#include "tractorlab/poly_parser.hpp"
#include "tractorlab/prolongation.hpp"
#include "tractorlab/random.hpp"

using namespace tractorlab;

namespace {

Scalar S(const std::string& s, int n) { return Scalar(parse_poly(s, n)); }

WeightedTensorField form(const std::vector<std::string>& comps) {
  const int n = static_cast<int>(comps.size());
  auto k = WeightedTensorField::covariant(n, 1, 2);
  for (int a = 0; a < n; ++a) k.at({a}) = S(comps[a], n);
  return k;
}

WeightedTensorField tf_product(const WeightedTensorField& u, const WeightedTensorField& v) {
  return tracefree_sym2(symmetrize(tensor_product(u, v), {0, 1}));
}

}  // namespace

TEST_SUITE("prolongation") {
  TEST_CASE("conformal Killing 1-forms") {
    const int n = 3;
    const auto ref = ScaleSpec::reference(n);
    CHECK(is_ck_vector(form({"1", "0", "0"}), ref));
    CHECK(is_ck_vector(form({"x1", "x2", "x3"}), ref));
    CHECK(is_ck_vector(form({"-x2", "x1", "0"}), ref));
    CHECK(is_ck_vector(form({"|x|^2 - 2*x1^2", "-2*x1*x2", "-2*x1*x3"}), ref));
    CHECK_FALSE(is_ck_vector(form({"0", "x1^2", "0"}), ref));
    CHECK_THROWS_AS(is_ck_vector(WeightedTensorField::covariant(n, 1, 0), ref), PreconditionError);

    auto kd = half_prolong_vector(form({"x1", "x2", "x3"}), ref);
    CHECK(kd.at({kY}).is_zero());
    for (int a = 0; a < n; ++a) CHECK(kd.at({z_index(a)}) == Scalar(Poly::variable(n, a)));
    CHECK(kd.at({x_index(n)}) == Scalar(n, -1));
    auto kt = half_prolong_vector(form({"1", "0", "0"}), ref);
    CHECK(kt.at({x_index(n)}).is_zero());
    CHECK(kt.at({z_index(0)}) == Scalar(n, 1));
    CHECK(half_prolong_vector(form({"0", "0", "0"}), ref).is_zero());
    CHECK_THROWS_AS(half_prolong_vector(form({"0", "x1^2", "0"}), ref), PreconditionError);
  }

  TEST_CASE("full prolongation of conformal Killing 1-forms") {
    const int n = 3;
    const auto ref = ScaleSpec::reference(n);
    for (auto comps : std::vector<std::vector<std::string>>{
             {"-x2", "x1", "0"}, {"x1", "x2", "x3"}, {"1", "0", "0"},
             {"|x|^2 - 2*x1^2", "-2*x1*x2", "-2*x1*x3"}}) {
      auto kk = full_prolong_vector(half_prolong_vector(form(comps), ref));
      CHECK(symmetrize_tractor(kk, {0, 1}).is_zero());
      CHECK(is_parallel(kk));
      CHECK(recover_top(half_prolong_vector(form(comps), ref)) == form(comps));
    }
    // dilation: the Y-X block is 2 rho Y_[A X_B] with rho = -1
    auto kk = full_prolong_vector(half_prolong_vector(form({"x1", "x2", "x3"}), ref));
    CHECK(kk.at({kY, x_index(n)}) == Scalar(n, -1));
    CHECK(kk.at({x_index(n), kY}) == Scalar(n, 1));
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) CHECK(kk.at({z_index(a), z_index(b)}).is_zero());
    // a non-CK input smuggled into a tractor is caught
    MixedField bad(n, 1, 0, 1, ref);
    bad.at({z_index(1)}) = S("x1^2", n);
    CHECK_THROWS_AS(full_prolong_vector(bad), PreconditionError);
  }

  TEST_CASE("conformal Killing tensors") {
    const int n = 3;
    const auto ref = ScaleSpec::reference(n);
    auto rot = form({"-x2", "x1", "0"});
    auto tr = form({"1", "0", "0"});
    auto dil = form({"x1", "x2", "x3"});
    CHECK(is_ck_tensor(tf_product(rot, rot), ref));
    CHECK(is_ck_tensor(tf_product(tr, dil), ref));
    CHECK(is_ck_tensor(tf_product(tr, tr), ref));
    auto g4 = WeightedTensorField::metric(n);
    g4.set_weight(4);
    CHECK_THROWS_AS(is_ck_tensor(g4, ref), PreconditionError);
    Rng rng(3);
    auto g = WeightedTensorField::covariant(n, 2, 4);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) g.at({a, b}) = Scalar(random_poly(rng, n, 3, 4));
    CHECK_FALSE(is_ck_tensor(tracefree_sym2(symmetrize(g, {0, 1})), ref));
  }

  TEST_CASE("half prolongation of conformal Killing tensors") {
    const int n = 3;
    const auto ref = ScaleSpec::reference(n);
    auto tr = form({"1", "0", "0"});
    auto rot = form({"-x2", "x1", "0"});
    auto kt = half_prolong_tensor(tf_product(tr, tr), ref);
    for (int a = 0; a < n; ++a) CHECK(kt.at({z_index(a), x_index(n)}).is_zero());
    CHECK(kt.at({x_index(n), x_index(n)}).is_zero());
    auto kr = half_prolong_tensor(tf_product(rot, rot), ref);
    bool some = false;
    for (int a = 0; a < n; ++a) some = some || !kr.at({z_index(a), x_index(n)}).is_zero();
    CHECK(some);
    CHECK(half_prolong_tensor(WeightedTensorField::covariant(n, 2, 4), ref).is_zero());
    for (const auto& k : {tf_product(tr, tr), tf_product(rot, rot), tf_product(rot, form({"x1", "x2", "x3"}))}) {
      auto kh = half_prolong_tensor(k, ref);
      CHECK(contract_x(kh, 0).is_zero());
      CHECK(contract_tractor(thomas_d(kh), 0, 1).is_zero());
      CHECK(recover_top(kh) == k);
    }
  }

  TEST_CASE("X^A D_(A K_BC) identity on arbitrary symmetric trace-free K") {
    Rng rng(11);
    for (int n : {3, 5}) {
      const auto ref = ScaleSpec::reference(n);
      for (int trial = 0; trial < 3; ++trial) {
        auto g = WeightedTensorField::covariant(n, 2, 4);
        for (int a = 0; a < n; ++a)
          for (int b = 0; b < n; ++b) g.at({a, b}) = Scalar(random_poly(rng, n, 3, 3));
        auto kh = half_prolong_tensor(tracefree_sym2(symmetrize(g, {0, 1})), ref);
        auto dk = thomas_d(kh);
        MixedField lhs = contract_x(symmetrize_tractor(dk, {0, 1, 2}), 0);
        MixedField rhs = symmetrize_tractor(product(injector(Injector::X, ref), contract_tractor(dk, 0, 2)), {0, 1});
        CHECK(lhs == rhs * Scalar(n, Rational(4, 3 * (n + 4))));
      }
    }
  }

  TEST_CASE("full prolongation, Weyl conversions and top slots") {
    const int n = 3;
    const auto ref = ScaleSpec::reference(n);
    auto tr = form({"1", "0", "0"});
    auto rot = form({"-x2", "x1", "0"});
    auto dil = form({"x1", "x2", "x3"});
    auto inv = form({"|x|^2 - 2*x1^2", "-2*x1*x2", "-2*x1*x3"});
    for (const auto& k : {tf_product(tr, tr), tf_product(rot, dil), tf_product(inv, tr), tf_product(inv, inv)}) {
      auto kh = half_prolong_tensor(k, ref);
      auto kk = full_prolong_tensor(kh);
      CHECK(in_k_space(kk));
      CHECK(is_parallel(kk));
      // pair symmetry follows from the K-space conditions
      CHECK(permute_tractor_slots(kk, {1, 0, 3, 2}) == kk);
      auto w = to_weyl(kk);
      CHECK(in_w_space(w));
      CHECK(!riemann_defect(w));
      CHECK(from_weyl(w) == kk);
      CHECK(half_from_full(kk) == kh);
      CHECK(recover_top(half_from_full(kk)) == k);
      // pinned constant: K_CE = (2/3) X^B X^D W_BCDE
      CHECK(contract_x(contract_x(w, 0), 1) * Scalar(n, Rational(2, 3)) == kh);
    }
    CHECK(full_prolong_tensor(half_prolong_tensor(WeightedTensorField::covariant(n, 2, 4), ref)).is_zero());
  }

  TEST_CASE("membership predicates reject planted violations") {
    const int n = 3;
    const auto ref = ScaleSpec::reference(n);
    MixedField t(n, 4, 0, 0, ref);
    t.at({1, 2, 1, 2}) = Scalar(n, 1);
    CHECK(w_space_defect(t).has_value());
    CHECK(k_space_defect(t).has_value());
    CHECK_THROWS_AS(to_weyl(t), PreconditionError);
    CHECK_THROWS_AS(from_weyl(t), PreconditionError);
    // a bad half prolongation
    MixedField bad(n, 2, 0, 2, ref);
    bad.at({z_index(0), z_index(1)}) = S("x1^3", n);
    bad.at({z_index(1), z_index(0)}) = S("x1^3", n);
    CHECK_THROWS_AS(full_prolong_tensor(bad), PreconditionError);
    auto s1 = ScaleSpec::from_potential(S("x1^2", n));
    CHECK_THROWS_AS(full_prolong_tensor(half_prolong_tensor(WeightedTensorField::covariant(n, 2, 4), s1)),
                    PreconditionError);
  }

  TEST_CASE("half prolongations and CK predicates are conformally invariant") {
    Rng rng(5);
    const int n = 3;
    const auto ref = ScaleSpec::reference(n);
    auto tr = form({"1", "0", "0"});
    auto rot = form({"-x2", "x1", "0"});
    auto dil = form({"x1", "x2", "x3"});
    for (int trial = 0; trial < 3; ++trial) {
      const auto s1 = ScaleSpec::from_potential(Scalar(random_poly(rng, n, 2, 3)));
      for (const auto& k : {rot, dil}) {
        CHECK(is_ck_vector(k, s1));
        CHECK(change_splitting(half_prolong_vector(k, ref), s1) == half_prolong_vector(k, s1));
      }
      CHECK_FALSE(is_ck_vector(form({"0", "x1^2", "0"}), s1));
      for (const auto& k : {tf_product(rot, tr), tf_product(dil, rot)}) {
        CHECK(is_ck_tensor(k, s1));
        CHECK(change_splitting(half_prolong_tensor(k, ref), s1) == half_prolong_tensor(k, s1));
      }
    }
  }
}
