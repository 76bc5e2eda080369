#include <doctest.h>

#include "tractorlab/errors.hpp"
#include "tractorlab/poly_parser.hpp"
#include "tractorlab/projective.hpp"
#include "tractorlab/random.hpp"

using namespace tractorlab;

namespace {

Scalar S(const char* s, int n) { return Scalar(parse_poly(s, n)); }

MixedField random_tractor(Rng& rng, int n, int t, int w, const ScaleSpec& sp) {
  MixedField f(n, t, 0, w, sp);
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = Scalar(random_poly(rng, n, 2, 2));
  return f;
}

}  // namespace

TEST_SUITE("projective") {
  TEST_CASE("projection onto the complement of I") {
    Rng rng(21);
    const int n = 3;
    const auto ref = ScaleSpec::reference(n);
    for (const char* sig : {"1+|x|^2", "1-|x|^2", "1"}) {
      const auto scale = ScaleSpec::from_sigma(S(sig, n));
      const auto I = scale_tractor(scale);
      if (I.iota.is_zero()) {
        CHECK_THROWS_AS(project_to_Iperp(I.tractor, I), PreconditionError);
        continue;
      }
      CHECK(project_to_Iperp(I.tractor, I).is_zero());
      auto u = random_tractor(rng, n, 1, 0, ref);
      auto v = random_tractor(rng, n, 1, 0, ref);
      auto pu = project_to_Iperp(u, I);
      CHECK(project_to_Iperp(pu, I) == pu);
      CHECK(pair(I.tractor, pu, 0, 0).is_zero());
      CHECK(pair(pu, v, 0, 0) == pair(u, project_to_Iperp(v, I), 0, 0));
      auto t2 = random_tractor(rng, n, 2, 0, ref);
      auto p2 = project_to_Iperp(t2, I);
      CHECK(project_to_Iperp(p2, I) == p2);
      CHECK(pair(I.tractor, p2, 0, 1).is_zero());
      // Pi commutes with the connection when I is parallel
      CHECK(tractor_covderiv(p2) == project_to_Iperp(tractor_covderiv(t2), I));
    }
    CHECK_THROWS_AS(project_to_Iperp(injector(Injector::X, ref), scale_tractor(ScaleSpec::from_sigma(S("|x|^2", n)))),
                    PreconditionError);
  }

  TEST_CASE("Pi Y = (Y + (J/n) X)/2 in the Einstein splitting") {
    const int n = 3;
    const auto scale = ScaleSpec::from_sigma(S("1+|x|^2", n));
    const auto I = scale_tractor(scale);
    auto py = project_to_Iperp(injector(Injector::Y, scale), I);
    MixedField jx = injector(Injector::X, scale) * (scale.j() * Rational(1, n));
    jx.set_weight(-1);
    MixedField expect = injector(Injector::Y, scale) + jx;
    CHECK(py == expect * Scalar(n, Rational(1, 2)));
    for (int a = 0; a < n; ++a) {
      MixedField z(n, 1, 0, 0, scale);
      z.at({z_index(a)}) = Scalar(n, 1);
      CHECK(project_to_Iperp(z, I) == z);
    }
  }

  TEST_CASE("conformal to projective transfer intertwines the connections") {
    Rng rng(4);
    for (int n : {3, 4}) {
      for (const char* sig : {"1+|x|^2", "1-|x|^2"}) {
        const auto scale = ScaleSpec::from_sigma(Scalar(parse_poly(sig, n)));
        const auto I = scale_tractor(scale);
        for (int t : {1, 2}) {
          auto f = project_to_Iperp(random_tractor(rng, n, t, 0, scale), I);
          CHECK(conf_to_proj(tractor_covderiv(f), I) == projective_covderiv(conf_to_proj(f, I)));
        }
      }
    }
    const int n = 3;
    const auto I = scale_tractor(ScaleSpec::from_sigma(S("1+|x|^2", n)));
    CHECK(conf_to_proj(MixedField(n, 2, 0, 0, ScaleSpec::reference(n)), I).is_zero());
    CHECK_THROWS_AS(conf_to_proj(injector(Injector::Y, ScaleSpec::reference(n)), I), PreconditionError);
    CHECK_THROWS_AS(conf_to_proj(MixedField(n, 1, 0, 0, ScaleSpec::reference(n)),
                                 scale_tractor(ScaleSpec::from_sigma(S("1+x1^2", n)))),
                    PreconditionError);
  }

  TEST_CASE("images of Y and X under the transfer") {
    const int n = 3;
    const auto scale = ScaleSpec::from_sigma(S("1+|x|^2", n));
    const auto I = scale_tractor(scale);
    auto yb = conf_to_proj(project_to_Iperp(injector(Injector::Y, scale), I), I);
    CHECK(yb.at({0}) == Scalar(n, Rational(1, 2)));
    auto xb = conf_to_proj(project_to_Iperp(injector(Injector::X, scale), I), I);
    CHECK(xb.at({0}) == scale.j().inverse() * Rational(n, 2));
    for (int a = 0; a < n; ++a) CHECK(xb.at({a + 1}).is_zero());
  }
}
