#include <doctest.h>

#include "tractorlab/errors.hpp"
#include "tractorlab/io.hpp"
#include "tractorlab/poly_parser.hpp"
#include "tractorlab/random.hpp"

using namespace tractorlab;

namespace {

Scalar S(const char* s, int n) { return Scalar(parse_poly(s, n)); }

}  // namespace

TEST_SUITE("io") {
  TEST_CASE("polynomials and scalars round-trip") {
    Rng rng(8);
    for (int t = 0; t < 20; ++t) {
      Poly p = random_poly(rng, 3, 4, 6, 1000) * rng.small_rational(9);
      CHECK(poly_from_json(poly_to_json(p)) == p);
      Scalar s = Scalar(p) / Scalar(random_poly(rng, 3, 2, 3) + Poly(3, 100));
      CHECK(scalar_from_json(scalar_to_json(s)) == s);
      CHECK(scalar_from_json(parse_json(scalar_to_json(s).dump())) == s);
    }
    // big integers stay exact
    Poly big = parse_poly("123456789012345678901234567890*x1^2 - 1", 2) * Rational(1, 7);
    const Json j = poly_to_json(big);
    CHECK(j["terms"][0]["num"].is_string());
    CHECK(poly_from_json(j) == big);
    CHECK(poly_from_json(parse_json(R"J({"nvars":2,"terms":[]})J")).is_zero());
    const auto inv = scalar_to_json(S("1+|x|^2", 2).inverse());
    CHECK(inv.contains("den_poly"));
  }

  TEST_CASE("schema violations") {
    CHECK_THROWS_AS(parse_json("{"), SchemaError);
    CHECK_THROWS_AS(poly_from_json(parse_json(R"J({"nvars":2,"terms":[{"exps":[1],"num":"1","den":"1"}]})J")),
                    SchemaError);
    CHECK_THROWS_AS(poly_from_json(parse_json(R"J({"nvars":1,"terms":[{"exps":[1],"num":1,"den":"1"}]})J")),
                    SchemaError);
    CHECK_THROWS_AS(poly_from_json(parse_json(R"J({"nvars":1,"terms":[{"exps":[1],"num":"1","den":"0"}]})J")),
                    SchemaError);
    CHECK_THROWS_AS(field_from_json(parse_json(R"J({"n":2,"variance":"dd","weight":4,"components":{"(0,2)":{"nvars":2,"terms":[]}}})J")),
                    SchemaError);
    CHECK_THROWS_AS(field_from_json(parse_json(R"J({"n":2,"variance":"dx","weight":4,"components":{}})J")), SchemaError);
    CHECK_THROWS_AS(scale_from_json(parse_json(R"J({"n":2})J")), SchemaError);
    CHECK_THROWS_AS(scale_from_json(parse_json(
                        R"J({"n":2,"upsilon":[{"nvars":2,"terms":[{"exps":[0,1],"num":"1","den":"1"}]},{"nvars":2,"terms":[]}]})J")),
                    SchemaError);
  }

  TEST_CASE("fields, splittings and tractors round-trip") {
    const int n = 3;
    auto k = WeightedTensorField::covariant(n, 2, 4);
    k.at({0, 1}) = S("x1*x2-3", n);
    k.at({1, 0}) = S("x1*x2-3", n);
    const Json jk = field_to_json(k);
    CHECK(jk["components"].size() == 2);
    CHECK(jk["variance"] == "dd");
    CHECK(field_from_json(jk) == k);

    for (const auto& sp : {ScaleSpec::reference(n), ScaleSpec::from_sigma(S("1+|x|^2", n)),
                           ScaleSpec::from_potential(S("x1^2-x2*x3", n))}) {
      const auto back = scale_from_json(scale_to_json(sp));
      CHECK(back == sp);
      CHECK(back.is_reference() == sp.is_reference());
      auto f = MixedField(n, 2, 1, -1, sp);
      f.at({0, 4, 2}) = S("x3", n);
      f.at({2, 1, 0}) = S("1", n) / S("1+x1^2", n);
      CHECK(mixed_from_json(parse_json(mixed_to_json(f).dump())) == f);
    }
    const auto pot = scale_from_json(parse_json(
        R"J({"n":3,"potential":{"nvars":3,"terms":[{"exps":[2,0,0],"num":"1","den":"1"}]}})J"));
    CHECK(pot == ScaleSpec::from_potential(S("x1^2", n)));

    const auto sph = ScaleSpec::from_sigma(S("1+|x|^2", n));
    const auto st = scale_tractor(sph);
    const auto pf = conf_to_proj(project_to_Iperp(injector(Injector::Y, sph), st), st);
    const Json jp = projective_to_json(pf);
    CHECK(jp["bundle"] == "projective");
    CHECK(projective_from_json(jp) == pf);
    CHECK_THROWS_AS(mixed_from_json(jp), SchemaError);
  }

  TEST_CASE("reports round-trip") {
    const int n = 3;
    const auto flat = ScaleSpec::from_sigma(Scalar(n, 1));
    auto k = WeightedTensorField::covariant(n, 2, 4);
    k.at({0, 0}) = S("x2^2", n);
    k.at({1, 1}) = S("x1^2", n);
    k.at({0, 1}) = S("-x1*x2", n);
    k.at({1, 0}) = S("-x1*x2", n);
    k = tracefree_sym2(k);
    for (const auto& v : {ks_test_tensor(k, flat), sks_test_tensor(k, flat)}) {
      const Json j = verdict_to_json(v);
      const auto back = verdict_from_json(parse_json(j.dump()));
      CHECK(back.kind == v.kind);
      CHECK(back.witness_name == v.witness_name);
      CHECK(back.witness.has_value() == v.witness.has_value());
      if (v.witness) CHECK(*back.witness == *v.witness);
      CHECK(back.residual.has_value() == v.residual.has_value());
      if (v.residual) CHECK(*back.residual == *v.residual);
      CHECK(verdict_to_json(back) == j);
    }
    CHECK(verdict_to_json(ks_test_tensor(k, flat)).contains("lambda"));
    CHECK(verdict_to_json(ks_test_tensor(k, flat))["residual"].is_null());

    const auto rep = ckv_basis(n);
    const Json j = basis_report_to_json(rep);
    CHECK(j["dimension"] == 10);
    CHECK(j["matrix_shape"][1] == rep.matrix_cols);
    const auto back = basis_report_from_json(parse_json(j.dump()));
    CHECK(back.fields.size() == rep.fields.size());
    for (std::size_t i = 0; i < rep.fields.size(); ++i) CHECK(back.fields[i] == rep.fields[i]);
    CHECK(basis_report_to_json(back) == j);

    const auto ref = ScaleSpec::reference(n);
    ProlongationRecord rec{json_hash(field_to_json(k)), ref, k, half_prolong_tensor(k, ref), std::nullopt, std::nullopt};
    rec.full = full_prolong_tensor(rec.half);
    const auto rb = prolongation_from_json(parse_json(prolongation_to_json(rec).dump()));
    CHECK(rb.half == rec.half);
    CHECK(*rb.full == *rec.full);
    CHECK_FALSE(rb.weyl.has_value());
    CHECK(rb.input_hash == rec.input_hash);
  }

  TEST_CASE("hashes") {
    CHECK(fnv1a_hex("") == "cbf29ce484222325");
    CHECK(fnv1a_hex("a") == "af63dc4c8601ec8c");
    CHECK(json_hash(parse_json(R"J({"b":1,"a":2})J")) == json_hash(parse_json(R"J({"a":2,"b":1})J")));
  }
}
