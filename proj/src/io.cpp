#include "tractorlab/io.hpp"

#include <cstdio>

#include "tractorlab/errors.hpp"

namespace tractorlab {

namespace {

template <class F>
auto guarded(const char* what, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const SchemaError&) {
    throw;
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string(what) + ": " + e.what());
  } catch (const DimensionError& e) {
    throw SchemaError(std::string(what) + ": " + e.what());
  }
}

const Json& member(const Json& j, const char* key) {
  if (!j.is_object()) throw SchemaError("expected a JSON object");
  auto it = j.find(key);
  if (it == j.end()) throw SchemaError(std::string("missing key \"") + key + "\"");
  return *it;
}

int int_member(const Json& j, const char* key) {
  const Json& v = member(j, key);
  if (!v.is_number_integer()) throw SchemaError(std::string("\"") + key + "\" must be an integer");
  return v.get<int>();
}

Integer integer_of(const Json& v) {
  if (!v.is_string()) throw SchemaError("integers are serialized as decimal strings");
  const std::string s = v.get<std::string>();
  std::size_t i = (!s.empty() && s[0] == '-') ? 1 : 0;
  if (i == s.size()) throw SchemaError("empty integer string");
  for (; i < s.size(); ++i)
    if (s[i] < '0' || s[i] > '9') throw SchemaError("bad integer string \"" + s + "\"");
  return Integer(s, 10);
}

std::string key_of(std::span<const int> idx) {
  std::string k = "(";
  for (std::size_t i = 0; i < idx.size(); ++i) {
    if (i) k += ',';
    k += std::to_string(idx[i]);
  }
  return k + ")";
}

std::vector<int> parse_key(const std::string& key, const Shape& shape) {
  if (key.size() < 2 || key.front() != '(' || key.back() != ')') throw SchemaError("bad component key " + key);
  std::vector<int> idx;
  std::string cur;
  auto flush = [&] {
    if (cur.empty()) throw SchemaError("bad component key " + key);
    for (char c : cur)
      if (c < '0' || c > '9') throw SchemaError("bad component key " + key);
    idx.push_back(std::stoi(cur));
    cur.clear();
  };
  const std::string body = key.substr(1, key.size() - 2);
  for (char c : body) {
    if (c == ' ') continue;
    if (c == ',') {
      flush();
    } else {
      cur += c;
    }
  }
  if (!body.empty()) flush();
  if (static_cast<int>(idx.size()) != shape.rank()) throw SchemaError("component key " + key + " has the wrong rank");
  for (int s = 0; s < shape.rank(); ++s)
    if (idx[s] < 0 || idx[s] >= shape.dims()[s]) throw SchemaError("component key " + key + " out of range");
  return idx;
}

template <class Field>
Json components_to_json(const Field& t) {
  Json c = Json::object();
  for (std::size_t f = 0; f < t.size(); ++f) {
    if (t[f].is_zero()) continue;
    c[key_of(t.shape().unflatten(f))] = scalar_to_json(t[f]);
  }
  return c;
}

template <class Field>
void components_from_json(const Json& c, Field& t, bool polynomial_only) {
  if (!c.is_object()) throw SchemaError("\"components\" must be an object");
  for (auto it = c.begin(); it != c.end(); ++it) {
    const auto idx = parse_key(it.key(), t.shape());
    Scalar s = scalar_from_json(it.value());
    if (s.nvars() != t.n()) throw SchemaError("component " + it.key() + " has the wrong number of variables");
    if (polynomial_only && !s.is_polynomial()) throw SchemaError("tensor components must be polynomials");
    t.at(std::span<const int>(idx)) = std::move(s);
  }
}

Json optional_int(const std::optional<int>& v) { return v ? Json(*v) : Json(nullptr); }

std::optional<int> optional_int_of(const Json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  if (!it->is_number_integer()) throw SchemaError(std::string("\"") + key + "\" must be an integer or null");
  return it->get<int>();
}

Json rational_vector(const std::vector<Rational>& v) {
  Json a = Json::array();
  for (const auto& x : v) a.push_back(Json{{"num", x.get_num().get_str()}, {"den", x.get_den().get_str()}});
  return a;
}

std::vector<Rational> rational_vector_of(const Json& a) {
  if (!a.is_array()) throw SchemaError("expected an array of rationals");
  std::vector<Rational> v;
  for (const auto& x : a) {
    Rational r(integer_of(member(x, "num")), integer_of(member(x, "den")));
    if (r.get_den() == 0) throw SchemaError("zero denominator");
    r.canonicalize();
    v.push_back(r);
  }
  return v;
}

}  // namespace

// ---------------------------------------------------------------- scalars

Json poly_to_json(const Poly& p) {
  Json terms = Json::array();
  for (const auto& t : p.terms()) {
    Json e = Json::array();
    for (int v = 0; v < p.nvars(); ++v) e.push_back(t.mono.exponent(v));
    terms.push_back(Json{{"exps", e}, {"num", t.coef.get_num().get_str()}, {"den", t.coef.get_den().get_str()}});
  }
  return Json{{"nvars", p.nvars()}, {"terms", terms}};
}

Poly poly_from_json(const Json& j) {
  return guarded("Poly", [&] {
    const int nvars = int_member(j, "nvars");
    if (nvars < 1 || nvars > kMaxVars) throw SchemaError("nvars out of range");
    const Json& terms = member(j, "terms");
    if (!terms.is_array()) throw SchemaError("\"terms\" must be an array");
    std::vector<Term> out;
    for (const auto& t : terms) {
      const Json& e = member(t, "exps");
      if (!e.is_array() || static_cast<int>(e.size()) != nvars) throw SchemaError("\"exps\" must have nvars entries");
      std::vector<int> exps;
      for (const auto& x : e) {
        if (!x.is_number_integer() || x.get<int>() < 0 || x.get<int>() > 255) throw SchemaError("bad exponent");
        exps.push_back(x.get<int>());
      }
      const Integer den = integer_of(member(t, "den"));
      if (den == 0) throw SchemaError("zero denominator");
      Rational c(integer_of(member(t, "num")), den);
      c.canonicalize();
      out.push_back(Term{Monomial::from_exponents(exps), c});
    }
    return Poly::from_terms(nvars, std::move(out));
  });
}

Json scalar_to_json(const Scalar& s) {
  if (s.is_polynomial()) return poly_to_json(s.as_poly());
  Json j = poly_to_json(s.num());
  j["den_poly"] = poly_to_json(s.den());
  return j;
}

Scalar scalar_from_json(const Json& j) {
  return guarded("Scalar", [&] {
    Poly num = poly_from_json(j);
    auto it = j.find("den_poly");
    if (it == j.end()) return Scalar(std::move(num));
    Poly den = poly_from_json(*it);
    if (den.nvars() != num.nvars()) throw SchemaError("den_poly has a different number of variables");
    if (den.is_zero()) throw SchemaError("zero den_poly");
    return Scalar(std::move(num), std::move(den));
  });
}

// ----------------------------------------------------------------- fields

Json field_to_json(const WeightedTensorField& t) {
  std::string var;
  for (auto v : t.variance()) var += static_cast<char>(v);
  return Json{{"n", t.n()}, {"variance", var}, {"weight", t.weight()}, {"components", components_to_json(t)}};
}

WeightedTensorField field_from_json(const Json& j) {
  return guarded("WeightedTensorField", [&] {
    const int n = int_member(j, "n");
    if (n < 1 || n > kMaxVars) throw SchemaError("n out of range");
    const Json& vj = member(j, "variance");
    if (!vj.is_string()) throw SchemaError("\"variance\" must be a string of d/u");
    std::vector<Variance> var;
    for (char c : vj.get<std::string>()) {
      if (c != 'd' && c != 'u') throw SchemaError("\"variance\" must be a string of d/u");
      var.push_back(static_cast<Variance>(c));
    }
    WeightedTensorField t(n, var, int_member(j, "weight"));
    components_from_json(member(j, "components"), t, false);
    return t;
  });
}

Json scale_to_json(const ScaleSpec& s) {
  Json j{{"n", s.n()}};
  if (s.has_sigma()) {
    j["sigma"] = scalar_to_json(s.sigma());
  } else {
    Json u = Json::array();
    for (const auto& x : s.upsilon()) u.push_back(scalar_to_json(x));
    j["upsilon"] = u;
  }
  return j;
}

ScaleSpec scale_from_json(const Json& j) {
  return guarded("ScaleSpec", [&] {
    const int n = int_member(j, "n");
    const int given = static_cast<int>(j.contains("sigma")) + static_cast<int>(j.contains("potential")) +
                      static_cast<int>(j.contains("upsilon"));
    if (given != 1) throw SchemaError("ScaleSpec needs exactly one of \"sigma\", \"potential\", \"upsilon\"");
    auto check_n = [&](const Scalar& s) {
      if (s.nvars() != n) throw SchemaError("ScaleSpec polynomial has the wrong number of variables");
      return s;
    };
    try {
      if (j.contains("sigma")) {
        const Scalar s = check_n(scalar_from_json(j["sigma"]));
        if (s == Scalar(n, 1)) return ScaleSpec::reference(n);
        return ScaleSpec::from_sigma(s);
      }
      if (j.contains("potential")) return ScaleSpec::from_potential(check_n(scalar_from_json(j["potential"])));
      const Json& u = j["upsilon"];
      if (!u.is_array() || static_cast<int>(u.size()) != n) throw SchemaError("\"upsilon\" must have n entries");
      std::vector<Scalar> ups;
      for (const auto& x : u) ups.push_back(check_n(scalar_from_json(x)));
      return ScaleSpec::from_upsilon(std::move(ups));
    } catch (const PreconditionError& e) {
      throw SchemaError(std::string("ScaleSpec: ") + e.what());
    }
  });
}

Json mixed_to_json(const MixedField& t) {
  return Json{{"n", t.n()},
              {"tractor_slots", t.tractor_slots()},
              {"tensor_slots", t.tensor_slots()},
              {"weight", t.weight()},
              {"splitting", scale_to_json(t.splitting())},
              {"components", components_to_json(t)}};
}

MixedField mixed_from_json(const Json& j) {
  return guarded("MixedField", [&] {
    if (j.contains("bundle") && j["bundle"] != "conformal") throw SchemaError("not a conformal tractor field");
    const int n = int_member(j, "n");
    const int t = int_member(j, "tractor_slots"), s = int_member(j, "tensor_slots");
    if (t < 0 || s < 0 || t + s > 6) throw SchemaError("slot counts out of range");
    const ScaleSpec sp = scale_from_json(member(j, "splitting"));
    if (sp.n() != n) throw SchemaError("splitting dimension differs from n");
    MixedField f(n, t, s, int_member(j, "weight"), sp);
    components_from_json(member(j, "components"), f, false);
    return f;
  });
}

Json projective_to_json(const ProjectiveField& t) {
  return Json{{"bundle", "projective"},
              {"n", t.n()},
              {"tractor_slots", t.tractor_slots()},
              {"tensor_slots", t.tensor_slots()},
              {"weight", t.weight()},
              {"splitting", scale_to_json(t.scale())},
              {"components", components_to_json(t)}};
}

ProjectiveField projective_from_json(const Json& j) {
  return guarded("ProjectiveField", [&] {
    if (!j.contains("bundle") || j["bundle"] != "projective") throw SchemaError("missing \"bundle\":\"projective\"");
    const int n = int_member(j, "n");
    const int t = int_member(j, "tractor_slots"), s = int_member(j, "tensor_slots");
    if (t < 0 || s < 0 || t + s > 6) throw SchemaError("slot counts out of range");
    const ScaleSpec sp = scale_from_json(member(j, "splitting"));
    if (sp.n() != n) throw SchemaError("splitting dimension differs from n");
    ProjectiveField f(n, t, s, int_member(j, "weight"), sp);
    components_from_json(member(j, "components"), f, false);
    return f;
  });
}

// ---------------------------------------------------------------- reports

Json verdict_to_json(const ScaleVerdict& v) {
  Json j{{"kind", to_string(v.kind)}, {"detail", v.detail}};
  if (v.witness) j[v.witness_name] = scalar_to_json(*v.witness);
  j["residual"] = v.residual ? mixed_to_json(*v.residual) : Json(nullptr);
  return j;
}

ScaleVerdict verdict_from_json(const Json& j) {
  return guarded("ScaleVerdict", [&] {
    ScaleVerdict v;
    const Json& k = member(j, "kind");
    bool found = false;
    for (auto kind : {VerdictKind::SKS, VerdictKind::KS, VerdictKind::EinsteinSKS, VerdictKind::EinsteinKS,
                      VerdictKind::Fail}) {
      if (k == to_string(kind)) {
        v.kind = kind;
        found = true;
      }
    }
    if (!found) throw SchemaError("unknown verdict kind");
    if (j.contains("detail")) v.detail = j["detail"].get<std::string>();
    for (const char* name : {"F", "lambda", "kappa"}) {
      if (j.contains(name)) {
        v.witness_name = name;
        v.witness = scalar_from_json(j[name]);
      }
    }
    const Json& r = member(j, "residual");
    if (!r.is_null()) v.residual = mixed_from_json(r);
    return v;
  });
}

Json basis_report_to_json(const BasisReport& r) {
  Json fields = Json::array(), tractors = Json::array();
  for (const auto& f : r.fields) fields.push_back(field_to_json(f));
  for (const auto& t : r.tractors) tractors.push_back(mixed_to_json(t));
  return Json{{"label", r.label},
              {"n", r.n},
              {"dimension", r.dimension},
              {"degree_bound", optional_int(r.degree_bound)},
              {"matrix_shape", Json::array({r.matrix_rows, r.matrix_cols})},
              {"rank", r.rank},
              {"next_degree_nullity", optional_int(r.next_degree_nullity)},
              {"cross_check", optional_int(r.cross_check)},
              {"cross_check_label", r.cross_check_label},
              {"point", rational_vector(r.point)},
              {"fields", fields},
              {"tractors", tractors}};
}

BasisReport basis_report_from_json(const Json& j) {
  return guarded("BasisReport", [&] {
    BasisReport r;
    r.label = member(j, "label").get<std::string>();
    r.n = int_member(j, "n");
    r.dimension = int_member(j, "dimension");
    r.degree_bound = optional_int_of(j, "degree_bound");
    const Json& shape = member(j, "matrix_shape");
    if (!shape.is_array() || shape.size() != 2) throw SchemaError("\"matrix_shape\" must be [rows, cols]");
    r.matrix_rows = shape[0].get<std::size_t>();
    r.matrix_cols = shape[1].get<std::size_t>();
    r.rank = int_member(j, "rank");
    r.next_degree_nullity = optional_int_of(j, "next_degree_nullity");
    r.cross_check = optional_int_of(j, "cross_check");
    if (j.contains("cross_check_label")) r.cross_check_label = j["cross_check_label"].get<std::string>();
    if (j.contains("point")) r.point = rational_vector_of(j["point"]);
    for (const auto& f : member(j, "fields")) r.fields.push_back(field_from_json(f));
    for (const auto& t : member(j, "tractors")) r.tractors.push_back(mixed_from_json(t));
    return r;
  });
}

Json prolongation_to_json(const ProlongationRecord& r) {
  return Json{{"input_hash", r.input_hash},
              {"splitting", scale_to_json(r.splitting)},
              {"k", field_to_json(r.k)},
              {"half", mixed_to_json(r.half)},
              {"full", r.full ? mixed_to_json(*r.full) : Json(nullptr)},
              {"weyl", r.weyl ? mixed_to_json(*r.weyl) : Json(nullptr)}};
}

ProlongationRecord prolongation_from_json(const Json& j) {
  return guarded("ProlongationRecord", [&] {
    ProlongationRecord r;
    r.input_hash = member(j, "input_hash").get<std::string>();
    r.splitting = scale_from_json(member(j, "splitting"));
    r.k = field_from_json(member(j, "k"));
    r.half = mixed_from_json(member(j, "half"));
    if (j.contains("full") && !j["full"].is_null()) r.full = mixed_from_json(j["full"]);
    if (j.contains("weyl") && !j["weyl"].is_null()) r.weyl = mixed_from_json(j["weyl"]);
    return r;
  });
}

std::string fnv1a_hex(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string json_hash(const Json& j) { return fnv1a_hex(j.dump()); }

Json parse_json(std::string_view text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw SchemaError(std::string("invalid JSON: ") + e.what());
  }
}

}  // namespace tractorlab
