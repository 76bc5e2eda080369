#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "tractorlab/errors.hpp"
#include "tractorlab/io.hpp"
#include "tractorlab/parallel.hpp"
#include "tractorlab/poly_parser.hpp"
#include "tractorlab/verify.hpp"

namespace py = pybind11;
using namespace tractorlab;

// JSON text in, JSON text out; the Python package converts to dicts.
namespace {

WeightedTensorField field_arg(const std::string& s) { return field_from_json(parse_json(s)); }

ScaleSpec scale_arg(const std::string& s, int n) {
  const auto first = s.find_first_not_of(" \t\n");
  if (first != std::string::npos && s[first] == '{') {
    const Json j = parse_json(s);
    ScaleSpec sp = j.contains("n") ? scale_from_json(j) : ScaleSpec::from_sigma(scalar_from_json(j));
    if (sp.n() != n) throw SchemaError("scale dimension differs from the field");
    return sp;
  }
  return ScaleSpec::from_sigma(Scalar(parse_poly(s, n)));
}

std::string results_json(const std::vector<IdentityResult>& rs) {
  Json a = Json::array();
  for (const auto& r : rs) a.push_back(Json{{"name", r.name}, {"status", to_string(r.status)}, {"detail", r.detail}});
  return a.dump();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Exact tractor calculus on conformally flat R^n (JSON interface)";

  static py::exception<Error> base(m, "TractorError");
  static py::exception<SchemaError> schema(m, "SchemaError", base.ptr());
  static py::exception<PreconditionError> precondition(m, "PreconditionError", base.ptr());
  static py::exception<DimensionError> dimension(m, "DimensionError", base.ptr());
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const SchemaError& e) {
      PyErr_SetString(schema.ptr(), e.what());
    } catch (const PreconditionError& e) {
      PyErr_SetString(precondition.ptr(), e.what());
    } catch (const DimensionError& e) {
      PyErr_SetString(dimension.ptr(), e.what());
    } catch (const Error& e) {
      PyErr_SetString(base.ptr(), e.what());
    }
  });

  m.def("worker_count", &worker_count);

  m.def("parse_poly", [](const std::string& text, int n) { return poly_to_json(parse_poly(text, n)).dump(); },
        py::arg("text"), py::arg("n"));

  m.def("ckv_basis", [](int n, int degree) {
    py::gil_scoped_release nogil;
    return basis_report_to_json(ckv_basis(n, degree)).dump();
  }, py::arg("n"), py::arg("degree") = 2);

  m.def("ckt_basis", [](int n, int degree) {
    py::gil_scoped_release nogil;
    return basis_report_to_json(ckt_basis(n, degree)).dump();
  }, py::arg("n"), py::arg("degree") = 4);

  m.def("weyl_space_dimension", [](int N) { return weyl_space_basis(N).dimension; }, py::arg("N"));

  m.def("einstein_compatible_dim", [](int n, const std::string& sigma) {
    const ScaleSpec sc = scale_arg(sigma, n);
    py::gil_scoped_release nogil;
    Json j = basis_report_to_json(einstein_compatible_dim(sc));
    return j.dump();
  }, py::arg("n"), py::arg("sigma"));

  m.def("is_conformal_killing", [](const std::string& field, const std::optional<std::string>& splitting) {
    const auto k = field_arg(field);
    const ScaleSpec sp = splitting ? scale_arg(*splitting, k.n()) : ScaleSpec::reference(k.n());
    if (k.rank() == 1) return is_ck_vector(k, sp);
    if (k.rank() == 2) return is_ck_tensor(k, sp);
    throw SchemaError("expected a rank 1 or rank 2 field");
  }, py::arg("field"), py::arg("splitting") = std::nullopt);

  m.def("prolong", [](const std::string& field, const std::string& level, const std::optional<std::string>& splitting) {
    const auto k = field_arg(field);
    const ScaleSpec ref = ScaleSpec::reference(k.n());
    const ScaleSpec sp = splitting ? scale_arg(*splitting, k.n()) : ref;
    if (k.rank() != 1 && k.rank() != 2) throw SchemaError("expected a rank 1 or rank 2 field");
    if (level != "half" && level != "full" && level != "weyl") throw SchemaError("level must be half, full or weyl");
    if (level != "half" && !sp.is_reference()) throw SchemaError("full prolongation needs the reference splitting");
    if (level == "weyl" && k.rank() != 2) throw SchemaError("the Weyl level needs a rank 2 tensor");
    const MixedField half = k.rank() == 1 ? half_prolong_vector(k, sp) : half_prolong_tensor(k, sp);
    if (level == "half") return mixed_to_json(half).dump();
    const MixedField full = k.rank() == 1 ? full_prolong_vector(half) : full_prolong_tensor(half);
    if (level == "full") return mixed_to_json(full).dump();
    return mixed_to_json(to_weyl(full)).dump();
  }, py::arg("field"), py::arg("level") = "full", py::arg("splitting") = std::nullopt);

  m.def("recover_top", [](const std::string& tractor) { return field_to_json(recover_top(mixed_from_json(parse_json(tractor)))).dump(); },
        py::arg("tractor"));

  m.def("check_scale", [](const std::string& field, const std::string& sigma, const std::string& mode,
                          const std::optional<std::string>& splitting) {
    const auto k = field_arg(field);
    const ScaleSpec sc = scale_arg(sigma, k.n());
    std::optional<ScaleSpec> sp;
    if (splitting) sp = scale_arg(*splitting, k.n());
    if (k.rank() != 2) throw SchemaError("check_scale expects a rank 2 tensor");
    ScaleVerdict v;
    if (mode == "sks") v = sks_test_tensor(k, sc, sp);
    else if (mode == "ks") v = ks_test_tensor(k, sc, sp);
    else if (mode == "einstein-ks") v = einstein_ks_kappa(k, sc);
    else throw SchemaError("mode must be sks, ks or einstein-ks");
    return verdict_to_json(v).dump();
  }, py::arg("field"), py::arg("sigma"), py::arg("mode") = "ks", py::arg("splitting") = std::nullopt);

  m.def("einstein_ks_tests", [](const std::string& field, const std::string& sigma) {
    const auto k = field_arg(field);
    const ScaleSpec sc = scale_arg(sigma, k.n());
    return Json{{"ks", ks_test_tensor(k, sc).pass()},
                {"weyl", einstein_ks_test_weyl(k, sc)},
                {"k4", einstein_ks_test_k4(k, sc)},
                {"kappa", einstein_ks_kappa(k, sc).pass()}}
        .dump();
  }, py::arg("field"), py::arg("sigma"));

  m.def("new_killing", [](const std::string& field, const std::string& sigma) {
    const auto k = field_arg(field);
    const ScaleSpec sc = scale_arg(sigma, k.n());
    if (k.rank() == 1) return field_to_json(new_killing_vector(k, sc)).dump();
    if (k.rank() == 2) return field_to_json(new_killing_tensor(k, sc)).dump();
    throw SchemaError("expected a rank 1 or rank 2 field");
  }, py::arg("field"), py::arg("sigma"));

  m.def("is_killing_tensor", [](const std::string& field, const std::string& sigma) {
    const auto k = field_arg(field);
    return is_killing_tensor(k, scale_arg(sigma, k.n()));
  }, py::arg("field"), py::arg("sigma"));

  m.def("verify", [](int n, const std::string& suite, std::uint64_t seed) {
    py::gil_scoped_release nogil;
    if (suite == "identities") return results_json(verify_identities(n, seed));
    if (suite == "prolongation") return results_json(verify_prolongation(n, seed));
    if (suite == "scales") return results_json(verify_scales(n, seed));
    throw SchemaError("suite must be identities, prolongation or scales");
  }, py::arg("n"), py::arg("suite"), py::arg("seed") = 1);
}
