#include "commands.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "tractorlab/errors.hpp"
#include "tractorlab/io.hpp"
#include "tractorlab/poly_parser.hpp"
#include "tractorlab/verify.hpp"

namespace tractorlab::cli {

namespace {

using Clock = std::chrono::steady_clock;

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_json(ss.str());
}

// PATH to a ScaleSpec / Scalar JSON file, or an inline polynomial in x1..xn.
ScaleSpec resolve_scale(const std::string& arg, int n) {
  std::error_code ec;
  if (std::filesystem::is_regular_file(arg, ec)) {
    const Json j = read_json_file(arg);
    ScaleSpec s;
    if (j.is_object() && j.contains("n")) {
      s = scale_from_json(j);
    } else {
      const Scalar sig = scalar_from_json(j);
      if (sig.is_zero()) throw SchemaError("sigma must not vanish identically");
      s = ScaleSpec::from_sigma(sig);
    }
    if (s.n() != n) throw SchemaError("scale dimension " + std::to_string(s.n()) + " differs from n = " + std::to_string(n));
    return s;
  }
  const Poly p = parse_poly(arg, n);
  if (p.is_zero()) throw SchemaError("sigma must not vanish identically");
  return ScaleSpec::from_sigma(Scalar(p));
}

void emit(const Common& c, Json report, const std::string& text, Clock::time_point start) {
  if (c.timings) {
    report["timings_ms"] = std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - start).count();
  }
  if (c.out) {
    std::ofstream f(*c.out);
    if (!f) throw SchemaError("cannot write " + *c.out);
    f << report.dump(2) << '\n';
  }
  if (c.format == "text") {
    std::cout << text;
    if (c.out) std::cout << "report written to " << *c.out << '\n';
  } else if (!c.out) {
    std::cout << report.dump(2) << '\n';
  }
}

std::string slot_summary(const char* name, const MixedField& t) {
  std::size_t nz = 0;
  for (std::size_t f = 0; f < t.size(); ++f) nz += !t[f].is_zero();
  std::ostringstream os;
  os << name << ": " << t.tractor_slots() << " tractor slot(s), " << nz << " nonzero component(s)\n";
  return os.str();
}

}  // namespace

int cmd_verify(const Common& c, int n, const std::string& suite) {
  const auto start = Clock::now();
  if (n < 3 || n > kMaxVars) throw SchemaError("--n must lie in [3, 8]");
  Json checks = Json::array();
  std::ostringstream text;
  int passed = 0, failed = 0, skipped = 0;
  auto add = [&](const char* group, const std::vector<IdentityResult>& rs) {
    for (const auto& r : rs) {
      checks.push_back(Json{{"suite", group}, {"name", r.name}, {"status", to_string(r.status)}, {"detail", r.detail}});
      passed += r.status == CheckStatus::Pass;
      failed += r.status == CheckStatus::Fail;
      skipped += r.status == CheckStatus::Skipped;
      text << to_string(r.status) << "  " << group << "." << r.name;
      if (!r.detail.empty()) text << "  (" << r.detail << ")";
      text << '\n';
    }
  };
  const bool all = suite == "all";
  if (all || suite == "identities") add("identities", verify_identities(n, c.seed));
  if (all || suite == "prolongation") add("prolongation", verify_prolongation(n, c.seed));
  if (all || suite == "scales") add("scales", verify_scales(n, c.seed));
  const bool ok = failed == 0;
  text << passed << " passed, " << failed << " failed, " << skipped << " skipped (seed " << c.seed << ")\n";
  Json report{{"command", "verify"},
              {"n", n},
              {"suite", suite},
              {"seed", c.seed},
              {"checks", checks},
              {"summary", {{"passed", passed}, {"failed", failed}, {"skipped", skipped}}},
              {"status", ok ? "pass" : "fail"}};
  emit(c, report, text.str(), start);
  return ok ? kPass : kCheckFailure;
}

int cmd_ckt_basis(const Common& c, int n, int rank, std::optional<int> degree) {
  const auto start = Clock::now();
  if (n < 2 || n > kMaxVars) throw SchemaError("--n must lie in [2, 8]");
  if (rank != 1 && rank != 2) throw SchemaError("--rank must be 1 or 2");
  const int d = degree.value_or(rank == 1 ? 2 : 4);
  if (d < 0) throw SchemaError("--degree must be non-negative");
  const Json inputs{{"command", "ckt-basis"}, {"n", n}, {"rank", rank}, {"degree", d}};
  const BasisReport r = rank == 1 ? ckv_basis(n, d) : ckt_basis(n, d);
  Json report = basis_report_to_json(r);
  report["command"] = "ckt-basis";
  report["input_hash"] = json_hash(inputs);
  const bool ok = !r.cross_check || *r.cross_check == r.dimension;
  report["status"] = ok ? "pass" : "fail";
  std::ostringstream text;
  text << r.label << ": dimension " << r.dimension << " (n = " << n << ", degree <= " << d << ", matrix "
       << r.matrix_rows << " x " << r.matrix_cols << ", rank " << r.rank << ")\n";
  if (r.cross_check) text << r.cross_check_label << " = " << *r.cross_check << '\n';
  emit(c, report, text.str(), start);
  return ok ? kPass : kCheckFailure;
}

int cmd_prolong(const Common& c, const std::string& input, const std::string& level,
                const std::optional<std::string>& sigma) {
  const auto start = Clock::now();
  const Json in = read_json_file(input);
  const WeightedTensorField k = field_from_json(in);
  const int n = k.n();
  if (k.rank() != 1 && k.rank() != 2) throw SchemaError("input must be a rank 1 or rank 2 covariant field");
  const ScaleSpec ref = ScaleSpec::reference(n);
  const ScaleSpec sp = sigma ? resolve_scale(*sigma, n) : ref;
  if (level != "half" && !sp.is_reference()) {
    throw SchemaError("full and Weyl prolongations are only available in the flat reference splitting");
  }
  if (level == "weyl" && k.rank() != 2) throw SchemaError("the Weyl level needs a rank 2 tensor");
  ProlongationRecord rec;
  rec.input_hash = json_hash(in);
  rec.splitting = sp;
  rec.k = k;
  rec.half = k.rank() == 1 ? half_prolong_vector(k, sp) : half_prolong_tensor(k, sp);
  std::string text = slot_summary("half", rec.half);
  if (level != "half") {
    rec.full = k.rank() == 1 ? full_prolong_vector(rec.half) : full_prolong_tensor(rec.half);
    text += slot_summary("full", *rec.full);
  }
  if (level == "weyl") {
    rec.weyl = to_weyl(*rec.full);
    text += slot_summary("weyl", *rec.weyl);
  }
  Json report = prolongation_to_json(rec);
  report["command"] = "prolong";
  report["level"] = level;
  emit(c, report, text, start);
  return kPass;
}

int cmd_check_scale(const Common& c, const std::string& input, const std::string& sigma, const std::string& mode) {
  const auto start = Clock::now();
  const Json in = read_json_file(input);
  const WeightedTensorField k = field_from_json(in);
  const ScaleSpec scale = resolve_scale(sigma, k.n());
  Json report{{"command", "check-scale"}, {"mode", mode}, {"input_hash", json_hash(in)}, {"scale", scale_to_json(scale)}};
  ScaleVerdict v;
  if (k.rank() == 1) {
    const bool ok = mode == "einstein-ks" ? einstein_killing_vector_check(k, scale) : killing_scale_test_vector(k, scale);
    v.kind = ok ? VerdictKind::KS : VerdictKind::Fail;
    if (mode == "einstein-ks" && ok) v.kind = VerdictKind::EinsteinKS;
    v.detail = ok ? "" : "I^A K_A != 0";
  } else if (k.rank() == 2) {
    if (mode == "sks") {
      v = sks_test_tensor(k, scale);
    } else if (mode == "ks") {
      v = ks_test_tensor(k, scale);
    } else {
      const bool w = einstein_ks_test_weyl(k, scale);
      const bool k4 = einstein_ks_test_k4(k, scale);
      v = einstein_ks_kappa(k, scale);
      report["checks"] = Json{{"weyl", w}, {"k4", k4}, {"kappa", v.pass()}};
    }
  } else {
    throw SchemaError("input must be a rank 1 or rank 2 covariant field");
  }
  report["verdict"] = verdict_to_json(v);
  std::string text = "verdict: " + to_string(v.kind) + "\n";
  if (v.witness) text += v.witness_name + " = " + v.witness->to_string() + "\n";
  if (!v.detail.empty()) text += v.detail + "\n";
  emit(c, report, text, start);
  return v.pass() ? kPass : kCheckFailure;
}

int cmd_einstein_dim(const Common& c, int n, const std::string& sigma) {
  const auto start = Clock::now();
  if (n < 2 || n > kMaxVars) throw SchemaError("--n must lie in [2, 8]");
  const ScaleSpec scale = resolve_scale(sigma, n);
  const BasisReport r = einstein_compatible_dim(scale);
  Json report = basis_report_to_json(r);
  report["command"] = "einstein-dim";
  report["scale"] = scale_to_json(scale);
  report["input_hash"] = json_hash(Json{{"command", "einstein-dim"}, {"n", n}, {"scale", scale_to_json(scale)}});
  report["expected"] = expected_einstein_dimension(n);
  const bool ok = r.dimension == expected_einstein_dimension(n) && r.cross_check == r.dimension;
  report["status"] = ok ? "pass" : "fail";
  std::ostringstream text;
  text << "dimension " << r.dimension << " (expected " << expected_einstein_dimension(n) << ", cross-check "
       << (r.cross_check ? std::to_string(*r.cross_check) : "-") << ")\n";
  emit(c, report, text.str(), start);
  return ok ? kPass : kCheckFailure;
}

int cmd_new_killing(const Common& c, const std::string& input, const std::string& sigma, std::optional<int> rank) {
  const auto start = Clock::now();
  const Json in = read_json_file(input);
  const WeightedTensorField k = field_from_json(in);
  if (rank && *rank != k.rank()) throw SchemaError("--rank does not match the input field");
  const ScaleSpec scale = resolve_scale(sigma, k.n());
  WeightedTensorField r;
  bool killing = false;
  if (k.rank() == 1) {
    r = new_killing_vector(k, scale);
    killing = ck_vector_residual(r, scale).is_zero() && killing_scale_test_vector(r, scale);
  } else if (k.rank() == 2) {
    r = new_killing_tensor(k, scale);
    killing = is_killing_tensor(r, scale);
  } else {
    throw SchemaError("input must be a rank 1 or rank 2 covariant field");
  }
  Json report{{"command", "new-killing"},
              {"input_hash", json_hash(in)},
              {"scale", scale_to_json(scale)},
              {"rank", k.rank()},
              {"field", field_to_json(r)},
              {"killing", killing}};
  std::ostringstream text;
  text << "new Killing " << (k.rank() == 1 ? "vector" : "tensor") << ": Killing equation "
       << (killing ? "holds" : "fails") << '\n';
  for (std::size_t f = 0; f < r.size(); ++f) {
    if (r[f].is_zero()) continue;
    const auto idx = r.shape().unflatten(f);
    text << "  [";
    for (std::size_t i = 0; i < idx.size(); ++i) text << (i ? "," : "") << idx[i];
    text << "] " << r[f].to_string() << '\n';
  }
  emit(c, report, text.str(), start);
  return killing ? kPass : kCheckFailure;
}

}  // namespace tractorlab::cli
