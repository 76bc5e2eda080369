#include "tractorlab/verify.hpp"

#include <functional>
#include <string>

#include "tractorlab/errors.hpp"
#include "tractorlab/prolongation.hpp"
#include "tractorlab/random.hpp"
#include "tractorlab/scales.hpp"
#include "tractorlab/solver.hpp"

namespace tractorlab {

namespace {

using Results = std::vector<IdentityResult>;

void run(Results& out, std::string name, const std::function<bool(std::string&)>& body) {
  std::string detail;
  CheckStatus st = CheckStatus::Fail;
  try {
    st = body(detail) ? CheckStatus::Pass : CheckStatus::Fail;
  } catch (const std::exception& e) {
    detail = e.what();
  }
  out.push_back({std::move(name), st, std::move(detail)});
}

WeightedTensorField combination(Rng& rng, const std::vector<WeightedTensorField>& basis) {
  WeightedTensorField k = basis[0] * Scalar(basis[0].n(), rng.uniform(1, 3));
  for (std::size_t j = 1; j < basis.size(); ++j) {
    const int c = rng.uniform(-3, 3);
    if (c != 0) k += basis[j] * Scalar(basis[j].n(), c);
  }
  return k;
}

ScaleSpec random_splitting(Rng& rng, int n) {
  Poly u = random_poly(rng, n, 2, 3);
  if (u.degree() < 1) u += Poly::variable(n, 0);
  return ScaleSpec::from_potential(Scalar(u));
}

Scalar round_sigma(int n) {
  Poly s(n, 1);
  for (int a = 0; a < n; ++a) s += Poly::variable(n, a) * Poly::variable(n, a);
  return Scalar(s);
}

WeightedTensorField axis(int n, int a) {
  auto k = WeightedTensorField::covariant(n, 1, 2);
  k.at({a}) = Scalar(n, 1);
  return k;
}

std::string tag(const char* base, int t) { return std::string(base) + "[" + std::to_string(t) + "]"; }

}  // namespace

std::vector<IdentityResult> verify_identities(int n, std::uint64_t seed, int trials) {
  return d_identities_check(n, trials, seed);
}

std::vector<IdentityResult> verify_prolongation(int n, std::uint64_t seed, int trials) {
  Results out;
  Rng rng(seed);
  const auto ref = ScaleSpec::reference(n);
  const BasisReport ckv = ckv_basis(n);
  const BasisReport ckt = ckt_basis(n);
  for (int t = 0; t < trials; ++t) {
    const auto k = combination(rng, ckv.fields);
    const auto sp = random_splitting(rng, n);
    run(out, tag("vector.ck", t), [&](std::string&) { return is_ck_vector(k, ref) && is_ck_vector(k, sp); });
    run(out, tag("vector.full_skew_parallel", t), [&](std::string& d) {
      const auto kk = full_prolong_vector(half_prolong_vector(k, ref));
      if (!(kk + permute_tractor_slots(kk, {1, 0})).is_zero()) {
        d = "D_A K_B is not skew";
        return false;
      }
      return is_parallel(kk);
    });
    run(out, tag("vector.half_splitting_invariance", t), [&](std::string&) {
      return change_splitting(half_prolong_vector(k, ref), sp) == half_prolong_vector(k, sp);
    });
    run(out, tag("vector.recover_top", t),
        [&](std::string&) { return recover_top(half_prolong_vector(k, ref)) == k; });
  }
  for (int t = 0; t < trials; ++t) {
    const auto k = combination(rng, ckt.fields);
    const auto sp = random_splitting(rng, n);
    run(out, tag("tensor.ck", t), [&](std::string&) { return is_ck_tensor(k, ref) && is_ck_tensor(k, sp); });
    run(out, tag("tensor.full", t), [&](std::string& d) {
      const auto half = half_prolong_tensor(k, ref);
      const auto kk = full_prolong_tensor(half);
      if (auto e = k_space_defect(kk)) {
        d = *e;
        return false;
      }
      if (!is_parallel(kk)) {
        d = "full prolongation is not parallel";
        return false;
      }
      if (!(from_weyl(to_weyl(kk)) == kk)) {
        d = "K -> W -> K differs";
        return false;
      }
      if (!(half_from_full(kk) == half)) {
        d = "half_from_full differs from the half prolongation";
        return false;
      }
      return recover_top(half) == k;
    });
    run(out, tag("tensor.half_splitting_invariance", t), [&](std::string&) {
      return change_splitting(half_prolong_tensor(k, ref), sp) == half_prolong_tensor(k, sp);
    });
  }
  return out;
}

std::vector<IdentityResult> verify_scales(int n, std::uint64_t seed, int trials) {
  Results out;
  Rng rng(seed);
  const auto sph = ScaleSpec::from_sigma(round_sigma(n));
  const auto flat = ScaleSpec::from_sigma(Scalar(n, 1));
  run(out, "einstein.dimension", [&](std::string& d) {
    const auto r = einstein_compatible_dim(sph);
    d = std::to_string(r.dimension);
    return r.dimension == expected_einstein_dimension(n) && r.cross_check == r.dimension;
  });
  const BasisReport ckt = ckt_basis(n);
  const BasisReport comp = einstein_compatible_ckt_basis(sph);
  std::vector<WeightedTensorField> inputs;
  for (int t = 0; t < trials; ++t) {
    inputs.push_back(combination(rng, ckt.fields));
    inputs.push_back(combination(rng, comp.fields));
  }
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    const auto& k = inputs[i];
    run(out, tag("einstein.verdicts_agree", static_cast<int>(i)), [&](std::string& d) {
      const bool ks = ks_test_tensor(k, sph).pass();
      const bool w = einstein_ks_test_weyl(k, sph);
      const bool k4 = einstein_ks_test_k4(k, sph);
      const bool kap = einstein_ks_kappa(k, sph).pass();
      d = std::string("ks=") + (ks ? "1" : "0") + " weyl=" + (w ? "1" : "0") + " k4=" + (k4 ? "1" : "0") +
          " kappa=" + (kap ? "1" : "0");
      // odd inputs come from the compatible subspace and must pass
      return ks == w && ks == k4 && ks == kap && (i % 2 == 0 || ks);
    });
    const auto sp = random_splitting(rng, n);
    run(out, tag("splitting.verdicts", static_cast<int>(i)), [&](std::string&) {
      for (const auto& sc : {flat, sph}) {
        if (sks_test_tensor(k, sc).kind != sks_test_tensor(k, sc, sp).kind) return false;
        if (ks_test_tensor(k, sc).kind != ks_test_tensor(k, sc, sp).kind) return false;
      }
      return true;
    });
  }
  run(out, "einstein.sks_witnesses", [&](std::string& d) {
    auto rot = WeightedTensorField::covariant(n, 1, 2);
    rot.at({0}) = Scalar(Poly::variable(n, 1) * Rational(-1));
    rot.at({1}) = Scalar(Poly::variable(n, 0));
    const auto t = new_killing_vector(axis(n, n - 1), sph);
    const auto k = tracefree_sym2(symmetrize(tensor_product(rot, t), {0, 1}));
    if (sks_test_tensor(k, sph).kind != VerdictKind::EinsteinSKS) {
      d = "not an Einstein SKS";
      return false;
    }
    const auto ks = ks_test_tensor(k, sph);
    const auto kap = einstein_ks_kappa(k, sph);
    if (!ks.pass() || !ks.witness->is_zero()) {
      d = "lambda != 0";
      return false;
    }
    if (!kap.pass()) return false;
    for (int a = 0; a < n; ++a)
      if (!kap.witness->derivative(a).is_zero()) {
        d = "kappa not constant";
        return false;
      }
    return true;
  });
  run(out, "einstein.new_killing_vector", [&](std::string&) {
    auto dil = WeightedTensorField::covariant(n, 1, 2);
    for (int a = 0; a < n; ++a) dil.at({a}) = Scalar(Poly::variable(n, a));
    for (const auto& k : {axis(n, 0), dil}) {
      const auto v = new_killing_vector(k, sph);
      if (!ck_vector_residual(v, sph).is_zero() || !killing_scale_test_vector(v, sph)) return false;
    }
    return true;
  });
  run(out, "einstein.new_killing_tensor", [&](std::string&) {
    const auto e = axis(n, 0);
    const auto r = new_killing_tensor(tracefree_sym2(tensor_product(e, e)), sph);
    return is_killing_tensor(r, sph) && !r.is_zero();
  });
  return out;
}

}  // namespace tractorlab
