#include "tractorlab/scales.hpp"

#include <algorithm>
#include <map>

#include "tractorlab/errors.hpp"
#include "tractorlab/solver.hpp"

namespace tractorlab {

std::string to_string(VerdictKind k) {
  switch (k) {
    case VerdictKind::SKS:
      return "SKS";
    case VerdictKind::KS:
      return "KS";
    case VerdictKind::EinsteinSKS:
      return "EinsteinSKS";
    case VerdictKind::EinsteinKS:
      return "EinsteinKS";
    case VerdictKind::Fail:
      return "fail";
  }
  return "fail";
}

namespace {

ScaleSpec own_scale(const ScaleSpec& scale) {
  if (!scale.has_sigma()) throw PreconditionError("the scale must carry sigma, not only Upsilon");
  return ScaleSpec::from_sigma(scale.sigma());
}

ScaleSpec pick_splitting(const std::optional<ScaleSpec>& s, int n) {
  if (!s) return ScaleSpec::reference(n);
  if (s->n() != n) throw DimensionError("splitting dimension does not match the field");
  return *s;
}

void require_ck_tensor(const WeightedTensorField& k) {
  if (!is_ck_tensor(k, ScaleSpec::reference(k.n()))) throw PreconditionError("input is not a conformal Killing tensor");
}

Scalar scalar_of(const MixedField& t) {
  if (t.rank() != 0) throw DimensionError("expected a density");
  return t[0];
}

MixedField density(const Scalar& s, int w, const ScaleSpec& splitting) {
  return MixedField::from_tensor(WeightedTensorField::density(s, w), splitting);
}

MixedField weighted(MixedField t, int w) {
  t.set_weight(w);
  return t;
}

// Only the X-slot of a one-slot tractor may be nonzero.
bool only_x_slot(const MixedField& t) {
  for (int i = 0; i <= t.n(); ++i)
    if (!t.at({i}).is_zero()) return false;
  return true;
}

Poly lcm(const Poly& a, const Poly& b) {
  Poly q;
  if (try_divide(a, b, q)) return a;
  if (try_divide(b, a, q)) return b;
  return exact_quotient(a * b, gcd(a, b));
}

// Polynomial lambda (reference trivialization, weight 2) with
// nabla lambda = -rho in the scale; free coefficients are zero.
std::optional<Scalar> integrate_rho(const WeightedTensorField& rho, const ScaleSpec& own, int degree) {
  const int n = rho.n();
  std::vector<WeightedTensorField> cols;
  std::vector<int> e(n, 0);
  std::vector<Poly> monos;
  for (int d = 0; d <= degree; ++d) {
    auto rec = [&](auto&& self, int var, int left) -> void {
      if (var == n - 1) {
        e[var] = left;
        monos.push_back(Poly::monomial(n, Monomial::from_exponents(e), 1));
        return;
      }
      for (int k = left; k >= 0; --k) {
        e[var] = k;
        self(self, var + 1, left - k);
      }
    };
    rec(rec, 0, d);
  }
  for (const auto& m : monos) cols.push_back(covderiv(WeightedTensorField::density(Scalar(m), 2), own));
  std::vector<SparseRow> rows;
  std::vector<Rational> rhs;
  for (int a = 0; a < n; ++a) {
    Poly l = rho.at({a}).den();
    for (const auto& c : cols) l = lcm(l, c.at({a}).den());
    std::map<std::uint64_t, std::size_t> row_of;
    std::vector<std::map<int, Rational>> acc;
    std::vector<Rational> b;
    auto row = [&](const Monomial& m) {
      auto it = row_of.find(m.bits());
      if (it == row_of.end()) {
        it = row_of.emplace(m.bits(), acc.size()).first;
        acc.emplace_back();
        b.emplace_back(0);
      }
      return it->second;
    };
    for (std::size_t j = 0; j < cols.size(); ++j) {
      const Scalar& c = cols[j].at({a});
      if (c.is_zero()) continue;
      const Poly p = c.num() * exact_quotient(l, c.den());
      for (const auto& t : p.terms()) acc[row(t.mono)][static_cast<int>(j)] += t.coef;
    }
    if (!rho.at({a}).is_zero()) {
      const Poly p = rho.at({a}).num() * exact_quotient(l, rho.at({a}).den());
      for (const auto& t : p.terms()) b[row(t.mono)] -= t.coef;
    }
    for (std::size_t i = 0; i < acc.size(); ++i) {
      SparseRow r;
      for (auto& [c, v] : acc[i])
        if (sgn(v) != 0) r.emplace_back(c, v);
      rows.push_back(std::move(r));
      rhs.push_back(b[i]);
    }
  }
  auto sol = solve_affine(static_cast<int>(monos.size()), rows, rhs);
  if (!sol) return std::nullopt;
  Poly lam(n);
  for (std::size_t j = 0; j < monos.size(); ++j)
    if (sgn((*sol)[j]) != 0) lam += monos[j] * (*sol)[j];
  return Scalar(lam);
}

int scalar_degree(const Scalar& s) { return std::max(s.num().degree(), s.den().degree()); }

int field_degree(const WeightedTensorField& k) {
  int d = 0;
  for (std::size_t f = 0; f < k.size(); ++f)
    if (!k[f].is_zero()) d = std::max(d, scalar_degree(k[f]));
  return d;
}

MixedField weyl_of(const WeightedTensorField& k) {
  return to_weyl(full_prolong_tensor(half_prolong_tensor(k, ScaleSpec::reference(k.n()))));
}

ScaleTractor einstein_tractor(const ScaleSpec& scale) {
  const ScaleSpec own = own_scale(scale);
  ScaleTractor st = scale_tractor(own);
  if (!is_parallel(st.tractor)) throw PreconditionError("scale tractor is not parallel (not an Einstein scale)");
  if (st.iota.is_zero()) throw PreconditionError("iota = I^A I_A vanishes; Ricci-flat scales are out of scope");
  return st;
}

}  // namespace

bool is_killing_tensor(const WeightedTensorField& t, const ScaleSpec& scale) {
  std::vector<int> slots(static_cast<std::size_t>(t.rank()) + 1);
  for (std::size_t i = 0; i < slots.size(); ++i) slots[i] = static_cast<int>(i);
  return symmetrize(covderiv(t, scale), slots).is_zero();
}

// ---------------------------------------------------------------- vectors

bool killing_scale_test_vector(const WeightedTensorField& k, const ScaleSpec& scale,
                               std::optional<ScaleSpec> splitting) {
  const ScaleSpec own = own_scale(scale);
  const ScaleSpec sp = pick_splitting(splitting, k.n());
  const MixedField kh = half_prolong_vector(k, sp);
  const MixedField i = scale_tractor(own, sp).tractor;
  const bool tractor_test = pair(i, kh, 0, 0)[0].is_zero();
  const bool direct = divergence(k, 0, own).value().is_zero();
  if (tractor_test != direct) throw Error("I^A K_A = 0 disagrees with div k = 0 in the scale");
  return tractor_test;
}

bool einstein_killing_vector_check(const WeightedTensorField& k, const ScaleSpec& scale) {
  if (!killing_scale_test_vector(k, scale)) throw PreconditionError("the scale is not a Killing scale for k");
  const ScaleSpec own = own_scale(scale);
  if (!is_einstein_scale(own)) throw PreconditionError("the scale is not an Einstein scale");
  const auto ref = ScaleSpec::reference(k.n());
  const MixedField kk = full_prolong_vector(half_prolong_vector(k, ref));
  return pair(scale_tractor(own).tractor, kk, 0, 0).is_zero();
}

WeightedTensorField new_killing_vector(const WeightedTensorField& k, const ScaleSpec& scale) {
  const ScaleSpec own = own_scale(scale);
  if (!is_ck_vector(k, own)) throw PreconditionError("input is not a conformal Killing 1-form");
  if (!is_einstein_scale(own)) throw PreconditionError("the scale is not an Einstein scale");
  const Scalar& j = own.j();
  if (j.is_zero()) throw PreconditionError("J = 0: the construction divides by J (Ricci-flat scale)");
  const WeightedTensorField grad = covderiv(WeightedTensorField::density(divergence(k, 0, own).value(), 0), own);
  WeightedTensorField corr = grad * (j * Rational(2)).inverse();
  corr.set_weight(k.weight());
  WeightedTensorField out = k + corr;
  if (!is_killing_tensor(out, own)) throw Error("constructed field fails the Killing equation");
  return out;
}

// ---------------------------------------------------------------- tensors

ScaleVerdict sks_test_tensor(const WeightedTensorField& k, const ScaleSpec& scale,
                             std::optional<ScaleSpec> splitting) {
  require_ck_tensor(k);
  const int n = k.n();
  const ScaleSpec own = own_scale(scale);
  const ScaleSpec sp = pick_splitting(splitting, n);
  const ScaleTractor st = scale_tractor(own, sp);
  const MixedField v = change_splitting(pair(st.tractor, half_prolong_tensor(k, sp), 0, 0), own);
  ScaleVerdict out;
  auto residual = WeightedTensorField::covariant(n, 1, v.weight() + 1);
  for (int b = 0; b < n; ++b) residual.at({b}) = v.at({z_index(b)});
  if (!v.at({kY}).is_zero()) throw Error("X^A component of I^A K_AB is nonzero");
  if (!residual.is_zero()) {
    out.residual = MixedField::from_tensor(residual, own);
    out.detail = "Z-slot of I^A K_AB in the scale's splitting is nonzero";
    return out;
  }
  out.witness_name = "F";
  out.witness = v.at({x_index(n)});
  out.kind = VerdictKind::SKS;
  if (is_parallel(st.tractor)) {
    if (!pair(st.tractor, half_prolong_tensor(k, sp), 0, 0).is_zero()) {
      throw Error("Einstein strong Killing scale with I^A K_AB != 0");
    }
    out.kind = VerdictKind::EinsteinSKS;
  }
  return out;
}

ScaleVerdict ks_test_tensor(const WeightedTensorField& k, const ScaleSpec& scale, std::optional<ScaleSpec> splitting) {
  require_ck_tensor(k);
  const int n = k.n();
  const ScaleSpec own = own_scale(scale);
  const ScaleSpec sp = pick_splitting(splitting, n);
  const WeightedTensorField rho = ck_rho1(k, own);
  const WeightedTensorField curl = antisymmetrize(covderiv(rho, own), {0, 1});
  ScaleVerdict out;
  if (!curl.is_zero()) {
    out.residual = MixedField::from_tensor(curl, own);
    out.detail = "rho_a is not closed in the scale";
    return out;
  }
  const int degree = std::max(field_degree(k), 2 * scalar_degree(own.sigma())) + 2;
  auto lam = integrate_rho(rho, own, degree);
  if (!lam) throw Error("rho_a is closed but has no polynomial primitive of degree <= " + std::to_string(degree));
  if (!(covderiv(WeightedTensorField::density(*lam, 2), own) + rho).is_zero()) {
    throw Error("recovered lambda fails nabla lambda = -rho");
  }
  WeightedTensorField lg = WeightedTensorField::metric(n) * *lam;
  lg.set_weight(k.weight());
  if (!is_killing_tensor(k + lg, own)) {
    throw Error("k + lambda g is not a Killing tensor");
  }
  const ScaleTractor st = scale_tractor(own, sp);
  const MixedField v = pair(st.tractor, half_prolong_tensor(k, sp), 0, 0);
  const MixedField dl = thomas_d(density(*lam, 2, sp));
  const MixedField rhs = weighted(dl * (own.sigma() * Rational(1, 2)), 2) - weighted(st.tractor * *lam, 2);
  if (!only_x_slot(v - rhs)) throw Error("I^A K_AB - (sigma/2) D_B lambda + lambda I_B has components off X_B");
  out.kind = VerdictKind::KS;
  out.witness_name = "lambda";
  out.witness = *lam;
  return out;
}

bool einstein_ks_test_weyl(const WeightedTensorField& k, const ScaleSpec& scale) {
  require_ck_tensor(k);
  const ScaleTractor st = einstein_tractor(scale);
  const MixedField w = weyl_of(k);
  const MixedField t = antisymmetrize_tractor(product(pair(st.tractor, w, 0, 0), st.tractor), {1, 2, 3});
  const bool result = t.is_zero();
  if (result != ks_test_tensor(k, scale).pass()) throw Error("Weyl-tractor test disagrees with the Killing scale test");
  return result;
}

bool einstein_ks_test_k4(const WeightedTensorField& k, const ScaleSpec& scale) {
  require_ck_tensor(k);
  const ScaleTractor st = einstein_tractor(scale);
  const int n = k.n(), N = n + 2;
  const MixedField kk = full_prolong_tensor(half_prolong_tensor(k, ScaleSpec::reference(n)));
  const MixedField& i = st.tractor;
  const MixedField ik = pair(i, kk, 0, 0);   // (B, E, D) = I^A K_ABED
  const MixedField u = pair(i, ik, 0, 1);    // U_BD = I^A I^E K_ABED
  MixedField lhs = ik * st.iota;
  MixedField rhs(n, 3, 0, 0, ScaleSpec::reference(n));
  const Scalar half(n, Rational(1, 2));
  for (int b = 0; b < N; ++b)
    for (int c = 0; c < N; ++c)
      for (int d = 0; d < N; ++d) {
        Scalar s = u.at({b, d}) * i.at({c}) - u.at({b, c}) * i.at({d}) + u.at({d, b}) * i.at({c}) -
                   u.at({d, c}) * i.at({b});
        rhs.at({b, c, d}) = s * half;
      }
  return lhs == rhs;
}

ScaleVerdict einstein_ks_kappa(const WeightedTensorField& k, const ScaleSpec& scale) {
  require_ck_tensor(k);
  const ScaleTractor st = einstein_tractor(scale);
  const int n = k.n();
  const auto ref = ScaleSpec::reference(n);
  const MixedField kh = half_prolong_tensor(k, ref);
  const MixedField v = pair(st.tractor, kh, 0, 0);
  const Scalar kappa = -(pair(st.tractor, v, 0, 0)[0] / st.iota);
  const MixedField dk = thomas_d(density(kappa, 2, ref));
  const MixedField rhs = weighted(dk * (st.sigma * Rational(1, 2)), 2) - weighted(st.tractor * kappa, 2);
  const MixedField diff = v - rhs;
  ScaleVerdict out;
  if (!diff.is_zero()) {
    out.residual = diff;
    out.detail = "I^A K_AB != (sigma/2) D_B kappa - kappa I_B";
    return out;
  }
  out.kind = VerdictKind::EinsteinKS;
  out.witness_name = "kappa";
  out.witness = kappa;
  return out;
}

// ------------------------------------------------------- curvature tractors

MixedField tractor_wedge(const MixedField& q, const MixedField& p) {
  const MixedField t = product(q, p);
  return permute_tractor_slots(t, {0, 2, 1, 3}) - permute_tractor_slots(t, {2, 0, 1, 3}) +
         permute_tractor_slots(t, {2, 0, 3, 1}) - permute_tractor_slots(t, {0, 2, 3, 1});
}

MixedField tractor_schouten(const MixedField& r) {
  const int n = r.n();
  const MixedField ric = contract_tractor(r, 1, 3);
  const Scalar j = contract_tractor(ric, 0, 1)[0] * Rational(1, 2 * (n + 1));
  MixedField g = tractor_metric(r.splitting());
  g.set_weight(ric.weight());
  return (ric - g * j) * Scalar(n, Rational(1, n));
}

MixedField tracefree_part(const MixedField& r) {
  MixedField g = tractor_metric(r.splitting());
  return r - weighted(tractor_wedge(g, tractor_schouten(r)), r.weight());
}

MixedField riemann_from_weyl(const MixedField& w, const ScaleTractor& scale) {
  const MixedField i = change_splitting(scale.tractor, w.splitting());
  const MixedField p = pair(i, pair(i, w, 0, 0), 0, 1) * Scalar(w.n(), -1);  // -I^A I^C W_ABCD
  return w * scale.iota + weighted(tractor_wedge(tractor_metric(w.splitting()), p), w.weight());
}

MixedField trace_kernel_element(const ScaleTractor& scale) {
  const MixedField& i = scale.tractor;
  const MixedField g = tractor_metric(i.splitting());
  const MixedField q = g - weighted(product(i, i) * (scale.iota.inverse() * Rational(2)), 0);
  return tractor_wedge(g, q);
}

WeightedTensorField trace_adjust_from_riemann(const MixedField& r, const ScaleTractor& scale) {
  if (r.tractor_slots() != 4 || r.tensor_slots() != 0) throw PreconditionError("expected a four-slot tractor");
  if (auto d = riemann_defect(r)) throw PreconditionError("Riemann symmetries fail: " + *d);
  if (scale.iota.is_zero()) throw PreconditionError("iota = I^A I_A vanishes");
  if (!is_parallel(r)) throw PreconditionError("R is not parallel");
  const MixedField i = change_splitting(scale.tractor, r.splitting());
  if (!pair(i, r, 0, 0).is_zero()) throw PreconditionError("I^A R_ABCD != 0");
  const WeightedTensorField top = recover_top(r);
  const ScaleSpec own = ScaleSpec::from_sigma(scale.sigma);
  if (!is_killing_tensor(top, own)) throw Error("top slot is not a Killing tensor for the scale");
  if (!(recover_top(tracefree_part(r)) == tracefree_sym2(top))) {
    throw Error("top slot of the trace-free part differs from the trace-free top slot");
  }
  const MixedField p = tractor_schouten(r);
  const Scalar j = contract_tractor(p, 0, 1)[0];
  MixedField rhs = i * (j * Rational(-1, r.n()));
  rhs.set_weight(p.weight());
  if (!(pair(i, p, 0, 0) == rhs)) throw Error("I^B P_BD != -(J/n) I_D");
  return top;
}

// ----------------------------------------------------------------- nullity

NullityResult nullity(const MixedField& t, std::span<const Rational> point) {
  if (t.tractor_slots() != 4 || t.tensor_slots() != 0) throw DimensionError("nullity expects a four-slot tractor");
  const int n = t.n(), N = n + 2;
  if (static_cast<int>(point.size()) != n) throw DimensionError("point has the wrong dimension");
  auto at_point = [&](std::span<const Rational> x) {
    const auto flat = evaluate_tractor(t, x);
    std::vector<std::vector<Rational>> images(N);
    for (int e = 0; e < N; ++e) {
      std::vector<Rational> img(static_cast<std::size_t>(N) * N * N);
      for (int a = 0; a < N; ++a) {
        const int g = inverse_metric(n, a, e);
        if (g == 0) continue;
        for (std::size_t r = 0; r < img.size(); ++r) img[r] += g * flat[a * img.size() + r];
      }
      images[e] = std::move(img);
    }
    std::vector<SparseRow> rows;
    for (std::size_t r = 0; r < images[0].size(); ++r) {
      SparseRow row;
      for (int e = 0; e < N; ++e)
        if (sgn(images[e][r]) != 0) row.emplace_back(e, images[e][r]);
      if (!row.empty()) rows.push_back(std::move(row));
    }
    return rank_nullspace(N, rows);
  };
  const auto ns = at_point(point);
  NullityResult out{static_cast<int>(ns.basis.size()), ns.basis};
  if (is_parallel(t)) {
    for (int s = 1; s <= 2; ++s) {
      std::vector<Rational> q(point.begin(), point.end());
      for (int a = 0; a < n; ++a) q[a] += ratio((a + 1) * s, 2 + a);
      try {
        if (static_cast<int>(at_point(q).basis.size()) != out.dimension) {
          throw Error("nullity of a parallel tractor varies with the point");
        }
      } catch (const EvaluationError&) {
      }
    }
  }
  return out;
}

// ------------------------------------------------------------ misc checks

bool kdv_check(const WeightedTensorField& k, const WeightedTensorField& upsilon) {
  if (k.rank() != 2 || upsilon.rank() != 1) throw DimensionError("expected a 2-tensor and a 1-form");
  if (k.n() != upsilon.n()) throw DimensionError("dimension mismatch");
  const int n = k.n();
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      if (!(upsilon.at({a}).derivative(b) == upsilon.at({b}).derivative(a))) {
        throw PreconditionError("Upsilon is not closed");
      }
  return contract(k, 1, upsilon, 0).is_zero();
}

bool bertrand_darboux_check(const WeightedTensorField& khat, const Scalar& v, const ScaleSpec& scale) {
  if (khat.rank() != 2) throw DimensionError("expected a 2-tensor");
  const int n = khat.n();
  const ScaleSpec own = own_scale(scale);
  // E^b_a = sigma^(2 - w) khat_ba in coordinates
  Scalar f(n, 1);
  const int p = 2 - khat.weight();
  for (int i = 0; i < std::abs(p); ++i) f *= own.sigma();
  if (p < 0) f = f.inverse();
  std::vector<Scalar> alpha(n, Scalar(n));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) alpha[a] += khat.at({b, a}) * f * v.derivative(b);
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      if (!(alpha[a].derivative(b) == alpha[b].derivative(a))) return false;
  return true;
}

WeightedTensorField new_killing_tensor(const WeightedTensorField& k, const ScaleSpec& scale) {
  require_ck_tensor(k);
  const ScaleTractor st = einstein_tractor(scale);
  const MixedField w = project_to_Iperp(weyl_of(k), st);
  const WeightedTensorField r = projective_top(conf_to_proj(w, st));
  if (!is_killing_tensor(r, ScaleSpec::from_sigma(st.sigma))) {
    throw Error("constructed tensor fails the Killing equation");
  }
  return r;
}

}  // namespace tractorlab
