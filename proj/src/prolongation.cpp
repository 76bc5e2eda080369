#include "tractorlab/prolongation.hpp"

#include "tractorlab/errors.hpp"

namespace tractorlab {

namespace {

void require_covariant(const WeightedTensorField& k, int rank, int weight, const char* what) {
  if (k.rank() != rank) throw PreconditionError(std::string(what) + ": wrong rank");
  for (auto v : k.variance()) {
    if (v != Variance::Covariant) throw PreconditionError(std::string(what) + ": expected lower indices");
  }
  if (k.weight() != weight) {
    throw PreconditionError(std::string(what) + ": expected weight " + std::to_string(weight) +
                            ", got " + std::to_string(k.weight()));
  }
}

std::string index_string(const std::vector<int>& idx) {
  std::string s = "(";
  for (std::size_t i = 0; i < idx.size(); ++i) s += (i ? "," : "") + std::to_string(idx[i]);
  return s + ")";
}

std::optional<std::string> nonzero(const MixedField& t, const std::string& what) {
  if (auto idx = t.first_nonzero()) return what + " fails at component " + index_string(*idx);
  return std::nullopt;
}

void require_rank4(const MixedField& t) {
  if (t.tractor_slots() != 4 || t.tensor_slots() != 0) {
    throw DimensionError("expected a tractor with four tractor slots and no tensor slots");
  }
}

}  // namespace

WeightedTensorField ck_vector_residual(const WeightedTensorField& k, const ScaleSpec& scale) {
  return tracefree_sym2(symmetrize(covderiv(k, scale), {0, 1}));
}

bool is_ck_vector(const WeightedTensorField& k, const ScaleSpec& scale) {
  require_covariant(k, 1, 2, "conformal Killing 1-form");
  return ck_vector_residual(k, scale).is_zero();
}

MixedField half_prolong_vector(const WeightedTensorField& k, const ScaleSpec& splitting) {
  if (!is_ck_vector(k, splitting)) throw PreconditionError("input is not a conformal Killing 1-form");
  const int n = k.n();
  MixedField out(n, 1, 0, 1, splitting);
  for (int a = 0; a < n; ++a) out.at({z_index(a)}) = k.at({a});
  out.at({x_index(n)}) = divergence(k, 0, splitting).value() * Rational(-1, n);
  return out;
}

MixedField full_prolong_vector(const MixedField& half) {
  if (half.tractor_slots() != 1 || half.tensor_slots() != 0 || half.weight() != 1) {
    throw PreconditionError("expected a weight-1 standard tractor");
  }
  MixedField kk = thomas_d(half);
  if (auto d = nonzero(symmetrize_tractor(kk, {0, 1}), "skew symmetry of D_A K_B")) {
    throw PreconditionError(*d + "; input was not a conformal Killing 1-form");
  }
  if (half.splitting().is_reference()) {
    if (auto d = nonzero(tractor_covderiv(kk), "parallelism of D_A K_B")) throw PreconditionError(*d);
  }
  return kk;
}

WeightedTensorField ck_tensor_residual(const WeightedTensorField& k, const ScaleSpec& scale) {
  const int n = k.n();
  WeightedTensorField s = symmetrize(covderiv(k, scale), {0, 1, 2});
  const WeightedTensorField t = trace(s, 0, 1);
  const Scalar c(n, Rational(1, n + 2));
  std::vector<int> idx(3);
  for (std::size_t f = 0; f < s.size(); ++f) {
    s.shape().unflatten(f, idx);
    Scalar tr(n);
    if (idx[0] == idx[1]) tr += t.at({idx[2]});
    if (idx[1] == idx[2]) tr += t.at({idx[0]});
    if (idx[0] == idx[2]) tr += t.at({idx[1]});
    if (!tr.is_zero()) s[f] -= tr * c;
  }
  return s;
}

bool is_ck_tensor(const WeightedTensorField& k, const ScaleSpec& scale) {
  require_covariant(k, 2, 4, "conformal Killing tensor");
  if (!is_symmetric(k)) throw PreconditionError("conformal Killing tensor must be symmetric");
  if (!trace(k, 0, 1).is_zero()) throw PreconditionError("conformal Killing tensor must be trace-free");
  return ck_tensor_residual(k, scale).is_zero();
}

WeightedTensorField ck_rho1(const WeightedTensorField& k, const ScaleSpec& scale) {
  return divergence(k, 0, scale) * Scalar(k.n(), Rational(2, k.n() + 2));
}

MixedField half_prolong_tensor(const WeightedTensorField& k, const ScaleSpec& splitting) {
  require_covariant(k, 2, 4, "conformal Killing tensor");
  if (!is_symmetric(k) || !trace(k, 0, 1).is_zero()) {
    throw PreconditionError("half prolongation needs a symmetric trace-free tensor");
  }
  const int n = k.n();
  const WeightedTensorField r1 = ck_rho1(k, splitting);
  Scalar r0 = divergence(r1, 0, splitting).value() * Rational(1, 2);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) r0 += splitting.schouten(a, b) * k.at({a, b});
  r0 *= Rational(1, n + 1);

  MixedField out(n, 2, 0, 2, splitting);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) out.at({z_index(a), z_index(b)}) = k.at({a, b});
    const Scalar h = r1.at({a}) * Rational(-1, 2);
    out.at({z_index(a), x_index(n)}) = h;
    out.at({x_index(n), z_index(a)}) = h;
  }
  out.at({x_index(n), x_index(n)}) = r0;
  return out;
}

MixedField full_prolong_tensor(const MixedField& half) {
  if (half.tractor_slots() != 2 || half.tensor_slots() != 0 || half.weight() != 2) {
    throw PreconditionError("expected a weight-2 tractor with two slots");
  }
  if (!half.splitting().is_reference()) {
    throw PreconditionError("full prolongation is only available in the flat reference splitting");
  }
  MixedField kk = permute_tractor_slots(thomas_d(thomas_d(half)), {0, 2, 1, 3});
  if (auto d = k_space_defect(kk)) throw PreconditionError(*d + "; input was not a conformal Killing tensor");
  if (auto d = nonzero(tractor_covderiv(kk), "parallelism")) {
    throw PreconditionError(*d + "; input was not a conformal Killing tensor");
  }
  if (!(half_from_full(kk) == half)) throw PreconditionError("X^A X^C K_ABCD != 2 K_BD");
  return kk;
}

std::optional<std::string> k_space_defect(const MixedField& t) {
  require_rank4(t);
  if (!(permute_tractor_slots(t, {0, 3, 2, 1}) == t)) return "K_ABCD = K_ADCB";
  if (!(permute_tractor_slots(t, {2, 1, 0, 3}) == t)) return "K_ABCD = K_CBAD";
  if (auto d = nonzero(symmetrize_tractor(t, {1, 2, 3}), "K_A(BCD) = 0")) return d;
  return nonzero(contract_tractor(t, 2, 3), "trace K_ABC^C = 0");
}

std::optional<std::string> riemann_defect(const MixedField& t) {
  require_rank4(t);
  if (auto d = nonzero(symmetrize_tractor(t, {0, 1}), "R_ABCD = -R_BACD")) return d;
  if (auto d = nonzero(symmetrize_tractor(t, {2, 3}), "R_ABCD = -R_ABDC")) return d;
  if (!(permute_tractor_slots(t, {2, 3, 0, 1}) == t)) return "R_ABCD = R_CDAB";
  return nonzero(antisymmetrize_tractor(t, {1, 2, 3}), "R_A[BCD] = 0");
}

std::optional<std::string> w_space_defect(const MixedField& t) {
  require_rank4(t);
  if (auto d = nonzero(symmetrize_tractor(t, {0, 1}), "W_ABCD = -W_BACD")) return d;
  if (auto d = nonzero(symmetrize_tractor(t, {2, 3}), "W_ABCD = -W_ABDC")) return d;
  if (auto d = nonzero(antisymmetrize_tractor(t, {1, 2, 3}), "W_A[BCD] = 0")) return d;
  return nonzero(contract_tractor(t, 1, 3), "trace W_ABC^B = 0");
}

MixedField to_weyl(const MixedField& kk) {
  if (auto d = k_space_defect(kk)) throw PreconditionError("to_weyl: " + *d);
  return antisymmetrize_tractor(antisymmetrize_tractor(kk, {0, 1}), {2, 3});
}

MixedField from_weyl(const MixedField& w) {
  if (auto d = w_space_defect(w)) throw PreconditionError("from_weyl: " + *d);
  MixedField l = w + permute_tractor_slots(w, {0, 3, 2, 1});
  return l * Scalar(w.n(), Rational(2, 3));
}

MixedField half_from_full(const MixedField& kk) {
  require_rank4(kk);
  return contract_x(contract_x(kk, 0), 1) * Scalar(kk.n(), Rational(1, 2));
}

WeightedTensorField recover_top(const MixedField& t) {
  if (t.tensor_slots() != 0) throw DimensionError("recover_top expects a pure tractor");
  const int n = t.n();
  switch (t.tractor_slots()) {
    case 1: {
      auto out = WeightedTensorField::covariant(n, 1, t.weight() + 1);
      for (int a = 0; a < n; ++a) out.at({a}) = t.at({z_index(a)});
      return out;
    }
    case 2: {
      auto out = WeightedTensorField::covariant(n, 2, t.weight() + 2);
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) out.at({a, b}) = t.at({z_index(a), z_index(b)});
      return out;
    }
    case 4: {
      auto out = WeightedTensorField::covariant(n, 2, t.weight() + 4);
      for (int a = 0; a < n; ++a)
        for (int c = 0; c < n; ++c) out.at({a, c}) = t.at({z_index(a), kY, z_index(c), kY}) * Rational(4);
      return out;
    }
    default:
      throw DimensionError("recover_top handles 1, 2 or 4 tractor slots");
  }
}

}  // namespace tractorlab
