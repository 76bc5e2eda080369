#pragma once

// Killing-scale criteria for conformal Killing vectors and rank-2 tensors,
// trace adjustments, nullity and the Einstein constructions of Killing
// fields. Conformal Killing fields are given in the flat reference
// trivialization (1-forms of weight 2, symmetric trace-free 2-tensors of
// weight 4). Tractor-level checks run in an optional splitting; verdicts do
// not depend on it.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tractorlab/projective.hpp"
#include "tractorlab/prolongation.hpp"

namespace tractorlab {

enum class VerdictKind { SKS, KS, EinsteinSKS, EinsteinKS, Fail };
std::string to_string(VerdictKind k);

struct ScaleVerdict {
  VerdictKind kind = VerdictKind::Fail;
  /// "F" (SKS), "lambda" (KS) or "kappa" (Einstein KS); empty on failure.
  std::string witness_name;
  std::optional<Scalar> witness;
  /// Failing residual (a tensor wrapped with no tractor slots, or a tractor).
  std::optional<MixedField> residual;
  std::string detail;
  bool pass() const { return kind != VerdictKind::Fail; }
};

/// Symmetrized covariant derivative of the scale vanishes.
bool is_killing_tensor(const WeightedTensorField& t, const ScaleSpec& scale);

/// I^A K_A = 0 for the half prolongation of a conformal Killing 1-form;
/// asserts agreement with div k = 0 in the scale.
bool killing_scale_test_vector(const WeightedTensorField& k, const ScaleSpec& scale,
                               std::optional<ScaleSpec> splitting = std::nullopt);
/// I^A (D_A K_B) = 0. Throws PreconditionError unless the scale is an
/// Einstein scale and a Killing scale for k.
bool einstein_killing_vector_check(const WeightedTensorField& k, const ScaleSpec& scale);
/// k + (1/(2J)) grad(div k) in an Einstein scale with J != 0; the Killing
/// equation is asserted before returning.
WeightedTensorField new_killing_vector(const WeightedTensorField& k, const ScaleSpec& scale);

/// Strong Killing scale test from I^A K_AB = X_B F.
ScaleVerdict sks_test_tensor(const WeightedTensorField& k, const ScaleSpec& scale,
                             std::optional<ScaleSpec> splitting = std::nullopt);
/// Killing scale test: rho_a closed in the scale, then lambda with
/// nabla lambda = -rho. The tractor identity
/// I^A K_AB = (sigma/2) D_B lambda - lambda I_B + X_B F is cross-checked.
ScaleVerdict ks_test_tensor(const WeightedTensorField& k, const ScaleSpec& scale,
                            std::optional<ScaleSpec> splitting = std::nullopt);
/// I^A W_AB[CD I_E] = 0 on the Weyl form of the full prolongation. Requires
/// a parallel I with iota != 0; agreement with ks_test_tensor is asserted.
bool einstein_ks_test_weyl(const WeightedTensorField& k, const ScaleSpec& scale);
/// iota I^A K_ABCD = I^A I^E K_ABE[D I_C] + I^A I^E K_ADE[B I_C].
bool einstein_ks_test_k4(const WeightedTensorField& k, const ScaleSpec& scale);
/// kappa = -(1/iota) I^A I^E K_AE and the check
/// I^A K_AB = (sigma/2) D_B kappa - kappa I_B.
ScaleVerdict einstein_ks_kappa(const WeightedTensorField& k, const ScaleSpec& scale);

/// (Q wedge P)_ABCD = Q_AC P_BD - Q_BC P_AD + Q_BD P_AC - Q_AD P_BC.
MixedField tractor_wedge(const MixedField& q, const MixedField& p);
/// R - g wedge P with P_AC = (1/n)(R_ABC^B - J g_AC), J = R_AB^AB / (2(n+1)).
MixedField tracefree_part(const MixedField& r);
/// Schouten-type trace P_AC of a four-slot tractor with Riemann symmetries.
MixedField tractor_schouten(const MixedField& r);
/// r_ab = top(R) for parallel R with Riemann symmetries and I^A R_ABCD = 0;
/// asserts that r is Killing for the scale, that its trace-free part is the
/// top slot of the trace-free part of R, and I^B P_BD = -(J/n) I_D.
WeightedTensorField trace_adjust_from_riemann(const MixedField& r, const ScaleTractor& scale);
/// R = iota W + g wedge P with P_BD = -I^A I^C W_ABCD.
MixedField riemann_from_weyl(const MixedField& w, const ScaleTractor& scale);
/// g wedge (g - (2/iota) I I).
MixedField trace_kernel_element(const ScaleTractor& scale);

struct NullityResult {
  int dimension = 0;
  /// Basis of {V_A : V^A T_ABCD = 0} at the point.
  std::vector<std::vector<Rational>> basis;
};
/// For parallel T the dimension is also computed at two further points and
/// asserted equal.
NullityResult nullity(const MixedField& t, std::span<const Rational> point);

/// k_ab Upsilon^b = 0 for a closed 1-form Upsilon.
bool kdv_check(const WeightedTensorField& k, const WeightedTensorField& upsilon);
/// With E^b_a = khat raised by the metric of `scale`, the 1-form
/// E^b_a d_b V is closed.
bool bertrand_darboux_check(const WeightedTensorField& khat, const Scalar& v, const ScaleSpec& scale);

/// Top slot of the projective image of the I-orthogonal projection of the
/// Weyl form of the full prolongation; asserted Killing for the scale.
WeightedTensorField new_killing_tensor(const WeightedTensorField& k, const ScaleSpec& scale);

}  // namespace tractorlab
