#pragma once

// Half and full prolongations of conformal Killing 1-forms (weight 2) and of
// rank-2 conformal Killing tensors (symmetric trace-free, weight 4), the
// K <-> W conversions and membership tests for the two symmetry spaces.

#include <optional>
#include <string>

#include "tractorlab/tractor.hpp"

namespace tractorlab {

/// tracefree_sym2(nabla k); no precondition checks.
WeightedTensorField ck_vector_residual(const WeightedTensorField& k, const ScaleSpec& scale);
/// Trace-free part of nabla_(a k_bc); no precondition checks.
WeightedTensorField ck_tensor_residual(const WeightedTensorField& k, const ScaleSpec& scale);

/// tracefree_sym2(nabla k) = 0 for a covariant 1-form of weight 2.
bool is_ck_vector(const WeightedTensorField& k, const ScaleSpec& scale);
/// K_A = (0, k_a, -(1/n) div k). Throws PreconditionError when k is not CK.
MixedField half_prolong_vector(const WeightedTensorField& k, const ScaleSpec& splitting);
/// D_A K_B; asserts the symmetric part vanishes and, in the flat reference
/// splitting, that the result is parallel.
MixedField full_prolong_vector(const MixedField& half);

/// Trace-free part of nabla_(a k_bc) vanishes. Throws PreconditionError
/// unless k is a symmetric trace-free covariant 2-tensor of weight 4.
bool is_ck_tensor(const WeightedTensorField& k, const ScaleSpec& scale);
/// rho_a = (2/(n+2)) nabla^b k_ab (weight 2).
WeightedTensorField ck_rho1(const WeightedTensorField& k, const ScaleSpec& scale);
/// K_AB = k Z Z - rho_a Z^(a X^b) + rho X X (weight 2).
MixedField half_prolong_tensor(const WeightedTensorField& k, const ScaleSpec& splitting);
/// D_A D_C K_BD in slot order (A, B, C, D). Reference splitting only;
/// checks K-space membership, parallelism and X^A X^C K_ABCD = 2 K_BD.
MixedField full_prolong_tensor(const MixedField& half);

/// Symmetry defects; empty when the tractor belongs to the space, else the
/// name of the first failing condition.
std::optional<std::string> k_space_defect(const MixedField& t);
std::optional<std::string> w_space_defect(const MixedField& t);
/// Riemann symmetries (pair skew, pair exchange, first Bianchi), no trace condition.
std::optional<std::string> riemann_defect(const MixedField& t);
inline bool in_k_space(const MixedField& t) { return !k_space_defect(t); }
inline bool in_w_space(const MixedField& t) { return !w_space_defect(t); }

/// W_ABCD = K_[AB][CD]. Throws PreconditionError outside the K-space.
MixedField to_weyl(const MixedField& kk);
/// L_ABCD = (2/3)(W_ABCD + W_ADCB). Throws PreconditionError outside the W-space.
MixedField from_weyl(const MixedField& w);

/// (1/2) X^A X^C K_ABCD.
MixedField half_from_full(const MixedField& kk);
/// Top slot: Z-part for one tractor slot, Z Z-part for two, and
/// 4 Z^A_a Z^C_c X^B X^D R_ABCD for four.
WeightedTensorField recover_top(const MixedField& t);

}  // namespace tractorlab
