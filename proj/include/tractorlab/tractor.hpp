#pragma once

// Standard tractor calculus on conformally flat R^n in a chosen splitting.
//
// Tractor index layout: 0 = Y-slot (the sigma component, paired by X^A),
// 1..n = Z-block, n+1 = X-slot (the rho component, paired by Y^A). Every
// tractor slot is stored with a lower index; contractions go through the
// inverse tractor metric. Tensor slots are stored covariant as well.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tractorlab/riemannian.hpp"

namespace tractorlab {

inline constexpr int kY = 0;
inline int z_index(int a) { return a + 1; }
inline int x_index(int n) { return n + 1; }

class MixedField {
 public:
  MixedField() = default;
  MixedField(int n, int tractor_slots, int tensor_slots, int weight, ScaleSpec splitting);
  /// t = 0 field wrapping a covariant weighted tensor (or density).
  static MixedField from_tensor(const WeightedTensorField& t, ScaleSpec splitting);

  int n() const { return n_; }
  int tractor_slots() const { return t_; }
  int tensor_slots() const { return s_; }
  int rank() const { return t_ + s_; }
  int weight() const { return weight_; }
  void set_weight(int w) { weight_ = w; }
  const ScaleSpec& splitting() const { return splitting_; }
  const Shape& shape() const { return shape_; }
  std::size_t size() const { return comps_.size(); }

  const Scalar& operator[](std::size_t f) const { return comps_[f]; }
  Scalar& operator[](std::size_t f) { return comps_[f]; }
  const Scalar& at(std::initializer_list<int> idx) const;
  Scalar& at(std::initializer_list<int> idx);
  const Scalar& at(std::span<const int> idx) const { return comps_[shape_.flatten(idx)]; }
  Scalar& at(std::span<const int> idx) { return comps_[shape_.flatten(idx)]; }

  bool is_zero() const;
  /// Requires t = 0.
  WeightedTensorField to_tensor() const;
  /// Index of the first nonzero component, or empty when zero.
  std::optional<std::vector<int>> first_nonzero() const;

  MixedField& operator+=(const MixedField& o);
  MixedField& operator-=(const MixedField& o);
  MixedField& operator*=(const Scalar& c);
  friend MixedField operator+(MixedField a, const MixedField& b) { return a += b; }
  friend MixedField operator-(MixedField a, const MixedField& b) { return a -= b; }
  friend MixedField operator*(MixedField a, const Scalar& c) { return a *= c; }
  friend MixedField operator*(const Scalar& c, MixedField a) { return a *= c; }
  friend bool operator==(const MixedField& a, const MixedField& b);

 private:
  void check_compatible(const MixedField& o) const;

  int n_ = 0, t_ = 0, s_ = 0, weight_ = 0;
  ScaleSpec splitting_;
  Shape shape_;
  std::vector<Scalar> comps_;
};

enum class Injector { X, Y, Z };
/// X_A (weight 1), Y_A (weight -1), Z_{Aa} (one tensor slot, weight 1 once
/// its tensor index is lowered).
MixedField injector(Injector kind, const ScaleSpec& splitting);
/// g_AB, two tractor slots, weight 0.
MixedField tractor_metric(const ScaleSpec& splitting);
/// Inverse tractor metric entry G^{AB} in the (Y, Z, X) layout.
int inverse_metric(int n, int a, int b);

/// Slots: a's tractor, b's tractor, a's tensor, b's tensor.
MixedField product(const MixedField& a, const MixedField& b);
MixedField contract_tractor(const MixedField& t, int slot_i, int slot_j);
/// Tensor slot numbers are relative to the tensor block; weight drops by 2.
MixedField contract_tensor(const MixedField& t, int slot_i, int slot_j);
/// Contract tractor slot i of s with tractor slot j of t through g^{AB}.
MixedField pair(const MixedField& s, const MixedField& t, int slot_i, int slot_j);
/// Output slot k is input slot perm[k]; permutes tractor slots only.
MixedField permute_tractor_slots(const MixedField& t, const std::vector<int>& perm);
MixedField permute_tensor_slots(const MixedField& t, const std::vector<int>& perm);
MixedField symmetrize_tractor(const MixedField& t, const std::vector<int>& slots);
MixedField antisymmetrize_tractor(const MixedField& t, const std::vector<int>& slots);
/// X^A T_{..A..}: keeps the sigma component of the slot.
MixedField contract_x(const MixedField& t, int slot);
/// Y^A T_{..A..}: keeps the rho component of the slot.
MixedField contract_y(const MixedField& t, int slot);
/// Z^A_a T_{..A..}: the mu block becomes a new leading tensor slot.
MixedField contract_z(const MixedField& t, int slot);

/// Normal tractor connection coupled to the Levi-Civita connection of the
/// splitting; new leading tensor slot.
MixedField tractor_covderiv(const MixedField& t);
MixedField tractor_laplacian(const MixedField& t);
/// Normalized Thomas-D with a new leading tractor slot and weight w - 1.
/// weight_override replaces w in the formula (used when tensor slots are
/// really raised indices). Throws SingularWeightError when n + 2w - 2 = 0.
MixedField thomas_d(const MixedField& t, std::optional<int> weight_override = std::nullopt);
/// Components of the same tractor in another splitting; tensor slots untouched.
MixedField change_splitting(const MixedField& t, const ScaleSpec& target);

struct ScaleTractor {
  MixedField tractor;  // I_A
  Scalar sigma;
  Scalar iota;  // I^A I_A
};
/// I_A = D_A sigma expressed in `splitting` (default: the reference splitting).
ScaleTractor scale_tractor(const ScaleSpec& scale,
                           std::optional<ScaleSpec> splitting = std::nullopt);
bool is_parallel(const MixedField& t);
bool is_einstein_scale(const ScaleSpec& scale);

enum class CheckStatus { Pass, Fail, Skipped };
std::string to_string(CheckStatus s);

struct IdentityResult {
  std::string name;
  CheckStatus status;
  std::string detail;
};
/// Randomized exact check of the tractor identities: injector pairings,
/// their derivatives, Thomas-D fundamentals, modified Leibniz rule, the
/// commutator with X, the two contractions and the flat commutator.
std::vector<IdentityResult> d_identities_check(int n, int trials, std::uint64_t seed,
                                               const std::vector<int>& weights = {0, 1, 2});

}  // namespace tractorlab
