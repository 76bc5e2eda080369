#pragma once

// Projective tractors of the Levi-Civita connection of an Einstein scale,
// realized as the orthogonal complement of the scale tractor.
//
// Projective tractor index layout: 0 = Ybar-slot (the sigma component,
// paired by Xbar^A), 1..n = Zbar-block.

#include "tractorlab/tractor.hpp"

namespace tractorlab {

class ProjectiveField {
 public:
  ProjectiveField() = default;
  /// `scale` fixes the connection; it must carry sigma.
  ProjectiveField(int n, int tractor_slots, int tensor_slots, int weight, ScaleSpec scale);

  int n() const { return n_; }
  int tractor_slots() const { return t_; }
  int tensor_slots() const { return s_; }
  int rank() const { return t_ + s_; }
  int weight() const { return weight_; }
  const ScaleSpec& scale() const { return scale_; }
  const Shape& shape() const { return shape_; }
  std::size_t size() const { return comps_.size(); }

  const Scalar& operator[](std::size_t f) const { return comps_[f]; }
  Scalar& operator[](std::size_t f) { return comps_[f]; }
  const Scalar& at(std::initializer_list<int> idx) const;
  Scalar& at(std::initializer_list<int> idx);
  const Scalar& at(std::span<const int> idx) const { return comps_[shape_.flatten(idx)]; }
  Scalar& at(std::span<const int> idx) { return comps_[shape_.flatten(idx)]; }

  bool is_zero() const;
  friend bool operator==(const ProjectiveField& a, const ProjectiveField& b);

 private:
  int n_ = 0, t_ = 0, s_ = 0, weight_ = 0;
  ScaleSpec scale_;
  Shape shape_;
  std::vector<Scalar> comps_;
};

/// nabla-bar_a (sigma, mu_b) = (nabla_a sigma - mu_a, nabla_a mu_b + sigma Ric_ab / (n-1))
/// slotwise, coupled to the Levi-Civita connection; new leading tensor slot.
ProjectiveField projective_covderiv(const ProjectiveField& t);

/// Applies Pi_A^B = delta_A^B - I_A I^B / iota to every tractor slot.
/// Throws PreconditionError when iota vanishes.
MixedField project_to_Iperp(const MixedField& t, const ScaleTractor& scale);

/// Slotwise (sigma, mu_a, J sigma / n) -> (sigma, mu_a) in the splitting of
/// the scale. Throws PreconditionError unless I is parallel with iota != 0
/// and t is orthogonal to I in every slot.
ProjectiveField conf_to_proj(const MixedField& t, const ScaleTractor& scale);

/// Projective top slot of four-slot fields with Riemann symmetries:
/// 4 Zbar^A_a Zbar^C_c Xbar^B Xbar^D R_ABCD.
WeightedTensorField projective_top(const ProjectiveField& t);

}  // namespace tractorlab
