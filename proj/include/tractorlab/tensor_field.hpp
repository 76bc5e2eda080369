#pragma once

// Weighted tensor fields on R^n, stored in the flat reference
// trivialization where the conformal metric has components delta_ab.

#include <initializer_list>
#include <span>
#include <vector>

#include "tractorlab/multi_index.hpp"
#include "tractorlab/scalar.hpp"

namespace tractorlab {

enum class Variance : char { Covariant = 'd', Contravariant = 'u' };

class WeightedTensorField {
 public:
  WeightedTensorField() = default;
  WeightedTensorField(int n, std::vector<Variance> variance, int weight);
  /// Rank-r covariant field.
  static WeightedTensorField covariant(int n, int rank, int weight);
  static WeightedTensorField density(const Scalar& s, int weight);
  /// The conformal metric g_ab (weight 2), or its inverse (weight -2).
  static WeightedTensorField metric(int n, bool inverse = false);

  int n() const { return n_; }
  int rank() const { return shape_.rank(); }
  int weight() const { return weight_; }
  const std::vector<Variance>& variance() const { return variance_; }
  const Shape& shape() const { return shape_; }
  std::size_t size() const { return comps_.size(); }

  const Scalar& operator[](std::size_t flat) const { return comps_[flat]; }
  Scalar& operator[](std::size_t flat) { return comps_[flat]; }
  const Scalar& at(std::initializer_list<int> idx) const;
  Scalar& at(std::initializer_list<int> idx);
  const Scalar& at(std::span<const int> idx) const { return comps_[shape_.flatten(idx)]; }
  Scalar& at(std::span<const int> idx) { return comps_[shape_.flatten(idx)]; }

  bool is_zero() const;
  /// Density value of a rank-0 field.
  const Scalar& value() const;
  void set_weight(int w) { weight_ = w; }

  WeightedTensorField& operator+=(const WeightedTensorField& o);
  WeightedTensorField& operator-=(const WeightedTensorField& o);
  WeightedTensorField& operator*=(const Scalar& s);
  friend WeightedTensorField operator+(WeightedTensorField a, const WeightedTensorField& b) {
    return a += b;
  }
  friend WeightedTensorField operator-(WeightedTensorField a, const WeightedTensorField& b) {
    return a -= b;
  }
  friend WeightedTensorField operator*(WeightedTensorField a, const Scalar& s) { return a *= s; }
  friend WeightedTensorField operator*(const Scalar& s, WeightedTensorField a) { return a *= s; }
  friend bool operator==(const WeightedTensorField& a, const WeightedTensorField& b);

 private:
  void check_compatible(const WeightedTensorField& o) const;

  int n_ = 0;
  std::vector<Variance> variance_;
  int weight_ = 0;
  Shape shape_;
  std::vector<Scalar> comps_;
};

WeightedTensorField symmetrize(const WeightedTensorField& t, const std::vector<int>& slots);
WeightedTensorField antisymmetrize(const WeightedTensorField& t, const std::vector<int>& slots);
/// Contraction of two slots. Equal variance contracts through the conformal
/// metric and shifts the weight by -2 (covariant) or +2 (contravariant).
WeightedTensorField trace(const WeightedTensorField& t, int slot_i, int slot_j);
/// T - (1/n) tr(T) g for a symmetric rank-2 field.
WeightedTensorField tracefree_sym2(const WeightedTensorField& t);
WeightedTensorField tensor_product(const WeightedTensorField& a, const WeightedTensorField& b);
/// Contract slot i of a with slot j of b; remaining slots keep order (a's then b's).
WeightedTensorField contract(const WeightedTensorField& a, int slot_i,
                             const WeightedTensorField& b, int slot_j);
/// Output slot k is input slot perm[k].
WeightedTensorField permute_slots(const WeightedTensorField& t, const std::vector<int>& perm);
WeightedTensorField raise_index(const WeightedTensorField& t, int slot);
WeightedTensorField lower_index(const WeightedTensorField& t, int slot);
/// True iff the field is unchanged under every transposition of the slots.
bool is_symmetric(const WeightedTensorField& t);

}  // namespace tractorlab
