#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace tractorlab {

/// Row-major layout over slots of varying dimension, first slot most
/// significant.
class Shape {
 public:
  Shape() = default;
  explicit Shape(std::vector<int> dims);

  const std::vector<int>& dims() const { return dims_; }
  int rank() const { return static_cast<int>(dims_.size()); }
  std::size_t size() const { return size_; }
  std::size_t stride(int slot) const { return strides_[slot]; }
  std::size_t flatten(std::span<const int> idx) const;
  void unflatten(std::size_t flat, std::span<int> idx) const;
  std::vector<int> unflatten(std::size_t flat) const;

  friend bool operator==(const Shape& a, const Shape& b) { return a.dims_ == b.dims_; }

 private:
  std::vector<int> dims_;
  std::vector<std::size_t> strides_;
  std::size_t size_ = 1;
};

/// Advances idx like an odometer; returns false after the last index.
bool next_index(std::span<int> idx, std::span<const int> dims);

/// All permutations of 0..k-1 with their signs.
struct SignedPermutation {
  std::vector<int> perm;
  int sign;
};
std::vector<SignedPermutation> permutations(int k);

}  // namespace tractorlab
