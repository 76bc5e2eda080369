#include "tractorlab/multi_index.hpp"

#include <algorithm>
#include <numeric>

namespace tractorlab {

Shape::Shape(std::vector<int> dims) : dims_(std::move(dims)), strides_(dims_.size()) {
  size_ = 1;
  for (int i = rank() - 1; i >= 0; --i) {
    strides_[i] = size_;
    size_ *= static_cast<std::size_t>(dims_[i]);
  }
}

std::size_t Shape::flatten(std::span<const int> idx) const {
  std::size_t f = 0;
  for (int i = 0; i < rank(); ++i) f += strides_[i] * static_cast<std::size_t>(idx[i]);
  return f;
}

void Shape::unflatten(std::size_t flat, std::span<int> idx) const {
  for (int i = 0; i < rank(); ++i) {
    idx[i] = static_cast<int>(flat / strides_[i]);
    flat %= strides_[i];
  }
}

std::vector<int> Shape::unflatten(std::size_t flat) const {
  std::vector<int> idx(dims_.size());
  unflatten(flat, idx);
  return idx;
}

bool next_index(std::span<int> idx, std::span<const int> dims) {
  for (int i = static_cast<int>(idx.size()) - 1; i >= 0; --i) {
    if (++idx[i] < dims[i]) return true;
    idx[i] = 0;
  }
  return false;
}

std::vector<SignedPermutation> permutations(int k) {
  std::vector<int> p(k);
  std::iota(p.begin(), p.end(), 0);
  std::vector<SignedPermutation> out;
  do {
    int inversions = 0;
    for (int i = 0; i < k; ++i)
      for (int j = i + 1; j < k; ++j)
        if (p[i] > p[j]) ++inversions;
    out.push_back({p, inversions % 2 ? -1 : 1});
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

}  // namespace tractorlab
