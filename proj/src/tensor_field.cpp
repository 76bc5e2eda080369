#include "tractorlab/tensor_field.hpp"

#include <algorithm>

#include "tractorlab/errors.hpp"

namespace tractorlab {

WeightedTensorField::WeightedTensorField(int n, std::vector<Variance> variance, int weight)
    : n_(n),
      variance_(std::move(variance)),
      weight_(weight),
      shape_(std::vector<int>(variance_.size(), n)),
      comps_(shape_.size(), Scalar(n)) {
  if (n < 1 || n > kMaxVars) throw DimensionError("dimension n must lie in [1, 8]");
}

WeightedTensorField WeightedTensorField::covariant(int n, int rank, int weight) {
  return WeightedTensorField(n, std::vector<Variance>(rank, Variance::Covariant), weight);
}

WeightedTensorField WeightedTensorField::density(const Scalar& s, int weight) {
  WeightedTensorField t(s.nvars(), {}, weight);
  t.comps_[0] = s;
  return t;
}

WeightedTensorField WeightedTensorField::metric(int n, bool inverse) {
  const Variance v = inverse ? Variance::Contravariant : Variance::Covariant;
  WeightedTensorField g(n, {v, v}, inverse ? -2 : 2);
  for (int a = 0; a < n; ++a) g.at({a, a}) = Scalar(n, 1);
  return g;
}

const Scalar& WeightedTensorField::at(std::initializer_list<int> idx) const {
  return at(std::span<const int>(idx.begin(), idx.size()));
}

Scalar& WeightedTensorField::at(std::initializer_list<int> idx) {
  return at(std::span<const int>(idx.begin(), idx.size()));
}

bool WeightedTensorField::is_zero() const {
  return std::all_of(comps_.begin(), comps_.end(), [](const Scalar& s) { return s.is_zero(); });
}

const Scalar& WeightedTensorField::value() const {
  if (rank() != 0) throw DimensionError("value() on a field of positive rank");
  return comps_[0];
}

void WeightedTensorField::check_compatible(const WeightedTensorField& o) const {
  if (n_ != o.n_ || variance_ != o.variance_) throw DimensionError("tensor slot mismatch");
  if (weight_ != o.weight_) {
    throw DimensionError("adding fields of weights " + std::to_string(weight_) + " and " +
                         std::to_string(o.weight_));
  }
}

WeightedTensorField& WeightedTensorField::operator+=(const WeightedTensorField& o) {
  check_compatible(o);
  for (std::size_t i = 0; i < comps_.size(); ++i) comps_[i] += o.comps_[i];
  return *this;
}

WeightedTensorField& WeightedTensorField::operator-=(const WeightedTensorField& o) {
  check_compatible(o);
  for (std::size_t i = 0; i < comps_.size(); ++i) comps_[i] -= o.comps_[i];
  return *this;
}

WeightedTensorField& WeightedTensorField::operator*=(const Scalar& s) {
  for (auto& c : comps_) c *= s;
  return *this;
}

bool operator==(const WeightedTensorField& a, const WeightedTensorField& b) {
  return a.n_ == b.n_ && a.variance_ == b.variance_ && a.weight_ == b.weight_ &&
         a.comps_ == b.comps_;
}

namespace {

WeightedTensorField signed_average(const WeightedTensorField& t, const std::vector<int>& slots,
                                   bool alternate) {
  for (int s : slots) {
    if (s < 0 || s >= t.rank()) throw DimensionError("slot out of range");
    if (t.variance()[s] != t.variance()[slots[0]]) {
      throw DimensionError("cannot (anti)symmetrize slots of mixed variance");
    }
  }
  const int k = static_cast<int>(slots.size());
  const auto perms = permutations(k);
  const Rational scale = Rational(1, static_cast<long>(perms.size()));
  WeightedTensorField out(t.n(), t.variance(), t.weight());
  std::vector<int> idx(t.rank()), src(t.rank());
  for (std::size_t f = 0; f < t.size(); ++f) {
    if (t[f].is_zero()) continue;
    t.shape().unflatten(f, idx);
    // T[idx] contributes to every output index obtained by permuting the named slots.
    for (const auto& p : perms) {
      src = idx;
      for (int i = 0; i < k; ++i) src[slots[i]] = idx[slots[p.perm[i]]];
      Scalar c = t[f] * scale;
      if (alternate && p.sign < 0) c = -c;
      out.at(std::span<const int>(src)) += c;
    }
  }
  return out;
}

}  // namespace

WeightedTensorField symmetrize(const WeightedTensorField& t, const std::vector<int>& slots) {
  return signed_average(t, slots, false);
}

WeightedTensorField antisymmetrize(const WeightedTensorField& t, const std::vector<int>& slots) {
  return signed_average(t, slots, true);
}

WeightedTensorField trace(const WeightedTensorField& t, int slot_i, int slot_j) {
  if (slot_i == slot_j || slot_i < 0 || slot_j < 0 || slot_i >= t.rank() || slot_j >= t.rank()) {
    throw DimensionError("invalid trace slot pair");
  }
  int shift = 0;
  const Variance vi = t.variance()[slot_i], vj = t.variance()[slot_j];
  if (vi == vj) shift = (vi == Variance::Covariant) ? -2 : 2;
  std::vector<Variance> var;
  for (int s = 0; s < t.rank(); ++s)
    if (s != slot_i && s != slot_j) var.push_back(t.variance()[s]);
  WeightedTensorField out(t.n(), var, t.weight() + shift);
  std::vector<int> idx(t.rank()), rest;
  for (std::size_t f = 0; f < t.size(); ++f) {
    if (t[f].is_zero()) continue;
    t.shape().unflatten(f, idx);
    if (idx[slot_i] != idx[slot_j]) continue;
    rest.clear();
    for (int s = 0; s < t.rank(); ++s)
      if (s != slot_i && s != slot_j) rest.push_back(idx[s]);
    out.at(std::span<const int>(rest)) += t[f];
  }
  return out;
}

bool is_symmetric(const WeightedTensorField& t) {
  std::vector<int> idx(t.rank()), sw(t.rank());
  for (std::size_t f = 0; f < t.size(); ++f) {
    t.shape().unflatten(f, idx);
    for (int i = 0; i < t.rank(); ++i) {
      for (int j = i + 1; j < t.rank(); ++j) {
        sw = idx;
        std::swap(sw[i], sw[j]);
        if (!(t.at(std::span<const int>(sw)) == t[f])) return false;
      }
    }
  }
  return true;
}

WeightedTensorField tracefree_sym2(const WeightedTensorField& t) {
  if (t.rank() != 2 || t.variance()[0] != t.variance()[1]) {
    throw DimensionError("tracefree_sym2 needs a rank-2 field of uniform variance");
  }
  if (!is_symmetric(t)) throw PreconditionError("tracefree_sym2: input is not symmetric");
  Scalar tr(t.n());
  for (int a = 0; a < t.n(); ++a) tr += t.at({a, a});
  tr *= Rational(1, t.n());
  WeightedTensorField out = t;
  for (int a = 0; a < t.n(); ++a) out.at({a, a}) -= tr;
  return out;
}

WeightedTensorField tensor_product(const WeightedTensorField& a, const WeightedTensorField& b) {
  if (a.n() != b.n()) throw DimensionError("tensor product across dimensions");
  std::vector<Variance> var = a.variance();
  var.insert(var.end(), b.variance().begin(), b.variance().end());
  WeightedTensorField out(a.n(), var, a.weight() + b.weight());
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].is_zero()) continue;
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (b[j].is_zero()) continue;
      out[i * b.size() + j] = a[i] * b[j];
    }
  }
  return out;
}

WeightedTensorField contract(const WeightedTensorField& a, int slot_i,
                             const WeightedTensorField& b, int slot_j) {
  return trace(tensor_product(a, b), slot_i, a.rank() + slot_j);
}

WeightedTensorField permute_slots(const WeightedTensorField& t, const std::vector<int>& perm) {
  if (static_cast<int>(perm.size()) != t.rank()) throw DimensionError("permutation length");
  std::vector<Variance> var(t.rank());
  for (int k = 0; k < t.rank(); ++k) var[k] = t.variance()[perm[k]];
  WeightedTensorField out(t.n(), var, t.weight());
  std::vector<int> idx(t.rank()), dst(t.rank());
  for (std::size_t f = 0; f < t.size(); ++f) {
    if (t[f].is_zero()) continue;
    t.shape().unflatten(f, idx);
    for (int k = 0; k < t.rank(); ++k) dst[k] = idx[perm[k]];
    out.at(std::span<const int>(dst)) = t[f];
  }
  return out;
}

namespace {

WeightedTensorField flip_variance(const WeightedTensorField& t, int slot, Variance from, int shift) {
  if (slot < 0 || slot >= t.rank()) throw DimensionError("slot out of range");
  if (t.variance()[slot] != from) throw DimensionError("slot has the wrong variance");
  std::vector<Variance> var = t.variance();
  var[slot] = from == Variance::Covariant ? Variance::Contravariant : Variance::Covariant;
  WeightedTensorField out(t.n(), var, t.weight() + shift);
  for (std::size_t f = 0; f < t.size(); ++f) out[f] = t[f];
  return out;
}

}  // namespace

WeightedTensorField raise_index(const WeightedTensorField& t, int slot) {
  return flip_variance(t, slot, Variance::Covariant, -2);
}

WeightedTensorField lower_index(const WeightedTensorField& t, int slot) {
  return flip_variance(t, slot, Variance::Contravariant, 2);
}

}  // namespace tractorlab
