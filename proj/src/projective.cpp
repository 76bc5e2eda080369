#include "tractorlab/projective.hpp"

#include "tractorlab/errors.hpp"

namespace tractorlab {

namespace {

std::vector<int> projective_dims(int n, int t, int s) {
  std::vector<int> dims(t, n + 1);
  dims.insert(dims.end(), s, n);
  return dims;
}

}  // namespace

ProjectiveField::ProjectiveField(int n, int tractor_slots, int tensor_slots, int weight, ScaleSpec scale)
    : n_(n),
      t_(tractor_slots),
      s_(tensor_slots),
      weight_(weight),
      scale_(std::move(scale)),
      shape_(projective_dims(n, tractor_slots, tensor_slots)),
      comps_(shape_.size(), Scalar(n)) {
  if (!scale_.valid() || scale_.n() != n) throw DimensionError("scale dimension does not match the field");
}

const Scalar& ProjectiveField::at(std::initializer_list<int> idx) const {
  return at(std::span<const int>(idx.begin(), idx.size()));
}

Scalar& ProjectiveField::at(std::initializer_list<int> idx) {
  return at(std::span<const int>(idx.begin(), idx.size()));
}

bool ProjectiveField::is_zero() const {
  for (const auto& c : comps_)
    if (!c.is_zero()) return false;
  return true;
}

bool operator==(const ProjectiveField& a, const ProjectiveField& b) {
  return a.n_ == b.n_ && a.t_ == b.t_ && a.s_ == b.s_ && a.weight_ == b.weight_ &&
         same_splitting(a.scale_, b.scale_) && a.comps_ == b.comps_;
}

ProjectiveField projective_covderiv(const ProjectiveField& t) {
  const int n = t.n(), tt = t.tractor_slots(), r = t.rank();
  const ScaleSpec& sc = t.scale();
  const bool flat = sc.is_reference();
  ProjectiveField out(n, tt, t.tensor_slots() + 1, t.weight(), sc);
  std::vector<Scalar> ric(static_cast<std::size_t>(n * n), Scalar(n));
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      Scalar v = sc.schouten(a, b) * Rational(n - 2);
      if (a == b) v += sc.j();
      ric[a * n + b] = v * Rational(1, n - 1);
    }
  }
  std::vector<int> idx(r), cur(r), dst(r + 1);
  auto add = [&](int a, const std::vector<int>& src, const Scalar& v) {
    for (int p = 0; p < tt; ++p) dst[p] = src[p];
    dst[tt] = a;
    for (int p = tt; p < r; ++p) dst[p + 1] = src[p];
    out.at(std::span<const int>(dst)) += v;
  };

  for (std::size_t f = 0; f < t.size(); ++f) {
    const Scalar& v = t[f];
    if (v.is_zero()) continue;
    t.shape().unflatten(f, idx);
    for (int a = 0; a < n; ++a) add(a, idx, v.derivative(a));

    if (!flat) {
      // every tractor slot adds +1 to the component weight; Zbar slots are covariant
      int w_c = t.weight() + tt;
      std::vector<int> cov;
      for (int p = 0; p < tt; ++p)
        if (idx[p] != 0) cov.push_back(p);
      for (int p = tt; p < r; ++p) cov.push_back(p);
      const int rc = static_cast<int>(cov.size());
      if (w_c != rc) {
        for (int a = 0; a < n; ++a) add(a, idx, sc.upsilon(a) * v * Rational(w_c - rc));
      }
      for (int p : cov) {
        const int off = p < tt ? 1 : 0;
        const int src = idx[p] - off;
        cur = idx;
        for (int b = 0; b < n; ++b) {
          cur[p] = b + off;
          add(src, cur, -(sc.upsilon(b) * v));
        }
        const Scalar uv = sc.upsilon(src) * v;
        for (int a = 0; a < n; ++a) {
          cur[p] = a + off;
          add(a, cur, uv);
        }
      }
    }

    for (int p = 0; p < tt; ++p) {
      cur = idx;
      if (idx[p] == 0) {
        for (int a = 0; a < n; ++a) {
          for (int b = 0; b < n; ++b) {
            const Scalar& rab = ric[a * n + b];
            if (rab.is_zero()) continue;
            cur[p] = b + 1;
            add(a, cur, rab * v);
          }
        }
      } else {
        const int b = idx[p] - 1;
        cur[p] = 0;
        add(b, cur, -v);
      }
    }
  }
  return out;
}

MixedField project_to_Iperp(const MixedField& t, const ScaleTractor& scale) {
  if (scale.iota.is_zero()) throw PreconditionError("iota = I^A I_A vanishes; no orthogonal projection");
  const MixedField i = change_splitting(scale.tractor, t.splitting());
  const Scalar inv = scale.iota.inverse();
  MixedField cur = t;
  const int tt = t.tractor_slots();
  for (int p = 0; p < tt; ++p) {
    MixedField ic = product(i, pair(i, cur, 0, p));
    std::vector<int> perm(tt);
    for (int k = 0; k < tt; ++k) perm[k] = k < p ? k + 1 : (k == p ? 0 : k);
    cur -= permute_tractor_slots(ic, perm) * inv;
  }
  return cur;
}

ProjectiveField conf_to_proj(const MixedField& t, const ScaleTractor& scale) {
  if (scale.iota.is_zero()) throw PreconditionError("iota = I^A I_A vanishes");
  if (!is_parallel(scale.tractor)) throw PreconditionError("scale tractor is not parallel (not an Einstein scale)");
  const ScaleSpec sp = ScaleSpec::from_sigma(scale.sigma);
  const MixedField ts = change_splitting(t, sp);
  const MixedField is = change_splitting(scale.tractor, sp);
  for (int p = 0; p < t.tractor_slots(); ++p) {
    if (!pair(is, ts, 0, p).is_zero()) {
      throw PreconditionError("field is not orthogonal to the scale tractor in slot " + std::to_string(p));
    }
  }
  const int n = t.n(), tt = t.tractor_slots();
  ProjectiveField out(n, tt, t.tensor_slots(), t.weight(), sp);
  std::vector<int> idx(t.rank());
  for (std::size_t f = 0; f < ts.size(); ++f) {
    if (ts[f].is_zero()) continue;
    ts.shape().unflatten(f, idx);
    bool keep = true;
    for (int p = 0; p < tt; ++p) keep = keep && idx[p] != x_index(n);
    if (keep) out.at(std::span<const int>(idx)) = ts[f];
  }
  return out;
}

WeightedTensorField projective_top(const ProjectiveField& t) {
  if (t.tractor_slots() != 4 || t.tensor_slots() != 0) {
    throw DimensionError("projective_top expects four tractor slots");
  }
  const int n = t.n();
  auto out = WeightedTensorField::covariant(n, 2, t.weight() + 4);
  for (int a = 0; a < n; ++a)
    for (int c = 0; c < n; ++c) out.at({a, c}) = t.at({a + 1, 0, c + 1, 0}) * Rational(4);
  return out;
}

}  // namespace tractorlab
