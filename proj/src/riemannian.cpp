#include "tractorlab/riemannian.hpp"

#include "tractorlab/errors.hpp"

namespace tractorlab {

ScaleSpec ScaleSpec::build(int n, std::optional<Scalar> sigma, std::vector<Scalar> ups) {
  auto d = std::make_shared<Data>();
  d->n = n;
  d->sigma = std::move(sigma);
  d->upsilon = std::move(ups);
  d->reference = true;
  for (const auto& u : d->upsilon) d->reference = d->reference && u.is_zero();
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < a; ++b) {
      if (!(d->upsilon[a].derivative(b) == d->upsilon[b].derivative(a))) {
        throw PreconditionError("Upsilon is not closed");
      }
    }
  }
  Scalar sq(n);
  for (const auto& u : d->upsilon) sq += u * u;
  sq *= Rational(1, 2);
  d->schouten.assign(static_cast<std::size_t>(n * n), Scalar(n));
  d->j = Scalar(n);
  for (int a = 0; a < n; ++a) {
    for (int b = a; b < n; ++b) {
      Scalar p = d->upsilon[a] * d->upsilon[b] - d->upsilon[b].derivative(a);
      if (a == b) p -= sq;
      d->schouten[a * n + b] = p;
      d->schouten[b * n + a] = p;
    }
    d->j += d->schouten[a * n + a];
  }
  ScaleSpec s;
  s.d_ = std::move(d);
  return s;
}

ScaleSpec ScaleSpec::reference(int n) {
  return build(n, Scalar(n, 1), std::vector<Scalar>(n, Scalar(n)));
}

ScaleSpec ScaleSpec::from_sigma(const Scalar& sigma) {
  if (sigma.is_zero()) throw Error("the scale sigma must not vanish identically");
  const int n = sigma.nvars();
  std::vector<Scalar> ups;
  ups.reserve(n);
  const Scalar inv = sigma.inverse();
  for (int a = 0; a < n; ++a) ups.push_back(-(sigma.derivative(a) * inv));
  return build(n, sigma, std::move(ups));
}

ScaleSpec ScaleSpec::from_upsilon(std::vector<Scalar> upsilon) {
  if (upsilon.empty()) throw DimensionError("Upsilon needs at least one component");
  const int n = static_cast<int>(upsilon.size());
  for (const auto& u : upsilon)
    if (u.nvars() != n) throw DimensionError("Upsilon components must have n variables");
  return build(n, std::nullopt, std::move(upsilon));
}

ScaleSpec ScaleSpec::from_potential(const Scalar& u) {
  const int n = u.nvars();
  std::vector<Scalar> ups;
  for (int a = 0; a < n; ++a) ups.push_back(u.derivative(a));
  return build(n, std::nullopt, std::move(ups));
}

int ScaleSpec::n() const { return d_->n; }
bool ScaleSpec::is_reference() const { return d_->reference; }
bool ScaleSpec::has_sigma() const { return d_->sigma.has_value(); }

const Scalar& ScaleSpec::sigma() const {
  if (!d_->sigma) throw PreconditionError("splitting was given by Upsilon only; no scale sigma");
  return *d_->sigma;
}

const std::vector<Scalar>& ScaleSpec::upsilon() const { return d_->upsilon; }
const Scalar& ScaleSpec::upsilon(int a) const { return d_->upsilon[a]; }
const Scalar& ScaleSpec::schouten(int a, int b) const { return d_->schouten[a * d_->n + b]; }
const Scalar& ScaleSpec::j() const { return d_->j; }

CurvatureData ScaleSpec::curvature() const {
  CurvatureData c{WeightedTensorField::covariant(n(), 2, 0), d_->j};
  for (std::size_t i = 0; i < d_->schouten.size(); ++i) c.schouten[i] = d_->schouten[i];
  return c;
}

bool same_splitting(const ScaleSpec& a, const ScaleSpec& b) {
  return a.d_ == b.d_ || (a.n() == b.n() && a.upsilon() == b.upsilon());
}

bool operator==(const ScaleSpec& a, const ScaleSpec& b) {
  if (!same_splitting(a, b) || a.has_sigma() != b.has_sigma()) return false;
  return !a.has_sigma() || a.sigma() == b.sigma();
}

CurvatureData schouten(const ScaleSpec& scale) { return scale.curvature(); }

WeightedTensorField covderiv(const WeightedTensorField& t, const ScaleSpec& scale) {
  const int n = t.n();
  if (scale.n() != n) throw DimensionError("scale and field dimensions differ");
  const int r = t.rank();
  int w_eff = t.weight();
  for (auto v : t.variance())
    if (v == Variance::Contravariant) w_eff += 2;
  std::vector<Variance> var{Variance::Covariant};
  var.insert(var.end(), t.variance().begin(), t.variance().end());
  WeightedTensorField out(n, var, t.weight());
  const bool flat = scale.is_reference();
  const std::size_t block = t.size();
  std::vector<int> idx(r), dst(r);
  for (std::size_t f = 0; f < t.size(); ++f) {
    const Scalar& v = t[f];
    if (v.is_zero()) continue;
    for (int a = 0; a < n; ++a) out[a * block + f] += v.derivative(a);
    if (flat) continue;
    t.shape().unflatten(f, idx);
    if (w_eff != r) {
      for (int a = 0; a < n; ++a) out[a * block + f] += scale.upsilon(a) * v * Rational(w_eff - r);
    }
    for (int i = 0; i < r; ++i) {
      const int src = idx[i];
      dst = idx;
      // -Upsilon_{I_i} T[I_i -> a]: source slot value is the derivative index.
      for (int b = 0; b < n; ++b) {
        dst[i] = b;
        out[src * block + t.shape().flatten(dst)] -= scale.upsilon(b) * v;
      }
      // +delta_{a I_i} Upsilon^c T[I_i -> c].
      const Scalar uv = scale.upsilon(src) * v;
      for (int a = 0; a < n; ++a) {
        dst[i] = a;
        out[a * block + t.shape().flatten(dst)] += uv;
      }
    }
  }
  return out;
}

WeightedTensorField laplacian(const WeightedTensorField& t, const ScaleSpec& scale) {
  return trace(covderiv(covderiv(t, scale), scale), 0, 1);
}

WeightedTensorField divergence(const WeightedTensorField& t, int slot, const ScaleSpec& scale) {
  return trace(covderiv(t, scale), 0, slot + 1);
}

}  // namespace tractorlab
