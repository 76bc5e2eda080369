#include "tractorlab/scalar.hpp"

#include <utility>

#include "tractorlab/errors.hpp"

namespace tractorlab {

Scalar::Scalar(Poly p) : num_(std::move(p)), den_(num_.nvars(), 1) {}

Scalar::Scalar(Poly num, Poly den) : num_(std::move(num)), den_(std::move(den)) {
  if (num_.nvars() != den_.nvars()) throw DimensionError("numerator/denominator nvars differ");
  if (den_.is_zero()) throw Error("zero denominator");
  normalize();
}

// General reduction for a freshly supplied denominator.
void Scalar::normalize() {
  fac_.clear();
  if (num_.is_zero()) {
    den_ = Poly(num_.nvars(), 1);
    return;
  }
  if (!den_.is_constant()) {
    Poly g = gcd(num_, den_);
    if (!g.is_constant()) {
      num_ = exact_quotient(num_, g);
      den_ = exact_quotient(den_, g);
    }
  }
  const Rational lc = den_.leading_term().coef;
  if (lc != 1) {
    const Rational inv = 1 / lc;
    num_ *= inv;
    den_ *= inv;
  }
  if (!den_.is_constant()) fac_.push_back({den_, 1});
}

// num_ is over prod base^exp; cancels common factors base by base.
void Scalar::reduce() {
  if (num_.is_zero()) {
    fac_.clear();
    den_ = Poly(num_.nvars(), 1);
    return;
  }
  Poly q;
  for (std::size_t i = 0; i < fac_.size(); ++i) {
    while (fac_[i].exp > 0 && try_divide(num_, fac_[i].base, q)) {
      num_ = std::move(q);
      --fac_[i].exp;
    }
    if (fac_[i].exp == 0 || fac_[i].base.degree() <= 1) continue;
    Poly g = gcd(num_, fac_[i].base);
    if (g.is_constant()) continue;
    // split a reducible base; the new piece is handled later in this loop
    Poly rest = exact_quotient(fac_[i].base, g).monic();
    const int e = fac_[i].exp;
    fac_[i].base = std::move(rest);
    fac_.push_back({std::move(g), e});
  }
  std::vector<Factor> kept;
  for (auto& f : fac_) {
    if (f.exp == 0 || f.base.is_constant()) continue;
    bool merged = false;
    for (auto& k : kept) {
      if (k.base == f.base) {
        k.exp += f.exp;
        merged = true;
        break;
      }
    }
    if (!merged) kept.push_back(std::move(f));
  }
  fac_ = std::move(kept);
  expand_den();
}

void Scalar::expand_den() {
  den_ = Poly(num_.nvars(), 1);
  for (const auto& f : fac_) den_ = den_ * f.base.pow(f.exp);
}

void Scalar::check_same(const Scalar& o) const {
  if (nvars() != o.nvars()) {
    throw DimensionError("scalars over different numbers of variables (" +
                         std::to_string(nvars()) + " vs " + std::to_string(o.nvars()) + ")");
  }
}

const Poly& Scalar::as_poly() const {
  if (!is_polynomial()) throw Error("scalar is not a polynomial: " + to_string());
  return num_;
}

Scalar Scalar::operator-() const {
  Scalar r = *this;
  r.num_ = -r.num_;
  return r;
}

namespace {

bool same_factors(const auto& a, const auto& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i].exp != b[i].exp || !(a[i].base == b[i].base)) return false;
  return true;
}

}  // namespace

Scalar& Scalar::operator+=(const Scalar& o) {
  check_same(o);
  if (o.is_zero()) return *this;
  if (is_zero()) return *this = o;
  if (fac_.empty() && o.fac_.empty()) {
    num_ += o.num_;
    return *this;
  }
  if (same_factors(fac_, o.fac_)) {
    num_ += o.num_;
    reduce();
    return *this;
  }
  std::vector<Factor> merged = fac_;
  for (const auto& f : o.fac_) {
    bool found = false;
    for (auto& m : merged) {
      if (m.base == f.base) {
        m.exp = std::max(m.exp, f.exp);
        found = true;
        break;
      }
    }
    if (!found) merged.push_back(f);
  }
  auto cofactor = [&](const std::vector<Factor>& own) {
    Poly c(num_.nvars(), 1);
    for (const auto& m : merged) {
      int e = m.exp;
      for (const auto& f : own)
        if (f.base == m.base) e -= f.exp;
      if (e > 0) c = c * m.base.pow(e);
    }
    return c;
  };
  num_ = num_ * cofactor(fac_) + o.num_ * cofactor(o.fac_);
  fac_ = std::move(merged);
  reduce();
  return *this;
}

Scalar& Scalar::operator-=(const Scalar& o) { return *this += -o; }

Scalar& Scalar::operator*=(const Scalar& o) {
  check_same(o);
  if (is_zero()) return *this;
  if (o.is_zero()) return *this = o;
  num_ = num_ * o.num_;
  if (o.fac_.empty() && fac_.empty()) return *this;
  for (const auto& f : o.fac_) {
    bool found = false;
    for (auto& m : fac_) {
      if (m.base == f.base) {
        m.exp += f.exp;
        found = true;
        break;
      }
    }
    if (!found) fac_.push_back(f);
  }
  reduce();
  return *this;
}

Scalar& Scalar::operator*=(const Rational& c) {
  num_ *= c;
  if (num_.is_zero()) {
    den_ = Poly(num_.nvars(), 1);
    fac_.clear();
  }
  return *this;
}

Scalar Scalar::inverse() const {
  if (is_zero()) throw Error("inverse of the zero scalar");
  Scalar r(nvars());
  const Rational lc = num_.leading_term().coef;
  r.num_ = den_ * (1 / lc);
  if (num_.is_constant()) return r;
  r.fac_.push_back({num_ * (1 / lc), 1});
  r.den_ = r.fac_.back().base;
  return r;
}

Scalar& Scalar::operator/=(const Scalar& o) {
  check_same(o);
  return *this *= o.inverse();
}

Scalar Scalar::derivative(int var) const {
  if (fac_.empty()) return Scalar(num_.derivative(var));
  // d(N / prod b^e) = (N' prod b - N sum e b' prod_{j != i} b_j) / prod b^(e+1),
  // products over the bases that involve var
  const int nv = nvars();
  std::vector<std::size_t> act;
  std::vector<Poly> db;
  for (std::size_t i = 0; i < fac_.size(); ++i) {
    Poly d = fac_[i].base.derivative(var);
    if (d.is_zero()) continue;
    act.push_back(i);
    db.push_back(std::move(d));
  }
  if (act.empty()) {
    Scalar r = *this;
    r.num_ = num_.derivative(var);
    r.reduce();
    return r;
  }
  Poly all(nv, 1);
  for (auto i : act) all = all * fac_[i].base;
  Poly s(nv);
  for (std::size_t k = 0; k < act.size(); ++k) {
    Poly others(nv, 1);
    for (std::size_t l = 0; l < act.size(); ++l)
      if (l != k) others = others * fac_[act[l]].base;
    s += db[k] * others * Rational(fac_[act[k]].exp);
  }
  Scalar r(nv);
  r.num_ = num_.derivative(var) * all - num_ * s;
  r.fac_ = fac_;
  for (auto i : act) ++r.fac_[i].exp;
  r.reduce();
  return r;
}

Rational Scalar::evaluate(std::span<const Rational> point) const {
  const Rational d = den_.evaluate(point);
  if (d == 0) throw EvaluationError("pole of " + to_string() + " at evaluation point");
  return num_.evaluate(point) / d;
}

std::string Scalar::to_string() const {
  if (den_.is_constant()) return num_.to_string();
  return "(" + num_.to_string() + ")/(" + den_.to_string() + ")";
}

}  // namespace tractorlab
