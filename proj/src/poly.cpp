#include "tractorlab/poly.hpp"

#include <algorithm>
#include <optional>
#include <sstream>
#include <utility>

#include "tractorlab/errors.hpp"

namespace tractorlab {

namespace {

constexpr int shift_of(int var) { return 8 * (kMaxVars - 1 - var); }

bool term_desc(const Term& a, const Term& b) {
  return grlex_less(b.mono, a.mono);
}

}  // namespace

// ---------------------------------------------------------------- Monomial

Monomial Monomial::from_exponents(std::span<const int> exps) {
  if (exps.size() > static_cast<std::size_t>(kMaxVars)) {
    throw DimensionError("at most 8 variables are supported");
  }
  Monomial m;
  for (std::size_t i = 0; i < exps.size(); ++i) {
    if (exps[i] < 0 || exps[i] > 255) {
      throw DimensionError("exponent out of range [0, 255]");
    }
    m.bits_ |= static_cast<std::uint64_t>(exps[i]) << shift_of(static_cast<int>(i));
    m.degree_ += exps[i];
  }
  return m;
}

Monomial Monomial::variable(int var, int power) {
  Monomial m;
  m.bits_ = static_cast<std::uint64_t>(power) << shift_of(var);
  m.degree_ = power;
  return m;
}

Monomial Monomial::operator*(const Monomial& other) const {
  for (int v = 0; v < kMaxVars; ++v) {
    if (exponent(v) + other.exponent(v) > 255) {
      throw DimensionError("monomial exponent overflow");
    }
  }
  Monomial m;
  m.bits_ = bits_ + other.bits_;
  m.degree_ = degree_ + other.degree_;
  return m;
}

bool Monomial::divides(const Monomial& other) const {
  if (degree_ > other.degree_) return false;
  for (int v = 0; v < kMaxVars; ++v) {
    if (exponent(v) > other.exponent(v)) return false;
  }
  return true;
}

Monomial Monomial::quotient_of(const Monomial& other) const {
  Monomial m;
  m.bits_ = other.bits_ - bits_;
  m.degree_ = other.degree_ - degree_;
  return m;
}

// -------------------------------------------------------------------- Poly

Poly::Poly(int nvars) : nvars_(nvars) {
  if (nvars < 0 || nvars > kMaxVars) {
    throw DimensionError("number of variables must lie in [0, 8]");
  }
}

Poly::Poly(int nvars, const Rational& c) : Poly(nvars) {
  if (c != 0) terms_.push_back({Monomial{}, c});
}

Poly Poly::variable(int nvars, int var) {
  if (var < 0 || var >= nvars) throw DimensionError("variable index out of range");
  Poly p(nvars);
  p.terms_.push_back({Monomial::variable(var), Rational(1)});
  return p;
}

Poly Poly::monomial(int nvars, const Monomial& m, const Rational& c) {
  Poly p(nvars);
  if (c != 0) p.terms_.push_back({m, c});
  return p;
}

Poly Poly::from_terms(int nvars, std::vector<Term> terms) {
  Poly p(nvars);
  p.terms_ = std::move(terms);
  p.normalize();
  return p;
}

void Poly::normalize() {
  std::sort(terms_.begin(), terms_.end(), term_desc);
  std::size_t out = 0;
  for (std::size_t i = 0; i < terms_.size();) {
    Term acc = std::move(terms_[i]);
    std::size_t j = i + 1;
    while (j < terms_.size() && terms_[j].mono == acc.mono) {
      acc.coef += terms_[j].coef;
      ++j;
    }
    if (acc.coef != 0) terms_[out++] = std::move(acc);
    i = j;
  }
  terms_.resize(out);
}

void Poly::check_same(const Poly& o) const {
  if (nvars_ != o.nvars_) {
    throw DimensionError("polynomials over different numbers of variables (" +
                         std::to_string(nvars_) + " vs " +
                         std::to_string(o.nvars_) + ")");
  }
}

bool Poly::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && terms_[0].mono.degree() == 0);
}

Rational Poly::constant_term() const {
  if (!terms_.empty() && terms_.back().mono.degree() == 0) return terms_.back().coef;
  return Rational(0);
}

int Poly::degree() const {
  return terms_.empty() ? -1 : terms_.front().mono.degree();
}

int Poly::degree_in(int var) const {
  int d = terms_.empty() ? -1 : 0;
  for (const auto& t : terms_) d = std::max(d, t.mono.exponent(var));
  return d;
}

bool Poly::uses_variable(int var) const {
  return std::any_of(terms_.begin(), terms_.end(),
                     [var](const Term& t) { return t.mono.exponent(var) > 0; });
}

Poly Poly::operator-() const {
  Poly r = *this;
  for (auto& t : r.terms_) t.coef = -t.coef;
  return r;
}

Poly& Poly::operator+=(const Poly& o) {
  check_same(o);
  if (o.terms_.empty()) return *this;
  std::vector<Term> merged;
  merged.reserve(terms_.size() + o.terms_.size());
  std::size_t i = 0, j = 0;
  while (i < terms_.size() || j < o.terms_.size()) {
    if (j == o.terms_.size() ||
        (i < terms_.size() && grlex_less(o.terms_[j].mono, terms_[i].mono))) {
      merged.push_back(std::move(terms_[i++]));
    } else if (i == terms_.size() || grlex_less(terms_[i].mono, o.terms_[j].mono)) {
      merged.push_back(o.terms_[j++]);
    } else {
      Rational c = terms_[i].coef + o.terms_[j].coef;
      if (c != 0) merged.push_back({terms_[i].mono, std::move(c)});
      ++i;
      ++j;
    }
  }
  terms_ = std::move(merged);
  return *this;
}

Poly& Poly::operator-=(const Poly& o) { return *this += -o; }

Poly& Poly::operator*=(const Rational& c) {
  if (c == 0) {
    terms_.clear();
  } else {
    for (auto& t : terms_) t.coef *= c;
  }
  return *this;
}

Poly operator*(const Poly& a, const Poly& b) {
  a.check_same(b);
  if (a.terms_.empty() || b.terms_.empty()) return Poly(a.nvars_);
  if (a.is_constant()) return b * a.terms_[0].coef;
  if (b.is_constant()) return a * b.terms_[0].coef;
  std::vector<Term> prod;
  prod.reserve(a.terms_.size() * b.terms_.size());
  for (const auto& s : a.terms_) {
    for (const auto& t : b.terms_) {
      prod.push_back({s.mono * t.mono, s.coef * t.coef});
    }
  }
  return Poly::from_terms(a.nvars_, std::move(prod));
}

bool operator==(const Poly& a, const Poly& b) {
  if (a.nvars_ != b.nvars_ || a.terms_.size() != b.terms_.size()) return false;
  for (std::size_t i = 0; i < a.terms_.size(); ++i) {
    if (!(a.terms_[i].mono == b.terms_[i].mono) || a.terms_[i].coef != b.terms_[i].coef) {
      return false;
    }
  }
  return true;
}

Poly Poly::pow(int e) const {
  Poly result(nvars_, 1);
  Poly base = *this;
  while (e > 0) {
    if (e & 1) result = result * base;
    e >>= 1;
    if (e) base = base * base;
  }
  return result;
}

Poly Poly::derivative(int var) const {
  if (var < 0 || var >= nvars_) throw DimensionError("derivative index out of range");
  Poly r(nvars_);
  const Monomial step = Monomial::variable(var);
  for (const auto& t : terms_) {
    const int e = t.mono.exponent(var);
    if (e == 0) continue;
    r.terms_.push_back({step.quotient_of(t.mono), t.coef * e});
  }
  // Lowering one exponent preserves the relative grlex order.
  return r;
}

Rational Poly::evaluate(std::span<const Rational> point) const {
  if (point.size() != static_cast<std::size_t>(nvars_)) {
    throw DimensionError("evaluation point has wrong length");
  }
  Rational sum = 0;
  for (const auto& t : terms_) {
    Rational v = t.coef;
    for (int i = 0; i < nvars_; ++i) {
      for (int k = t.mono.exponent(i); k > 0; --k) v *= point[i];
    }
    sum += v;
  }
  return sum;
}

Poly Poly::monic() const {
  if (terms_.empty() || terms_.front().coef == 1) return *this;
  Rational inv = 1 / terms_.front().coef;
  return *this * inv;
}

std::vector<Poly> Poly::coefficients_in(int var) const {
  std::vector<std::vector<Term>> buckets(static_cast<std::size_t>(std::max(0, degree_in(var)) + 1));
  for (const auto& t : terms_) {
    const int e = t.mono.exponent(var);
    buckets[e].push_back({Monomial::variable(var, e).quotient_of(t.mono), t.coef});
  }
  std::vector<Poly> out;
  out.reserve(buckets.size());
  for (auto& b : buckets) out.push_back(Poly::from_terms(nvars_, std::move(b)));
  return out;
}

Poly Poly::from_coefficients_in(int nvars, int var, const std::vector<Poly>& coeffs) {
  std::vector<Term> terms;
  for (std::size_t d = 0; d < coeffs.size(); ++d) {
    const Monomial m = Monomial::variable(var, static_cast<int>(d));
    for (const auto& t : coeffs[d].terms()) terms.push_back({t.mono * m, t.coef});
  }
  return Poly::from_terms(nvars, std::move(terms));
}

std::string rational_to_string(const Rational& r) { return r.get_str(); }

std::string Poly::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& t : terms_) {
    Rational c = t.coef;
    const bool neg = c < 0;
    if (neg) c = -c;
    if (first) {
      if (neg) os << "-";
    } else {
      os << (neg ? " - " : " + ");
    }
    first = false;
    const bool unit = (c == 1);
    bool wrote = false;
    if (!unit || t.mono.degree() == 0) {
      os << c.get_str();
      wrote = true;
    }
    for (int v = 0; v < nvars_; ++v) {
      const int e = t.mono.exponent(v);
      if (e == 0) continue;
      if (wrote) os << "*";
      os << "x" << (v + 1);
      if (e > 1) os << "^" << e;
      wrote = true;
    }
  }
  return os.str();
}

// ------------------------------------------------------ division and gcd

bool try_divide(const Poly& a, const Poly& b, Poly& q) {
  if (b.is_zero()) throw Error("division by the zero polynomial");
  if (a.nvars() != b.nvars()) throw DimensionError("division across nvars");
  std::vector<Term> quot;
  Poly rem = a;
  const Term& lead = b.leading_term();
  while (!rem.is_zero()) {
    const Term& lt = rem.leading_term();
    if (!lead.mono.divides(lt.mono)) return false;
    const Term t{lead.mono.quotient_of(lt.mono), lt.coef / lead.coef};
    rem -= Poly::monomial(a.nvars(), t.mono, t.coef) * b;
    quot.push_back(t);
  }
  q = Poly::from_terms(a.nvars(), std::move(quot));
  return true;
}

Poly exact_quotient(const Poly& a, const Poly& b) {
  Poly q;
  if (!try_divide(a, b, q)) {
    throw Error("exact division failed: (" + b.to_string() + ") does not divide (" +
                a.to_string() + ")");
  }
  return q;
}

namespace {

Poly pseudo_remainder(const Poly& a, const Poly& b, int var) {
  const auto bc = b.coefficients_in(var);
  const int db = static_cast<int>(bc.size()) - 1;
  const Poly& lcb = bc.back();
  Poly r = a;
  while (!r.is_zero()) {
    const int dr = r.degree_in(var);
    if (dr < db) break;
    const Poly lcr = r.coefficients_in(var).back();
    const Poly shift = Poly::monomial(a.nvars(), Monomial::variable(var, dr - db), 1);
    r = lcb * r - lcr * shift * b;
  }
  return r;
}

Poly content_in(const Poly& p, int var) {
  Poly g(p.nvars());
  for (const auto& c : p.coefficients_in(var)) {
    if (c.is_zero()) continue;
    g = gcd(g, c);
    if (g.is_constant()) break;
  }
  return g;
}

// Scales to integer coefficients with trivial integer content.
Poly numeric_primitive(const Poly& p) {
  if (p.is_zero()) return p;
  Integer den = 1, num = 0;
  for (const auto& t : p.terms()) {
    mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), t.coef.get_den_mpz_t());
    mpz_gcd(num.get_mpz_t(), num.get_mpz_t(), t.coef.get_num_mpz_t());
  }
  Rational f(den, num);
  f.canonicalize();
  if (p.leading_term().coef < 0) f = -f;
  return p * f;
}

Poly primitive_part_in(const Poly& p, int var) {
  return numeric_primitive(exact_quotient(p, content_in(p, var)));
}

}  // namespace

namespace {

Integer int_content(const Poly& p) {
  Integer g = 0;
  for (const auto& t : p.terms()) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), t.coef.get_num_mpz_t());
  return g;
}

Integer max_norm(const Poly& p) {
  Integer m = 0;
  for (const auto& t : p.terms()) {
    Integer v = abs(t.coef.get_num());
    if (v > m) m = v;
  }
  return m;
}

/// Substitutes x_var = xi.
Poly eval_at(const Poly& p, int var, const Integer& xi) {
  std::vector<Integer> powers{1};
  std::vector<Term> terms;
  terms.reserve(p.terms().size());
  for (const auto& t : p.terms()) {
    const int e = t.mono.exponent(var);
    while (static_cast<int>(powers.size()) <= e) powers.push_back(powers.back() * xi);
    terms.push_back({Monomial::variable(var, e).quotient_of(t.mono), t.coef * Rational(powers[e])});
  }
  return Poly::from_terms(p.nvars(), std::move(terms));
}

/// Inverse of eval_at for polynomials whose coefficients lie in (-xi/2, xi/2].
Poly xi_adic(Poly h, int var, const Integer& xi) {
  std::vector<Term> out;
  const Integer half = xi / 2;
  for (int e = 0; !h.is_zero(); ++e) {
    if (e > 255) return Poly(h.nvars());
    std::vector<Term> digit;
    for (const auto& t : h.terms()) {
      Integer r = t.coef.get_num() % xi;
      if (r > half) r -= xi;
      if (r < -half) r += xi;
      if (r != 0) digit.push_back({t.mono, Rational(r)});
    }
    Poly g = Poly::from_terms(h.nvars(), digit);
    for (const auto& t : digit) out.push_back({t.mono * Monomial::variable(var, e), t.coef});
    h = (h - g) * Rational(1 / Rational(xi));
  }
  return Poly::from_terms(h.nvars(), std::move(out));
}

/// Heuristic gcd over Z[x] including the integer content. Both inputs have
/// integer coefficients and are nonzero. Empty result means "gave up".
std::optional<Poly> heu_gcd(const Poly& a, const Poly& b, int depth) {
  const int nv = a.nvars();
  const Integer ca = int_content(a), cb = int_content(b);
  Integer c;
  mpz_gcd(c.get_mpz_t(), ca.get_mpz_t(), cb.get_mpz_t());
  if (a.is_constant() || b.is_constant()) return Poly(nv, Rational(c));
  const Poly pa = a * Rational(1 / Rational(ca));
  const Poly pb = b * Rational(1 / Rational(cb));
  int var = -1;
  for (int v = nv - 1; v >= 0 && var < 0; --v)
    if (pa.uses_variable(v) || pb.uses_variable(v)) var = v;
  const int deg = std::max(pa.degree_in(var), pb.degree_in(var));
  Integer xi = 2 * std::min(max_norm(pa), max_norm(pb)) + 29;
  for (int attempt = 0; attempt < 6; ++attempt) {
    if (mpz_sizeinbase(xi.get_mpz_t(), 2) * static_cast<std::size_t>(deg + 1) > 200000 || depth > 8) {
      return std::nullopt;
    }
    const Poly ea = eval_at(pa, var, xi), eb = eval_at(pb, var, xi);
    if (!ea.is_zero() && !eb.is_zero()) {
      auto h = heu_gcd(ea, eb, depth + 1);
      if (!h) return std::nullopt;
      Poly g = xi_adic(*h, var, xi);
      if (!g.is_zero()) {
        g = g * Rational(1 / Rational(int_content(g)));
        Poly q;
        if (try_divide(pa, g, q) && try_divide(pb, g, q)) return g * Rational(c);
      }
    }
    xi = xi * 73794 / 27011;
  }
  return std::nullopt;
}

Poly prs_gcd(const Poly& a, const Poly& b);

}  // namespace

Poly gcd(const Poly& a, const Poly& b) {
  if (a.nvars() != b.nvars()) throw DimensionError("gcd across nvars");
  const int nv = a.nvars();
  if (a.is_zero()) return b.monic();
  if (b.is_zero()) return a.monic();
  if (a.is_constant() || b.is_constant()) return Poly(nv, 1);
  if (a == b) return a.monic();
  Poly q;
  if (a.terms().size() >= b.terms().size() && try_divide(a, b, q)) return b.monic();
  if (b.terms().size() >= a.terms().size() && try_divide(b, a, q)) return a.monic();
  if (auto g = heu_gcd(numeric_primitive(a), numeric_primitive(b), 0)) return g->monic();
  return prs_gcd(a, b);
}

namespace {

Poly prs_gcd(const Poly& a, const Poly& b) {
  const int nv = a.nvars();
  int var = -1;
  for (int v = nv - 1; v >= 0 && var < 0; --v) {
    if (a.uses_variable(v) || b.uses_variable(v)) var = v;
  }
  const bool in_a = a.uses_variable(var);
  const bool in_b = b.uses_variable(var);
  if (!in_a || !in_b) {
    const Poly& with = in_a ? a : b;
    Poly g = in_a ? b : a;
    for (const auto& c : with.coefficients_in(var)) {
      if (c.is_zero()) continue;
      g = gcd(g, c);
      if (g.is_constant()) return Poly(nv, 1);
    }
    return g.monic();
  }

  const Poly ca = content_in(a, var);
  const Poly cb = content_in(b, var);
  const Poly c = gcd(ca, cb);
  Poly pa = numeric_primitive(exact_quotient(a, ca));
  Poly pb = numeric_primitive(exact_quotient(b, cb));
  if (pa.degree_in(var) < pb.degree_in(var)) std::swap(pa, pb);
  for (;;) {
    Poly r = pseudo_remainder(pa, pb, var);
    if (r.is_zero()) break;
    if (r.degree_in(var) == 0) {
      pb = Poly(nv, 1);
      break;
    }
    pa = std::move(pb);
    pb = primitive_part_in(r, var);
  }
  if (!pb.is_constant()) pb = primitive_part_in(pb, var);
  return (c * pb).monic();
}

}  // namespace

}  // namespace tractorlab
