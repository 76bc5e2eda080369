#include "tractorlab/solver.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <numeric>

#include "tractorlab/errors.hpp"
#include "tractorlab/parallel.hpp"
#include "tractorlab/prolongation.hpp"

namespace tractorlab {

std::vector<Rational> RationalMatrix::apply(const std::vector<Rational>& v) const {
  if (static_cast<int>(v.size()) != cols_) throw DimensionError("matrix-vector size mismatch");
  std::vector<Rational> out(rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j)
      if (sgn((*this)(i, j)) != 0) out[i] += (*this)(i, j) * v[j];
  return out;
}

namespace {

// a - s * b for sorted sparse rows
SparseRow axpy(const SparseRow& a, const Rational& s, const SparseRow& b) {
  SparseRow out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
      out.push_back(a[i++]);
    } else if (i == a.size() || b[j].first < a[i].first) {
      out.emplace_back(b[j].first, -s * b[j].second);
      ++j;
    } else {
      Rational v = a[i].second - s * b[j].second;
      if (sgn(v) != 0) out.emplace_back(a[i].first, std::move(v));
      ++i;
      ++j;
    }
  }
  return out;
}

const Rational* entry(const SparseRow& r, int col) {
  auto it = std::lower_bound(r.begin(), r.end(), col, [](const auto& e, int c) { return e.first < c; });
  return it != r.end() && it->first == col ? &it->second : nullptr;
}

// Incremental reduced row echelon form; the pivot of a new row is its
// smallest remaining column.
class Rref {
 public:
  explicit Rref(int cols) : where_(static_cast<std::size_t>(cols), -1), scratch_(cols) {}

  void add(const SparseRow& in) {
    for (const auto& [c, v] : in) scratch_[c] += v;
    std::vector<int> touched;
    for (const auto& e : in) touched.push_back(e.first);
    for (const auto& [c, v0] : in) {
      (void)v0;
      const int p = where_[c];
      if (p < 0 || sgn(scratch_[c]) == 0) continue;
      const Rational s = scratch_[c];
      for (const auto& [d, w] : rows_[p]) {
        if (sgn(scratch_[d]) == 0) touched.push_back(d);
        scratch_[d] -= s * w;
      }
    }
    std::sort(touched.begin(), touched.end());
    touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
    SparseRow row;
    for (int c : touched) {
      if (sgn(scratch_[c]) != 0) row.emplace_back(c, scratch_[c]);
      scratch_[c] = 0;
    }
    if (row.empty()) return;
    const int pc = row.front().first;
    const Rational inv = 1 / row.front().second;
    for (auto& e : row) e.second *= inv;
    for (auto& r : rows_) {
      if (const Rational* v = entry(r, pc)) r = axpy(r, Rational(*v), row);
    }
    where_[pc] = static_cast<int>(rows_.size());
    pivots_.push_back(pc);
    rows_.push_back(std::move(row));
  }

  int rank() const { return static_cast<int>(rows_.size()); }
  const std::vector<int>& pivots() const { return pivots_; }
  const std::vector<SparseRow>& rows() const { return rows_; }
  bool is_pivot(int c) const { return where_[c] >= 0; }

 private:
  std::vector<int> where_;
  std::vector<Rational> scratch_;
  std::vector<int> pivots_;
  std::vector<SparseRow> rows_;
};

std::vector<Rational> primitive(std::vector<Rational> v) {
  Integer den = 1, num = 0;
  for (const auto& x : v) {
    if (sgn(x) == 0) continue;
    mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), x.get_den_mpz_t());
    mpz_gcd(num.get_mpz_t(), num.get_mpz_t(), x.get_num_mpz_t());
  }
  if (num == 0) return v;
  Rational f(den, num);
  f.canonicalize();
  for (auto& x : v) x *= f;
  return v;
}

NullspaceResult nullspace_of(const Rref& r, int cols) {
  NullspaceResult out;
  out.rank = r.rank();
  for (int f = 0; f < cols; ++f) {
    if (r.is_pivot(f)) continue;
    std::vector<Rational> v(cols);
    v[f] = 1;
    for (std::size_t i = 0; i < r.rows().size(); ++i) {
      if (const Rational* e = entry(r.rows()[i], f)) v[r.pivots()[i]] = -*e;
    }
    out.basis.push_back(primitive(std::move(v)));
  }
  return out;
}

// ---------------------------------------------------------- fiber algebra

struct Fiber {
  int n, N;
  explicit Fiber(int n_) : n(n_), N(n_ + 2) {}
  std::size_t idx(int a, int b, int c, int d) const { return ((static_cast<std::size_t>(a) * N + b) * N + c) * N + d; }
  std::size_t size4() const { return static_cast<std::size_t>(N) * N * N * N; }
  int g(int a, int b) const { return inverse_metric(n, a, b); }
  std::vector<Rational> raise(const std::vector<Rational>& v) const {
    std::vector<Rational> out(N);
    for (int a = 0; a < N; ++a)
      for (int b = 0; b < N; ++b)
        if (g(a, b) != 0) out[a] += g(a, b) * v[b];
    return out;
  }
  Rational dot(const std::vector<Rational>& u, const std::vector<Rational>& v) const {
    const auto ru = raise(u);
    Rational s = 0;
    for (int a = 0; a < N; ++a) s += ru[a] * v[a];
    return s;
  }
  std::vector<std::pair<int, int>> pairs() const {
    std::vector<std::pair<int, int>> p;
    for (int i = 0; i < N; ++i)
      for (int j = i + 1; j < N; ++j) p.emplace_back(i, j);
    return p;
  }
  // (Q wedge P)_ABCD for symmetric N x N matrices
  std::vector<Rational> wedge(const std::vector<Rational>& q, const std::vector<Rational>& p) const {
    std::vector<Rational> r(size4());
    auto Q = [&](int a, int b) -> const Rational& { return q[a * N + b]; };
    auto P = [&](int a, int b) -> const Rational& { return p[a * N + b]; };
    for (int a = 0; a < N; ++a)
      for (int b = 0; b < N; ++b)
        for (int c = 0; c < N; ++c)
          for (int d = 0; d < N; ++d)
            r[idx(a, b, c, d)] = Q(a, c) * P(b, d) - Q(b, c) * P(a, d) + Q(b, d) * P(a, c) - Q(a, d) * P(b, c);
    return r;
  }
  std::vector<Rational> metric() const {
    std::vector<Rational> m(static_cast<std::size_t>(N) * N);
    for (int a = 0; a < N; ++a)
      for (int b = 0; b < N; ++b) m[a * N + b] = g(a, b);
    return m;
  }
  // R_ABC^B
  std::vector<Rational> ricci(const std::vector<Rational>& r) const {
    std::vector<Rational> out(static_cast<std::size_t>(N) * N);
    for (int a = 0; a < N; ++a)
      for (int c = 0; c < N; ++c)
        for (int b = 0; b < N; ++b)
          for (int d = 0; d < N; ++d)
            if (g(b, d) != 0) out[a * N + c] += g(b, d) * r[idx(a, b, c, d)];
    return out;
  }
  // trace-free part R - g wedge P with P = (1/n)(Ric - J g), J = Ric^A_A / (2(n+1))
  std::vector<Rational> tracefree(const std::vector<Rational>& r) const {
    const auto ric = ricci(r);
    Rational s = 0;
    for (int a = 0; a < N; ++a)
      for (int c = 0; c < N; ++c)
        if (g(a, c) != 0) s += g(a, c) * ric[a * N + c];
    const Rational j = s / (2 * (n + 1));
    std::vector<Rational> p(ric.size());
    for (int a = 0; a < N; ++a)
      for (int c = 0; c < N; ++c) p[a * N + c] = (ric[a * N + c] - j * g(a, c)) / n;
    auto gp = wedge(metric(), p);
    for (std::size_t i = 0; i < gp.size(); ++i) gp[i] = r[i] - gp[i];
    return gp;
  }
  // I^A R_ABCD, flattened over (B, C, D)
  std::vector<Rational> contract_first(const std::vector<Rational>& iup, const std::vector<Rational>& r) const {
    std::vector<Rational> out(static_cast<std::size_t>(N) * N * N);
    for (int a = 0; a < N; ++a) {
      if (sgn(iup[a]) == 0) continue;
      for (int b = 0; b < N; ++b)
        for (int c = 0; c < N; ++c)
          for (int d = 0; d < N; ++d) out[(b * N + c) * N + d] += iup[a] * r[idx(a, b, c, d)];
    }
    return out;
  }
};

bool all_zero(const std::vector<Rational>& v) {
  return std::all_of(v.begin(), v.end(), [](const Rational& x) { return sgn(x) == 0; });
}

// Kernel of the linear map given by its column images.
NullspaceResult column_kernel(const std::vector<std::vector<Rational>>& images, std::size_t* nrows = nullptr) {
  const int cols = static_cast<int>(images.size());
  const std::size_t len = images.empty() ? 0 : images.front().size();
  std::vector<SparseRow> rows;
  for (std::size_t i = 0; i < len; ++i) {
    SparseRow r;
    for (int j = 0; j < cols; ++j)
      if (sgn(images[j][i]) != 0) r.emplace_back(j, images[j][i]);
    if (!r.empty()) rows.push_back(std::move(r));
  }
  if (nrows) *nrows = rows.size();
  return rank_nullspace(cols, rows);
}

std::vector<Rational> combine(const std::vector<std::vector<Rational>>& cols, const std::vector<Rational>& c) {
  std::vector<Rational> out(cols.front().size());
  for (std::size_t j = 0; j < cols.size(); ++j) {
    if (sgn(c[j]) == 0) continue;
    for (std::size_t i = 0; i < out.size(); ++i)
      if (sgn(cols[j][i]) != 0) out[i] += c[j] * cols[j][i];
  }
  return out;
}

// Pair-symmetric elements of Lambda^2 (x) Lambda^2, one per unknown.
std::vector<std::vector<Rational>> pair_symmetric_generators(const Fiber& fb) {
  const auto pr = fb.pairs();
  std::vector<std::vector<Rational>> gens;
  for (std::size_t p = 0; p < pr.size(); ++p) {
    for (std::size_t q = p; q < pr.size(); ++q) {
      std::vector<Rational> t(fb.size4());
      auto put = [&](std::pair<int, int> x, std::pair<int, int> y) {
        const auto [i, j] = x;
        const auto [k, l] = y;
        t[fb.idx(i, j, k, l)] = 1;
        t[fb.idx(j, i, k, l)] = -1;
        t[fb.idx(i, j, l, k)] = -1;
        t[fb.idx(j, i, l, k)] = 1;
      };
      put(pr[p], pr[q]);
      put(pr[q], pr[p]);
      gens.push_back(std::move(t));
    }
  }
  return gens;
}

std::vector<Rational> bianchi_image(const Fiber& fb, const std::vector<Rational>& r) {
  const int N = fb.N;
  std::vector<Rational> out(fb.size4());
  for (int a = 0; a < N; ++a)
    for (int b = 0; b < N; ++b)
      for (int c = 0; c < N; ++c)
        for (int d = 0; d < N; ++d)
          out[fb.idx(a, b, c, d)] = r[fb.idx(a, b, c, d)] + r[fb.idx(a, c, d, b)] + r[fb.idx(a, d, b, c)];
  return out;
}

MixedField to_field(const Fiber& fb, const std::vector<Rational>& flat) { return constant_tractor(fb.n, 4, flat); }

std::vector<Rational> to_flat(const MixedField& t) {
  std::vector<Rational> out(t.size());
  for (std::size_t f = 0; f < t.size(); ++f) out[f] = t[f].as_poly().constant_term();
  return out;
}

// ---------------------------------------------------------- CK ansatz

std::vector<std::vector<int>> exponent_vectors(int n, int d) {
  std::vector<std::vector<int>> out;
  std::vector<int> e(n, 0);
  auto rec = [&](auto&& self, int var, int left) -> void {
    if (var == n - 1) {
      e[var] = left;
      out.push_back(e);
      return;
    }
    for (int k = left; k >= 0; --k) {
      e[var] = k;
      self(self, var + 1, left - k);
    }
  };
  rec(rec, 0, d);
  return out;
}

struct Block {
  std::vector<WeightedTensorField> columns;
  std::vector<SparseRow> rows;
};

// Rows are (component with nondecreasing indices, monomial) coefficients of
// the residual applied to each column.
template <class Residual>
Block build_block(const std::vector<WeightedTensorField>& columns, Residual residual) {
  Block b;
  b.columns = columns;
  std::vector<WeightedTensorField> images(columns.size());
  parallel_for(columns.size(), [&](std::size_t j) { images[j] = residual(columns[j]); });
  std::map<std::pair<std::size_t, std::uint64_t>, std::size_t> row_of;
  std::vector<std::map<int, Rational>> acc;
  for (std::size_t j = 0; j < images.size(); ++j) {
    const auto& img = images[j];
    for (std::size_t f = 0; f < img.size(); ++f) {
      if (img[f].is_zero()) continue;
      const auto idx = img.shape().unflatten(f);
      if (!std::is_sorted(idx.begin(), idx.end())) continue;
      for (const auto& t : img[f].as_poly().terms()) {
        auto key = std::make_pair(f, t.mono.bits());
        auto it = row_of.find(key);
        if (it == row_of.end()) {
          it = row_of.emplace(key, acc.size()).first;
          acc.emplace_back();
        }
        acc[it->second][static_cast<int>(j)] += t.coef;
      }
    }
  }
  for (auto& m : acc) {
    SparseRow r;
    for (auto& [c, v] : m)
      if (sgn(v) != 0) r.emplace_back(c, v);
    if (!r.empty()) b.rows.push_back(std::move(r));
  }
  return b;
}

std::vector<WeightedTensorField> vector_columns(int n, int d) {
  std::vector<WeightedTensorField> cols;
  for (const auto& e : exponent_vectors(n, d)) {
    const Poly m = Poly::monomial(n, Monomial::from_exponents(e), 1);
    for (int a = 0; a < n; ++a) {
      auto k = WeightedTensorField::covariant(n, 1, 2);
      k.at({a}) = Scalar(m);
      cols.push_back(std::move(k));
    }
  }
  return cols;
}

std::vector<WeightedTensorField> tensor_columns(int n, int d) {
  std::vector<WeightedTensorField> cols;
  for (const auto& e : exponent_vectors(n, d)) {
    const Scalar m(Poly::monomial(n, Monomial::from_exponents(e), 1));
    for (int a = 0; a < n; ++a) {
      for (int b = a + 1; b < n; ++b) {
        auto k = WeightedTensorField::covariant(n, 2, 4);
        k.at({a, b}) = m;
        k.at({b, a}) = m;
        cols.push_back(std::move(k));
      }
    }
    for (int a = 0; a + 1 < n; ++a) {
      auto k = WeightedTensorField::covariant(n, 2, 4);
      k.at({a, a}) = m;
      k.at({n - 1, n - 1}) = -m;
      cols.push_back(std::move(k));
    }
  }
  return cols;
}

template <class Columns, class Residual>
BasisReport ck_basis(const std::string& label, int n, int degree_bound, Columns columns, Residual residual) {
  if (n < 2 || n > kMaxVars) throw DimensionError("dimension must lie in [2, 8]");
  if (degree_bound < 0) throw PreconditionError("degree bound must be nonnegative");
  BasisReport rep;
  rep.label = label;
  rep.n = n;
  rep.degree_bound = degree_bound;
  for (int d = 0; d <= degree_bound + 1; ++d) {
    const Block b = build_block(columns(n, d), residual);
    const int cols = static_cast<int>(b.columns.size());
    const NullspaceResult ns = rank_nullspace(cols, b.rows);
    if (d == degree_bound + 1) {
      rep.next_degree_nullity = static_cast<int>(ns.basis.size());
      break;
    }
    rep.matrix_rows += b.rows.size();
    rep.matrix_cols += static_cast<std::size_t>(cols);
    rep.rank += ns.rank;
    for (const auto& v : ns.basis) {
      WeightedTensorField k = b.columns.front() * Scalar(n);
      for (int j = 0; j < cols; ++j)
        if (sgn(v[j]) != 0) k += b.columns[j] * Scalar(n, v[j]);
      rep.fields.push_back(std::move(k));
    }
  }
  rep.dimension = static_cast<int>(rep.fields.size());
  if (*rep.next_degree_nullity != 0) {
    throw Error(label + ": dimension grows at degree " + std::to_string(degree_bound + 1));
  }
  return rep;
}

}  // namespace

NullspaceResult rank_nullspace(int cols, const std::vector<SparseRow>& rows) {
  Rref r(cols);
  for (const auto& row : rows) {
    SparseRow sorted = row;
    std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    for (const auto& e : sorted) {
      if (e.first < 0 || e.first >= cols) throw DimensionError("sparse row column out of range");
    }
    r.add(sorted);
  }
  return nullspace_of(r, cols);
}

NullspaceResult rank_nullspace(const RationalMatrix& m) {
  std::vector<SparseRow> rows;
  for (int i = 0; i < m.rows(); ++i) {
    SparseRow r;
    for (int j = 0; j < m.cols(); ++j)
      if (sgn(m(i, j)) != 0) r.emplace_back(j, m(i, j));
    rows.push_back(std::move(r));
  }
  return rank_nullspace(m.cols(), rows);
}

int matrix_rank(int cols, const std::vector<SparseRow>& rows) { return rank_nullspace(cols, rows).rank; }

std::optional<std::vector<Rational>> solve_affine(int cols, const std::vector<SparseRow>& rows,
                                                  const std::vector<Rational>& rhs) {
  if (rhs.size() != rows.size()) throw DimensionError("right-hand side length differs from row count");
  // the right-hand side is the last column, so it becomes a pivot only for
  // an inconsistent row
  Rref r(cols + 1);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    SparseRow row = rows[i];
    std::sort(row.begin(), row.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    if (sgn(rhs[i]) != 0) row.emplace_back(cols, rhs[i]);
    r.add(row);
  }
  if (r.is_pivot(cols)) return std::nullopt;
  std::vector<Rational> x(cols);
  for (std::size_t i = 0; i < r.rows().size(); ++i) {
    if (const Rational* e = entry(r.rows()[i], cols)) x[r.pivots()[i]] = *e;
  }
  return x;
}

int expected_ckv_dimension(int n) { return (n + 1) * (n + 2) / 2; }
int expected_weyl_dimension(int N) { return N * N * (N * N - 1) / 12 - N * (N + 1) / 2; }
int expected_einstein_dimension(int n) { return n * (n + 1) * (n + 1) * (n + 2) / 12 - 1; }

std::vector<Rational> evaluate_tractor(const MixedField& t, std::span<const Rational> point) {
  std::vector<Rational> out(t.size());
  for (std::size_t f = 0; f < t.size(); ++f) out[f] = t[f].evaluate(point);
  return out;
}

MixedField constant_tractor(int n, int slots, const std::vector<Rational>& flat) {
  MixedField t(n, slots, 0, 0, ScaleSpec::reference(n));
  if (flat.size() != t.size()) throw DimensionError("constant tractor has the wrong number of components");
  for (std::size_t f = 0; f < flat.size(); ++f) t[f] = Scalar(n, flat[f]);
  return t;
}

BasisReport ckv_basis(int n, int degree_bound) {
  const auto ref = ScaleSpec::reference(n);
  auto rep = ck_basis("conformal Killing 1-forms", n, degree_bound, vector_columns,
                      [&](const WeightedTensorField& k) { return ck_vector_residual(k, ref); });
  rep.cross_check = (n + 2) * (n + 1) / 2;
  rep.cross_check_label = "skew 2-tractors";
  return rep;
}

BasisReport ckt_basis(int n, int degree_bound) {
  const auto ref = ScaleSpec::reference(n);
  auto rep = ck_basis("conformal Killing 2-tensors", n, degree_bound, tensor_columns,
                      [&](const WeightedTensorField& k) { return ck_tensor_residual(k, ref); });
  rep.cross_check = weyl_space_basis(n + 2).dimension;
  rep.cross_check_label = "Weyl space in dimension n+2";
  return rep;
}

BasisReport curvature_space_basis(int N, const std::vector<Rational>* orthogonal_to) {
  if (N < 3 || N > kMaxVars + 2) throw DimensionError("fiber dimension must lie in [3, 10]");
  const Fiber fb(N - 2);
  const auto gens = pair_symmetric_generators(fb);
  std::vector<std::vector<Rational>> images(gens.size());
  std::vector<Rational> iup;
  if (orthogonal_to) {
    if (static_cast<int>(orthogonal_to->size()) != N) throw DimensionError("tractor has the wrong length");
    iup = fb.raise(*orthogonal_to);
  }
  parallel_for(gens.size(), [&](std::size_t j) {
    auto img = bianchi_image(fb, gens[j]);
    if (orthogonal_to) {
      auto o = fb.contract_first(iup, gens[j]);
      img.insert(img.end(), o.begin(), o.end());
    }
    images[j] = std::move(img);
  });
  BasisReport rep;
  rep.label = orthogonal_to ? "curvature tensors orthogonal to a tractor" : "curvature tensors";
  rep.n = N - 2;
  const auto ns = column_kernel(images, &rep.matrix_rows);
  rep.matrix_cols = gens.size();
  rep.rank = ns.rank;
  for (const auto& v : ns.basis) rep.tractors.push_back(to_field(fb, combine(gens, v)));
  rep.dimension = static_cast<int>(rep.tractors.size());
  rep.point.assign(static_cast<std::size_t>(N - 2), Rational(0));
  return rep;
}

BasisReport weyl_space_basis(int N) {
  if (N < 3 || N > kMaxVars + 2) throw DimensionError("fiber dimension must lie in [3, 10]");
  const Fiber fb(N - 2);
  const auto gens = pair_symmetric_generators(fb);
  std::vector<std::vector<Rational>> images(gens.size());
  parallel_for(gens.size(), [&](std::size_t j) {
    auto img = bianchi_image(fb, gens[j]);
    auto ric = fb.ricci(gens[j]);
    img.insert(img.end(), ric.begin(), ric.end());
    images[j] = std::move(img);
  });
  BasisReport rep;
  rep.label = "Weyl tensors";
  rep.n = N - 2;
  const auto ns = column_kernel(images, &rep.matrix_rows);
  rep.matrix_cols = gens.size();
  rep.rank = ns.rank;
  for (const auto& v : ns.basis) rep.tractors.push_back(to_field(fb, combine(gens, v)));
  rep.dimension = static_cast<int>(rep.tractors.size());
  rep.point.assign(static_cast<std::size_t>(N - 2), Rational(0));
  rep.cross_check = expected_weyl_dimension(N);
  rep.cross_check_label = "N^2(N^2-1)/12 - N(N+1)/2";
  return rep;
}

namespace {

struct EinsteinPoint {
  std::vector<Rational> point, ivec, iup;
  Rational iota;
};

EinsteinPoint einstein_point(const ScaleSpec& scale, const Fiber& fb) {
  const int n = scale.n();
  const ScaleTractor st = scale_tractor(scale);
  if (st.iota.is_zero()) throw PreconditionError("iota = I^A I_A vanishes");
  if (!is_parallel(st.tractor)) throw PreconditionError("scale tractor is not parallel (not an Einstein scale)");
  EinsteinPoint ep;
  ep.point.assign(static_cast<std::size_t>(n), Rational(0));
  for (int attempt = 0;; ++attempt) {
    try {
      ep.ivec = evaluate_tractor(st.tractor, ep.point);
      break;
    } catch (const EvaluationError&) {
      if (attempt > 3 * n) throw;
      ep.point[attempt % n] += 1;
    }
  }
  ep.iup = fb.raise(ep.ivec);
  ep.iota = fb.dot(ep.ivec, ep.ivec);
  return ep;
}

// I^A W_AB[CD I_E] (up to a factor) for each constant W
std::vector<std::vector<Rational>> einstein_images(const Fiber& fb, const EinsteinPoint& ep,
                                                   const std::vector<std::vector<Rational>>& ws) {
  const int N = fb.N;
  const auto perms = permutations(3);
  std::vector<std::vector<Rational>> images(ws.size());
  parallel_for(ws.size(), [&](std::size_t j) {
    const auto v = fb.contract_first(ep.iup, ws[j]);  // V_BCD
    std::vector<Rational> img(fb.size4());
    std::array<int, 3> cde{};
    for (int b = 0; b < N; ++b) {
      for (cde[0] = 0; cde[0] < N; ++cde[0]) {
        for (cde[1] = 0; cde[1] < N; ++cde[1]) {
          for (cde[2] = 0; cde[2] < N; ++cde[2]) {
            Rational s = 0;
            for (const auto& p : perms) {
              const int c = cde[p.perm[0]], d = cde[p.perm[1]], e = cde[p.perm[2]];
              s += p.sign * v[(b * N + c) * N + d] * ep.ivec[e];
            }
            img[fb.idx(b, cde[0], cde[1], cde[2])] = s;
          }
        }
      }
    }
    images[j] = std::move(img);
  });
  return images;
}

}  // namespace

BasisReport einstein_compatible_ckt_basis(const ScaleSpec& scale, int degree_bound) {
  const int n = scale.n();
  const Fiber fb(n);
  const EinsteinPoint ep = einstein_point(scale, fb);
  BasisReport ckt = ckt_basis(n, degree_bound);
  const auto ref = ScaleSpec::reference(n);
  std::vector<std::vector<Rational>> ws(ckt.fields.size());
  parallel_for(ckt.fields.size(), [&](std::size_t j) {
    const MixedField w = to_weyl(full_prolong_tensor(half_prolong_tensor(ckt.fields[j], ref)));
    ws[j] = evaluate_tractor(w, ep.point);
  });
  const auto images = einstein_images(fb, ep, ws);
  BasisReport rep;
  rep.label = "Einstein-compatible conformal Killing tensors";
  rep.n = n;
  rep.point = ep.point;
  rep.degree_bound = degree_bound;
  const auto ns = column_kernel(images, &rep.matrix_rows);
  rep.matrix_cols = images.size();
  rep.rank = ns.rank;
  for (const auto& v : ns.basis) {
    WeightedTensorField k = ckt.fields.front() * Scalar(n);
    for (std::size_t j = 0; j < v.size(); ++j)
      if (sgn(v[j]) != 0) k += ckt.fields[j] * Scalar(n, v[j]);
    rep.fields.push_back(std::move(k));
  }
  rep.dimension = static_cast<int>(rep.fields.size());
  rep.cross_check = expected_einstein_dimension(n);
  rep.cross_check_label = "n(n+1)^2(n+2)/12 - 1";
  return rep;
}

BasisReport einstein_compatible_dim(const ScaleSpec& scale) {
  const int n = scale.n();
  const Fiber fb(n);
  const int N = fb.N;
  const EinsteinPoint ep = einstein_point(scale, fb);
  const std::vector<Rational>& point = ep.point;
  const std::vector<Rational>& ivec = ep.ivec;
  const std::vector<Rational>& iup = ep.iup;
  const Rational& iota = ep.iota;

  const BasisReport weyl = weyl_space_basis(N);
  std::vector<std::vector<Rational>> wflat(weyl.tractors.size());
  for (std::size_t j = 0; j < wflat.size(); ++j) wflat[j] = to_flat(weyl.tractors[j]);
  const auto images = einstein_images(fb, ep, wflat);

  BasisReport rep;
  rep.label = "Einstein-compatible Weyl tensors";
  rep.n = n;
  rep.point = point;
  const auto ns = column_kernel(images, &rep.matrix_rows);
  rep.matrix_cols = wflat.size();
  rep.rank = ns.rank;

  // lift each kernel element W to R = iota W + g wedge P, P_BD = -I^A I^C W_ABCD
  std::vector<std::vector<Rational>> lifts(ns.basis.size());
  std::vector<std::vector<Rational>> kernel(ns.basis.size());
  parallel_for(ns.basis.size(), [&](std::size_t k) {
    const auto w = combine(wflat, ns.basis[k]);
    std::vector<Rational> p(static_cast<std::size_t>(N) * N);
    for (int a = 0; a < N; ++a)
      for (int b = 0; b < N; ++b)
        for (int c = 0; c < N; ++c)
          for (int d = 0; d < N; ++d)
            if (sgn(iup[a]) != 0 && sgn(iup[c]) != 0) p[b * N + d] -= iup[a] * iup[c] * w[fb.idx(a, b, c, d)];
    auto r = fb.wedge(fb.metric(), p);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] += iota * w[i];
    if (!all_zero(fb.contract_first(iup, r))) throw Error("lifted curvature tensor is not orthogonal to I");
    auto tf = fb.tracefree(r);
    for (std::size_t i = 0; i < tf.size(); ++i) tf[i] -= iota * w[i];
    if (!all_zero(tf)) throw Error("trace-free part of the lift differs from iota W");
    lifts[k] = std::move(r);
    kernel[k] = w;
  });
  for (const auto& w : kernel) rep.tractors.push_back(to_field(fb, w));
  rep.dimension = static_cast<int>(rep.tractors.size());

  // the lifts and I = g wedge (g - (2/iota) I I) span the I-orthogonal curvature tensors
  std::vector<Rational> q = fb.metric();
  for (int a = 0; a < N; ++a)
    for (int b = 0; b < N; ++b) q[a * N + b] -= Rational(2) / iota * ivec[a] * ivec[b];
  auto ii = fb.wedge(fb.metric(), q);
  if (!all_zero(fb.contract_first(iup, ii)) || !all_zero(fb.tracefree(ii))) {
    throw Error("the trace kernel element is not orthogonal to I or not pure trace");
  }
  const BasisReport perp = curvature_space_basis(N, &ivec);
  lifts.push_back(ii);
  for (const auto& t : perp.tractors) lifts.push_back(to_flat(t));
  std::size_t unused = 0;
  const int span = column_kernel(lifts, &unused).rank;
  if (span != perp.dimension) throw Error("lifts and the trace element do not lie in the orthogonal curvature space");
  if (column_kernel(std::vector<std::vector<Rational>>(lifts.begin(), lifts.begin() + rep.dimension + 1), &unused).rank !=
      rep.dimension + 1) {
    throw Error("lifts together with the trace element are dependent");
  }
  rep.cross_check = perp.dimension - 1;
  rep.cross_check_label = "dim{R : I^A R_ABCD = 0} - 1";
  return rep;
}

}  // namespace tractorlab
