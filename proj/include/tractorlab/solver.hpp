#pragma once

// Exact linear algebra and the coefficient-ansatz solvers for conformal
// Killing fields, Weyl-type tractor spaces and their Einstein-compatible
// subspaces.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "tractorlab/tractor.hpp"

namespace tractorlab {

class RationalMatrix {
 public:
  RationalMatrix() = default;
  RationalMatrix(int rows, int cols) : rows_(rows), cols_(cols), a_(static_cast<std::size_t>(rows) * cols) {}
  int rows() const { return rows_; }
  int cols() const { return cols_; }
  const Rational& operator()(int i, int j) const { return a_[static_cast<std::size_t>(i) * cols_ + j]; }
  Rational& operator()(int i, int j) { return a_[static_cast<std::size_t>(i) * cols_ + j]; }
  std::vector<Rational> apply(const std::vector<Rational>& v) const;

 private:
  int rows_ = 0, cols_ = 0;
  std::vector<Rational> a_;
};

/// Sparse row: (column, value) pairs with distinct columns and nonzero values.
using SparseRow = std::vector<std::pair<int, Rational>>;

struct NullspaceResult {
  int rank = 0;
  /// One vector per free column, entry 1 at that column; scaled to
  /// coprime integers.
  std::vector<std::vector<Rational>> basis;
};

/// Reduced row echelon form by exact elimination; rank + nullity = cols.
NullspaceResult rank_nullspace(const RationalMatrix& m);
NullspaceResult rank_nullspace(int cols, const std::vector<SparseRow>& rows);
int matrix_rank(int cols, const std::vector<SparseRow>& rows);

struct BasisReport {
  std::string label;
  int n = 0;
  int dimension = 0;
  /// Conformal Killing fields (rank 1 or 2, reference trivialization).
  std::vector<WeightedTensorField> fields;
  /// Constant-coefficient four-slot tractors in the fiber over `point`.
  std::vector<MixedField> tractors;
  std::vector<Rational> point;
  std::optional<int> degree_bound;
  std::size_t matrix_rows = 0;
  std::size_t matrix_cols = 0;
  int rank = 0;
  /// Nullity of the next homogeneous block (degree_bound + 1); 0 when stable.
  std::optional<int> next_degree_nullity;
  /// Independent recomputation of the dimension, when one exists.
  std::optional<int> cross_check;
  std::string cross_check_label;
};

/// Conformal Killing 1-forms with polynomial components of degree <= bound.
/// Throws Error if the dimension grows at degree bound + 1.
BasisReport ckv_basis(int n, int degree_bound = 2);
/// Symmetric trace-free conformal Killing 2-tensors of degree <= bound.
BasisReport ckt_basis(int n, int degree_bound = 4);
/// Algebraic Weyl tensors on the tractor fiber of dimension N = n + 2 with
/// the tractor metric; the argument is N (N >= 3).
BasisReport weyl_space_basis(int N);
/// Algebraic curvature tensors (Riemann symmetries) on the fiber of
/// dimension N, optionally restricted to I^A R_ABCD = 0.
BasisReport curvature_space_basis(int N, const std::vector<Rational>* orthogonal_to = nullptr);
/// Kernel of W -> I^A W_AB[CD I_E] on the Weyl space of the fiber. The
/// result is cross-checked against dim{R : I^A R_ABCD = 0} - 1 and each
/// kernel element is lifted to such an R with trace-free part W.
/// Throws PreconditionError unless I is parallel with iota != 0.
BasisReport einstein_compatible_dim(const ScaleSpec& scale);

/// Conformal Killing tensors (from ckt_basis) whose Weyl-form prolongation
/// lies in the kernel of einstein_compatible_dim; fields are combinations of
/// the ckt_basis elements.
BasisReport einstein_compatible_ckt_basis(const ScaleSpec& scale, int degree_bound = 4);

/// Expected dimensions.
int expected_ckv_dimension(int n);
int expected_weyl_dimension(int N);
int expected_einstein_dimension(int n);

/// Tractor components of a constant fiber vector, and evaluation of a
/// pure tractor at a point.
std::vector<Rational> evaluate_tractor(const MixedField& t, std::span<const Rational> point);
MixedField constant_tractor(int n, int slots, const std::vector<Rational>& flat);

/// Solves rows * x = rhs exactly with free unknowns set to zero. Empty when
/// inconsistent.
std::optional<std::vector<Rational>> solve_affine(int cols, const std::vector<SparseRow>& rows,
                                                  const std::vector<Rational>& rhs);

}  // namespace tractorlab
