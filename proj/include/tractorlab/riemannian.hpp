#pragma once

// Conformal rescalings g = sigma^-2 * (flat metric) and their Levi-Civita
// calculus, everything expressed in the flat reference trivialization.
//
// Moving from the reference to the sigma-scale uses Omega = 1/sigma, so
// Upsilon_a = -d_a sigma / sigma.

#include <memory>
#include <optional>
#include <vector>

#include "tractorlab/tensor_field.hpp"

namespace tractorlab {

struct CurvatureData {
  WeightedTensorField schouten;  // P_ab, weight 0
  Scalar j;                      // trace of P, weight -2
};

class ScaleSpec {
 public:
  ScaleSpec() = default;
  static ScaleSpec reference(int n);
  /// Throws Error when sigma is identically zero.
  static ScaleSpec from_sigma(const Scalar& sigma);
  /// Splitting with Upsilon = dU; the scale itself is exp(-U) and is not stored.
  static ScaleSpec from_potential(const Scalar& u);
  /// Splitting from a closed 1-form Upsilon; throws PreconditionError otherwise.
  static ScaleSpec from_upsilon(std::vector<Scalar> upsilon);

  int n() const;
  bool valid() const { return static_cast<bool>(d_); }
  bool is_reference() const;
  bool has_sigma() const;
  /// Throws PreconditionError when the spec carries only Upsilon.
  const Scalar& sigma() const;
  const std::vector<Scalar>& upsilon() const;
  const Scalar& upsilon(int a) const;
  const Scalar& schouten(int a, int b) const;
  const Scalar& j() const;
  CurvatureData curvature() const;

  /// Same Upsilon, hence the same Levi-Civita connection and splitting.
  friend bool same_splitting(const ScaleSpec& a, const ScaleSpec& b);
  friend bool operator==(const ScaleSpec& a, const ScaleSpec& b);

 private:
  struct Data;
  static ScaleSpec build(int n, std::optional<Scalar> sigma, std::vector<Scalar> upsilon);
  std::shared_ptr<const Data> d_;
};

struct ScaleSpec::Data {
  int n = 0;
  std::optional<Scalar> sigma;
  std::vector<Scalar> upsilon;
  std::vector<Scalar> schouten;  // n*n
  Scalar j;
  bool reference = false;
};

/// Levi-Civita / density covariant derivative of the scale, new covariant
/// slot prepended.
WeightedTensorField covderiv(const WeightedTensorField& t, const ScaleSpec& scale);
CurvatureData schouten(const ScaleSpec& scale);
/// Trace of the second covariant derivative; weight drops by 2.
WeightedTensorField laplacian(const WeightedTensorField& t, const ScaleSpec& scale);
/// g^{ab} nabla_a T_{..b..} over the given slot of T.
WeightedTensorField divergence(const WeightedTensorField& t, int slot, const ScaleSpec& scale);

}  // namespace tractorlab
