#pragma once

// JSON artifacts. Integers are decimal strings; component keys are
// zero-based index tuples "(i,j,...)" with tractor indices first (0 is the
// top/Y slot, n+1 the X slot). Omitted components are zero. Every reader
// throws SchemaError on malformed input.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

#include "tractorlab/projective.hpp"
#include "tractorlab/scales.hpp"
#include "tractorlab/solver.hpp"

namespace tractorlab {

using Json = nlohmann::json;

Json poly_to_json(const Poly& p);
Poly poly_from_json(const Json& j);
/// Poly JSON of the numerator over a constant, plus "den_poly" otherwise.
Json scalar_to_json(const Scalar& s);
Scalar scalar_from_json(const Json& j);

Json field_to_json(const WeightedTensorField& t);
WeightedTensorField field_from_json(const Json& j);

/// {"n", "sigma"} for a scale, {"n", "upsilon": [...]} for an Upsilon-only
/// splitting. The reader also accepts {"n", "potential": U} (Upsilon = dU).
Json scale_to_json(const ScaleSpec& s);
ScaleSpec scale_from_json(const Json& j);

Json mixed_to_json(const MixedField& t);
MixedField mixed_from_json(const Json& j);
Json projective_to_json(const ProjectiveField& t);
ProjectiveField projective_from_json(const Json& j);

Json verdict_to_json(const ScaleVerdict& v);
ScaleVerdict verdict_from_json(const Json& j);

Json basis_report_to_json(const BasisReport& r);
BasisReport basis_report_from_json(const Json& j);

struct ProlongationRecord {
  std::string input_hash;
  ScaleSpec splitting;
  WeightedTensorField k;
  MixedField half;
  std::optional<MixedField> full;
  std::optional<MixedField> weyl;
};
Json prolongation_to_json(const ProlongationRecord& r);
ProlongationRecord prolongation_from_json(const Json& j);

/// 64-bit FNV-1a of the bytes, as 16 hex digits.
std::string fnv1a_hex(std::string_view bytes);
/// Hash of the compact dump of a JSON value (keys are sorted).
std::string json_hash(const Json& j);

/// Parses text as JSON; SchemaError on syntax errors.
Json parse_json(std::string_view text);

}  // namespace tractorlab
