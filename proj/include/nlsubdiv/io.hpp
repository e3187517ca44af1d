#pragma once

#include "nlsubdiv/contraction.hpp"
#include "nlsubdiv/multiresolution.hpp"
#include "nlsubdiv/regularity.hpp"
#include "nlsubdiv/spectral.hpp"

#include <json.hpp>

#include <iosfwd>
#include <string>

namespace nlsd::io {

using Json = nlohmann::ordered_json;

// Sequences

/// Shortest decimal form that reads back to the same double.
std::string format_double(double v);

/// "abscissa,value" header, one row per sample.
std::string sequence_to_csv(const Sequence& f);

/// Level and first index are recovered from the abscissa column (uniform
/// dyadic spacing 2^-level; a single row is read at level 0).
Sequence sequence_from_csv(const std::string& text, Boundary boundary = Boundary::Periodic);

Json to_json(const Sequence& f);
Sequence sequence_from_json(const Json& j);

// Schemes and masks

/// {"family": ..., "params": {...}}.
Json to_json(const SchemeSpec& s);
SchemeSpec scheme_from_json(const Json& j);

/// [{"op": "D^2" | "d" | null, "offset": 2, "coefficient": [-5, 128]}, ...]
Json to_json(const CoeffMask& m);
CoeffMask mask_from_json(const Json& j);

/// [numerator, denominator] as JSON integers (strings past 64 bits).
Json to_json(const Rational& r);
Rational rational_from_json(const Json& j);

// Pyramids

/// {"scheme", "levels", "coarse", "details": [...], "detail_residuals"?,
///  "x"?: {"coarse", "details", "detail_residuals"?}, "x_period"?}
Json to_json(const Pyramid& p);
Pyramid pyramid_from_json(const Json& j);

/// Binary pyramid, all integers and floats little-endian:
///   magic "NLSDPYR1" (8 bytes)
///   u32 length + UTF-8 bytes: scheme descriptor JSON
///   u32 levels, u8 boundary (0 periodic, 1 constant_extend, 2 shrink), u8 has_x
///   f64 x_period
///   then per channel (f, then x if has_x), level-major:
///     coarse block, then details[0] .. details[levels-1] blocks, each
///       i64 first_index, i32 level, u64 count, count f64 values, count f64 residuals
void write_pyramid_binary(std::ostream& out, const Pyramid& p);
Pyramid read_pyramid_binary(std::istream& in);

// Reports

Json to_json(const ContractionReport& r);
Json to_json(const RegularityReport& r);
Json to_json(const SpectralReport& r);
Json to_json(const StabilityReport& r);
Json to_json(const Figure1Result& r);

/// {"error": kind, "message": ...}.
Json error_record(const Error& e);

}  // namespace nlsd::io
