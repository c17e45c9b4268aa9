#pragma once

// JSON interchange for matrices and reports.
//
// Matrix:         {"dim": n, "re": [...], "im": [...]}
// Density matrix: the same plus {"dimA": a, "dimB": b}
//
// "re" and "im" hold n*n numbers in row-major order, either flat or as n rows
// of n. "im" may be omitted for real matrices.

#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "ppt/canonical.hpp"
#include "ppt/linalg.hpp"
#include "ppt/spectra.hpp"
#include "ppt/theorem3.hpp"

namespace ppt {

using Json = nlohmann::json;

/// Version string stamped into serialized reports.
std::string tool_version();

/// Parses JSON text; ParseError carries `source` and the line/column.
Json parse_json_text(std::string_view text, const std::string& source = "<input>");

/// ParseError naming the missing or malformed field.
HermitianMatrix matrix_from_json(const Json& j);
Json matrix_to_json(const HermitianMatrix& m);

/// ParseError for malformed input, InvariantError if the matrix is not a
/// valid state at `tol`.
DensityMatrix density_from_json(const Json& j, const Tolerances& tol = {});
Json density_to_json(const DensityMatrix& rho);

Json to_json(const NegativeSpectrumReport& r);
Json to_json(const CanonicalForm2Q& f);
Json to_json(const Theorem2Report& r);
Json to_json(const Theorem3Report& r);

}  // namespace ppt
