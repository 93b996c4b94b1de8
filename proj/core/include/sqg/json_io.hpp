#pragma once

#include <string>

#include "sqg/limits.hpp"
#include "sqg/rebalance.hpp"

namespace sqg::io {

// JSON wire formats. Numbers are written with enough digits to reparse
// bit-exactly; readers accept both integers and decimals.
//
//   SquareGraphon   {"n": int, "pi": [...], "mu": [[...], ...]}
//   MarkovKernel    {"from": int, "to": int, "rows": [[...], ...]}
//                   plus "shape": [k_1,...,k_L] for tuple-indexed targets
//                   (row-major flattening in factor order)
//   ShapeCloud      {"k": int, "points": [[...], ...], "meta": {...}}
//   ConvergenceReport, MorphismReport, RebalanceResult, LimitCandidate,
//   LimitValidationReport: see the corresponding to_json functions.

std::string to_json(const SquareGraphon& g, int indent = -1);
std::string to_json(const MarkovKernel& kappa, int indent = -1);
std::string to_json(const ShapeCloud& cloud, int indent = -1);
std::string to_json(const ConvergenceReport& report, int indent = -1);
std::string to_json(const MorphismReport& report, int indent = -1);
std::string to_json(const RebalanceResult& result, int indent = -1);
std::string to_json(const LimitCandidate& candidate, int indent = -1);
std::string to_json(const LimitValidationReport& report, int indent = -1);

SquareGraphon graphon_from_json(const std::string& text);
MarkovKernel kernel_from_json(const std::string& text);
ShapeCloud cloud_from_json(const std::string& text);

/// One point per row, comma separated, with a header naming the vertex and
/// edge coordinates.
std::string to_csv(const ShapeCloud& cloud);

SquareGraphon load_graphon(const std::string& path);
MarkovKernel load_kernel(const std::string& path);
ShapeCloud load_cloud(const std::string& path);
void save_text(const std::string& path, const std::string& text);
std::string read_text(const std::string& path);

/// Single-line error payload with a stable "code" field.
std::string error_json(ErrorCode code, const std::string& message);

}  // namespace sqg::io
