#pragma once

#include <json.hpp>
#include <string>

#include "fpt/boundary.hpp"
#include "fpt/bounds.hpp"
#include "fpt/bridge.hpp"
#include "fpt/montecarlo.hpp"
#include "fpt/pde.hpp"

namespace fpt::io {

inline constexpr int kSchemaVersion = 1;

/// "%.9g"
std::string format_number(double value);

/// {"kind": "linear" | "quadratic" | "polynomial", "a": a, "coefficients": [...]}
/// or {"kind": "tabulated", "a": a, "knots": [[t, f], ...]}.
/// Malformed documents throw InvalidBoundary.
Boundary boundary_from_json(const nlohmann::json& doc);
nlohmann::json boundary_to_json(const Boundary& boundary);
Boundary read_boundary_file(const std::string& path);

/// CSV `s,phi,ci_low,ci_high,method`; empty band cells when absent.
std::string density_csv(const DensityCurve& curve);
nlohmann::json density_json(const DensityCurve& curve);
/// Parses density_csv output.
DensityCurve parse_density_csv(const std::string& text);
DensityCurve read_density_file(const std::string& path);

/// CSV `s,lower,upper`.
std::string envelope_csv(const BoundsEnvelope& envelope);
nlohmann::json envelope_json(const BoundsEnvelope& envelope);

/// CSV `t,x,value`, time-major.
std::string field_csv(const FieldGrid& field);

/// CSV `path_id,t,x`.
std::string paths_csv(const PathBatch& batch);

/// Canonical JSON text: two-space indent, trailing newline.
std::string dump(const nlohmann::json& doc);

std::string read_text(const std::string& path);
/// Writes through a sibling temporary file renamed into place, so the target
/// either keeps its old content or receives all of `content`.
void write_atomic(const std::string& path, const std::string& content);

}  // namespace fpt::io
