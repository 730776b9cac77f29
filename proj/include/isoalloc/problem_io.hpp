#pragma once

// JSON problem files and machine-readable results.
//
// Allocation problem:
//   {"dimension": 2, "budget": 1.0,
//    "shapes": [{"kind": "ball"}, {"kind": "regular_polygon", "sides": 4}],
//    "oracle": {"grid_k": 10000}}
//
// Cylinder problem:
//   {"dimension": 2, "height": 1.0, "total_surface": 100.0, "shapes": [...]}
//
// Shape kinds: ball, regular_polygon{sides}, tangential{inradius,
// boundary_measure}, platonic{name}, hypercube, custom{lambda},
// polygon{vertices: [[x, y], ...]}. Every shape may carry a "label".
// Unknown keys anywhere are rejected.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

#include "isoalloc/allocator.hpp"
#include "isoalloc/cylinder.hpp"
#include "isoalloc/oracle.hpp"
#include "isoalloc/polygon.hpp"
#include "isoalloc/shape_catalog.hpp"

namespace isoalloc::io {

/// Malformed input: bad JSON, unknown keys, wrong types, invalid geometry.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct OracleOverrides {
  std::optional<std::size_t> grid_k;
  std::optional<std::uint64_t> grid_cap;
  std::optional<double> pg_step;
  std::optional<std::size_t> pg_iters;
  std::optional<std::size_t> scan_points;
};

struct AllocationFile {
  AllocationProblem problem;
  std::vector<std::string> labels;
  OracleOverrides oracle;
};

struct CylinderFile {
  CylinderProblem problem;
  std::vector<std::string> labels;
  OracleOverrides oracle;
};

using ProblemFile = std::variant<AllocationFile, CylinderFile>;

/// Throws InputError for malformed input and BoundViolation for classes
/// above the isoperimetric bound.
ProblemFile parse_problem(const nlohmann::json& doc);
ProblemFile parse_problem_text(const std::string& text);
ProblemFile load_problem(const std::string& path);

/// One shape descriptor object; `dimension` is the file's ambient dimension.
ShapeClass parse_shape(const nlohmann::json& obj, int dimension);

/// Polygon vertices from "x,y" lines ('#' comments and blank lines skipped).
Polygon parse_polygon_csv(std::istream& in);
Polygon load_polygon_csv(const std::string& path);

AllocationOracleSettings allocation_settings(const OracleOverrides& o);
CylinderOracleSettings cylinder_settings(const OracleOverrides& o);

nlohmann::json shape_to_json(const ShapeClass& c);
nlohmann::json allocation_to_json(const AllocationProblem& p, const Allocation& a,
                                  const std::vector<std::string>& labels);
nlohmann::json cylinder_to_json(const CylinderProblem& p, const CylinderSolution& s,
                                const std::vector<std::string>& labels);
nlohmann::json report_to_json(const VerificationReport& r);

/// Writes `doc` with a trailing newline. Doubles are emitted as shortest
/// round-trip decimals.
void write_json(const nlohmann::json& doc, const std::string& path);

}  // namespace isoalloc::io
