#include "isoalloc/problem_io.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace isoalloc::io {

using nlohmann::json;

namespace {

void reject_unknown(const json& obj, std::initializer_list<const char*> allowed, const std::string& where) {
  const std::set<std::string> keys(allowed.begin(), allowed.end());
  for (const auto& item : obj.items()) {
    if (!keys.contains(item.key())) {
      throw InputError("unknown field '" + item.key() + "' in " + where);
    }
  }
}

const json& require(const json& obj, const char* key, const std::string& where) {
  const auto it = obj.find(key);
  if (it == obj.end()) throw InputError("missing field '" + std::string(key) + "' in " + where);
  return *it;
}

double as_number(const json& v, const std::string& what) {
  if (!v.is_number()) throw InputError(what + " must be a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw InputError(what + " must be finite");
  return d;
}

std::int64_t as_integer(const json& v, const std::string& what) {
  if (!v.is_number_integer()) throw InputError(what + " must be an integer");
  return v.get<std::int64_t>();
}

std::uint64_t as_positive_count(const json& v, const std::string& what) {
  const auto i = as_integer(v, what);
  if (i <= 0) throw InputError(what + " must be a positive integer");
  return static_cast<std::uint64_t>(i);
}

double as_positive(const json& v, const std::string& what) {
  const double d = as_number(v, what);
  if (!(d > 0.0)) throw InputError(what + " must be positive");
  return d;
}

std::vector<Point> parse_vertices(const json& v) {
  if (!v.is_array()) throw InputError("polygon vertices must be an array of [x, y] pairs");
  std::vector<Point> pts;
  for (const auto& p : v) {
    if (!p.is_array() || p.size() != 2) throw InputError("polygon vertex must be an [x, y] pair");
    pts.push_back({as_number(p[0], "vertex x"), as_number(p[1], "vertex y")});
  }
  return pts;
}

OracleOverrides parse_oracle(const json& obj) {
  if (!obj.is_object()) throw InputError("'oracle' must be an object");
  reject_unknown(obj, {"grid_k", "grid_cap", "pg_step", "pg_iters", "scan_points"}, "oracle settings");
  OracleOverrides o;
  if (obj.contains("grid_k")) o.grid_k = as_positive_count(obj["grid_k"], "oracle.grid_k");
  if (obj.contains("grid_cap")) o.grid_cap = as_positive_count(obj["grid_cap"], "oracle.grid_cap");
  if (obj.contains("pg_step")) o.pg_step = as_positive(obj["pg_step"], "oracle.pg_step");
  if (obj.contains("pg_iters")) o.pg_iters = as_positive_count(obj["pg_iters"], "oracle.pg_iters");
  if (obj.contains("scan_points")) {
    o.scan_points = as_positive_count(obj["scan_points"], "oracle.scan_points");
    if (*o.scan_points < 2) throw InputError("oracle.scan_points must be at least 2");
  }
  return o;
}

// Geometry errors from the library surface as input errors; bound violations
// stay distinct.
template <class F>
auto guarded(F&& f) {
  try {
    return f();
  } catch (const BoundViolation&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  }
}

}  // namespace

ShapeClass parse_shape(const json& obj, int dimension) {
  if (!obj.is_object()) throw InputError("shape descriptor must be an object");
  const std::string kind = [&] {
    const auto& k = require(obj, "kind", "shape descriptor");
    if (!k.is_string()) throw InputError("shape 'kind' must be a string");
    return k.get<std::string>();
  }();
  const std::string where = "shape of kind '" + kind + "'";
  auto need_dim = [&](int d) {
    if (dimension != d) {
      throw InputError(where + " requires dimension " + std::to_string(d) + ", file has " +
                       std::to_string(dimension));
    }
  };

  return guarded([&]() -> ShapeClass {
    if (kind == "ball") {
      reject_unknown(obj, {"kind", "label"}, where);
      return lambda_ball(dimension);
    }
    if (kind == "regular_polygon") {
      reject_unknown(obj, {"kind", "label", "sides"}, where);
      need_dim(2);
      const auto sides = as_integer(require(obj, "sides", where), "sides");
      if (sides < 3 || sides > 1'000'000'000) throw InputError("sides must be in [3, 1e9]");
      return lambda_regular_polygon(static_cast<int>(sides));
    }
    if (kind == "tangential") {
      reject_unknown(obj, {"kind", "label", "inradius", "boundary_measure"}, where);
      return lambda_tangential(dimension, as_positive(require(obj, "inradius", where), "inradius"),
                               as_positive(require(obj, "boundary_measure", where), "boundary_measure"));
    }
    if (kind == "platonic") {
      reject_unknown(obj, {"kind", "label", "name"}, where);
      need_dim(3);
      const auto& name = require(obj, "name", where);
      if (!name.is_string()) throw InputError("platonic 'name' must be a string");
      return lambda_platonic(name.get<std::string>());
    }
    if (kind == "hypercube") {
      reject_unknown(obj, {"kind", "label"}, where);
      return lambda_hypercube(dimension);
    }
    if (kind == "custom") {
      reject_unknown(obj, {"kind", "label", "lambda"}, where);
      return lambda_custom(dimension, as_positive(require(obj, "lambda", where), "lambda"));
    }
    if (kind == "polygon") {
      reject_unknown(obj, {"kind", "label", "vertices"}, where);
      need_dim(2);
      return lambda_polygon(Polygon(parse_vertices(require(obj, "vertices", where))));
    }
    throw InputError("unknown shape kind '" + kind + "'");
  });
}

ProblemFile parse_problem(const json& doc) {
  if (!doc.is_object()) throw InputError("problem file must be a JSON object");
  reject_unknown(doc, {"dimension", "budget", "height", "total_surface", "shapes", "oracle"},
                 "problem file");
  const auto dim = as_integer(require(doc, "dimension", "problem file"), "dimension");
  if (dim < 2 || dim > 100) throw InputError("dimension must be in [2, 100]");
  const int m = static_cast<int>(dim);

  const auto& shapes_json = require(doc, "shapes", "problem file");
  if (!shapes_json.is_array()) throw InputError("'shapes' must be an array");
  if (shapes_json.empty()) throw InputError("'shapes' must not be empty");
  std::vector<ShapeClass> shapes;
  std::vector<std::string> labels;
  for (const auto& s : shapes_json) {
    shapes.push_back(parse_shape(s, m));
    if (s.contains("label")) {
      if (!s["label"].is_string()) throw InputError("shape 'label' must be a string");
      labels.push_back(s["label"].get<std::string>());
    } else {
      labels.push_back(std::string(descriptor_kind(shapes.back().descriptor())) + "#" +
                       std::to_string(labels.size() + 1));
    }
  }
  const OracleOverrides oracle = doc.contains("oracle") ? parse_oracle(doc["oracle"]) : OracleOverrides{};

  const bool has_budget = doc.contains("budget");
  const bool has_cyl = doc.contains("height") || doc.contains("total_surface");
  if (has_budget == has_cyl) {
    throw InputError("problem file needs either 'budget' or both 'height' and 'total_surface'");
  }
  if (has_budget) {
    const double budget = as_positive(doc["budget"], "budget");
    return guarded([&] { return ProblemFile(AllocationFile{AllocationProblem(shapes, budget), labels, oracle}); });
  }
  if (m != 2) throw InputError("cylinder problems have planar bases: dimension must be 2");
  const double h = as_positive(require(doc, "height", "problem file"), "height");
  const double s = as_positive(require(doc, "total_surface", "problem file"), "total_surface");
  return guarded([&] { return ProblemFile(CylinderFile{CylinderProblem(shapes, h, s), labels, oracle}); });
}

ProblemFile parse_problem_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("invalid JSON: ") + e.what());
  }
  return parse_problem(doc);
}

ProblemFile load_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open problem file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_problem_text(ss.str());
}

Polygon parse_polygon_csv(std::istream& in) {
  std::vector<Point> pts;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) {
      throw InputError("polygon CSV line " + std::to_string(lineno) + ": expected 'x,y'");
    }
    auto number = [&](const std::string& field) {
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(field, &used);
      } catch (const std::exception&) {
        throw InputError("polygon CSV line " + std::to_string(lineno) + ": not a number");
      }
      if (field.find_first_not_of(" \t\r", used) != std::string::npos || !std::isfinite(v)) {
        throw InputError("polygon CSV line " + std::to_string(lineno) + ": not a number");
      }
      return v;
    };
    pts.push_back({number(line.substr(0, comma)), number(line.substr(comma + 1))});
  }
  return guarded([&] { return Polygon(std::move(pts)); });
}

Polygon load_polygon_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open polygon file '" + path + "'");
  return parse_polygon_csv(in);
}

AllocationOracleSettings allocation_settings(const OracleOverrides& o) {
  AllocationOracleSettings s;
  if (o.grid_k) s.grid_k = *o.grid_k;
  if (o.grid_cap) s.grid_cap = *o.grid_cap;
  if (o.pg_step) s.pg_step = *o.pg_step;
  if (o.pg_iters) s.pg_iters = *o.pg_iters;
  return s;
}

CylinderOracleSettings cylinder_settings(const OracleOverrides& o) {
  CylinderOracleSettings s;
  if (o.scan_points) s.scan_points = *o.scan_points;
  return s;
}

json shape_to_json(const ShapeClass& c) {
  json j;
  j["kind"] = std::string(descriptor_kind(c.descriptor()));
  j["dimension"] = c.dimension();
  j["lambda"] = c.lambda();
  std::visit(
      [&](const auto& d) {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, descriptor::RegularPolygon>) {
          j["sides"] = d.sides;
        } else if constexpr (std::is_same_v<T, descriptor::Tangential>) {
          j["inradius"] = d.inradius;
          j["boundary_measure"] = d.boundary_measure;
        } else if constexpr (std::is_same_v<T, descriptor::Platonic>) {
          j["name"] = std::string(to_string(d.solid));
        } else if constexpr (std::is_same_v<T, descriptor::PolygonDerived>) {
          j["vertex_count"] = d.vertex_count;
          j["perimeter"] = d.perimeter;
          j["area"] = d.area;
        }
      },
      c.descriptor());
  return j;
}

json allocation_to_json(const AllocationProblem& p, const Allocation& a,
                        const std::vector<std::string>& labels) {
  json j;
  j["type"] = "allocation";
  j["dimension"] = p.dimension();
  j["budget"] = p.budget();
  j["objective"] = a.objective;
  j["equalized_value"] = a.equalized_value;
  j["residual"] = a.residual;
  json rows = json::array();
  for (std::size_t i = 0; i < p.size(); ++i) {
    const auto& s = p.shapes()[i];
    json row;
    row["label"] = i < labels.size() ? labels[i] : std::to_string(i + 1);
    row["shape"] = shape_to_json(s);
    row["share"] = a.shares[i];
    row["enclosed"] = a.enclosed[i];
    row["equalized"] = std::pow(s.lambda(), p.dimension() - 1) * a.shares[i];
    if (s.is_tangential() && a.shares[i] > 0.0) row["inradius"] = inradius_from_share(s, a.shares[i]);
    if (auto len = characteristic_length(s, a.shares[i])) row["characteristic_length"] = *len;
    rows.push_back(std::move(row));
  }
  j["shapes"] = std::move(rows);
  return j;
}

json cylinder_to_json(const CylinderProblem& p, const CylinderSolution& s,
                      const std::vector<std::string>& labels) {
  json j;
  j["type"] = "cylinder";
  j["height"] = p.height();
  j["total_surface"] = p.total_surface();
  j["equalized_t"] = s.equalized_t;
  j["volume"] = s.volume;
  j["multiplier"] = s.multiplier;
  j["constraint_residual"] = s.constraint_residual;
  j["equalization_residual"] = s.equalization_residual;
  j["kkt_residual"] = s.kkt_residual;
  json rows = json::array();
  for (std::size_t i = 0; i < p.size(); ++i) {
    const auto& c = p.shapes()[i];
    const double l = s.perimeters[i];
    const double area = c.lambda() * l * l;
    json row;
    row["label"] = i < labels.size() ? labels[i] : std::to_string(i + 1);
    row["shape"] = shape_to_json(c);
    row["perimeter"] = l;
    row["base_area"] = area;
    row["lateral_area"] = p.height() * l;
    row["volume"] = p.height() * area;
    if (c.is_tangential()) row["inradius"] = inradius_from_share(c, l);
    rows.push_back(std::move(row));
  }
  j["shapes"] = std::move(rows);
  return j;
}

json report_to_json(const VerificationReport& r) {
  json j;
  j["type"] = "verification";
  j["summary"] = r.summary;
  j["closed_form_objective"] = r.closed_form_objective;
  j["oracle_objective"] = r.oracle_objective;
  j["share_distance"] = r.share_distance;
  j["passed"] = r.passed;
  json checks = json::array();
  for (const auto& c : r.checks) {
    checks.push_back({{"name", c.name}, {"value", c.value}, {"tolerance", c.tolerance}, {"passed", c.passed}});
  }
  j["checks"] = std::move(checks);
  return j;
}

void write_json(const json& doc, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write output file '" + path + "'");
  out << doc.dump(2) << '\n';
  if (!out) throw InputError("failed writing output file '" + path + "'");
}

}  // namespace isoalloc::io
