#include "isoalloc/cli.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numeric>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "isoalloc/allocator.hpp"
#include "isoalloc/cylinder.hpp"
#include "isoalloc/oracle.hpp"
#include "isoalloc/polygon.hpp"
#include "isoalloc/problem_io.hpp"
#include "isoalloc/shape_catalog.hpp"

namespace isoalloc::cli {

namespace {

using nlohmann::json;

class InvariantBreach : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(6) << v;
  return os.str();
}

// Plain right-aligned text table.
class Table {
 public:
  explicit Table(std::vector<std::string> header) : rows_{std::move(header)} {}
  void add(std::vector<std::string> row) { rows_.push_back(std::move(row)); }

  void print(std::ostream& os) const {
    std::vector<std::size_t> width(rows_.front().size(), 0);
    for (const auto& r : rows_) {
      for (std::size_t c = 0; c < r.size(); ++c) width[c] = std::max(width[c], r[c].size());
    }
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      for (std::size_t c = 0; c < rows_[i].size(); ++c) {
        os << (c == 0 ? "" : "  ") << std::setw(static_cast<int>(width[c]))
           << (c == 0 ? std::left : std::right) << rows_[i][c];
      }
      os << '\n';
      if (i == 0) {
        std::size_t total = 0;
        for (auto w : width) total += w;
        os << std::string(total + 2 * (width.size() - 1), '-') << '\n';
      }
    }
  }

 private:
  std::vector<std::vector<std::string>> rows_;
};

void print_kv(std::ostream& os, const std::string& key, const std::string& value) {
  os << std::left << std::setw(22) << key << value << '\n';
}

bool all_tangential(std::span<const ShapeClass> shapes) {
  return std::all_of(shapes.begin(), shapes.end(), [](const ShapeClass& s) { return s.is_tangential(); });
}

std::string shape_name(const ShapeClass& c) {
  std::ostringstream os;
  os << descriptor_kind(c.descriptor());
  std::visit(
      [&](const auto& d) {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, descriptor::RegularPolygon>) os << "(" << d.sides << ")";
        if constexpr (std::is_same_v<T, descriptor::Platonic>) os << "(" << to_string(d.solid) << ")";
        if constexpr (std::is_same_v<T, descriptor::PolygonDerived>) os << "(" << d.vertex_count << ")";
      },
      c.descriptor());
  return os.str();
}

std::string route_of(const ShapeClass& c) {
  return std::visit(
      [](const auto& d) -> std::string {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, descriptor::Ball>) return "(G(1+m/2)/(pi^(m/2) m^m))^(1/(m-1))";
        if constexpr (std::is_same_v<T, descriptor::RegularPolygon>) return "cot(pi/n)/(4n)";
        if constexpr (std::is_same_v<T, descriptor::Tangential>) return "(r/m) B^(-1/(m-1))";
        if constexpr (std::is_same_v<T, descriptor::Platonic>) return "V/A^(3/2), edge 1";
        if constexpr (std::is_same_v<T, descriptor::Hypercube>) return "(2m)^(-m/(m-1))";
        if constexpr (std::is_same_v<T, descriptor::Custom>) return "user supplied";
        if constexpr (std::is_same_v<T, descriptor::PolygonDerived>) return "area/perimeter^2";
        return "";
      },
      c.descriptor());
}

void emit(const std::string& out_path, const json& doc) {
  if (!out_path.empty()) io::write_json(doc, out_path);
}

// --- lambda ---------------------------------------------------------------

struct LambdaArgs {
  std::optional<int> ball;
  std::optional<int> regular_polygon;
  std::optional<int> hypercube;
  std::optional<std::string> platonic;
  std::vector<double> tangential;
  std::vector<double> custom;
  std::optional<std::string> polygon;
  std::string out;
};

int as_dimension(double v) {
  if (v != std::floor(v) || v < 2 || v > 100) throw io::InputError("dimension must be an integer in [2, 100]");
  return static_cast<int>(v);
}

ShapeClass lambda_from_args(const LambdaArgs& a) {
  const int given = a.ball.has_value() + a.regular_polygon.has_value() + a.hypercube.has_value() +
                    a.platonic.has_value() + !a.tangential.empty() + !a.custom.empty() +
                    a.polygon.has_value();
  if (given != 1) throw io::InputError("lambda: give exactly one shape option");
  try {
    if (a.ball) return lambda_ball(*a.ball);
    if (a.regular_polygon) return lambda_regular_polygon(*a.regular_polygon);
    if (a.hypercube) return lambda_hypercube(*a.hypercube);
    if (a.platonic) return lambda_platonic(*a.platonic);
    if (!a.tangential.empty()) return lambda_tangential(as_dimension(a.tangential[0]), a.tangential[1], a.tangential[2]);
    if (!a.custom.empty()) return lambda_custom(as_dimension(a.custom[0]), a.custom[1]);
    return lambda_polygon(io::load_polygon_csv(*a.polygon));
  } catch (const BoundViolation&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw io::InputError(e.what());
  }
}

int cmd_lambda(const LambdaArgs& a, std::ostream& out) {
  const ShapeClass c = lambda_from_args(a);
  const double bound = ball_lambda_value(c.dimension());
  print_kv(out, "shape", shape_name(c));
  print_kv(out, "dimension", std::to_string(c.dimension()));
  print_kv(out, "lambda", fmt(c.lambda()));
  print_kv(out, "isoperimetric bound", fmt(bound));
  print_kv(out, "slack", fmt(bound - c.lambda()));
  print_kv(out, "route", route_of(c));
  json doc = io::shape_to_json(c);
  doc["bound"] = bound;
  doc["slack"] = bound - c.lambda();
  emit(a.out, doc);
  return kSuccess;
}

// --- catalog --------------------------------------------------------------

int cmd_catalog(int max_sides, int max_dimension, const std::string& out_path, std::ostream& out) {
  if (max_sides < 3 || max_dimension < 2) throw io::InputError("catalog: max-sides >= 3, max-dimension >= 2");
  std::vector<ShapeClass> entries;
  for (int m = 2; m <= max_dimension; ++m) entries.push_back(lambda_ball(m));
  for (int n = 3; n <= max_sides; ++n) entries.push_back(lambda_regular_polygon(n));
  for (auto s : {PlatonicSolid::tetrahedron, PlatonicSolid::cube, PlatonicSolid::octahedron,
                 PlatonicSolid::dodecahedron, PlatonicSolid::icosahedron}) {
    entries.push_back(lambda_platonic(s));
  }
  for (int m = 2; m <= max_dimension; ++m) entries.push_back(lambda_hypercube(m));

  Table t({"shape", "m", "lambda", "lambda/bound", "route"});
  json doc = json::array();
  for (const auto& c : entries) {
    const double bound = ball_lambda_value(c.dimension());
    t.add({shape_name(c), std::to_string(c.dimension()), fmt(c.lambda()), fmt(c.lambda() / bound), route_of(c)});
    json j = io::shape_to_json(c);
    j["bound"] = bound;
    j["route"] = route_of(c);
    doc.push_back(std::move(j));
  }
  t.print(out);
  emit(out_path, doc);
  return kSuccess;
}

// --- allocate -------------------------------------------------------------

void check_allocation_invariants(const AllocationProblem& p, const Allocation& a) {
  const double sum = std::accumulate(a.shares.begin(), a.shares.end(), 0.0);
  const double enclosed = std::accumulate(a.enclosed.begin(), a.enclosed.end(), 0.0);
  if (std::abs(sum - p.budget()) > 1e-12 * p.budget()) throw InvariantBreach("shares do not sum to the budget");
  if (std::abs(enclosed - a.objective) > 1e-12 * a.objective) throw InvariantBreach("objective is not the enclosed sum");
  if (!(a.residual <= 1e-10)) throw InvariantBreach("equalization residual above 1e-10");
}

void check_cylinder_invariants(const CylinderSolution& s) {
  if (!(s.constraint_residual <= 1e-10)) throw InvariantBreach("surface constraint residual above 1e-10");
  if (!(s.equalization_residual <= 1e-12)) throw InvariantBreach("equalization residual above 1e-12");
}

int cmd_allocate(const io::AllocationFile& f, const std::string& out_path, std::ostream& out) {
  const auto& p = f.problem;
  const Allocation a = optimal_allocation(p);
  check_allocation_invariants(p, a);

  const auto shapes = p.shapes();
  const bool show_r = all_tangential(shapes);
  const bool show_size = std::all_of(shapes.begin(), shapes.end(), [](const ShapeClass& s) {
    return characteristic_length(s, 1.0).has_value();
  });
  const int m = p.dimension();
  std::vector<std::string> header{"label", "shape", "lambda", "share", "enclosed", "lambda^(m-1)*share"};
  if (show_r) header.push_back("inradius");
  if (show_size) header.push_back("side/radius");
  Table t(header);
  for (std::size_t i = 0; i < p.size(); ++i) {
    const auto& s = shapes[i];
    std::vector<std::string> row{f.labels[i], shape_name(s), fmt(s.lambda()), fmt(a.shares[i]),
                                 fmt(a.enclosed[i]), fmt(std::pow(s.lambda(), m - 1) * a.shares[i])};
    if (show_r) row.push_back(fmt(inradius_from_share(s, a.shares[i])));
    if (show_size) row.push_back(fmt(*characteristic_length(s, a.shares[i])));
    t.add(std::move(row));
  }
  out << "allocation of budget " << fmt(p.budget()) << " in dimension " << m << "\n\n";
  t.print(out);
  out << '\n';
  print_kv(out, "total enclosed", fmt(a.objective));
  print_kv(out, "equalized value", fmt(a.equalized_value));
  print_kv(out, "residual", fmt(a.residual));
  emit(out_path, io::allocation_to_json(p, a, f.labels));
  return kSuccess;
}

// --- cylinder -------------------------------------------------------------

int cmd_cylinder(const io::CylinderFile& f, const std::string& out_path, std::ostream& out) {
  const auto& p = f.problem;
  const CylinderSolution s = solve_cylinders(p);
  check_cylinder_invariants(s);

  const auto shapes = p.shapes();
  const bool show_r = all_tangential(shapes);
  std::vector<std::string> header{"label", "shape", "lambda", "perimeter", "base area", "lateral area", "volume"};
  if (show_r) header.push_back("inradius");
  Table t(header);
  for (std::size_t i = 0; i < p.size(); ++i) {
    const auto& c = shapes[i];
    const double l = s.perimeters[i];
    const double area = c.lambda() * l * l;
    std::vector<std::string> row{f.labels[i], shape_name(c), fmt(c.lambda()), fmt(l), fmt(area),
                                 fmt(p.height() * l), fmt(p.height() * area)};
    if (show_r) row.push_back(fmt(inradius_from_share(c, l)));
    t.add(std::move(row));
  }
  out << "cylinders of height " << fmt(p.height()) << " with total surface " << fmt(p.total_surface())
      << "\n\n";
  t.print(out);
  out << '\n';
  print_kv(out, "t = lambda_i L_i", fmt(s.equalized_t));
  print_kv(out, "gamma", fmt(s.multiplier));
  print_kv(out, "total volume", fmt(s.volume));
  print_kv(out, "constraint residual", fmt(s.constraint_residual));
  print_kv(out, "kkt residual", fmt(s.kkt_residual));
  emit(out_path, io::cylinder_to_json(p, s, f.labels));
  return kSuccess;
}

// --- verify ---------------------------------------------------------------

void print_report(const VerificationReport& r, std::ostream& out) {
  out << r.summary << "\n\n";
  Table t({"check", "value", "tolerance", "status"});
  for (const auto& c : r.checks) t.add({c.name, fmt(c.value), fmt(c.tolerance), c.passed ? "ok" : "FAIL"});
  t.print(out);
  out << '\n';
  print_kv(out, "closed-form objective", fmt(r.closed_form_objective));
  print_kv(out, "oracle objective", fmt(r.oracle_objective));
  print_kv(out, "share distance", fmt(r.share_distance));
  out << (r.passed ? "PASSED" : "FAILED") << '\n';
}

int cmd_verify(const io::ProblemFile& file, bool corrupt, std::uint64_t seed, const std::string& out_path,
               std::ostream& out) {
  VerificationReport r;
  if (const auto* a = std::get_if<io::AllocationFile>(&file)) {
    auto settings = io::allocation_settings(a->oracle);
    settings.probe_seed = seed;
    Allocation candidate = optimal_allocation(a->problem);
    if (corrupt) {
      auto shares = candidate.shares;
      std::rotate(shares.begin(), shares.begin() + 1, shares.end());
      if (shares == candidate.shares) {
        shares.front() *= 1.02;
      }
      candidate = evaluate_allocation(a->problem, std::move(shares));
    }
    r = verify_allocation_candidate(a->problem, candidate, settings);
  } else {
    const auto& c = std::get<io::CylinderFile>(file);
    auto settings = io::cylinder_settings(c.oracle);
    settings.probe_seed = seed;
    CylinderSolution candidate = solve_cylinders(c.problem);
    if (corrupt) candidate.perimeters.front() *= 1.01;
    r = verify_cylinder_candidate(c.problem, candidate, settings);
  }
  print_report(r, out);
  emit(out_path, io::report_to_json(r));
  return r.passed ? kSuccess : kVerificationFailed;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Optimal splitting of a boundary budget among shape efficiency classes", "isoalloc"};
  app.require_subcommand(1);

  LambdaArgs la;
  auto* lambda_cmd = app.add_subcommand("lambda", "Efficiency lambda of one shape and its slack to the ball bound");
  lambda_cmd->add_option("--ball", la.ball, "Round ball in dimension M");
  lambda_cmd->add_option("--regular-polygon", la.regular_polygon, "Regular polygon with N sides");
  lambda_cmd->add_option("--hypercube", la.hypercube, "Hypercube in dimension M");
  lambda_cmd->add_option("--platonic", la.platonic, "tetrahedron|cube|octahedron|dodecahedron|icosahedron");
  lambda_cmd->add_option("--tangential", la.tangential, "M R B: tangential body with inradius R, boundary B")
      ->expected(3);
  lambda_cmd->add_option("--custom", la.custom, "M LAMBDA: explicit lambda, bound-checked")->expected(2);
  lambda_cmd->add_option("--polygon", la.polygon, "CSV file of x,y vertices");
  lambda_cmd->add_option("--out", la.out, "Write JSON result to this path");

  int max_sides = 12;
  int max_dim = 10;
  std::string catalog_out;
  auto* catalog_cmd = app.add_subcommand("catalog", "Built-in shape table with lambda values and routes");
  catalog_cmd->add_option("--max-sides", max_sides, "Largest regular polygon listed");
  catalog_cmd->add_option("--max-dimension", max_dim, "Largest ball/hypercube dimension listed");
  catalog_cmd->add_option("--out", catalog_out, "Write JSON table to this path");

  std::string alloc_file, alloc_out;
  auto* alloc_cmd = app.add_subcommand("allocate", "Optimal boundary split for a budget problem file");
  alloc_cmd->add_option("problem", alloc_file, "Problem JSON file")->required();
  alloc_cmd->add_option("--out", alloc_out, "Write JSON result to this path");

  std::string cyl_file, cyl_out;
  auto* cyl_cmd = app.add_subcommand("cylinder", "Minimal-volume cylinders for a fixed total surface");
  cyl_cmd->add_option("problem", cyl_file, "Problem JSON file")->required();
  cyl_cmd->add_option("--out", cyl_out, "Write JSON result to this path");

  std::string verify_file, verify_out;
  bool corrupt = false;
  std::uint64_t seed = 1;
  auto* verify_cmd = app.add_subcommand("verify", "Check the closed form against numerical oracles");
  verify_cmd->add_option("problem", verify_file, "Problem JSON file")->required();
  verify_cmd->add_option("--out", verify_out, "Write JSON report to this path");
  verify_cmd->add_option("--seed", seed, "Seed for the random perturbation probe");
  verify_cmd->add_flag("--corrupt", corrupt, "Verify a deliberately perturbed solution (detector check)");

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }

  try {
    if (lambda_cmd->parsed()) return cmd_lambda(la, out);
    if (catalog_cmd->parsed()) return cmd_catalog(max_sides, max_dim, catalog_out, out);
    if (alloc_cmd->parsed()) {
      const auto file = io::load_problem(alloc_file);
      const auto* f = std::get_if<io::AllocationFile>(&file);
      if (f == nullptr) throw io::InputError("allocate needs a problem file with 'budget'");
      return cmd_allocate(*f, alloc_out, out);
    }
    if (cyl_cmd->parsed()) {
      const auto file = io::load_problem(cyl_file);
      const auto* f = std::get_if<io::CylinderFile>(&file);
      if (f == nullptr) throw io::InputError("cylinder needs a problem file with 'height' and 'total_surface'");
      return cmd_cylinder(*f, cyl_out, out);
    }
    if (verify_cmd->parsed()) return cmd_verify(io::load_problem(verify_file), corrupt, seed, verify_out, out);
  } catch (const BoundViolation& e) {
    err << "bound violation: " << e.what() << '\n';
    return kBoundViolation;
  } catch (const io::InputError& e) {
    err << "input error: " << e.what() << '\n';
    return kInputError;
  } catch (const GridCapExceeded& e) {
    err << "input error: " << e.what() << '\n';
    return kInputError;
  } catch (const InvariantBreach& e) {
    err << "invariant breach: " << e.what() << '\n';
    return kInvariantBreach;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kInvariantBreach;
  }
  return kInputError;
}

}  // namespace isoalloc::cli
