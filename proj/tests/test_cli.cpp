#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>

#include "doctest.h"
#include "isoalloc/cli.hpp"
#include "json.hpp"

using namespace isoalloc;
namespace fs = std::filesystem;

namespace {

const std::string kProblems = ISOALLOC_PROBLEM_DIR;
const std::string kData = ISOALLOC_TEST_DATA_DIR;

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run(std::vector<std::string> args) {
  args.insert(args.begin(), "isoalloc");
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "isoalloc_test_cli";
  fs::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("lambda subcommand") {
  auto r = run({"lambda", "--regular-polygon", "4"});
  CHECK(r.code == cli::kSuccess);
  CHECK(r.out.find("0.0625") != std::string::npos);

  CHECK(run({"lambda", "--ball", "3"}).code == cli::kSuccess);
  CHECK(run({"lambda", "--platonic", "octahedron"}).code == cli::kSuccess);
  CHECK(run({"lambda", "--tangential", "2", "0.5", "4"}).code == cli::kSuccess);
  CHECK(run({"lambda", "--polygon", kData + "/square.csv"}).code == cli::kSuccess);
  CHECK(run({"lambda", "--polygon", kData + "/bowtie.csv"}).code == cli::kInputError);
  CHECK(run({"lambda", "--custom", "2", "0.09"}).code == cli::kBoundViolation);
  CHECK(run({"lambda", "--platonic", "hexagon"}).code == cli::kInputError);
  CHECK(run({"lambda"}).code == cli::kInputError);
  CHECK(run({"lambda", "--ball", "2", "--hypercube", "3"}).code == cli::kInputError);
  CHECK(run({"lambda", "--ball", "1"}).code == cli::kInputError);
}

TEST_CASE("catalog subcommand") {
  const auto r = run({"catalog", "--max-sides", "6", "--max-dimension", "4"});
  CHECK(r.code == cli::kSuccess);
  CHECK(r.out.find("icosahedron") != std::string::npos);
}

TEST_CASE("usage errors") {
  CHECK(run({}).code == cli::kInputError);
  CHECK(run({"frobnicate"}).code == cli::kInputError);
  CHECK(run({"allocate"}).code == cli::kInputError);
  CHECK(run({"allocate", "/nonexistent.json"}).code == cli::kInputError);
  CHECK(run({"allocate", kData + "/empty_shapes.json"}).code == cli::kInputError);
  CHECK(run({"cylinder", kData + "/negative_height.json"}).code == cli::kInputError);
  // Wrong problem type for the subcommand.
  CHECK(run({"cylinder", kProblems + "/textbook.json"}).code == cli::kInputError);
  CHECK(run({"allocate", kProblems + "/two_circle_cylinders.json"}).code == cli::kInputError);
}

TEST_CASE("shipped problems solve and verify") {
  for (const char* name : {"textbook", "sphere_cube", "mixed_polygons", "tesseract_ball"}) {
    CAPTURE(name);
    const std::string path = kProblems + "/" + name + ".json";
    CHECK(run({"allocate", path}).code == cli::kSuccess);
    CHECK(run({"verify", path}).code == cli::kSuccess);
    CHECK(run({"verify", path, "--corrupt"}).code == cli::kVerificationFailed);
  }
  for (const char* name : {"two_circle_cylinders", "tangential_cylinders"}) {
    CAPTURE(name);
    const std::string path = kProblems + "/" + name + ".json";
    CHECK(run({"cylinder", path}).code == cli::kSuccess);
    CHECK(run({"verify", path}).code == cli::kSuccess);
    CHECK(run({"verify", path, "--corrupt"}).code == cli::kVerificationFailed);
  }
}

TEST_CASE("textbook output") {
  const auto r = run({"allocate", kProblems + "/textbook.json"});
  CHECK(r.out.find("side/radius") != std::string::npos);
  CHECK(r.out.find("0.140025") != std::string::npos);
  CHECK(r.out.find("0.0700124") != std::string::npos);
}

TEST_CASE("JSON output round-trips and is deterministic") {
  const auto a = scratch("a.json");
  const auto b = scratch("b.json");
  REQUIRE(run({"allocate", kProblems + "/mixed_polygons.json", "--out", a.string()}).code == cli::kSuccess);
  REQUIRE(run({"allocate", kProblems + "/mixed_polygons.json", "--out", b.string()}).code == cli::kSuccess);
  const std::string text = slurp(a);
  CHECK(text == slurp(b));
  CHECK(text.back() == '\n');
  // Re-serialising the parsed document reproduces the file byte for byte.
  CHECK(nlohmann::json::parse(text).dump(2) + "\n" == text);

  const auto v1 = scratch("v1.json");
  const auto v2 = scratch("v2.json");
  REQUIRE(run({"verify", kProblems + "/textbook.json", "--seed", "7", "--out", v1.string()}).code == 0);
  REQUIRE(run({"verify", kProblems + "/textbook.json", "--seed", "7", "--out", v2.string()}).code == 0);
  CHECK(slurp(v1) == slurp(v2));
  const auto report = nlohmann::json::parse(slurp(v1));
  CHECK(report["passed"] == true);

  const auto c = scratch("c.json");
  REQUIRE(run({"cylinder", kProblems + "/two_circle_cylinders.json", "--out", c.string()}).code == 0);
  const auto cyl = nlohmann::json::parse(slurp(c));
  CHECK(cyl["equalized_t"].get<double>() == doctest::Approx(1.18245830258639).epsilon(1e-13));
  CHECK(cyl["volume"].get<double>() == doctest::Approx(35.1407907336733).epsilon(1e-12));
}

TEST_CASE("coarse lattice passes with a widened share tolerance") {
  const auto path = scratch("coarse.json");
  REQUIRE(run({"verify", kData + "/coarse_grid.json", "--out", path.string()}).code == cli::kSuccess);
  const auto report = nlohmann::json::parse(slurp(path));
  bool found = false;
  for (const auto& c : report["checks"]) {
    if (c["name"] == "grid_share_distance") {
      found = true;
      CHECK(c["tolerance"].get<double>() == doctest::Approx(0.2));
      CHECK(c["passed"] == true);
    }
  }
  CHECK(found);
}
