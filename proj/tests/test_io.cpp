#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "npdual/io.hpp"
#include "support.hpp"

using namespace npdual;
using nlohmann::json;

namespace {

json d1_json() {
  return json{{"atoms", {"a", "b", "c"}},
              {"R", {1.0 / 3, 1.0 / 3, 1.0 / 3}},
              {"null", {{1.5, 0.9, 0.6}}},
              {"alt", {{0.6, 0.9, 1.5}}},
              {"alpha", 0.3}};
}

std::filesystem::path temp_file(const char* name) {
  return std::filesystem::temp_directory_path() / name;
}

}  // namespace

TEST_CASE("problem JSON round trips through parse and validate") {
  ProblemData data = parse_problem_data(d1_json());
  CHECK(data.atoms == std::vector<std::string>{"a", "b", "c"});
  CHECK(data.alphas == std::vector<double>{0.3});
  TestingProblem problem = validate_problem(data);
  CHECK(problem.atom_count() == 3);
  CHECK(problem.null_count() == 1);
  CHECK(problem.alpha() == doctest::Approx(0.3));
}

TEST_CASE("numeric atom labels are formatted as text") {
  json j = d1_json();
  j["atoms"] = {0.5, 1.0, 2.0};
  ProblemData data = parse_problem_data(j);
  CHECK(data.atoms == std::vector<std::string>{"0.5", "1", "2"});
}

TEST_CASE("zero-weight atoms are dropped from every row") {
  json j{{"atoms", {"a", "b", "c", "d"}},
         {"R", {0.5, 0.0, 0.3, 0.2}},
         {"null", {{1.2, 7.0, 1.0, 0.5}}},
         {"alt", {{1.0, 3.0, 1.0, 1.0}}},
         {"alpha", 0.2}};
  ProblemData data = parse_problem_data(j);
  CHECK(data.atoms == std::vector<std::string>{"a", "c", "d"});
  CHECK(data.reference_weights == std::vector<double>{0.5, 0.3, 0.2});
  CHECK(data.null_densities[0] == std::vector<double>{1.2, 1.0, 0.5});
  CHECK(data.alt_densities[0] == std::vector<double>{1.0, 1.0, 1.0});
  CHECK_NOTHROW(validate_problem(data));
}

TEST_CASE("parse errors name the offending field") {
  json j = d1_json();
  j.erase("R");
  CHECK_THROWS_WITH_AS(parse_problem_data(j), doctest::Contains("'R'"), Error);

  j = d1_json();
  j["alpha"] = "big";
  CHECK_THROWS_WITH_AS(parse_problem_data(j), doctest::Contains("alpha"), Error);

  j = d1_json();
  j["null"] = {{1.5, "x", 0.6}};
  CHECK_THROWS_WITH_AS(parse_problem_data(j), doctest::Contains("null[0][1]"), Error);

  CHECK_THROWS_AS(parse_problem_data(json::array()), Error);
}

TEST_CASE("alpha accepts a scalar or one level per null member") {
  json j{{"atoms", {"a", "b"}},
         {"R", {0.5, 0.5}},
         {"null", {{2.0, 0.0}, {0.0, 2.0}}},
         {"alt", {{1.0, 1.0}}},
         {"alpha", {0.1, 0.25}}};
  TestingProblem problem = validate_problem(parse_problem_data(j));
  CHECK_FALSE(problem.scalar_alpha());
  CHECK(problem.alphas() == std::vector<double>{0.1, 0.25});

  j["alpha"] = 0.1;
  TestingProblem scalar = validate_problem(parse_problem_data(j));
  CHECK(scalar.scalar_alpha());
  CHECK(scalar.alphas() == std::vector<double>{0.1, 0.1});
}

TEST_CASE("file loading splits filesystem and format failures") {
  try {
    load_problem_file("/nonexistent/dir/problem.json");
    FAIL("expected a throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::IoError);
  }

  const std::filesystem::path bad = temp_file("npdual_bad.json");
  write_text_file(bad.string(), "{ not json at all");
  try {
    load_problem_file(bad.string());
    FAIL("expected a throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidArgument);
    CHECK(std::string(e.what()).find("malformed JSON") != std::string::npos);
  }
  std::filesystem::remove(bad);

  const std::filesystem::path good = temp_file("npdual_good.json");
  write_text_file(good.string(), d1_json().dump());
  TestingProblem problem = load_problem_file(good.string());
  CHECK(problem.atom_count() == 3);
  std::filesystem::remove(good);
}

TEST_CASE("gaussian specs parse with a defaulted side") {
  json j{{"n", 4},           {"xi1", 0.0},
         {"sigma1_sq", 1.0}, {"sigma0_sq", 2.0},
         {"xi_grid", {-1.0, 0.0, 1.0}}, {"sigma_sq_grid", {2.0, 3.0}},
         {"x_grid", {-3.0, 0.0, 3.0}}};
  GaussianXbarSpec spec = parse_gaussian_spec(j);
  CHECK(spec.side == 1);
  CHECK(spec.n == 4);
  CHECK(spec.sigma_sq_grid == std::vector<double>{2.0, 3.0});

  j["side"] = 2;
  CHECK(parse_gaussian_spec(j).side == 2);

  j.erase("n");
  CHECK_THROWS_WITH_AS(parse_gaussian_spec(j), doctest::Contains("'n'"), Error);
}

TEST_CASE("analysis bundles serialize every certificate block") {
  TestingProblem problem = validate_problem(parse_problem_data(d1_json()));
  AnalysisBundle bundle = analyze(problem, 11, 200);
  CHECK(bundle.certified);
  nlohmann::ordered_json j = bundle_to_json(problem, bundle);
  CHECK(j["tool"] == "npdual");
  CHECK(j["problem"]["atoms"] == 3);
  CHECK(j["values"]["gap"].get<double>() <= 1e-7);
  CHECK(j["certificates"]["slackness"].contains("upper_violation"));
  CHECK(j["certificates"]["slackness"].contains("lower_violation"));
  CHECK(j["certificates"]["slackness"].contains("binding_violation"));
  CHECK(j["certificates"]["weak_duality"].contains("margin"));
  REQUIRE_FALSE(j["certificates"]["structure"].is_null());
  CHECK(j["certificates"]["structure"]["upper"] == std::vector<std::string>{"c"});
  REQUIRE_FALSE(j["certificates"]["ck"].is_null());
  CHECK(j["certificates"]["ck"]["z_hat"].get<double>() == doctest::Approx(1.0));
  CHECK(j["certificates"]["ck"].contains("identity_residual"));
  REQUIRE_FALSE(j["certificates"]["saddle"].is_null());
  CHECK(j["certified"] == true);
}

TEST_CASE("reports are byte-identical across reruns with one seed") {
  TestingProblem problem = validate_problem(parse_problem_data(d1_json()));
  AnalysisBundle first = analyze(problem, 42, 300);
  AnalysisBundle second = analyze(problem, 42, 300);
  CHECK(bundle_to_json(problem, first).dump(2) ==
        bundle_to_json(problem, second).dump(2));
}

TEST_CASE("saddle and ck blocks stay null when not requested") {
  ProblemData data;
  data.atoms = {"a", "b"};
  data.reference_weights = {0.5, 0.5};
  data.null_densities = {{2.0, 0.0}, {0.0, 2.0}};
  data.alt_densities = {{1.0, 1.0}};
  data.alphas = {0.1, 0.25};
  TestingProblem problem = validate_problem(data);
  AnalysisBundle bundle = analyze(problem);  // no seed, unequal levels
  nlohmann::ordered_json j = bundle_to_json(problem, bundle);
  CHECK(j["certificates"]["ck"].is_null());
  CHECK(j["certificates"]["saddle"].is_null());
  CHECK(j["problem"]["alpha"] == std::vector<double>{0.1, 0.25});
}

TEST_CASE("test table carries one labeled row per atom") {
  TestingProblem problem = testsupport::instance_d1();
  SolveReport r = solve_maxmin(problem);
  const std::string csv = test_csv(problem, r.primal.test);
  std::istringstream lines(csv);
  std::string line;
  REQUIRE(std::getline(lines, line));
  CHECK(line == "atom,R,ZP1,ZQ1,phi");
  std::size_t rows = 0;
  while (std::getline(lines, line)) ++rows;
  CHECK(rows == problem.atom_count());
  CHECK(csv.find("a,") == csv.find("atom,R") + std::string("atom,R,ZP1,ZQ1,phi\n").size());
}

TEST_CASE("ray and prior tables check their dimensions") {
  CHECK(dual_ray_csv({0.0, 0.5}, {1.0, 0.7}) ==
        "scale,dual_objective\n0,1\n0.5,0.7\n");
  CHECK_THROWS_WITH_AS(dual_ray_csv({0.0}, {1.0, 2.0}),
                       doctest::Contains("DimensionMismatch"), Error);

  GaussianXbarSpec spec;
  spec.side = 1;
  spec.n = 1;
  spec.xi1 = 0.0;
  spec.sigma1_sq = 1.0;
  spec.sigma0_sq = 1.0;
  spec.xi_grid = {-0.5, 0.5};
  spec.sigma_sq_grid = {1.0};
  std::vector<double> edges(25);
  for (std::size_t i = 0; i < edges.size(); ++i) edges[i] = -4.0 + 8.0 * i / 24.0;
  spec.x_grid = edges;
  GaussianProblem gp = gaussian_xbar_problem(spec, 0.1);
  const std::string csv = prior_csv(gp, Prior({0.25, 0.75}));
  std::istringstream lines(csv);
  std::string line;
  REQUIRE(std::getline(lines, line));
  CHECK(line == "xi,sigma_sq,weight");
  REQUIRE(std::getline(lines, line));
  CHECK(line == "-0.5,1,0.25");
  CHECK_THROWS_WITH_AS(prior_csv(gp, Prior({1.0})),
                       doctest::Contains("DimensionMismatch"), Error);
}

TEST_CASE("text writes fail loudly on bad paths") {
  CHECK_THROWS_AS(write_text_file("/nonexistent/dir/out.txt", "x"), Error);
  const std::filesystem::path p = temp_file("npdual_roundtrip.txt");
  write_text_file(p.string(), "hello\n");
  std::ifstream in(p);
  std::string content((std::istreambuf_iterator<char>(in)),
                      std::istreambuf_iterator<char>());
  CHECK(content == "hello\n");
  std::filesystem::remove(p);
}
