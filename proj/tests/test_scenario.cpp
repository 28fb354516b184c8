#include <cmath>
#include <numbers>
#include <sstream>

#include "bcg/errors.hpp"
#include "bcg/scenario.hpp"
#include "doctest.h"

using namespace bcg;

namespace {

int schema_line(const std::string& text, const std::string& experiment = "brs") {
  try {
    parse_scenario(text, experiment);
  } catch (const SchemaError& e) {
    return e.line();
  }
  return -1;
}

std::string strip_wall_time(const std::string& csv) {
  std::istringstream in(csv);
  std::string line, out;
  while (std::getline(in, line)) out += line.substr(0, line.rfind(',')) + "\n";
  return out;
}

}  // namespace

TEST_CASE("schema errors carry the source line") {
  CHECK(schema_line("{\n \"schema_version\": 1,\n \"id\": \"a\",\n \"colour\": 3\n}") == 4);
  CHECK(schema_line("{\n \"schema_version\": 2,\n \"id\": \"a\"\n}") == 2);
  CHECK(schema_line("{\n \"schema_version\": 1\n}") == 1);
  CHECK(schema_line("{\n \"schema_version\": 1,\n \"id\": \"a\",\n \"n\": \"two\"\n}") == 4);
  CHECK(schema_line("{\n \"schema_version\": 1,\n \"id\": \"a\",\n \"field\": \"Q\"\n}") == 4);
  CHECK(schema_line("{\n \"schema_version\": 1,\n \"id\": \"a\",\n \"bodies\": [\n  {\"type\": \"ball\"},\n"
                    "  {\"type\": \"blob\"}\n ]\n}") == 6);
  CHECK(schema_line("{\n \"schema_version\": 1,\n \"id\": \"a\",\n \"bodies\": [\n  {\"type\": \"ball\",\n"
                    "   \"radius\":\n     \"x\"}\n ]\n}") == 6);
  CHECK(schema_line("{\n \"schema_version\": 1,\n \"id\": \"a\",\n \"bodies\": [ {\"type\": \"ball\",\n }\n}") == 5);
  CHECK(schema_line("{\n \"schema_version\": 1,\n \"id\": \"a\",\n \"experiment\": \"santalo\"\n}") == 4);
  CHECK(schema_line("{\n \"schema_version\": 1,\n \"id\": \"a\",\n \"bodies\": [\n  {\"type\": \"box\", \"lo\": [0, 0]}\n ]\n}") == 5);
  CHECK(schema_line("[1, 2]") >= 0);
}

TEST_CASE("budgets are explicit in the resolved config") {
  const Scenario s = parse_scenario("{\"schema_version\": 1, \"id\": \"x\", \"bodies\": [{\"type\": \"ball\"}]}", "quermass");
  for (const char* k : {"samples", "seed", "workers", "field", "n", "r", "outer", "inner", "volume_samples"})
    CHECK(s.config.contains(k));
  CHECK(s.field == Field::Complex);
  CHECK(s.n == 2);
}

TEST_CASE("overrides win over the config") {
  Overrides ov;
  ov.samples = 123;
  ov.seed = 9;
  ov.field = "H";
  ov.workers = 3;
  const Scenario s = parse_scenario("{\"schema_version\": 1, \"id\": \"x\", \"n\": 1, \"seed\": 4}", "brs", ov);
  CHECK(s.samples == 123);
  CHECK(s.seed == 9);
  CHECK(s.field == Field::Quaternion);
  CHECK(s.workers == 3);
  CHECK(s.config["seed"] == 9);
}

TEST_CASE("every subcommand has a valid default scenario") {
  for (const auto& e : experiment_names()) {
    CAPTURE(e);
    const Scenario s = default_scenario(e);
    CHECK(s.experiment == e);
    CHECK(s.samples > 0);
  }
  CHECK_THROWS_AS(default_scenario("nope"), InvalidArgument);
}

TEST_CASE("body descriptors") {
  const Scenario s = parse_scenario("{\"schema_version\": 1, \"id\": \"x\"}", "brs");
  using nlohmann::json;

  const ConvexBody flat = build_body(s, json::parse(R"({"type":"ball","center":[1,0,0,2],"radius":2})"), "/b");
  const ConvexBody nested = build_body(s, json::parse(R"({"type":"ball","center":[[1,0],[0,2]],"radius":2})"), "/b");
  CHECK(flat.exact_volume().value() == doctest::Approx(std::pow(std::numbers::pi, 2) / 2 * 16));
  const double probe[4] = {1.0, 0.0, 0.0, 3.9};
  CHECK(flat.contains(probe));
  CHECK(nested.contains(probe));

  // H = diag(1/4, 4) has unit determinant.
  const ConvexBody e = build_body(s, json::parse(R"({"type":"ellipsoid","form":[[0.25,0],[0,[4,0]]]})"), "/b");
  CHECK(e.exact_volume().value() == doctest::Approx(std::pow(std::numbers::pi, 2) / 2));

  const ConvexBody box = build_body(s, json::parse(R"({"type":"box","half":0.5})"), "/b");
  CHECK(box.exact_volume().value() == doctest::Approx(1.0));

  const ConvexBody img = build_body(
      s, json::parse(R"({"type":"affine_image","body":{"type":"box","half":0.5},"matrix":[[2,0],[0,[0,3]]],"offset":[1,1,1,1]})"),
      "/b");
  CHECK(img.exact_volume().value() == doctest::Approx(36.0));

  const ConvexBody l1 = build_body(s, json::parse(R"({"type":"l1ball","radius":1})"), "/b");
  const double inside[4] = {0.3, 0.3, 0.3, 0.0};
  const double outside[4] = {0.6, 0.0, 0.6, 0.0};
  CHECK(l1.contains(inside));
  CHECK_FALSE(l1.contains(outside));

  const ConvexBody v = build_body(
      s, json::parse(R"({"type":"vpolytope","vertices":[[1,0,0,0],[-1,0,0,0],[0,1,0,0],[0,-1,0,0],[0,0,1,0],[0,0,-1,0],[0,0,0,1],[0,0,0,-1]]})"),
      "/b");
  CHECK(v.exact_volume().value() == doctest::Approx(16.0 / 24.0));

  CHECK_THROWS_AS(build_body(s, json::parse(R"({"type":"ball","center":[1,2,3]})"), "/b"), SchemaError);
  CHECK_THROWS_AS(build_body(s, json::parse(R"({"type":"ellipsoid","form":[[1,0],[0,-1]]})"), "/b"), SchemaError);
}

TEST_CASE("csv layout") {
  std::ostringstream out;
  ResultRow row{"x:gap", Field::Complex, 2, 2.0, Estimate{1.5, 0.25, 1000, 7, false}, 0.5};
  write_csv(out, {row});
  CHECK(out.str() == std::string(kCsvHeader) + "\nx:gap,C,2,2,1.5,0.25,1000,7,0.5\n");
  CHECK(std::string(kCsvHeader) == "scenario_id,field,n,r,mean,stderr,samples,seed,wall_time_s");
}

TEST_CASE("runs are reproducible for fixed seed and workers") {
  const std::string cfg = R"({"schema_version": 1, "id": "rep", "bodies": [{"type": "box", "half": 1}],
                              "samples": 20000, "seed": 5, "workers": 2, "volume_samples": 20000})";
  for (const char* e : {"brs", "bp-check"}) {
    CAPTURE(e);
    const Scenario s = parse_scenario(cfg, e);
    std::ostringstream a, b;
    const RunResult r1 = run_scenario(s);
    const RunResult r2 = run_scenario(s);
    write_csv(a, r1.rows);
    write_csv(b, r2.rows);
    CHECK(strip_wall_time(a.str()) == strip_wall_time(b.str()));
    for (const auto& row : r1.rows) {
      CHECK(row.scenario_id.rfind("rep:", 0) == 0);
      CHECK(row.value.seed != 0);
    }
    CHECK(manifest(s, r1)["scenario"]["seed"] == 5);
  }
}

TEST_CASE("acceptance verdicts map to exit codes") {
  Overrides ov;
  ov.samples = 50;
  const RunResult ok = run_scenario(default_scenario("selftest", ov));
  CHECK(ok.accepted);
  CHECK(exit_code(ok) == 0);
  RunResult bad;
  bad.accepted = false;
  CHECK(exit_code(bad) == 2);
}
