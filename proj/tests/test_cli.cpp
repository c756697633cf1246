#include <doctest.h>

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "ohs/jobspec.hpp"
#include "ohs/runner.hpp"

using namespace ohs;
using nlohmann::json;

namespace {

std::string slurp(const std::string &name) {
  std::ifstream in(std::string(OHS_JOBS_DIR) + "/" + name, std::ios::binary);
  REQUIRE(in);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

JobError parse_error(const std::string &doc) {
  try {
    parse_jobspec(doc);
  } catch (const JobError &e) {
    return e;
  }
  FAIL("document was accepted: " << doc);
  return JobError("", "");
}

} // namespace

TEST_CASE("a minimal job parses") {
  const auto job = parse_jobspec(R"({"objects":{"A":{"monoid":{"table":[[0]]}}},"command":{"homology":{"of":"A","q_max":2}}})");
  REQUIRE(job.objects.size() == 1);
  CHECK(job.objects[0].builtin == "monoid");
  CHECK(job.command.kind == "homology");
  CHECK(job.command.q_max == 2);
}

TEST_CASE("parse errors carry a byte offset") {
  const auto e = parse_error(R"({"command": {"homology" {}}})");
  REQUIRE(e.offset().has_value());
  CHECK(*e.offset() == 25);
}

TEST_CASE("semantic errors carry a path") {
  CHECK(parse_error(R"({"objects":{"A":{"monoid":{"table":[[0]]}}},"command":{"homology":{"of":"B"}}})").path() ==
        "/command/homology/of");
  CHECK(parse_error(R"({"objects":{"A":{"monoid":{"table":[[0]],"x":1}}},"command":{"homology":{"of":"A"}}})").path() ==
        "/objects/A/monoid/x");
  CHECK(parse_error(R"({"objects":{},"command":{"homology":{"of":"A"}},"extra":true})").path() == "/extra");
  CHECK(parse_error(R"({"objects":{"A":{"monoid":{"table":[[0]]}}},"command":{"homology":{"of":"A","q_max":0,"degrees":[1]}}})")
            .path() == "/command/homology/degrees/0");
  CHECK(parse_error(R"({"objects":{"A":{"widget":{}}},"command":{"homology":{"of":"A"}}})").path() == "/objects/A");
  CHECK(parse_error(R"({"objects":{"A":{"as":{"arity":"4"}}},"command":{"check-operad":{"of":"A"}}})").path() ==
        "/objects/A/as/arity");
  CHECK(parse_error(R"({"objects":{"P":{"product":{"of":["P","P"]}}},"command":{"check-operad":{"of":"P"}}})")
            .path() == "/objects/P/product");
  CHECK(parse_error(R"({"objects":{"S":{"sphere0":{}}},"command":{"check-operad":{"of":"S"}}})").path() ==
        "/command/check-operad/of");
}

TEST_CASE("exit codes") {
  CHECK(run_document(slurp("homology_trivial.json")).exit_code == kPass);
  CHECK(run_document(slurp("ohs_abelian_z2.json")).exit_code == kPass);
  CHECK(run_document(slurp("ohs_as_identity.json")).exit_code == kFail);
  CHECK(run_document(slurp("undefined_ref.json")).exit_code == kUsage);
  CHECK(run_document(slurp("inconclusive_window.json")).exit_code == kInconclusive);
  // a non-associative table is a construction error
  const auto r = run_document(
      R"({"objects":{"M":{"monoid":{"table":[[0,1,2],[1,0,0],[2,1,0]]}}},"command":{"homology":{"of":"M"}}})");
  CHECK(r.exit_code == kUsage);
  CHECK(r.report.find("witness triple") != std::string::npos);
}

TEST_CASE("every failing check carries a witness") {
  const auto r = json::parse(run_document(slurp("ohs_as_identity.json")).report);
  CHECK(r["schema"] == "1");
  CHECK(r["verdict"] == "fail");
  bool arity2 = false;
  for (const auto &c : r["checks"]) {
    if (c["verdict"] != "pass") CHECK(c.contains("witness"));
    if (c["name"] == "arity 2") {
      arity2 = true;
      CHECK(c["witness"].get<std::string>().find("H_0: Z^2 -> Z") != std::string::npos);
    }
  }
  CHECK(arity2);
}

TEST_CASE("reports are deterministic and respect the seed") {
  const auto doc = slurp("check_as.json");
  const auto a = run_document(doc, 42), b = run_document(doc, 42), c = run_document(doc, 43);
  CHECK(a.report == b.report);
  CHECK(json::parse(c.report)["seed"] == 43);
}

TEST_CASE("golden report") {
  auto golden = slurp("homology_trivial.golden.json");
  while (!golden.empty() && golden.back() == '\n') golden.pop_back();
  CHECK(run_document(slurp("homology_trivial.json")).report == golden);
}

TEST_CASE("group completion through the CLI reports Z/2") {
  const auto r = json::parse(run_document(slurp("group_complete_sigma.json")).report);
  CHECK(r["results"]["degrees"][1]["group"] == "Z/2");
  CHECK(r["results"]["degrees"][1]["reached_at"].get<int>() <= 4);
}

TEST_CASE("cell lists") {
  // the boundary of a triangle is a circle
  const auto r = json::parse(
      run_document(
          R"({"objects":{"C":{"complex":{"simplices":[[0,1],[1,2],[0,2]],"basepoint":0}}},"command":{"homology":{"of":"C","q_max":1}}})")
          .report);
  CHECK(r["results"]["homology"][0]["group"] == "Z");
  CHECK(r["results"]["homology"][1]["group"] == "Z");
}
