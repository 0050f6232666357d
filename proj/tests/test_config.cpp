#include <sstream>

#include "doctest.h"

#include "cgc/config.hpp"
#include "cgc/error.hpp"
#include "cgc/suites.hpp"

using namespace cgc;

namespace {

ErrorCode code_of(const std::string& text) {
  std::istringstream in(text);
  try {
    parse_config(in).validate();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error for: " << text);
  return ErrorCode::Usage;
}

}  // namespace

TEST_CASE("config file parsing") {
  std::istringstream in(
      "# run\n"
      "mesh = /tmp/bolza.mesh\n"
      "refinement = 4   # finest level\n"
      "k = -0.75, -0.5\n"
      "q = 0.1, 0, 0, 0.05, 0, 0\n"
      "tol.exactness = 1e-2\n"
      "suite = pairings, exactness\n"
      "output = out\n");
  const RunConfig c = parse_config(in);
  c.validate();
  CHECK(c.meshPath == "/tmp/bolza.mesh");
  CHECK(c.refinement == 4);
  CHECK(c.kList == std::vector<double>{-0.75, -0.5});
  CHECK(c.qCoefficients[0] == 0.1);
  CHECK(c.qCoefficients[3] == 0.05);
  CHECK(c.toleranceOverrides.at("exactness") == 1e-2);
  CHECK(c.suiteSelection == std::vector<std::string>{"pairings", "exactness"});
  CHECK(c.outputDir == "out");
}

TEST_CASE("config validation errors") {
  CHECK(code_of("k = 0.5\n") == ErrorCode::KOutOfRange);
  CHECK(code_of("k = -1\n") == ErrorCode::KOutOfRange);
  CHECK(code_of("refinement = 9\n") == ErrorCode::CapExceeded);
  CHECK(code_of("refinement = 2.5\n") == ErrorCode::Usage);
  CHECK(code_of("q = 1, 2, 3\n") == ErrorCode::Usage);
  CHECK(code_of("colour = blue\n") == ErrorCode::Usage);
  CHECK(code_of("k -0.5\n") == ErrorCode::Usage);
  CHECK(code_of("k = -0.5x\n") == ErrorCode::Usage);
}

TEST_CASE("tolerance overrides and level scaling") {
  Workspace ws(2);
  CHECK(ws.tolerance("gauss", 1e-3, true) == doctest::Approx(1.6e-2));
  CHECK(ws.tolerance("gauss", 1e-3, false) == 1e-3);
  ws.overrides["*"] = 0.5;
  ws.overrides["gauss"] = 0.25;
  CHECK(ws.tolerance("gauss", 1e-3, true) == 0.25);
  CHECK(ws.tolerance("codazzi", 1e-3, true) == 0.5);
  CHECK(ws.tolerance("ratio", 1.8, false) == 1.8);
  CHECK_THROWS_AS(Workspace(8), Error);
}

TEST_CASE("suite registry and report") {
  const auto names = suite_names();
  CHECK(names.size() == 10);
  Workspace ws(1);
  CHECK_THROWS_AS(run_suite("nope", ws), Error);
  const SuiteReport r = run_suite("pairings", ws);
  CHECK(r.passed());
  const std::string json = report_json({r});
  CHECK(json.find("\"suite\": \"pairings\"") != std::string::npos);
  CHECK(json.find("\"passed\": true") != std::string::npos);
  // Two runs give identical verdicts and numbers.
  CHECK(report_json({run_suite("volumes", ws)}).substr(0, 40) == report_json({run_suite("volumes", ws)}).substr(0, 40));
}
