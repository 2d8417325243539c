#include <doctest.h>

#include "cwp/error.hpp"
#include "cwp/fixture.hpp"

using namespace cwp;

namespace {

Term n(const std::string& s) { return Term::name("casemanager:" + s); }

std::vector<std::string> path_of(const SimulationTrace& t) {
  std::vector<std::string> out;
  for (const StateChange& c : t.changes) out.push_back(c.rule_id);
  return out;
}

template <class Fn>
ErrorCode code_of(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST_CASE("bundled scenarios follow the expected paths") {
  const WorkModel m = load_fixture();
  const std::map<std::string, std::vector<std::string>> want{
      {"labtest", {"T0", "T3", "T11'", "T12"}},
      {"imaging", {"T0", "T2", "T7", "T11", "T12"}},
      {"consult", {"T0", "T1", "T4", "T6", "T8", "T10", "T12"}},
  };
  for (const auto& [name, path] : want) {
    INFO(name);
    const SimulationTrace t = simulate(m, load_fixture_scenario(name, m));
    CHECK(t.failures.empty());
    CHECK(t.all_fixed_point());
    CHECK(path_of(t) == path);
    REQUIRE_FALSE(t.changes.empty());
    CHECK(t.changes.front().source == "Initial");
    CHECK(t.changes.back().target == "Resolved");
    for (std::size_t i = 1; i < t.changes.size(); ++i) CHECK(t.changes[i].source == t.changes[i - 1].target);
  }
}

TEST_CASE("traces match the golden files byte for byte") {
  const WorkModel m = load_fixture();
  const FixtureManifest& fm = fixture_manifest();
  for (std::size_t i = 0; i < fm.scenarios.size(); ++i) {
    INFO(fm.scenarios[i]);
    const Scenario sc = parse_scenario(read_file(fixture_path(fm.scenarios[i])), m);
    const SimulationTrace t = simulate(m, sc);
    CHECK(t.text == read_file(fixture_path(fm.goldens[i])));
    CHECK(simulate(m, sc).text == t.text);
  }
}

TEST_CASE("failed expectations are recorded, not thrown") {
  const WorkModel m = load_fixture();
  const Scenario sc = parse_scenario(
      "create plan1 : TreatmentPlan\n"
      "create lab1 : LabTest { needsAppointment false }\n"
      "run\n"
      "expect lab1 state \"Approved\"\n"
      "check-constraints\n",
      m);
  const SimulationTrace t = simulate(m, sc);
  REQUIRE(t.failures.size() == 2);
  CHECK(t.failures[0].line == 4);
  CHECK(t.failures[1].line == 5);
  CHECK(t.text.find("expect casemanager:lab1 casemanager:state \"Approved\" . FAILED") != std::string::npos);
  CHECK(t.text.find("check-constraints (none) FAILED") != std::string::npos);
}

TEST_CASE("valid order inside one plan has no violations") {
  const WorkModel m = load_fixture();
  const Scenario sc = parse_scenario(
      "create plan1 : TreatmentPlan\n"
      "create case1 : CaseManagement\n"
      "set case1 hasPlan plan1\n"
      "create rx1 : Prescription { gender \"male\" patientName \"Rui Sousa\" patientNumber 7 }\n"
      "set plan1 hasOrder rx1\n"
      "check-constraints\n",
      m);
  const SimulationTrace t = simulate(m, sc);
  CHECK(t.failures.empty());
  CHECK(t.asserted.contains({n("rx1"), n("state"), Term::string("Initial")}));
  CHECK(t.materialized.contains({n("rx1"), rdf_type(), n("Order")}));
  CHECK_FALSE(t.asserted.contains({n("rx1"), rdf_type(), n("Order")}));
}

TEST_CASE("abstract classes cannot be instantiated directly") {
  const WorkModel m = load_fixture();
  const SimulationTrace t = simulate(m, parse_scenario("create o1 : Order\n", m));
  CHECK(t.abstract_instances == std::vector<Term>{n("o1")});
}

TEST_CASE("setting a functional property replaces its value") {
  const WorkModel m = load_fixture();
  const SimulationTrace t = simulate(m, parse_scenario(
                                            "create lab1 : LabTest { status \"pending\" }\n"
                                            "set lab1 status \"done\"\n"
                                            "clear lab1 gender\n",
                                            m));
  CHECK(t.asserted.objects(n("lab1"), n("status")) == std::vector<Term>{Term::string("done")});
}

TEST_CASE("scenario errors") {
  const WorkModel m = load_fixture();
  CHECK(code_of([&] { simulate(m, parse_scenario("set lab9 status \"done\"\n", m)); }) == ErrorCode::UnknownObject);
  CHECK(code_of([&] {
          simulate(m, parse_scenario("at 2016-02-01T00:00:00\nat 2016-01-15T00:00:00\n", m));
        }) == ErrorCode::ClockRegression);
  CHECK(code_of([&] { simulate(m, parse_scenario("create x : Lab\n", m)); }) == ErrorCode::UnknownClass);
  CHECK(code_of([&] { simulate(m, parse_scenario("create x : LabTest\ncreate x : LabTest\n", m)); }) ==
        ErrorCode::DoubleConstruction);
}

TEST_CASE("rule order does not change the bundled scenarios") {
  const WorkModel m = load_fixture();
  for (const char* name : {"labtest", "imaging", "consult"}) {
    INFO(name);
    const ConfluenceResult r = probe_confluence(m, load_fixture_scenario(name, m), 20, 11);
    CHECK(r.converged);
  }
}

TEST_CASE("an oscillating rule pair is not confluent") {
  const WorkModel m = parse_model(R"(
prefix ex: <http://example.org/ex#> ;
default ex ;
class Lamp { attribute on : boolean [0..1] ; }
rule off on Lamp DELETE { ?this ex:on true . } INSERT { ?this ex:on false . } WHERE { ?this ex:on true . }
rule on on Lamp DELETE { ?this ex:on false . } INSERT { ?this ex:on true . } WHERE { ?this ex:on false . }
)");
  const Scenario sc = parse_scenario("create l1 : Lamp { on true }\nrun\n", m);
  const SimulationTrace t = simulate(m, sc);
  CHECK_FALSE(t.all_fixed_point());
  CHECK(t.runs.at(0).status == RunStatus::CycleDetected);
  CHECK_FALSE(probe_confluence(m, sc, 4, 1).converged);
}
