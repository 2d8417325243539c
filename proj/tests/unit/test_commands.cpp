#include <doctest.h>

#include "cwp/commands.hpp"
#include "cwp/error.hpp"
#include "cwp/fixture.hpp"

using namespace cwp;

namespace {

std::vector<Finding> with(const Report& r, Severity s) {
  std::vector<Finding> out;
  for (const Finding& f : r.findings) {
    if (f.severity == s) out.push_back(f);
  }
  return out;
}

std::set<std::string> codes(const std::vector<Finding>& fs) {
  std::set<std::string> out;
  for (const Finding& f : fs) out.insert(f.code);
  return out;
}

}  // namespace

TEST_CASE("report rendering and exit codes") {
  Report r;
  r.add_input("m.cwp", "");
  r.add(Severity::Note, "B", "s", "later");
  r.add(Severity::Error, "A", "x", "first");
  r.add(Severity::Error, "A", "x", "first");
  r.add(Severity::Warning, "W", "y", "tab\there");
  r.normalize();
  REQUIRE(r.findings.size() == 3);
  CHECK(r.findings[0].severity == Severity::Error);
  CHECK(r.findings[2].severity == Severity::Note);
  CHECK(r.exit_code() == 2);
  CHECK(render(r, ReportFormat::Lines) == "error\tA\tx\tfirst\nwarning\tW\ty\ttab here\nnote\tB\ts\tlater\n");
  const std::string human = render(r, ReportFormat::Human);
  CHECK(human.rfind("cwpcheck 1.0.0\ninput m.cwp 6c62272e07bb014262b821756295c58d\n", 0) == 0);
  CHECK(human.find("error[A] x: first\n") != std::string::npos);
  CHECK(human.find("1 error(s), 1 warning(s), 1 note(s)") != std::string::npos);
  CHECK(Report{}.exit_code() == 0);
}

TEST_CASE("lints on the fixture") {
  const std::vector<Finding> lints = lint_model(load_fixture());
  std::set<std::pair<std::string, std::string>> got;
  for (const Finding& f : lints) {
    CHECK(f.severity == Severity::Note);
    got.insert({f.code, f.subject});
  }
  const std::set<std::pair<std::string, std::string>> want{
      {"TEMPORAL_GUARD", "T6"},
      {"SIMILAR_PROPERTIES", "casemanager:patientName"},
      {"UNUSED_PROPERTY", "casemanager:launched"},
      {"UNUSED_PROPERTY", "casemanager:launchtransition"},
  };
  for (const auto& w : want) CHECK(got.count(w));
  for (const auto& [code, subject] : got) {
    if (code == "UNUSED_PROPERTY") CHECK(want.count({code, subject}));
  }
}

TEST_CASE("check: valid population is clean") {
  const WorkModel m = load_fixture();
  const Report r = cmd_check(m, load_fixture_population("population_valid"));
  CHECK(r.exit_code() == 0);
  CHECK(with(r, Severity::Warning).empty());
}

TEST_CASE("check: each seeded defect is caught by its constraint") {
  const WorkModel m = load_fixture();
  for (const char* id : {"gender", "taskPatientName", "contactPatientName", "dateOrder", "validPatient", "withinPlan",
                         "singlePlan"}) {
    INFO(id);
    const Report r = cmd_check(m, load_fixture_population(std::string("defects/") + id));
    const auto errors = with(r, Severity::Error);
    std::set<std::string> want{std::string("CONSTRAINT:") + id};
    if (std::string(id) == "withinPlan" || std::string(id) == "singlePlan") want.insert("COMPOSITION_MULTI_OWNER");
    CHECK(codes(errors) == want);
    CHECK(errors.size() == want.size());
  }
}

TEST_CASE("check: structural defects") {
  const WorkModel m = load_fixture();
  auto errs = [&](const std::string& f) {
    return codes(with(cmd_check(m, parse_triples(read_file(fixture_path("casemgmt/structural/" + f + ".ttl")))),
                      Severity::Error));
  };
  CHECK(errs("domain_range") == std::set<std::string>{"DOMAIN_RANGE"});
  CHECK(errs("cardinality") == std::set<std::string>{"CARDINALITY"});
  CHECK(errs("part_whole_cycle").count("PART_WHOLE_CYCLE"));
}

TEST_CASE("check: abstract instances") {
  const WorkModel m = load_fixture();
  TripleStore d = load_fixture_population("population_valid");
  d.add({Term::name("casemanager:o9"), rdf_type(), Term::name("casemanager:Order")});
  d.add({Term::name("casemanager:plan1"), Term::name("casemanager:hasOrder"), Term::name("casemanager:o9")});
  const auto errors = with(cmd_check(m, d), Severity::Error);
  REQUIRE(errors.size() == 1);
  CHECK(errors[0].code == "ABSTRACT_INSTANCE");
  CHECK(errors[0].subject == "casemanager:o9");
}

TEST_CASE("verify: fixture") {
  const Report r = cmd_verify(load_fixture());
  CHECK(r.exit_code() == 0);
  const auto warnings = with(r, Severity::Warning);
  REQUIRE(warnings.size() == 1);
  CHECK(warnings[0].code == "COVERAGE_GAP");
  CHECK(warnings[0].subject == "casemanager:Consult");
  CHECK(warnings[0].message == "\"Approved\" has no enabled transition when needsAppointment=false");
  std::set<std::pair<std::string, std::string>> unreachable;
  for (const Finding& f : with(r, Severity::Note)) {
    if (f.code == "UNREACHABLE") unreachable.insert({f.subject, f.message});
  }
  CHECK(unreachable == std::set<std::pair<std::string, std::string>>{
                           {"casemanager:Consult", "\"Image or specimen obtained\""},
                           {"casemanager:Imaging", "\"Patient examined\""},
                           {"casemanager:LabTest", "\"Patient examined\""},
                       });
}

TEST_CASE("verify: dropping a rule") {
  const WorkModel m = load_fixture();
  VerifyOptions o;
  o.drop_rules = {"T12"};
  const Report r = cmd_verify(m, o);
  CHECK(r.exit_code() == 2);
  int deadlocks = 0;
  for (const Finding& f : with(r, Severity::Error)) {
    if (f.code == "DEADLOCK") {
      ++deadlocks;
      CHECK(f.message == "\"Waiting for report\"");
    }
  }
  CHECK(deadlocks == 3);
  o.drop_rules = {"T99"};
  CHECK_THROWS_AS(cmd_verify(m, o), Error);
}

TEST_CASE("verify: permutation probe") {
  const WorkModel m = load_fixture();
  VerifyOptions o;
  o.permutations = 5;
  for (const char* s : {"labtest", "imaging", "consult"}) o.scenarios.push_back(load_fixture_scenario(s, m));
  CHECK(codes(with(cmd_verify(m, o), Severity::Error)).empty());
}

TEST_CASE("simulate reports failed expectations") {
  const WorkModel m = load_fixture();
  const Scenario sc = parse_scenario("create lab1 : LabTest\nexpect lab1 state \"Resolved\"\n", m);
  const CommandOutput out = cmd_simulate(m, sc);
  CHECK(out.report.exit_code() == 2);
  CHECK(codes(out.report.findings) == std::set<std::string>{"EXPECTATION_FAILED"});
  const CommandOutput ok = cmd_simulate(m, load_fixture_scenario("labtest", m), {{}, 3, 9});
  CHECK(ok.report.exit_code() == 0);
  CHECK(ok.text == read_file(fixture_path("casemgmt/golden/labtest.trace")));
}

TEST_CASE("translate and export") {
  const WorkModel m = load_fixture();
  const CommandOutput t = cmd_translate(m, m.options);
  CHECK(t.report.findings.empty());
  CHECK(parse_triples(t.text).size() > 100);
  CHECK(cmd_export(m, m.options).text == t.text);
  const TripleStore pop = load_fixture_population("population_valid");
  CHECK(cmd_export(m, pop, false).text == serialize(pop));
  const TripleStore closed = parse_triples(cmd_export(m, pop, true).text);
  CHECK(closed.size() > pop.size());
  CHECK(closed.contains({Term::name("casemanager:lab1"), rdf_type(), Term::name("casemanager:Order")}));
}
