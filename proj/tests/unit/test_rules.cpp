#include <doctest.h>

#include <algorithm>

#include "cwp/error.hpp"
#include "cwp/fixture.hpp"

using namespace cwp;

namespace {

Term n(const std::string& s) { return Term::name("casemanager:" + s); }
Term str(const std::string& s) { return Term::string(s); }

const TransitionRule& rule(const WorkModel& m, const std::string& id) {
  for (const TransitionRule& r : m.rules) {
    if (r.id == id) return r;
  }
  throw std::runtime_error("no rule " + id);
}

std::string state_of(const TripleStore& s, const std::string& obj) {
  const auto v = s.objects(n(obj), n("state"));
  return v.size() == 1 ? v[0].lexical() : "<" + std::to_string(v.size()) + " states>";
}

// One order of `type` (plus its Order supertype) driven by tr1.
TripleStore order_store(const std::string& type, const std::string& state) {
  TripleStore s;
  s.add({n("tr1"), rdf_type(), n("OrderTransition")});
  s.add({n("tr1"), n("changeState"), n("o1")});
  s.add({n("o1"), rdf_type(), n(type)});
  s.add({n("o1"), rdf_type(), n("Order")});
  s.add({n("o1"), n("state"), str(state)});
  return s;
}

const char* kOscillator = R"(
prefix ex: <http://example.org/ex#> ;
default ex ;
class Lamp { attribute on : boolean [0..1] ; }
rule off on Lamp DELETE { ?this ex:on true . } INSERT { ?this ex:on false . } WHERE { ?this ex:on true . }
rule on on Lamp DELETE { ?this ex:on false . } INSERT { ?this ex:on true . } WHERE { ?this ex:on false . }
)";

}  // namespace

TEST_CASE("T0 approves an order with dates and approver") {
  const WorkModel m = load_fixture();
  TripleStore s = order_store("LabTest", "Initial");
  s.add({n("o1"), n("dateAdded"), Term::datetime(DateTime::from_civil(2016, 1, 4))});
  s.add({n("o1"), n("dateExpected"), Term::datetime(DateTime::from_civil(2016, 1, 11))});
  s.add({n("tr1"), n("conditionVerified"), str("stale")});
  TripleStore missing = s;

  s.add({n("o1"), n("approvedBy"), str("Dr. Costa")});
  const RuleApplication a = apply_rule_once(s, rule(m, "T0"), Clock(kDefaultClock));
  CHECK(a.changed);
  REQUIRE(a.firings.size() == 1);
  CHECK(state_of(s, "o1") == "Approved");
  CHECK(s.objects(n("tr1"), n("conditionVerified")) == std::vector<Term>{str("valid entry and expected dates")});
  const std::vector<Triple> del{{n("o1"), n("state"), str("Initial")}, {n("tr1"), n("conditionVerified"), str("stale")}};
  CHECK(a.firings[0].deleted == del);

  // Without approvedBy nothing matches.
  CHECK_FALSE(apply_rule_once(missing, rule(m, "T0"), Clock(kDefaultClock)).changed);
  CHECK(state_of(missing, "o1") == "Initial");
}

TEST_CASE("T3 only fires for lab tests") {
  const WorkModel m = load_fixture();
  for (const std::string type : {"LabTest", "Imaging", "Consult"}) {
    TripleStore s = order_store(type, "Approved");
    s.add({n("o1"), n("needsAppointment"), Term::boolean(false)});
    s.add({n("o1"), n("status"), str("done")});
    apply_rule_once(s, rule(m, "T3"), Clock(kDefaultClock));
    CHECK(state_of(s, "o1") == (type == "LabTest" ? "Image or specimen obtained" : "Approved"));
  }
}

TEST_CASE("T12 resolves once the report is released") {
  const WorkModel m = load_fixture();
  TripleStore s = order_store("Consult", "Waiting for report");
  s.add({n("o1"), n("reportreleased"), Term::boolean(false)});
  FireTrace t = run_to_fixpoint(s, m.rules, Clock(kDefaultClock));
  CHECK(t.status == RunStatus::FixedPoint);
  CHECK(t.firings.empty());
  s.remove({n("o1"), n("reportreleased"), Term::boolean(false)});
  s.add({n("o1"), n("reportreleased"), Term::boolean(true)});
  t = run_to_fixpoint(s, m.rules, Clock(kDefaultClock));
  REQUIRE(t.firings.size() == 1);
  CHECK(t.firings[0].rule_id == "T12");
  CHECK(state_of(s, "o1") == "Resolved");
  CHECK(s.objects(n("tr1"), n("conditionVerified")) == std::vector<Term>{str("report has been released")});
}

TEST_CASE("a store without transitions is a fixed point after one pass") {
  const WorkModel m = load_fixture();
  TripleStore s = load_fixture_population("population_valid");
  s.remove({n("tr1"), rdf_type(), n("OrderTransition")});
  const TripleStore before = s;
  const FireTrace t = run_to_fixpoint(s, m.rules, Clock(kDefaultClock));
  CHECK(t.status == RunStatus::FixedPoint);
  CHECK(t.passes == 1);
  CHECK(t.firings.empty());
  CHECK(s == before);
}

TEST_CASE("oscillating rules are reported as a cycle") {
  const WorkModel m = parse_model(kOscillator);
  TripleStore s;
  const Term lamp = Term::name("ex:l1");
  s.add({lamp, rdf_type(), Term::name("ex:Lamp")});
  s.add({lamp, Term::name("ex:on"), Term::boolean(true)});
  const TripleStore initial = s;
  const FireTrace t = run_to_fixpoint(s, m.rules, Clock());
  CHECK(t.status == RunStatus::CycleDetected);
  CHECK(t.passes < 10);
  TripleStore inc = initial;
  CHECK(run_incremental(inc, m.rules, Clock()).status == RunStatus::CycleDetected);
}

TEST_CASE("pass cap") {
  // A token walks a chain of five nodes, one hop per pass.
  const WorkModel m = parse_model(R"(
prefix ex: <http://example.org/ex#> ;
default ex ;
class Token ;
class Node ;
association at : Token [*] -> Node [0..1] ;
association next : Node [0..1] -> Node [0..1] ;
rule hop on Token DELETE { ?this ex:at ?x . } INSERT { ?this ex:at ?y . } WHERE { ?this ex:at ?x . ?x ex:next ?y . }
)");
  TripleStore s;
  s.add({Term::name("ex:t"), rdf_type(), Term::name("ex:Token")});
  s.add({Term::name("ex:t"), Term::name("ex:at"), Term::name("ex:n0")});
  for (int i = 0; i < 4; ++i) {
    s.add({Term::name("ex:n" + std::to_string(i)), Term::name("ex:next"), Term::name("ex:n" + std::to_string(i + 1))});
  }
  TripleStore capped = s;
  const FireTrace c = run_to_fixpoint(capped, m.rules, Clock(), 2);
  CHECK(c.status == RunStatus::IterationCapHit);
  CHECK(c.passes == 2);
  const FireTrace full = run_to_fixpoint(s, m.rules, Clock());
  CHECK(full.status == RunStatus::FixedPoint);
  CHECK(full.firings.size() == 4);
  CHECK(s.objects(Term::name("ex:t"), Term::name("ex:at")) == std::vector<Term>{Term::name("ex:n4")});
}

TEST_CASE("replay reproduces the final store and runs are idempotent") {
  const WorkModel m = load_fixture();
  TripleStore s = order_store("Consult", "Initial");
  s.add({n("o1"), n("dateAdded"), Term::datetime(DateTime::from_civil(2016, 1, 4))});
  s.add({n("o1"), n("dateExpected"), Term::datetime(DateTime::from_civil(2016, 1, 11))});
  s.add({n("o1"), n("approvedBy"), str("Dr. Costa")});
  s.add({n("o1"), n("needsAppointment"), Term::boolean(true)});
  const TripleStore initial = s;
  const FireTrace t = run_to_fixpoint(s, m.rules, Clock(kDefaultClock));
  CHECK(t.status == RunStatus::FixedPoint);
  std::vector<std::string> ids;
  for (const Firing& f : t.firings) ids.push_back(f.rule_id);
  CHECK(ids == std::vector<std::string>{"T0", "T1"});
  CHECK(state_of(s, "o1") == "Waiting for appointment to be scheduled");

  TripleStore replayed = initial;
  replay(replayed, t);
  CHECK(replayed == s);

  const TripleStore after = s;
  const FireTrace again = run_to_fixpoint(s, m.rules, Clock(kDefaultClock));
  CHECK(again.firings.empty());
  CHECK(again.passes == 1);
  CHECK(s == after);

  TripleStore inc = initial;
  const FireTrace ti = run_incremental(inc, m.rules, Clock(kDefaultClock));
  CHECK(inc == s);
  CHECK(ti.firings.size() == t.firings.size());
}

TEST_CASE("firing deltas are net") {
  // DELETE and INSERT of the same triple leaves it in place and records nothing.
  const WorkModel m = parse_model(R"(
prefix ex: <http://example.org/ex#> ;
default ex ;
class Box { attribute tag : string [0..1] ; }
rule keep on Box DELETE { ?this ex:tag "x" . } INSERT { ?this ex:tag "x" . } WHERE { ?this ex:tag "x" . }
)");
  TripleStore s;
  s.add({Term::name("ex:b"), rdf_type(), Term::name("ex:Box")});
  s.add({Term::name("ex:b"), Term::name("ex:tag"), str("x")});
  const TripleStore before = s;
  const FireTrace t = run_to_fixpoint(s, m.rules, Clock());
  CHECK(t.status == RunStatus::FixedPoint);
  CHECK(t.firings.empty());
  CHECK(s == before);
}

TEST_CASE("constructors run once, on subtypes too") {
  const WorkModel m = load_fixture();
  TripleStore s;
  s.add({n("lab1"), rdf_type(), n("LabTest")});
  s.add({n("lab1"), rdf_type(), n("Order")});
  s.add({n("tr1"), rdf_type(), n("OrderTransition")});
  ConstructionLedger ledger;
  const auto added = run_constructors(s, n("lab1"), m.constructors, Clock(), ledger);
  CHECK(added == std::vector<Triple>{{n("lab1"), n("state"), str("Initial")}});
  CHECK(run_constructors(s, n("tr1"), m.constructors, Clock(), ledger).empty());
  try {
    run_constructors(s, n("lab1"), m.constructors, Clock(), ledger);
    FAIL("expected DoubleConstruction");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DoubleConstruction);
  }
  ConstructionLedger preloaded;
  preloaded.mark_all(s);
  CHECK_THROWS_AS(run_constructors(s, n("lab1"), m.constructors, Clock(), preloaded), Error);
}

TEST_CASE("constraint check reports one violation per instance") {
  const WorkModel m = load_fixture();
  const SemanticSchema schema = translate(m.classes);
  TripleStore s = load_fixture_population("defects/gender");
  materialize(s, schema);
  const auto v = check_constraints(s, m.constraints, schema, Clock(kDefaultClock));
  REQUIRE(v.size() == 1);
  CHECK(v[0].constraint_id == "gender");
  CHECK(v[0].message == "Gender must be either male or female");
  TripleStore ok = load_fixture_population("population_valid");
  materialize(ok, schema);
  CHECK(check_constraints(ok, m.constraints, schema, Clock(kDefaultClock)).empty());
}
