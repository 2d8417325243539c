#include <doctest.h>

#include <random>

#include "cwp/error.hpp"
#include "cwp/fixture.hpp"
#include "oracles.hpp"

using namespace cwp;

namespace {

Term n(const std::string& s) { return Term::name("casemanager:" + s); }

const TransitionRule& rule(const WorkModel& m, const std::string& id) {
  for (const TransitionRule& r : m.rules) {
    if (r.id == id) return r;
  }
  throw std::runtime_error("no rule " + id);
}

const AskConstraint& constraint(const WorkModel& m, const std::string& id) {
  for (const AskConstraint& c : m.constraints) {
    if (c.id == id) return c;
  }
  throw std::runtime_error("no constraint " + id);
}

Binding this_is(const Term& t) {
  Binding b;
  b.bind("this", t);
  return b;
}

TripleStore approved_order(bool with_appointment) {
  TripleStore s;
  s.add({n("tr1"), rdf_type(), n("OrderTransition")});
  s.add({n("tr1"), n("changeState"), n("o1")});
  s.add({n("o1"), rdf_type(), n("Consult")});
  s.add({n("o1"), n("needsAppointment"), Term::boolean(true)});
  s.add({n("o1"), n("state"), Term::string("Approved")});
  if (with_appointment) {
    s.add({n("o1"), n("patientAppointmentDateTime"), Term::datetime(DateTime::from_civil(2016, 2, 1, 10))});
  }
  return s;
}

}  // namespace

TEST_CASE("EXISTS and NOT EXISTS split on the appointment") {
  const WorkModel m = load_fixture();
  const Clock clock(kDefaultClock);
  for (bool appt : {false, true}) {
    const TripleStore s = approved_order(appt);
    const BindingSet t1 = match(s, rule(m, "T1").where, this_is(n("tr1")), clock);
    const BindingSet t2 = match(s, rule(m, "T2").where, this_is(n("tr1")), clock);
    CHECK(t1.size() == (appt ? 0u : 1u));
    CHECK(t2.size() == (appt ? 1u : 0u));
    const BindingSet& hit = appt ? t2 : t1;
    REQUIRE(hit.size() == 1);
    CHECK(*hit[0].get("o") == n("o1"));
    CHECK(*hit[0].get("this") == n("tr1"));
  }
}

TEST_CASE("gender constraint") {
  const WorkModel m = load_fixture();
  const Clock clock(kDefaultClock);
  const AskConstraint& c = constraint(m, "gender");
  for (const auto& [value, violated] :
       std::vector<std::pair<std::string, bool>>{{"male", false}, {"female", false}, {"other", true}, {"Male", true}}) {
    TripleStore s;
    s.add({n("o1"), n("gender"), Term::string(value)});
    CHECK(eval_ask(s, c.body, this_is(n("o1")), clock) == violated);
  }
  TripleStore none;
  none.add({n("o1"), rdf_type(), n("LabTest")});
  CHECK_FALSE(eval_ask(none, c.body, this_is(n("o1")), clock));
}

TEST_CASE("now() follows the clock") {
  const WorkModel m = load_fixture();
  TripleStore s;
  s.add({n("tr1"), n("changeState"), n("o1")});
  s.add({n("o1"), n("state"), Term::string("Appointment scheduled")});
  s.add({n("o1"), n("patientAppointmentDateTime"), Term::datetime(DateTime::from_civil(2016, 3, 1, 9))});
  const GraphPattern& where = rule(m, "T6").where;
  CHECK(match(s, where, this_is(n("tr1")), Clock(DateTime::from_civil(2016, 3, 1, 8))).empty());
  CHECK(match(s, where, this_is(n("tr1")), Clock(DateTime::from_civil(2016, 3, 1, 9))).empty());
  CHECK(match(s, where, this_is(n("tr1")), Clock(DateTime::from_civil(2016, 3, 1, 10))).size() == 1);
  s.add({n("o1"), n("status"), Term::string("done")});
  CHECK(match(s, where, this_is(n("tr1")), Clock(DateTime::from_civil(2016, 3, 1, 10))).empty());
}

TEST_CASE("clock is monotone") {
  Clock c(DateTime::from_civil(2016, 1, 2));
  c.advance_to(DateTime::from_civil(2016, 1, 2));
  c.advance_to(DateTime::from_civil(2016, 1, 3));
  CHECK(c.now() == DateTime::from_civil(2016, 1, 3));
  try {
    c.advance_to(DateTime::from_civil(2016, 1, 1));
    FAIL("expected ClockRegression");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ClockRegression);
  }
}

TEST_CASE("type mismatch is false with a diagnostic") {
  const Binding b;
  const Clock clock;
  DiagnosticSink sink;
  auto cmp = [](FilterOp op, Term a, Term c) {
    return FilterExpr::binary(op, FilterExpr::term(std::move(a)), FilterExpr::term(std::move(c)));
  };
  CHECK_FALSE(eval_filter(cmp(FilterOp::Lt, Term::integer(1), Term::string("2")), b, clock, &sink));
  CHECK(sink.diagnostics().size() == 1);
  CHECK(sink.diagnostics()[0].code == "TYPE_MISMATCH");
  CHECK_FALSE(eval_filter(cmp(FilterOp::Eq, Term::integer(1), Term::string("1")), b, clock, &sink));
  CHECK(eval_filter(cmp(FilterOp::Ne, Term::integer(1), Term::string("1")), b, clock, &sink));
  CHECK(eval_filter(cmp(FilterOp::Lt, Term::string("Ana"), Term::string("Rui")), b, clock, &sink));
  CHECK(eval_filter(cmp(FilterOp::Lt, Term::boolean(false), Term::boolean(true)), b, clock, &sink));
  CHECK(eval_filter(cmp(FilterOp::Ge, Term::integer(-1), Term::integer(-1)), b, clock, &sink));
  CHECK(sink.diagnostics().size() == 1);
}

TEST_CASE("empty pattern yields the seed") {
  TripleStore s;
  s.add({n("a"), n("p"), n("b")});
  const Binding seed = this_is(n("a"));
  const BindingSet r = match(s, GraphPattern{}, seed, Clock());
  REQUIRE(r.size() == 1);
  CHECK(r[0] == seed);
  CHECK(match(TripleStore{}, GraphPattern{}, Binding{}, Clock()).size() == 1);
}

TEST_CASE("unbound filter variable is rejected") {
  GraphPattern p;
  p.triples.push_back({Term::variable("x"), n("p"), Term::variable("y")});
  p.filters.push_back(FilterExpr::binary(FilterOp::Eq, FilterExpr::term(Term::variable("z")),
                                         FilterExpr::term(Term::integer(1))));
  try {
    check_pattern_variables(p, {});
    FAIL("expected UnboundFilterVariable");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnboundFilterVariable);
  }
  CHECK_NOTHROW(check_pattern_variables(p, {"z"}));
}

TEST_CASE("construct instantiates every binding") {
  const WorkModel m = load_fixture();
  const Constructor& c = m.constructors.at(0);
  TripleStore s;
  s.add({n("lab1"), rdf_type(), n("Order")});
  s.add({n("img1"), rdf_type(), n("Order")});
  s.add({n("tr1"), rdf_type(), n("OrderTransition")});
  const std::vector<Triple> out = eval_construct(s, c.tmpl, c.where, Clock());
  const std::vector<Triple> want{{n("img1"), n("state"), Term::string("Initial")},
                                 {n("lab1"), n("state"), Term::string("Initial")}};
  CHECK(out == want);
  CHECK(s.size() == 3);
}

TEST_CASE("matcher agrees with brute force on random cases") {
  std::mt19937_64 rng(20160105);
  int nonempty = 0;
  for (int i = 0; i < 500; ++i) {
    const oracle::RandomCase c = oracle::random_case(rng);
    const auto want = oracle::brute_force(c.store, c.pattern, {}, DateTime());
    const auto got = oracle::to_assignments(match(c.store, c.pattern, Binding{}, Clock()));
    INFO("case " << i);
    CHECK(got == want);
    if (!want.empty()) ++nonempty;
  }
  CHECK(nonempty > 50);
}
