#include <doctest.h>

#include <random>

#include "cwp/error.hpp"
#include "cwp/fixture.hpp"
#include "oracles.hpp"

using namespace cwp;

namespace {

Term n(const std::string& s) { return Term::name("casemanager:" + s); }
Term ex(const std::string& s) { return Term::name("ex:" + s); }

const char* kHeader = R"(
prefix ex: <http://example.org/ex#> ;
default ex ;
)";

WorkModel inline_model(const std::string& body) { return parse_model(std::string(kHeader) + body); }

const char* kPlanState = R"(
class TreatmentPlan ;
partition TreatmentPlanState on TreatmentPlan.planState { progressing hung approved complete }
)";

const char* kPlanStateNested = R"(
class TreatmentPlan ;
partition TreatmentPlanState on TreatmentPlan.planState {
  progressing { slowlyProgressing } hung approved complete
}
)";

bool has_disjoint(const SemanticSchema& s, std::set<Term> members) {
  for (const auto& d : s.disjoint_sets) {
    if (std::set<Term>(d.begin(), d.end()) == members) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("composition translates to a part-whole property and an inverse") {
  const WorkModel m = load_fixture();
  const SemanticSchema s = translate(m.classes);
  const ObjectProperty& has = s.object_properties.at(n("hasOrder"));
  CHECK(has.part_whole);
  CHECK(has.domain == n("TreatmentPlan"));
  CHECK(has.range == n("Order"));
  CHECK(has.has(Characteristic::Irreflexive));
  CHECK(has.has(Characteristic::InverseFunctional));
  CHECK(has.inverse == n("orderOf"));
  const ObjectProperty& of = s.object_properties.at(n("orderOf"));
  CHECK(of.composition_inverse);
  CHECK(s.functional(n("orderOf")));
  CHECK(of.min == 1);
  CHECK(of.max == 1);
  CHECK(s.abstract_classes == std::set<Term>{n("Order")});
  CHECK(s.is_subclass(n("LabTest"), n("Order")));
  CHECK(s.concrete_subclasses(n("Order")).size() == 6);
  CHECK(s.datatype_range(n("patientNumber")) == "integer");
  CHECK(s.disjoint_sets.empty());
}

TEST_CASE("every association gets exactly one property and one inverse") {
  const WorkModel m = load_fixture();
  const SemanticSchema s = translate(m.classes);
  for (const AssociationDecl& a : m.classes.associations) {
    INFO(a.name.text());
    REQUIRE(s.object_properties.count(a.name));
    const auto& p = s.object_properties.at(a.name);
    REQUIRE(p.inverse);
    CHECK(s.object_properties.at(*p.inverse).inverse == a.name);
    if (!a.inverse) CHECK(p.inverse->text() == a.name.text() + "_inv");
  }
  CHECK(s.object_properties.count(n("changeState_inv")));
}

TEST_CASE("property chains link whole to nested parts") {
  const WorkModel m = load_fixture();
  const auto chains = build_property_chains(m.classes);
  CHECK(chains.size() == 3);
  for (const auto& c : chains) {
    REQUIRE(c.steps.size() == 2);
    CHECK(c.steps[0] == n("hasPlan"));
    CHECK(c.implies == n("hasPart_generated"));
  }
  TripleStore d;
  d.add({n("case1"), n("hasPlan"), n("plan1")});
  d.add({n("plan1"), n("hasOrder"), n("lab1")});
  materialize(d, translate(m.classes));
  CHECK(d.contains({n("case1"), n("hasPart_generated"), n("lab1")}));
  CHECK(d.contains({n("lab1"), n("orderOf"), n("plan1")}));
}

TEST_CASE("single hasPart strategy") {
  const WorkModel m = load_fixture();
  TranslationOptions o;
  o.part_whole_strategy = PartWholeStrategy::SingleHasPart;
  const SemanticSchema s = translate(m.classes, o);
  const ObjectProperty& hp = s.object_properties.at(n("hasPart"));
  CHECK(hp.part_whole);
  CHECK(s.object_properties.at(n("partOf")).has(Characteristic::Transitive));
  CHECK_FALSE(s.object_properties.at(n("partOf")).max);
  CHECK(s.is_subclass(n("LabTest"), n("Order")));
  bool typed = false;
  for (const auto& r : s.restrictions) typed = typed || (r.owner == n("TreatmentPlan") && r.filler == n("Order"));
  CHECK(typed);
  CHECK(s.warnings.empty());

  o.part_whole_cardinality = true;
  const SemanticSchema w = translate(m.classes, o);
  REQUIRE(w.warnings.size() == 1);
  CHECK(w.warnings[0].code == "TRANSITIVE_CARDINALITY_CONFLICT");
  CHECK_FALSE(w.object_properties.at(n("partOf")).max);
}

TEST_CASE("value partition as disjoint individuals") {
  const WorkModel m = inline_model(kPlanState);
  const SemanticSchema s = translate(m.classes);
  const Enumeration& e = s.enumerations.at(ex("planState"));
  CHECK(e.partition_class == ex("TreatmentPlanState"));
  CHECK(e.individuals == std::vector<Term>{ex("progressing"), ex("hung"), ex("approved"), ex("complete")});
  CHECK(s.functional(ex("planState")));

  TripleStore d;
  d.add({ex("p1"), rdf_type(), ex("TreatmentPlan")});
  d.add({ex("p1"), ex("planState"), ex("hung")});
  CHECK(check_structural(d, s).empty());
  d.add({ex("p2"), rdf_type(), ex("TreatmentPlan")});
  d.add({ex("p2"), ex("planState"), ex("paused")});
  const auto v = check_structural(d, s);
  REQUIRE(v.size() == 1);
  CHECK(v[0].kind == StructuralKind::Enumeration);
  CHECK(v[0].subject == ex("p2"));
}

TEST_CASE("value partition as disjoint subclasses") {
  const WorkModel m = inline_model(kPlanStateNested);
  const SemanticSchema s = translate_value_partition(m.classes.value_partitions.at(0),
                                                     ValuePartitionStrategy::DisjointSubclasses);
  for (const char* v : {"Progressing", "Hung", "Approved", "Complete"}) {
    INFO(v);
    CHECK(s.is_subclass(ex(v), ex("TreatmentPlanState")));
  }
  CHECK(s.is_subclass(ex("SlowlyProgressing"), ex("Progressing")));
  CHECK(has_disjoint(s, {ex("Progressing"), ex("Hung"), ex("Approved"), ex("Complete")}));
}

TEST_CASE("sub-partitions need the subclass strategy") {
  const WorkModel m = inline_model(kPlanStateNested);
  try {
    translate_value_partition(m.classes.value_partitions.at(0), ValuePartitionStrategy::DisjointIndividuals);
    FAIL("expected SubPartitionNotAllowed");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SubPartitionNotAllowed);
  }
}

TEST_CASE("translation errors") {
  auto code = [](const std::string& body) {
    try {
      translate(inline_model(body).classes);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::InvalidArgument;
  };
  CHECK(code("class A { attribute x : decimal [0..1] ; }") == ErrorCode::UnknownDatatype);
  CHECK(code("class A { attribute x : string [0..1] ; }\nclass B { attribute x : integer [0..1] ; }") ==
        ErrorCode::DuplicateProperty);
}

TEST_CASE("materialize agrees with a naive closure") {
  const WorkModel m = load_fixture();
  std::mt19937_64 rng(42);
  for (const auto strategy : {PartWholeStrategy::PerAssociation, PartWholeStrategy::SingleHasPart}) {
    TranslationOptions o;
    o.part_whole_strategy = strategy;
    const SemanticSchema s = translate(m.classes, o);
    std::vector<Term> objs;
    for (int i = 0; i < 8; ++i) objs.push_back(n("x" + std::to_string(i)));
    std::vector<Term> classes(s.classes.begin(), s.classes.end());
    std::vector<Term> props;
    for (const auto& [p, _] : s.object_properties) props.push_back(p);
    for (int round = 0; round < 60; ++round) {
      TripleStore d;
      const int k = std::uniform_int_distribution<int>(0, 25)(rng);
      for (int i = 0; i < k; ++i) {
        const Term a = oracle::pick(rng, objs);
        if (rng() % 3 == 0) {
          d.add({a, rdf_type(), oracle::pick(rng, classes)});
        } else {
          d.add({a, oracle::pick(rng, props), oracle::pick(rng, objs)});
        }
      }
      const TripleStore want = oracle::naive_closure(d, s);
      TripleStore got = d;
      const std::size_t added = materialize(got, s);
      INFO("round " << round);
      CHECK(got == want);
      CHECK(added == want.size() - d.size());
      CHECK(materialize(got, s) == 0);

      // Incremental closure from a materialized prefix gives the same store.
      std::vector<Triple> all(d.begin(), d.end());
      const std::size_t half = all.size() / 2;
      TripleStore inc;
      for (std::size_t i = 0; i < half; ++i) inc.add(all[i]);
      materialize(inc, s);
      std::vector<Triple> fresh;
      for (std::size_t i = half; i < all.size(); ++i) {
        if (inc.add(all[i])) fresh.push_back(all[i]);
      }
      extend_closure(inc, s, fresh);
      CHECK(inc == want);
    }
  }
}

TEST_CASE("structural violations on the bundled defect files") {
  const WorkModel m = load_fixture();
  const SemanticSchema s = translate(m.classes);
  auto kinds = [&](const std::string& file) {
    TripleStore d = parse_triples(read_file(fixture_path("casemgmt/structural/" + file + ".ttl")));
    materialize(d, s);
    std::set<StructuralKind> out;
    for (const auto& v : check_structural(d, s)) out.insert(v.kind);
    return out;
  };
  CHECK(kinds("domain_range") == std::set<StructuralKind>{StructuralKind::DomainRange});
  CHECK(kinds("cardinality") == std::set<StructuralKind>{StructuralKind::Cardinality});
  CHECK(kinds("part_whole_cycle").count(StructuralKind::PartWholeCycle));
  TripleStore ok = load_fixture_population("population_valid");
  materialize(ok, s);
  CHECK(check_structural(ok, s).empty());
}

TEST_CASE("ordered indexes and declared disjointness") {
  const WorkModel m = inline_model(R"(
class Shelf ;
class Book ;
association holds : Shelf [0..1] -> Book [0..3] ordered ;
)");
  const SemanticSchema s = translate(m.classes);
  TripleStore d;
  d.add({ex("s1"), rdf_type(), ex("Shelf")});
  d.add({ex("b1"), rdf_type(), ex("Book")});
  d.add({ex("s1"), Term::name("ex:holds_1"), ex("b1")});
  materialize(d, s);
  CHECK(d.contains({ex("s1"), ex("holds"), ex("b1")}));
  CHECK(check_structural(d, s).empty());
  d.add({ex("b2"), rdf_type(), ex("Book")});
  d.add({ex("s1"), Term::name("ex:holds_3"), ex("b2")});
  materialize(d, s);
  std::set<StructuralKind> kinds;
  for (const auto& v : check_structural(d, s)) kinds.insert(v.kind);
  CHECK(kinds == std::set<StructuralKind>{StructuralKind::OrderIndex});

  // Multiple typing is fine unless the classes are declared disjoint.
  const WorkModel pm = inline_model(kPlanState);
  TranslationOptions o;
  o.value_partition_strategy = ValuePartitionStrategy::DisjointSubclasses;
  const SemanticSchema ps = translate(pm.classes, o);
  TripleStore p;
  p.add({ex("x"), rdf_type(), ex("TreatmentPlan")});
  p.add({ex("x"), rdf_type(), ex("Hung")});
  materialize(p, ps);
  CHECK(check_structural(p, ps).empty());
  p.add({ex("x"), rdf_type(), ex("Progressing")});
  materialize(p, ps);
  const auto v = check_structural(p, ps);
  REQUIRE(v.size() == 1);
  CHECK(v[0].kind == StructuralKind::Disjointness);
}

TEST_CASE("single-value partition has no disjointness pairs") {
  const WorkModel m = inline_model("class A ;\npartition Kind on A.kind { only }");
  for (const auto st : {ValuePartitionStrategy::DisjointIndividuals, ValuePartitionStrategy::DisjointSubclasses}) {
    const SemanticSchema s = translate_value_partition(m.classes.value_partitions.at(0), st);
    CHECK(s.disjoint_sets.empty());
  }
}

TEST_CASE("schema export vocabulary") {
  const WorkModel m = load_fixture();
  const std::string text = serialize(schema_to_store(translate(m.classes)));
  auto count = [&](const std::string& needle) {
    std::size_t c = 0;
    for (std::size_t p = text.find(needle); p != std::string::npos; p = text.find(needle, p + 1)) ++c;
    return c;
  };
  CHECK(count("owl:cardinality 1 .") == 4);
  CHECK(count("rdf:type owl:PropertyChainAxiom") == 3);
  CHECK(count("casemanager:Order rdf:type owl:Class") == 1);
}
