#include "cwp/commands.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>
#include <set>

#include "cwp/error.hpp"

namespace cwp {

namespace {

void walk_pattern(const GraphPattern& p, const std::function<void(const TriplePattern&)>& on_triple,
                  const std::function<void(const FilterExpr&)>& on_filter) {
  for (const TriplePattern& tp : p.triples) on_triple(tp);
  for (const FilterExpr& f : p.filters) on_filter(f);
  for (const PatternGroup& g : p.groups) walk_pattern(g.body, on_triple, on_filter);
}

std::string quoted(const std::string& s) { return "\"" + s + "\""; }

std::set<Term> used_predicates(const WorkModel& model) {
  std::set<Term> used;
  auto triple = [&](const TriplePattern& tp) {
    if (tp.predicate.is_name()) used.insert(tp.predicate);
  };
  auto ignore = [](const FilterExpr&) {};
  auto tmpl = [&](const ConstructTemplate& t) {
    for (const TriplePattern& tp : t.triples) triple(tp);
  };
  for (const TransitionRule& r : model.rules) {
    walk_pattern(r.where, triple, ignore);
    tmpl(r.del);
    tmpl(r.ins);
  }
  for (const AskConstraint& c : model.constraints) walk_pattern(c.body, triple, ignore);
  for (const Constructor& c : model.constructors) {
    walk_pattern(c.where, triple, ignore);
    tmpl(c.tmpl);
  }
  for (const StateMachineDecl& d : model.machines) used.insert(d.state_property);
  return used;
}

void add_findings(Report& report, const std::vector<Finding>& findings) {
  report.findings.insert(report.findings.end(), findings.begin(), findings.end());
}

void add_cohesion(Report& report, const std::vector<CohesionError>& errors) {
  for (const CohesionError& e : errors) report.add(Severity::Error, e.code, e.subject, e.message);
}

void add_diagnostics(Report& report, const std::vector<Diagnostic>& diagnostics, const std::string& subject) {
  for (const Diagnostic& d : diagnostics) report.add(Severity::Warning, d.code, subject, d.message);
}

void add_schema_warnings(Report& report, const SemanticSchema& schema) {
  for (const SchemaWarning& w : schema.warnings) report.add(Severity::Warning, w.code, w.subject, w.message);
}

}  // namespace

std::vector<Finding> lint_model(const WorkModel& model) {
  std::vector<Finding> out;

  for (const TransitionRule& r : model.rules) {
    bool temporal = false;
    walk_pattern(
        r.where, [](const TriplePattern&) {}, [&](const FilterExpr& f) { temporal = temporal || f.uses_now(); });
    if (temporal) {
      out.push_back({Severity::Note, "TEMPORAL_GUARD", r.id,
                     "guard compares against now(), so it can change truth value with the clock alone"});
    }
  }

  std::vector<Term> declared;
  for (const AttributeDecl& a : model.classes.attributes) declared.push_back(a.name);
  for (const AssociationDecl& a : model.classes.associations) declared.push_back(a.name);

  std::map<std::string, std::set<std::string>> by_stem;
  for (const Term& p : declared) {
    std::string stem(p.local_name());
    while (!stem.empty() && std::isdigit(static_cast<unsigned char>(stem.back()))) stem.pop_back();
    by_stem[std::string(p.prefix()) + ":" + stem].insert(std::string(p.local_name()));
  }
  for (const auto& [stem, names] : by_stem) {
    if (names.size() < 2) continue;
    std::string list;
    for (const std::string& n : names) list += (list.empty() ? "" : ", ") + n;
    out.push_back({Severity::Note, "SIMILAR_PROPERTIES", stem,
                   list + " differ only by a numeric suffix; one property may be intended"});
  }

  const std::set<Term> used = used_predicates(model);
  auto unused = [&](const Term& p) {
    if (!used.count(p)) {
      out.push_back({Severity::Note, "UNUSED_PROPERTY", p.text(),
                     "declared but never read or written by a rule, constraint or constructor"});
    }
  };
  for (const AttributeDecl& a : model.classes.attributes) unused(a.name);
  for (const AssociationDecl& a : model.classes.associations) {
    if (a.kind == AssociationKind::Plain) unused(a.name);
  }
  return out;
}

CommandOutput cmd_parse(const WorkModel& model) {
  CommandOutput out;
  add_findings(out.report, lint_model(model));
  out.report.normalize();
  out.text = print_model(model);
  return out;
}

Report cmd_check(const WorkModel& model, const TripleStore& data, DateTime clock) {
  Report report;
  const SemanticSchema schema = translate(model.classes, model.options);
  add_schema_warnings(report, schema);
  for (const StateMachineDecl& d : model.machines) {
    add_cohesion(report, check_cohesion(model.rules, d, schema, model.mutability, model.constraints,
                                        model.constructors));
  }

  for (const Term& s : [&] {
         std::set<Term> subjects;
         data.for_each_match(nullptr, &rdf_type(), nullptr, [&](const Triple& t) { subjects.insert(t.subject); });
         return subjects;
       }()) {
    const std::vector<Term> types = data.objects(s, rdf_type());
    const bool any_concrete = std::any_of(types.begin(), types.end(), [&](const Term& c) {
      return !schema.has_class(c) || !schema.abstract_classes.count(c);
    });
    if (!any_concrete) {
      report.add(Severity::Error, "ABSTRACT_INSTANCE", s.text(),
                 "typed only with abstract class " + types.front().text());
    }
  }

  TripleStore m = data;
  materialize(m, schema);
  for (const StructuralViolation& v : check_structural(m, schema)) {
    report.add(Severity::Error, structural_kind_code(v.kind), v.subject.text(), v.detail);
  }
  DiagnosticSink sink;
  for (const Violation& v : check_constraints(m, model.constraints, schema, Clock(clock), &sink)) {
    report.add(Severity::Error, "CONSTRAINT:" + v.constraint_id, v.instance.text(), v.message);
  }
  add_diagnostics(report, sink.diagnostics(), "constraints");
  add_findings(report, lint_model(model));
  report.normalize();
  return report;
}

CommandOutput cmd_translate(const WorkModel& model, const TranslationOptions& options) {
  CommandOutput out;
  const SemanticSchema schema = translate(model.classes, options);
  add_schema_warnings(out.report, schema);
  out.report.normalize();
  out.text = serialize(schema_to_store(schema));
  return out;
}

CommandOutput cmd_simulate(const WorkModel& model, const Scenario& scenario, const SimulateOptions& options) {
  CommandOutput out;
  const std::string name = scenario.name.empty() ? "scenario" : scenario.name;
  const SimulationTrace trace = simulate(model, scenario, options.simulation);
  out.text = trace.text;
  for (const ExpectationFailure& f : trace.failures) {
    out.report.add(Severity::Error, "EXPECTATION_FAILED", f.subject, "line " + std::to_string(f.line) + ": " + f.message);
  }
  for (std::size_t i = 0; i < trace.runs.size(); ++i) {
    if (trace.runs[i].status == RunStatus::FixedPoint) continue;
    out.report.add(Severity::Error, "NO_FIXED_POINT", name,
                   "run " + std::to_string(i + 1) + " ended with " + std::string(run_status_name(trace.runs[i].status)));
  }
  for (const Term& t : trace.abstract_instances) {
    out.report.add(Severity::Error, "ABSTRACT_INSTANCE", t.text(), "created as an instance of an abstract class");
  }
  add_diagnostics(out.report, trace.diagnostics, name);
  if (options.permutations > 0) {
    const ConfluenceResult c = probe_confluence(model, scenario, options.permutations, options.seed, options.simulation);
    if (!c.converged) out.report.add(Severity::Error, "NOT_CONFLUENT", name, c.detail);
  }
  out.report.normalize();
  return out;
}

Report cmd_verify(const WorkModel& model, const VerifyOptions& options) {
  Report report;
  WorkModel m = model;
  for (const std::string& id : options.drop_rules) {
    auto it = std::find_if(m.rules.begin(), m.rules.end(), [&](const TransitionRule& r) { return r.id == id; });
    if (it == m.rules.end()) throw Error(ErrorCode::InvalidArgument, "no rule named " + id);
    m.rules.erase(it);
  }
  const SemanticSchema schema = translate(m.classes, m.options);
  add_schema_warnings(report, schema);

  for (const StateMachineDecl& d : m.machines) {
    SolvabilityReport sr;
    try {
      sr = verify_machine(m.rules, d, schema, m.mutability);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::UnclassifiedProperty) throw;
      add_cohesion(report, check_cohesion(m.rules, d, schema, m.mutability));
      report.add(Severity::Error, "UNCLASSIFIED_PROPERTY", d.name, e.what());
      continue;
    }
    add_cohesion(report, sr.cohesion);
    for (const TypeReport& t : sr.types) {
      const std::string type = t.type.text();
      for (const std::string& s : t.unreachable) report.add(Severity::Note, "UNREACHABLE", type, quoted(s));
      for (const std::string& s : t.deadlocks) report.add(Severity::Error, "DEADLOCK", type, quoted(s));
      for (const CoverageGap& g : t.gaps) {
        report.add(Severity::Warning, "COVERAGE_GAP", type,
                   quoted(g.state) + " has no enabled transition when " + g.valuation);
      }
      if (auto ex = d.excludes.find(t.type); ex != d.excludes.end()) {
        for (const std::string& s : ex->second) {
          if (std::find(t.reachable.begin(), t.reachable.end(), s) != t.reachable.end()) {
            report.add(Severity::Note, "VARIANT_STATE_CONFLICT", type,
                       quoted(s) + " is reachable although excluded for this type");
          }
        }
      }
    }
  }

  for (const Scenario& sc : options.scenarios) {
    if (options.permutations <= 0) break;
    const ConfluenceResult c = probe_confluence(m, sc, options.permutations, options.seed, options.simulation);
    if (!c.converged) report.add(Severity::Error, "NOT_CONFLUENT", sc.name.empty() ? "scenario" : sc.name, c.detail);
  }
  add_findings(report, lint_model(m));
  report.normalize();
  return report;
}

CommandOutput cmd_export(const WorkModel& model, const TranslationOptions& options) {
  return cmd_translate(model, options);
}

CommandOutput cmd_export(const WorkModel& model, const TripleStore& data, bool materialized) {
  CommandOutput out;
  if (!materialized) {
    out.text = serialize(data);
    return out;
  }
  const SemanticSchema schema = translate(model.classes, model.options);
  add_schema_warnings(out.report, schema);
  TripleStore m = data;
  materialize(m, schema);
  out.text = serialize(m);
  out.report.normalize();
  return out;
}

}  // namespace cwp
