#include "cwp/scenario.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <sstream>

#include "cwp/error.hpp"

namespace cwp {

bool SimulationTrace::all_fixed_point() const {
  return std::all_of(runs.begin(), runs.end(),
                     [](const FireTrace& t) { return t.status == RunStatus::FixedPoint; });
}

namespace {

std::string join_terms(const std::vector<Term>& ts) {
  std::string out;
  for (const Term& t : ts) {
    if (!out.empty()) out += ' ';
    out += t.text();
  }
  return out.empty() ? "(none)" : out;
}

std::string join(const std::set<std::string>& items) {
  std::string out;
  for (const std::string& s : items) {
    if (!out.empty()) out += ' ';
    out += s;
  }
  return out.empty() ? "(none)" : out;
}

/// Asserted facts plus their materialized closure, kept in step.
class FactBase {
 public:
  FactBase(const SemanticSchema& schema, TripleStore& asserted, TripleStore& materialized)
      : schema_(schema), a_(asserted), m_(materialized) {}

  void add(const Triple& t) {
    a_.add(t);
    m_.add(t);
    const Triple one[] = {t};
    extend_closure(m_, schema_, one);
  }

  void remove(const std::vector<Triple>& ts) {
    bool rebuild = false;
    for (const Triple& t : ts) {
      if (!a_.remove(t)) continue;
      if (closure_relevant(schema_, t.predicate)) {
        rebuild = true;
      } else {
        m_.remove(t);
      }
    }
    if (rebuild) rematerialize();
  }

  /// Bring the asserted store in line with firings that ran on the
  /// materialized store.
  void absorb(const FireTrace& trace) {
    bool rebuild = false;
    std::vector<Triple> inserted;
    for (const Firing& f : trace.firings) {
      for (const Triple& t : f.deleted) {
        a_.remove(t);
        rebuild = rebuild || closure_relevant(schema_, t.predicate);
      }
      for (const Triple& t : f.inserted) {
        a_.add(t);
        inserted.push_back(t);
      }
    }
    if (rebuild) {
      rematerialize();
    } else {
      extend_closure(m_, schema_, inserted);
    }
  }

  void rematerialize() {
    m_ = a_;
    materialize(m_, schema_);
  }

 private:
  const SemanticSchema& schema_;
  TripleStore& a_;
  TripleStore& m_;
};

}  // namespace

SimulationTrace simulate(const WorkModel& model, const Scenario& scenario, const SimulationOptions& options) {
  const SemanticSchema schema = translate(model.classes, model.options);
  std::vector<TransitionRule> rules;
  if (options.rule_order.empty()) {
    rules = model.rules;
  } else {
    for (std::size_t i : options.rule_order) {
      if (i >= model.rules.size()) throw Error(ErrorCode::InvalidArgument, "rule order index out of range");
      rules.push_back(model.rules[i]);
    }
  }
  std::set<Term> state_props;
  for (const StateMachineDecl& d : model.machines) state_props.insert(d.state_property);

  SimulationTrace tr;
  FactBase facts(schema, tr.asserted, tr.materialized);
  Clock clock(options.clock);
  ConstructionLedger ledger;
  DiagnosticSink sink;
  std::set<Term> known;
  std::ostringstream out;

  out << "scenario " << (scenario.name.empty() ? "(unnamed)" : scenario.name) << '\n';
  out << "clock " << clock.now().to_string() << '\n';

  auto require_known = [&](const ScenarioEvent& ev) {
    if (!known.count(ev.object)) {
      throw Error(ErrorCode::UnknownObject,
                  "line " + std::to_string(ev.line) + ": " + ev.object.text() + " has not been created");
    }
  };

  for (const ScenarioEvent& ev : scenario.events) {
    switch (ev.kind) {
      case ScenarioEvent::Kind::At:
        clock.advance_to(ev.time);
        out << "at " << ev.time.to_string() << '\n';
        break;

      case ScenarioEvent::Kind::Create: {
        if (!schema.has_class(ev.cls)) {
          throw Error(ErrorCode::UnknownClass, "line " + std::to_string(ev.line) + ": class " + ev.cls.text() +
                                                   " is not declared");
        }
        out << "create " << ev.object.text() << " : " << ev.cls.text() << '\n';
        facts.add({ev.object, rdf_type(), ev.cls});
        for (const auto& [p, v] : ev.properties) {
          facts.add({ev.object, p, v});
          out << "  = " << Triple{ev.object, p, v}.to_string() << '\n';
        }
        known.insert(ev.object);
        if (schema.abstract_classes.count(ev.cls)) {
          tr.abstract_instances.push_back(ev.object);
          out << "  ! " << ev.cls.text() << " is abstract\n";
        }
        for (const ValueDefault& d : schema.defaults) {
          if (!tr.materialized.has_type(ev.object, d.owner)) continue;
          if (!tr.asserted.objects(ev.object, d.property).empty()) continue;
          const Triple t{ev.object, d.property, d.value};
          facts.add(t);
          out << "  default " << t.to_string() << '\n';
        }
        for (const Triple& t : run_constructors(tr.materialized, ev.object, model.constructors, clock, ledger)) {
          facts.add(t);
          out << "  + " << t.to_string() << '\n';
        }
        break;
      }

      case ScenarioEvent::Kind::Set: {
        require_known(ev);
        if (schema.functional(ev.property)) facts.remove(tr.asserted.find(&ev.object, &ev.property, nullptr));
        facts.add({ev.object, ev.property, ev.value});
        out << "set " << Triple{ev.object, ev.property, ev.value}.to_string() << '\n';
        break;
      }

      case ScenarioEvent::Kind::Clear:
        require_known(ev);
        facts.remove(tr.asserted.find(&ev.object, &ev.property, nullptr));
        out << "clear " << ev.object.text() << ' ' << ev.property.text() << '\n';
        break;

      case ScenarioEvent::Kind::Run: {
        FireTrace ft = run_incremental(tr.materialized, rules, clock, options.max_iterations);
        facts.absorb(ft);
        out << "run\n";
        for (const Firing& f : ft.firings) {
          out << "  [" << f.iteration << "] " << f.rule_id << ' ' << f.binding.to_string() << '\n';
          for (const Triple& t : f.deleted) out << "    - " << t.to_string() << '\n';
          for (const Triple& t : f.inserted) out << "    + " << t.to_string() << '\n';
          for (const Triple& d : f.deleted) {
            if (!state_props.count(d.predicate) || d.object.kind() != TermKind::String) continue;
            for (const Triple& i : f.inserted) {
              if (i.subject == d.subject && i.predicate == d.predicate && i.object.kind() == TermKind::String) {
                tr.changes.push_back({d.subject, f.rule_id, d.object.lexical(), i.object.lexical()});
              }
            }
          }
        }
        out << "  status " << run_status_name(ft.status) << " passes " << ft.passes << " firings "
            << ft.firings.size() << '\n';
        tr.runs.push_back(std::move(ft));
        break;
      }

      case ScenarioEvent::Kind::Expect: {
        require_known(ev);
        const std::vector<Term> got = tr.materialized.objects(ev.object, ev.property);
        const bool ok = got.size() == 1 && got.front() == ev.value;
        out << "expect " << Triple{ev.object, ev.property, ev.value}.to_string() << (ok ? " ok" : " FAILED") << '\n';
        if (!ok) {
          tr.failures.push_back({ev.line, ev.object.text(),
                                 "expected " + ev.property.text() + " " + ev.value.text() + ", got " + join_terms(got)});
          out << "  got " << join_terms(got) << '\n';
        }
        break;
      }

      case ScenarioEvent::Kind::CheckConstraints: {
        const auto violations = check_constraints(tr.materialized, model.constraints, schema, clock, &sink);
        std::set<std::string> got;
        for (const Violation& v : violations) got.insert(v.constraint_id);
        const std::set<std::string> want(ev.constraint_ids.begin(), ev.constraint_ids.end());
        const bool ok = got == want;
        out << "check-constraints " << join(want) << (ok ? " ok" : " FAILED") << '\n';
        for (const Violation& v : violations) {
          out << "  ! " << v.constraint_id << ' ' << v.instance.text() << ' ' << v.witness.to_string() << '\n';
        }
        if (!ok) {
          tr.failures.push_back({ev.line, "check-constraints", "expected violations " + join(want) + ", got " + join(got)});
        }
        break;
      }
    }
  }
  out << "final " << tr.asserted.size() << " triples digest " << tr.asserted.digest().to_hex() << '\n';
  tr.text = out.str();
  tr.diagnostics = sink.diagnostics();
  return tr;
}

ConfluenceResult probe_confluence(const WorkModel& model, const Scenario& scenario, int permutations,
                                  std::uint64_t seed, const SimulationOptions& options) {
  if (permutations < 2) throw Error(ErrorCode::InvalidArgument, "permutations must be >= 2");
  auto ids = [&](const std::vector<std::size_t>& order) {
    std::vector<std::string> out;
    for (std::size_t i : order) out.push_back(model.rules[i].id);
    return out;
  };
  std::vector<std::size_t> declared(model.rules.size());
  std::iota(declared.begin(), declared.end(), 0);

  ConfluenceResult result;
  SimulationOptions base_opts = options;
  base_opts.rule_order = declared;
  const SimulationTrace base = simulate(model, scenario, base_opts);
  if (!base.all_fixed_point()) {
    result.converged = false;
    result.order_a = ids(declared);
    result.detail = "declared rule order does not reach a fixed point";
    return result;
  }
  std::mt19937_64 rng(seed);
  for (int k = 0; k < permutations; ++k) {
    std::vector<std::size_t> order = declared;
    std::shuffle(order.begin(), order.end(), rng);
    SimulationOptions opts = options;
    opts.rule_order = order;
    const SimulationTrace t = simulate(model, scenario, opts);
    if (!t.all_fixed_point() || !(t.asserted == base.asserted)) {
      result.converged = false;
      result.order_a = ids(declared);
      result.order_b = ids(order);
      result.detail = !t.all_fixed_point() ? "permuted rule order does not reach a fixed point"
                                           : "final stores differ";
      return result;
    }
  }
  return result;
}

}  // namespace cwp
