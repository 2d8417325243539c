#include "cwp/statechart.hpp"

#include <algorithm>
#include <deque>
#include <functional>

#include "cwp/error.hpp"

namespace cwp {

bool StateMachineDecl::has_state(const std::string& s) const {
  return std::find(states.begin(), states.end(), s) != states.end();
}

std::string_view mutability_name(Mutability m) {
  switch (m) {
    case Mutability::Immutable: return "immutable";
    case Mutability::Environment: return "environment";
    case Mutability::RuleOwned: return "rule-owned";
  }
  return "?";
}

std::optional<Term> DomainValue::resolve(DateTime clock) const {
  switch (kind) {
    case Kind::Absent: return std::nullopt;
    case Kind::Value: return value;
    case Kind::Past: return Term::datetime(clock.plus_seconds(-86400));
    case Kind::Future: return Term::datetime(clock.plus_seconds(86400));
  }
  return std::nullopt;
}

std::string DomainValue::to_string() const {
  switch (kind) {
    case Kind::Absent: return "absent";
    case Kind::Value: return value.text();
    case Kind::Past: return "past";
    case Kind::Future: return "future";
  }
  return "?";
}

bool SolvabilityReport::solvable() const {
  if (!cohesion.empty()) return false;
  return std::all_of(types.begin(), types.end(),
                     [](const TypeReport& t) { return t.deadlocks.empty() && t.gaps.empty(); });
}

std::string base_transition_id(const std::string& rule_id) {
  std::string out = rule_id;
  while (!out.empty() && out.back() == '\'') out.pop_back();
  return out;
}

namespace {

void for_each_where_triple(const GraphPattern& p, const std::function<void(const TriplePattern&)>& fn) {
  for (const TriplePattern& tp : p.triples) fn(tp);
  for (const PatternGroup& g : p.groups) for_each_where_triple(g.body, fn);
}

std::vector<const TriplePattern*> state_triples(const ConstructTemplate& t, const Term& state) {
  std::vector<const TriplePattern*> out;
  for (const TriplePattern& tp : t.triples) {
    if (tp.predicate == state) out.push_back(&tp);
  }
  return out;
}

bool applies_to(const RuleTransition& rt, const Term& variant, const SemanticSchema& schema) {
  return std::all_of(rt.guards.begin(), rt.guards.end(),
                     [&](const Term& g) { return schema.is_subclass(variant, g); });
}

Term probe_name(const StateMachineDecl& decl, const std::string& local) {
  return Term::name(std::string(decl.subject_class.prefix()) + ":" + local);
}

}  // namespace

RuleTransition rule_transition(const TransitionRule& rule, const StateMachineDecl& decl) {
  const auto dels = state_triples(rule.del, decl.state_property);
  const auto ins = state_triples(rule.ins, decl.state_property);
  auto fail = [&](const std::string& why) {
    return Error(ErrorCode::MalformedRule, "rule " + rule.id + ": " + why);
  };
  if (dels.size() != 1) {
    throw fail("DELETE holds " + std::to_string(dels.size()) + " " + decl.state_property.text() +
               " triples, expected 1");
  }
  if (ins.size() != 1) {
    throw fail("INSERT holds " + std::to_string(ins.size()) + " " + decl.state_property.text() +
               " triples, expected 1");
  }
  const TriplePattern& d = *dels.front();
  const TriplePattern& i = *ins.front();
  if (!d.subject.is_variable() || !(d.subject == i.subject)) {
    throw fail("DELETE and INSERT state triples must share one variable subject");
  }
  if (d.object.kind() != TermKind::String || i.object.kind() != TermKind::String) {
    throw fail("state values must be string constants");
  }
  RuleTransition rt;
  rt.rule_id = rule.id;
  rt.source = d.object.lexical();
  rt.target = i.object.lexical();
  rt.tracked_var = d.subject.lexical();
  for (const TriplePattern& tp : rule.where.triples) {
    if (tp.subject == d.subject && tp.predicate == rdf_type() && tp.object.is_name()) {
      rt.guards.push_back(tp.object);
    }
  }
  return rt;
}

StateGraph extract_state_graph(std::span<const TransitionRule> rules, const StateMachineDecl& decl,
                               const SemanticSchema& schema) {
  StateGraph g;
  g.nodes = decl.states;
  std::vector<RuleTransition> transitions;
  for (const TransitionRule& r : rules) transitions.push_back(rule_transition(r, decl));
  for (const Term& v : decl.variants) {
    auto& edges = g.edges[v];
    for (const RuleTransition& rt : transitions) {
      if (applies_to(rt, v, schema)) edges.push_back({rt.rule_id, rt.source, rt.target});
    }
    std::sort(edges.begin(), edges.end());
  }
  return g;
}

std::vector<Reachability> check_reachability(const StateGraph& graph, const StateMachineDecl& decl) {
  std::vector<Reachability> out;
  for (const Term& v : decl.variants) {
    std::set<std::string> seen{decl.initial};
    std::deque<std::string> work{decl.initial};
    const auto it = graph.edges.find(v);
    while (!work.empty()) {
      const std::string s = work.front();
      work.pop_front();
      if (it == graph.edges.end()) break;
      for (const StateEdge& e : it->second) {
        if (e.source == s && seen.insert(e.target).second) work.push_back(e.target);
      }
    }
    Reachability r{v, {}, {}};
    for (const std::string& s : decl.states) (seen.count(s) ? r.reachable : r.unreachable).push_back(s);
    out.push_back(std::move(r));
  }
  return out;
}

std::map<Term, std::vector<DomainValue>> guard_domains(std::span<const TransitionRule> rules,
                                                       const StateMachineDecl& decl,
                                                       const SemanticSchema& schema,
                                                       const PropertyMutability& mutability) {
  std::map<Term, std::set<Term>> constants;
  std::set<Term> tracked_props;
  for (const TransitionRule& r : rules) {
    const RuleTransition rt = rule_transition(r, decl);
    const Term tracked = Term::variable(rt.tracked_var);
    for_each_where_triple(r.where, [&](const TriplePattern& tp) {
      if (tp.predicate.is_variable() || tp.predicate == rdf_type()) return;
      if (!mutability.kinds.count(tp.predicate)) {
        throw Error(ErrorCode::UnclassifiedProperty,
                    "rule " + r.id + " reads " + tp.predicate.text() +
                        ", which has no mutability declaration");
      }
      if (!(tp.subject == tracked) || tp.predicate == decl.state_property) return;
      tracked_props.insert(tp.predicate);
      if (!tp.object.is_variable()) constants[tp.predicate].insert(tp.object);
    });
  }
  std::map<Term, std::vector<DomainValue>> out;
  for (const Term& p : tracked_props) {
    if (mutability.kinds.at(p) == Mutability::RuleOwned) continue;
    if (auto it = mutability.domains.find(p); it != mutability.domains.end()) {
      out[p] = it->second;
      continue;
    }
    std::vector<DomainValue> dom;
    const std::string range = schema.datatype_range(p);
    if (range == "boolean") {
      dom = {DomainValue::of(Term::boolean(true)), DomainValue::of(Term::boolean(false))};
    } else if (range == "dateTime") {
      dom = {DomainValue::past(), DomainValue::future()};
    } else if (constants.count(p)) {
      for (const Term& c : constants[p]) dom.push_back(DomainValue::of(c));
    } else if (schema.object_properties.count(p)) {
      dom.push_back(DomainValue::of(probe_name(decl, "probe_" + std::string(p.local_name()))));
    } else if (range == "integer") {
      dom.push_back(DomainValue::of(Term::integer(0)));
    } else {
      dom.push_back(DomainValue::of(Term::string("x")));
    }
    dom.push_back(DomainValue::absent());
    out[p] = std::move(dom);
  }
  return out;
}

TripleStore guard_store(std::span<const TransitionRule> rules, const StateMachineDecl& decl,
                        const SemanticSchema& schema, const Term& type, const std::string& state,
                        const std::map<Term, DomainValue>& values, DateTime clock) {
  TripleStore s;
  const Term o = probe_name(decl, "probe_object");
  const Term driver = probe_name(decl, "probe_driver");
  for (const Term& c : schema.superclasses(type)) s.add({o, rdf_type(), c});
  s.add({o, decl.state_property, Term::string(state)});
  const Term this_var = Term::variable("this");
  for (const TransitionRule& r : rules) {
    if (!r.attached_class.text().empty()) {
      for (const Term& c : schema.superclasses(r.attached_class)) s.add({driver, rdf_type(), c});
    }
    const RuleTransition rt = rule_transition(r, decl);
    const Term tracked = Term::variable(rt.tracked_var);
    for (const TriplePattern& tp : r.where.triples) {
      if (tp.subject == this_var && tp.object == tracked && tp.predicate.is_name()) {
        s.add({driver, tp.predicate, o});
      }
    }
  }
  for (const auto& [p, v] : values) {
    if (auto t = v.resolve(clock)) s.add({o, p, *t});
  }
  return s;
}

DeadlockReport check_deadlock(const StateGraph& graph, const StateMachineDecl& decl,
                              std::span<const TransitionRule> rules, const SemanticSchema& schema,
                              const PropertyMutability& mutability) {
  const DateTime clock = DateTime::from_civil(2000, 1, 1);
  const auto domains = guard_domains(rules, decl, schema, mutability);
  std::vector<std::pair<Term, const std::vector<DomainValue>*>> immutable, environment;
  for (const auto& [p, dom] : domains) {
    (mutability.kinds.at(p) == Mutability::Immutable ? immutable : environment).push_back({p, &dom});
  }
  std::vector<RuleTransition> transitions;
  for (const TransitionRule& r : rules) transitions.push_back(rule_transition(r, decl));

  // Every valuation of a property list, in odometer order.
  auto valuations = [](const std::vector<std::pair<Term, const std::vector<DomainValue>*>>& props) {
    std::vector<std::map<Term, DomainValue>> out;
    std::vector<std::size_t> idx(props.size(), 0);
    for (;;) {
      std::map<Term, DomainValue> v;
      for (std::size_t i = 0; i < props.size(); ++i) v[props[i].first] = (*props[i].second)[idx[i]];
      out.push_back(std::move(v));
      std::size_t k = props.size();
      while (k > 0) {
        --k;
        if (++idx[k] < props[k].second->size()) break;
        idx[k] = 0;
        if (k == 0) return out;
      }
      if (props.empty()) return out;
    }
  };
  const auto imm_vals = valuations(immutable);
  const auto env_vals = valuations(environment);

  Binding seed;
  seed.bind("this", probe_name(decl, "probe_driver"));

  DeadlockReport report;
  for (const Reachability& r : check_reachability(graph, decl)) {
    std::vector<std::string>& dead = report.deadlocks[r.type];
    for (const std::string& s : r.reachable) {
      if (decl.finals.count(s)) continue;
      std::vector<std::string> stuck_under;
      for (const auto& iv : imm_vals) {
        bool progress = false;
        for (const auto& ev : env_vals) {
          std::map<Term, DomainValue> all = iv;
          all.insert(ev.begin(), ev.end());
          const TripleStore store = guard_store(rules, decl, schema, r.type, s, all, clock);
          for (std::size_t i = 0; i < rules.size() && !progress; ++i) {
            if (transitions[i].source != s) continue;
            progress = eval_ask(store, rules[i].where, seed, Clock(clock));
          }
          if (progress) break;
        }
        if (progress) continue;
        std::string text;
        for (const auto& [p, v] : iv) {
          if (!text.empty()) text += ", ";
          text += std::string(p.local_name()) + "=" + v.to_string();
        }
        stuck_under.push_back(text);
      }
      if (stuck_under.empty()) continue;
      if (stuck_under.size() == imm_vals.size()) {
        dead.push_back(s);
      } else {
        for (const std::string& v : stuck_under) report.gaps.push_back({r.type, s, v});
      }
    }
  }
  return report;
}

std::vector<CohesionError> check_cohesion(std::span<const TransitionRule> rules,
                                          const StateMachineDecl& decl, const SemanticSchema& schema,
                                          const PropertyMutability& mutability,
                                          std::span<const AskConstraint> constraints,
                                          std::span<const Constructor> constructors) {
  std::vector<CohesionError> out;
  auto check_triple = [&](const std::string& owner, const TriplePattern& tp) {
    if (tp.predicate.is_variable()) return;
    if (tp.predicate == rdf_type()) {
      if (tp.object.is_name() && !schema.has_class(tp.object)) {
        out.push_back({"UNDECLARED_CLASS", owner, "class " + tp.object.text() + " is not declared"});
      }
      return;
    }
    if (!schema.has_property(tp.predicate)) {
      out.push_back({"UNDECLARED_PROPERTY", owner, "property " + tp.predicate.text() + " is not declared"});
      return;
    }
    if (!tp.object.is_variable()) {
      const std::string range = schema.datatype_range(tp.predicate);
      if (!range.empty() && (tp.object.is_name() || term_kind_name(tp.object.kind()) != range)) {
        out.push_back({"RANGE_MISMATCH", owner,
                       tp.predicate.text() + " expects " + range + ", got " + tp.object.text()});
      } else if (range.empty() && tp.object.is_literal()) {
        out.push_back({"RANGE_MISMATCH", owner,
                       tp.predicate.text() + " expects an individual, got " + tp.object.text()});
      }
    }
    if (tp.predicate == decl.state_property && tp.object.kind() == TermKind::String &&
        !decl.has_state(tp.object.lexical())) {
      out.push_back({"UNDECLARED_STATE", owner,
                     "state " + tp.object.text() + " is not declared by machine " + decl.name});
    }
  };
  auto check_writes = [&](const std::string& owner, const ConstructTemplate& t) {
    for (const TriplePattern& tp : t.triples) {
      check_triple(owner, tp);
      auto it = mutability.kinds.find(tp.predicate);
      if (it != mutability.kinds.end() && it->second == Mutability::Immutable) {
        out.push_back({"IMMUTABLE_WRITE", owner, "writes immutable property " + tp.predicate.text()});
      }
    }
  };

  auto declared_state = [&](const std::string& s, const std::string& where) {
    if (!decl.has_state(s)) {
      out.push_back({"UNDECLARED_STATE", decl.name, where + " state \"" + s + "\" is not declared"});
    }
  };
  declared_state(decl.initial, "initial");
  for (const std::string& f : decl.finals) declared_state(f, "final");
  for (const DeclaredTransition& t : decl.transitions) {
    declared_state(t.source, "transition " + t.id + " source");
    declared_state(t.target, "transition " + t.id + " target");
  }

  std::set<std::string> implemented;
  for (const TransitionRule& r : rules) {
    for_each_where_triple(r.where, [&](const TriplePattern& tp) { check_triple(r.id, tp); });
    check_writes(r.id, r.del);
    check_writes(r.id, r.ins);
    if (!r.attached_class.text().empty() && !schema.has_class(r.attached_class)) {
      out.push_back({"UNDECLARED_CLASS", r.id, "attached class " + r.attached_class.text() + " is not declared"});
    }
    RuleTransition rt;
    try {
      rt = rule_transition(r, decl);
    } catch (const Error& e) {
      out.push_back({"MALFORMED_RULE", r.id, e.what()});
      continue;
    }
    const std::string base = base_transition_id(r.id);
    auto declared = std::find_if(decl.transitions.begin(), decl.transitions.end(),
                                 [&](const DeclaredTransition& t) {
                                   return t.id == base && t.source == rt.source && t.target == rt.target;
                                 });
    if (declared == decl.transitions.end()) {
      out.push_back({"UNDECLARED_TRANSITION", r.id,
                     "edge \"" + rt.source + "\" -> \"" + rt.target + "\" matches no declared transition " + base});
      continue;
    }
    implemented.insert(declared->id);
    if (declared->types.empty()) continue;
    for (const Term& v : decl.variants) {
      if (!applies_to(rt, v, schema)) continue;
      const bool covered = std::any_of(declared->types.begin(), declared->types.end(),
                                       [&](const Term& t) { return schema.is_subclass(v, t); });
      if (!covered) {
        out.push_back({"UNDECLARED_TRANSITION", r.id,
                       "applies to " + v.text() + ", but transition " + declared->id + " is not declared for it"});
      }
    }
  }
  for (const DeclaredTransition& t : decl.transitions) {
    if (!implemented.count(t.id)) {
      out.push_back({"MISSING_RULE", t.id,
                     "declared transition \"" + t.source + "\" -> \"" + t.target + "\" has no implementing rule"});
    }
  }
  for (const AskConstraint& c : constraints) {
    for_each_where_triple(c.body, [&](const TriplePattern& tp) { check_triple(c.id, tp); });
  }
  for (const Constructor& c : constructors) {
    const std::string owner = "constructor on " + c.attached_class.text();
    for_each_where_triple(c.where, [&](const TriplePattern& tp) { check_triple(owner, tp); });
    for (const TriplePattern& tp : c.tmpl.triples) check_triple(owner, tp);
  }
  return out;
}

SolvabilityReport verify_machine(std::span<const TransitionRule> rules, const StateMachineDecl& decl,
                                 const SemanticSchema& schema, const PropertyMutability& mutability) {
  SolvabilityReport report;
  report.cohesion = check_cohesion(rules, decl, schema, mutability);
  std::vector<TransitionRule> usable;
  for (const TransitionRule& r : rules) {
    try {
      rule_transition(r, decl);
      usable.push_back(r);
    } catch (const Error&) {
    }
  }
  const StateGraph graph = extract_state_graph(usable, decl, schema);
  const DeadlockReport dl = check_deadlock(graph, decl, usable, schema, mutability);
  for (const Reachability& r : check_reachability(graph, decl)) {
    TypeReport t{r.type, r.reachable, r.unreachable, {}, {}};
    if (auto it = dl.deadlocks.find(r.type); it != dl.deadlocks.end()) t.deadlocks = it->second;
    for (const CoverageGap& g : dl.gaps) {
      if (g.type == r.type) t.gaps.push_back(g);
    }
    report.types.push_back(std::move(t));
  }
  return report;
}

}  // namespace cwp
