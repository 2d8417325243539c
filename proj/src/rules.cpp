#include "cwp/rules.hpp"

#include <algorithm>
#include <map>

#include "cwp/error.hpp"
#include "cwp/schema.hpp"

namespace cwp {

std::string_view run_status_name(RunStatus s) {
  switch (s) {
    case RunStatus::FixedPoint: return "FixedPoint";
    case RunStatus::IterationCapHit: return "IterationCapHit";
    case RunStatus::CycleDetected: return "CycleDetected";
  }
  return "?";
}

namespace {

const std::string kThis = "this";

Binding seed_this(const Term& instance) {
  Binding b;
  b.bind(kThis, instance);
  return b;
}

}  // namespace

// ---------------------------------------------------------------------------
// Constraints

std::vector<Violation> check_constraints(const TripleStore& store,
                                         std::span<const AskConstraint> constraints,
                                         const SemanticSchema& schema, const Clock& clock,
                                         DiagnosticSink* sink) {
  std::vector<Violation> out;
  for (const AskConstraint& c : constraints) {
    if (!schema.has_class(c.attached_class)) {
      throw Error(ErrorCode::UnknownClass,
                  "constraint " + c.id + " is attached to unknown class " + c.attached_class.text());
    }
    for (const Term& instance : store.instances_of(c.attached_class)) {
      BindingSet hits = match(store, c.body, seed_this(instance), clock, sink);
      if (!hits.empty()) out.push_back(Violation{c.id, instance, c.message, hits.front()});
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const Violation& a, const Violation& b) {
    if (a.constraint_id != b.constraint_id) return a.constraint_id < b.constraint_id;
    return a.instance < b.instance;
  });
  return out;
}

// ---------------------------------------------------------------------------
// Constructors

void ConstructionLedger::mark_all(const TripleStore& store) {
  const Term& type = rdf_type();
  store.for_each_match(nullptr, &type, nullptr, [&](const Triple& t) { done_.insert(t.subject); });
}

std::vector<Triple> run_constructors(TripleStore& store, const Term& instance,
                                     std::span<const Constructor> constructors,
                                     const Clock& clock, ConstructionLedger& ledger) {
  if (ledger.constructed(instance)) {
    throw Error(ErrorCode::DoubleConstruction, instance.text() + " has already been constructed");
  }
  std::vector<Triple> pending;
  for (const Constructor& c : constructors) {
    if (!store.has_type(instance, c.attached_class)) continue;
    auto produced = eval_construct(store, c.tmpl, c.where, clock, seed_this(instance));
    pending.insert(pending.end(), produced.begin(), produced.end());
  }
  std::vector<Triple> inserted;
  for (const Triple& t : pending) {
    if (store.add(t)) inserted.push_back(t);
  }
  ledger.mark(instance);
  return inserted;
}

// ---------------------------------------------------------------------------
// Transition rules

namespace {

BindingSet rule_bindings(const TripleStore& store, const TransitionRule& rule, const Clock& clock) {
  if (rule.attached_class.text().empty()) return match(store, rule.where, {}, clock);
  std::vector<std::pair<std::string, Binding>> keyed;
  for (const Term& instance : store.instances_of(rule.attached_class)) {
    for (Binding& b : match(store, rule.where, seed_this(instance), clock)) {
      keyed.emplace_back(b.to_string(), std::move(b));
    }
  }
  std::sort(keyed.begin(), keyed.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  BindingSet out;
  for (auto& kv : keyed) out.push_back(std::move(kv.second));
  return out;
}

void check_rule_templates(const TransitionRule& rule) {
  std::set<std::string> available = rule.where.bound_variables();
  if (!rule.attached_class.text().empty()) available.insert(kThis);
  for (const std::string& v : rule.ins.variables()) {
    if (!available.count(v)) {
      throw Error(ErrorCode::UnboundTemplateVariable,
                  "rule " + rule.id + ": INSERT variable ?" + v + " is not bound by WHERE");
    }
  }
}

}  // namespace

RuleApplication apply_rule_once(TripleStore& store, const TransitionRule& rule, const Clock& clock) {
  check_rule_templates(rule);
  RuleApplication result;
  const BindingSet bindings = rule_bindings(store, rule, clock);
  result.bindings = bindings.size();
  for (const Binding& b : bindings) {
    Firing firing;
    firing.rule_id = rule.id;
    firing.binding = b;
    for (const TriplePattern& tp : rule.del.triples) {
      Triple t;
      if (instantiate(tp, b, t)) {
        if (store.remove(t)) firing.deleted.push_back(t);
        continue;
      }
      // Wildcard delete: match the partially bound template against the store.
      GraphPattern single;
      single.triples.push_back(tp);
      for (const Binding& extra : match(store, single, b, clock)) {
        if (instantiate(tp, extra, t) && store.remove(t)) firing.deleted.push_back(t);
      }
    }
    for (const TriplePattern& tp : rule.ins.triples) {
      Triple t;
      if (!instantiate(tp, b, t)) continue;
      auto again = std::find(firing.deleted.begin(), firing.deleted.end(), t);
      if (store.add(t)) {
        // A triple deleted and re-inserted by the same firing is no change.
        if (again != firing.deleted.end()) {
          firing.deleted.erase(again);
        } else {
          firing.inserted.push_back(t);
        }
      }
    }
    if (!firing.deleted.empty() || !firing.inserted.empty()) {
      result.changed = true;
      result.firings.push_back(std::move(firing));
    }
  }
  return result;
}

namespace {

std::string key_p(const Term& p) { return "P|" + p.text(); }
std::string key_po(const Term& p, const Term& o) { return "PO|" + p.text() + "|" + o.text(); }

struct RuleDeps {
  std::set<std::string> reads;
  bool reads_any = false;
  std::set<std::string> writes;
  bool writes_any = false;
};

void collect_reads(const GraphPattern& p, RuleDeps& deps) {
  for (const TriplePattern& tp : p.triples) {
    if (tp.predicate.is_variable()) {
      deps.reads_any = true;
    } else if (tp.object.is_variable()) {
      deps.reads.insert(key_p(tp.predicate));
    } else {
      deps.reads.insert(key_po(tp.predicate, tp.object));
    }
  }
  for (const PatternGroup& g : p.groups) collect_reads(g.body, deps);
}

void collect_writes(const ConstructTemplate& tmpl, RuleDeps& deps) {
  for (const TriplePattern& tp : tmpl.triples) {
    if (tp.predicate.is_variable()) {
      deps.writes_any = true;
    } else if (tp.object.is_variable()) {
      deps.writes.insert(key_p(tp.predicate));
    } else {
      deps.writes.insert(key_po(tp.predicate, tp.object));
    }
  }
}

RuleDeps dependencies(const TransitionRule& rule) {
  RuleDeps deps;
  collect_reads(rule.where, deps);
  if (!rule.attached_class.text().empty()) deps.reads.insert(key_po(rdf_type(), rule.attached_class));
  collect_writes(rule.del, deps);
  collect_writes(rule.ins, deps);
  return deps;
}

/// Last-change stamps per dependency key.
class ChangeClock {
 public:
  void record(const Triple& t) {
    ++now_;
    stamps_[key_p(t.predicate)] = now_;
    stamps_[key_po(t.predicate, t.object)] = now_;
  }
  std::uint64_t now() const { return now_; }
  std::uint64_t latest(const std::set<std::string>& keys) const {
    std::uint64_t best = 0;
    for (const std::string& k : keys) {
      auto it = stamps_.find(k);
      if (it != stamps_.end()) best = std::max(best, it->second);
    }
    return best;
  }

 private:
  std::uint64_t now_ = 0;
  std::map<std::string, std::uint64_t> stamps_;
};

struct RuleState {
  bool evaluated = false;
  std::uint64_t last_eval = 0;
  bool had_bindings = false;
};

bool needs_evaluation(const RuleDeps& deps, const RuleState& st, const ChangeClock& changes) {
  if (!st.evaluated) return true;
  const std::uint64_t read_stamp = deps.reads_any ? changes.now() : changes.latest(deps.reads);
  if (read_stamp > st.last_eval) return true;
  if (!st.had_bindings) return false;
  const std::uint64_t write_stamp = deps.writes_any ? changes.now() : changes.latest(deps.writes);
  return write_stamp > st.last_eval;
}

FireTrace run_engine(TripleStore& store, std::span<const TransitionRule> rules, const Clock& clock,
                     int max_iterations, bool incremental) {
  if (max_iterations < 1) throw Error(ErrorCode::InvalidArgument, "max_iterations must be >= 1");
  for (const TransitionRule& r : rules) check_rule_templates(r);

  std::vector<RuleDeps> deps;
  std::vector<RuleState> state(rules.size());
  if (incremental) {
    for (const TransitionRule& r : rules) deps.push_back(dependencies(r));
  }
  ChangeClock changes;

  FireTrace trace;
  std::set<Digest> seen{store.digest()};
  for (int pass = 1; pass <= max_iterations; ++pass) {
    bool changed = false;
    for (std::size_t i = 0; i < rules.size(); ++i) {
      if (incremental && !needs_evaluation(deps[i], state[i], changes)) continue;
      const std::uint64_t started = changes.now();
      RuleApplication app = apply_rule_once(store, rules[i], clock);
      ++trace.evaluations;
      state[i] = RuleState{true, started, app.bindings > 0};
      changed = changed || app.changed;
      for (Firing& f : app.firings) {
        for (const Triple& t : f.deleted) changes.record(t);
        for (const Triple& t : f.inserted) changes.record(t);
        f.iteration = pass;
        trace.firings.push_back(std::move(f));
      }
    }
    trace.passes = pass;
    if (!changed) {
      trace.status = RunStatus::FixedPoint;
      return trace;
    }
    if (!seen.insert(store.digest()).second) {
      trace.status = RunStatus::CycleDetected;
      return trace;
    }
  }
  trace.status = RunStatus::IterationCapHit;
  return trace;
}

}  // namespace

FireTrace run_to_fixpoint(TripleStore& store, std::span<const TransitionRule> rules,
                          const Clock& clock, int max_iterations) {
  return run_engine(store, rules, clock, max_iterations, false);
}

FireTrace run_incremental(TripleStore& store, std::span<const TransitionRule> rules,
                          const Clock& clock, int max_iterations) {
  return run_engine(store, rules, clock, max_iterations, true);
}

void replay(TripleStore& store, const FireTrace& trace) {
  for (const Firing& f : trace.firings) {
    for (const Triple& t : f.deleted) store.remove(t);
    for (const Triple& t : f.inserted) store.add(t);
  }
}

}  // namespace cwp
