#include "cwp/pattern.hpp"

#include <algorithm>
#include <functional>
#include <map>

#include "cwp/error.hpp"

namespace cwp {

std::string TriplePattern::to_string() const {
  return subject.text() + " " + predicate.text() + " " + object.text() + " .";
}

// ---------------------------------------------------------------------------
// FilterExpr

void FilterExpr::collect_variables(std::set<std::string>& out) const {
  if (op == FilterOp::Operand && operand.is_variable()) out.insert(operand.lexical());
  for (const FilterExpr& a : args) a.collect_variables(out);
}

bool FilterExpr::uses_now() const {
  if (op == FilterOp::Now) return true;
  return std::any_of(args.begin(), args.end(), [](const FilterExpr& a) { return a.uses_now(); });
}

namespace {

const char* op_symbol(FilterOp op) {
  switch (op) {
    case FilterOp::Eq: return "=";
    case FilterOp::Ne: return "!=";
    case FilterOp::Lt: return "<";
    case FilterOp::Gt: return ">";
    case FilterOp::Le: return "<=";
    case FilterOp::Ge: return ">=";
    case FilterOp::And: return "&&";
    case FilterOp::Or: return "||";
    default: return "";
  }
}

}  // namespace

std::string FilterExpr::to_string() const {
  switch (op) {
    case FilterOp::Operand: return operand.text();
    case FilterOp::Now: return "now()";
    case FilterOp::Not: return "!" + args[0].to_string();
    default: return "(" + args[0].to_string() + " " + op_symbol(op) + " " + args[1].to_string() + ")";
  }
}

// ---------------------------------------------------------------------------
// GraphPattern / ConstructTemplate

namespace {

void add_pattern_vars(const TriplePattern& tp, std::set<std::string>& out) {
  for (const Term* t : {&tp.subject, &tp.predicate, &tp.object}) {
    if (t->is_variable()) out.insert(t->lexical());
  }
}

}  // namespace

std::set<std::string> GraphPattern::bound_variables() const {
  std::set<std::string> out;
  for (const TriplePattern& tp : triples) add_pattern_vars(tp, out);
  return out;
}

std::set<std::string> GraphPattern::all_variables() const {
  std::set<std::string> out = bound_variables();
  for (const FilterExpr& f : filters) f.collect_variables(out);
  for (const PatternGroup& g : groups) {
    auto inner = g.body.all_variables();
    out.insert(inner.begin(), inner.end());
  }
  return out;
}

std::set<std::string> ConstructTemplate::variables() const {
  std::set<std::string> out;
  for (const TriplePattern& tp : triples) add_pattern_vars(tp, out);
  return out;
}

// ---------------------------------------------------------------------------
// Binding

const Term* Binding::get(const std::string& var) const {
  auto it = std::lower_bound(slots_.begin(), slots_.end(), var,
                             [](const auto& slot, const std::string& v) { return slot.first < v; });
  if (it != slots_.end() && it->first == var) return &it->second;
  return nullptr;
}

bool Binding::bind(const std::string& var, const Term& value) {
  auto it = std::lower_bound(slots_.begin(), slots_.end(), var,
                             [](const auto& slot, const std::string& v) { return slot.first < v; });
  if (it != slots_.end() && it->first == var) return it->second == value;
  slots_.insert(it, {var, value});
  return true;
}

std::string Binding::to_string() const {
  std::string out = "{";
  for (std::size_t i = 0; i < slots_.size(); ++i) {
    if (i) out += ' ';
    out += '?';
    out += slots_[i].first;
    out += '=';
    out += slots_[i].second.text();
  }
  out += '}';
  return out;
}

// ---------------------------------------------------------------------------
// Clock / diagnostics

void Clock::advance_to(DateTime t) {
  if (t < now_) {
    throw Error(ErrorCode::ClockRegression,
                "clock cannot move backwards from " + now_.to_string() + " to " + t.to_string());
  }
  now_ = t;
}

void DiagnosticSink::emit(std::string code, std::string message) {
  Diagnostic d{std::move(code), std::move(message)};
  if (std::find(diagnostics_.begin(), diagnostics_.end(), d) == diagnostics_.end()) {
    diagnostics_.push_back(std::move(d));
  }
}

// ---------------------------------------------------------------------------
// Filters

namespace {

bool eval_bool(const FilterExpr& e, const Binding& b, const Clock& clock, DiagnosticSink* sink);

Term eval_value(const FilterExpr& e, const Binding& b, const Clock& clock, DiagnosticSink* sink) {
  switch (e.op) {
    case FilterOp::Operand:
      if (e.operand.is_variable()) {
        const Term* v = b.get(e.operand.lexical());
        if (v == nullptr) {
          throw Error(ErrorCode::UnboundFilterVariable,
                      "filter variable " + e.operand.text() + " is unbound");
        }
        return *v;
      }
      return e.operand;
    case FilterOp::Now:
      return Term::datetime(clock.now());
    default:
      return Term::boolean(eval_bool(e, b, clock, sink));
  }
}

bool compare_ordered(FilterOp op, const Term& lhs, const Term& rhs, DiagnosticSink* sink) {
  if (lhs.kind() != rhs.kind() || lhs.is_name()) {
    if (sink != nullptr) {
      sink->emit("TYPE_MISMATCH", std::string("ordered comparison ") + lhs.text() + " " +
                                      op_symbol(op) + " " + rhs.text() + " between " +
                                      std::string(term_kind_name(lhs.kind())) + " and " +
                                      std::string(term_kind_name(rhs.kind())));
    }
    return false;
  }
  int cmp;
  if (lhs.kind() == TermKind::String) {
    cmp = lhs.lexical().compare(rhs.lexical());
  } else {
    const auto a = lhs.kind() == TermKind::DateTime ? lhs.datetime_value().seconds() : lhs.integer_value();
    const auto c = rhs.kind() == TermKind::DateTime ? rhs.datetime_value().seconds() : rhs.integer_value();
    cmp = a < c ? -1 : (a > c ? 1 : 0);
  }
  switch (op) {
    case FilterOp::Lt: return cmp < 0;
    case FilterOp::Gt: return cmp > 0;
    case FilterOp::Le: return cmp <= 0;
    case FilterOp::Ge: return cmp >= 0;
    default: return false;
  }
}

bool eval_bool(const FilterExpr& e, const Binding& b, const Clock& clock, DiagnosticSink* sink) {
  switch (e.op) {
    case FilterOp::And:
      return eval_bool(e.args[0], b, clock, sink) && eval_bool(e.args[1], b, clock, sink);
    case FilterOp::Or:
      return eval_bool(e.args[0], b, clock, sink) || eval_bool(e.args[1], b, clock, sink);
    case FilterOp::Not:
      return !eval_bool(e.args[0], b, clock, sink);
    case FilterOp::Eq:
    case FilterOp::Ne: {
      const Term lhs = eval_value(e.args[0], b, clock, sink);
      const Term rhs = eval_value(e.args[1], b, clock, sink);
      return (lhs == rhs) == (e.op == FilterOp::Eq);
    }
    case FilterOp::Lt:
    case FilterOp::Gt:
    case FilterOp::Le:
    case FilterOp::Ge:
      return compare_ordered(e.op, eval_value(e.args[0], b, clock, sink),
                             eval_value(e.args[1], b, clock, sink), sink);
    case FilterOp::Operand:
    case FilterOp::Now: {
      const Term v = eval_value(e, b, clock, sink);
      if (v.kind() == TermKind::Boolean) return v.boolean_value();
      if (sink != nullptr) sink->emit("TYPE_MISMATCH", "non-boolean filter value " + v.text());
      return false;
    }
  }
  return false;
}

}  // namespace

bool eval_filter(const FilterExpr& expr, const Binding& b, const Clock& clock, DiagnosticSink* sink) {
  return eval_bool(expr, b, clock, sink);
}

// ---------------------------------------------------------------------------
// Matching

void check_pattern_variables(const GraphPattern& pattern, const std::set<std::string>& outer) {
  std::set<std::string> scope = outer;
  const auto own = pattern.bound_variables();
  scope.insert(own.begin(), own.end());
  for (const FilterExpr& f : pattern.filters) {
    std::set<std::string> vars;
    f.collect_variables(vars);
    for (const std::string& v : vars) {
      if (!scope.count(v)) {
        throw Error(ErrorCode::UnboundFilterVariable,
                    "filter " + f.to_string() + " references ?" + v + ", which no triple pattern binds");
      }
    }
  }
  for (const PatternGroup& g : pattern.groups) check_pattern_variables(g.body, scope);
}

bool instantiate(const TriplePattern& tp, const Binding& b, Triple& out) {
  auto resolve = [&](const Term& t, Term& dst) {
    if (!t.is_variable()) {
      dst = t;
      return true;
    }
    const Term* v = b.get(t.lexical());
    if (v == nullptr) return false;
    dst = *v;
    return true;
  };
  if (!resolve(tp.subject, out.subject) || !resolve(tp.predicate, out.predicate) ||
      !resolve(tp.object, out.object)) {
    return false;
  }
  return out.subject.is_name() && out.predicate.is_name();
}

namespace {

/// Precomputed evaluation schedule for one pattern under one set of
/// pre-bound variables: check k runs right before triple k (k == n: at the end).
struct Schedule {
  std::vector<std::vector<const FilterExpr*>> filters;
  std::vector<std::vector<const PatternGroup*>> groups;
};

Schedule make_schedule(const GraphPattern& p, const Binding& seed) {
  const std::size_t n = p.triples.size();
  Schedule s;
  s.filters.resize(n + 1);
  s.groups.resize(n + 1);

  std::map<std::string, std::size_t> bound_at;  // var -> first step after which it is bound
  for (std::size_t i = 0; i < n; ++i) {
    std::set<std::string> vars;
    add_pattern_vars(p.triples[i], vars);
    for (const auto& v : vars) {
      if (!seed.has(v)) bound_at.emplace(v, i + 1);
    }
  }
  auto ready_step = [&](const std::set<std::string>& vars, bool strict) -> std::size_t {
    std::size_t step = 0;
    for (const auto& v : vars) {
      if (seed.has(v)) continue;
      auto it = bound_at.find(v);
      if (it == bound_at.end()) {
        if (strict) {
          throw Error(ErrorCode::UnboundFilterVariable,
                      "filter references ?" + v + ", which no triple pattern binds");
        }
        continue;  // group-local variable
      }
      step = std::max(step, it->second);
    }
    return step;
  };
  for (const FilterExpr& f : p.filters) {
    std::set<std::string> vars;
    f.collect_variables(vars);
    s.filters[ready_step(vars, true)].push_back(&f);
  }
  for (const PatternGroup& g : p.groups) {
    s.groups[ready_step(g.body.all_variables(), false)].push_back(&g);
  }
  return s;
}

class Matcher {
 public:
  Matcher(const TripleStore& store, const Clock& clock, DiagnosticSink* sink)
      : store_(store), clock_(clock), sink_(sink) {}

  /// Calls `emit` for each solution; stops early when it returns false.
  /// Returns false if stopped early.
  bool solve(const GraphPattern& p, const Binding& seed,
             const std::function<bool(const Binding&)>& emit) {
    const Schedule schedule = make_schedule(p, seed);
    Binding b = seed;
    return step(p, schedule, 0, b, emit);
  }

  bool exists(const GraphPattern& p, const Binding& seed) {
    bool found = false;
    solve(p, seed, [&](const Binding&) {
      found = true;
      return false;
    });
    return found;
  }

 private:
  bool checks_pass(const Schedule& s, std::size_t k, const Binding& b) {
    for (const FilterExpr* f : s.filters[k]) {
      if (!eval_bool(*f, b, clock_, sink_)) return false;
    }
    for (const PatternGroup* g : s.groups[k]) {
      if (exists(g->body, b) == g->negated) return false;
    }
    return true;
  }

  bool step(const GraphPattern& p, const Schedule& s, std::size_t k, Binding& b,
            const std::function<bool(const Binding&)>& emit) {
    if (!checks_pass(s, k, b)) return true;
    if (k == p.triples.size()) return emit(b);

    const TriplePattern& tp = p.triples[k];
    auto resolve = [&](const Term& t) -> const Term* {
      if (!t.is_variable()) return &t;
      return b.get(t.lexical());
    };
    const Term* sub = resolve(tp.subject);
    const Term* pred = resolve(tp.predicate);
    const Term* obj = resolve(tp.object);
    // Copies guard against the binding's storage moving while we iterate.
    const std::optional<Term> s_key = sub ? std::optional<Term>(*sub) : std::nullopt;
    const std::optional<Term> p_key = pred ? std::optional<Term>(*pred) : std::nullopt;
    const std::optional<Term> o_key = obj ? std::optional<Term>(*obj) : std::nullopt;

    std::vector<Triple> candidates;
    store_.for_each_match(s_key ? &*s_key : nullptr, p_key ? &*p_key : nullptr,
                          o_key ? &*o_key : nullptr,
                          [&](const Triple& t) { candidates.push_back(t); });
    for (const Triple& t : candidates) {
      Binding next = b;
      if (tp.subject.is_variable() && !next.bind(tp.subject.lexical(), t.subject)) continue;
      if (tp.predicate.is_variable() && !next.bind(tp.predicate.lexical(), t.predicate)) continue;
      if (tp.object.is_variable() && !next.bind(tp.object.lexical(), t.object)) continue;
      if (!step(p, s, k + 1, next, emit)) return false;
    }
    return true;
  }

  const TripleStore& store_;
  const Clock& clock_;
  DiagnosticSink* sink_;
};

}  // namespace

BindingSet match(const TripleStore& store, const GraphPattern& pattern, const Binding& seed,
                 const Clock& clock, DiagnosticSink* sink) {
  std::set<std::string> outer;
  for (const auto& slot : seed.slots()) outer.insert(slot.first);
  check_pattern_variables(pattern, outer);

  std::vector<std::pair<std::string, Binding>> keyed;
  Matcher m(store, clock, sink);
  m.solve(pattern, seed, [&](const Binding& b) {
    keyed.emplace_back(b.to_string(), b);
    return true;
  });
  std::sort(keyed.begin(), keyed.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  keyed.erase(std::unique(keyed.begin(), keyed.end(),
                          [](const auto& a, const auto& b) { return a.first == b.first; }),
              keyed.end());
  BindingSet out;
  out.reserve(keyed.size());
  for (auto& kv : keyed) out.push_back(std::move(kv.second));
  return out;
}

bool eval_ask(const TripleStore& store, const GraphPattern& pattern, const Binding& seed,
              const Clock& clock, DiagnosticSink* sink) {
  std::set<std::string> outer;
  for (const auto& slot : seed.slots()) outer.insert(slot.first);
  check_pattern_variables(pattern, outer);
  Matcher m(store, clock, sink);
  return m.exists(pattern, seed);
}

std::vector<Triple> eval_construct(const TripleStore& store, const ConstructTemplate& tmpl,
                                   const GraphPattern& where, const Clock& clock,
                                   const Binding& seed, DiagnosticSink* sink) {
  std::set<std::string> available = where.bound_variables();
  for (const auto& slot : seed.slots()) available.insert(slot.first);
  for (const std::string& v : tmpl.variables()) {
    if (!available.count(v)) {
      throw Error(ErrorCode::UnboundTemplateVariable,
                  "template variable ?" + v + " is not bound by the WHERE pattern");
    }
  }
  std::set<Triple> out;
  for (const Binding& b : match(store, where, seed, clock, sink)) {
    for (const TriplePattern& tp : tmpl.triples) {
      Triple t;
      if (instantiate(tp, b, t) && !t.object.is_variable()) out.insert(t);
    }
  }
  return {out.begin(), out.end()};
}

}  // namespace cwp
