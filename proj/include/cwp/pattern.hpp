#ifndef CWP_PATTERN_HPP
#define CWP_PATTERN_HPP

#include <set>
#include <string>
#include <utility>
#include <vector>

#include "cwp/term.hpp"
#include "cwp/triple_store.hpp"

namespace cwp {

/// A triple whose positions may hold variables.
struct TriplePattern {
  Term subject;
  Term predicate;
  Term object;

  std::string to_string() const;
  friend bool operator==(const TriplePattern&, const TriplePattern&) = default;
};

enum class FilterOp {
  Eq,
  Ne,
  Lt,
  Gt,
  Le,
  Ge,
  And,
  Or,
  Not,
  Operand,  // a term or variable
  Now,      // now()
};

struct FilterExpr {
  FilterOp op = FilterOp::Operand;
  Term operand;
  std::vector<FilterExpr> args;

  static FilterExpr term(Term t) { return FilterExpr{FilterOp::Operand, std::move(t), {}}; }
  static FilterExpr now() { return FilterExpr{FilterOp::Now, Term(), {}}; }
  static FilterExpr binary(FilterOp op, FilterExpr lhs, FilterExpr rhs) {
    return FilterExpr{op, Term(), {std::move(lhs), std::move(rhs)}};
  }
  static FilterExpr negate(FilterExpr inner) {
    return FilterExpr{FilterOp::Not, Term(), {std::move(inner)}};
  }

  void collect_variables(std::set<std::string>& out) const;
  bool uses_now() const;
  std::string to_string() const;

  friend bool operator==(const FilterExpr&, const FilterExpr&) = default;
};

struct PatternGroup;

/// A basic graph pattern with filters and EXISTS / NOT EXISTS groups.
struct GraphPattern {
  std::vector<TriplePattern> triples;
  std::vector<FilterExpr> filters;
  std::vector<PatternGroup> groups;

  bool empty() const { return triples.empty() && filters.empty() && groups.empty(); }
  /// Variables bound by this pattern's own triple patterns (not groups).
  std::set<std::string> bound_variables() const;
  /// Every variable mentioned anywhere, including nested groups.
  std::set<std::string> all_variables() const;

  friend bool operator==(const GraphPattern&, const GraphPattern&);
};

struct PatternGroup {
  bool negated = false;  // NOT EXISTS
  GraphPattern body;

  friend bool operator==(const PatternGroup&, const PatternGroup&) = default;
};

inline bool operator==(const GraphPattern& a, const GraphPattern& b) {
  return a.triples == b.triples && a.filters == b.filters && a.groups == b.groups;
}

/// Triples to instantiate per binding.
struct ConstructTemplate {
  std::vector<TriplePattern> triples;

  std::set<std::string> variables() const;
  friend bool operator==(const ConstructTemplate&, const ConstructTemplate&) = default;
};

/// Partial map variable -> ground term, kept sorted by variable id.
class Binding {
 public:
  Binding() = default;

  const Term* get(const std::string& var) const;
  bool has(const std::string& var) const { return get(var) != nullptr; }
  /// Returns false if `var` is already bound to a different term.
  bool bind(const std::string& var, const Term& value);
  std::size_t size() const { return slots_.size(); }
  const std::vector<std::pair<std::string, Term>>& slots() const { return slots_; }

  /// `{?a=x ?b=y}`
  std::string to_string() const;

  friend bool operator==(const Binding&, const Binding&) = default;

 private:
  std::vector<std::pair<std::string, Term>> slots_;
};

using BindingSet = std::vector<Binding>;

/// Externally settable, monotone clock backing `now()`.
class Clock {
 public:
  Clock() = default;
  explicit Clock(DateTime now) : now_(now) {}

  DateTime now() const { return now_; }
  /// Throws ClockRegression when moving backwards.
  void advance_to(DateTime t);

 private:
  DateTime now_;
};

struct Diagnostic {
  std::string code;
  std::string message;
  friend bool operator==(const Diagnostic&, const Diagnostic&) = default;
};

/// Collects non-fatal evaluation diagnostics (e.g. TypeMismatch).
class DiagnosticSink {
 public:
  void emit(std::string code, std::string message);
  const std::vector<Diagnostic>& diagnostics() const { return diagnostics_; }

 private:
  std::vector<Diagnostic> diagnostics_;
};

/// All extensions of `seed` satisfying `pattern`, sorted by canonical text.
BindingSet match(const TripleStore& store, const GraphPattern& pattern, const Binding& seed,
                 const Clock& clock, DiagnosticSink* sink = nullptr);

bool eval_filter(const FilterExpr& expr, const Binding& b, const Clock& clock,
                 DiagnosticSink* sink = nullptr);

bool eval_ask(const TripleStore& store, const GraphPattern& pattern, const Binding& seed,
              const Clock& clock, DiagnosticSink* sink = nullptr);

/// Ground triples from instantiating `tmpl` under every WHERE binding.
/// Result is sorted and duplicate-free; the store is not touched.
std::vector<Triple> eval_construct(const TripleStore& store, const ConstructTemplate& tmpl,
                                   const GraphPattern& where, const Clock& clock,
                                   const Binding& seed = {}, DiagnosticSink* sink = nullptr);

/// Throws UnboundFilterVariable if a filter (at any depth) uses a variable
/// that neither `outer` nor an enclosing triple pattern can bind.
void check_pattern_variables(const GraphPattern& pattern, const std::set<std::string>& outer);

/// Instantiate one pattern triple; false if a variable is unbound or the
/// result is not a storable triple.
bool instantiate(const TriplePattern& tp, const Binding& b, Triple& out);

}  // namespace cwp

#endif  // CWP_PATTERN_HPP
