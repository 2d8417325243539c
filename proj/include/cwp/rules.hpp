#ifndef CWP_RULES_HPP
#define CWP_RULES_HPP

#include <set>
#include <span>
#include <string>
#include <vector>

#include "cwp/pattern.hpp"
#include "cwp/triple_store.hpp"

namespace cwp {

struct SemanticSchema;

/// A counterexample query attached to a class: ASK = true is a violation.
struct AskConstraint {
  std::string id;
  Term attached_class;
  std::string message;
  GraphPattern body;  // ?this is pre-bound to each instance

  friend bool operator==(const AskConstraint&, const AskConstraint&) = default;
};

/// Initialises instances of `attached_class` once, at creation.
struct Constructor {
  Term attached_class;
  ConstructTemplate tmpl;
  GraphPattern where;

  friend bool operator==(const Constructor&, const Constructor&) = default;
};

/// DELETE { .. } INSERT { .. } WHERE { .. }, evaluated with ?this bound to
/// each instance of `attached_class`.
///
/// A variable that occurs only in the DELETE template is a wildcard: it
/// deletes every stored triple the partially bound template matches.
struct TransitionRule {
  std::string id;
  Term attached_class;
  ConstructTemplate del;
  ConstructTemplate ins;
  GraphPattern where;

  friend bool operator==(const TransitionRule&, const TransitionRule&) = default;
};

struct Firing {
  int iteration = 0;
  std::string rule_id;
  Binding binding;
  std::vector<Triple> deleted;   // triples actually removed
  std::vector<Triple> inserted;  // triples actually added
};

enum class RunStatus { FixedPoint, IterationCapHit, CycleDetected };

std::string_view run_status_name(RunStatus s);

/// Effective firings of one engine run. Replaying the deltas in order
/// against the initial store reproduces the final store.
struct FireTrace {
  std::vector<Firing> firings;
  RunStatus status = RunStatus::FixedPoint;
  int passes = 0;
  /// Rule evaluations actually performed (incremental skips excluded).
  std::size_t evaluations = 0;
};

struct Violation {
  std::string constraint_id;
  Term instance;
  std::string message;
  Binding witness;
};

/// One violation per (constraint, instance) whose ASK holds. The store must
/// already carry subtype closure. Throws UnknownClass.
std::vector<Violation> check_constraints(const TripleStore& store,
                                         std::span<const AskConstraint> constraints,
                                         const SemanticSchema& schema, const Clock& clock,
                                         DiagnosticSink* sink = nullptr);

/// Instances whose constructors have already run.
class ConstructionLedger {
 public:
  bool constructed(const Term& instance) const { return done_.count(instance) != 0; }
  void mark(const Term& instance) { done_.insert(instance); }
  /// Marks every typed subject in `store` (pre-populated data).
  void mark_all(const TripleStore& store);

 private:
  std::set<Term> done_;
};

/// Fires every constructor whose attached class `instance` belongs to and
/// inserts the results. Throws DoubleConstruction on a second call.
std::vector<Triple> run_constructors(TripleStore& store, const Term& instance,
                                     std::span<const Constructor> constructors,
                                     const Clock& clock, ConstructionLedger& ledger);

struct RuleApplication {
  bool changed = false;
  std::vector<Firing> firings;  // effective firings only
  std::size_t bindings = 0;
};

/// Bindings are computed against the entry snapshot, then applied in
/// binding order (delete first, then insert).
RuleApplication apply_rule_once(TripleStore& store, const TransitionRule& rule,
                                const Clock& clock);

inline constexpr int kDefaultMaxIterations = 10000;

/// Naive engine: full passes in declaration order until a pass changes
/// nothing, the pass cap is hit, or a store digest recurs.
FireTrace run_to_fixpoint(TripleStore& store, std::span<const TransitionRule> rules,
                          const Clock& clock, int max_iterations = kDefaultMaxIterations);

/// Same result as run_to_fixpoint, but after the first pass a rule is only
/// re-evaluated when a predicate (or predicate/constant-object pair) it
/// reads changed since its last evaluation, or when it had bindings and a
/// predicate its templates write changed.
FireTrace run_incremental(TripleStore& store, std::span<const TransitionRule> rules,
                          const Clock& clock, int max_iterations = kDefaultMaxIterations);

/// Apply a trace's deltas to `store` in order.
void replay(TripleStore& store, const FireTrace& trace);

}  // namespace cwp

#endif  // CWP_RULES_HPP
