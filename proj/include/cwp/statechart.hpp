#ifndef CWP_STATECHART_HPP
#define CWP_STATECHART_HPP

#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "cwp/pattern.hpp"
#include "cwp/rules.hpp"
#include "cwp/schema.hpp"

namespace cwp {

struct DeclaredTransition {
  std::string id;
  std::string source;
  std::string target;
  std::vector<Term> types;  // empty: every variant

  friend bool operator==(const DeclaredTransition&, const DeclaredTransition&) = default;
};

struct StateMachineDecl {
  std::string name;
  Term subject_class;
  Term state_property;
  std::vector<Term> variants;  // concrete types analysed separately
  std::map<Term, std::vector<std::string>> excludes;  // states a variant should never reach
  std::vector<std::string> states;
  std::string initial;
  std::set<std::string> finals;
  std::vector<DeclaredTransition> transitions;

  bool has_state(const std::string& s) const;
  friend bool operator==(const StateMachineDecl&, const StateMachineDecl&) = default;
};

enum class Mutability { Immutable, Environment, RuleOwned };

std::string_view mutability_name(Mutability m);

/// One point of a property's bounded test domain.
struct DomainValue {
  enum class Kind { Absent, Value, Past, Future };
  Kind kind = Kind::Absent;
  Term value;

  static DomainValue absent() { return {Kind::Absent, Term()}; }
  static DomainValue of(Term t) { return {Kind::Value, std::move(t)}; }
  static DomainValue past() { return {Kind::Past, Term()}; }
  static DomainValue future() { return {Kind::Future, Term()}; }

  /// Ground value at `clock`, or nullopt for Absent.
  std::optional<Term> resolve(DateTime clock) const;
  std::string to_string() const;
  friend bool operator==(const DomainValue&, const DomainValue&) = default;
};

struct PropertyMutability {
  std::map<Term, Mutability> kinds;
  /// Declared test domains; properties without one get a derived domain.
  std::map<Term, std::vector<DomainValue>> domains;

  friend bool operator==(const PropertyMutability&, const PropertyMutability&) = default;
};

struct StateEdge {
  std::string rule_id;
  std::string source;
  std::string target;
  friend bool operator==(const StateEdge&, const StateEdge&) = default;
  friend auto operator<=>(const StateEdge&, const StateEdge&) = default;
};

struct StateGraph {
  std::vector<std::string> nodes;
  std::map<Term, std::vector<StateEdge>> edges;  // per variant, sorted
};

/// What one rule says about the tracked object's state.
struct RuleTransition {
  std::string rule_id;
  std::string source;
  std::string target;
  std::vector<Term> guards;  // `?o a X` classes; empty: unrestricted
  std::string tracked_var;
};

/// Throws MalformedRule unless DELETE and INSERT each hold exactly one
/// state triple, about the same subject.
RuleTransition rule_transition(const TransitionRule& rule, const StateMachineDecl& decl);

/// T3' -> T3
std::string base_transition_id(const std::string& rule_id);

StateGraph extract_state_graph(std::span<const TransitionRule> rules, const StateMachineDecl& decl,
                               const SemanticSchema& schema);

struct Reachability {
  Term type;
  std::vector<std::string> reachable;
  std::vector<std::string> unreachable;
};

std::vector<Reachability> check_reachability(const StateGraph& graph, const StateMachineDecl& decl);

struct CoverageGap {
  Term type;
  std::string state;
  std::string valuation;  // `needsAppointment=false`
};

struct DeadlockReport {
  /// type -> states stuck under every immutable valuation
  std::map<Term, std::vector<std::string>> deadlocks;
  /// (type, state, valuation) stuck for that valuation only
  std::vector<CoverageGap> gaps;
};

/// Guard satisfiability over bounded domains. Throws UnclassifiedProperty.
DeadlockReport check_deadlock(const StateGraph& graph, const StateMachineDecl& decl,
                              std::span<const TransitionRule> rules, const SemanticSchema& schema,
                              const PropertyMutability& mutability);

/// Properties the guards of `rules` read on the tracked object, with their
/// bounded domains (declared ones first, else derived from the range).
std::map<Term, std::vector<DomainValue>> guard_domains(std::span<const TransitionRule> rules,
                                                       const StateMachineDecl& decl,
                                                       const SemanticSchema& schema,
                                                       const PropertyMutability& mutability);

/// Synthetic single-object store for guard evaluation: the object `o` typed
/// `type` in `state`, the listed property values, and a driver instance
/// linked to it the way the rules expect.
TripleStore guard_store(std::span<const TransitionRule> rules, const StateMachineDecl& decl,
                        const SemanticSchema& schema, const Term& type, const std::string& state,
                        const std::map<Term, DomainValue>& values, DateTime clock);

struct CohesionError {
  std::string code;  // UNDECLARED_PROPERTY, UNDECLARED_STATE, ...
  std::string subject;
  std::string message;
};

std::vector<CohesionError> check_cohesion(std::span<const TransitionRule> rules,
                                          const StateMachineDecl& decl, const SemanticSchema& schema,
                                          const PropertyMutability& mutability,
                                          std::span<const AskConstraint> constraints = {},
                                          std::span<const Constructor> constructors = {});

struct TypeReport {
  Term type;
  std::vector<std::string> reachable;
  std::vector<std::string> unreachable;
  std::vector<std::string> deadlocks;
  std::vector<CoverageGap> gaps;
};

struct SolvabilityReport {
  std::vector<TypeReport> types;
  std::vector<CohesionError> cohesion;
  bool solvable() const;
};

SolvabilityReport verify_machine(std::span<const TransitionRule> rules, const StateMachineDecl& decl,
                                 const SemanticSchema& schema, const PropertyMutability& mutability);

}  // namespace cwp

#endif  // CWP_STATECHART_HPP
