#ifndef CWP_SCENARIO_HPP
#define CWP_SCENARIO_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cwp/model.hpp"
#include "cwp/rules.hpp"

namespace cwp {

struct ScenarioEvent {
  enum class Kind { At, Create, Set, Clear, Run, Expect, CheckConstraints };

  Kind kind = Kind::Run;
  int line = 0;
  DateTime time;                                  // at
  Term object;                                    // create, set, clear, expect
  Term cls;                                       // create
  std::vector<std::pair<Term, Term>> properties;  // create
  Term property;                                  // set, clear, expect
  Term value;                                     // set, expect
  std::vector<std::string> constraint_ids;        // check-constraints

  friend bool operator==(const ScenarioEvent&, const ScenarioEvent&) = default;
};

struct Scenario {
  std::string name;
  std::vector<ScenarioEvent> events;
};

/// Line-oriented scenario text; names resolve through the model's prefixes.
Scenario parse_scenario(std::string_view text, const WorkModel& model);

inline const DateTime kDefaultClock = DateTime::from_civil(2016, 1, 1);

struct SimulationOptions {
  DateTime clock = kDefaultClock;
  int max_iterations = kDefaultMaxIterations;
  /// Rule evaluation order as indexes into model.rules (default: declared).
  std::vector<std::size_t> rule_order;
};

struct ExpectationFailure {
  int line = 0;
  std::string subject;
  std::string message;
};

/// One observed change of a tracked state value.
struct StateChange {
  Term object;
  std::string rule_id;
  std::string source;
  std::string target;
};

struct SimulationTrace {
  std::string text;         // deterministic, golden-file form
  TripleStore asserted;     // facts without schema closure
  TripleStore materialized;
  std::vector<FireTrace> runs;
  std::vector<StateChange> changes;
  std::vector<ExpectationFailure> failures;
  std::vector<Term> abstract_instances;  // created directly as an abstract class
  std::vector<Diagnostic> diagnostics;

  bool all_fixed_point() const;
};

/// Throws UnknownObject, ClockRegression, DoubleConstruction.
SimulationTrace simulate(const WorkModel& model, const Scenario& scenario,
                         const SimulationOptions& options = {});

struct ConfluenceResult {
  bool converged = true;
  /// Rule orders whose outcomes differ (first divergent pair), by rule id.
  std::vector<std::string> order_a;
  std::vector<std::string> order_b;
  std::string detail;
};

/// Re-runs the scenario under seeded random rule orders. Non-FixedPoint
/// runs count as non-convergent.
ConfluenceResult probe_confluence(const WorkModel& model, const Scenario& scenario, int permutations,
                                  std::uint64_t seed = 1, const SimulationOptions& options = {});

}  // namespace cwp

#endif  // CWP_SCENARIO_HPP
