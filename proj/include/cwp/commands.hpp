#ifndef CWP_COMMANDS_HPP
#define CWP_COMMANDS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "cwp/model.hpp"
#include "cwp/report.hpp"
#include "cwp/scenario.hpp"

namespace cwp {

/// A report plus the artifact a command produces (canonical model,
/// axioms, trace, triples).
struct CommandOutput {
  Report report;
  std::string text;
};

/// Model-level lints: TEMPORAL_GUARD, SIMILAR_PROPERTIES, UNUSED_PROPERTY.
std::vector<Finding> lint_model(const WorkModel& model);

/// Canonical model text; no findings beyond the lints.
CommandOutput cmd_parse(const WorkModel& model);

/// Structural checks, constraints and cohesion over one population.
Report cmd_check(const WorkModel& model, const TripleStore& data, DateTime clock = kDefaultClock);

CommandOutput cmd_translate(const WorkModel& model, const TranslationOptions& options);

struct SimulateOptions {
  SimulationOptions simulation;
  int permutations = 0;  // 0: no rule-order probing
  std::uint64_t seed = 1;
};

/// `text` is the trace. Throws on UnknownObject / ClockRegression.
CommandOutput cmd_simulate(const WorkModel& model, const Scenario& scenario, const SimulateOptions& options = {});

struct VerifyOptions {
  std::vector<std::string> drop_rules;  // rule ids to leave out
  /// Scenarios probed under `permutations` random rule orders.
  std::vector<Scenario> scenarios;
  int permutations = 0;
  std::uint64_t seed = 1;
  SimulationOptions simulation;
};

/// Throws InvalidArgument for an unknown rule id in drop_rules.
Report cmd_verify(const WorkModel& model, const VerifyOptions& options = {});

/// Schema axioms as triple text.
CommandOutput cmd_export(const WorkModel& model, const TranslationOptions& options);

/// Instance data, optionally closed under the schema.
CommandOutput cmd_export(const WorkModel& model, const TripleStore& data, bool materialized);

}  // namespace cwp

#endif  // CWP_COMMANDS_HPP
