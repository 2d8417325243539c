#ifndef CWP_MODEL_HPP
#define CWP_MODEL_HPP

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cwp/error.hpp"
#include "cwp/rules.hpp"
#include "cwp/schema.hpp"
#include "cwp/statechart.hpp"
#include "cwp/triple_store.hpp"

namespace cwp {

struct PrefixDecl {
  std::string prefix;
  std::string iri;
  friend bool operator==(const PrefixDecl&, const PrefixDecl&) = default;
};

/// Everything one model file declares.
struct WorkModel {
  std::vector<PrefixDecl> prefixes;
  std::string default_prefix;
  UmlClassModel classes;
  std::vector<AskConstraint> constraints;
  std::vector<Constructor> constructors;
  std::vector<TransitionRule> rules;
  std::vector<StateMachineDecl> machines;
  PropertyMutability mutability;
  TranslationOptions options;

  bool has_prefix(std::string_view p) const;
  friend bool operator==(const WorkModel&, const WorkModel&) = default;
};

/// A positioned syntax or semantic error.
class SyntaxError : public Error {
 public:
  SyntaxError(int line, int column, const std::string& message, ErrorCode code = ErrorCode::SyntaxError)
      : Error(code, std::to_string(line) + ":" + std::to_string(column) + ": " + message),
        line_(line),
        column_(column) {}
  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  int line_;
  int column_;
};

/// Parses the modeling language. Throws SyntaxError (with the ErrorCode of
/// semantic failures such as UnboundFilterVariable where applicable).
WorkModel parse_model(std::string_view text);

/// Canonical text; parse_model(print_model(m)) == m.
std::string print_model(const WorkModel& model);

/// Triple text (`s p o .` per line). Names must carry a prefix.
TripleStore parse_triples(std::string_view text);

/// Resolve a bare or prefixed name against the model's prefix table.
Term resolve_name(const WorkModel& model, std::string_view text);

}  // namespace cwp

#endif  // CWP_MODEL_HPP
