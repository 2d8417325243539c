#ifndef CWP_ERROR_HPP
#define CWP_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace cwp {

enum class ErrorCode {
  VariableInData,
  ParseError,
  UnboundFilterVariable,
  UnboundTemplateVariable,
  UnknownClass,
  DoubleConstruction,
  UnknownDatatype,
  DuplicateProperty,
  EmptyPartition,
  SubPartitionNotAllowed,
  MalformedRule,
  UnclassifiedProperty,
  UnknownObject,
  ClockRegression,
  SyntaxError,
  SemanticError,
  InvalidArgument,
  IoError,
};

std::string_view error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace cwp

#endif  // CWP_ERROR_HPP
