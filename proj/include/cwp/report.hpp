#ifndef CWP_REPORT_HPP
#define CWP_REPORT_HPP

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace cwp {

enum class Severity { Error, Warning, Note };

std::string_view severity_name(Severity s);

struct Finding {
  Severity severity = Severity::Note;
  std::string code;
  std::string subject;
  std::string message;

  friend bool operator==(const Finding&, const Finding&) = default;
  friend auto operator<=>(const Finding&, const Finding&) = default;
};

inline constexpr std::string_view kToolVersion = "cwpcheck 1.0.0";

struct InputDigest {
  std::string name;
  std::string digest;  // FNV-1a 128, hex
};

struct Report {
  std::string tool_version{kToolVersion};
  std::vector<InputDigest> inputs;
  std::vector<Finding> findings;

  void add(Severity s, std::string code, std::string subject, std::string message);
  void add_input(std::string name, std::string_view bytes);
  /// Sorts findings (severity, code, subject, message) and drops duplicates.
  void normalize();
  std::size_t count(Severity s) const;
  bool has_errors() const { return count(Severity::Error) != 0; }
  /// 0 without errors, 2 with.
  int exit_code() const { return has_errors() ? 2 : 0; }
};

enum class ReportFormat { Human, Lines };

/// Human: header, one finding per line, summary. Lines: one
/// `severity\tcode\tsubject\tmessage` line per finding, nothing else.
std::string render(const Report& report, ReportFormat format);

}  // namespace cwp

#endif  // CWP_REPORT_HPP
