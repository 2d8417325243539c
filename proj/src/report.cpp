#include "cwp/report.hpp"

#include <algorithm>
#include <sstream>

#include "cwp/triple_store.hpp"

namespace cwp {

std::string_view severity_name(Severity s) {
  switch (s) {
    case Severity::Error: return "error";
    case Severity::Warning: return "warning";
    case Severity::Note: return "note";
  }
  return "?";
}

void Report::add(Severity s, std::string code, std::string subject, std::string message) {
  findings.push_back({s, std::move(code), std::move(subject), std::move(message)});
}

void Report::add_input(std::string name, std::string_view bytes) {
  inputs.push_back({std::move(name), fnv1a_128(bytes).to_hex()});
}

void Report::normalize() {
  std::sort(findings.begin(), findings.end());
  findings.erase(std::unique(findings.begin(), findings.end()), findings.end());
}

std::size_t Report::count(Severity s) const {
  return static_cast<std::size_t>(
      std::count_if(findings.begin(), findings.end(), [s](const Finding& f) { return f.severity == s; }));
}

namespace {

// Tabs and newlines would break the line format.
std::string flatten(std::string_view s) {
  std::string out(s);
  std::replace(out.begin(), out.end(), '\t', ' ');
  std::replace(out.begin(), out.end(), '\n', ' ');
  return out;
}

}  // namespace

std::string render(const Report& report, ReportFormat format) {
  std::ostringstream out;
  if (format == ReportFormat::Lines) {
    for (const Finding& f : report.findings) {
      out << severity_name(f.severity) << '\t' << flatten(f.code) << '\t' << flatten(f.subject) << '\t'
          << flatten(f.message) << '\n';
    }
    return out.str();
  }
  out << report.tool_version << '\n';
  for (const InputDigest& in : report.inputs) out << "input " << in.name << ' ' << in.digest << '\n';
  for (const Finding& f : report.findings) {
    out << severity_name(f.severity) << '[' << f.code << "] " << f.subject << ": " << f.message << '\n';
  }
  out << report.count(Severity::Error) << " error(s), " << report.count(Severity::Warning) << " warning(s), "
      << report.count(Severity::Note) << " note(s)\n";
  return out.str();
}

}  // namespace cwp
