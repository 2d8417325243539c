#include "cwp/term.hpp"

#include <cstdio>

#include "cwp/error.hpp"

namespace cwp {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::VariableInData: return "VariableInData";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::UnboundFilterVariable: return "UnboundFilterVariable";
    case ErrorCode::UnboundTemplateVariable: return "UnboundTemplateVariable";
    case ErrorCode::UnknownClass: return "UnknownClass";
    case ErrorCode::DoubleConstruction: return "DoubleConstruction";
    case ErrorCode::UnknownDatatype: return "UnknownDatatype";
    case ErrorCode::DuplicateProperty: return "DuplicateProperty";
    case ErrorCode::EmptyPartition: return "EmptyPartition";
    case ErrorCode::SubPartitionNotAllowed: return "SubPartitionNotAllowed";
    case ErrorCode::MalformedRule: return "MalformedRule";
    case ErrorCode::UnclassifiedProperty: return "UnclassifiedProperty";
    case ErrorCode::UnknownObject: return "UnknownObject";
    case ErrorCode::ClockRegression: return "ClockRegression";
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::SemanticError: return "SemanticError";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

namespace {

// Howard Hinnant's days_from_civil / civil_from_days.
std::int64_t days_from_civil(std::int64_t y, unsigned m, unsigned d) {
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const auto yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, std::int64_t& y, unsigned& m, unsigned& d) {
  z += 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const auto doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  y = static_cast<std::int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  d = doy - (153 * mp + 2) / 5 + 1;
  m = mp < 10 ? mp + 3 : mp - 9;
  y += m <= 2;
}

bool is_leap(std::int64_t y) { return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0; }

unsigned days_in_month(std::int64_t y, unsigned m) {
  static constexpr unsigned kDays[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  return m == 2 && is_leap(y) ? 29 : kDays[m - 1];
}

bool read_digits(std::string_view text, std::size_t pos, std::size_t count, unsigned& out) {
  out = 0;
  for (std::size_t i = 0; i < count; ++i) {
    const char c = text[pos + i];
    if (c < '0' || c > '9') return false;
    out = out * 10 + static_cast<unsigned>(c - '0');
  }
  return true;
}

}  // namespace

std::optional<DateTime> DateTime::parse(std::string_view text) {
  // YYYY-MM-DDThh:mm:ss
  if (text.size() != 19 || text[4] != '-' || text[7] != '-' || text[10] != 'T' ||
      text[13] != ':' || text[16] != ':') {
    return std::nullopt;
  }
  unsigned year, month, day, hour, minute, second;
  if (!read_digits(text, 0, 4, year) || !read_digits(text, 5, 2, month) ||
      !read_digits(text, 8, 2, day) || !read_digits(text, 11, 2, hour) ||
      !read_digits(text, 14, 2, minute) || !read_digits(text, 17, 2, second)) {
    return std::nullopt;
  }
  if (month < 1 || month > 12 || day < 1 || day > days_in_month(year, month) || hour > 23 ||
      minute > 59 || second > 59) {
    return std::nullopt;
  }
  return from_civil(static_cast<int>(year), month, day, hour, minute, second);
}

DateTime DateTime::from_civil(int year, unsigned month, unsigned day, unsigned hour,
                              unsigned minute, unsigned second) {
  const std::int64_t days = days_from_civil(year, month, day);
  return DateTime(days * 86400 + hour * 3600 + minute * 60 + second);
}

std::string DateTime::to_string() const {
  std::int64_t days = seconds_ / 86400;
  std::int64_t rem = seconds_ % 86400;
  if (rem < 0) {
    rem += 86400;
    --days;
  }
  std::int64_t y;
  unsigned m, d;
  civil_from_days(days, y, m, d);
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04lld-%02u-%02uT%02lld:%02lld:%02lld",
                static_cast<long long>(y), m, d, static_cast<long long>(rem / 3600),
                static_cast<long long>((rem / 60) % 60), static_cast<long long>(rem % 60));
  return buf;
}

std::string_view term_kind_name(TermKind kind) {
  switch (kind) {
    case TermKind::Name: return "name";
    case TermKind::String: return "string";
    case TermKind::Integer: return "integer";
    case TermKind::Boolean: return "boolean";
    case TermKind::DateTime: return "dateTime";
    case TermKind::Variable: return "variable";
  }
  return "?";
}

std::string escape_string(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  for (char c : raw) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default: out += c;
    }
  }
  return out;
}

Term::Term() {
  static const auto empty = std::make_shared<const Rep>(Rep{TermKind::Name, "", "", 0});
  rep_ = empty;
}

Term Term::name(std::string qname) {
  std::string canonical = qname;
  return Term(std::make_shared<const Rep>(Rep{TermKind::Name, std::move(canonical), std::move(qname), 0}));
}

Term Term::string(std::string value) {
  std::string canonical = "\"" + escape_string(value) + "\"";
  return Term(std::make_shared<const Rep>(Rep{TermKind::String, std::move(canonical), std::move(value), 0}));
}

Term Term::integer(std::int64_t value) {
  std::string text = std::to_string(value);
  return Term(std::make_shared<const Rep>(Rep{TermKind::Integer, text, text, value}));
}

Term Term::boolean(bool value) {
  std::string text = value ? "true" : "false";
  return Term(std::make_shared<const Rep>(Rep{TermKind::Boolean, text, text, value ? 1 : 0}));
}

Term Term::datetime(DateTime value) {
  std::string lexical = value.to_string();
  std::string canonical = "\"" + lexical + "\"^^dateTime";
  return Term(std::make_shared<const Rep>(
      Rep{TermKind::DateTime, std::move(canonical), std::move(lexical), value.seconds()}));
}

Term Term::variable(std::string id) {
  std::string canonical = "?" + id;
  return Term(std::make_shared<const Rep>(Rep{TermKind::Variable, std::move(canonical), std::move(id), 0}));
}

std::string_view Term::prefix() const {
  const std::string& s = rep_->lexical;
  const auto colon = s.find(':');
  return colon == std::string::npos ? std::string_view{} : std::string_view(s).substr(0, colon);
}

std::string_view Term::local_name() const {
  const std::string& s = rep_->lexical;
  const auto colon = s.find(':');
  return colon == std::string::npos ? std::string_view(s) : std::string_view(s).substr(colon + 1);
}

const Term& rdf_type() {
  static const Term t = Term::name("rdf:type");
  return t;
}

}  // namespace cwp
