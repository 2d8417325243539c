#ifndef CWP_TERM_HPP
#define CWP_TERM_HPP

#include <compare>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

namespace cwp {

/// Second-precision, timezone-free timestamp (`YYYY-MM-DDThh:mm:ss`).
class DateTime {
 public:
  constexpr DateTime() = default;
  constexpr explicit DateTime(std::int64_t seconds) : seconds_(seconds) {}

  static std::optional<DateTime> parse(std::string_view text);
  static DateTime from_civil(int year, unsigned month, unsigned day,
                             unsigned hour = 0, unsigned minute = 0,
                             unsigned second = 0);

  std::int64_t seconds() const noexcept { return seconds_; }
  std::string to_string() const;

  DateTime plus_seconds(std::int64_t delta) const {
    return DateTime(seconds_ + delta);
  }

  friend constexpr auto operator<=>(DateTime, DateTime) = default;

 private:
  std::int64_t seconds_ = 0;
};

enum class TermKind : std::uint8_t {
  Name,
  String,
  Integer,
  Boolean,
  DateTime,
  Variable,
};

std::string_view term_kind_name(TermKind kind);

/// An immutable term. Copies share one representation.
///
/// Names are stored in their prefixed form (`casemanager:Order`); the prefix
/// table is global to a model, so byte equality of the prefixed form is
/// identity. The canonical text is injective across kinds, which gives the
/// total order used everywhere for deterministic output.
class Term {
 public:
  Term();

  static Term name(std::string qname);
  static Term string(std::string value);
  static Term integer(std::int64_t value);
  static Term boolean(bool value);
  static Term datetime(DateTime value);
  /// `id` without the leading '?'.
  static Term variable(std::string id);

  TermKind kind() const noexcept { return rep_->kind; }
  bool is_name() const noexcept { return kind() == TermKind::Name; }
  bool is_variable() const noexcept { return kind() == TermKind::Variable; }
  bool is_literal() const noexcept { return !is_name() && !is_variable(); }

  /// Canonical text as written in the triple format.
  const std::string& text() const noexcept { return rep_->canonical; }
  /// Name: prefixed form; String: raw value; Variable: id without '?'.
  const std::string& lexical() const noexcept { return rep_->lexical; }

  std::int64_t integer_value() const noexcept { return rep_->number; }
  bool boolean_value() const noexcept { return rep_->number != 0; }
  DateTime datetime_value() const noexcept { return DateTime(rep_->number); }

  std::string_view prefix() const;
  std::string_view local_name() const;

  friend bool operator==(const Term& a, const Term& b) noexcept {
    return a.rep_ == b.rep_ || a.rep_->canonical == b.rep_->canonical;
  }
  friend std::strong_ordering operator<=>(const Term& a, const Term& b) noexcept {
    if (a.rep_ == b.rep_) return std::strong_ordering::equal;
    return a.rep_->canonical.compare(b.rep_->canonical) <=> 0;
  }

 private:
  struct Rep {
    TermKind kind;
    std::string canonical;
    std::string lexical;
    std::int64_t number = 0;
  };
  explicit Term(std::shared_ptr<const Rep> rep) : rep_(std::move(rep)) {}

  std::shared_ptr<const Rep> rep_;
};

/// Escape a raw string as a quoted literal body (without the quotes).
std::string escape_string(std::string_view raw);

/// The distinguished type predicate the `a` keyword abbreviates.
const Term& rdf_type();

struct TermHash {
  std::size_t operator()(const Term& t) const noexcept {
    return std::hash<std::string>{}(t.text());
  }
};

}  // namespace cwp

#endif  // CWP_TERM_HPP
