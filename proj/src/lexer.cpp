#include "lexer.hpp"

#include <cctype>

#include "cwp/model.hpp"

namespace cwp::detail {

namespace {

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
}

bool looks_like_datetime(std::string_view s) {
  static constexpr std::string_view shape = "dddd-dd-ddTdd:dd:dd";
  if (s.size() < shape.size()) return false;
  for (std::size_t k = 0; k < shape.size(); ++k) {
    const bool digit = std::isdigit(static_cast<unsigned char>(s[k])) != 0;
    if (shape[k] == 'd' ? !digit : s[k] != shape[k]) return false;
  }
  return true;
}

}  // namespace

std::vector<Token> tokenize(std::string_view src) {
  std::vector<Token> out;
  std::size_t i = 0;
  int line = 1;
  std::size_t line_start = 0;
  bool fresh_line = true;
  auto col = [&](std::size_t at) { return static_cast<int>(at - line_start) + 1; };
  auto error = [&](std::size_t at, const std::string& msg) -> SyntaxError {
    return SyntaxError(line, col(at), msg);
  };

  while (i < src.size()) {
    const char c = src[i];
    if (c == '\n') {
      ++i;
      ++line;
      line_start = i;
      fresh_line = true;
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (c == '#') {
      while (i < src.size() && src[i] != '\n') ++i;
      continue;
    }
    Token t;
    t.line = line;
    t.column = col(i);
    t.newline_before = fresh_line;
    fresh_line = false;
    const std::size_t start = i;

    if (c == '"') {
      t.kind = Tok::String;
      ++i;
      for (;;) {
        if (i >= src.size() || src[i] == '\n') throw error(start, "unterminated string literal");
        const char d = src[i++];
        if (d == '"') break;
        if (d != '\\') {
          t.text += d;
          continue;
        }
        if (i >= src.size()) throw error(start, "unterminated string literal");
        const char e = src[i++];
        switch (e) {
          case 'n': t.text += '\n'; break;
          case 't': t.text += '\t'; break;
          case 'r': t.text += '\r'; break;
          case '"': t.text += '"'; break;
          case '\\': t.text += '\\'; break;
          default: throw error(i - 2, std::string("unknown escape \\") + e);
        }
      }
    } else if (c == '?') {
      ++i;
      if (i >= src.size() || !ident_start(src[i])) throw error(start, "expected variable name after '?'");
      while (i < src.size() && (std::isalnum(static_cast<unsigned char>(src[i])) || src[i] == '_')) ++i;
      t.kind = Tok::Variable;
      t.text = std::string(src.substr(start + 1, i - start - 1));
    } else if (looks_like_datetime(src.substr(i))) {
      t.kind = Tok::DateTime;
      t.text = std::string(src.substr(i, 19));
      i += 19;
    } else if (std::isdigit(static_cast<unsigned char>(c)) ||
               (c == '-' && i + 1 < src.size() && std::isdigit(static_cast<unsigned char>(src[i + 1])))) {
      ++i;
      while (i < src.size() && std::isdigit(static_cast<unsigned char>(src[i]))) ++i;
      t.kind = Tok::Integer;
      t.text = std::string(src.substr(start, i - start));
    } else if (ident_start(c)) {
      auto scan_word = [&] {
        while (i < src.size() && ident_char(src[i])) {
          if (src[i] == '-' && i + 1 < src.size() && src[i + 1] == '>') break;
          ++i;
        }
      };
      scan_word();
      if (i + 1 < src.size() && src[i] == ':' &&
          (ident_start(src[i + 1]) || std::isdigit(static_cast<unsigned char>(src[i + 1])))) {
        ++i;
        scan_word();
      }
      while (i < src.size() && src[i] == '\'') ++i;
      t.kind = Tok::Ident;
      t.text = std::string(src.substr(start, i - start));
    } else if (c == '<' && i + 1 < src.size() && std::isalpha(static_cast<unsigned char>(src[i + 1]))) {
      std::size_t j = i + 1;
      while (j < src.size() && src[j] != '>' && !std::isspace(static_cast<unsigned char>(src[j]))) ++j;
      if (j < src.size() && src[j] == '>') {
        t.kind = Tok::Iri;
        t.text = std::string(src.substr(i + 1, j - i - 1));
        i = j + 1;
      } else {
        t.kind = Tok::Punct;
        t.text = "<";
        ++i;
      }
    } else {
      static const char* const two[] = {"->", "..", "!=", "<=", ">=", "&&", "||", "^^"};
      t.kind = Tok::Punct;
      for (const char* p : two) {
        if (src.substr(i, 2) == p) {
          t.text = p;
          break;
        }
      }
      if (t.text.empty()) {
        static const std::string_view one = "{}()[];.,:=<>!*";
        if (one.find(c) == std::string_view::npos) {
          throw error(i, std::string("unexpected character '") + c + "'");
        }
        t.text = std::string(1, c);
      }
      i += t.text.size();
    }
    out.push_back(std::move(t));
  }
  Token end;
  end.kind = Tok::End;
  end.line = line;
  end.column = col(i);
  end.newline_before = true;
  out.push_back(end);
  return out;
}

std::string describe(const Token& t) {
  switch (t.kind) {
    case Tok::End: return "end of input";
    case Tok::String: return "string \"" + t.text + "\"";
    case Tok::Variable: return "variable ?" + t.text;
    case Tok::Iri: return "<" + t.text + ">";
    case Tok::DateTime: return "dateTime " + t.text;
    default: return "'" + t.text + "'";
  }
}

const Token& TokenStream::peek(std::size_t ahead) const {
  const std::size_t at = pos_ + ahead;
  return at < toks_.size() ? toks_[at] : toks_.back();
}

const Token& TokenStream::next() {
  const Token& t = peek();
  if (pos_ < toks_.size() - 1) ++pos_;
  return t;
}

bool TokenStream::is(Tok kind, std::string_view text) const {
  const Token& t = peek();
  return t.kind == kind && (text.empty() || t.text == text);
}

bool TokenStream::accept_punct(std::string_view p) {
  if (!is_punct(p)) return false;
  next();
  return true;
}

bool TokenStream::accept_word(std::string_view w) {
  if (!is_word(w)) return false;
  next();
  return true;
}

const Token& TokenStream::expect(Tok kind, std::string_view what) {
  if (peek().kind != kind) fail("expected " + std::string(what) + ", found " + describe(peek()));
  return next();
}

void TokenStream::expect_punct(std::string_view p) {
  if (!accept_punct(p)) fail("expected '" + std::string(p) + "', found " + describe(peek()));
}

void TokenStream::expect_word(std::string_view w) {
  if (!accept_word(w)) fail("expected '" + std::string(w) + "', found " + describe(peek()));
}

void TokenStream::fail(const Token& at, const std::string& message) const {
  throw SyntaxError(at.line, at.column, message);
}

}  // namespace cwp::detail
