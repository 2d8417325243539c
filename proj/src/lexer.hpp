#ifndef CWP_SRC_LEXER_HPP
#define CWP_SRC_LEXER_HPP

#include <string>
#include <string_view>
#include <vector>

namespace cwp::detail {

enum class Tok {
  Ident,     // bare or prefixed name, keywords included
  Variable,  // ?x (text without '?')
  String,    // unescaped value
  Integer,
  DateTime,  // bare YYYY-MM-DDThh:mm:ss
  Iri,       // <...> (text without brackets)
  Punct,
  End,
};

struct Token {
  Tok kind = Tok::End;
  std::string text;
  int line = 1;
  int column = 1;
  bool newline_before = false;  // first token on its line
};

/// Splits source text into tokens; `#` starts a comment to end of line.
/// Throws SyntaxError on malformed input.
std::vector<Token> tokenize(std::string_view text);

/// Cursor over a token vector with positioned errors.
class TokenStream {
 public:
  explicit TokenStream(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

  const Token& peek(std::size_t ahead = 0) const;
  const Token& next();
  bool at_end() const { return peek().kind == Tok::End; }
  bool is(Tok kind, std::string_view text = {}) const;
  bool is_punct(std::string_view p) const { return is(Tok::Punct, p); }
  bool is_word(std::string_view w) const { return is(Tok::Ident, w); }
  bool accept_punct(std::string_view p);
  bool accept_word(std::string_view w);
  const Token& expect(Tok kind, std::string_view what);
  void expect_punct(std::string_view p);
  void expect_word(std::string_view w);
  [[noreturn]] void fail(const Token& at, const std::string& message) const;
  [[noreturn]] void fail(const std::string& message) const { fail(peek(), message); }

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

std::string describe(const Token& t);

}  // namespace cwp::detail

#endif  // CWP_SRC_LEXER_HPP
