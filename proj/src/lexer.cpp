#include "lexer.hpp"

#include <cctype>
#include <limits>
#include <unordered_map>

namespace evflow::lang::detail {

const char* tok_name(Tok t) {
  switch (t) {
    case Tok::Ident: return "identifier";
    case Tok::Int: return "integer";
    case Tok::Str: return "string";
    case Tok::KwVar: return "'var'";
    case Tok::KwIf: return "'if'";
    case Tok::KwElse: return "'else'";
    case Tok::KwWhile: return "'while'";
    case Tok::KwPrint: return "'print'";
    case Tok::KwReturn: return "'return'";
    case Tok::KwFunction: return "'function'";
    case Tok::KwTrue: return "'true'";
    case Tok::KwFalse: return "'false'";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::LBrace: return "'{'";
    case Tok::RBrace: return "'}'";
    case Tok::Comma: return "','";
    case Tok::Semi: return "';'";
    case Tok::Assign: return "'='";
    case Tok::Plus: return "'+'";
    case Tok::Minus: return "'-'";
    case Tok::Star: return "'*'";
    case Tok::Slash: return "'/'";
    case Tok::Percent: return "'%'";
    case Tok::EqEq: return "'=='";
    case Tok::NotEq: return "'!='";
    case Tok::Lt: return "'<'";
    case Tok::Le: return "'<='";
    case Tok::Gt: return "'>'";
    case Tok::Ge: return "'>='";
    case Tok::AndAnd: return "'&&'";
    case Tok::OrOr: return "'||'";
    case Tok::Bang: return "'!'";
    case Tok::End: return "end of input";
  }
  return "?";
}

namespace {

const std::unordered_map<std::string_view, Tok>& keywords() {
  static const std::unordered_map<std::string_view, Tok> kw = {
      {"var", Tok::KwVar},       {"if", Tok::KwIf},
      {"else", Tok::KwElse},     {"while", Tok::KwWhile},
      {"print", Tok::KwPrint},   {"return", Tok::KwReturn},
      {"function", Tok::KwFunction}, {"true", Tok::KwTrue},
      {"false", Tok::KwFalse}};
  return kw;
}

class Lexer {
 public:
  Lexer(std::string_view src, std::uint32_t file, const std::string& name)
      : src_(src), file_(file), name_(name) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space();
      Token t;
      t.loc = here();
      if (pos_ >= src_.size()) {
        t.kind = Tok::End;
        out.push_back(std::move(t));
        return out;
      }
      const char c = src_[pos_];
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        const std::size_t start = pos_;
        while (pos_ < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[pos_])) ||
                src_[pos_] == '_')) {
          advance();
        }
        t.text = std::string(src_.substr(start, pos_ - start));
        auto it = keywords().find(t.text);
        t.kind = it == keywords().end() ? Tok::Ident : it->second;
      } else if (std::isdigit(static_cast<unsigned char>(c))) {
        std::uint64_t v = 0;
        const std::size_t start = pos_;
        while (pos_ < src_.size() &&
               std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
          v = v * 10 + static_cast<std::uint64_t>(src_[pos_] - '0');
          if (v > static_cast<std::uint64_t>(
                      std::numeric_limits<std::int64_t>::max())) {
            fail(t.loc, "integer literal out of range");
          }
          advance();
        }
        if (pos_ < src_.size() &&
            (std::isalpha(static_cast<unsigned char>(src_[pos_])) ||
             src_[pos_] == '_')) {
          fail(t.loc, "malformed number");
        }
        t.kind = Tok::Int;
        t.value = static_cast<std::int64_t>(v);
        t.text = std::string(src_.substr(start, pos_ - start));
      } else if (c == '"' || c == '\'') {
        t.kind = Tok::Str;
        t.text = string_literal(c, t.loc);
      } else {
        t.kind = punct(t.loc);
      }
      out.push_back(std::move(t));
    }
  }

 private:
  SourceLoc here() const { return {file_, line_, col_}; }

  [[noreturn]] void fail(SourceLoc at, const std::string& msg) const {
    throw SyntaxError(at, name_, msg);
  }

  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  bool peek_is(char c, std::size_t ahead = 0) const {
    return pos_ + ahead < src_.size() && src_[pos_ + ahead] == c;
  }

  void skip_space() {
    while (pos_ < src_.size()) {
      const char c = src_[pos_];
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        advance();
      } else if (c == '/' && peek_is('/', 1)) {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else {
        break;
      }
    }
  }

  std::string string_literal(char quote, SourceLoc at) {
    advance();
    std::string out;
    for (;;) {
      if (pos_ >= src_.size() || src_[pos_] == '\n') {
        fail(at, "unterminated string literal");
      }
      const char c = src_[pos_];
      if (c == quote) {
        advance();
        return out;
      }
      if (c == '\\') {
        advance();
        if (pos_ >= src_.size()) fail(at, "unterminated string literal");
        const char e = src_[pos_];
        switch (e) {
          case 'n': out += '\n'; break;
          case 't': out += '\t'; break;
          case '\\': out += '\\'; break;
          case '"': out += '"'; break;
          case '\'': out += '\''; break;
          default:
            fail(here(), std::string("unknown escape '\\") + e + "'");
        }
        advance();
        continue;
      }
      out += c;
      advance();
    }
  }

  Tok punct(SourceLoc at) {
    const char c = src_[pos_];
    auto two = [&](char next, Tok yes, Tok no) {
      advance();
      if (peek_is(next)) {
        advance();
        return yes;
      }
      return no;
    };
    switch (c) {
      case '(': advance(); return Tok::LParen;
      case ')': advance(); return Tok::RParen;
      case '{': advance(); return Tok::LBrace;
      case '}': advance(); return Tok::RBrace;
      case ',': advance(); return Tok::Comma;
      case ';': advance(); return Tok::Semi;
      case '+': advance(); return Tok::Plus;
      case '-': advance(); return Tok::Minus;
      case '*': advance(); return Tok::Star;
      case '/': advance(); return Tok::Slash;
      case '%': advance(); return Tok::Percent;
      case '=': return two('=', Tok::EqEq, Tok::Assign);
      case '!': return two('=', Tok::NotEq, Tok::Bang);
      case '<': return two('=', Tok::Le, Tok::Lt);
      case '>': return two('=', Tok::Ge, Tok::Gt);
      case '&':
        if (peek_is('&', 1)) {
          advance();
          advance();
          return Tok::AndAnd;
        }
        break;
      case '|':
        if (peek_is('|', 1)) {
          advance();
          advance();
          return Tok::OrOr;
        }
        break;
      default:
        break;
    }
    fail(at, std::string("unexpected character '") + c + "'");
  }

  std::string_view src_;
  std::uint32_t file_;
  const std::string& name_;
  std::size_t pos_ = 0;
  std::uint32_t line_ = 1;
  std::uint32_t col_ = 1;
};

}  // namespace

std::vector<Token> lex(std::string_view src, std::uint32_t file_index,
                       const std::string& file_name) {
  return Lexer(src, file_index, file_name).run();
}

}  // namespace evflow::lang::detail
