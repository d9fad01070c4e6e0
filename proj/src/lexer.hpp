#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "evflow/lang.hpp"

namespace evflow::lang::detail {

enum class Tok {
  Ident,
  Int,
  Str,
  KwVar,
  KwIf,
  KwElse,
  KwWhile,
  KwPrint,
  KwReturn,
  KwFunction,
  KwTrue,
  KwFalse,
  LParen,
  RParen,
  LBrace,
  RBrace,
  Comma,
  Semi,
  Assign,
  Plus,
  Minus,
  Star,
  Slash,
  Percent,
  EqEq,
  NotEq,
  Lt,
  Le,
  Gt,
  Ge,
  AndAnd,
  OrOr,
  Bang,
  End
};

struct Token {
  Tok kind = Tok::End;
  std::string text;
  std::int64_t value = 0;
  SourceLoc loc;
};

const char* tok_name(Tok t);

/// Throws SyntaxError on malformed input.
std::vector<Token> lex(std::string_view src, std::uint32_t file_index,
                       const std::string& file_name);

}  // namespace evflow::lang::detail
