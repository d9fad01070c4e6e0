#pragma once

// EVL: a small event-driven language with scalar globals and locals,
// synchronous calls, and event primitives (register / emit / register_async
// plus any wrappers declared in the event model).

#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "evflow/event_model.hpp"

namespace evflow::lang {

using VarId = std::uint32_t;
using FuncId = std::uint32_t;
using StmtId = std::uint32_t;

inline constexpr VarId kNoVar = std::numeric_limits<VarId>::max();
inline constexpr FuncId kNoFunc = std::numeric_limits<FuncId>::max();
inline constexpr FuncId kTopLevel = 0;
inline constexpr std::string_view kTopLevelName = "top-level";

struct SourceLoc {
  std::uint32_t file = 0;
  std::uint32_t line = 0;
  std::uint32_t col = 0;
};

enum class BinOp { Add, Sub, Mul, Div, Mod, Eq, Ne, Lt, Le, Gt, Ge, And, Or };
enum class UnOp { Neg, Not };

struct Expr {
  enum class Kind { Int, Str, Bool, Var, FuncRef, Unary, Binary };

  Kind kind = Kind::Int;
  std::int64_t int_value = 0;
  bool bool_value = false;
  std::string text;  // string literal, variable or function name
  VarId var = kNoVar;
  BinOp bin = BinOp::Add;
  UnOp un = UnOp::Neg;
  std::vector<Expr> operands;
  SourceLoc loc;

  static Expr integer(std::int64_t v);
  static Expr string(std::string s);
  static Expr boolean(bool b);
  static Expr variable(std::string name);
  static Expr unary(UnOp op, Expr operand);
  static Expr binary(BinOp op, Expr lhs, Expr rhs);
};

/// Every resolved variable read by `e`, in first-occurrence order.
std::vector<VarId> vars_read(const Expr& e);

struct Stmt {
  enum class Kind {
    VarDecl,
    Assign,
    If,
    While,
    Call,
    Print,
    Register,
    Emit,
    RegisterAsync,
    Return
  };

  Kind kind = Kind::Print;
  StmtId id = 0;
  SourceLoc loc;

  std::string name;  // declared/assigned variable, or callee
  VarId var = kNoVar;
  std::optional<Expr> expr;  // initializer, right-hand side, condition, printed value
  std::vector<Expr> args;    // call arguments as written
  FuncId callee = kNoFunc;   // resolved target of a Call

  // Event primitives.
  std::string event;    // empty for RegisterAsync
  std::string handler;  // Register / RegisterAsync
  bool implicit_emit = false;

  std::vector<Stmt> body;       // If-then / While body
  std::vector<Stmt> else_body;  // If-else
};

struct Function {
  FuncId id = 0;
  std::string name;
  std::vector<std::string> params;
  std::vector<VarId> param_vars;
  std::vector<VarId> locals;  // every variable owned by this function, params first
  std::vector<Stmt> body;
  SourceLoc loc;

  bool is_top_level() const { return id == kTopLevel; }
};

struct VarInfo {
  std::string name;
  FuncId owner = kTopLevel;  // kTopLevel for globals
  bool is_param = false;

  bool is_global() const { return owner == kTopLevel; }
};

/// Whole program. functions[0] is always the synthetic `top-level`.
struct Program {
  std::vector<Function> functions;
  std::vector<VarInfo> vars;
  std::vector<std::string> files;
  std::uint32_t stmt_count = 0;

  const Function& top_level() const { return functions[kTopLevel]; }
  FuncId find_function(std::string_view name) const;
  /// Qualified name unique across the program: `x` or `f::x`.
  std::string qualified_name(VarId v) const;
};

// ---- Errors ----------------------------------------------------------------

class ParseError : public std::runtime_error {
 public:
  ParseError(SourceLoc loc, std::string file, const std::string& message);
  SourceLoc loc() const { return loc_; }
  const std::string& file() const { return file_; }
  const std::string& message() const { return message_; }

 private:
  SourceLoc loc_;
  std::string file_;
  std::string message_;
};

class SyntaxError : public ParseError {
  using ParseError::ParseError;
};
class DuplicateFunction : public ParseError {
  using ParseError::ParseError;
};
class UnresolvedCallee : public ParseError {
  using ParseError::ParseError;
};
class UnresolvedVariable : public ParseError {
  using ParseError::ParseError;
};

// ---- Entry points ----------------------------------------------------------

struct SourceFile {
  std::string name;
  std::string text;
};

/// Parses and resolves one source text.
Program parse(std::string_view source,
              const EventModel& model = EventModel::builtin(),
              std::string file_name = "<input>");

/// Parses several files into one program: top-level statements run in file
/// order and functions share one namespace.
Program parse_files(const std::vector<SourceFile>& files,
                    const EventModel& model = EventModel::builtin());

/// Canonical EVL text: top-level statements first, then functions.
std::string pretty_print(const Program& p);
std::string pretty_print(const Expr& e);
/// One line describing a statement: `if (c)`, `while (c)`, `x = e;` ...
std::string stmt_summary(const Stmt& s);

/// Calls `fn(const Stmt&, FuncId)` for every statement, pre-order.
template <typename Fn>
void for_each_stmt(const std::vector<Stmt>& stmts, FuncId f, Fn&& fn) {
  for (const auto& s : stmts) {
    fn(s, f);
    for_each_stmt(s.body, f, fn);
    for_each_stmt(s.else_body, f, fn);
  }
}

template <typename Fn>
void for_each_stmt(const Program& p, Fn&& fn) {
  for (const auto& f : p.functions) for_each_stmt(f.body, f.id, fn);
}

}  // namespace evflow::lang
