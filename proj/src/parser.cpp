#include <map>
#include <set>
#include <unordered_map>

#include "evflow/lang.hpp"
#include "lexer.hpp"

namespace evflow::lang {

using detail::Tok;
using detail::Token;

ParseError::ParseError(SourceLoc loc, std::string file,
                       const std::string& message)
    : std::runtime_error(file + ":" + std::to_string(loc.line) + ":" +
                         std::to_string(loc.col) + ": " + message),
      loc_(loc),
      file_(std::move(file)),
      message_(message) {}

Expr Expr::integer(std::int64_t v) {
  Expr e;
  e.kind = Kind::Int;
  e.int_value = v;
  return e;
}

Expr Expr::string(std::string s) {
  Expr e;
  e.kind = Kind::Str;
  e.text = std::move(s);
  return e;
}

Expr Expr::boolean(bool b) {
  Expr e;
  e.kind = Kind::Bool;
  e.bool_value = b;
  return e;
}

Expr Expr::variable(std::string name) {
  Expr e;
  e.kind = Kind::Var;
  e.text = std::move(name);
  return e;
}

Expr Expr::unary(UnOp op, Expr operand) {
  Expr e;
  e.kind = Kind::Unary;
  e.un = op;
  e.loc = operand.loc;
  e.operands.push_back(std::move(operand));
  return e;
}

Expr Expr::binary(BinOp op, Expr lhs, Expr rhs) {
  Expr e;
  e.kind = Kind::Binary;
  e.bin = op;
  e.loc = lhs.loc;
  e.operands.push_back(std::move(lhs));
  e.operands.push_back(std::move(rhs));
  return e;
}

namespace {

void collect_reads(const Expr& e, std::vector<VarId>& out) {
  if (e.kind == Expr::Kind::Var && e.var != kNoVar) {
    for (VarId v : out) {
      if (v == e.var) return;
    }
    out.push_back(e.var);
  }
  for (const auto& op : e.operands) collect_reads(op, out);
}

}  // namespace

std::vector<VarId> vars_read(const Expr& e) {
  std::vector<VarId> out;
  collect_reads(e, out);
  return out;
}

FuncId Program::find_function(std::string_view name) const {
  for (const auto& f : functions) {
    if (f.name == name) return f.id;
  }
  return kNoFunc;
}

std::string Program::qualified_name(VarId v) const {
  const VarInfo& info = vars.at(v);
  if (info.is_global()) return info.name;
  return functions.at(info.owner).name + "::" + info.name;
}

namespace {

struct RawFunction {
  Function fn;
  std::string file;
};

// ---- Syntax ----------------------------------------------------------------

class Parser {
 public:
  Parser(std::vector<Token> toks, const EventModel& model, std::string file)
      : toks_(std::move(toks)), model_(model), file_(std::move(file)) {}

  void run(std::vector<Stmt>& top, std::vector<RawFunction>& fns) {
    while (peek().kind != Tok::End) {
      if (peek().kind == Tok::KwFunction) {
        fns.push_back({function(), file_});
      } else {
        top.push_back(statement());
      }
    }
  }

 private:
  const Token& peek(std::size_t ahead = 0) const {
    const std::size_t i = std::min(pos_ + ahead, toks_.size() - 1);
    return toks_[i];
  }
  bool accept(Tok t) {
    if (peek().kind != t) return false;
    ++pos_;
    return true;
  }
  const Token& expect(Tok t, const char* context) {
    if (peek().kind != t) {
      fail(peek().loc, std::string("expected ") + detail::tok_name(t) + " " +
                           context + ", found " + describe(peek()));
    }
    return toks_[pos_++];
  }
  static std::string describe(const Token& t) {
    if (t.kind == Tok::Ident) return "'" + t.text + "'";
    return detail::tok_name(t.kind);
  }
  [[noreturn]] void fail(SourceLoc at, const std::string& msg) const {
    throw SyntaxError(at, file_, msg);
  }

  Function function() {
    const Token& kw = expect(Tok::KwFunction, "");
    Function f;
    f.loc = kw.loc;
    f.name = expect(Tok::Ident, "after 'function'").text;
    expect(Tok::LParen, "after function name");
    if (peek().kind != Tok::RParen) {
      do {
        f.params.push_back(expect(Tok::Ident, "in parameter list").text);
      } while (accept(Tok::Comma));
    }
    expect(Tok::RParen, "after parameters");
    f.body = block();
    return f;
  }

  std::vector<Stmt> block() {
    expect(Tok::LBrace, "to open a block");
    std::vector<Stmt> out;
    while (peek().kind != Tok::RBrace) {
      if (peek().kind == Tok::End) fail(peek().loc, "unterminated block");
      if (peek().kind == Tok::KwFunction) {
        fail(peek().loc, "functions may only be declared at top level");
      }
      out.push_back(statement());
    }
    ++pos_;
    return out;
  }

  Stmt statement() {
    Stmt s;
    s.loc = peek().loc;
    switch (peek().kind) {
      case Tok::KwVar: {
        ++pos_;
        s.kind = Stmt::Kind::VarDecl;
        s.name = expect(Tok::Ident, "after 'var'").text;
        if (accept(Tok::Assign)) s.expr = expression();
        expect(Tok::Semi, "after declaration");
        return s;
      }
      case Tok::KwIf: {
        ++pos_;
        s.kind = Stmt::Kind::If;
        expect(Tok::LParen, "after 'if'");
        s.expr = expression();
        expect(Tok::RParen, "after condition");
        s.body = block();
        if (accept(Tok::KwElse)) {
          if (peek().kind == Tok::KwIf) {
            s.else_body.push_back(statement());
          } else {
            s.else_body = block();
          }
        }
        return s;
      }
      case Tok::KwWhile: {
        ++pos_;
        s.kind = Stmt::Kind::While;
        expect(Tok::LParen, "after 'while'");
        s.expr = expression();
        expect(Tok::RParen, "after condition");
        s.body = block();
        return s;
      }
      case Tok::KwPrint: {
        ++pos_;
        s.kind = Stmt::Kind::Print;
        expect(Tok::LParen, "after 'print'");
        s.expr = expression();
        expect(Tok::RParen, "after printed expression");
        expect(Tok::Semi, "after print");
        return s;
      }
      case Tok::KwReturn: {
        ++pos_;
        s.kind = Stmt::Kind::Return;
        expect(Tok::Semi, "after 'return' (EVL functions return no value)");
        return s;
      }
      case Tok::Ident:
        break;
      default:
        fail(peek().loc, "expected a statement, found " + describe(peek()));
    }

    const Token& name = toks_[pos_++];
    s.name = name.text;
    if (accept(Tok::Assign)) {
      s.kind = Stmt::Kind::Assign;
      s.expr = expression();
      expect(Tok::Semi, "after assignment");
      return s;
    }
    if (peek().kind != Tok::LParen) {
      fail(peek().loc, "expected '=' or '(' after '" + name.text + "'");
    }
    ++pos_;
    if (peek().kind != Tok::RParen) {
      do {
        s.args.push_back(expression());
      } while (accept(Tok::Comma));
    }
    expect(Tok::RParen, "after arguments");
    expect(Tok::Semi, "after call");
    desugar_call(s);
    return s;
  }

  // Rewrites calls to event primitives into Register/Emit/RegisterAsync.
  void desugar_call(Stmt& s) {
    s.kind = Stmt::Kind::Call;
    auto literal_event = [&](int pos) {
      if (pos < 0 || static_cast<std::size_t>(pos) >= s.args.size()) {
        fail(s.loc, "'" + s.name + "' expects an event name at argument " +
                        std::to_string(pos));
      }
      const Expr& e = s.args[static_cast<std::size_t>(pos)];
      if (e.kind != Expr::Kind::Str) {
        fail(e.loc, "event name passed to '" + s.name +
                        "' must be a string literal");
      }
      return e.text;
    };
    if (const RegistrationSpec* r = model_.find_registration(s.name)) {
      const auto hpos = static_cast<std::size_t>(r->handler_arg);
      if (hpos >= s.args.size()) {
        fail(s.loc, "'" + s.name + "' expects a handler at argument " +
                        std::to_string(r->handler_arg));
      }
      Expr& h = s.args[hpos];
      if (h.kind != Expr::Kind::Var) {
        fail(h.loc, "handler passed to '" + s.name + "' must be a function name");
      }
      h.kind = Expr::Kind::FuncRef;
      s.handler = h.text;
      s.implicit_emit = r->implicit_emit;
      if (r->event_arg < 0) {
        s.kind = Stmt::Kind::RegisterAsync;
      } else {
        s.kind = Stmt::Kind::Register;
        s.event = literal_event(r->event_arg);
      }
    } else if (const EmissionSpec* e = model_.find_emission(s.name)) {
      s.kind = Stmt::Kind::Emit;
      s.event = literal_event(e->event_arg);
    }
  }

  // Precedence climbing, lowest first: || && equality relational additive
  // multiplicative unary.
  Expr expression() { return binary_level(0); }

  static int level_of(Tok t) {
    switch (t) {
      case Tok::OrOr: return 0;
      case Tok::AndAnd: return 1;
      case Tok::EqEq:
      case Tok::NotEq: return 2;
      case Tok::Lt:
      case Tok::Le:
      case Tok::Gt:
      case Tok::Ge: return 3;
      case Tok::Plus:
      case Tok::Minus: return 4;
      case Tok::Star:
      case Tok::Slash:
      case Tok::Percent: return 5;
      default: return -1;
    }
  }

  static BinOp op_of(Tok t) {
    switch (t) {
      case Tok::OrOr: return BinOp::Or;
      case Tok::AndAnd: return BinOp::And;
      case Tok::EqEq: return BinOp::Eq;
      case Tok::NotEq: return BinOp::Ne;
      case Tok::Lt: return BinOp::Lt;
      case Tok::Le: return BinOp::Le;
      case Tok::Gt: return BinOp::Gt;
      case Tok::Ge: return BinOp::Ge;
      case Tok::Plus: return BinOp::Add;
      case Tok::Minus: return BinOp::Sub;
      case Tok::Star: return BinOp::Mul;
      case Tok::Slash: return BinOp::Div;
      default: return BinOp::Mod;
    }
  }

  Expr binary_level(int level) {
    if (level > 5) return unary();
    Expr lhs = binary_level(level + 1);
    while (level_of(peek().kind) == level) {
      const BinOp op = op_of(toks_[pos_++].kind);
      Expr rhs = binary_level(level + 1);
      lhs = Expr::binary(op, std::move(lhs), std::move(rhs));
    }
    return lhs;
  }

  Expr unary() {
    const SourceLoc at = peek().loc;
    if (accept(Tok::Minus)) {
      Expr e = Expr::unary(UnOp::Neg, unary());
      e.loc = at;
      return e;
    }
    if (accept(Tok::Bang)) {
      Expr e = Expr::unary(UnOp::Not, unary());
      e.loc = at;
      return e;
    }
    return primary();
  }

  Expr primary() {
    const Token& t = peek();
    Expr e;
    switch (t.kind) {
      case Tok::Int:
        e = Expr::integer(t.value);
        break;
      case Tok::Str:
        e = Expr::string(t.text);
        break;
      case Tok::KwTrue:
      case Tok::KwFalse:
        e = Expr::boolean(t.kind == Tok::KwTrue);
        break;
      case Tok::Ident:
        if (peek(1).kind == Tok::LParen) {
          fail(t.loc, "call to '" + t.text +
                          "' used as a value; calls are statements in EVL");
        }
        e = Expr::variable(t.text);
        break;
      case Tok::LParen: {
        ++pos_;
        Expr inner = expression();
        expect(Tok::RParen, "to close parenthesized expression");
        return inner;
      }
      default:
        fail(t.loc, "expected an expression, found " + describe(t));
    }
    e.loc = t.loc;
    ++pos_;
    return e;
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  const EventModel& model_;
  std::string file_;
};

// ---- Resolution ------------------------------------------------------------

class Resolver {
 public:
  Resolver(Program& p, const EventModel& model,
           const std::vector<std::string>& fn_files)
      : p_(p), model_(model), fn_files_(fn_files) {}

  void run() {
    for (const auto& f : p_.functions) {
      if (f.is_top_level()) continue;
      if (model_.is_primitive(f.name)) {
        throw DuplicateFunction(f.loc, file_of(f),
                                "function '" + f.name +
                                    "' redeclares an event primitive");
      }
      auto [it, fresh] = by_name_.emplace(f.name, f.id);
      if (!fresh) {
        throw DuplicateFunction(f.loc, file_of(f),
                                "duplicate function '" + f.name + "'");
      }
    }

    // Globals: every `var` in top-level code, hoisted.
    Function& top = p_.functions[kTopLevel];
    declare_vars(top, top.body);
    for (auto& f : p_.functions) {
      if (f.is_top_level()) continue;
      std::set<std::string> seen;
      for (const auto& param : f.params) {
        if (!seen.insert(param).second) {
          throw SyntaxError(f.loc, file_of(f),
                            "duplicate parameter '" + param + "'");
        }
        const VarId v = add_var(param, f.id, true);
        f.param_vars.push_back(v);
        f.locals.push_back(v);
      }
      declare_vars(f, f.body);
    }

    StmtId next = 0;
    for (auto& f : p_.functions) resolve_block(f, f.body, next);
    p_.stmt_count = next;
  }

 private:
  const std::string& file_of(const Function& f) const {
    return fn_files_.at(f.id);
  }

  VarId add_var(const std::string& name, FuncId owner, bool is_param) {
    const auto v = static_cast<VarId>(p_.vars.size());
    p_.vars.push_back({name, owner, is_param});
    scope_[owner][name] = v;
    return v;
  }

  void declare_vars(Function& f, const std::vector<Stmt>& body) {
    for_each_stmt(body, f.id, [&](const Stmt& s, FuncId) {
      if (s.kind != Stmt::Kind::VarDecl) return;
      auto& names = scope_[f.id];
      if (names.count(s.name)) return;  // redeclaration reuses the slot
      if (f.is_top_level()) {
        add_var(s.name, f.id, false);
        f.locals.push_back(names.at(s.name));
      } else {
        f.locals.push_back(add_var(s.name, f.id, false));
      }
    });
  }

  VarId lookup(const Function& f, const std::string& name, SourceLoc at) {
    for (FuncId scope : {f.id, kTopLevel}) {
      auto it = scope_.find(scope);
      if (it == scope_.end()) continue;
      auto v = it->second.find(name);
      if (v != it->second.end()) return v->second;
    }
    throw UnresolvedVariable(at, file_of(f),
                             "undeclared variable '" + name + "'");
  }

  void resolve_expr(const Function& f, Expr& e) {
    if (e.kind == Expr::Kind::Var) e.var = lookup(f, e.text, e.loc);
    for (auto& op : e.operands) resolve_expr(f, op);
  }

  FuncId resolve_handler(const Function& f, const Stmt& s) {
    auto it = by_name_.find(s.handler);
    if (it == by_name_.end()) {
      throw UnresolvedCallee(s.loc, file_of(f),
                             "unknown handler function '" + s.handler + "'");
    }
    const Function& h = p_.functions[it->second];
    if (!h.params.empty()) {
      throw SyntaxError(s.loc, file_of(f),
                        "handler '" + h.name + "' must not declare parameters");
    }
    return h.id;
  }

  void resolve_block(const Function& f, std::vector<Stmt>& body,
                     StmtId& next) {
    for (auto& s : body) {
      s.id = next++;
      if (s.expr) resolve_expr(f, *s.expr);
      switch (s.kind) {
        case Stmt::Kind::VarDecl:
        case Stmt::Kind::Assign:
          s.var = lookup(f, s.name, s.loc);
          break;
        case Stmt::Kind::Call: {
          auto it = by_name_.find(s.name);
          if (it == by_name_.end()) {
            throw UnresolvedCallee(s.loc, file_of(f),
                                   "call to undeclared function '" + s.name +
                                       "'");
          }
          const Function& callee = p_.functions[it->second];
          if (callee.params.size() != s.args.size()) {
            throw SyntaxError(s.loc, file_of(f),
                              "'" + s.name + "' takes " +
                                  std::to_string(callee.params.size()) +
                                  " argument(s), " +
                                  std::to_string(s.args.size()) + " given");
          }
          s.callee = callee.id;
          break;
        }
        case Stmt::Kind::Register:
        case Stmt::Kind::RegisterAsync:
          s.callee = resolve_handler(f, s);
          break;
        default:
          break;
      }
      for (auto& a : s.args) {
        if (a.kind != Expr::Kind::FuncRef) resolve_expr(f, a);
      }
      resolve_block(f, s.body, next);
      resolve_block(f, s.else_body, next);
    }
  }

  Program& p_;
  const EventModel& model_;
  const std::vector<std::string>& fn_files_;
  std::unordered_map<std::string, FuncId> by_name_;
  std::map<FuncId, std::unordered_map<std::string, VarId>> scope_;
};

}  // namespace

Program parse_files(const std::vector<SourceFile>& files,
                    const EventModel& model) {
  Program p;
  Function top;
  top.id = kTopLevel;
  top.name = std::string(kTopLevelName);
  p.functions.push_back(std::move(top));
  std::vector<std::string> fn_files = {files.empty() ? "<input>"
                                                     : files.front().name};

  for (std::size_t i = 0; i < files.size(); ++i) {
    p.files.push_back(files[i].name);
    auto toks =
        detail::lex(files[i].text, static_cast<std::uint32_t>(i), files[i].name);
    Parser parser(std::move(toks), model, files[i].name);
    std::vector<RawFunction> fns;
    parser.run(p.functions[kTopLevel].body, fns);
    for (auto& rf : fns) {
      rf.fn.id = static_cast<FuncId>(p.functions.size());
      p.functions.push_back(std::move(rf.fn));
      fn_files.push_back(rf.file);
    }
  }

  Resolver(p, model, fn_files).run();
  return p;
}

Program parse(std::string_view source, const EventModel& model,
              std::string file_name) {
  return parse_files({SourceFile{std::move(file_name), std::string(source)}},
                     model);
}

}  // namespace evflow::lang
