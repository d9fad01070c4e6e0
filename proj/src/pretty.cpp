#include <sstream>

#include "evflow/lang.hpp"

namespace evflow::lang {

namespace {

int precedence(BinOp op) {
  switch (op) {
    case BinOp::Or: return 0;
    case BinOp::And: return 1;
    case BinOp::Eq:
    case BinOp::Ne: return 2;
    case BinOp::Lt:
    case BinOp::Le:
    case BinOp::Gt:
    case BinOp::Ge: return 3;
    case BinOp::Add:
    case BinOp::Sub: return 4;
    case BinOp::Mul:
    case BinOp::Div:
    case BinOp::Mod: return 5;
  }
  return 0;
}

const char* spelling(BinOp op) {
  switch (op) {
    case BinOp::Add: return "+";
    case BinOp::Sub: return "-";
    case BinOp::Mul: return "*";
    case BinOp::Div: return "/";
    case BinOp::Mod: return "%";
    case BinOp::Eq: return "==";
    case BinOp::Ne: return "!=";
    case BinOp::Lt: return "<";
    case BinOp::Le: return "<=";
    case BinOp::Gt: return ">";
    case BinOp::Ge: return ">=";
    case BinOp::And: return "&&";
    case BinOp::Or: return "||";
  }
  return "?";
}

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  out += '"';
  return out;
}

void emit_expr(std::ostream& os, const Expr& e);

// Parenthesize a binary operand when re-parsing would otherwise regroup it.
void emit_operand(std::ostream& os, const Expr& e, int parent, bool right) {
  const bool wrap =
      e.kind == Expr::Kind::Binary &&
      (precedence(e.bin) < parent || (right && precedence(e.bin) == parent));
  if (wrap) os << '(';
  emit_expr(os, e);
  if (wrap) os << ')';
}

void emit_expr(std::ostream& os, const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::Int:
      os << e.int_value;
      break;
    case Expr::Kind::Str:
      os << quote(e.text);
      break;
    case Expr::Kind::Bool:
      os << (e.bool_value ? "true" : "false");
      break;
    case Expr::Kind::Var:
    case Expr::Kind::FuncRef:
      os << e.text;
      break;
    case Expr::Kind::Unary: {
      os << (e.un == UnOp::Neg ? "-" : "!");
      const Expr& inner = e.operands[0];
      const bool wrap = inner.kind == Expr::Kind::Binary;
      if (wrap) os << '(';
      emit_expr(os, inner);
      if (wrap) os << ')';
      break;
    }
    case Expr::Kind::Binary: {
      const int p = precedence(e.bin);
      emit_operand(os, e.operands[0], p, false);
      os << ' ' << spelling(e.bin) << ' ';
      emit_operand(os, e.operands[1], p, true);
      break;
    }
  }
}

void indent(std::ostream& os, int depth) {
  for (int i = 0; i < depth; ++i) os << "  ";
}

void emit_block(std::ostream& os, const std::vector<Stmt>& body, int depth);

void emit_stmt(std::ostream& os, const Stmt& s, int depth) {
  indent(os, depth);
  switch (s.kind) {
    case Stmt::Kind::VarDecl:
      os << "var " << s.name;
      if (s.expr) {
        os << " = ";
        emit_expr(os, *s.expr);
      }
      os << ";\n";
      break;
    case Stmt::Kind::Assign:
      os << s.name << " = ";
      emit_expr(os, *s.expr);
      os << ";\n";
      break;
    case Stmt::Kind::If: {
      const Stmt* cur = &s;
      os << "if (";
      emit_expr(os, *cur->expr);
      os << ") {\n";
      emit_block(os, cur->body, depth + 1);
      while (cur->else_body.size() == 1 &&
             cur->else_body[0].kind == Stmt::Kind::If) {
        cur = &cur->else_body[0];
        indent(os, depth);
        os << "} else if (";
        emit_expr(os, *cur->expr);
        os << ") {\n";
        emit_block(os, cur->body, depth + 1);
      }
      if (!cur->else_body.empty()) {
        indent(os, depth);
        os << "} else {\n";
        emit_block(os, cur->else_body, depth + 1);
      }
      indent(os, depth);
      os << "}\n";
      break;
    }
    case Stmt::Kind::While:
      os << "while (";
      emit_expr(os, *s.expr);
      os << ") {\n";
      emit_block(os, s.body, depth + 1);
      indent(os, depth);
      os << "}\n";
      break;
    case Stmt::Kind::Print:
      os << "print(";
      emit_expr(os, *s.expr);
      os << ");\n";
      break;
    case Stmt::Kind::Return:
      os << "return;\n";
      break;
    case Stmt::Kind::Call:
    case Stmt::Kind::Register:
    case Stmt::Kind::Emit:
    case Stmt::Kind::RegisterAsync:
      os << s.name << '(';
      for (std::size_t i = 0; i < s.args.size(); ++i) {
        if (i) os << ", ";
        emit_expr(os, s.args[i]);
      }
      os << ");\n";
      break;
  }
}

void emit_block(std::ostream& os, const std::vector<Stmt>& body, int depth) {
  for (const auto& s : body) emit_stmt(os, s, depth);
}

}  // namespace

std::string pretty_print(const Expr& e) {
  std::ostringstream os;
  emit_expr(os, e);
  return os.str();
}

std::string stmt_summary(const Stmt& s) {
  std::ostringstream os;
  if (s.kind == Stmt::Kind::If || s.kind == Stmt::Kind::While) {
    os << (s.kind == Stmt::Kind::If ? "if (" : "while (");
    emit_expr(os, *s.expr);
    os << ')';
    return os.str();
  }
  emit_stmt(os, s, 0);
  std::string line = os.str();
  if (!line.empty() && line.back() == '\n') line.pop_back();
  return line;
}

std::string pretty_print(const Program& p) {
  std::ostringstream os;
  emit_block(os, p.top_level().body, 0);
  for (const auto& f : p.functions) {
    if (f.is_top_level()) continue;
    os << "\nfunction " << f.name << '(';
    for (std::size_t i = 0; i < f.params.size(); ++i) {
      if (i) os << ", ";
      os << f.params[i];
    }
    os << ") {\n";
    emit_block(os, f.body, 1);
    os << "}\n";
  }
  return os.str();
}

}  // namespace evflow::lang
