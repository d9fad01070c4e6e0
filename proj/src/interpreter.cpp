#include "evflow/interpreter.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>

namespace evflow {

using lang::BinOp;
using lang::Expr;
using lang::FuncId;
using lang::Program;
using lang::Stmt;
using lang::UnOp;
using lang::VarId;

std::vector<std::string> ExecutionTrace::outputs() const {
  std::vector<std::string> out;
  for (const auto& e : events) {
    if (e.kind == TraceEvent::Kind::Output) out.push_back(e.text);
  }
  return out;
}

std::vector<const TraceEvent*> ExecutionTrace::uninit_reads() const {
  std::vector<const TraceEvent*> out;
  for (const auto& e : events) {
    if (e.kind == TraceEvent::Kind::UninitRead) out.push_back(&e);
  }
  return out;
}

std::vector<FuncId> ExecutionTrace::invocations() const {
  std::vector<FuncId> out;
  for (const auto& e : events) {
    if (e.kind == TraceEvent::Kind::HandlerInvoked) out.push_back(e.handler);
  }
  return out;
}

namespace {

struct Value {
  enum class Kind { Int, Str, Bool };
  Kind kind = Kind::Int;
  std::int64_t i = 0;
  std::string s;
  bool b = false;
  bool uninit = true;  // taint: derived from a never-initialized variable

  static Value integer(std::int64_t v, bool taint = false) {
    Value out;
    out.i = v;
    out.uninit = taint;
    return out;
  }
  static Value boolean(bool v, bool taint = false) {
    Value out;
    out.kind = Kind::Bool;
    out.b = v;
    out.uninit = taint;
    return out;
  }
  static Value string(std::string v, bool taint = false) {
    Value out;
    out.kind = Kind::Str;
    out.s = std::move(v);
    out.uninit = taint;
    return out;
  }

  std::string render() const {
    switch (kind) {
      case Kind::Int: return std::to_string(i);
      case Kind::Bool: return b ? "true" : "false";
      case Kind::Str: return s;
    }
    return {};
  }
  bool truthy() const {
    switch (kind) {
      case Kind::Int: return i != 0;
      case Kind::Bool: return b;
      case Kind::Str: return !s.empty();
    }
    return false;
  }
};

struct Stop {};  // execution ended early (step limit, depth limit, error)

class Machine {
 public:
  Machine(const Program& p, const SchedulePolicy& sched,
          const InterpretOptions& opts)
      : p_(p), sched_(sched), opts_(opts), globals_(p.vars.size()) {}

  ExecutionTrace run() {
    try {
      invoke(lang::kTopLevel, {});
      while (!ready_.empty()) {
        std::size_t pick = 0;
        if (ready_.size() >= 2) {
          const std::size_t idx = trace_.decision_options.size();
          pick = idx < sched_.choices.size() ? sched_.choices[idx] : 0;
          if (pick >= ready_.size()) pick = ready_.size() - 1;
          trace_.decision_options.push_back(ready_.size());
          trace_.decisions_taken.push_back(pick);
        }
        const FuncId h = ready_[pick];
        ready_.erase(ready_.begin() + static_cast<std::ptrdiff_t>(pick));
        TraceEvent ev;
        ev.kind = TraceEvent::Kind::HandlerInvoked;
        ev.handler = h;
        ev.async = true;
        trace_.events.push_back(std::move(ev));
        invoke(h, {});
      }
    } catch (const Stop&) {
    }
    return std::move(trace_);
  }

 private:
  using Frame = std::vector<Value>;

  [[noreturn]] void stop(TraceEvent::Kind kind, std::string why) {
    TraceEvent ev;
    ev.kind = kind;
    ev.text = std::move(why);
    trace_.events.push_back(std::move(ev));
    if (kind == TraceEvent::Kind::Truncated) trace_.truncated = true;
    if (kind == TraceEvent::Kind::RuntimeError) trace_.runtime_error = true;
    throw Stop{};
  }

  void step(const Stmt& s) {
    if (++steps_ > opts_.step_limit) {
      stop(TraceEvent::Kind::Truncated, "step limit reached");
    }
    TraceEvent ev;
    ev.kind = TraceEvent::Kind::StmtExec;
    ev.stmt = s.id;
    trace_.events.push_back(std::move(ev));
  }

  void invoke(FuncId f, std::vector<Value> args) {
    if (frames_.size() >= opts_.max_call_depth) {
      stop(TraceEvent::Kind::Truncated, "call depth limit reached");
    }
    const lang::Function& fn = p_.functions[f];
    frames_.emplace_back(f == lang::kTopLevel ? 0 : p_.vars.size());
    for (std::size_t i = 0; i < fn.param_vars.size(); ++i) {
      frames_.back()[fn.param_vars[i]] = std::move(args[i]);
    }
    exec_block(fn.body);
    frames_.pop_back();
  }

  Value& slot(VarId v) {
    if (p_.vars[v].is_global()) return globals_[v];
    return frames_.back()[v];
  }

  Value read(VarId v, const Stmt& at, std::set<VarId>& reported) {
    const Value& val = slot(v);
    if (val.uninit && reported.insert(v).second) {
      TraceEvent ev;
      ev.kind = TraceEvent::Kind::UninitRead;
      ev.stmt = at.id;
      ev.var = v;
      trace_.events.push_back(std::move(ev));
    }
    return val;
  }

  [[noreturn]] void type_error(const Stmt& at, const std::string& msg) {
    const std::string where =
        p_.files.empty() ? std::string("<input>") : p_.files[at.loc.file];
    stop(TraceEvent::Kind::RuntimeError,
         where + ":" + std::to_string(at.loc.line) + ": " + msg);
  }

  Value eval(const Expr& e, const Stmt& at, std::set<VarId>& reported) {
    switch (e.kind) {
      case Expr::Kind::Int:
        return Value::integer(e.int_value);
      case Expr::Kind::Str:
        return Value::string(e.text);
      case Expr::Kind::Bool:
        return Value::boolean(e.bool_value);
      case Expr::Kind::Var:
        return read(e.var, at, reported);
      case Expr::Kind::FuncRef:
        return Value::string(e.text);
      case Expr::Kind::Unary: {
        Value v = eval(e.operands[0], at, reported);
        if (e.un == UnOp::Not) return Value::boolean(!v.truthy(), v.uninit);
        if (v.kind != Value::Kind::Int) type_error(at, "negating a non-integer");
        return Value::integer(-v.i, v.uninit);
      }
      case Expr::Kind::Binary:
        return binary(e, at, reported);
    }
    return {};
  }

  Value binary(const Expr& e, const Stmt& at, std::set<VarId>& reported) {
    Value a = eval(e.operands[0], at, reported);
    if (e.bin == BinOp::And || e.bin == BinOp::Or) {
      const bool short_circuit = (e.bin == BinOp::And) != a.truthy();
      if (short_circuit) return Value::boolean(a.truthy(), a.uninit);
      Value b = eval(e.operands[1], at, reported);
      return Value::boolean(b.truthy(), a.uninit || b.uninit);
    }
    Value b = eval(e.operands[1], at, reported);
    const bool taint = a.uninit || b.uninit;
    using K = Value::Kind;
    switch (e.bin) {
      case BinOp::Eq:
      case BinOp::Ne: {
        bool eq = a.kind == b.kind && a.i == b.i && a.s == b.s && a.b == b.b;
        return Value::boolean(e.bin == BinOp::Eq ? eq : !eq, taint);
      }
      case BinOp::Add:
        if (a.kind == K::Str || b.kind == K::Str) {
          return Value::string(a.render() + b.render(), taint);
        }
        break;
      default:
        break;
    }
    if (a.kind != K::Int || b.kind != K::Int) {
      type_error(at, "arithmetic or ordering on non-integer operands");
    }
    // Wrapping arithmetic: overflow is not an error in EVL.
    const auto ua = static_cast<std::uint64_t>(a.i);
    const auto ub = static_cast<std::uint64_t>(b.i);
    switch (e.bin) {
      case BinOp::Add: return Value::integer(static_cast<std::int64_t>(ua + ub), taint);
      case BinOp::Sub: return Value::integer(static_cast<std::int64_t>(ua - ub), taint);
      case BinOp::Mul: return Value::integer(static_cast<std::int64_t>(ua * ub), taint);
      case BinOp::Div:
      case BinOp::Mod:
        if (b.i == 0) type_error(at, "division by zero");
        if (b.i == -1) {
          return Value::integer(
              e.bin == BinOp::Div ? static_cast<std::int64_t>(0 - ua) : 0, taint);
        }
        return Value::integer(e.bin == BinOp::Div ? a.i / b.i : a.i % b.i, taint);
      case BinOp::Lt: return Value::boolean(a.i < b.i, taint);
      case BinOp::Le: return Value::boolean(a.i <= b.i, taint);
      case BinOp::Gt: return Value::boolean(a.i > b.i, taint);
      case BinOp::Ge: return Value::boolean(a.i >= b.i, taint);
      default: break;
    }
    type_error(at, "unsupported operator");
  }

  // Returns true when a `return` unwound the block.
  bool exec_block(const std::vector<Stmt>& body) {
    for (const auto& s : body) {
      if (exec(s)) return true;
    }
    return false;
  }

  void eval_args(const Stmt& s, std::vector<Value>* out) {
    std::set<VarId> reported;
    for (const auto& a : s.args) {
      if (a.kind == Expr::Kind::FuncRef) continue;
      Value v = eval(a, s, reported);
      if (out) out->push_back(std::move(v));
    }
  }

  bool exec(const Stmt& s) {
    step(s);
    std::set<VarId> reported;
    switch (s.kind) {
      case Stmt::Kind::VarDecl:
        slot(s.var) = s.expr ? eval(*s.expr, s, reported) : Value{};
        return false;
      case Stmt::Kind::Assign:
        slot(s.var) = eval(*s.expr, s, reported);
        return false;
      case Stmt::Kind::If:
        if (eval(*s.expr, s, reported).truthy()) return exec_block(s.body);
        return exec_block(s.else_body);
      case Stmt::Kind::While:
        for (;;) {
          reported.clear();
          if (!eval(*s.expr, s, reported).truthy()) return false;
          if (exec_block(s.body)) return true;
          step(s);
        }
      case Stmt::Kind::Print: {
        TraceEvent ev;
        ev.kind = TraceEvent::Kind::Output;
        ev.text = eval(*s.expr, s, reported).render();
        ev.stmt = s.id;
        trace_.events.push_back(std::move(ev));
        return false;
      }
      case Stmt::Kind::Return:
        return true;
      case Stmt::Kind::Call: {
        std::vector<Value> args;
        eval_args(s, &args);
        invoke(s.callee, std::move(args));
        return false;
      }
      case Stmt::Kind::Register:
      case Stmt::Kind::RegisterAsync: {
        eval_args(s, nullptr);
        TraceEvent ev;
        ev.kind = TraceEvent::Kind::HandlerRegistered;
        ev.stmt = s.id;
        ev.handler = s.callee;
        ev.event = s.event;
        ev.async = s.kind == Stmt::Kind::RegisterAsync || s.implicit_emit;
        trace_.events.push_back(ev);
        if (s.kind == Stmt::Kind::Register) {
          auto& ls = listeners_[s.event];
          if (std::find(ls.begin(), ls.end(), s.callee) == ls.end()) {
            ls.push_back(s.callee);
          }
        }
        if (ev.async &&
            std::find(ready_.begin(), ready_.end(), s.callee) == ready_.end()) {
          ready_.push_back(s.callee);
        }
        return false;
      }
      case Stmt::Kind::Emit: {
        eval_args(s, nullptr);
        TraceEvent ev;
        ev.kind = TraceEvent::Kind::EventEmitted;
        ev.stmt = s.id;
        ev.event = s.event;
        trace_.events.push_back(ev);
        const std::vector<FuncId> snapshot = listeners_[s.event];
        for (FuncId h : snapshot) {
          TraceEvent inv;
          inv.kind = TraceEvent::Kind::HandlerInvoked;
          inv.handler = h;
          inv.event = s.event;
          trace_.events.push_back(std::move(inv));
          invoke(h, {});
        }
        return false;
      }
    }
    return false;
  }

  const Program& p_;
  const SchedulePolicy& sched_;
  const InterpretOptions& opts_;
  ExecutionTrace trace_;
  std::size_t steps_ = 0;
  Frame globals_;
  std::vector<Frame> frames_;
  std::map<std::string, std::vector<FuncId>> listeners_;
  std::deque<FuncId> ready_;
};

}  // namespace

ExecutionTrace interpret(const Program& p, const SchedulePolicy& schedule,
                         const InterpretOptions& opts) {
  return Machine(p, schedule, opts).run();
}

std::vector<ExecutionTrace> explore_schedules(const Program& p,
                                              std::size_t max_decisions,
                                              const InterpretOptions& opts,
                                              std::size_t max_traces) {
  std::vector<ExecutionTrace> out;
  std::vector<std::vector<std::size_t>> stack = {{}};
  while (!stack.empty() && out.size() < max_traces) {
    SchedulePolicy pol{std::move(stack.back())};
    stack.pop_back();
    ExecutionTrace t = interpret(p, pol, opts);
    // Branch on every decision this run made beyond its forced prefix.
    const std::size_t limit = std::min(max_decisions, t.decision_options.size());
    for (std::size_t i = limit; i-- > pol.choices.size();) {
      for (std::size_t c = t.decision_options[i]; c-- > 1;) {
        std::vector<std::size_t> next(t.decisions_taken.begin(),
                                      t.decisions_taken.begin() +
                                          static_cast<std::ptrdiff_t>(i));
        next.push_back(c);
        stack.push_back(std::move(next));
      }
    }
    out.push_back(std::move(t));
  }
  return out;
}

bool check_handler_ordering(const Program& p, const ExecutionTrace& t,
                            std::string* why) {
  // (handler, event) pairs registered, and those whose event fired since.
  std::set<std::pair<FuncId, std::string>> registered;
  std::set<std::pair<FuncId, std::string>> armed;
  std::multiset<FuncId> async_pending;
  auto fail = [&](const std::string& msg) {
    if (why) *why = msg;
    return false;
  };
  for (const auto& e : t.events) {
    switch (e.kind) {
      case TraceEvent::Kind::HandlerRegistered:
        if (!e.event.empty()) registered.insert({e.handler, e.event});
        if (e.async) async_pending.insert(e.handler);
        break;
      case TraceEvent::Kind::EventEmitted:
        for (const auto& r : registered) {
          if (r.second == e.event) armed.insert(r);
        }
        break;
      case TraceEvent::Kind::HandlerInvoked: {
        const std::string& name = p.functions.at(e.handler).name;
        if (e.async) {
          auto it = async_pending.find(e.handler);
          if (it == async_pending.end()) {
            return fail("'" + name + "' ran from the queue without an async registration");
          }
          async_pending.erase(it);
        } else if (!armed.count({e.handler, e.event})) {
          return fail("'" + name + "' ran for '" + e.event +
                      "' without a registration followed by an emission");
        }
        break;
      }
      default:
        break;
    }
  }
  return true;
}

}  // namespace evflow
