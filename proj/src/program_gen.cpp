#include "evflow/program_gen.hpp"

#include <algorithm>
#include <random>
#include <sstream>
#include <vector>

namespace evflow {

namespace {

class Gen {
 public:
  Gen(std::uint64_t seed, const GenParams& p) : rng_(seed), p_(p) {}

  std::string run() {
    const int handlers = p_.max_handlers > 0 ? pick(1, p_.max_handlers) : 0;
    const int events = pick(1, p_.max_events);
    const int globals = pick(1, p_.max_globals);
    for (int i = 0; i < handlers; ++i) handlers_.push_back("h" + std::to_string(i));
    for (int i = 0; i < events; ++i) events_.push_back("e" + std::to_string(i));
    for (int i = 0; i < globals; ++i) globals_.push_back("g" + std::to_string(i));
    const bool helper = p_.helper && chance(50);

    // Split the statement budget: top-level, each handler, the helper. The
    // global declarations are paid for up front.
    budget_ = p_.max_stmts - globals;
    const int bodies = handlers + 1 + (helper ? 1 : 0);
    std::vector<int> share(static_cast<std::size_t>(bodies), 0);
    int remaining = pick(bodies, p_.max_stmts);
    for (int i = 0; i < remaining; ++i) {
      // Top-level gets a double share: it is where most registrations live.
      const int b = pick(0, bodies);
      ++share[static_cast<std::size_t>(b == bodies ? 0 : b)];
    }

    std::ostringstream os;
    // Top level: one declaration per global, between top-level statements.
    {
      locals_.clear();
      in_top_ = true;
      rank_ = -1;
      std::vector<std::string> body;
      for (int i = 0; i < share[0] && budget_ > 0; ++i) {
        std::string chunk;
        for (const auto& line : stmt(0)) chunk += line;
        body.push_back(chunk);
      }
      for (const auto& g : globals_) {
        const auto at = static_cast<std::size_t>(pick(0, static_cast<int>(body.size())));
        const std::string decl =
            chance(40) ? "var " + g + " = " + std::to_string(pick(0, 9)) + ";"
                       : "var " + g + ";";
        body.insert(body.begin() + static_cast<std::ptrdiff_t>(at), decl + "\n");
      }
      for (const auto& chunk : body) os << chunk;
    }
    in_top_ = false;
    helper_ = helper;
    for (int i = 0; i < handlers; ++i) {
      locals_.clear();
      local_counters_.clear();
      rank_ = i;
      os << "\nfunction " << handlers_[static_cast<std::size_t>(i)] << "() {\n";
      for (const auto& line : block(share[static_cast<std::size_t>(i + 1)], 1)) os << line;
      os << "}\n";
    }
    if (helper) {
      locals_ = {"p"};
      local_counters_.clear();
      in_helper_ = true;
      os << "\nfunction aux(p) {\n";
      for (const auto& line : block(share.back(), 1)) os << line;
      os << "}\n";
      in_helper_ = false;
    }
    return os.str();
  }

 private:
  int pick(int lo, int hi) {
    if (hi < lo) return lo;
    return std::uniform_int_distribution<int>(lo, hi)(rng_);
  }
  bool chance(int percent) { return pick(1, 100) <= percent; }
  template <typename T>
  const T& any(const std::vector<T>& v) {
    return v[static_cast<std::size_t>(pick(0, static_cast<int>(v.size()) - 1))];
  }

  std::string var_in_scope() {
    std::vector<std::string> vars = globals_;
    vars.insert(vars.end(), locals_.begin(), locals_.end());
    vars.insert(vars.end(), counters_.begin(), counters_.end());
    vars.insert(vars.end(), local_counters_.begin(), local_counters_.end());
    return any(vars);
  }

  // Loop counters are never written outside their own increment, so every
  // loop terminates.
  std::string var_in_scope_for_write() {
    std::vector<std::string> vars = globals_;
    vars.insert(vars.end(), locals_.begin(), locals_.end());
    return any(vars);
  }

  std::string atom() {
    if (chance(55)) return var_in_scope();
    return std::to_string(pick(0, 9));
  }

  std::string expr() {
    const int shape = pick(0, 2);
    if (shape == 0) return atom();
    static const std::vector<std::string> ops = {"+", "-", "*"};
    return atom() + " " + any(ops) + " " + atom();
  }

  std::string cond() {
    static const std::vector<std::string> ops = {"<", "<=", "==", "!=", ">"};
    return atom() + " " + any(ops) + " " + atom();
  }

  int last_handler() const { return static_cast<int>(handlers_.size()) - 1; }

  static std::string pad(int depth) { return std::string(2 * static_cast<std::size_t>(depth), ' '); }

  std::vector<std::string> block(int count, int depth) {
    std::vector<std::string> out;
    for (int i = 0; i < count && budget_ > 0; ++i) {
      auto lines = stmt(depth);
      out.insert(out.end(), lines.begin(), lines.end());
    }
    return out;
  }

  std::vector<std::string> stmt(int depth) {
    const std::string ind = pad(depth);
    const int roll = pick(0, 99);
    const int nest = depth - (in_top_ ? 0 : 1);
    --budget_;
    if (roll < 10 && nest < p_.max_block_depth && budget_ >= 1) {
      std::vector<std::string> out = {ind + "if (" + cond() + ") {\n"};
      auto then_part = block(pick(1, 2), depth + 1);
      out.insert(out.end(), then_part.begin(), then_part.end());
      if (chance(50)) {
        out.push_back(ind + "} else {\n");
        auto else_part = block(1, depth + 1);
        out.insert(out.end(), else_part.begin(), else_part.end());
      }
      out.push_back(ind + "}\n");
      return out;
    }
    if (roll < 16 && p_.loops && nest < p_.max_block_depth && budget_ >= 3) {
      const std::string c = "c" + std::to_string(counter_++);
      // A fresh counter: a local, or a global in top-level code.
      budget_ -= 2;
      std::vector<std::string> out = {ind + "var " + c + " = 0;\n",
                                      ind + "while (" + c + " < 2) {\n"};
      auto body = block(pick(1, 2), depth + 1);
      out.insert(out.end(), body.begin(), body.end());
      out.push_back(pad(depth + 1) + c + " = " + c + " + 1;\n");
      out.push_back(ind + "}\n");
      (in_top_ ? counters_ : local_counters_).push_back(c);
      return out;
    }
    if (roll < 30) return {ind + var_in_scope_for_write() + " = " + expr() + ";\n"};
    if (roll < (in_top_ ? 34 : 42)) return {ind + "print(" + expr() + ");\n"};
    // Top-level has no locals; its slot goes to async registrations instead,
    // which is what produces scheduling choices.
    if (roll < 52 && in_top_ && !handlers_.empty()) {
      return {ind + "register_async(" + any(handlers_) + ");\n"};
    }
    if (roll < 52 && !in_top_) {
      const std::string l = "l" + std::to_string(counter_++);
      std::string line = ind + "var " + l;
      if (chance(50)) line += " = " + expr();
      locals_.push_back(l);
      return {line + ";\n"};
    }
    // Event k only gets handlers h_j with j >= k, a handler h_i only emits
    // events k > i and only queues handlers j > i, so dispatch never cycles.
    if (handlers_.empty()) return {ind + "print(" + atom() + ");\n"};
    if (roll < 64) {
      const int k = pick(0, std::min(static_cast<int>(events_.size()) - 1, last_handler()));
      const int j = pick(k, last_handler());
      return {ind + "register(\"" + events_[k] + "\", " + handlers_[j] + ");\n"};
    }
    if (roll < 78 && !in_helper_ && rank_ + 1 < static_cast<int>(events_.size())) {
      return {ind + "emit(\"" + events_[pick(rank_ + 1, static_cast<int>(events_.size()) - 1)] +
              "\");\n"};
    }
    if (roll < 92 && !in_helper_ && rank_ < last_handler()) {
      return {ind + "register_async(" + handlers_[pick(rank_ + 1, last_handler())] + ");\n"};
    }
    if (helper_ && !in_helper_) return {ind + "aux(" + expr() + ");\n"};
    return {ind + "print(" + atom() + ");\n"};
  }

  std::mt19937_64 rng_;
  GenParams p_;
  int budget_ = 0;
  int counter_ = 0;
  int rank_ = -1;  // index of the handler being generated, -1 for top-level
  bool in_top_ = false;
  bool in_helper_ = false;
  bool helper_ = false;
  std::vector<std::string> handlers_;
  std::vector<std::string> events_;
  std::vector<std::string> globals_;
  std::vector<std::string> locals_;
  std::vector<std::string> counters_;
  std::vector<std::string> local_counters_;
};

}  // namespace

std::string generate_program(std::uint64_t seed, const GenParams& params) {
  return Gen(seed, params).run();
}

}  // namespace evflow
