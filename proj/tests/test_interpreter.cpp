#include <gtest/gtest.h>

#include "evflow/interpreter.hpp"
#include "evflow/program_gen.hpp"
#include "test_support.hpp"

using namespace evflow;
using namespace evflow::lang;

namespace {

std::vector<std::string> run_outputs(const std::string& text,
                                     const SchedulePolicy& s = SchedulePolicy::fifo()) {
  return interpret(parse(text), s).outputs();
}

std::vector<std::string> read_names(const Program& p, const ExecutionTrace& t) {
  std::vector<std::string> out;
  for (const TraceEvent* e : t.uninit_reads()) out.push_back(p.qualified_name(e->var));
  return out;
}

}  // namespace

TEST(Interpreter, ArithmeticStringsAndControlFlow) {
  EXPECT_EQ(run_outputs(R"(
var i = 0;
var s = "n=";
while (i < 3) { i = i + 1; }
if (i == 3 && !false) { print(s + i); } else { print("no"); }
print(7 / 2);
print(-7 % 3);
print(1 < 2 || 1 / 0);
)"),
            (std::vector<std::string>{"n=3", "3", "-1", "true"}));
}

TEST(Interpreter, CallsBindParametersAndReturnEarly) {
  EXPECT_EQ(run_outputs(R"(
var g = 0;
f(5);
print(g);
function f(n) {
  if (n > 2) { g = n * 2; return; }
  g = 1;
}
)"),
            (std::vector<std::string>{"10"}));
}

TEST(Interpreter, EmitIsSynchronous) {
  EXPECT_EQ(run_outputs(R"(
register("e", a);
register("e", b);
print("before");
emit("e");
print("after");
function a() { print("a"); }
function b() { print("b"); }
)"),
            (std::vector<std::string>{"before", "a", "b", "after"}));
}

TEST(Interpreter, EmissionBeforeRegistrationIsLost) {
  EXPECT_EQ(run_outputs(R"(
emit("e");
register("e", a);
function a() { print("a"); }
)"),
            std::vector<std::string>{});
}

TEST(Interpreter, AsyncHandlersRunAfterTopLevelInScheduleOrder) {
  const std::string text = R"(
register_async(a);
register_async(b);
print("top");
function a() { print("a"); }
function b() { print("b"); }
)";
  EXPECT_EQ(run_outputs(text), (std::vector<std::string>{"top", "a", "b"}));
  EXPECT_EQ(run_outputs(text, SchedulePolicy{{1}}), (std::vector<std::string>{"top", "b", "a"}));
  const auto all = explore_schedules(parse(text), 6);
  ASSERT_EQ(all.size(), 2u);
  EXPECT_NE(all[0].outputs(), all[1].outputs());
}

TEST(Interpreter, UninitializedReadsAreLoggedAndTainted) {
  const Program p = parse(R"(
var x;
var y = x + 1;
print(y);
x = 2;
print(x);
)");
  const auto t = interpret(p);
  EXPECT_EQ(read_names(p, t), (std::vector<std::string>{"x", "y"}));
  EXPECT_EQ(t.outputs(), (std::vector<std::string>{"1", "2"}));
}

TEST(Interpreter, LocalsAreFreshPerInvocation) {
  const Program p = parse(R"(
register_async(h);
register("e", h);
emit("e");
function h() {
  var l;
  print(l);
  l = 1;
}
)");
  const auto t = interpret(p);
  EXPECT_EQ(read_names(p, t), (std::vector<std::string>{"h::l", "h::l"}));
}

TEST(Interpreter, LimitsTruncateInsteadOfFailing) {
  InterpretOptions o;
  o.step_limit = 50;
  const auto t = interpret(parse("var i = 0;\nwhile (true) { i = i + 1; }\n"), {}, o);
  EXPECT_TRUE(t.truncated);
  const auto deep = interpret(parse("f();\nfunction f() { f(); }\n"));
  EXPECT_TRUE(deep.truncated);
  const auto err = interpret(parse("print(1 / 0);\nprint(2);\n"));
  EXPECT_TRUE(err.runtime_error);
  EXPECT_TRUE(err.outputs().empty());
}

TEST(Interpreter, CorpusProgramsBehaveAsDescribed) {
  using evflow::testing::corpus_path;
  using evflow::testing::read_text;
  const Program door = parse(read_text(corpus_path("door.evl")));
  const auto t = interpret(door);
  EXPECT_EQ(t.outputs(), (std::vector<std::string>{"Hello, world!"}));
  EXPECT_TRUE(t.uninit_reads().empty());

  const Program mutated = parse(read_text(corpus_path("door_mutated.evl")));
  const auto tm = interpret(mutated);
  ASSERT_EQ(tm.uninit_reads().size(), 1u);
  EXPECT_EQ(mutated.qualified_name(tm.uninit_reads()[0]->var), "txt");

  const EventModel tm_model = EventModel::load(corpus_path("timer.model.json"));
  const Program timer = parse(read_text(corpus_path("timer.evl")), tm_model);
  EXPECT_EQ(interpret(timer).outputs(),
            (std::vector<std::string>{"press enter to start", "2", "1", "0"}));
}

TEST(Interpreter, HandlerOrderingHoldsOnRandomPrograms) {
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    const Program p = parse(generate_program(seed));
    for (const auto& t : explore_schedules(p, 4)) {
      std::string why;
      ASSERT_TRUE(check_handler_ordering(p, t, &why)) << why << "\n" << generate_program(seed);
    }
  }
}

TEST(Interpreter, ScheduleExplorationIsExhaustiveForIndependentHandlers) {
  // Three async handlers queued at once: 3! interleavings.
  const Program p = parse(R"(
register_async(a);
register_async(b);
register_async(c);
function a() { print("a"); }
function b() { print("b"); }
function c() { print("c"); }
)");
  const auto all = explore_schedules(p, 6);
  std::set<std::vector<std::string>> orders;
  for (const auto& t : all) orders.insert(t.outputs());
  EXPECT_EQ(all.size(), 6u);
  EXPECT_EQ(orders.size(), 6u);
}
