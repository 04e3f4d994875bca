// Copyright (c) 2026, The wmlab Authors.
// Licensed under the Apache License, Version 2.0.

// The litmus language: a fixed number of straight-line threads over shared
// locations, with relaxed/acquire/release/SC loads, stores and fences and
// register arithmetic (+ and *).
//
//   // comment
//   name LB;
//   locations x y;
//   values 0 1;
//   a = load(rlx, x)
//   store(rlx, y, 1)
//   |||
//   b = load(rlx, y)
//   store(rlx, x, b)
//   exists (a = 1 && b = 1) imm:allow rc11:forbid
//   expect weakestmo:allow
//
// Outcome conditions name a register (optionally thread-qualified, `2:b`)
// or a location, meaning its final value in coherence order.

#ifndef WMLAB_LITMUS_HPP_
#define WMLAB_LITMUS_HPP_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "wmlab/graph.hpp"
#include "wmlab/label.hpp"
#include "wmlab/rel.hpp"

namespace wmlab {

using Registers = std::map<std::string, Value>;

struct Expr {
  enum class Op { Const, Reg, Add, Mul };
  Op op = Op::Const;
  Value value = 0;
  std::string reg;
  std::vector<Expr> args;

  Value eval(const Registers& regs) const;
  void collect_registers(std::set<std::string>& out) const;
  std::string str() const;
};

struct LoadInstr {
  Mode mode;
  std::string reg;
  Loc loc;
};
struct StoreInstr {
  Mode mode;
  Loc loc;
  Expr value;
};
struct FenceInstr {
  Mode mode;
};
struct AssignInstr {
  std::string reg;
  Expr value;
};
using Instruction = std::variant<LoadInstr, StoreInstr, FenceInstr, AssignInstr>;

struct Thread {
  std::vector<Instruction> code;
  std::set<std::string> registers;  // every register the thread assigns
};

struct Condition {
  std::uint32_t tid = 0;  // 0 for a location condition
  std::string reg;
  Loc loc = kNoLoc;
  Value value = 0;
};

// Model names accepted in expectations.
const std::vector<std::string>& known_models();

struct OutcomeClause {
  std::vector<Condition> conds;
  std::map<std::string, bool> expect;  // model -> allowed
  std::string text;
  int line = 0;
};

struct Program {
  std::string name;
  std::vector<std::string> locations;
  std::vector<Value> values{0, 1};
  std::vector<Thread> threads;  // thread t is threads[t - 1]
  std::vector<OutcomeClause> outcomes;

  std::uint32_t thread_count() const {
    return static_cast<std::uint32_t>(threads.size());
  }
  const Thread& thread(std::uint32_t tid) const;
  std::optional<Loc> find_location(std::string_view name) const;
};

Program parse_program(std::string_view text, std::string name = "");
Program load_program(const std::filesystem::path& path);

struct TraceEvent {
  EventId id;
  Label label;
};

// One run of a thread.  `data` is over trace indices.
struct Trace {
  std::uint32_t tid = 0;
  std::vector<TraceEvent> events;
  Rel data;
  Registers registers;
};

// Steps a thread one event at a time.  Register assignments run eagerly, so
// the runner always sits in front of a load, store or fence (or the end).
class ThreadRunner {
 public:
  ThreadRunner(const Program& p, std::uint32_t tid);

  bool done() const { return pc_ >= thread_->code.size(); }
  // The next event.  For reads the value is left at 0.
  Label peek() const;
  // Executes the next event; reads observe `read_value`.
  Label step(Value read_value = 0);
  std::size_t steps_taken() const { return taken_; }
  const Registers& registers() const { return regs_; }
  // Loads (by step index) feeding the last executed event.
  const std::set<std::size_t>& last_dependencies() const { return last_deps_; }

 private:
  void run_assignments();
  std::set<std::size_t> deps_of(const Expr& e) const;

  const Program* program_;
  const Thread* thread_;
  std::size_t pc_ = 0;
  std::size_t taken_ = 0;
  Registers regs_;
  std::map<std::string, std::set<std::size_t>> reg_deps_;
  std::set<std::size_t> last_deps_;
};

// Runs thread `tid` to completion with one read value per load, in order.
// Throws ArityError if `read_values` runs out.
Trace run_thread(const Program& p, std::uint32_t tid,
                 const std::vector<Value>& read_values);
// As above but stops after `max_events` events.
Trace run_thread(const Program& p, std::uint32_t tid,
                 const std::vector<Value>& read_values,
                 std::size_t max_events);

std::size_t load_count(const Program& p, std::uint32_t tid);

// All candidate executions of p: every read-value assignment from the domain,
// every rf choice matching location and value, every per-location co order
// with the init write first.  Candidates with an unmatched read are dropped.
std::vector<ExecutionGraph> enumerate_executions(const Program& p);
std::vector<ExecutionGraph> enumerate_executions(
    const Program& p, const std::vector<Value>& domain);

// Graph with only the init writes: (0, loc) for every declared location.
ExecutionGraph init_graph(const Program& p);

// Fills g.data from re-running each thread on g's read values and sets
// g.ppo = [R]; (data ∪ rfi)+; [W].
void compute_dependencies(const Program& p, ExecutionGraph& g);
Rel preserved_program_order(const ExecutionGraph& g);

struct FinalState {
  std::vector<Registers> registers;  // index tid - 1
  std::vector<Value> memory;         // co-last value per location
};

// Registers reflect only the events present in g.
FinalState final_state(const Program& p, const ExecutionGraph& g);
// Every thread of g has executed all of its instructions.
bool runs_to_completion(const Program& p, const ExecutionGraph& g);
bool satisfies(const OutcomeClause& clause, const FinalState& st);
std::string describe_outcome(const Program& p, const FinalState& st);

}  // namespace wmlab

#endif  // WMLAB_LITMUS_HPP_
