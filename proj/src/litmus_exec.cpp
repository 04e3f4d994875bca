// Copyright (c) 2026, The wmlab Authors.
// Licensed under the Apache License, Version 2.0.

#include <algorithm>
#include <sstream>

#include "wmlab/litmus.hpp"

namespace wmlab {

// ------------------------------------------------------------------ Expr

Value Expr::eval(const Registers& regs) const {
  switch (op) {
    case Op::Const: return value;
    case Op::Reg: {
      auto it = regs.find(reg);
      if (it == regs.end())
        throw PreconditionError("register " + reg + " has no value");
      return it->second;
    }
    case Op::Add: return args[0].eval(regs) + args[1].eval(regs);
    case Op::Mul: return args[0].eval(regs) * args[1].eval(regs);
  }
  return 0;
}

void Expr::collect_registers(std::set<std::string>& out) const {
  if (op == Op::Reg) out.insert(reg);
  for (const auto& a : args) a.collect_registers(out);
}

std::string Expr::str() const {
  switch (op) {
    case Op::Const: return std::to_string(value);
    case Op::Reg: return reg;
    case Op::Add: return args[0].str() + " + " + args[1].str();
    case Op::Mul: {
      auto wrap = [](const Expr& e) {
        return e.op == Op::Add ? "(" + e.str() + ")" : e.str();
      };
      return wrap(args[0]) + "*" + wrap(args[1]);
    }
  }
  return "?";
}

// ---------------------------------------------------------- ThreadRunner

ThreadRunner::ThreadRunner(const Program& p, std::uint32_t tid)
    : program_(&p), thread_(&p.thread(tid)) {
  run_assignments();
}

std::set<std::size_t> ThreadRunner::deps_of(const Expr& e) const {
  std::set<std::string> regs;
  e.collect_registers(regs);
  std::set<std::size_t> out;
  for (const auto& r : regs) {
    auto it = reg_deps_.find(r);
    if (it != reg_deps_.end()) out.insert(it->second.begin(), it->second.end());
  }
  return out;
}

void ThreadRunner::run_assignments() {
  while (!done()) {
    const auto* a = std::get_if<AssignInstr>(&thread_->code[pc_]);
    if (!a) break;
    regs_[a->reg] = a->value.eval(regs_);
    reg_deps_[a->reg] = deps_of(a->value);
    ++pc_;
  }
}

Label ThreadRunner::peek() const {
  if (done()) throw PreconditionError("thread has finished");
  return std::visit(
      [&](const auto& in) -> Label {
        using T = std::decay_t<decltype(in)>;
        if constexpr (std::is_same_v<T, LoadInstr>)
          return Label{Kind::Read, in.mode, in.loc, 0};
        else if constexpr (std::is_same_v<T, StoreInstr>)
          return Label{Kind::Write, in.mode, in.loc, in.value.eval(regs_)};
        else if constexpr (std::is_same_v<T, FenceInstr>)
          return Label{Kind::Fence, in.mode, kNoLoc, 0};
        else
          throw PreconditionError("assignment is not an event");
      },
      thread_->code[pc_]);
}

Label ThreadRunner::step(Value read_value) {
  Label l = peek();
  const Instruction& in = thread_->code[pc_];
  last_deps_.clear();
  if (const auto* ld = std::get_if<LoadInstr>(&in)) {
    l.val = read_value;
    regs_[ld->reg] = read_value;
    reg_deps_[ld->reg] = {taken_};
  } else if (const auto* st = std::get_if<StoreInstr>(&in)) {
    last_deps_ = deps_of(st->value);
  }
  ++pc_;
  ++taken_;
  run_assignments();
  return l;
}

// ------------------------------------------------------------- run_thread

std::size_t load_count(const Program& p, std::uint32_t tid) {
  const Thread& th = p.thread(tid);
  return static_cast<std::size_t>(
      std::count_if(th.code.begin(), th.code.end(), [](const Instruction& in) {
        return std::holds_alternative<LoadInstr>(in);
      }));
}

Trace run_thread(const Program& p, std::uint32_t tid,
                 const std::vector<Value>& read_values) {
  return run_thread(p, tid, read_values, static_cast<std::size_t>(-1));
}

Trace run_thread(const Program& p, std::uint32_t tid,
                 const std::vector<Value>& read_values,
                 std::size_t max_events) {
  ThreadRunner run(p, tid);
  Trace tr;
  tr.tid = tid;
  std::vector<std::pair<std::size_t, std::size_t>> data;
  std::size_t next_read = 0;
  while (!run.done() && tr.events.size() < max_events) {
    Value v = 0;
    if (run.peek().is_read()) {
      if (next_read >= read_values.size())
        throw ArityError("thread " + std::to_string(tid) + " needs more than " +
                         std::to_string(read_values.size()) + " read values");
      v = read_values[next_read++];
    }
    Label l = run.step(v);
    std::size_t idx = tr.events.size();
    for (std::size_t d : run.last_dependencies()) data.emplace_back(d, idx);
    tr.events.push_back(
        {EventId{tid, static_cast<std::uint32_t>(idx + 1)}, l});
  }
  tr.data = Rel(tr.events.size());
  for (auto [a, b] : data) tr.data.insert(a, b);
  tr.registers = run.registers();
  return tr;
}

// ---------------------------------------------------- enumerate_executions

ExecutionGraph init_graph(const Program& p) {
  std::vector<std::pair<EventId, Label>> evs;
  for (std::size_t l = 0; l < p.locations.size(); ++l)
    evs.push_back({EventId{0, static_cast<std::uint32_t>(l)},
                   Label{Kind::Write, Mode::Rlx, static_cast<Loc>(l), 0}});
  return make_graph<ExecutionGraph>(p.locations, std::move(evs));
}

Rel preserved_program_order(const ExecutionGraph& g) {
  const Rel rfi = g.rf & g.po;
  return restrict(plus(g.data | rfi), g.reads(), g.writes());
}

namespace {

// Read values of each thread, in po order.
std::vector<std::vector<Value>> read_values_of(const Program& p,
                                               const ExecutionGraph& g) {
  std::vector<std::vector<Value>> out(p.thread_count());
  for (std::size_t i = 0; i < g.size(); ++i)
    if (!g.ids[i].is_init() && g.labels[i].is_read())
      out.at(g.ids[i].tid - 1).push_back(g.labels[i].val);
  return out;
}

template <class F>
void for_each_assignment(const std::vector<std::size_t>& radix, F&& f) {
  std::vector<std::size_t> digits(radix.size(), 0);
  for (std::size_t r : radix)
    if (r == 0) return;
  while (true) {
    f(digits);
    std::size_t k = radix.size();
    while (k > 0) {
      --k;
      if (++digits[k] < radix[k]) break;
      digits[k] = 0;
      if (k == 0) return;
    }
    if (radix.empty()) return;
  }
}

}  // namespace

void compute_dependencies(const Program& p, ExecutionGraph& g) {
  g.data = Rel(g.size());
  auto reads = read_values_of(p, g);
  for (std::uint32_t t = 1; t <= p.thread_count(); ++t) {
    auto events = g.thread_events(t).elements();
    if (events.empty()) continue;
    Trace tr = run_thread(p, t, reads[t - 1], events.size());
    tr.data.for_each([&](std::size_t a, std::size_t b) {
      g.data.insert(events.at(a), events.at(b));
    });
  }
  g.ppo = preserved_program_order(g);
}

std::vector<ExecutionGraph> enumerate_executions(const Program& p) {
  return enumerate_executions(p, p.values);
}

std::vector<ExecutionGraph> enumerate_executions(
    const Program& p, const std::vector<Value>& domain) {
  std::vector<ExecutionGraph> out;
  const std::uint32_t nt = p.thread_count();

  // Per-thread traces for every read-value assignment.
  std::vector<std::vector<Trace>> traces(nt);
  for (std::uint32_t t = 1; t <= nt; ++t) {
    std::vector<std::size_t> radix(load_count(p, t), domain.size());
    for_each_assignment(radix, [&](const std::vector<std::size_t>& d) {
      std::vector<Value> vals;
      for (auto i : d) vals.push_back(domain[i]);
      traces[t - 1].push_back(run_thread(p, t, vals));
    });
  }

  std::vector<std::size_t> trace_radix;
  for (const auto& ts : traces) trace_radix.push_back(ts.size());
  for_each_assignment(trace_radix, [&](const std::vector<std::size_t>& pick) {
    std::vector<std::pair<EventId, Label>> evs;
    for (std::size_t l = 0; l < p.locations.size(); ++l)
      evs.push_back({EventId{0, static_cast<std::uint32_t>(l)},
                     Label{Kind::Write, Mode::Rlx, static_cast<Loc>(l), 0}});
    for (std::uint32_t t = 0; t < nt; ++t)
      for (const auto& e : traces[t][pick[t]].events)
        evs.push_back({e.id, e.label});
    ExecutionGraph base = make_graph<ExecutionGraph>(p.locations, evs);
    for (std::uint32_t t = 0; t < nt; ++t) {
      const Trace& tr = traces[t][pick[t]];
      tr.data.for_each([&](std::size_t a, std::size_t b) {
        base.add(base.data, tr.events[a].id, tr.events[b].id);
      });
    }

    // rf candidates per read.
    const auto reads = base.reads().elements();
    const auto writes = base.writes().elements();
    std::vector<std::vector<std::size_t>> sources;
    for (auto r : reads) {
      std::vector<std::size_t> src;
      for (auto w : writes)
        if (base.labels[w].loc == base.labels[r].loc &&
            base.labels[w].val == base.labels[r].val)
          src.push_back(w);
      if (src.empty()) return;  // some read cannot be matched
      sources.push_back(std::move(src));
    }

    // co candidates per location: permutations of the non-init writes.
    std::vector<std::vector<std::vector<std::size_t>>> orders(p.locations.size());
    for (std::size_t l = 0; l < p.locations.size(); ++l) {
      std::vector<std::size_t> ws;
      for (auto w : writes)
        if (!base.ids[w].is_init() &&
            base.labels[w].loc == static_cast<Loc>(l))
          ws.push_back(w);
      do {
        orders[l].push_back(ws);
      } while (std::next_permutation(ws.begin(), ws.end()));
    }

    std::vector<std::size_t> rf_radix, co_radix;
    for (const auto& s : sources) rf_radix.push_back(s.size());
    for (const auto& o : orders) co_radix.push_back(o.size());
    for_each_assignment(rf_radix, [&](const std::vector<std::size_t>& rfp) {
      for_each_assignment(co_radix, [&](const std::vector<std::size_t>& cop) {
        ExecutionGraph g = base;
        for (std::size_t k = 0; k < reads.size(); ++k)
          g.rf.insert(sources[k][rfp[k]], reads[k]);
        for (std::size_t l = 0; l < orders.size(); ++l) {
          std::vector<std::size_t> chain{
              g.at(EventId{0, static_cast<std::uint32_t>(l)})};
          const auto& ord = orders[l][cop[l]];
          chain.insert(chain.end(), ord.begin(), ord.end());
          for (std::size_t a = 0; a < chain.size(); ++a)
            for (std::size_t b = a + 1; b < chain.size(); ++b)
              g.co.insert(chain[a], chain[b]);
        }
        g.ppo = preserved_program_order(g);
        out.push_back(std::move(g));
      });
    });
  });
  return out;
}

// ----------------------------------------------------------- final state

FinalState final_state(const Program& p, const ExecutionGraph& g) {
  FinalState st;
  auto reads = read_values_of(p, g);
  for (std::uint32_t t = 1; t <= p.thread_count(); ++t)
    st.registers.push_back(
        run_thread(p, t, reads[t - 1], g.thread_events(t).size()).registers);
  st.memory.assign(p.locations.size(), 0);
  const EventSet W = g.writes();
  W.for_each([&](std::size_t w) {
    if ((g.co.successors(w) & W).empty())
      st.memory.at(static_cast<std::size_t>(g.labels[w].loc)) = g.labels[w].val;
  });
  return st;
}

bool runs_to_completion(const Program& p, const ExecutionGraph& g) {
  auto reads = read_values_of(p, g);
  for (std::uint32_t t = 1; t <= p.thread_count(); ++t) {
    std::size_t have = g.thread_events(t).size();
    try {
      if (run_thread(p, t, reads[t - 1], have + 1).events.size() != have)
        return false;
    } catch (const ArityError&) {
      return false;  // the next event is a read
    }
  }
  return true;
}

bool satisfies(const OutcomeClause& clause, const FinalState& st) {
  for (const Condition& c : clause.conds) {
    if (c.tid == 0) {
      if (st.memory.at(static_cast<std::size_t>(c.loc)) != c.value) return false;
    } else {
      const Registers& regs = st.registers.at(c.tid - 1);
      auto it = regs.find(c.reg);
      if (it == regs.end() || it->second != c.value) return false;
    }
  }
  return true;
}

std::string describe_outcome(const Program& p, const FinalState& st) {
  std::ostringstream os;
  bool first = true;
  for (std::uint32_t t = 1; t <= st.registers.size(); ++t)
    for (const auto& [r, v] : st.registers[t - 1]) {
      os << (first ? "" : " ") << t << ":" << r << "=" << v;
      first = false;
    }
  for (std::size_t l = 0; l < st.memory.size(); ++l) {
    os << (first ? "" : " ") << p.locations[l] << "=" << st.memory[l];
    first = false;
  }
  return os.str();
}

}  // namespace wmlab
