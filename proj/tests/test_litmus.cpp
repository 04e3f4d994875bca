// Copyright (c) 2026, The wmlab Authors.
// Licensed under the Apache License, Version 2.0.

#include <doctest.h>

#include "support.hpp"

using namespace wmtest;

namespace {

std::size_t factorial(std::size_t n) { return n <= 1 ? 1 : n * factorial(n - 1); }

// Counts candidates directly: every combination of per-thread read values,
// times the number of rf maps (same loc, same val), times the number of co
// linearisations (k! for k non-init writes per location).
std::size_t oracle_candidate_count(const Program& p) {
  const auto& dom = p.values;
  std::vector<std::vector<Trace>> per_thread;
  for (std::uint32_t t = 1; t <= p.thread_count(); ++t) {
    std::vector<Trace> ts;
    const std::size_t k = load_count(p, t);
    std::size_t total = 1;
    for (std::size_t i = 0; i < k; ++i) total *= dom.size();
    for (std::size_t code = 0; code < total; ++code) {
      std::vector<Value> vals;
      std::size_t c = code;
      for (std::size_t i = 0; i < k; ++i) {
        vals.push_back(dom[c % dom.size()]);
        c /= dom.size();
      }
      ts.push_back(run_thread(p, t, vals));
    }
    per_thread.push_back(ts);
  }
  std::size_t count = 0;
  std::vector<std::size_t> pick(per_thread.size(), 0);
  std::function<void(std::size_t)> rec = [&](std::size_t t) {
    if (t == per_thread.size()) {
      std::vector<Label> all;
      for (std::size_t l = 0; l < p.locations.size(); ++l)
        all.push_back(Label{Kind::Write, Mode::Rlx, static_cast<Loc>(l), 0});
      for (std::size_t u = 0; u < per_thread.size(); ++u)
        for (const auto& e : per_thread[u][pick[u]].events)
          all.push_back(e.label);
      std::size_t n = 1;
      for (const Label& r : all) {
        if (!r.is_read()) continue;
        std::size_t srcs = 0;
        for (const Label& w : all)
          if (w.is_write() && w.loc == r.loc && w.val == r.val) ++srcs;
        n *= srcs;
      }
      for (std::size_t l = 0; l < p.locations.size(); ++l) {
        std::size_t k = 0;
        for (const Label& w : all)
          if (w.is_write() && w.loc == static_cast<Loc>(l)) ++k;
        n *= factorial(k - 1);  // init is fixed first
      }
      count += n;
      return;
    }
    for (pick[t] = 0; pick[t] < per_thread[t].size(); ++pick[t]) rec(t + 1);
  };
  rec(0);
  return count;
}

}  // namespace

TEST_SUITE("litmus_lang") {
  TEST_CASE("parse: LB has two threads of two instructions") {
    Program lb = corpus("lb");
    REQUIRE(lb.thread_count() == 2);
    CHECK(lb.thread(1).code.size() == 2);
    CHECK(lb.thread(2).code.size() == 2);
    CHECK(lb.locations == std::vector<std::string>{"x", "y"});
    REQUIRE(lb.outcomes.size() == 1);
    CHECK(lb.outcomes[0].expect.at("imm"));
    CHECK_FALSE(lb.outcomes[0].expect.at("rc11"));
  }

  TEST_CASE("parse: empty text gives no threads") {
    CHECK(parse_program("").thread_count() == 0);
    CHECK(parse_program("// nothing\n").thread_count() == 0);
  }

  TEST_CASE("parse: errors carry line and column") {
    try {
      parse_program("locations x;\na = load(rlxx, x)\n");
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(e.line() == 2);
      CHECK(e.column() == 10);
    }
    CHECK_THROWS_AS(parse_program("locations x;\nstore(rlx, x, r)\n"), ParseError);
    CHECK_THROWS_AS(parse_program("locations x;\nstore(rlx, y, 1)\n"), ParseError);
    CHECK_THROWS_AS(parse_program("locations x;\na = load(rel, x)\n"), ParseError);
    CHECK_THROWS_AS(parse_program("locations x;\nstore(acq, x, 1)\n"), ParseError);
    CHECK_THROWS_AS(parse_program("locations x;\nfence(rlx)\n"), ParseError);
    CHECK_THROWS_AS(parse_program("locations x;\nstore(rlx, x, 1)\nexists (x = 1) foo:allow\n"),
                    ParseError);
  }

  TEST_CASE("parse: expressions, fences, qualified conditions") {
    Program p = parse_program(R"(
      name demo;
      locations x y;
      values 0 1 2;
      a = load(acq, x)
      b = a + 1
      store(rel, y, (b + 2) * a)
      fence(sc)
      |||
      a = load(sc, y)
      exists (1:a = 1 && 2:a = 0 && y = 3) imm:allow
    )");
    CHECK(p.name == "demo");
    CHECK(p.values == std::vector<Value>{0, 1, 2});
    REQUIRE(p.outcomes.size() == 1);
    const auto& c = p.outcomes[0].conds;
    REQUIRE(c.size() == 3);
    CHECK(c[0].tid == 1);
    CHECK(c[2].tid == 0);
    Trace t = run_thread(p, 1, {1});
    REQUIRE(t.events.size() == 3);
    CHECK(t.events[1].label.val == 4);
    CHECK(t.events[1].label.mode == Mode::Rel);
    CHECK(t.events[2].label.is_fence());
    CHECK(t.data.contains(0, 1));
    // An unqualified register used by two threads is ambiguous.
    CHECK_THROWS_AS(parse_program("locations x;\na = load(rlx, x)\n|||\n"
                                  "a = load(rlx, x)\nexists (a = 1)\n"),
                    ParseError);
  }

  TEST_CASE("run_thread: LB, LB-data and LB-fake thread 1") {
    Trace lb = run_thread(corpus("lb"), 1, {1});
    REQUIRE(lb.events.size() == 2);
    CHECK(lb.events[0].id == ev(1, 1));
    CHECK(to_string(lb.events[0].label, {"x", "y"}) == "R(x,1)");
    CHECK(to_string(lb.events[1].label, {"x", "y"}) == "W(y,1)");
    CHECK(lb.data.empty());

    Trace data = run_thread(corpus("lb-data"), 1, {1});
    CHECK(data.events[1].label.val == 1);
    CHECK(data.data == Rel(2, {{0, 1}}));

    Trace fake = run_thread(corpus("lb-fake"), 1, {7});
    CHECK(fake.events[1].label.val == 1);
    CHECK(fake.data == Rel(2, {{0, 1}}));
  }

  TEST_CASE("run_thread: arity and determinism") {
    Program lb = corpus("lb");
    CHECK_THROWS_AS(run_thread(lb, 1, {}), ArityError);
    Trace a = run_thread(lb, 2, {1}), b = run_thread(lb, 2, {1});
    REQUIRE(a.events.size() == b.events.size());
    for (std::size_t i = 0; i < a.events.size(); ++i) {
      CHECK(a.events[i].id == b.events[i].id);
      CHECK(a.events[i].label == b.events[i].label);
    }
    CHECK(a.data == b.data);
  }

  TEST_CASE("data dependencies flow through register copies") {
    Program p = parse_program(R"(
      locations x y z;
      a = load(rlx, x)
      b = a
      c = load(rlx, y)
      store(rlx, z, b + 0*c)
      store(rlx, z, 5)
    )");
    Trace t = run_thread(p, 1, {0, 0});
    CHECK(t.data == Rel(4, {{0, 2}, {1, 2}}));
  }

  TEST_CASE("enumerate: LB contains the a=b=1 graph") {
    Program lb = corpus("lb");
    ExecutionGraph g = lb_graph(lb);
    CHECK(g.size() == 6);
    CHECK(g.rf.size() == 2);
    CHECK(well_formed(g));
  }

  TEST_CASE("enumerate: single store gives one candidate") {
    Program p = parse_program("locations x;\nstore(rlx, x, 1)\n");
    auto gs = enumerate_executions(p);
    REQUIRE(gs.size() == 1);
    CHECK(gs[0].co.size() == 1);
  }

  TEST_CASE("enumerate: candidate count matches the combinatorial oracle") {
    for (const auto& f : corpus_files()) {
      Program p = load_program(f);
      CAPTURE(p.name);
      CHECK(enumerate_executions(p).size() == oracle_candidate_count(p));
    }
    // Frozen from the oracle.
    CHECK(enumerate_executions(corpus("lb")).size() == 4);
  }

  TEST_CASE("enumerate: every candidate is complete, co-total, ppo within [R];po;[W]") {
    for (const auto& f : corpus_files()) {
      Program p = load_program(f);
      CAPTURE(p.name);
      for (const auto& g : enumerate_executions(p)) {
        REQUIRE(well_formed(g));
        CHECK(g.rf.codomain() == g.reads());
        CHECK(g.ppo.subset_of(restrict(g.po, g.reads(), g.writes())));
      }
    }
  }

  TEST_CASE("LB-fake and LB-data conflate the a=b=1 execution") {
    // The graphs of the annotated outcome agree on events, labels, data,
    // ppo, rf and co.  Other outcomes differ in stored values.
    ExecutionGraph fake = lb_graph(corpus("lb-fake"));
    ExecutionGraph data = lb_graph(corpus("lb-data"));
    CHECK(fake.ids == data.ids);
    CHECK(fake.labels == data.labels);
    CHECK(fake.data == data.data);
    CHECK(fake.ppo == data.ppo);
    CHECK(fake.rf == data.rf);
    CHECK(fake.co == data.co);
  }

  TEST_CASE("outcomes: final state and runs_to_completion") {
    Program lb = corpus("lb");
    ExecutionGraph g = lb_graph(lb);
    FinalState st = final_state(lb, g);
    CHECK(satisfies(lb.outcomes[0], st));
    CHECK(runs_to_completion(lb, g));
    CHECK(describe_outcome(lb, st) == "1:a=1 2:b=1 x=1 y=1");
  }
}
