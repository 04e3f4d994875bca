// Copyright (c) 2026, The wmlab Authors.
// Licensed under the Apache License, Version 2.0.

#include <doctest.h>

#include "support.hpp"
#include "wmlab/models.hpp"

using namespace wmtest;

namespace {

ExecutionGraph single_store(Mode m) {
  Program p = parse_program(std::string("locations x;\nstore(") +
                            std::string(to_string(m)) + ", x, 1)\n");
  return enumerate_executions(p).at(0);
}

bool is_cycle_in(const std::vector<EventId>& cyc, const ExecutionGraph& g,
                 const Rel& r) {
  if (cyc.empty()) return false;
  for (std::size_t i = 0; i < cyc.size(); ++i)
    if (!r.contains(g.at(cyc[i]), g.at(cyc[(i + 1) % cyc.size()])))
      return false;
  return true;
}

// Whether some candidate consistent under `model` satisfies the clause.
bool allowed(const Program& p, const OutcomeClause& c, const std::string& model,
             const CheckOptions& opts = {}) {
  for (const auto& g : enumerate_executions(p))
    if (satisfies(c, final_state(p, g)) && check_model(model, g, opts).consistent)
      return true;
  return false;
}

}  // namespace

TEST_SUITE("models") {
  TEST_CASE("imm: LB allowed, LB-data cycle, single store") {
    CHECK(check_imm(lb_graph(corpus("lb"))).consistent);

    ExecutionGraph g = lb_graph(corpus("lb-data"));
    Verdict v = check_imm(g);
    REQUIRE_FALSE(v.consistent);
    CHECK(v.violated == std::vector<std::string>{"no-thin-air"});
    REQUIRE(v.witnesses.size() == 1);
    CHECK(v.witnesses[0].events.size() == 4);
    CHECK(is_cycle_in(v.witnesses[0].events, g, g.rf | g.ppo));
    // alternating rf and ppo
    for (std::size_t i = 0; i < 4; ++i) {
      auto a = g.at(v.witnesses[0].events[i]);
      auto b = g.at(v.witnesses[0].events[(i + 1) % 4]);
      CHECK(g.rf.contains(a, b) != g.ppo.contains(a, b));
    }

    CHECK(check_imm(single_store(Mode::Rlx)).consistent);
  }

  TEST_CASE("immsc: SC-write example and strict mode") {
    Program p = corpus("sc-store-order");
    ExecutionGraph g = graph_with_rf(
        p, {{ev(2, 1), ev(3, 1)}, {ev(3, 2), ev(1, 1)}},
        [](const ExecutionGraph& h) {
          return h.co.contains(h.at(ev(1, 2)), h.at(ev(2, 1)));
        });
    CHECK(check_immsc(g).consistent);
    Verdict strict = check_immsc(g, ImmOptions{true});
    CHECK_FALSE(strict.consistent);
    CHECK(strict.violated == std::vector<std::string>{"no-thin-air"});
    const DerivedRels d = derive(g);
    CHECK(is_cycle_in(strict.witnesses[0].events, g,
                      g.rf | g.ppo | barrier_order(g) | d.psc_base | d.psc_f));
  }

  TEST_CASE("immsc equals imm without SC events") {
    for (const char* name : {"lb", "lb-data", "mp", "mp-relacq", "sb", "corr"})
      for (const auto& g : enumerate_executions(corpus(name))) {
        CHECK(check_immsc(g).consistent == check_imm(g).consistent);
        CHECK(check_immsc(g).violated == check_imm(g).violated);
      }
  }

  TEST_CASE("rc11: LB forbidden by po ∪ rf, MP reading both writes, one thread") {
    Verdict v = check_rc11(lb_graph(corpus("lb")));
    CHECK(v.violated == std::vector<std::string>{"po-rf-acyclic"});

    Program mp = corpus("mp-relacq");
    ExecutionGraph both = graph_with_rf(mp, {{ev(1, 2), ev(2, 1)}, {ev(1, 1), ev(2, 2)}});
    CHECK(check_rc11(both).consistent);
    // hb runs from the release write to the acquire read, so reading init
    // for x afterwards is a coherence violation.
    ExecutionGraph stale = graph_with_rf(mp, {{ev(1, 2), ev(2, 1)}, {ev(0, 0), ev(2, 2)}});
    CHECK(check_rc11(stale).violated == std::vector<std::string>{"coherence"});

    CHECK(check_rc11(single_store(Mode::Sc)).consistent);
  }

  TEST_CASE("tso: LB, SB and fenced SB") {
    ExecutionGraph lb = lb_graph(corpus("lb"));
    Verdict v = check_tso(map_to_tso(lb, TsoScheme::FenceAfterScWrite));
    CHECK(v.violated == std::vector<std::string>{"tso-no-thin-air"});
    CHECK(v.witnesses[0].events.size() == 4);

    ExecutionGraph sb = graph_with_rf(corpus("sb"), {{ev(0, 1), ev(1, 2)}, {ev(0, 0), ev(2, 2)}});
    CHECK(check_tso(map_to_tso(sb, TsoScheme::FenceAfterScWrite)).consistent);

    ExecutionGraph sbf = graph_with_rf(corpus("sb-fence"), {{ev(0, 1), ev(1, 3)}, {ev(0, 0), ev(2, 3)}});
    CHECK(check_tso(map_to_tso(sbf, TsoScheme::FenceAfterScWrite)).violated ==
          std::vector<std::string>{"tso-no-thin-air"});
  }

  TEST_CASE("armv8: LB, LB-data, SC LB") {
    CHECK(check_armv8(map_to_armv8(lb_graph(corpus("lb")))).consistent);
    CHECK(check_armv8(map_to_armv8(lb_graph(corpus("lb-data")))).violated ==
          std::vector<std::string>{"external"});
    Program sc = parse_program(R"(
      locations x y;
      a = load(sc, x)
      store(sc, y, 1)
      |||
      b = load(sc, y)
      store(sc, x, 1)
    )");
    ExecutionGraph g = lb_graph(sc);
    CHECK(check_armv8(map_to_armv8(g)).violated == std::vector<std::string>{"external"});
  }

  TEST_CASE("map_to_tso: fence placement for both schemes") {
    TsoGraph t = map_to_tso(single_store(Mode::Sc), TsoScheme::FenceAfterScWrite);
    REQUIRE(t.size() == 3);
    CHECK(t.ids[1] == ev(1, 2));
    CHECK(t.labels[1].kind == Kind::Write);
    CHECK(t.ids[2] == ev(1, 3));
    CHECK(t.labels[2].kind == Kind::Fence);
    CHECK(map_to_tso(single_store(Mode::Sc), TsoScheme::FenceBeforeScRead).size() == 2);

    Program r = parse_program("locations x;\na = load(sc, x)\n");
    TsoGraph tr = map_to_tso(enumerate_executions(r).at(0), TsoScheme::FenceBeforeScRead);
    REQUIRE(tr.size() == 3);
    CHECK(tr.labels[1].kind == Kind::Fence);
    CHECK(tr.ids[1] == ev(1, 1));
    CHECK(tr.rf.size() == 1);
    // non-SC fences disappear
    Program f = parse_program("locations x;\nfence(acq)\nfence(sc)\n");
    CHECK(map_to_tso(enumerate_executions(f).at(0), TsoScheme::FenceAfterScWrite).size() == 2);
  }

  TEST_CASE("map_to_armv8: label alphabet") {
    Program p = parse_program(R"(
      locations x;
      a = load(sc, x)
      b = load(acq, x)
      store(rel, x, 1)
      fence(acq)
      fence(rel)
    )");
    ArmGraph a = map_to_armv8(enumerate_executions(p).at(0));
    CHECK(a.labels[1].mode == ArmMode::A);
    CHECK(a.labels[2].mode == ArmMode::Q);
    CHECK(a.labels[3].mode == ArmMode::L);
    CHECK(a.labels[4].mode == ArmMode::Ld);
    CHECK(a.labels[5].mode == ArmMode::Sy);
  }

  TEST_CASE("split_sc: leading fence, weakened mode, no-SC identity") {
    ExecutionGraph s = split_sc(single_store(Mode::Sc));
    REQUIRE(s.size() == 3);
    CHECK(s.labels[1] == Label{Kind::Fence, Mode::Sc, kNoLoc, 0});
    CHECK(s.labels[2].mode == Mode::Rel);
    CHECK(s.co.size() == 1);
    for (const auto& g : enumerate_executions(corpus("lb"))) {
      ExecutionGraph h = split_sc(g);
      CHECK(h.ids == g.ids);
      CHECK(h.labels == g.labels);
      CHECK(h.rf == g.rf);
      CHECK(h.co == g.co);
      CHECK(h.ppo == g.ppo);
    }
  }

  TEST_CASE("compilation implications on every corpus candidate") {
    std::size_t checked = 0;
    for (const auto& f : corpus_files()) {
      Program p = load_program(f);
      CAPTURE(p.name);
      for (const auto& g : enumerate_executions(p)) {
        const bool src = check_immsc(g).consistent;
        for (auto s : {TsoScheme::FenceAfterScWrite, TsoScheme::FenceBeforeScRead})
          if (check_tso(map_to_tso(g, s)).consistent) CHECK(src);
        if (check_armv8(map_to_armv8(g)).consistent) CHECK(src);
        if (check_imm(split_sc(g)).consistent) CHECK(src);
        if (check_rc11(g).consistent) CHECK(src);
        ++checked;
      }
    }
    CHECK(checked > 50);
  }

  TEST_CASE("witnesses are cycles in the named relation") {
    for (const auto& f : corpus_files()) {
      Program p = load_program(f);
      for (const auto& g : enumerate_executions(p)) {
        const DerivedRels d = derive(g);
        for (bool strict : {false, true}) {
          Verdict v = check_immsc(g, ImmOptions{strict});
          CHECK(v.consistent == v.violated.empty());
          REQUIRE(v.witnesses.size() == v.violated.size());
          for (const auto& w : v.witnesses) {
            CAPTURE(w.axiom);
            if (w.axiom == "completeness") {
              REQUIRE(w.events.size() == 1);
              CHECK_FALSE(g.rf.codomain().contains(g.at(w.events[0])));
            } else if (w.axiom == "coherence") {
              CHECK(is_cycle_in(w.events, g, d.hb | d.eco));
            } else if (w.axiom == "psc") {
              CHECK(is_cycle_in(w.events, g, d.psc_base | d.psc_f));
            } else {
              const Rel r = strict ? g.rf | g.ppo | barrier_order(g) | d.psc_base | d.psc_f
                                   : g.rf | g.ppo;
              CHECK(is_cycle_in(w.events, g, r));
            }
          }
        }
      }
    }
  }

  TEST_CASE("corpus annotations agree with the graph-level checkers") {
    for (const auto& f : corpus_files()) {
      Program p = load_program(f);
      for (const auto& c : p.outcomes)
        for (const auto& [model, expect] : c.expect) {
          if (model == "weakestmo") continue;
          CAPTURE(p.name);
          CAPTURE(model);
          CHECK(allowed(p, c, model) == expect);
          if (model == "tso")
            CHECK(allowed(p, c, model, {false, TsoScheme::FenceBeforeScRead}) == expect);
        }
    }
  }

  TEST_CASE("check_model rejects unknown names") {
    CHECK_THROWS_AS(check_model("power", single_store(Mode::Rlx)), UnsupportedFeature);
  }
}
