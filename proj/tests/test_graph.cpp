// Copyright (c) 2026, The wmlab Authors.
// Licensed under the Apache License, Version 2.0.

#include <doctest.h>

#include <regex>

#include "support.hpp"
#include "wmlab/models.hpp"

using namespace wmtest;

namespace {

// R(x,2) W^sc(y,1) || W^sc(y,2) || R(y,2) W(x,2), co: y1 before y2.
ExecutionGraph sc_store_order_graph() {
  Program p = corpus("sc-store-order");
  return graph_with_rf(
      p, {{ev(2, 1), ev(3, 1)}, {ev(3, 2), ev(1, 1)}},
      [](const ExecutionGraph& g) {
        return g.co.contains(g.at(ev(1, 2)), g.at(ev(2, 1)));
      });
}

std::size_t count_matches(const std::string& s, const std::string& re) {
  std::regex r(re);
  return static_cast<std::size_t>(
      std::distance(std::sregex_iterator(s.begin(), s.end(), r),
                    std::sregex_iterator()));
}

}  // namespace

TEST_SUITE("exec_graph") {
  TEST_CASE("derive: LB eco edges") {
    ExecutionGraph g = lb_graph(corpus("lb"));
    DerivedRels d = derive(g);
    CHECK(d.eco.contains(g.at(ev(1, 2)), g.at(ev(2, 1))));
    CHECK(d.eco.contains(g.at(ev(0, 0)), g.at(ev(2, 2))));
    CHECK(d.hb == g.po);
  }

  TEST_CASE("derive: no SC events means empty psc") {
    for (const auto& g : enumerate_executions(corpus("mp"))) {
      DerivedRels d = derive(g);
      CHECK(d.psc_base.empty());
      CHECK(d.psc_f.empty());
    }
  }

  TEST_CASE("derive: the SC-write example has a psc_base edge between the SC writes") {
    ExecutionGraph g = sc_store_order_graph();
    DerivedRels d = derive(g);
    CHECK(d.psc_base.contains(g.at(ev(1, 2)), g.at(ev(2, 1))));
    CHECK_FALSE(d.psc_base.contains(g.at(ev(2, 1)), g.at(ev(1, 2))));
  }

  TEST_CASE("derive: sw is release-to-acquire rf") {
    Program mp = corpus("mp-relacq");
    for (const auto& g : enumerate_executions(mp)) {
      DerivedRels d = derive(g);
      const auto y_w = g.at(ev(1, 2)), y_r = g.at(ev(2, 1));
      CHECK(d.sw.contains(y_w, y_r) == g.rf.contains(y_w, y_r));
      CHECK(d.sw.size() <= 1);
    }
  }

  TEST_CASE("eco closed form and hb/fr properties on every corpus candidate") {
    for (const auto& f : corpus_files()) {
      Program p = load_program(f);
      CAPTURE(p.name);
      for (const auto& g : enumerate_executions(p)) {
        DerivedRels d = derive(g);
        const Rel closed = g.rf | compose(g.co, opt(g.rf)) | compose(d.fr, opt(g.rf));
        REQUIRE(d.eco == closed);
        CHECK(d.hb.is_transitive());
        CHECK(g.po.subset_of(d.hb));
        CHECK(d.fr.subset_of(g.same_loc()));
        if (check_imm(g).consistent) CHECK(d.fr.is_irreflexive());
        // derive is a pure function
        DerivedRels again = derive(g);
        CHECK(again.psc_base == d.psc_base);
      }
    }
  }

  TEST_CASE("well_formed: LB graph and two broken variants") {
    ExecutionGraph g = lb_graph(corpus("lb"));
    CHECK(well_formed(g));

    ExecutionGraph dup = g;  // second source for R(y,1)
    dup.add(dup.rf, ev(0, 1), ev(2, 1));
    CHECK_FALSE(well_formed(dup));

    ExecutionGraph gap = g;  // init_x and W(x,1) unordered
    gap.co.erase(gap.at(ev(0, 0)), gap.at(ev(2, 2)));
    CHECK_FALSE(well_formed(gap));
    CHECK_THROWS_AS(derive(gap), StructuralError);

    ExecutionGraph norf = g;  // missing rf keeps the graph well formed
    norf.rf = Rel(g.size());
    norf.ppo = preserved_program_order(norf);
    CHECK(well_formed(norf));
  }

  TEST_CASE("to_dot: LB shape") {
    ExecutionGraph g = lb_graph(corpus("lb"));
    const std::string dot = to_dot(g);
    CHECK(count_matches(dot, R"(\n    e\d+_\d+ \[label=)") == 4);
    CHECK(count_matches(dot, R"(label="rf")") == 2);
    CHECK(dot.find("init [label=\"Init\"]") != std::string::npos);
  }

  TEST_CASE("to_dot: no threads gives only the init node") {
    Program p = parse_program("locations x y;\n");
    const std::string dot = to_dot(init_graph(p));
    CHECK(count_matches(dot, R"(\[label=)") == 1);
    CHECK(count_matches(dot, "->") == 0);
  }

  TEST_CASE("to_dot: node and edge counts match the graph") {
    for (const auto& f : corpus_files()) {
      Program p = load_program(f);
      for (const auto& g : enumerate_executions(p)) {
        DotOptions opts;
        opts.show_fr = false;
        opts.show_ppo = false;
        const std::string dot = to_dot(g, opts);
        std::size_t non_init = g.size() - g.init_events().size();
        CHECK(count_matches(dot, R"(\n    e\d+_\d+ \[label=)") == non_init);
        // init collapses to one node, so edges out of it are deduplicated
        auto name = [&](std::size_t i) {
          return g.ids[i].is_init() ? std::string("init") : to_string(g.ids[i]);
        };
        const Rel po_imm = g.po - compose(g.po, g.po);
        const Rel co_imm = g.co - compose(g.co, g.co);
        std::size_t n = 0;
        for (const Rel* rel : {&po_imm, &g.rf, &co_imm}) {
          std::set<std::pair<std::string, std::string>> seen;
          rel->for_each([&](std::size_t a, std::size_t b) {
            if (name(a) != name(b)) seen.insert({name(a), name(b)});
          });
          n += seen.size();
        }
        CHECK(count_matches(dot, "->") == n);
      }
    }
  }

  TEST_CASE("to_json: fixed field names") {
    ExecutionGraph g = lb_graph(corpus("lb"));
    auto j = to_json(g);
    for (const char* k : {"events", "po", "rf", "co", "data", "ppo"})
      CHECK(j.contains(k));
    CHECK(j["events"].size() == 6);
    CHECK(j["rf"].size() == 2);
  }
}
