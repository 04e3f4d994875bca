// Copyright (c) 2026, The wmlab Authors.
// Licensed under the Apache License, Version 2.0.

// Shared fixtures for the unit and acceptance tests.

#ifndef WMLAB_TESTS_SUPPORT_HPP_
#define WMLAB_TESTS_SUPPORT_HPP_

#include <algorithm>
#include <filesystem>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "wmlab/event_structure.hpp"
#include "wmlab/graph.hpp"
#include "wmlab/litmus.hpp"

namespace wmtest {

using namespace wmlab;

inline std::filesystem::path corpus_dir() { return WMLAB_CORPUS_DIR; }

inline Program corpus(const std::string& name) {
  return load_program(corpus_dir() / (name + ".lit"));
}

inline std::vector<std::filesystem::path> corpus_files() {
  std::vector<std::filesystem::path> out;
  for (const auto& e : std::filesystem::directory_iterator(corpus_dir()))
    if (e.path().extension() == ".lit") out.push_back(e.path());
  std::sort(out.begin(), out.end());
  return out;
}

inline EventId ev(std::uint32_t tid, std::uint32_t serial) {
  return EventId{tid, serial};
}

// The candidate of p whose rf is exactly `rf` (pairs of ids).  For the
// programs used here co is fixed once rf is, except where noted.
inline ExecutionGraph graph_with_rf(
    const Program& p, const std::vector<std::pair<EventId, EventId>>& rf,
    const std::function<bool(const ExecutionGraph&)>& extra = nullptr) {
  for (const auto& g : enumerate_executions(p)) {
    if (g.rf.size() != rf.size()) continue;
    bool match = true;
    for (auto [w, r] : rf) {
      auto wi = g.index_of(w), ri = g.index_of(r);
      if (!wi || !ri || !g.rf.contains(*wi, *ri)) {
        match = false;
        break;
      }
    }
    if (match && (!extra || extra(g))) return g;
  }
  throw Error("no candidate with the requested rf");
}

// LB with a = b = 1: rf (1,2)->(2,1) and (2,2)->(1,1).  The values matter
// for LB-data, where the same rf also fits a = b = 0.
inline ExecutionGraph lb_graph(const Program& lb) {
  return graph_with_rf(lb, {{ev(1, 2), ev(2, 1)}, {ev(2, 2), ev(1, 1)}},
                       [](const ExecutionGraph& g) {
                         return g.labels[g.at(ev(1, 1))].val == 1 &&
                                g.labels[g.at(ev(2, 1))].val == 1;
                       });
}

// The three-location walkthrough graph: R(x,1) W(y,1) W(z,1) || R(y,0)
// R(z,1) W(x,1), with x read from thread 2 and z from thread 1.
inline ExecutionGraph xyz_graph(const Program& p) {
  return graph_with_rf(p, {{ev(2, 3), ev(1, 1)},
                           {ev(0, 1), ev(2, 1)},
                           {ev(1, 3), ev(2, 2)}});
}

// The same program's graph with every read seeing 1: y from thread 1, z from
// thread 1, x from thread 2.
inline ExecutionGraph xyz_all_ones(const Program& p) {
  return graph_with_rf(p, {{ev(2, 3), ev(1, 1)},
                           {ev(1, 2), ev(2, 1)},
                           {ev(1, 3), ev(2, 2)}});
}

// The six structures of the LB walkthrough, built step by step.  Event
// numbers: 0 init_x, 1 init_y, 2 R(x,0), 3 W(y,1), 4 R(y,1), 5 W(x,1),
// 6 R(x,1) (second branch of thread 1), 7 W(y,1) (ew-equal to 3).
struct LbStructures {
  EventStructure a, b, c, d, e, f;
};

inline LbStructures lb_structures(const Program& lb) {
  const Label rx0{Kind::Read, Mode::Rlx, 0, 0}, rx1{Kind::Read, Mode::Rlx, 0, 1};
  const Label wy1{Kind::Write, Mode::Rlx, 1, 1}, ry1{Kind::Read, Mode::Rlx, 1, 1};
  const Label wx1{Kind::Write, Mode::Rlx, 0, 1};
  auto choice = [](std::uint32_t tid, int parent, Label l) {
    EsChoice c;
    c.tid = tid;
    c.parent = parent;
    c.label = l;
    return c;
  };
  LbStructures s;
  EsChoice c = choice(1, kNone, rx0);
  c.justification = 0;
  s.a = add_event(EventStructure::initial(lb), c, lb);
  c = choice(1, 2, wy1);
  c.co_after = 1;
  s.b = add_event(s.a, c, lb);
  c = choice(2, kNone, ry1);
  c.justification = 3;
  s.c = add_event(s.b, c, lb);
  c = choice(2, 4, wx1);
  c.co_after = 0;
  s.d = add_event(s.c, c, lb);
  c = choice(1, kNone, rx1);
  c.justification = 5;
  s.e = add_event(s.d, c, lb);
  c = choice(1, 6, wy1);
  c.ew_with = 3;
  s.f = add_event(s.e, c, lb);
  return s;
}

}  // namespace wmtest

#endif  // WMLAB_TESTS_SUPPORT_HPP_
