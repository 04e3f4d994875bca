// Copyright (c) 2026, The wmlab Authors.
// Licensed under the Apache License, Version 2.0.

#ifndef WMLAB_GRAPH_HPP_
#define WMLAB_GRAPH_HPP_

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "wmlab/error.hpp"
#include "wmlab/label.hpp"
#include "wmlab/rel.hpp"

namespace wmlab {

// An execution graph.  Events are kept sorted by EventId, so index order is
// init events first (one per location), then thread 1 by serial, and so on.
// Relations are over event indices.
template <class L>
struct BasicGraph {
  std::vector<std::string> locations;
  std::vector<EventId> ids;
  std::vector<L> labels;
  Rel po, rf, co, data, ppo;

  std::size_t size() const { return ids.size(); }

  std::optional<std::size_t> index_of(EventId id) const {
    auto it = std::lower_bound(ids.begin(), ids.end(), id);
    if (it == ids.end() || *it != id) return std::nullopt;
    return static_cast<std::size_t>(it - ids.begin());
  }
  std::size_t at(EventId id) const {
    auto i = index_of(id);
    if (!i) throw StructuralError("no event " + to_string(id));
    return *i;
  }
  void add(Rel& r, EventId a, EventId b) const { r.insert(at(a), at(b)); }

  template <class Pred>
  EventSet select(Pred&& pred) const {
    EventSet s(size());
    for (std::size_t i = 0; i < size(); ++i)
      if (pred(i)) s.insert(i);
    return s;
  }
  EventSet all() const { return EventSet::full(size()); }
  EventSet init_events() const {
    return select([&](std::size_t i) { return ids[i].is_init(); });
  }
  EventSet reads() const {
    return select([&](std::size_t i) { return labels[i].is_read(); });
  }
  EventSet writes() const {
    return select([&](std::size_t i) { return labels[i].is_write(); });
  }
  EventSet fences() const {
    return select([&](std::size_t i) { return labels[i].is_fence(); });
  }
  EventSet thread_events(std::uint32_t tid) const {
    return select([&](std::size_t i) { return ids[i].tid == tid; });
  }
  std::vector<std::uint32_t> thread_ids() const {
    std::vector<std::uint32_t> out;
    for (auto id : ids)
      if (!id.is_init() && (out.empty() || out.back() != id.tid))
        out.push_back(id.tid);
    return out;
  }

  // Fences have no location: they never share one with anything.
  Rel same_loc() const {
    Rel r(size());
    for (std::size_t a = 0; a < size(); ++a)
      for (std::size_t b = 0; b < size(); ++b)
        if (!labels[a].is_fence() && !labels[b].is_fence() &&
            labels[a].loc == labels[b].loc)
          r.insert(a, b);
    return r;
  }
  Rel diff_loc() const {
    return Rel::product(all(), all()) - same_loc();
  }
  // Pairs in different threads; the init thread counts as its own thread.
  Rel external(const Rel& r) const {
    Rel out(size());
    r.for_each([&](std::size_t a, std::size_t b) {
      if (ids[a].tid != ids[b].tid) out.insert(a, b);
    });
    return out;
  }
  Rel internal(const Rel& r) const { return r - external(r); }
  Rel fr() const { return compose(rf.inverse(), co); }

  // Program order from the ids: init before everything else, then serial
  // order within each thread.
  Rel program_order() const {
    Rel r(size());
    for (std::size_t a = 0; a < size(); ++a)
      for (std::size_t b = 0; b < size(); ++b) {
        if (ids[b].is_init()) continue;
        if (ids[a].is_init() ||
            (ids[a].tid == ids[b].tid && ids[a].serial < ids[b].serial))
          r.insert(a, b);
      }
    return r;
  }
};

using ExecutionGraph = BasicGraph<Label>;
using TsoGraph = BasicGraph<TsoLabel>;

struct ArmGraph : BasicGraph<ArmLabel> {
  // The litmus language has no branches or computed addresses, so these are
  // always empty; they are here so the ARM ordering terms read as usual.
  Rel addr, ctrl;
};

// Builds a graph with empty relations and po computed from the ids.  Events
// are sorted by id.
template <class G, class L>
G make_graph(std::vector<std::string> locations,
             std::vector<std::pair<EventId, L>> events) {
  std::sort(events.begin(), events.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  G g;
  g.locations = std::move(locations);
  for (auto& [id, lab] : events) {
    if (!g.ids.empty() && g.ids.back() == id)
      throw StructuralError("duplicate event " + to_string(id));
    g.ids.push_back(id);
    g.labels.push_back(lab);
  }
  const std::size_t n = g.ids.size();
  g.po = g.rf = g.co = g.data = g.ppo = Rel(n);
  if constexpr (requires { g.addr; }) g.addr = g.ctrl = Rel(n);
  g.po = g.program_order();
  return g;
}

// Well-formedness problems of g; empty when g is well formed.
std::vector<std::string> well_formedness_issues(const ExecutionGraph& g);
inline bool well_formed(const ExecutionGraph& g) {
  return well_formedness_issues(g).empty();
}

struct DerivedRels {
  Rel fr, eco, sw, hb, scb, psc_base, psc_f;
};

// Throws StructuralError on an ill-formed graph.
DerivedRels derive(const ExecutionGraph& g);

EventSet sc_events(const ExecutionGraph& g);
EventSet sc_fences(const ExecutionGraph& g);

struct DotOptions {
  std::string name = "G";
  bool show_fr = true;
  bool show_ppo = true;
};

std::string to_dot(const ExecutionGraph& g, const DotOptions& opts = {});
std::string to_dot(const TsoGraph& g, const DotOptions& opts = {});
std::string to_dot(const ArmGraph& g, const DotOptions& opts = {});

nlohmann::json event_id_json(EventId id);
nlohmann::json to_json(const ExecutionGraph& g);
nlohmann::json to_json(const TsoGraph& g);
nlohmann::json to_json(const ArmGraph& g);

// Short one-line rendering, e.g. "a=1 b=1 | rf: (0,0)->(1,1) ...".
std::string describe(const ExecutionGraph& g);

}  // namespace wmlab

#endif  // WMLAB_GRAPH_HPP_
