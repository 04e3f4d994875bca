// Copyright (c) 2026, The wmlab Authors.
// Licensed under the Apache License, Version 2.0.

#include "wmlab/graph.hpp"

#include <set>
#include <sstream>

namespace wmlab {

namespace {

std::string pair_str(const ExecutionGraph& g, std::size_t a, std::size_t b) {
  return to_string(g.ids[a]) + "->" + to_string(g.ids[b]);
}

}  // namespace

std::vector<std::string> well_formedness_issues(const ExecutionGraph& g) {
  std::vector<std::string> issues;
  const std::size_t n = g.size();
  if (g.labels.size() != n) {
    issues.push_back("label count differs from event count");
    return issues;
  }
  for (const Rel* r : {&g.po, &g.rf, &g.co, &g.data, &g.ppo})
    if (r->universe() != n) {
      issues.push_back("relation carrier differs from event count");
      return issues;
    }
  for (std::size_t i = 1; i < n; ++i)
    if (!(g.ids[i - 1] < g.ids[i])) issues.push_back("events not sorted by id");
  for (std::size_t i = 0; i < n; ++i) {
    const Label& l = g.labels[i];
    if (g.ids[i].is_init() && !l.is_write())
      issues.push_back("init event " + to_string(g.ids[i]) + " is not a write");
    if (!l.is_fence() &&
        (l.loc < 0 || static_cast<std::size_t>(l.loc) >= g.locations.size()))
      issues.push_back("event " + to_string(g.ids[i]) + " has a bad location");
  }

  if (g.po != g.program_order())
    issues.push_back("po is not the per-thread serial order after init");

  const EventSet R = g.reads(), W = g.writes();
  g.rf.for_each([&](std::size_t w, std::size_t r) {
    if (!W.contains(w) || !R.contains(r))
      issues.push_back("rf edge " + pair_str(g, w, r) + " not write-to-read");
    else if (g.labels[w].loc != g.labels[r].loc ||
             g.labels[w].val != g.labels[r].val)
      issues.push_back("rf edge " + pair_str(g, w, r) +
                       " disagrees on location or value");
  });
  if (!g.rf.inverse().is_functional())
    issues.push_back("some read has more than one rf source");

  g.co.for_each([&](std::size_t a, std::size_t b) {
    if (!W.contains(a) || !W.contains(b) ||
        g.labels[a].loc != g.labels[b].loc)
      issues.push_back("co edge " + pair_str(g, a, b) +
                       " not between same-location writes");
  });
  if (!g.co.is_irreflexive()) issues.push_back("co is reflexive");
  if (!g.co.is_transitive()) issues.push_back("co is not transitive");
  W.for_each([&](std::size_t a) {
    W.for_each([&](std::size_t b) {
      if (a < b && g.labels[a].loc == g.labels[b].loc &&
          !g.co.contains(a, b) && !g.co.contains(b, a))
        issues.push_back("co does not order " + pair_str(g, a, b));
    });
  });

  if (!g.data.subset_of(g.po)) issues.push_back("data is not within po");
  if (!g.ppo.subset_of(restrict(g.po, R, W)))
    issues.push_back("ppo is not within [R];po;[W]");
  return issues;
}

EventSet sc_events(const ExecutionGraph& g) {
  return g.select([&](std::size_t i) { return g.labels[i].mode == Mode::Sc; });
}

EventSet sc_fences(const ExecutionGraph& g) {
  return sc_events(g) & g.fences();
}

DerivedRels derive(const ExecutionGraph& g) {
  if (auto issues = well_formedness_issues(g); !issues.empty())
    throw StructuralError("ill-formed graph: " + issues.front());
  DerivedRels d;
  d.fr = g.fr();
  d.eco = plus(g.co | g.rf | d.fr);

  const EventSet rel_writes = g.select([&](std::size_t i) {
    return g.labels[i].is_write() && at_least_rel(g.labels[i].mode);
  });
  const EventSet acq_reads = g.select([&](std::size_t i) {
    return g.labels[i].is_read() && at_least_acq(g.labels[i].mode);
  });
  d.sw = restrict(g.rf, rel_writes, acq_reads);
  d.hb = plus(g.po | d.sw);

  const Rel loc = g.same_loc();
  const Rel po_other_loc = g.po - loc;
  d.scb = g.po | compose({po_other_loc, d.hb, po_other_loc}) | (d.hb & loc) |
          g.co | d.fr;

  const EventSet sc = sc_events(g);
  const EventSet fsc = sc & g.fences();
  const Rel hb_opt = opt(d.hb);
  const Rel left = Rel::identity_on(sc) | compose(Rel::identity_on(fsc), hb_opt);
  const Rel right =
      Rel::identity_on(sc) | compose(hb_opt, Rel::identity_on(fsc));
  d.psc_base = compose({left, d.scb, right});
  d.psc_f = restrict(d.hb | compose({d.hb, d.eco, d.hb}), fsc, fsc);
  return d;
}

// ---------------------------------------------------------------- DOT

namespace {

struct DotEdge {
  std::string from, to, rel;
  auto operator<=>(const DotEdge&) const = default;
};

template <class G>
std::string render_dot(const G& g, const DotOptions& opts) {
  auto node = [&](std::size_t i) {
    return g.ids[i].is_init()
               ? std::string("init")
               : "e" + std::to_string(g.ids[i].tid) + "_" +
                     std::to_string(g.ids[i].serial);
  };
  std::ostringstream os;
  os << "digraph \"" << opts.name << "\" {\n";
  os << "  node [shape=plaintext, fontname=\"Helvetica\"];\n";
  if (!g.init_events().empty()) os << "  init [label=\"Init\"];\n";
  for (auto tid : g.thread_ids()) {
    os << "  subgraph cluster_t" << tid << " {\n    label=\"T" << tid
       << "\"; style=dotted;\n";
    g.thread_events(tid).for_each([&](std::size_t i) {
      os << "    " << node(i) << " [label=\""
         << to_string(g.labels[i], g.locations) << "\"];\n";
    });
    os << "  }\n";
  }

  std::set<DotEdge> edges;
  auto add_all = [&](const Rel& r, const char* name) {
    r.for_each([&](std::size_t a, std::size_t b) {
      if (node(a) != node(b)) edges.insert({node(a), node(b), name});
    });
  };
  const Rel po_imm = g.po - compose(g.po, g.po);
  const Rel co_imm = g.co - compose(g.co, g.co);
  const Rel fr = g.fr();
  add_all(po_imm, "po");
  add_all(g.rf, "rf");
  add_all(co_imm, "co");
  if (opts.show_fr) add_all(fr - compose(fr, g.co), "fr");
  if (opts.show_ppo) add_all(g.ppo, "ppo");

  for (const auto& e : edges) {
    os << "  " << e.from << " -> " << e.to;
    if (e.rel == "po")
      os << " [style=solid];\n";
    else if (e.rel == "rf")
      os << " [label=\"rf\", color=\"darkgreen\", fontcolor=\"darkgreen\"];\n";
    else if (e.rel == "co")
      os << " [label=\"co\", color=\"red\", fontcolor=\"red\"];\n";
    else if (e.rel == "fr")
      os << " [label=\"fr\", color=\"orange\", fontcolor=\"orange\"];\n";
    else
      os << " [label=\"ppo\", color=\"blue\", fontcolor=\"blue\", "
            "style=dashed];\n";
  }
  os << "}\n";
  return os.str();
}

template <class G>
nlohmann::json render_json(const G& g) {
  using nlohmann::json;
  json j;
  j["locations"] = g.locations;
  json events = json::array();
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto& l = g.labels[i];
    json e;
    e["id"] = event_id_json(g.ids[i]);
    e["kind"] = std::string(to_string(l.kind));
    if constexpr (requires { l.mode; }) e["mode"] = std::string(to_string(l.mode));
    if (!l.is_fence()) {
      e["loc"] = g.locations.at(static_cast<std::size_t>(l.loc));
      e["val"] = l.val;
    }
    e["label"] = to_string(l, g.locations);
    events.push_back(std::move(e));
  }
  j["events"] = std::move(events);
  auto edges = [&](const Rel& r) {
    json arr = json::array();
    r.for_each([&](std::size_t a, std::size_t b) {
      arr.push_back(json::array({event_id_json(g.ids[a]),
                                 event_id_json(g.ids[b])}));
    });
    return arr;
  };
  j["po"] = edges(g.po);
  j["rf"] = edges(g.rf);
  j["co"] = edges(g.co);
  j["data"] = edges(g.data);
  j["ppo"] = edges(g.ppo);
  return j;
}

}  // namespace

std::string to_dot(const ExecutionGraph& g, const DotOptions& opts) {
  return render_dot(g, opts);
}
std::string to_dot(const TsoGraph& g, const DotOptions& opts) {
  return render_dot(g, opts);
}
std::string to_dot(const ArmGraph& g, const DotOptions& opts) {
  return render_dot(g, opts);
}

nlohmann::json event_id_json(EventId id) {
  return nlohmann::json::array({id.tid, id.serial});
}

nlohmann::json to_json(const ExecutionGraph& g) { return render_json(g); }
nlohmann::json to_json(const TsoGraph& g) { return render_json(g); }
nlohmann::json to_json(const ArmGraph& g) { return render_json(g); }

std::string describe(const ExecutionGraph& g) {
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (g.ids[i].is_init()) continue;
    os << (first ? "" : " ") << to_string(g.ids[i]) << ":"
       << to_string(g.labels[i], g.locations);
    first = false;
  }
  os << " | rf:";
  g.rf.for_each([&](std::size_t a, std::size_t b) {
    os << " " << to_string(g.ids[a]) << "->" << to_string(g.ids[b]);
  });
  os << " | co:";
  const Rel co_imm = g.co - compose(g.co, g.co);
  co_imm.for_each([&](std::size_t a, std::size_t b) {
    os << " " << to_string(g.ids[a]) << "->" << to_string(g.ids[b]);
  });
  return os.str();
}

}  // namespace wmlab
