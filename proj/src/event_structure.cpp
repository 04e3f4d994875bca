// Copyright (c) 2026, The wmlab Authors.
// Licensed under the Apache License, Version 2.0.

#include "wmlab/event_structure.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace wmlab {

// ------------------------------------------------------------ structure

EventStructure EventStructure::initial(const std::vector<std::string>& locations) {
  EventStructure s;
  s.locations_ = locations;
  s.co_order_.resize(locations.size());
  for (std::size_t l = 0; l < locations.size(); ++l) {
    EsEvent e;
    e.label = Label{Kind::Write, Mode::Rlx, static_cast<Loc>(l), 0};
    e.ew_class = s.next_class_++;
    s.events_.push_back(e);
    s.co_order_[l].push_back(e.ew_class);
  }
  return s;
}

std::vector<std::size_t> EventStructure::class_members(int ew_class) const {
  std::vector<std::size_t> out;
  for (std::size_t e = 0; e < size(); ++e)
    if (events_[e].label.is_write() && events_[e].ew_class == ew_class)
      out.push_back(e);
  return out;
}

EventSet EventStructure::init_events() const {
  EventSet s(size());
  for (std::size_t e = 0; e < init_count(); ++e) s.insert(e);
  return s;
}

EventSet EventStructure::reads() const {
  EventSet s(size());
  for (std::size_t e = 0; e < size(); ++e)
    if (events_[e].label.is_read()) s.insert(e);
  return s;
}

EventSet EventStructure::writes() const {
  EventSet s(size());
  for (std::size_t e = 0; e < size(); ++e)
    if (events_[e].label.is_write()) s.insert(e);
  return s;
}

EventSet EventStructure::thread_events(std::uint32_t tid) const {
  EventSet s(size());
  for (std::size_t e = 0; e < size(); ++e)
    if (events_[e].tid == tid) s.insert(e);
  return s;
}

std::vector<std::uint32_t> EventStructure::thread_ids() const {
  std::vector<std::uint32_t> out;
  for (const auto& e : events_)
    if (e.tid != 0) out.push_back(e.tid);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<std::size_t> EventStructure::children(std::uint32_t tid, int e) const {
  std::vector<std::size_t> out;
  for (std::size_t c = init_count(); c < size(); ++c)
    if (events_[c].tid == tid && events_[c].parent == e) out.push_back(c);
  return out;
}

std::vector<std::size_t> EventStructure::path_to(int e) const {
  std::vector<std::size_t> out;
  for (int c = e; c != kNone; c = events_.at(c).parent)
    out.push_back(static_cast<std::size_t>(c));
  std::reverse(out.begin(), out.end());
  return out;
}

bool EventStructure::po_before(std::size_t a, std::size_t b) const {
  if (is_init(b)) return false;
  if (is_init(a)) return true;
  if (events_[a].tid != events_[b].tid) return false;
  for (int c = events_[b].parent; c != kNone; c = events_[c].parent)
    if (static_cast<std::size_t>(c) == a) return true;
  return false;
}

bool EventStructure::in_conflict(std::size_t a, std::size_t b) const {
  return a != b && !is_init(a) && !is_init(b) &&
         events_[a].tid == events_[b].tid && !po_before(a, b) &&
         !po_before(b, a);
}

EsDerived EventStructure::derive() const {
  const std::size_t n = size();
  EsDerived d;
  d.po = d.po_imm = d.jf = d.ew = d.co = d.cf = Rel(n);
  for (std::size_t b = 0; b < n; ++b) {
    const EsEvent& eb = events_[b];
    if (eb.tid == 0) continue;
    if (eb.parent == kNone)
      for (std::size_t i = 0; i < init_count(); ++i) d.po_imm.insert(i, b);
    else
      d.po_imm.insert(static_cast<std::size_t>(eb.parent), b);
    for (std::size_t a = 0; a < n; ++a) {
      if (po_before(a, b)) d.po.insert(a, b);
      if (in_conflict(a, b)) d.cf.insert(a, b);
    }
    if (eb.label.is_read() && eb.jf != kNone)
      d.jf.insert(static_cast<std::size_t>(eb.jf), b);
  }
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      if (events_[a].label.is_write() && events_[b].label.is_write() &&
          events_[a].ew_class == events_[b].ew_class)
        d.ew.insert(a, b);
  for (const auto& order : co_order_)
    for (std::size_t i = 0; i < order.size(); ++i)
      for (std::size_t j = i + 1; j < order.size(); ++j)
        for (auto a : class_members(order[i]))
          for (auto b : class_members(order[j])) d.co.insert(a, b);

  d.cf_imm = d.cf & compose(d.po_imm.inverse(), d.po_imm);
  d.jfe = d.jf - d.po;
  d.rf = compose(d.ew, d.jf) - d.cf;
  d.fr = compose(d.rf.inverse(), d.co);
  d.eco = plus(d.co | d.rf | d.fr);
  d.hb = d.po;
  d.ecf = compose({opt(d.hb.inverse()), d.cf, opt(d.hb)});

  // An event is visible unless something it (externally) depends on
  // conflicts with it without an equal write po-related to it.
  const Rel depends = compose(d.jfe, star(d.po | d.jf));
  const Rel bad = d.cf & depends;
  const Rel excused = compose(d.ew, opt(d.po | d.po.inverse()));
  const Rel unexcused = bad - excused;
  d.vis = EventSet::full(n) - unexcused.codomain();
  return d;
}

std::size_t EventStructure::push_event(const EsEvent& e) {
  events_.push_back(e);
  return events_.size() - 1;
}

void EventStructure::join_class(std::size_t write, int ew_class) {
  events_.at(write).ew_class = ew_class;
}

void EventStructure::place_class_after(std::size_t write, int after_class) {
  EsEvent& e = events_.at(write);
  e.ew_class = next_class_++;
  auto& order = co_order_.at(static_cast<std::size_t>(e.label.loc));
  auto it = std::find(order.begin(), order.end(), after_class);
  if (it == order.end())
    throw StructuralError("co placement after a class of another location");
  order.insert(it + 1, e.ew_class);
}

std::string EventStructure::canonical_key() const {
  std::vector<std::string> name(size());
  for (std::size_t e = 0; e < size(); ++e) {
    const EsEvent& ev = events_[e];
    if (ev.tid == 0) {
      name[e] = "I" + std::to_string(ev.label.loc);
      continue;
    }
    std::string s = std::to_string(ev.tid) + "[";
    if (ev.parent != kNone) s += name[ev.parent];
    s += "]" + to_string(ev.label, locations_);
    if (ev.jf != kNone) s += "<" + name[ev.jf] + ">";
    name[e] = std::move(s);
  }
  std::vector<std::string> sorted = name;
  std::sort(sorted.begin(), sorted.end());
  std::ostringstream os;
  for (const auto& s : sorted) os << s << ';';
  for (const auto& order : co_order_) {
    os << '|';
    for (int c : order) {
      std::vector<std::string> members;
      for (auto m : class_members(c)) members.push_back(name[m]);
      std::sort(members.begin(), members.end());
      os << '{';
      for (const auto& m : members) os << m << ',';
      os << '}';
    }
  }
  return os.str();
}

// ------------------------------------------------------------ consistency

namespace {

EventId witness_id(const EventStructure& s, std::size_t e) {
  // Structures may hold several events at one thread position, so the
  // witness uses the event number as the serial.
  return EventId{s.event(e).tid, static_cast<std::uint32_t>(e)};
}

}  // namespace

Verdict check_es_consistent(const EventStructure& s) {
  const EsDerived d = s.derive();
  Verdict v;
  auto fail = [&](const char* axiom, const char* rel,
                  const std::vector<std::size_t>& evs) {
    v.consistent = false;
    v.violated.emplace_back(axiom);
    Witness w{axiom, rel, {}};
    for (auto e : evs) w.events.push_back(witness_id(s, e));
    v.witnesses.push_back(std::move(w));
  };

  const EventSet bad_imm = d.cf_imm.domain() - s.reads();
  if (!bad_imm.empty()) fail("cf_imm-read", "dom(cf_imm) \\ R", {*bad_imm.first()});

  const Rel just = compose({d.jf, d.cf_imm, d.jf.inverse(), d.ew});
  if (!just.is_irreflexive()) {
    for (std::size_t w = 0; w < s.size(); ++w)
      if (just.contains(w, w)) {
        fail("cf_imm-justification", "jf;cf_imm;jf^-1;ew", {w});
        break;
      }
  }

  if (!d.ecf.is_irreflexive()) {
    for (std::size_t e = 0; e < s.size(); ++e)
      if (d.ecf.contains(e, e)) {
        fail("ecf-irreflexivity", "ecf", {e});
        break;
      }
  }

  const Rel jf_ecf = d.jf & d.ecf;
  if (!jf_ecf.empty()) {
    auto p = jf_ecf.pairs().front();
    fail("jf-non-conflict", "jf ∩ ecf", {p.first, p.second});
  }

  const EventSet invisible = d.jfe.domain() - d.vis;
  if (!invisible.empty())
    fail("jfe-visible", "dom(jfe) \\ Vis", {*invisible.first()});

  if (!compose(d.hb, opt(d.eco)).is_irreflexive())
    fail("coherence", "hb ∪ eco", shortest_cycle(d.hb | d.eco));
  return v;
}

// ------------------------------------------------------------ construction

std::string_view to_string(StepRejected::Reason r) {
  switch (r) {
    case StepRejected::Reason::InvalidStep: return "invalid-step";
    case StepRejected::Reason::ConflictingJustification:
      return "conflicting-justification";
    case StepRejected::Reason::CoEwTyping: return "co-ew-typing";
    case StepRejected::Reason::InconsistentStructure:
      return "inconsistent-structure";
  }
  return "?";
}

std::optional<Label> next_label(const Program& p, const EventStructure& s,
                                std::uint32_t tid, int parent) {
  ThreadRunner run(p, tid);
  if (parent != kNone) {
    for (std::size_t e : s.path_to(parent)) {
      const Label& have = s.event(e).label;
      if (run.done() || s.event(e).tid != tid)
        throw StepRejected(StepRejected::Reason::InvalidStep,
                           "path is not a run of thread " + std::to_string(tid));
      Label l = run.step(have.val);
      if (!(l == have))
        throw StepRejected(StepRejected::Reason::InvalidStep,
                           "path label " + to_string(have, s.locations()) +
                               " differs from the thread's " +
                               to_string(l, s.locations()));
    }
  }
  if (run.done()) return std::nullopt;
  return run.peek();
}

EventStructure add_event(const EventStructure& s, const EsChoice& c,
                         const Program& p) {
  using R = StepRejected::Reason;
  if (c.tid == 0 || c.tid > p.thread_count())
    throw StepRejected(R::InvalidStep, "no thread " + std::to_string(c.tid));
  if (c.parent != kNone &&
      (c.parent < 0 || static_cast<std::size_t>(c.parent) >= s.size() ||
       s.event(c.parent).tid != c.tid))
    throw StepRejected(R::InvalidStep, "bad po-predecessor");
  const std::optional<Label> expect = next_label(p, s, c.tid, c.parent);
  if (!expect)
    throw StepRejected(R::InvalidStep, "thread " + std::to_string(c.tid) +
                                           " has no further events there");
  const Label& l = c.label;
  const bool same_shape =
      l.kind == expect->kind && l.mode == expect->mode && l.loc == expect->loc;
  if (!same_shape || (!l.is_read() && l.val != expect->val))
    throw StepRejected(R::InvalidStep, "thread " + std::to_string(c.tid) +
                                           " performs " +
                                           to_string(*expect, s.locations()) +
                                           " next, not " +
                                           to_string(l, s.locations()));

  const std::vector<std::size_t> path =
      c.parent == kNone ? std::vector<std::size_t>{} : s.path_to(c.parent);
  auto conflicts_new = [&](std::size_t e) {
    return !s.is_init(e) && s.event(e).tid == c.tid &&
           std::find(path.begin(), path.end(), e) == path.end();
  };
  auto valid = [&](int e) { return e >= 0 && static_cast<std::size_t>(e) < s.size(); };

  EsEvent ev;
  ev.tid = c.tid;
  ev.label = l;
  ev.parent = c.parent;
  ev.depth = static_cast<std::uint32_t>(path.size() + 1);

  if (l.is_read()) {
    if (c.ew_with != kNone || c.co_after != kNone)
      throw StepRejected(R::CoEwTyping, "reads take no ew or co choice");
    if (!valid(c.justification))
      throw StepRejected(R::ConflictingJustification, "read needs a justification");
    const Label& w = s.event(c.justification).label;
    if (!w.is_write() || w.loc != l.loc || w.val != l.val)
      throw StepRejected(R::ConflictingJustification,
                         "justification " + to_string(w, s.locations()) +
                             " does not match " + to_string(l, s.locations()));
    if (conflicts_new(static_cast<std::size_t>(c.justification)))
      throw StepRejected(R::ConflictingJustification,
                         "justification conflicts with the new read");
    ev.jf = c.justification;
  } else if (c.justification != kNone) {
    throw StepRejected(R::CoEwTyping, "only reads have a justification");
  }

  EventStructure out = s;
  const std::size_t e = out.push_event(ev);
  if (l.is_write()) {
    if ((c.ew_with == kNone) == (c.co_after == kNone))
      throw StepRejected(R::CoEwTyping, "a write needs exactly one of ew or co");
    if (c.ew_with != kNone) {
      if (!valid(c.ew_with) || !(s.event(c.ew_with).label.is_write()) ||
          s.event(c.ew_with).label.loc != l.loc ||
          s.event(c.ew_with).label.val != l.val)
        throw StepRejected(R::CoEwTyping, "ew partner has a different label");
      const int cls = s.event(c.ew_with).ew_class;
      for (auto m : s.class_members(cls))
        if (!conflicts_new(m))
          throw StepRejected(R::CoEwTyping,
                             "equal writes must conflict with the new write");
      out.join_class(e, cls);
    } else {
      if (!valid(c.co_after) || !s.event(c.co_after).label.is_write() ||
          s.event(c.co_after).label.loc != l.loc)
        throw StepRejected(R::CoEwTyping, "co predecessor is not a same-location write");
      out.place_class_after(e, s.event(c.co_after).ew_class);
    }
  } else if (c.ew_with != kNone || c.co_after != kNone) {
    throw StepRejected(R::CoEwTyping, "only writes take ew or co choices");
  }

  const EsDerived d = out.derive();
  if (!is_acyclic(d.po | d.jf))
    throw StructuralError("po ∪ jf has a cycle after adding an event");
  Verdict v = check_es_consistent(out);
  if (!v.consistent)
    throw StepRejected(R::InconsistentStructure, v.summary());
  return out;
}

// ------------------------------------------------------------ extraction

bool is_extractable(const EventStructure& s, const EsDerived& d,
                    const EventSet& x) {
  if (!s.init_events().subset_of(x)) return false;
  if (!restrict(d.cf, x, x).empty()) return false;
  if (!x.subset_of(d.vis)) return false;
  if (!compose(d.po, Rel::identity_on(x)).domain().subset_of(x)) return false;
  const Rel rf_x = restrict(d.rf, x, x);
  if (!(s.reads() & x).subset_of(rf_x.codomain())) return false;
  for (std::size_t e = 0; e < s.size(); ++e)
    if (!x.contains(e) && !d.cf.successors(e).intersects(x)) return false;
  return true;
}

std::vector<EventSet> extract_candidates(const EventStructure& s) {
  const EsDerived d = s.derive();
  // A maximal downward-closed conflict-free set picks one root-to-leaf
  // path per thread.
  std::vector<std::vector<std::vector<std::size_t>>> paths;
  for (auto tid : s.thread_ids()) {
    std::vector<std::vector<std::size_t>> ps;
    for (std::size_t e = s.init_count(); e < s.size(); ++e)
      if (s.event(e).tid == tid && s.children(tid, static_cast<int>(e)).empty())
        ps.push_back(s.path_to(static_cast<int>(e)));
    paths.push_back(std::move(ps));
  }
  std::vector<EventSet> out;
  std::vector<std::size_t> pick(paths.size(), 0);
  while (true) {
    EventSet x = s.init_events();
    for (std::size_t t = 0; t < paths.size(); ++t)
      for (auto e : paths[t][pick[t]]) x.insert(e);
    if (is_extractable(s, d, x)) out.push_back(x);
    std::size_t k = paths.size();
    while (k > 0 && ++pick[k - 1] == paths[k - 1].size()) pick[--k] = 0;
    if (k == 0) break;
  }
  return out;
}

EventId graph_id(const EventStructure& s, std::size_t e) {
  const EsEvent& ev = s.event(e);
  if (ev.tid == 0) return EventId{0, static_cast<std::uint32_t>(ev.label.loc)};
  return EventId{ev.tid, ev.depth};
}

ExecutionGraph associated_graph(const EventStructure& s, const EventSet& x,
                                const Program* p) {
  const EsDerived d = s.derive();
  if (!is_extractable(s, d, x))
    throw PreconditionError("event set is not extractable from the structure");
  std::vector<std::pair<EventId, Label>> evs;
  x.for_each([&](std::size_t e) { evs.push_back({graph_id(s, e), s.event(e).label}); });
  ExecutionGraph g = make_graph<ExecutionGraph>(s.locations(), std::move(evs));
  auto carry = [&](const Rel& from, Rel& to) {
    restrict(from, x, x).for_each([&](std::size_t a, std::size_t b) {
      g.add(to, graph_id(s, a), graph_id(s, b));
    });
  };
  carry(d.rf, g.rf);
  carry(d.co, g.co);
  if (p) compute_dependencies(*p, g);
  return g;
}

// ------------------------------------------------------------ output

std::string to_dot(const EventStructure& s, const std::string& name) {
  const EsDerived d = s.derive();
  auto node = [&](std::size_t e) {
    return s.is_init(e) ? std::string("init") : "e" + std::to_string(e);
  };
  std::ostringstream os;
  os << "digraph \"" << name << "\" {\n";
  os << "  node [shape=plaintext, fontname=\"Helvetica\"];\n";
  os << "  init [label=\"Init\"];\n";
  for (auto tid : s.thread_ids()) {
    os << "  subgraph cluster_t" << tid << " {\n    label=\"T" << tid
       << "\"; style=dotted;\n";
    s.thread_events(tid).for_each([&](std::size_t e) {
      os << "    " << node(e) << " [label=\"e" << tid << "." << s.event(e).depth
         << "#" << e << " " << to_string(s.event(e).label, s.locations())
         << "\"];\n";
    });
    os << "  }\n";
  }
  std::set<std::string> lines;
  auto edge = [&](std::size_t a, std::size_t b, const std::string& attrs) {
    if (node(a) == node(b)) return;
    lines.insert("  " + node(a) + " -> " + node(b) + " [" + attrs + "];\n");
  };
  d.po_imm.for_each([&](auto a, auto b) { edge(a, b, "style=solid"); });
  d.jf.for_each([&](auto a, auto b) {
    edge(a, b, "label=\"jf\", color=\"darkgreen\", fontcolor=\"darkgreen\"");
  });
  d.ew.for_each([&](auto a, auto b) {
    if (a < b) edge(a, b, "label=\"ew\", color=\"black:invis:black\", dir=none");
  });
  d.cf_imm.for_each([&](auto a, auto b) {
    if (a < b) edge(a, b, "label=\"cf\", style=dashed, dir=none, color=\"gray40\"");
  });
  const Rel co_imm = d.co - compose(d.co, d.co) - compose(d.ew, d.co) - compose(d.co, d.ew);
  co_imm.for_each([&](auto a, auto b) {
    edge(a, b, "label=\"co\", color=\"red\", fontcolor=\"red\"");
  });
  for (const auto& l : lines) os << l;
  os << "}\n";
  return os.str();
}

nlohmann::json to_json(const EventStructure& s) {
  using nlohmann::json;
  const EsDerived d = s.derive();
  json j;
  j["locations"] = s.locations();
  json events = json::array();
  for (std::size_t e = 0; e < s.size(); ++e) {
    const EsEvent& ev = s.event(e);
    json o;
    o["event"] = e;
    o["id"] = event_id_json(graph_id(s, e));
    o["kind"] = std::string(to_string(ev.label.kind));
    o["mode"] = std::string(to_string(ev.label.mode));
    if (!ev.label.is_fence()) {
      o["loc"] = s.locations().at(static_cast<std::size_t>(ev.label.loc));
      o["val"] = ev.label.val;
    }
    o["label"] = to_string(ev.label, s.locations());
    events.push_back(std::move(o));
  }
  j["events"] = std::move(events);
  auto pairs = [](const Rel& r) {
    json a = json::array();
    r.for_each([&](std::size_t x, std::size_t y) { a.push_back({x, y}); });
    return a;
  };
  j["po"] = pairs(d.po_imm);
  j["jf"] = pairs(d.jf);
  j["ew"] = pairs(d.ew - Rel::identity(s.size()));
  j["co"] = pairs(d.co);
  j["cf"] = pairs(d.cf);
  j["rf"] = pairs(d.rf);
  return j;
}

}  // namespace wmlab
