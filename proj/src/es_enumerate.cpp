// Copyright (c) 2026, The wmlab Authors.
// Licensed under the Apache License, Version 2.0.

#include <deque>
#include <unordered_set>

#include "wmlab/event_structure.hpp"

namespace wmlab {

namespace {

// Extra children beyond the first, summed over the thread's nodes.
std::size_t forks(const EventStructure& s, std::uint32_t tid) {
  std::size_t n = 0;
  auto count = [&](int node) {
    const auto c = s.children(tid, node).size();
    if (c > 1) n += c - 1;
  };
  count(kNone);
  s.thread_events(tid).for_each([&](std::size_t e) { count(static_cast<int>(e)); });
  return n;
}

std::vector<EsChoice> choices(const Program& p, const EventStructure& s,
                              const EnumerationBounds& bounds) {
  std::vector<EsChoice> out;
  for (std::uint32_t tid = 1; tid <= p.thread_count(); ++tid) {
    const std::size_t used = forks(s, tid);
    std::vector<int> nodes{kNone};
    s.thread_events(tid).for_each([&](std::size_t e) { nodes.push_back(static_cast<int>(e)); });
    for (int parent : nodes) {
      if (!s.children(tid, parent).empty() && used >= bounds.max_forks) continue;
      const auto next = next_label(p, s, tid, parent);
      if (!next) continue;
      const auto path = parent == kNone ? std::vector<std::size_t>{} : s.path_to(parent);
      auto on_path = [&](std::size_t e) {
        return std::find(path.begin(), path.end(), e) != path.end();
      };
      auto conflicting = [&](std::size_t e) {
        return !s.is_init(e) && s.event(e).tid == tid && !on_path(e);
      };
      EsChoice c;
      c.tid = tid;
      c.parent = parent;
      c.label = *next;
      if (next->is_read()) {
        for (std::size_t w = 0; w < s.size(); ++w) {
          const Label& wl = s.event(w).label;
          if (!wl.is_write() || wl.loc != next->loc || conflicting(w)) continue;
          EsChoice r = c;
          r.label.val = wl.val;
          r.justification = static_cast<int>(w);
          out.push_back(r);
        }
      } else if (next->is_write()) {
        const auto& order = s.co_order().at(static_cast<std::size_t>(next->loc));
        for (int cls : order) {
          const auto members = s.class_members(cls);
          EsChoice w = c;
          w.co_after = static_cast<int>(members.front());
          out.push_back(w);
          const Label& ml = s.event(members.front()).label;
          bool joinable = ml.val == next->val;
          for (auto m : members) joinable = joinable && conflicting(m);
          if (joinable) {
            EsChoice j = c;
            j.ew_with = static_cast<int>(members.front());
            out.push_back(j);
          }
        }
      } else {
        out.push_back(c);
      }
    }
  }
  return out;
}

}  // namespace

std::vector<EventStructure> enumerate_structures(const Program& p,
                                                 const EnumerationBounds& bounds) {
  std::vector<EventStructure> out;
  std::unordered_set<std::string> seen;
  std::deque<std::size_t> queue;
  EventStructure init = EventStructure::initial(p);
  seen.insert(init.canonical_key());
  out.push_back(std::move(init));
  queue.push_back(0);
  while (!queue.empty()) {
    const std::size_t i = queue.front();
    queue.pop_front();
    if (out[i].size() - out[i].init_count() >= bounds.max_events) continue;
    for (const EsChoice& c : choices(p, out[i], bounds)) {
      EventStructure next;
      try {
        next = add_event(out[i], c, p);
      } catch (const StepRejected&) {
        continue;
      }
      if (!seen.insert(next.canonical_key()).second) continue;
      out.push_back(std::move(next));
      queue.push_back(out.size() - 1);
    }
  }
  return out;
}

}  // namespace wmlab
