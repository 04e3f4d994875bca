// Copyright (c) 2026, The wmlab Authors.
// Licensed under the Apache License, Version 2.0.

#include <optional>

#include "wmlab/models.hpp"

namespace wmlab {

namespace {

EventId doubled(EventId id, int shift = 0) {
  if (id.is_init()) return id;
  return EventId{id.tid, static_cast<std::uint32_t>(
                             static_cast<int>(2 * id.serial) + shift)};
}

// Builds a graph from a new event list, carrying rf/co/data/ppo over the
// events that survive the translation.
template <class G, class L>
G rebuild(const ExecutionGraph& src,
          std::vector<std::pair<EventId, L>> events,
          const std::vector<std::optional<EventId>>& image) {
  G g = make_graph<G>(src.locations, std::move(events));
  auto carry = [&](const Rel& from, Rel& to) {
    from.for_each([&](std::size_t a, std::size_t b) {
      if (image[a] && image[b]) g.add(to, *image[a], *image[b]);
    });
  };
  carry(src.rf, g.rf);
  carry(src.co, g.co);
  carry(src.data, g.data);
  carry(src.ppo, g.ppo);
  return g;
}

}  // namespace

TsoGraph map_to_tso(const ExecutionGraph& g, TsoScheme scheme) {
  std::vector<std::pair<EventId, TsoLabel>> events;
  std::vector<std::optional<EventId>> image(g.size());
  const TsoLabel mfence{Kind::Fence, kNoLoc, 0};
  for (std::size_t i = 0; i < g.size(); ++i) {
    const Label& l = g.labels[i];
    const EventId id = doubled(g.ids[i]);
    if (l.is_fence()) {
      if (l.mode != Mode::Sc) continue;
      events.push_back({id, mfence});
      image[i] = id;
      continue;
    }
    events.push_back({id, TsoLabel{l.kind, l.loc, l.val}});
    image[i] = id;
    if (l.mode != Mode::Sc || g.ids[i].is_init()) continue;
    if (scheme == TsoScheme::FenceAfterScWrite && l.is_write())
      events.push_back({doubled(g.ids[i], +1), mfence});
    if (scheme == TsoScheme::FenceBeforeScRead && l.is_read())
      events.push_back({doubled(g.ids[i], -1), mfence});
  }
  return rebuild<TsoGraph>(g, std::move(events), image);
}

ArmGraph map_to_armv8(const ExecutionGraph& g) {
  std::vector<std::pair<EventId, ArmLabel>> events;
  std::vector<std::optional<EventId>> image(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    const Label& l = g.labels[i];
    ArmMode m = ArmMode::Plain;
    switch (l.kind) {
      case Kind::Read:
        m = l.mode == Mode::Sc    ? ArmMode::A
            : l.mode == Mode::Acq ? ArmMode::Q
                                  : ArmMode::Plain;
        break;
      case Kind::Write:
        m = at_least_rel(l.mode) ? ArmMode::L : ArmMode::Plain;
        break;
      case Kind::Fence:
        m = l.mode == Mode::Acq ? ArmMode::Ld : ArmMode::Sy;
        break;
    }
    events.push_back({g.ids[i], ArmLabel{l.kind, m, l.loc, l.val}});
    image[i] = g.ids[i];
  }
  return rebuild<ArmGraph>(g, std::move(events), image);
}

ExecutionGraph split_sc(const ExecutionGraph& g) {
  // Serials are renumbered densely per thread, so a graph without SC
  // accesses comes back unchanged.
  std::vector<std::pair<EventId, Label>> events;
  std::vector<std::optional<EventId>> image(g.size());
  std::uint32_t tid = 0, next = 0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    Label l = g.labels[i];
    if (g.ids[i].is_init()) {
      events.push_back({g.ids[i], l});
      image[i] = g.ids[i];
      continue;
    }
    if (g.ids[i].tid != tid) tid = g.ids[i].tid, next = 1;
    if (!l.is_fence() && l.mode == Mode::Sc) {
      events.push_back({EventId{tid, next++},
                        Label{Kind::Fence, Mode::Sc, kNoLoc, 0}});
      l.mode = l.is_read() ? Mode::Acq : Mode::Rel;
    }
    const EventId id{tid, next++};
    events.push_back({id, l});
    image[i] = id;
  }
  return rebuild<ExecutionGraph>(g, std::move(events), image);
}

}  // namespace wmlab
