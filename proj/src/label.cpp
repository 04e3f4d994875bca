// Copyright (c) 2026, The wmlab Authors.
// Licensed under the Apache License, Version 2.0.

#include "wmlab/label.hpp"

namespace wmlab {

std::string_view to_string(Kind k) {
  switch (k) {
    case Kind::Read: return "R";
    case Kind::Write: return "W";
    case Kind::Fence: return "F";
  }
  return "?";
}

std::string_view to_string(Mode m) {
  switch (m) {
    case Mode::Rlx: return "rlx";
    case Mode::Acq: return "acq";
    case Mode::Rel: return "rel";
    case Mode::AcqRel: return "acqrel";
    case Mode::Sc: return "sc";
  }
  return "?";
}

std::optional<Mode> parse_mode(std::string_view s) {
  if (s == "rlx") return Mode::Rlx;
  if (s == "acq") return Mode::Acq;
  if (s == "rel") return Mode::Rel;
  if (s == "acqrel") return Mode::AcqRel;
  if (s == "sc") return Mode::Sc;
  return std::nullopt;
}

std::string_view to_string(ArmMode m) {
  switch (m) {
    case ArmMode::Plain: return "";
    case ArmMode::Q: return "Q";
    case ArmMode::A: return "A";
    case ArmMode::L: return "L";
    case ArmMode::Ld: return "ld";
    case ArmMode::Sy: return "sy";
  }
  return "?";
}

namespace {

std::string access(Kind k, std::string_view mode, Loc loc, Value val,
                   const std::vector<std::string>& locs) {
  std::string s(to_string(k));
  if (!mode.empty()) s += "^" + std::string(mode);
  if (k == Kind::Fence) return s;
  std::string name = loc >= 0 && static_cast<std::size_t>(loc) < locs.size()
                         ? locs[static_cast<std::size_t>(loc)]
                         : "?" + std::to_string(loc);
  return s + "(" + name + "," + std::to_string(val) + ")";
}

}  // namespace

std::string to_string(const Label& l, const std::vector<std::string>& locs) {
  std::string_view mode = l.mode == Mode::Rlx ? "" : to_string(l.mode);
  return access(l.kind, mode, l.loc, l.val, locs);
}

std::string to_string(const TsoLabel& l, const std::vector<std::string>& locs) {
  if (l.is_fence()) return "MFENCE";
  return access(l.kind, "", l.loc, l.val, locs);
}

std::string to_string(const ArmLabel& l, const std::vector<std::string>& locs) {
  if (l.is_fence()) return "DMB." + std::string(to_string(l.mode));
  return access(l.kind, to_string(l.mode), l.loc, l.val, locs);
}

}  // namespace wmlab
