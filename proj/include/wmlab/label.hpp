// Copyright (c) 2026, The wmlab Authors.
// Licensed under the Apache License, Version 2.0.

#ifndef WMLAB_LABEL_HPP_
#define WMLAB_LABEL_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace wmlab {

using Value = std::int64_t;
using Loc = int;
inline constexpr Loc kNoLoc = -1;

enum class Kind : std::uint8_t { Read, Write, Fence };

// Access modes ordered rlx < {acq, rel} < acqrel < sc.
enum class Mode : std::uint8_t { Rlx, Acq, Rel, AcqRel, Sc };

inline bool at_least_acq(Mode m) {
  return m == Mode::Acq || m == Mode::AcqRel || m == Mode::Sc;
}
inline bool at_least_rel(Mode m) {
  return m == Mode::Rel || m == Mode::AcqRel || m == Mode::Sc;
}

std::string_view to_string(Kind k);
std::string_view to_string(Mode m);
std::optional<Mode> parse_mode(std::string_view s);

struct Label {
  Kind kind = Kind::Fence;
  Mode mode = Mode::Rlx;
  Loc loc = kNoLoc;
  Value val = 0;

  bool is_read() const { return kind == Kind::Read; }
  bool is_write() const { return kind == Kind::Write; }
  bool is_fence() const { return kind == Kind::Fence; }
  bool operator==(const Label&) const = default;
};

// "R^acq(x,1)" style rendering.
std::string to_string(const Label& l, const std::vector<std::string>& locs);

// x86-TSO labels: plain reads and writes, fences are MFENCE.
struct TsoLabel {
  Kind kind = Kind::Fence;
  Loc loc = kNoLoc;
  Value val = 0;

  bool is_read() const { return kind == Kind::Read; }
  bool is_write() const { return kind == Kind::Write; }
  bool is_fence() const { return kind == Kind::Fence; }
  bool operator==(const TsoLabel&) const = default;
};

std::string to_string(const TsoLabel& l, const std::vector<std::string>& locs);

// ARMv8 access flavours: Q = acquirePC (ldapr), A = acquire (ldar),
// L = release (stlr); Ld / Sy are dmb.ld / dmb.sy.
enum class ArmMode : std::uint8_t { Plain, Q, A, L, Ld, Sy };

std::string_view to_string(ArmMode m);

struct ArmLabel {
  Kind kind = Kind::Fence;
  ArmMode mode = ArmMode::Plain;
  Loc loc = kNoLoc;
  Value val = 0;

  bool is_read() const { return kind == Kind::Read; }
  bool is_write() const { return kind == Kind::Write; }
  bool is_fence() const { return kind == Kind::Fence; }
  bool operator==(const ArmLabel&) const = default;
};

std::string to_string(const ArmLabel& l, const std::vector<std::string>& locs);

}  // namespace wmlab

#endif  // WMLAB_LABEL_HPP_
