#pragma once

#include <cstdint>

#include "valign/constraint.hpp"

namespace valign {

/// Incremental state of one constraint over a growing trace.
///
/// `value` is template specific: a saturating counter for existence/absence,
/// a small bit set or phase for the binary templates. The verdict flags are a
/// function of (`value`, constraint) and are kept alongside for convenience.
struct MonitorState {
  std::uint8_t value = 0;
  bool permanently_violated = false;
  bool accepting_if_ended = false;

  friend bool operator==(const MonitorState&, const MonitorState&) = default;
};

// premise / not_premise phases
inline constexpr std::uint8_t kPremiseStart = 0;
inline constexpr std::uint8_t kPremisePrevA = 1;
inline constexpr std::uint8_t kPremisePrevNotA = 2;

MonitorState compile_monitor(const Constraint& c);

MonitorState monitor_step(const MonitorState& s, const Constraint& c, const Message& m);

/// Step with the atom matches already resolved; the hot path of the
/// satisfiability search.
MonitorState monitor_step(const MonitorState& s, const Constraint& c, bool matches_a, bool matches_b);

/// Minimum number of further messages carrying the constraint's target word
/// needed before the monitor can accept. Zero for violated monitors.
unsigned monitor_deficit(const MonitorState& s, const Constraint& c);

/// Word whose occurrences reduce the deficit, or nullptr if the template
/// never has one.
const Word* deficit_word(const Constraint& c);

/// Compact one-byte code: `value`, or 0xFF once permanently violated.
std::uint8_t encode(const MonitorState& s);
MonitorState decode(std::uint8_t code, const Constraint& c);

MonitorState run_monitor(const Constraint& c, const Trace& t);

}  // namespace valign
