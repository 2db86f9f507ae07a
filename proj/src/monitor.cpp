#include "valign/monitor.hpp"

#include <algorithm>

namespace valign {

namespace {

constexpr std::uint8_t kViolatedCode = 0xFF;

MonitorState with_verdict(std::uint8_t value, const Constraint& c) {
  MonitorState s;
  s.value = value;
  switch (c.kind) {
    case Template::existence:
      s.accepting_if_ended = value >= c.count;
      break;
    case Template::absence:
      s.permanently_violated = value > c.count;
      s.accepting_if_ended = !s.permanently_violated;
      break;
    case Template::correlation:
      s.accepting_if_ended = (value & 1u) == 0 || (value & 2u) != 0;
      break;
    case Template::response:
    case Template::imm_after:
      s.accepting_if_ended = (value & 1u) == 0;
      break;
    case Template::before_strong:
      s.accepting_if_ended = (value & 1u) != 0;
      break;
    default:
      s.accepting_if_ended = true;
      break;
  }
  return s;
}

MonitorState violated() {
  return MonitorState{kViolatedCode, true, false};
}

std::uint8_t saturate(std::uint8_t v, unsigned cap) {
  return static_cast<std::uint8_t>(std::min<unsigned>(v + 1u, cap));
}

}  // namespace

MonitorState compile_monitor(const Constraint& c) {
  if (is_unary(c.kind) && c.count >= kViolatedCode - 1) {
    throw ConstraintError("count too large for a monitor: " + format_constraint(c));
  }
  return with_verdict(0, c);
}

MonitorState monitor_step(const MonitorState& s, const Constraint& c, bool ma, bool mb) {
  if (s.permanently_violated) return s;
  const std::uint8_t v = s.value;
  switch (c.kind) {
    case Template::existence:
    case Template::absence:
      return with_verdict(ma ? saturate(v, c.count + 1) : v, c);

    case Template::correlation:
      return with_verdict(static_cast<std::uint8_t>(v | (ma ? 1u : 0u) | (mb ? 2u : 0u)), c);

    case Template::not_correlation: {
      auto next = static_cast<std::uint8_t>(v | (ma ? 1u : 0u) | (mb ? 2u : 0u));
      return next == 3 ? violated() : with_verdict(next, c);
    }

    case Template::response:
      if (mb) return with_verdict(0, c);
      return with_verdict(ma ? 1 : v, c);

    case Template::not_response:
    case Template::not_before: {
      const bool seen_a = (v & 1u) != 0 || ma;
      if (seen_a && mb) return violated();
      return with_verdict(seen_a ? 1 : 0, c);
    }

    case Template::before:
    case Template::before_strong:
      if (v & 1u) return s;
      if (ma) return with_verdict(1, c);
      if (mb) return violated();
      return s;

    case Template::premise:
      if (mb && v == kPremisePrevNotA) return violated();
      return with_verdict(ma ? kPremisePrevA : kPremisePrevNotA, c);

    case Template::not_premise:
      if (mb && v == kPremisePrevA) return violated();
      return with_verdict(ma ? kPremisePrevA : kPremisePrevNotA, c);

    case Template::imm_after:
      if ((v & 1u) && !mb) return violated();
      return with_verdict(ma ? 1 : 0, c);

    case Template::not_imm_after:
      if ((v & 1u) && mb) return violated();
      return with_verdict(ma ? 1 : 0, c);
  }
  return s;
}

MonitorState monitor_step(const MonitorState& s, const Constraint& c, const Message& m) {
  const bool ma = c.a.matches(m);
  const bool mb = !is_unary(c.kind) && c.b.matches(m);
  return monitor_step(s, c, ma, mb);
}

unsigned monitor_deficit(const MonitorState& s, const Constraint& c) {
  if (s.permanently_violated) return 0;
  switch (c.kind) {
    case Template::existence:
      return s.value >= c.count ? 0u : c.count - s.value;
    case Template::correlation:
    case Template::response:
    case Template::imm_after:
    case Template::before_strong:
      return s.accepting_if_ended ? 0u : 1u;
    default:
      return 0;
  }
}

const Word* deficit_word(const Constraint& c) {
  switch (c.kind) {
    case Template::existence:
    case Template::before_strong:
      return &c.a.word;
    case Template::correlation:
    case Template::response:
    case Template::imm_after:
      return &c.b.word;
    default:
      return nullptr;
  }
}

std::uint8_t encode(const MonitorState& s) {
  return s.permanently_violated ? kViolatedCode : s.value;
}

MonitorState decode(std::uint8_t code, const Constraint& c) {
  return code == kViolatedCode ? violated() : with_verdict(code, c);
}

MonitorState run_monitor(const Constraint& c, const Trace& t) {
  MonitorState s = compile_monitor(c);
  for (const Message& m : t) s = monitor_step(s, c, m);
  return s;
}

}  // namespace valign
