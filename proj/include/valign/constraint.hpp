#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace valign {

using Word = std::string;

enum class AgentId : std::uint8_t { agent1 = 0, agent2 = 1 };

inline AgentId other(AgentId a) {
  return a == AgentId::agent1 ? AgentId::agent2 : AgentId::agent1;
}

enum class SenderPattern : std::uint8_t { agent1, agent2, any };

struct Message {
  AgentId sender = AgentId::agent1;
  Word word;

  friend bool operator==(const Message&, const Message&) = default;
  friend auto operator<=>(const Message&, const Message&) = default;
};

using Trace = std::vector<Message>;

struct Atom {
  SenderPattern sender = SenderPattern::any;
  Word word;

  bool matches(const Message& m) const {
    if (m.word != word) return false;
    switch (sender) {
      case SenderPattern::any: return true;
      case SenderPattern::agent1: return m.sender == AgentId::agent1;
      case SenderPattern::agent2: return m.sender == AgentId::agent2;
    }
    return false;
  }

  friend bool operator==(const Atom&, const Atom&) = default;
  friend auto operator<=>(const Atom&, const Atom&) = default;
};

// `before_strong` is the strong-until reading of `before` (a must occur).
// It is only produced when explicitly requested; generators never draw it.
enum class Template : std::uint8_t {
  existence,
  absence,
  correlation,
  not_correlation,
  response,
  not_response,
  before,
  not_before,
  premise,
  not_premise,
  imm_after,
  not_imm_after,
  before_strong,
};

// The twelve templates of the constraint language, in declaration order.
inline constexpr Template kTemplates[] = {
    Template::existence,   Template::absence,         Template::correlation,
    Template::not_correlation, Template::response,    Template::not_response,
    Template::before,      Template::not_before,      Template::premise,
    Template::not_premise, Template::imm_after,       Template::not_imm_after,
};

bool is_unary(Template t);
bool is_negative(Template t);
std::string_view template_name(Template t);
std::optional<Template> template_from_name(std::string_view name);

class ConstraintError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Constraint {
  Template kind = Template::existence;
  unsigned count = 0;  // existence / absence only
  Atom a;
  Atom b;  // binary templates only

  static Constraint existence(unsigned n, Atom a);
  static Constraint absence(unsigned n, Atom a);
  static Constraint binary(Template t, Atom a, Atom b);

  friend bool operator==(const Constraint&, const Constraint&) = default;
  friend auto operator<=>(const Constraint&, const Constraint&) = default;
};

enum class Monotonicity { monotonic, non_monotonic };

/// Truth of `c` over the path encoding `t`, with every atom false after the
/// last message.
bool evaluate_constraint(const Constraint& c, const Trace& t);

Monotonicity classify_monotonicity(const Constraint& c);

/// Constraints of `cs` that hold on `t` but not on `t . m`.
std::vector<Constraint> violated_constraints(const std::vector<Constraint>& cs,
                                             const Trace& t, const Message& m);

// Text forms: "A1", "A2", "*" for senders; "A1:word" for atoms;
// "response(A2:birra, A1:tipo)" / "existence(1, *:size)" for constraints.
std::string_view sender_name(SenderPattern s);
std::string_view agent_name(AgentId a);
SenderPattern parse_sender(std::string_view s);
AgentId parse_agent(std::string_view s);
Atom parse_atom(std::string_view s);
std::string format_atom(const Atom& a);
Message parse_message(std::string_view s);
std::string format_message(const Message& m);
Constraint parse_constraint(std::string_view s);
std::string format_constraint(const Constraint& c);
/// Comma-separated messages, e.g. "A1:da bere, A2:vino".
Trace parse_trace(std::string_view s);
std::string format_trace(const Trace& t);

}  // namespace valign
