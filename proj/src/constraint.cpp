#include "valign/constraint.hpp"

#include <algorithm>
#include <charconv>
#include <cstddef>

namespace valign {

namespace {

std::size_t count_matches(const Atom& a, const Trace& t) {
  return static_cast<std::size_t>(
      std::count_if(t.begin(), t.end(), [&](const Message& m) { return a.matches(m); }));
}

// Index of the first message matching `a`, or t.size() when there is none.
std::size_t first_match(const Atom& a, const Trace& t) {
  auto it = std::find_if(t.begin(), t.end(), [&](const Message& m) { return a.matches(m); });
  return static_cast<std::size_t>(it - t.begin());
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_commas(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == ',') {
      out.push_back(trim(s.substr(start, i - start)));
      start = i + 1;
    }
  }
  return out;
}

}  // namespace

bool is_unary(Template t) {
  return t == Template::existence || t == Template::absence;
}

bool is_negative(Template t) {
  switch (t) {
    case Template::not_correlation:
    case Template::not_response:
    case Template::not_before:
    case Template::not_premise:
    case Template::not_imm_after:
      return true;
    default:
      return false;
  }
}

std::string_view template_name(Template t) {
  switch (t) {
    case Template::existence: return "existence";
    case Template::absence: return "absence";
    case Template::correlation: return "correlation";
    case Template::not_correlation: return "not_correlation";
    case Template::response: return "response";
    case Template::not_response: return "not_response";
    case Template::before: return "before";
    case Template::not_before: return "not_before";
    case Template::premise: return "premise";
    case Template::not_premise: return "not_premise";
    case Template::imm_after: return "imm_after";
    case Template::not_imm_after: return "not_imm_after";
    case Template::before_strong: return "before_strong";
  }
  return "?";
}

std::optional<Template> template_from_name(std::string_view name) {
  name = trim(name);
  std::string canonical(name);
  if (!canonical.empty() && canonical.front() == '!') canonical = "not_" + canonical.substr(1);
  for (Template t : kTemplates) {
    if (template_name(t) == canonical) return t;
  }
  if (canonical == template_name(Template::before_strong)) return Template::before_strong;
  return std::nullopt;
}

Constraint Constraint::existence(unsigned n, Atom a) {
  if (n < 1) throw ConstraintError("existence requires a count of at least 1");
  return Constraint{Template::existence, n, std::move(a), Atom{}};
}

Constraint Constraint::absence(unsigned n, Atom a) {
  return Constraint{Template::absence, n, std::move(a), Atom{}};
}

Constraint Constraint::binary(Template t, Atom a, Atom b) {
  if (is_unary(t)) throw ConstraintError("template '" + std::string(template_name(t)) + "' is unary");
  return Constraint{t, 0, std::move(a), std::move(b)};
}

bool evaluate_constraint(const Constraint& c, const Trace& t) {
  const Atom& a = c.a;
  const Atom& b = c.b;
  const std::size_t len = t.size();
  switch (c.kind) {
    case Template::existence:
      return count_matches(a, t) >= c.count;
    case Template::absence:
      return count_matches(a, t) <= c.count;
    case Template::correlation:
      return count_matches(a, t) == 0 || count_matches(b, t) >= 1;
    case Template::not_correlation:
      return count_matches(a, t) == 0 || count_matches(b, t) == 0;
    case Template::response:
      for (std::size_t j = 0; j < len; ++j) {
        if (!a.matches(t[j])) continue;
        bool found = false;
        for (std::size_t k = j; k < len && !found; ++k) found = b.matches(t[k]);
        if (!found) return false;
      }
      return true;
    case Template::not_response:
    case Template::not_before:
      for (std::size_t j = 0; j < len; ++j) {
        if (!a.matches(t[j])) continue;
        for (std::size_t k = j; k < len; ++k) {
          if (b.matches(t[k])) return false;
        }
      }
      return true;
    case Template::before: {
      const std::size_t fa = first_match(a, t);
      const std::size_t fb = first_match(b, t);
      return fb >= fa;
    }
    case Template::before_strong: {
      const std::size_t fa = first_match(a, t);
      return fa < len && first_match(b, t) >= fa;
    }
    case Template::premise:
      for (std::size_t j = 1; j < len; ++j) {
        if (b.matches(t[j]) && !a.matches(t[j - 1])) return false;
      }
      return true;
    case Template::not_premise:
      for (std::size_t j = 1; j < len; ++j) {
        if (b.matches(t[j]) && a.matches(t[j - 1])) return false;
      }
      return true;
    case Template::imm_after:
      for (std::size_t j = 0; j < len; ++j) {
        if (a.matches(t[j]) && !(j + 1 < len && b.matches(t[j + 1]))) return false;
      }
      return true;
    case Template::not_imm_after:
      for (std::size_t j = 0; j + 1 < len; ++j) {
        if (a.matches(t[j]) && b.matches(t[j + 1])) return false;
      }
      return true;
  }
  return false;
}

Monotonicity classify_monotonicity(const Constraint& c) {
  switch (c.kind) {
    case Template::existence:
    case Template::correlation:
    case Template::response:
      return Monotonicity::monotonic;
    default:
      return Monotonicity::non_monotonic;
  }
}

std::vector<Constraint> violated_constraints(const std::vector<Constraint>& cs,
                                             const Trace& t, const Message& m) {
  Trace extended = t;
  extended.push_back(m);
  std::vector<Constraint> out;
  for (const Constraint& c : cs) {
    if (evaluate_constraint(c, t) && !evaluate_constraint(c, extended)) out.push_back(c);
  }
  return out;
}

std::string_view sender_name(SenderPattern s) {
  switch (s) {
    case SenderPattern::agent1: return "A1";
    case SenderPattern::agent2: return "A2";
    case SenderPattern::any: return "*";
  }
  return "?";
}

std::string_view agent_name(AgentId a) {
  return a == AgentId::agent1 ? "A1" : "A2";
}

SenderPattern parse_sender(std::string_view s) {
  s = trim(s);
  if (s == "A1") return SenderPattern::agent1;
  if (s == "A2") return SenderPattern::agent2;
  if (s == "*") return SenderPattern::any;
  throw ConstraintError("unknown sender '" + std::string(s) + "' (expected A1, A2 or *)");
}

AgentId parse_agent(std::string_view s) {
  SenderPattern p = parse_sender(s);
  if (p == SenderPattern::any) throw ConstraintError("a message needs a concrete sender");
  return p == SenderPattern::agent1 ? AgentId::agent1 : AgentId::agent2;
}

Atom parse_atom(std::string_view s) {
  s = trim(s);
  auto colon = s.find(':');
  if (colon == std::string_view::npos) throw ConstraintError("atom '" + std::string(s) + "' lacks a sender");
  Atom a{parse_sender(s.substr(0, colon)), std::string(trim(s.substr(colon + 1)))};
  if (a.word.empty()) throw ConstraintError("atom '" + std::string(s) + "' has an empty word");
  return a;
}

std::string format_atom(const Atom& a) {
  return std::string(sender_name(a.sender)) + ":" + a.word;
}

Message parse_message(std::string_view s) {
  s = trim(s);
  auto colon = s.find(':');
  if (colon == std::string_view::npos) throw ConstraintError("message '" + std::string(s) + "' lacks a sender");
  Message m{parse_agent(s.substr(0, colon)), std::string(trim(s.substr(colon + 1)))};
  if (m.word.empty()) throw ConstraintError("message '" + std::string(s) + "' has an empty word");
  return m;
}

std::string format_message(const Message& m) {
  return std::string(agent_name(m.sender)) + ":" + m.word;
}

Constraint parse_constraint(std::string_view s) {
  s = trim(s);
  auto open = s.find('(');
  if (open == std::string_view::npos || s.back() != ')') {
    throw ConstraintError("malformed constraint '" + std::string(s) + "'");
  }
  auto kind = template_from_name(s.substr(0, open));
  if (!kind) throw ConstraintError("unknown template in '" + std::string(s) + "'");
  auto args = split_commas(s.substr(open + 1, s.size() - open - 2));
  if (is_unary(*kind)) {
    if (args.size() != 2) throw ConstraintError("'" + std::string(s) + "' expects (n, atom)");
    unsigned n = 0;
    auto [ptr, ec] = std::from_chars(args[0].data(), args[0].data() + args[0].size(), n);
    if (ec != std::errc{} || ptr != args[0].data() + args[0].size()) {
      throw ConstraintError("bad count in '" + std::string(s) + "'");
    }
    return *kind == Template::existence ? Constraint::existence(n, parse_atom(args[1]))
                                        : Constraint::absence(n, parse_atom(args[1]));
  }
  if (args.size() != 2) throw ConstraintError("'" + std::string(s) + "' expects (atom, atom)");
  return Constraint::binary(*kind, parse_atom(args[0]), parse_atom(args[1]));
}

std::string format_constraint(const Constraint& c) {
  std::string out(template_name(c.kind));
  out += '(';
  if (is_unary(c.kind)) {
    out += std::to_string(c.count) + ", " + format_atom(c.a);
  } else {
    out += format_atom(c.a) + ", " + format_atom(c.b);
  }
  out += ')';
  return out;
}

Trace parse_trace(std::string_view s) {
  Trace t;
  if (trim(s).empty()) return t;
  for (auto part : split_commas(s)) t.push_back(parse_message(part));
  return t;
}

std::string format_trace(const Trace& t) {
  std::string out;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (i) out += ", ";
    out += format_message(t[i]);
  }
  return out;
}

}  // namespace valign
