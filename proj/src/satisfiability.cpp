#include "valign/satisfiability.hpp"

#include <algorithm>
#include <map>

namespace valign {

bool is_model(const Protocol& p, const Trace& t) {
  if (t.size() > p.bound) return false;
  for (const Message& m : t) {
    if (std::find(p.vocabulary.begin(), p.vocabulary.end(), m.word) == p.vocabulary.end()) return false;
  }
  return std::all_of(p.constraints.begin(), p.constraints.end(),
                     [&](const Constraint& c) { return evaluate_constraint(c, t); });
}

std::size_t trace_space_size(const Protocol& p) {
  const std::size_t alphabet = 2 * p.vocabulary.size();
  std::size_t total = 1;
  std::size_t layer = 1;
  for (unsigned len = 1; len <= p.bound; ++len) {
    if (alphabet != 0 && layer > kBruteForceTraceLimit / alphabet) return kBruteForceTraceLimit + 1;
    layer *= alphabet;
    total += layer;
    if (total > kBruteForceTraceLimit) return kBruteForceTraceLimit + 1;
  }
  return total;
}

std::vector<Trace> brute_force_models(const Protocol& p) {
  if (trace_space_size(p) > kBruteForceTraceLimit) {
    throw ProtocolError("protocol too large for enumeration (" + std::to_string(p.vocabulary.size()) +
                        " words, bound " + std::to_string(p.bound) + ")");
  }
  const auto alphabet = p.alphabet();
  std::vector<Trace> models;
  std::vector<Trace> layer{Trace{}};
  for (unsigned len = 0;; ++len) {
    for (const Trace& t : layer) {
      if (std::all_of(p.constraints.begin(), p.constraints.end(),
                      [&](const Constraint& c) { return evaluate_constraint(c, t); })) {
        models.push_back(t);
      }
    }
    if (len == p.bound) break;
    std::vector<Trace> next;
    next.reserve(layer.size() * alphabet.size());
    for (const Trace& t : layer) {
      for (const Message& m : alphabet) {
        next.push_back(t);
        next.back().push_back(m);
      }
    }
    layer = std::move(next);
  }
  return models;
}

CompiledProtocol::CompiledProtocol(Protocol p) : protocol_(std::move(p)) {
  protocol_.validate();
  alphabet_ = protocol_.alphabet();
  for (std::size_t i = 0; i < protocol_.vocabulary.size(); ++i) word_index_[protocol_.vocabulary[i]] = i;
  for (const Constraint& c : protocol_.constraints) compile_monitor(c);

  // Messages that match the same atoms drive every monitor identically.
  std::map<std::vector<std::uint8_t>, std::size_t> by_signature;
  class_of_.resize(alphabet_.size());
  for (std::size_t i = 0; i < alphabet_.size(); ++i) {
    std::vector<std::uint8_t> bits;
    bits.reserve(protocol_.constraints.size());
    for (const Constraint& c : protocol_.constraints) {
      const bool ma = c.a.matches(alphabet_[i]);
      const bool mb = !is_unary(c.kind) && c.b.matches(alphabet_[i]);
      bits.push_back(static_cast<std::uint8_t>((ma ? 1u : 0u) | (mb ? 2u : 0u)));
    }
    auto [it, inserted] = by_signature.emplace(bits, classes_.size());
    if (inserted) classes_.push_back(MessageClass{std::move(bits), {}});
    classes_[it->second].members.push_back(i);
    class_of_[i] = it->second;
  }

  // A message carries one word, so it can only reduce deficits of
  // constraints targeting that word.
  std::map<Word, int> groups;
  for (const Constraint& c : protocol_.constraints) {
    const Word* w = deficit_word(c);
    if (!w) {
      deficit_group_.push_back(-1);
      continue;
    }
    auto [it, inserted] = groups.emplace(*w, static_cast<int>(groups.size()));
    deficit_group_.push_back(it->second);
  }
  deficit_groups_ = groups.size();
}

std::size_t CompiledProtocol::index_of(const Message& m) const {
  auto it = word_index_.find(m.word);
  if (it == word_index_.end()) throw ProtocolError("word '" + m.word + "' is not in the protocol vocabulary");
  const std::size_t n = protocol_.vocabulary.size();
  return (m.sender == AgentId::agent1 ? 0 : n) + it->second;
}

JointState CompiledProtocol::initial_state() const {
  JointState s;
  s.codes.reserve(protocol_.constraints.size());
  for (const Constraint& c : protocol_.constraints) s.codes.push_back(static_cast<char>(encode(compile_monitor(c))));
  return s;
}

std::string CompiledProtocol::step_codes(const std::string& codes, const MessageClass& cls, bool& violated) const {
  std::string next = codes;
  violated = false;
  const auto& cs = protocol_.constraints;
  for (std::size_t i = 0; i < cs.size(); ++i) {
    const MonitorState s = decode(static_cast<std::uint8_t>(codes[i]), cs[i]);
    const std::uint8_t bits = cls.match_bits[i];
    const MonitorState n = monitor_step(s, cs[i], (bits & 1u) != 0, (bits & 2u) != 0);
    violated = violated || n.permanently_violated;
    next[i] = static_cast<char>(encode(n));
  }
  return next;
}

JointState CompiledProtocol::advance(const JointState& s, const Message& m) const {
  bool violated = false;
  return JointState{step_codes(s.codes, classes_[class_of_[index_of(m)]], violated), s.steps_used + 1};
}

JointState CompiledProtocol::state_after(const Trace& t) const {
  if (t.size() > protocol_.bound) throw ProtocolError("trace longer than the protocol bound");
  JointState s = initial_state();
  for (const Message& m : t) s = advance(s, m);
  return s;
}

bool CompiledProtocol::all_accepting(const std::string& codes) const {
  const auto& cs = protocol_.constraints;
  for (std::size_t i = 0; i < cs.size(); ++i) {
    if (!decode(static_cast<std::uint8_t>(codes[i]), cs[i]).accepting_if_ended) return false;
  }
  return true;
}

unsigned CompiledProtocol::deficit_lower_bound(const std::string& codes) const {
  if (deficit_groups_ == 0) return 0;
  std::vector<unsigned> per_group(deficit_groups_, 0);
  const auto& cs = protocol_.constraints;
  for (std::size_t i = 0; i < cs.size(); ++i) {
    if (deficit_group_[i] < 0) continue;
    unsigned d = monitor_deficit(decode(static_cast<std::uint8_t>(codes[i]), cs[i]), cs[i]);
    auto& g = per_group[static_cast<std::size_t>(deficit_group_[i])];
    g = std::max(g, d);
  }
  unsigned total = 0;
  for (unsigned g : per_group) total += g;
  return total;
}

bool CompiledProtocol::is_model(const Trace& t) const {
  if (t.size() > protocol_.bound) return false;
  for (const Message& m : t) {
    if (!word_index_.count(m.word)) return false;
  }
  return all_accepting(state_after(t).codes);
}

bool CompiledProtocol::feasible_within(const JointState& s, unsigned k) {
  for (std::size_t i = 0; i < s.codes.size(); ++i) {
    if (decode(static_cast<std::uint8_t>(s.codes[i]), protocol_.constraints[i]).permanently_violated) return false;
  }
  return search(s.codes, k);
}

bool CompiledProtocol::search(const std::string& codes, unsigned k) {
  if (all_accepting(codes)) return true;
  if (k == 0 || deficit_lower_bound(codes) > k) return false;

  if (auto it = memo_.find(codes); it != memo_.end()) {
    if (k >= it->second.feasible_from) return true;
    if (static_cast<int>(k) <= it->second.infeasible_up_to) return false;
  }

  bool found = false;
  for (const MessageClass& cls : classes_) {
    bool violated = false;
    std::string next = step_codes(codes, cls, violated);
    if (violated) continue;
    if (search(next, k - 1)) {
      found = true;
      break;
    }
  }

  MemoEntry& entry = memo_[codes];
  if (found) {
    entry.feasible_from = std::min(entry.feasible_from, k);
  } else {
    entry.infeasible_up_to = std::max(entry.infeasible_up_to, static_cast<int>(k));
  }
  return found;
}

bool CompiledProtocol::is_partial_model(const Trace& t) {
  if (t.size() > protocol_.bound) return false;
  for (const Message& m : t) {
    if (!word_index_.count(m.word)) return false;
  }
  return feasible_within(state_after(t), protocol_.bound - static_cast<unsigned>(t.size()));
}

std::vector<Message> CompiledProtocol::possible_messages(const Trace& t) {
  if (!is_partial_model(t)) throw ProtocolError("trace is not a partial model: [" + format_trace(t) + "]");
  std::vector<Message> out;
  const unsigned remaining = protocol_.bound - static_cast<unsigned>(t.size());
  if (remaining == 0) return out;
  const JointState s = state_after(t);
  std::vector<bool> allowed(alphabet_.size(), false);
  for (const MessageClass& cls : classes_) {
    bool violated = false;
    std::string next = step_codes(s.codes, cls, violated);
    if (violated || !search(next, remaining - 1)) continue;
    for (std::size_t i : cls.members) allowed[i] = true;
  }
  for (std::size_t i = 0; i < alphabet_.size(); ++i) {
    if (allowed[i]) out.push_back(alphabet_[i]);
  }
  return out;
}

}  // namespace valign
