#include "valign/protocol.hpp"

#include <algorithm>
#include <unordered_set>

#include "valign/satisfiability.hpp"

namespace valign {

void Protocol::validate() const {
  if (bound == 0) throw ProtocolError("protocol bound must be positive");
  std::unordered_set<Word> seen;
  for (const Word& w : vocabulary) {
    if (w.empty()) throw ProtocolError("empty word in vocabulary");
    if (!seen.insert(w).second) throw ProtocolError("duplicate word '" + w + "' in vocabulary");
  }
  for (const Constraint& c : constraints) {
    if (c.kind == Template::existence && c.count < 1) {
      throw ProtocolError("existence needs a count of at least 1: " + format_constraint(c));
    }
    if (!seen.count(c.a.word)) throw ProtocolError("word '" + c.a.word + "' is not in the vocabulary");
    if (!is_unary(c.kind) && !seen.count(c.b.word)) {
      throw ProtocolError("word '" + c.b.word + "' is not in the vocabulary");
    }
  }
}

std::vector<Message> Protocol::alphabet() const {
  std::vector<Message> out;
  out.reserve(2 * vocabulary.size());
  for (AgentId a : {AgentId::agent1, AgentId::agent2}) {
    for (const Word& w : vocabulary) out.push_back(Message{a, w});
  }
  return out;
}

bool AlignmentRelation::is_functional() const {
  const Word* previous = nullptr;
  for (const auto& [foreign, own] : pairs_) {
    if (previous && *previous == foreign) return false;
    previous = &foreign;
  }
  return true;
}

bool AlignmentRelation::is_bijective_on(const std::vector<Word>& foreign_vocabulary) const {
  if (!is_functional() || pairs_.size() != foreign_vocabulary.size()) return false;
  std::set<Word> images;
  for (const auto& [foreign, own] : pairs_) {
    if (std::find(foreign_vocabulary.begin(), foreign_vocabulary.end(), foreign) == foreign_vocabulary.end()) {
      return false;
    }
    if (!images.insert(own).second) return false;
  }
  return true;
}

const Word& AlignmentRelation::apply(const Word& foreign) const {
  auto it = pairs_.lower_bound({foreign, Word{}});
  if (it == pairs_.end() || it->first != foreign) throw ProtocolError("no mapping for word '" + foreign + "'");
  auto next = std::next(it);
  if (next != pairs_.end() && next->first == foreign) {
    throw ProtocolError("word '" + foreign + "' has more than one mapping");
  }
  return it->second;
}

std::map<Word, Word> AlignmentRelation::as_map() const {
  std::map<Word, Word> out;
  for (const auto& [foreign, own] : pairs_) out.emplace(foreign, own);
  return out;
}

AlignmentRelation AlignmentRelation::inverse() const {
  AlignmentRelation out;
  for (const auto& [foreign, own] : pairs_) out.insert(own, foreign);
  return out;
}

Protocol translate(const Protocol& p, const AlignmentRelation& alignment) {
  Protocol out;
  out.bound = p.bound;
  out.vocabulary.reserve(p.vocabulary.size());
  std::set<Word> images;
  for (const Word& w : p.vocabulary) {
    out.vocabulary.push_back(alignment.apply(w));
    if (!images.insert(out.vocabulary.back()).second) {
      throw ProtocolError("alignment maps two words to '" + out.vocabulary.back() + "'");
    }
  }
  out.constraints.reserve(p.constraints.size());
  for (Constraint c : p.constraints) {
    c.a.word = alignment.apply(c.a.word);
    if (!is_unary(c.kind)) c.b.word = alignment.apply(c.b.word);
    out.constraints.push_back(std::move(c));
  }
  return out;
}

Trace translate_trace(const Trace& t, const AlignmentRelation& alignment) {
  Trace out;
  out.reserve(t.size());
  for (const Message& m : t) out.push_back(Message{m.sender, alignment.apply(m.word)});
  return out;
}

bool check_compatibility(const Protocol& p1, const Protocol& p2, const AlignmentRelation& alignment) {
  if (p1.bound != p2.bound) return false;
  auto models1 = brute_force_models(p1);
  auto models2 = brute_force_models(p2);
  if (models1.size() != models2.size()) return false;
  std::set<Trace> image;
  for (const Trace& t : models2) image.insert(translate_trace(t, alignment));
  std::set<Trace> own(models1.begin(), models1.end());
  return own == image;
}

}  // namespace valign
