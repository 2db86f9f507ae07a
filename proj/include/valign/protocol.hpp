#pragma once

#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "valign/constraint.hpp"

namespace valign {

class ProtocolError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An interaction protocol: vocabulary, constraints over messages built from
/// it, and the maximum interaction length.
struct Protocol {
  std::vector<Word> vocabulary;
  std::vector<Constraint> constraints;
  unsigned bound = 1;

  /// Throws ProtocolError if a word is duplicated, empty, or used by a
  /// constraint without belonging to the vocabulary.
  void validate() const;

  /// {A1, A2} x vocabulary, agent-1 messages first.
  std::vector<Message> alphabet() const;

  friend bool operator==(const Protocol&, const Protocol&) = default;
};

/// A set of (foreign, own) pairs.
class AlignmentRelation {
 public:
  using Pair = std::pair<Word, Word>;

  AlignmentRelation() = default;
  explicit AlignmentRelation(std::set<Pair> pairs) : pairs_(std::move(pairs)) {}

  void insert(Word foreign, Word own) { pairs_.emplace(std::move(foreign), std::move(own)); }
  bool contains(const Word& foreign, const Word& own) const { return pairs_.count({foreign, own}) > 0; }
  std::size_t size() const { return pairs_.size(); }
  bool empty() const { return pairs_.empty(); }
  const std::set<Pair>& pairs() const { return pairs_; }

  /// Each foreign word maps to at most one own word.
  bool is_functional() const;
  /// Functional, injective, and total on `foreign_vocabulary`.
  bool is_bijective_on(const std::vector<Word>& foreign_vocabulary) const;

  /// Throws ProtocolError if not functional or `foreign` is unmapped.
  const Word& apply(const Word& foreign) const;
  std::map<Word, Word> as_map() const;
  AlignmentRelation inverse() const;

  friend bool operator==(const AlignmentRelation&, const AlignmentRelation&) = default;

 private:
  std::set<Pair> pairs_;
};

/// Rewrites every word of `p` through `alignment` (foreign = p's words).
Protocol translate(const Protocol& p, const AlignmentRelation& alignment);

Trace translate_trace(const Trace& t, const AlignmentRelation& alignment);

/// Int(p1) == alignment(Int(p2)), decided by enumeration.
bool check_compatibility(const Protocol& p1, const Protocol& p2, const AlignmentRelation& alignment);

}  // namespace valign
