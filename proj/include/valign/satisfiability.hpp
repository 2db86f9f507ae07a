#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "valign/monitor.hpp"
#include "valign/protocol.hpp"

namespace valign {

/// Monitor codes of every constraint (protocol order) plus the number of
/// messages consumed so far.
struct JointState {
  std::string codes;  // one byte per constraint, see encode()
  unsigned steps_used = 0;

  friend bool operator==(const JointState&, const JointState&) = default;
};

/// len(t) <= bound and every constraint holds on t (direct semantics).
bool is_model(const Protocol& p, const Trace& t);

/// Upper limit on the number of traces brute_force_models will enumerate.
inline constexpr std::size_t kBruteForceTraceLimit = 2'000'000;

/// Number of traces of length <= p.bound over p's alphabet.
std::size_t trace_space_size(const Protocol& p);

/// Every model of `p`, in length-then-lexicographic alphabet order.
/// Throws ProtocolError when the trace space exceeds kBruteForceTraceLimit.
std::vector<Trace> brute_force_models(const Protocol& p);

/// A protocol compiled to monitors, with a memo of which joint monitor states
/// can still reach acceptance within a number of steps.
///
/// Queries mutate the memo, so an instance must be confined to one thread.
/// Results never depend on the memo's contents.
class CompiledProtocol {
 public:
  explicit CompiledProtocol(Protocol p);

  const Protocol& protocol() const { return protocol_; }
  const std::vector<Message>& alphabet() const { return alphabet_; }
  unsigned bound() const { return protocol_.bound; }

  JointState initial_state() const;
  /// Throws ProtocolError for a word outside the vocabulary.
  JointState advance(const JointState& s, const Message& m) const;
  /// Throws ProtocolError for a word outside the vocabulary or a trace
  /// longer than the bound.
  JointState state_after(const Trace& t) const;

  bool is_model(const Trace& t) const;
  bool is_partial_model(const Trace& t);

  /// Messages m with t . m still a partial model, in alphabet order.
  /// Throws ProtocolError if t itself is not a partial model.
  std::vector<Message> possible_messages(const Trace& t);

  /// Whether at most `k` further messages can bring every monitor of `s` to
  /// acceptance without violating any.
  bool feasible_within(const JointState& s, unsigned k);

  bool is_satisfiable() { return feasible_within(initial_state(), bound()); }

  std::size_t memo_size() const { return memo_.size(); }
  std::size_t message_class_count() const { return classes_.size(); }

 private:
  struct MessageClass {
    std::vector<std::uint8_t> match_bits;  // per constraint: bit0 = a, bit1 = b
    std::vector<std::size_t> members;      // indices into alphabet_
  };

  struct MemoEntry {
    unsigned feasible_from = ~0u;  // feasible for every k >= this
    int infeasible_up_to = -1;     // infeasible for every k <= this
  };

  std::size_t index_of(const Message& m) const;
  std::string step_codes(const std::string& codes, const MessageClass& cls, bool& violated) const;
  bool all_accepting(const std::string& codes) const;
  unsigned deficit_lower_bound(const std::string& codes) const;
  bool search(const std::string& codes, unsigned k);

  Protocol protocol_;
  std::vector<Message> alphabet_;
  std::unordered_map<Word, std::size_t> word_index_;
  std::vector<MessageClass> classes_;
  std::vector<std::size_t> class_of_;            // alphabet index -> class
  std::vector<int> deficit_group_;               // constraint -> word group or -1
  std::size_t deficit_groups_ = 0;
  std::unordered_map<std::string, MemoEntry> memo_;
};

}  // namespace valign
