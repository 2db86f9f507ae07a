#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "valign/learner.hpp"
#include "valign/random.hpp"
#include "valign/satisfiability.hpp"

namespace valign {

/// One agent's side of a running interaction.
struct AgentRuntime {
  AgentRuntime(AgentId id, CompiledProtocol& protocol, InterpretationState& learner)
      : id(id), protocol(protocol), learner(learner) {}

  AgentId id;
  CompiledProtocol& protocol;
  InterpretationState& learner;
  /// Own messages verbatim, received ones as interpreted.
  Trace local_trace;
  /// Foreign word behind each received position of `local_trace`.
  std::vector<std::optional<Word>> received_as;
};

enum class InteractionStatus { success_both, success_one, failure_interpretation, failure_stuck, bound_reached };

std::string_view status_name(InteractionStatus s);

struct InteractionLogRecord {
  std::size_t position = 0;
  AgentId speaker = AgentId::agent1;
  Word word_sent;
  std::optional<Word> word_interpreted;
  std::size_t possible_set_size = 0;
  /// "own_word: constraint" for each violation behind an impossible candidate.
  std::vector<std::string> violated_constraints;
};

struct InteractionOutcome {
  InteractionStatus status = InteractionStatus::failure_stuck;
  std::size_t length = 0;
  /// Messages as uttered, with agent-2 words mapped to agent 1's vocabulary
  /// when the true alignment is known.
  Trace transcript;
  std::vector<InteractionLogRecord> log;
};

enum class MessageChoice { uniform_random };

struct EnginePolicy {
  /// Chance that an agent whose trace is already a model declines to speak.
  double p_stop = 0.5;
  MessageChoice message_choice = MessageChoice::uniform_random;
  bool record_log = false;
};

/// Evidence for one candidate interpretation, as handed to the learner.
std::map<Word, Verdict> learning_hook(AgentRuntime& receiver, const Word& foreign, const std::optional<Word>& chosen,
                                      const std::vector<Message>& possible);

/// Explains why appending `candidate` violates `c` on the receiver's trace:
/// which earlier messages are involved and whether each was received.
Violation trace_violation(const Constraint& c, const AgentRuntime& receiver, const Message& candidate);

/// Runs one interaction to completion. `agent1.id` must be agent1 and
/// `agent2.id` agent2; `truth` (agent-2 words to agent-1 words) only affects
/// the transcript.
InteractionOutcome run_interaction(AgentRuntime& agent1, AgentRuntime& agent2, const EnginePolicy& policy, Rng& rng,
                                   const AlignmentRelation* truth = nullptr);

}  // namespace valign
