#include "valign/engine.hpp"

#include <algorithm>
#include <cassert>
#include <set>
#include <stdexcept>

namespace valign {

std::string_view status_name(InteractionStatus s) {
  switch (s) {
    case InteractionStatus::success_both: return "success_both";
    case InteractionStatus::success_one: return "success_one";
    case InteractionStatus::failure_interpretation: return "failure_interpretation";
    case InteractionStatus::failure_stuck: return "failure_stuck";
    case InteractionStatus::bound_reached: return "bound_reached";
  }
  return "?";
}

namespace {

TracedMessage traced_at(const AgentRuntime& r, std::size_t k) {
  const Message& m = r.local_trace[k];
  if (m.sender == r.id) return TracedMessage{false, {}, m.word};
  const auto& foreign = r.received_as[k];
  if (!foreign) throw std::logic_error("received position without a foreign word");
  return TracedMessage{true, *foreign, m.word};
}

}  // namespace

Violation trace_violation(const Constraint& c, const AgentRuntime& receiver, const Message& candidate) {
  Violation v{c, {}, false};
  const Trace& t = receiver.local_trace;
  const std::size_t j = t.size();
  const bool ma = c.a.matches(candidate);
  const bool mb = !is_unary(c.kind) && c.b.matches(candidate);

  if (is_negative(c.kind) && !evaluate_constraint(c, Trace{candidate})) {
    v.partner_absent = true;
    return v;
  }

  switch (c.kind) {
    case Template::absence:
      for (std::size_t k = 0; k < j; ++k) {
        if (c.a.matches(t[k])) v.partners.push_back(traced_at(receiver, k));
      }
      break;
    case Template::not_correlation:
      for (std::size_t k = 0; k < j; ++k) {
        if ((ma && c.b.matches(t[k])) || (mb && c.a.matches(t[k]))) v.partners.push_back(traced_at(receiver, k));
      }
      break;
    case Template::not_response:
    case Template::not_before:
      if (mb) {
        for (std::size_t k = 0; k < j; ++k) {
          if (c.a.matches(t[k])) v.partners.push_back(traced_at(receiver, k));
        }
      }
      break;
    case Template::not_premise:
    case Template::not_imm_after:
      if (mb && j > 0 && c.a.matches(t[j - 1])) v.partners.push_back(traced_at(receiver, j - 1));
      break;
    case Template::premise:
      if (mb && j > 0 && !c.a.matches(t[j - 1])) v.partners.push_back(traced_at(receiver, j - 1));
      break;
    case Template::imm_after:
      if (j > 0 && c.a.matches(t[j - 1]) && !mb) {
        v.partners.push_back(traced_at(receiver, j - 1));
      } else {
        v.partner_absent = true;  // candidate matches a at the end: no successor yet
      }
      break;
    default:
      v.partner_absent = true;
      break;
  }
  if (v.partners.empty()) v.partner_absent = true;
  return v;
}

std::map<Word, Verdict> learning_hook(AgentRuntime& receiver, const Word& foreign, const std::optional<Word>& chosen,
                                      const std::vector<Message>& possible) {
  InterpretationState& learner = receiver.learner;
  learner.ensure_row(foreign);
  const AgentId interlocutor = other(receiver.id);
  const auto& constraints = receiver.protocol.protocol().constraints;

  std::map<Word, Verdict> verdicts;
  for (const Word& own : learner.update_set(foreign, chosen)) {
    const Message candidate{interlocutor, own};
    Verdict verdict;
    verdict.possible = std::find(possible.begin(), possible.end(), candidate) != possible.end();
    if (!verdict.possible && learner.config().strategy == Strategy::reasoning) {
      for (const Constraint& c : violated_constraints(constraints, receiver.local_trace, candidate)) {
        verdict.violations.push_back(trace_violation(c, receiver, candidate));
      }
    }
    verdicts.emplace(own, std::move(verdict));
  }
  learner.update(foreign, verdicts);
  return verdicts;
}

InteractionOutcome run_interaction(AgentRuntime& agent1, AgentRuntime& agent2, const EnginePolicy& policy, Rng& rng,
                                   const AlignmentRelation* truth) {
  if (agent1.id != AgentId::agent1 || agent2.id != AgentId::agent2) {
    throw std::invalid_argument("run_interaction expects agent 1 then agent 2");
  }
  if (agent1.protocol.bound() != agent2.protocol.bound()) {
    throw std::invalid_argument("both protocols must share the bound");
  }
  if (policy.p_stop < 0.0 || policy.p_stop > 1.0) throw std::invalid_argument("p_stop must lie in [0, 1]");

  AgentRuntime* agents[2] = {&agent1, &agent2};
  for (AgentRuntime* a : agents) {
    a->local_trace.clear();
    a->received_as.clear();
    a->learner.begin_interaction();
  }
  const unsigned bound = agent1.protocol.bound();
  InteractionOutcome outcome;

  while (true) {
    if (outcome.length == bound) {
      outcome.status = InteractionStatus::bound_reached;
      break;
    }

    std::vector<Message> possible[2];
    std::vector<Message> own_options[2];
    bool is_model[2];
    std::vector<std::size_t> willing;
    for (std::size_t i = 0; i < 2; ++i) {
      AgentRuntime& a = *agents[i];
      possible[i] = a.protocol.possible_messages(a.local_trace);  // throws if compliance broke
      for (const Message& m : possible[i]) {
        if (m.sender == a.id) own_options[i].push_back(m);
      }
      is_model[i] = a.protocol.is_model(a.local_trace);
      const bool able = !own_options[i].empty();
      const bool declines = is_model[i] && rng.bernoulli(policy.p_stop);
      if (able && !declines) willing.push_back(i);
    }

    if (willing.empty()) {
      if (is_model[0] && is_model[1]) {
        outcome.status = InteractionStatus::success_both;
      } else if (is_model[0] || is_model[1]) {
        outcome.status = InteractionStatus::success_one;
      } else {
        outcome.status = InteractionStatus::failure_stuck;
      }
      break;
    }

    const std::size_t s = willing[rng.below(willing.size())];
    const std::size_t r = 1 - s;
    AgentRuntime& speaker = *agents[s];
    AgentRuntime& receiver = *agents[r];

    const Message sent = rng.pick(own_options[s]);
    speaker.local_trace.push_back(sent);
    speaker.received_as.push_back(std::nullopt);
    ++outcome.length;
    outcome.transcript.push_back(
        truth && sent.sender == AgentId::agent2 ? Message{sent.sender, truth->apply(sent.word)} : sent);

    // Interpretation candidates: the speaker's words the receiver's protocol allows here.
    std::set<Word> candidates;
    for (const Message& m : possible[r]) {
      if (m.sender == speaker.id) candidates.insert(m.word);
    }
    const Word& foreign = sent.word;
    auto chosen = receiver.learner.choose_interpretation(foreign, candidates, rng);
    auto verdicts = learning_hook(receiver, foreign, chosen, possible[r]);

    if (policy.record_log) {
      InteractionLogRecord rec;
      rec.position = outcome.length - 1;
      rec.speaker = speaker.id;
      rec.word_sent = foreign;
      rec.word_interpreted = chosen;
      const auto taken = receiver.learner.images_excluding(foreign);
      for (const Word& w : candidates) rec.possible_set_size += taken.count(w) ? 0 : 1;
      for (const auto& [own, verdict] : verdicts) {
        for (const Violation& v : verdict.violations) {
          rec.violated_constraints.push_back(own + ": " + format_constraint(v.constraint));
        }
      }
      outcome.log.push_back(std::move(rec));
    }

    if (!chosen) {
      outcome.status = InteractionStatus::failure_interpretation;
      break;
    }
    receiver.local_trace.push_back(Message{speaker.id, *chosen});
    receiver.received_as.push_back(foreign);
    assert(receiver.protocol.is_partial_model(receiver.local_trace));
  }
  return outcome;
}

}  // namespace valign
