#include <algorithm>

#include "doctest.h"
#include "valign/engine.hpp"
#include "valign/generator.hpp"
#include "valign/protocol_io.hpp"

using namespace valign;

namespace {

const std::string kData = VALIGN_DATA_DIR;

PriorAlignment exact_prior(const AlignmentRelation& a) {
  PriorAlignment p;
  for (const auto& [f, o] : a.pairs()) p.entries[{f, o}] = 1;
  return p;
}

}  // namespace

TEST_SUITE("engine") {
  TEST_CASE("waiter and customer with the true alignment always succeed") {
    CompiledProtocol waiter(load_protocol(kData + "/waiter.json"));
    CompiledProtocol customer(load_protocol(kData + "/customer_compatible.json"));
    const AlignmentRelation alpha = load_alignment(kData + "/alpha.csv");
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      // confidence 1 softmaxes to e/(e+6) against 1/(e+6): the true word wins every argmax
      InterpretationState l1(waiter.protocol().vocabulary, LearnerConfig::simple_defaults(), exact_prior(alpha));
      InterpretationState l2(customer.protocol().vocabulary, LearnerConfig::simple_defaults(),
                             exact_prior(alpha.inverse()));
      AgentRuntime a1(AgentId::agent1, waiter, l1), a2(AgentId::agent2, customer, l2);
      Rng rng(seed);
      const auto out = run_interaction(a1, a2, EnginePolicy{}, rng, &alpha);
      CHECK(out.status != InteractionStatus::failure_interpretation);
      CHECK(out.status != InteractionStatus::failure_stuck);
      CHECK(waiter.is_model(a1.local_trace));
      CHECK(a1.local_trace == out.transcript);
      CHECK(translate_trace(a2.local_trace, alpha) == a1.local_trace);
    }
  }

  TEST_CASE("a misinterpreted water is blamed when beer becomes impossible") {
    // customer words arrive as the waiter's, not_correlation between birra and vino
    Protocol p{{"da bere", "birra", "vino", "acqua"},
               {Constraint::binary(Template::not_correlation, Atom{SenderPattern::agent2, "birra"},
                                   Atom{SenderPattern::agent2, "vino"})},
               4};
    CompiledProtocol cp(p);
    LearnerConfig cfg = LearnerConfig::reasoning_defaults(4);
    InterpretationState learner(p.vocabulary, cfg);
    learner.set_row("water", {0.1, 0.1, 0.6, 0.2});
    learner.set_row("beer", {0.1, 0.5, 0.2, 0.2});
    AgentRuntime waiter(AgentId::agent1, cp, learner);
    learner.begin_interaction();
    Rng rng(1);
    waiter.local_trace = parse_trace("A1:da bere");
    waiter.received_as = {std::nullopt};
    std::set<Word> cands;
    for (const Message& m : cp.possible_messages(waiter.local_trace)) {
      if (m.sender == AgentId::agent2) cands.insert(m.word);
    }
    REQUIRE(learner.choose_interpretation("water", cands, rng) == Word("vino"));
    waiter.local_trace.push_back(parse_message("A2:vino"));
    waiter.received_as.push_back(Word("water"));

    const auto possible = cp.possible_messages(waiter.local_trace);
    cands.clear();
    for (const Message& m : possible) {
      if (m.sender == AgentId::agent2) cands.insert(m.word);
    }
    const auto chosen = learner.choose_interpretation("beer", cands, rng);
    REQUIRE(chosen.has_value());
    CHECK(*chosen != "birra");
    const double rp = cfg.punishment_rate;
    const auto verdicts = learning_hook(waiter, "beer", chosen, possible);
    const Verdict& birra = verdicts.at("birra");
    CHECK_FALSE(birra.possible);
    REQUIRE(birra.violations.size() == 1);
    REQUIRE(birra.violations[0].partners.size() == 1);
    CHECK(birra.violations[0].partners[0] == TracedMessage{true, "water", "vino"});
    // water row: vino 0.6 - rp * 0.5, the rest unchanged, then normalized
    const double vino = 0.6 - rp * 0.5;
    CHECK(learner.weight("water", "vino") == doctest::Approx(vino / (0.4 + vino)));
  }

  TEST_CASE("violation partners") {
    Protocol p{{"a", "b", "c"}, {}, 5};
    CompiledProtocol cp(p);
    InterpretationState l(p.vocabulary, LearnerConfig::reasoning_defaults(3));
    AgentRuntime r(AgentId::agent1, cp, l);
    r.local_trace = parse_trace("A2:a, A1:a, A2:c");
    r.received_as = {Word("x"), std::nullopt, Word("z")};
    const Atom a{SenderPattern::any, "a"}, b{SenderPattern::any, "b"}, c{SenderPattern::any, "c"};

    const auto abs = trace_violation(Constraint::absence(2, a), r, parse_message("A2:a"));
    REQUIRE(abs.partners.size() == 2);
    CHECK(abs.partners[0] == TracedMessage{true, "x", "a"});
    CHECK(abs.partners[1] == TracedMessage{false, {}, "a"});

    const auto prem = trace_violation(Constraint::binary(Template::premise, a, b), r, parse_message("A2:b"));
    REQUIRE(prem.partners.size() == 1);
    CHECK(prem.partners[0] == TracedMessage{true, "z", "c"});

    const auto imm = trace_violation(Constraint::binary(Template::imm_after, c, a), r, parse_message("A2:b"));
    REQUIRE(imm.partners.size() == 1);
    CHECK(imm.partners[0].foreign == "z");

    const auto self = trace_violation(Constraint::binary(Template::not_response, b, b), r, parse_message("A2:b"));
    CHECK(self.partner_absent);
    CHECK(self.partners.empty());

    const auto nb = trace_violation(Constraint::binary(Template::not_before, a, b), r, parse_message("A2:b"));
    CHECK(nb.partners.size() == 2);
  }

  TEST_CASE("random interactions respect compliance and report consistent outcomes") {
    Rng gen(2);
    for (int i = 0; i < 40; ++i) {
      const CompatiblePair pair = generate_compatible_pair(5, 5, 5, gen);
      CompiledProtocol p1(pair.first), p2(pair.second);
      for (Strategy s : {Strategy::simple, Strategy::reasoning}) {
        InterpretationState l1(pair.first.vocabulary, LearnerConfig::defaults(s, 5));
        InterpretationState l2(pair.second.vocabulary, LearnerConfig::defaults(s, 5));
        for (int k = 0; k < 5; ++k) {
          AgentRuntime a1(AgentId::agent1, p1, l1), a2(AgentId::agent2, p2, l2);
          EnginePolicy policy;
          policy.record_log = true;
          const auto out = run_interaction(a1, a2, policy, gen, &pair.alignment);
          CHECK(out.length <= 5);
          CHECK(out.log.size() == out.length);
          CHECK(p1.is_partial_model(a1.local_trace));
          CHECK(p2.is_partial_model(a2.local_trace));
          switch (out.status) {
            case InteractionStatus::success_both:
              CHECK(p1.is_model(a1.local_trace));
              CHECK(p2.is_model(a2.local_trace));
              break;
            case InteractionStatus::success_one:
              CHECK(p1.is_model(a1.local_trace) != p2.is_model(a2.local_trace));
              break;
            case InteractionStatus::failure_interpretation:
              CHECK_FALSE(out.log.back().word_interpreted.has_value());
              break;
            case InteractionStatus::bound_reached:
              CHECK(out.length == 5);
              break;
            case InteractionStatus::failure_stuck:
              break;
          }
          // own messages appear verbatim in the speaker's trace
          for (std::size_t j = 0; j < a1.local_trace.size(); ++j) {
            if (a1.local_trace[j].sender == AgentId::agent1) CHECK(out.transcript[j] == a1.local_trace[j]);
          }
          // rows exist exactly for the foreign words received so far
          for (const auto& rec : out.log) {
            const InterpretationState& receiver = rec.speaker == AgentId::agent1 ? l2 : l1;
            CHECK(receiver.has_row(rec.word_sent));
          }
        }
        for (const auto& [f, row] : l1.rows()) CHECK(std::find(pair.second.vocabulary.begin(), pair.second.vocabulary.end(), f) != pair.second.vocabulary.end());
      }
    }
  }

  TEST_CASE("an agent whose trace is a model may stop at once") {
    CompiledProtocol p1(Protocol{{"a"}, {}, 3}), p2(Protocol{{"b"}, {}, 3});
    InterpretationState l1({"a"}, LearnerConfig::simple_defaults()), l2({"b"}, LearnerConfig::simple_defaults());
    AgentRuntime a1(AgentId::agent1, p1, l1), a2(AgentId::agent2, p2, l2);
    Rng rng(3);
    EnginePolicy always_stop;
    always_stop.p_stop = 1.0;
    const auto quiet = run_interaction(a1, a2, always_stop, rng);
    CHECK(quiet.status == InteractionStatus::success_both);
    CHECK(quiet.length == 0);
    EnginePolicy never_stop;
    never_stop.p_stop = 0.0;
    const auto full = run_interaction(a1, a2, never_stop, rng);
    CHECK(full.status == InteractionStatus::bound_reached);
    CHECK(full.length == 3);
  }

  TEST_CASE("argument checks") {
    CompiledProtocol p1(Protocol{{"a"}, {}, 3}), p2(Protocol{{"b"}, {}, 2});
    InterpretationState l1({"a"}, LearnerConfig::simple_defaults()), l2({"b"}, LearnerConfig::simple_defaults());
    AgentRuntime a1(AgentId::agent1, p1, l1), a2(AgentId::agent2, p2, l2);
    Rng rng(4);
    CHECK_THROWS_AS(run_interaction(a1, a2, EnginePolicy{}, rng), std::invalid_argument);
    CHECK_THROWS_AS(run_interaction(a2, a1, EnginePolicy{}, rng), std::invalid_argument);
  }
}
