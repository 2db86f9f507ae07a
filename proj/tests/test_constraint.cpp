#include "doctest.h"
#include "oracles.hpp"
#include "valign/constraint.hpp"
#include "valign/monitor.hpp"

using namespace valign;

namespace {
Atom any(const char* w) { return Atom{SenderPattern::any, w}; }
Message m1(const char* w) { return Message{AgentId::agent1, w}; }
Message m2(const char* w) { return Message{AgentId::agent2, w}; }
}  // namespace

TEST_SUITE("constraint") {
  TEST_CASE("atoms match on word and sender pattern") {
    CHECK(Atom{SenderPattern::agent1, "x"}.matches(m1("x")));
    CHECK_FALSE(Atom{SenderPattern::agent1, "x"}.matches(m2("x")));
    CHECK(any("x").matches(m2("x")));
    CHECK_FALSE(any("x").matches(m2("X")));
  }

  TEST_CASE("existence on the waiter trace") {
    const auto c = Constraint::existence(1, Atom{SenderPattern::agent1, "da bere"});
    CHECK(evaluate_constraint(c, {m1("da bere"), m2("vino")}));
    CHECK_FALSE(evaluate_constraint(c, {m2("da bere")}));
  }

  TEST_CASE("finite readings of each template") {
    const Atom a = any("a"), b = any("b");
    auto eval = [](Template t, const Atom& x, const Atom& y, const Trace& tr) {
      return evaluate_constraint(Constraint::binary(t, x, y), tr);
    };
    CHECK(evaluate_constraint(Constraint::absence(0, a), {}));
    CHECK_FALSE(evaluate_constraint(Constraint::absence(1, a), {m1("a"), m2("a")}));
    CHECK(evaluate_constraint(Constraint::existence(2, a), {m1("a"), m2("b"), m2("a")}));
    CHECK(eval(Template::correlation, a, b, {m1("b"), m1("a")}));
    CHECK_FALSE(eval(Template::not_correlation, a, b, {m1("b"), m1("a")}));
    CHECK(eval(Template::response, a, b, {m1("a"), m1("b")}));
    CHECK_FALSE(eval(Template::response, a, b, {m1("b"), m1("a")}));
    CHECK(eval(Template::not_response, a, b, {m1("b"), m1("a")}));
    CHECK(eval(Template::before, a, b, {}));
    CHECK_FALSE(eval(Template::before_strong, a, b, {}));
    CHECK(eval(Template::before, a, b, {m1("a"), m1("b")}));
    CHECK_FALSE(eval(Template::before, a, b, {m1("b"), m1("a")}));
    CHECK_FALSE(eval(Template::not_before, a, b, {m1("a"), m1("c"), m1("b")}));
    CHECK(eval(Template::premise, a, b, {m1("b")}));  // position 0 has no predecessor
    CHECK_FALSE(eval(Template::premise, a, b, {m1("c"), m1("b")}));
    CHECK_FALSE(eval(Template::not_premise, a, b, {m1("a"), m1("b")}));
    CHECK_FALSE(eval(Template::imm_after, a, b, {m1("a")}));
    CHECK(eval(Template::imm_after, a, b, {m1("a"), m1("b")}));
    CHECK(eval(Template::not_imm_after, a, b, {m1("a")}));
    CHECK_FALSE(eval(Template::not_imm_after, a, b, {m1("a"), m1("b")}));
  }

  TEST_CASE("direct evaluation agrees with the LTL oracle") {
    Rng rng(5);
    for (int i = 0; i < 3000; ++i) {
      const auto vocab = std::vector<Word>{"p", "q", "r"};
      const auto c = oracle::random_constraint(vocab, rng);
      const auto t = oracle::random_trace(vocab, rng.below(7), rng);
      INFO(format_constraint(c), " on [", format_trace(t), "]");
      CHECK(evaluate_constraint(c, t) == oracle::holds(c, t));
    }
  }

  TEST_CASE("monotonicity classification") {
    const Atom a = any("a"), b = any("b");
    CHECK(classify_monotonicity(Constraint::existence(1, a)) == Monotonicity::monotonic);
    CHECK(classify_monotonicity(Constraint::binary(Template::correlation, a, b)) == Monotonicity::monotonic);
    CHECK(classify_monotonicity(Constraint::binary(Template::response, a, b)) == Monotonicity::monotonic);
    CHECK(classify_monotonicity(Constraint::absence(0, a)) == Monotonicity::non_monotonic);
    CHECK(classify_monotonicity(Constraint::binary(Template::before, a, b)) == Monotonicity::non_monotonic);
    CHECK(classify_monotonicity(Constraint::binary(Template::premise, a, b)) == Monotonicity::non_monotonic);
    CHECK(classify_monotonicity(Constraint::binary(Template::not_imm_after, a, b)) == Monotonicity::non_monotonic);
  }

  TEST_CASE("violated constraints hold before and fail after") {
    const Atom a = any("a"), b = any("b");
    const std::vector<Constraint> cs = {Constraint::absence(1, a), Constraint::binary(Template::not_correlation, b, a),
                                        Constraint::existence(1, b)};
    const auto v = violated_constraints(cs, {m1("a"), m2("b")}, m1("a"));
    REQUIRE(v.size() == 1);  // not_correlation already failed before the append
    CHECK(v[0] == cs[0]);
    CHECK(violated_constraints(cs, {}, m1("b")).empty());
  }

  TEST_CASE("factories reject malformed constraints") {
    CHECK_THROWS_AS(Constraint::existence(0, any("a")), ConstraintError);
    CHECK_THROWS_AS(Constraint::binary(Template::absence, any("a"), any("b")), ConstraintError);
  }

  TEST_CASE("text round trip") {
    const auto c = parse_constraint("response(A2:birra, A1:tipo)");
    CHECK(c.kind == Template::response);
    CHECK(c.a == Atom{SenderPattern::agent2, "birra"});
    CHECK(c.b == Atom{SenderPattern::agent1, "tipo"});
    CHECK(format_constraint(c) == "response(A2:birra, A1:tipo)");
    const auto e = parse_constraint("existence(1, *:size)");
    CHECK(e.count == 1);
    CHECK(e.a.sender == SenderPattern::any);
    CHECK(parse_constraint(format_constraint(e)) == e);
    CHECK(parse_constraint("!correlation(A2:beer, A1:wine)").kind == Template::not_correlation);
    const Trace t = parse_trace("A1:da bere, A2:vino");
    REQUIRE(t.size() == 2);
    CHECK(t[0] == m1("da bere"));
    CHECK(parse_trace(format_trace(t)) == t);
    CHECK(parse_trace("").empty());
    CHECK_THROWS_AS(parse_constraint("sometimes(A1:x)"), ConstraintError);
    CHECK_THROWS_AS(parse_atom("B:x"), ConstraintError);
    CHECK_THROWS_AS(parse_message("*:x"), ConstraintError);
  }
}

TEST_SUITE("monitor") {
  TEST_CASE("streaming verdict equals direct evaluation on every prefix") {
    Rng rng(17);
    const std::vector<Word> vocab{"a", "b"};
    for (int i = 0; i < 2000; ++i) {
      const auto c = oracle::random_constraint(vocab, rng, 4);
      const auto t = oracle::random_trace(vocab, rng.below(9), rng);
      MonitorState s = compile_monitor(c);
      for (std::size_t k = 0; k <= t.size(); ++k) {
        CHECK(s.accepting_if_ended == evaluate_constraint(c, Trace(t.begin(), t.begin() + static_cast<long>(k))));
        if (k < t.size()) s = monitor_step(s, c, t[k]);
      }
    }
  }

  TEST_CASE("permanent violation is irrevocable and final") {
    Rng rng(23);
    const std::vector<Word> vocab{"a", "b"};
    const auto alpha = oracle::alphabet(Protocol{vocab, {}, 3});
    for (int i = 0; i < 400; ++i) {
      const auto c = oracle::random_constraint(vocab, rng);
      const auto t = oracle::random_trace(vocab, rng.below(5), rng);
      const MonitorState s = run_monitor(c, t);
      if (!s.permanently_violated) continue;
      oracle::for_each_trace(alpha, 3, [&](const Trace& ext) {
        Trace full = t;
        full.insert(full.end(), ext.begin(), ext.end());
        CHECK_FALSE(oracle::holds(c, full));
        CHECK(run_monitor(c, full).permanently_violated);
      });
    }
  }

  TEST_CASE("premise remembers whether the previous message matched") {
    const auto c = Constraint::binary(Template::premise, any("a"), any("b"));
    MonitorState s = compile_monitor(c);
    CHECK(s.value == kPremiseStart);
    s = monitor_step(s, c, m1("c"));
    CHECK(s.value == kPremisePrevNotA);
    s = monitor_step(s, c, m1("a"));
    CHECK(s.value == kPremisePrevA);
    s = monitor_step(s, c, m1("b"));
    CHECK_FALSE(s.permanently_violated);
  }

  TEST_CASE("counters saturate and deficits count missing occurrences") {
    const auto ex = Constraint::existence(3, any("a"));
    MonitorState s = compile_monitor(ex);
    CHECK(monitor_deficit(s, ex) == 3);
    s = monitor_step(s, ex, m1("a"));
    CHECK(monitor_deficit(s, ex) == 2);
    for (int i = 0; i < 10; ++i) s = monitor_step(s, ex, m2("a"));
    CHECK(s.value <= 4);
    CHECK(monitor_deficit(s, ex) == 0);
    REQUIRE(deficit_word(ex) != nullptr);
    CHECK(*deficit_word(ex) == "a");

    const auto ab = Constraint::absence(1, any("a"));
    MonitorState t = compile_monitor(ab);
    for (int i = 0; i < 5; ++i) t = monitor_step(t, ab, m1("a"));
    CHECK(t.permanently_violated);
    CHECK(encode(t) == 0xFF);
    const MonitorState back = decode(encode(t), ab);
    CHECK(back.permanently_violated);
    CHECK_FALSE(back.accepting_if_ended);
  }
}
