#include <cmath>

#include "doctest.h"
#include "json.hpp"
#include "valign/experiments.hpp"

using namespace valign;

namespace {

AlignmentRelation rel(std::initializer_list<std::pair<const char*, const char*>> ps) {
  AlignmentRelation r;
  for (const auto& [f, o] : ps) r.insert(f, o);
  return r;
}

AlignmentRelation identity(std::size_t n) {
  AlignmentRelation r;
  for (std::size_t i = 0; i < n; ++i) r.insert("b" + std::to_string(i), "a" + std::to_string(i));
  return r;
}

ExperimentConfig small(std::uint64_t seed) {
  ExperimentConfig c;
  c.vocab_size = 6;
  c.n_constraints = 6;
  c.n_interactions = 30;
  c.n_repetitions = 3;
  c.seed = seed;
  return c;
}

}  // namespace

TEST_SUITE("metrics") {
  TEST_CASE("precision, recall, f-score") {
    const auto g = rel({{"x", "a"}, {"y", "b"}});
    CHECK(precision(g, g).value == 1.0);
    CHECK(precision(rel({{"x", "a"}, {"y", "b"}}), rel({{"x", "a"}, {"y", "c"}})).value == doctest::Approx(0.5));
    CHECK(precision(rel({{"x", "b"}}), g).value == 0.0);
    const Ratio none = precision(AlignmentRelation{}, g);
    CHECK_FALSE(none.defined);
    CHECK(none.value == 0.0);
    CHECK(recall(rel({{"x", "a"}}), g) == doctest::Approx(0.5));
    CHECK_THROWS_AS(recall(g, AlignmentRelation{}), std::invalid_argument);
    AlignmentRelation ten = identity(10), eight;
    for (int i = 0; i < 8; ++i) eight.insert("b" + std::to_string(i), "a" + std::to_string(i));
    CHECK(recall(eight, ten) == doctest::Approx(0.8));
    CHECK(f_score(0.8, 0.8) == doctest::Approx(0.8));
    CHECK(f_score(1.0, 0.0) == 0.0);
    CHECK(f_score(0.0, 0.0) == 0.0);
    CHECK(f_score(0.5, 1.0) == doctest::Approx(2.0 / 3.0));
    CHECK(f_score(AlignmentRelation{}, g) == 0.0);
  }

  TEST_CASE("priors of a given quality") {
    Rng rng(5);
    const AlignmentRelation truth = identity(10);
    auto as_relation = [](const PriorAlignment& p) {
      AlignmentRelation r;
      for (const auto& [k, conf] : p.entries) {
        CHECK(conf == 1u);
        r.insert(k.first, k.second);
      }
      return r;
    };
    for (double q : {0.0, 0.2, 0.5, 0.8, 1.0}) {
      for (int rep = 0; rep < 20; ++rep) {
        const PriorDraw d = make_prior(truth, q, rng);
        const AlignmentRelation r = as_relation(d.prior);
        CHECK(r.is_bijective_on(std::vector<Word>{"b0", "b1", "b2", "b3", "b4", "b5", "b6", "b7", "b8", "b9"}));
        CHECK(std::abs(precision(r, truth).value - q) <= 0.1 + 1e-12);
        CHECK(recall(r, truth) == doctest::Approx(precision(r, truth).value));
        CHECK(d.achieved_quality == doctest::Approx(recall(r, truth)));
      }
    }
    CHECK(make_prior(truth, 0.8, rng).achieved_quality == doctest::Approx(0.8));
    CHECK(make_prior(truth, 1.0, rng).achieved_quality == 1.0);
    // nine kept would leave one word to derange
    CHECK(make_prior(truth, 0.9, rng).achieved_quality == doctest::Approx(0.8));
  }
}

TEST_SUITE("experiments") {
  TEST_CASE("task pool draws fresh tasks with probability p_new") {
    Rng rng(6);
    const auto v2 = synthetic_vocabulary(4, "b");
    const AlignmentRelation alpha = identity(4);
    TaskPool pool(v2, alpha, 3, 4, 0.5);
    std::size_t fresh = 0, repeats_of_first = 0;
    std::size_t before = 0;
    for (int i = 0; i < 1000; ++i) {
      const Task& t = pool.next(rng);
      if (pool.size() > before) ++fresh;
      if (i > 0 && t.id == 0) ++repeats_of_first;
      before = pool.size();
    }
    // the first draw is always fresh
    CHECK(std::abs(static_cast<double>(fresh - 1) / 999.0 - 0.5) <= 0.05);
    CHECK(pool.draws() == 1000);
    CHECK(repeats_of_first > 0);
    CHECK_THROWS_AS(TaskPool(v2, alpha, 3, 4, 1.5), std::invalid_argument);
    CHECK_THROWS_AS(TaskPool(v2, rel({{"b0", "a0"}}), 3, 4), std::invalid_argument);
  }

  TEST_CASE("every task is compatible under the pool alignment") {
    Rng rng(7);
    const auto v2 = synthetic_vocabulary(3, "b");
    Rng setup(8);
    const AlignmentRelation alpha = random_bijection(v2, synthetic_vocabulary(3, "a"), setup);
    TaskPool pool(v2, alpha, 3, 3, 0.7);
    for (int i = 0; i < 30; ++i) {
      const Task& t = pool.next(rng);
      CHECK(check_compatibility(t.first->protocol(), t.second->protocol(), alpha));
    }
  }

  TEST_CASE("curves") {
    const ExperimentConfig c = small(1);
    const ExperimentResult r = run_convergence(c);
    REQUIRE(r.curve.size() == c.n_interactions + 1);
    CHECK(r.repetitions.size() == c.n_repetitions);
    CHECK(r.curve.front().interaction_index == 0);
    CHECK(r.curve.front().mean_f_score == 0.0);  // nothing received yet
    std::size_t total = 0;
    for (std::size_t k = 0; k < 5; ++k) total += r.outcomes[k];
    CHECK(total == c.n_interactions * c.n_repetitions);
    for (const CurvePoint& p : r.curve) {
      CHECK(p.mean_f_score >= 0.0);
      CHECK(p.mean_f_score <= 1.0);
      double mean = 0.0;
      for (const auto& rep : r.repetitions) mean += rep[p.interaction_index];
      mean /= static_cast<double>(c.n_repetitions);
      CHECK(p.mean_f_score == doctest::Approx(mean));
      double ss = 0.0;
      for (const auto& rep : r.repetitions) ss += (rep[p.interaction_index] - mean) * (rep[p.interaction_index] - mean);
      CHECK(p.stderr_f_score == doctest::Approx(std::sqrt(ss / 2.0) / std::sqrt(3.0)));
    }
  }

  TEST_CASE("oracle priors keep a flat curve at 1") {
    ExperimentConfig c = small(2);
    c.prior_quality = 1.0;
    for (Strategy s : {Strategy::simple, Strategy::reasoning}) {
      c.strategy_agent1 = c.strategy_agent2 = s;
      const ExperimentResult r = run_repair(c);
      for (const CurvePoint& p : r.curve) CHECK(p.mean_f_score == 1.0);
    }
  }

  TEST_CASE("repair starts from the prior quality") {
    ExperimentConfig c = small(3);
    c.vocab_size = 10;
    c.n_interactions = 0;
    c.prior_quality = 0.5;
    const ExperimentResult r = run_repair(c);
    CHECK(r.curve.front().mean_f_score == doctest::Approx(0.5));
    CHECK_THROWS_AS(run_repair(small(3)), std::invalid_argument);
  }

  TEST_CASE("csv, metadata, determinism") {
    ExperimentConfig c = small(4);
    const std::string a = curve_csv(c, run_convergence(c));
    CHECK(a.rfind("interaction,mean_fscore,stderr,strategy,n_constraints,vocab_size,seed\n0,", 0) == 0);
    CHECK(a == curve_csv(c, run_convergence(c)));
    c.jobs = 3;
    CHECK(a == curve_csv(c, run_convergence(c)));
    c.strategy_agent1 = Strategy::simple;
    CHECK(c.strategy_label() == "simple+reasoning");
    c.prior_quality = 0.2;
    const ExperimentResult r = run_repair(c);
    CHECK(curve_csv(c, r).find(",prior_quality\n") != std::string::npos);
    const auto meta = nlohmann::json::parse(experiment_metadata_json(c, r));
    CHECK(meta["p_new"] == 0.5);
    CHECK(meta["n_repetitions"] == 3);
    CHECK(meta["prior_quality"] == 0.2);
    CHECK(meta["outcomes"].size() == 5);
  }

  TEST_CASE("configuration errors") {
    ExperimentConfig c = small(5);
    c.vocab_size = 1;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = small(5);
    c.n_repetitions = 0;
    CHECK_THROWS_AS(run_convergence(c), std::invalid_argument);
    c = small(5);
    c.p_stop = -0.1;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = small(5);
    c.prior_quality = 1.2;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  }
}
