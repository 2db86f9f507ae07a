#include "valign/experiments.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <iomanip>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "json.hpp"

namespace valign {

TaskPool::TaskPool(std::vector<Word> second_vocabulary, AlignmentRelation alignment, std::size_t n_constraints,
                   unsigned bound, double p_new)
    : second_vocabulary_(std::move(second_vocabulary)),
      alignment_(std::move(alignment)),
      n_constraints_(n_constraints),
      bound_(bound),
      p_new_(p_new) {
  if (!(p_new_ >= 0.0 && p_new_ <= 1.0)) throw std::invalid_argument("p_new must lie in [0, 1]");
  if (!alignment_.is_bijective_on(second_vocabulary_)) {
    throw std::invalid_argument("task pool alignment must be a bijection on the second vocabulary");
  }
}

const Task& TaskPool::next(Rng& rng) {
  ++draws_;
  if (!tasks_.empty() && !rng.bernoulli(p_new_)) return tasks_[rng.below(tasks_.size())];
  CompatiblePair pair = generate_pair_under(second_vocabulary_, alignment_, n_constraints_, bound_, rng);
  tasks_.push_back(Task{tasks_.size(), std::make_shared<CompiledProtocol>(std::move(pair.first)),
                        std::make_shared<CompiledProtocol>(std::move(pair.second))});
  return tasks_.back();
}

void ExperimentConfig::validate() const {
  if (vocab_size < 2) throw std::invalid_argument("vocabulary size must be at least 2");
  if (n_repetitions == 0) throw std::invalid_argument("at least one repetition is needed");
  if (effective_bound() == 0) throw std::invalid_argument("bound must be positive");
  if (prior_quality && !(*prior_quality >= 0.0 && *prior_quality <= 1.0)) {
    throw std::invalid_argument("prior quality must lie in [0, 1]");
  }
  if (!(p_new >= 0.0 && p_new <= 1.0)) throw std::invalid_argument("p_new must lie in [0, 1]");
  if (!(p_stop >= 0.0 && p_stop <= 1.0)) throw std::invalid_argument("p_stop must lie in [0, 1]");
}

std::string ExperimentConfig::strategy_label() const {
  if (strategy_agent1 == strategy_agent2) return std::string(strategy_name(strategy_agent1));
  return std::string(strategy_name(strategy_agent1)) + "+" + std::string(strategy_name(strategy_agent2));
}

std::optional<std::size_t> ExperimentResult::first_reaching(double threshold) const {
  for (const CurvePoint& p : curve) {
    if (p.mean_f_score >= threshold) return p.interaction_index;
  }
  return std::nullopt;
}

std::vector<double> run_repetition(const ExperimentConfig& config, std::size_t repetition,
                                   std::size_t* outcome_counts, std::size_t* tasks_generated) {
  const auto rep = static_cast<std::uint64_t>(repetition);
  Rng setup = Rng::derive(config.seed, {rep, 1});
  Rng run = Rng::derive(config.seed, {rep, 2});
  Rng eval = Rng::derive(config.seed, {rep, 3});

  const auto first_vocabulary = synthetic_vocabulary(config.vocab_size, kFirstVocabularyPrefix);
  const auto second_vocabulary = synthetic_vocabulary(config.vocab_size, kSecondVocabularyPrefix);
  const AlignmentRelation truth = random_bijection(second_vocabulary, first_vocabulary, setup);
  const AlignmentRelation inverse_truth = truth.inverse();

  std::optional<PriorAlignment> prior1, prior2;
  if (config.prior_quality) {
    prior1 = make_prior(truth, *config.prior_quality, setup).prior;
    prior2 = make_prior(inverse_truth, *config.prior_quality, setup).prior;
  }
  InterpretationState learner1(first_vocabulary, LearnerConfig::defaults(config.strategy_agent1, config.vocab_size),
                               prior1);
  InterpretationState learner2(second_vocabulary, LearnerConfig::defaults(config.strategy_agent2, config.vocab_size),
                               prior2);

  TaskPool pool(second_vocabulary, truth, config.n_constraints, config.effective_bound(), config.p_new);
  EnginePolicy policy;
  policy.p_stop = config.p_stop;

  auto measure = [&] {
    const double f1 = f_score(learner1.extract_alignment(eval), truth);
    const double f2 = f_score(learner2.extract_alignment(eval), inverse_truth);
    return (f1 + f2) / 2.0;
  };

  std::vector<double> curve;
  curve.reserve(config.n_interactions + 1);
  curve.push_back(measure());
  for (std::size_t i = 0; i < config.n_interactions; ++i) {
    const Task& task = pool.next(run);
    AgentRuntime agent1(AgentId::agent1, *task.first, learner1);
    AgentRuntime agent2(AgentId::agent2, *task.second, learner2);
    const InteractionOutcome outcome = run_interaction(agent1, agent2, policy, run);
    if (outcome_counts) ++outcome_counts[static_cast<std::size_t>(outcome.status)];
    curve.push_back(measure());
  }
  if (tasks_generated) *tasks_generated = pool.size();
  return curve;
}

namespace {

ExperimentResult aggregate(const ExperimentConfig& config) {
  config.validate();
  const std::size_t reps = config.n_repetitions;
  std::vector<std::vector<double>> curves(reps);
  std::vector<std::array<std::size_t, 5>> outcomes(reps);
  std::vector<std::size_t> tasks(reps, 0);
  std::vector<std::exception_ptr> errors(reps);

  auto work = [&](std::size_t r) {
    try {
      outcomes[r].fill(0);
      curves[r] = run_repetition(config, r, outcomes[r].data(), &tasks[r]);
    } catch (...) {
      errors[r] = std::current_exception();
    }
  };

  const unsigned jobs = std::max(1u, std::min<unsigned>(config.jobs, static_cast<unsigned>(reps)));
  if (jobs == 1) {
    for (std::size_t r = 0; r < reps; ++r) work(r);
  } else {
    std::mutex m;
    std::size_t next = 0;
    std::vector<std::thread> threads;
    for (unsigned j = 0; j < jobs; ++j) {
      threads.emplace_back([&] {
        while (true) {
          std::size_t r;
          {
            std::lock_guard lock(m);
            if (next == reps) return;
            r = next++;
          }
          work(r);
        }
      });
    }
    for (auto& t : threads) t.join();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  ExperimentResult result;
  result.repetitions = curves;
  const std::size_t points = config.n_interactions + 1;
  for (std::size_t i = 0; i < points; ++i) {
    double sum = 0.0;
    for (const auto& c : curves) sum += c[i];
    const double mean = sum / static_cast<double>(reps);
    double squares = 0.0;
    for (const auto& c : curves) squares += (c[i] - mean) * (c[i] - mean);
    const double se = reps > 1 ? std::sqrt(squares / static_cast<double>(reps - 1)) / std::sqrt(static_cast<double>(reps)) : 0.0;
    result.curve.push_back(CurvePoint{i, mean, se});
  }
  for (std::size_t r = 0; r < reps; ++r) {
    result.tasks_generated += tasks[r];
    for (std::size_t k = 0; k < 5; ++k) result.outcomes[k] += outcomes[r][k];
  }
  return result;
}

}  // namespace

ExperimentResult run_convergence(const ExperimentConfig& config) {
  return aggregate(config);
}

ExperimentResult run_repair(const ExperimentConfig& config) {
  if (!config.prior_quality) throw std::invalid_argument("repair experiments need a prior quality");
  return aggregate(config);
}

std::string curve_csv(const ExperimentConfig& config, const ExperimentResult& result) {
  std::ostringstream out;
  out << "interaction,mean_fscore,stderr,strategy,n_constraints,vocab_size,seed";
  if (config.prior_quality) out << ",prior_quality";
  out << '\n';
  out << std::fixed;
  for (const CurvePoint& p : result.curve) {
    out << p.interaction_index << ',' << std::setprecision(6) << p.mean_f_score << ',' << p.stderr_f_score << ','
        << config.strategy_label() << ',' << config.n_constraints << ',' << config.vocab_size << ',' << config.seed;
    if (config.prior_quality) out << ',' << std::setprecision(2) << *config.prior_quality;
    out << '\n';
  }
  return out.str();
}

std::string experiment_metadata_json(const ExperimentConfig& config, const ExperimentResult& result) {
  nlohmann::ordered_json j;
  j["vocab_size"] = config.vocab_size;
  j["n_constraints"] = config.n_constraints;
  j["bound"] = config.effective_bound();
  j["n_interactions"] = config.n_interactions;
  j["n_repetitions"] = config.n_repetitions;
  j["strategy"] = config.strategy_label();
  j["seed"] = config.seed;
  j["p_new"] = config.p_new;
  j["p_stop"] = config.p_stop;
  if (config.prior_quality) j["prior_quality"] = *config.prior_quality;
  j["tasks_generated"] = result.tasks_generated;
  nlohmann::ordered_json outcomes;
  for (std::size_t k = 0; k < 5; ++k) {
    outcomes[std::string(status_name(static_cast<InteractionStatus>(k)))] = result.outcomes[k];
  }
  j["outcomes"] = outcomes;
  if (auto first = result.first_reaching(kConvergenceThreshold)) {
    j["first_interaction_reaching_0.8"] = *first;
  } else {
    j["first_interaction_reaching_0.8"] = nullptr;
  }
  return j.dump(2) + "\n";
}

}  // namespace valign
