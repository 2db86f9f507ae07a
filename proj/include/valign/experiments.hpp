#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "valign/engine.hpp"
#include "valign/generator.hpp"
#include "valign/learner.hpp"
#include "valign/metrics.hpp"
#include "valign/satisfiability.hpp"

namespace valign {

/// A task both agents can perform, compiled once so that the satisfiability
/// memo is reused whenever the task recurs.
struct Task {
  std::size_t id = 0;
  std::shared_ptr<CompiledProtocol> first;   // agent 1's protocol
  std::shared_ptr<CompiledProtocol> second;  // agent 2's protocol
};

/// Sequence of tasks sharing one true alignment: each draw is a fresh pair
/// with probability `p_new`, otherwise a uniformly chosen earlier task.
class TaskPool {
 public:
  TaskPool(std::vector<Word> second_vocabulary, AlignmentRelation alignment, std::size_t n_constraints,
           unsigned bound, double p_new = 0.5);

  const Task& next(Rng& rng);

  std::size_t size() const { return tasks_.size(); }
  std::size_t draws() const { return draws_; }
  const AlignmentRelation& alignment() const { return alignment_; }

 private:
  std::vector<Word> second_vocabulary_;
  AlignmentRelation alignment_;
  std::size_t n_constraints_;
  unsigned bound_;
  double p_new_;
  std::vector<Task> tasks_;
  std::size_t draws_ = 0;
};

struct ExperimentConfig {
  std::size_t vocab_size = 10;
  std::size_t n_constraints = 10;
  std::size_t n_interactions = 200;
  std::size_t n_repetitions = 10;
  Strategy strategy_agent1 = Strategy::reasoning;
  Strategy strategy_agent2 = Strategy::reasoning;
  std::optional<double> prior_quality;
  std::uint64_t seed = 1;
  unsigned bound = 0;  // 0: vocabulary size
  double p_new = 0.5;
  double p_stop = 0.5;
  unsigned jobs = 1;

  unsigned effective_bound() const { return bound ? bound : static_cast<unsigned>(vocab_size); }
  /// Throws std::invalid_argument on inconsistent values.
  void validate() const;
  std::string strategy_label() const;
};

struct CurvePoint {
  std::size_t interaction_index = 0;  // 0: before the first interaction
  double mean_f_score = 0.0;
  double stderr_f_score = 0.0;
};

struct ExperimentResult {
  std::vector<CurvePoint> curve;
  /// Mean F-score per repetition, per curve point.
  std::vector<std::vector<double>> repetitions;
  std::size_t tasks_generated = 0;
  std::size_t outcomes[5] = {};  // indexed by InteractionStatus

  /// First curve index whose mean reaches `threshold`.
  std::optional<std::size_t> first_reaching(double threshold) const;
};

inline constexpr double kConvergenceThreshold = 0.8;

/// One repetition's curve: mean of both agents' F-scores against the truth,
/// measured before the first interaction and after each one.
std::vector<double> run_repetition(const ExperimentConfig& config, std::size_t repetition,
                                   std::size_t* outcome_counts = nullptr, std::size_t* tasks_generated = nullptr);

/// Learning from scratch (or from `prior_quality` priors when set).
ExperimentResult run_convergence(const ExperimentConfig& config);

/// Requires `prior_quality`; learners start from make_prior alignments.
ExperimentResult run_repair(const ExperimentConfig& config);

/// CSV with columns interaction, mean_fscore, stderr, strategy,
/// n_constraints, vocab_size, seed (and prior_quality when set).
std::string curve_csv(const ExperimentConfig& config, const ExperimentResult& result);

/// JSON side information: parameters, task counts, outcome counts, the first
/// interaction reaching the convergence threshold.
std::string experiment_metadata_json(const ExperimentConfig& config, const ExperimentResult& result);

}  // namespace valign
