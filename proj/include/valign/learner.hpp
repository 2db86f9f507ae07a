#pragma once

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <unordered_map>
#include <utility>
#include <vector>

#include "valign/constraint.hpp"
#include "valign/protocol.hpp"
#include "valign/protocol_io.hpp"
#include "valign/random.hpp"

namespace valign {

enum class Strategy { simple, reasoning };

std::string_view strategy_name(Strategy s);
Strategy parse_strategy(std::string_view s);

/// How prior confidences become an initial weight row.
enum class Normalization { softmax, sum };

/// Treatment of violated positive premise / imm_after constraints whose
/// adjacent message was received: the mutual update of the update table, or
/// the default punishment described in the accompanying text.
enum class PositiveAdjacencyRule { mutual, default_punishment };

struct LearnerConfig {
  Strategy strategy = Strategy::simple;
  double reward_rate = 0.3;
  double punishment_rate = 0.3;
  Normalization normalization = Normalization::softmax;
  PositiveAdjacencyRule positive_adjacency = PositiveAdjacencyRule::mutual;

  static LearnerConfig simple_defaults();
  /// Punishment 1/|own vocabulary|, reward 0.3.
  static LearnerConfig reasoning_defaults(std::size_t own_vocabulary_size);
  static LearnerConfig defaults(Strategy s, std::size_t own_vocabulary_size);
};

/// Confidences of a previous alignment, keyed by (foreign, own). The foreign
/// words need not belong to the interlocutor's actual vocabulary.
struct PriorAlignment {
  std::map<std::pair<Word, Word>, unsigned> entries;

  std::set<Word> foreign_words() const;
};

/// A message of the current trace implicated in a violation.
struct TracedMessage {
  bool received = false;  // false: sent by the learner itself
  Word foreign;           // received messages only
  Word own;               // the message's word in the learner's vocabulary

  friend bool operator==(const TracedMessage&, const TracedMessage&) = default;
};

struct Violation {
  Constraint constraint;
  /// Messages matching the constraint's other atom (negative templates) or
  /// occupying the adjacent position (premise / imm_after).
  std::vector<TracedMessage> partners;
  /// The adjacent position does not exist (imm_after at the trace end) or the
  /// candidate violated the constraint on its own.
  bool partner_absent = false;
};

struct Verdict {
  bool possible = false;
  std::vector<Violation> violations;  // impossible verdicts, reasoning strategy
};

class LearnerError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// An agent's interpretation distribution over its own vocabulary for every
/// foreign word it knows, plus the mappings made in the current interaction.
class InterpretationState {
 public:
  InterpretationState(std::vector<Word> own_vocabulary, LearnerConfig config,
                      std::optional<PriorAlignment> prior = std::nullopt);

  const std::vector<Word>& own_vocabulary() const { return own_; }
  const LearnerConfig& config() const { return config_; }

  /// Initial row for `foreign`: uniform without a prior, otherwise the prior
  /// confidences (0 where undefined) normalized per config.
  std::vector<double> init_row(const Word& foreign) const;
  /// Creates the row on first use.
  const std::vector<double>& ensure_row(const Word& foreign);
  bool has_row(const Word& foreign) const { return rows_.count(foreign) > 0; }
  const std::vector<double>& row(const Word& foreign) const;
  double weight(const Word& foreign, const Word& own) const;
  const std::map<Word, std::vector<double>>& rows() const { return rows_; }
  void set_row(const Word& foreign, std::vector<double> weights);

  void begin_interaction();
  const std::map<Word, Word>& mappings() const { return mappings_; }
  /// Own words bound to a foreign word other than `foreign`.
  std::set<Word> images_excluding(const Word& foreign) const;

  /// Keeps an existing mapping while it stays in `candidates`; otherwise
  /// draws among the highest-weighted candidates and records the choice.
  /// nullopt means the interaction cannot continue.
  std::optional<Word> choose_interpretation(const Word& foreign, const std::set<Word>& candidates, Rng& rng);

  /// Own words weighted at least as much as the reference interpretation
  /// (`chosen`, else the current mapping, else every word), minus those bound
  /// to other foreign words.
  std::vector<Word> update_set(const Word& foreign, const std::optional<Word>& chosen) const;

  void simple_update(const Word& foreign, const std::map<Word, bool>& possible);
  void reasoning_update(const Word& foreign, const std::map<Word, Verdict>& verdicts);
  /// Dispatches on the configured strategy.
  void update(const Word& foreign, const std::map<Word, Verdict>& verdicts);

  AlignmentRelation extract_alignment(Rng& rng) const;

  /// Every weight as (foreign, own, weight).
  std::vector<AlignmentLine> dump() const;
  void load(const std::vector<AlignmentLine>& lines);

 private:
  std::size_t index_of(const Word& own) const;
  std::vector<double>& mutable_row(const Word& foreign);
  void punish(std::vector<double>& row, std::size_t i, double amount);

  std::vector<Word> own_;
  std::unordered_map<Word, std::size_t> own_index_;
  LearnerConfig config_;
  std::optional<PriorAlignment> prior_;
  std::map<Word, std::vector<double>> rows_;
  std::map<Word, Word> mappings_;
};

/// Scales a row to sum 1, leaving zeros at zero; an all-zero row becomes
/// uniform.
void normalize_row(std::vector<double>& row);

std::vector<double> softmax(const std::vector<double>& raw);

}  // namespace valign
