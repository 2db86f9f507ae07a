#include "valign/learner.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace valign {

namespace {

// Weights that are equal in exact arithmetic may differ in the last bits.
constexpr double kTieTolerance = 1e-12;

bool at_least(double x, double threshold) {
  return x >= threshold - kTieTolerance;
}

}  // namespace

std::string_view strategy_name(Strategy s) {
  return s == Strategy::simple ? "simple" : "reasoning";
}

Strategy parse_strategy(std::string_view s) {
  if (s == "simple") return Strategy::simple;
  if (s == "reasoning" || s == "smart") return Strategy::reasoning;
  throw std::invalid_argument("unknown strategy '" + std::string(s) + "'");
}

LearnerConfig LearnerConfig::simple_defaults() {
  return LearnerConfig{};
}

LearnerConfig LearnerConfig::reasoning_defaults(std::size_t own_vocabulary_size) {
  LearnerConfig c;
  c.strategy = Strategy::reasoning;
  c.reward_rate = 0.3;
  c.punishment_rate = 1.0 / static_cast<double>(own_vocabulary_size);
  return c;
}

LearnerConfig LearnerConfig::defaults(Strategy s, std::size_t own_vocabulary_size) {
  return s == Strategy::simple ? simple_defaults() : reasoning_defaults(own_vocabulary_size);
}

std::set<Word> PriorAlignment::foreign_words() const {
  std::set<Word> out;
  for (const auto& [key, confidence] : entries) out.insert(key.first);
  return out;
}

void normalize_row(std::vector<double>& row) {
  for (double& w : row) w = std::max(0.0, w);
  const double total = std::accumulate(row.begin(), row.end(), 0.0);
  if (total <= 0.0) {
    std::fill(row.begin(), row.end(), 1.0 / static_cast<double>(row.size()));
    return;
  }
  for (double& w : row) w /= total;
}

std::vector<double> softmax(const std::vector<double>& raw) {
  std::vector<double> out(raw.size());
  if (raw.empty()) return out;
  const double peak = *std::max_element(raw.begin(), raw.end());
  double total = 0.0;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    out[i] = std::exp(raw[i] - peak);
    total += out[i];
  }
  for (double& w : out) w /= total;
  return out;
}

InterpretationState::InterpretationState(std::vector<Word> own_vocabulary, LearnerConfig config,
                                         std::optional<PriorAlignment> prior)
    : own_(std::move(own_vocabulary)), config_(config), prior_(std::move(prior)) {
  if (own_.empty()) throw LearnerError("own vocabulary is empty");
  for (std::size_t i = 0; i < own_.size(); ++i) {
    if (!own_index_.emplace(own_[i], i).second) throw LearnerError("duplicate own word '" + own_[i] + "'");
  }
  if (prior_) {
    for (const Word& foreign : prior_->foreign_words()) ensure_row(foreign);
  }
}

std::size_t InterpretationState::index_of(const Word& own) const {
  auto it = own_index_.find(own);
  if (it == own_index_.end()) throw LearnerError("'" + own + "' is not an own word");
  return it->second;
}

std::vector<double> InterpretationState::init_row(const Word& foreign) const {
  const std::size_t n = own_.size();
  if (!prior_) return std::vector<double>(n, 1.0 / static_cast<double>(n));
  std::vector<double> raw(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    auto it = prior_->entries.find({foreign, own_[i]});
    if (it != prior_->entries.end()) raw[i] = static_cast<double>(it->second);
  }
  if (config_.normalization == Normalization::softmax) return softmax(raw);
  normalize_row(raw);
  return raw;
}

const std::vector<double>& InterpretationState::ensure_row(const Word& foreign) {
  auto it = rows_.find(foreign);
  if (it == rows_.end()) it = rows_.emplace(foreign, init_row(foreign)).first;
  return it->second;
}

const std::vector<double>& InterpretationState::row(const Word& foreign) const {
  auto it = rows_.find(foreign);
  if (it == rows_.end()) throw LearnerError("no weights for foreign word '" + foreign + "'");
  return it->second;
}

std::vector<double>& InterpretationState::mutable_row(const Word& foreign) {
  ensure_row(foreign);
  return rows_.find(foreign)->second;
}

double InterpretationState::weight(const Word& foreign, const Word& own) const {
  return row(foreign)[index_of(own)];
}

void InterpretationState::set_row(const Word& foreign, std::vector<double> weights) {
  if (weights.size() != own_.size()) throw LearnerError("row size does not match the own vocabulary");
  rows_[foreign] = std::move(weights);
}

void InterpretationState::begin_interaction() {
  mappings_.clear();
}

std::set<Word> InterpretationState::images_excluding(const Word& foreign) const {
  std::set<Word> out;
  for (const auto& [f, own] : mappings_) {
    if (f != foreign) out.insert(own);
  }
  return out;
}

std::optional<Word> InterpretationState::choose_interpretation(const Word& foreign, const std::set<Word>& candidates,
                                                               Rng& rng) {
  if (auto it = mappings_.find(foreign); it != mappings_.end()) {
    if (candidates.count(it->second)) return it->second;
    return std::nullopt;
  }
  const auto taken = images_excluding(foreign);
  const auto& weights = ensure_row(foreign);
  double best = -1.0;
  for (const Word& w : candidates) {
    if (!taken.count(w)) best = std::max(best, weights[index_of(w)]);
  }
  std::vector<Word> top;
  for (const Word& w : own_) {
    if (candidates.count(w) && !taken.count(w) && at_least(weights[index_of(w)], best)) top.push_back(w);
  }
  if (top.empty()) return std::nullopt;
  Word chosen = rng.pick(top);
  mappings_[foreign] = chosen;
  return chosen;
}

std::vector<Word> InterpretationState::update_set(const Word& foreign, const std::optional<Word>& chosen) const {
  const auto& weights = row(foreign);
  const auto taken = images_excluding(foreign);
  std::optional<double> threshold;
  if (chosen) {
    threshold = weights[index_of(*chosen)];
  } else if (auto it = mappings_.find(foreign); it != mappings_.end()) {
    threshold = weights[index_of(it->second)];
  }
  std::vector<Word> out;
  for (std::size_t i = 0; i < own_.size(); ++i) {
    if (taken.count(own_[i])) continue;
    if (!threshold || at_least(weights[i], *threshold)) out.push_back(own_[i]);
  }
  return out;
}

void InterpretationState::punish(std::vector<double>& row, std::size_t i, double amount) {
  row[i] = std::max(0.0, row[i] - amount);
}

void InterpretationState::simple_update(const Word& foreign, const std::map<Word, bool>& possible) {
  auto& weights = mutable_row(foreign);
  for (const auto& [own, ok] : possible) {
    const std::size_t i = index_of(own);
    if (ok) {
      weights[i] += config_.reward_rate * weights[i];
    } else {
      punish(weights, i, config_.punishment_rate * weights[i]);
    }
  }
  normalize_row(weights);
}

void InterpretationState::reasoning_update(const Word& foreign, const std::map<Word, Verdict>& verdicts) {
  auto& weights = mutable_row(foreign);
  const double rp = config_.punishment_rate;
  std::set<Word> touched;

  for (const auto& [own, verdict] : verdicts) {
    const std::size_t i = index_of(own);
    if (verdict.possible) {
      weights[i] += config_.reward_rate * weights[i];
      continue;
    }
    auto default_punishment = [&] { punish(weights, i, rp * weights[i]); };

    // Monotonic constraints only signal a pending obligation.
    std::vector<const Violation*> relevant;
    for (const Violation& v : verdict.violations) {
      if (classify_monotonicity(v.constraint) == Monotonicity::non_monotonic) relevant.push_back(&v);
    }
    if (relevant.empty()) {
      default_punishment();
      continue;
    }

    for (const Violation* v : relevant) {
      const Template kind = v->constraint.kind;
      const bool involves_own_message =
          std::any_of(v->partners.begin(), v->partners.end(), [](const TracedMessage& p) { return !p.received; });
      if (kind == Template::absence) {
        if (involves_own_message) {
          default_punishment();
        } else {
          weights[i] = 0.0;
        }
        continue;
      }
      const bool positive_adjacent = kind == Template::premise || kind == Template::imm_after;
      const bool mutual = is_negative(kind) ||
                          (positive_adjacent && config_.positive_adjacency == PositiveAdjacencyRule::mutual);
      if (!mutual) {
        default_punishment();
        continue;
      }
      if (v->partners.empty()) {
        if (!v->partner_absent) {
          throw LearnerError("violation of " + format_constraint(v->constraint) + " has no traced partner");
        }
        default_punishment();
        continue;
      }
      if (involves_own_message) {
        default_punishment();
        continue;
      }
      std::set<std::pair<Word, Word>> seen;
      for (const TracedMessage& p : v->partners) {
        if (!seen.insert({p.foreign, p.own}).second) continue;
        auto& other = mutable_row(p.foreign);
        const std::size_t j = index_of(p.own);
        if (&other == &weights && j == i) {
          default_punishment();
          continue;
        }
        const double mine = weights[i];
        const double theirs = other[j];
        weights[i] = std::max(0.0, mine - rp * theirs);
        other[j] = std::max(0.0, theirs - rp * mine);
        if (p.foreign != foreign) touched.insert(p.foreign);
      }
    }
  }

  normalize_row(weights);
  for (const Word& f : touched) normalize_row(rows_.find(f)->second);
}

void InterpretationState::update(const Word& foreign, const std::map<Word, Verdict>& verdicts) {
  if (config_.strategy == Strategy::reasoning) {
    reasoning_update(foreign, verdicts);
    return;
  }
  std::map<Word, bool> possible;
  for (const auto& [own, verdict] : verdicts) possible.emplace(own, verdict.possible);
  simple_update(foreign, possible);
}

AlignmentRelation InterpretationState::extract_alignment(Rng& rng) const {
  AlignmentRelation out;
  for (const auto& [foreign, weights] : rows_) {
    const double best = *std::max_element(weights.begin(), weights.end());
    std::vector<std::size_t> top;
    for (std::size_t i = 0; i < weights.size(); ++i) {
      if (at_least(weights[i], best)) top.push_back(i);
    }
    out.insert(foreign, own_[top[rng.below(top.size())]]);
  }
  return out;
}

std::vector<AlignmentLine> InterpretationState::dump() const {
  std::vector<AlignmentLine> out;
  for (const auto& [foreign, weights] : rows_) {
    for (std::size_t i = 0; i < own_.size(); ++i) out.push_back({foreign, own_[i], weights[i]});
  }
  return out;
}

void InterpretationState::load(const std::vector<AlignmentLine>& lines) {
  std::map<Word, std::vector<double>> loaded;
  for (const auto& l : lines) {
    if (!l.value) throw LearnerError("state line for '" + l.foreign + "' lacks a weight");
    auto& r = loaded.try_emplace(l.foreign, std::vector<double>(own_.size(), 0.0)).first->second;
    r[index_of(l.own)] = *l.value;
  }
  for (auto& [foreign, r] : loaded) rows_[foreign] = std::move(r);
}

}  // namespace valign
