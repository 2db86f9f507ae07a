#include "valign/metrics.hpp"

#include <cmath>
#include <stdexcept>

namespace valign {

namespace {

std::size_t overlap(const AlignmentRelation& beta, const AlignmentRelation& gamma) {
  std::size_t n = 0;
  for (const auto& [foreign, own] : beta.pairs()) n += gamma.contains(foreign, own) ? 1 : 0;
  return n;
}

}  // namespace

Ratio precision(const AlignmentRelation& beta, const AlignmentRelation& gamma) {
  if (beta.empty()) return Ratio{};
  return Ratio{static_cast<double>(overlap(beta, gamma)) / static_cast<double>(beta.size()), true};
}

double recall(const AlignmentRelation& beta, const AlignmentRelation& gamma) {
  if (gamma.empty()) throw std::invalid_argument("recall against an empty reference");
  return static_cast<double>(overlap(beta, gamma)) / static_cast<double>(gamma.size());
}

double f_score(double p, double r) {
  return p + r > 0.0 ? 2.0 * p * r / (p + r) : 0.0;
}

double f_score(const AlignmentRelation& beta, const AlignmentRelation& gamma) {
  return f_score(precision(beta, gamma).value, recall(beta, gamma));
}

PriorDraw make_prior(const AlignmentRelation& truth, double quality, Rng& rng) {
  if (!(quality >= 0.0 && quality <= 1.0)) throw std::invalid_argument("prior quality must lie in [0, 1]");
  if (!truth.is_functional()) throw std::invalid_argument("the true alignment must be a function");
  std::vector<std::pair<Word, Word>> pairs(truth.pairs().begin(), truth.pairs().end());
  const std::size_t n = pairs.size();
  std::size_t keep = static_cast<std::size_t>(std::lround(quality * static_cast<double>(n)));
  if (n - keep == 1) {
    if (n < 2) throw std::invalid_argument("cannot derange a single mapping");
    --keep;
  }

  rng.shuffle(pairs);
  std::vector<Word> targets;
  for (std::size_t i = keep; i < n; ++i) targets.push_back(pairs[i].second);
  // Rejection sampling: a random permutation is a derangement with
  // probability about 1/e.
  if (targets.size() >= 2) {
    std::vector<Word> permuted = targets;
    auto has_fixed_point = [&] {
      for (std::size_t i = 0; i < permuted.size(); ++i) {
        if (permuted[i] == targets[i]) return true;
      }
      return false;
    };
    do {
      rng.shuffle(permuted);
    } while (has_fixed_point());
    targets = std::move(permuted);
  }

  PriorDraw draw;
  for (std::size_t i = 0; i < n; ++i) {
    const Word& own = i < keep ? pairs[i].second : targets[i - keep];
    draw.prior.entries[{pairs[i].first, own}] = 1;
  }
  draw.achieved_quality = n ? static_cast<double>(keep) / static_cast<double>(n) : 1.0;
  return draw;
}

}  // namespace valign
