#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "valign/protocol.hpp"
#include "valign/random.hpp"

namespace valign {

class GeneratorError : public ProtocolError {
 public:
  using ProtocolError::ProtocolError;
};

/// Distinct synthetic words `<prefix>0`, `<prefix>1`, ...
std::vector<Word> synthetic_vocabulary(std::size_t size, std::string_view prefix);

/// Draws uniformly random word-level constraints (sender `*`) over
/// `vocabulary` and keeps each one that leaves the protocol satisfiable
/// within `bound`, until `n_constraints` are kept. Gives up with
/// GeneratorError after 100 draws per requested constraint.
Protocol generate_protocol_over(std::vector<Word> vocabulary, std::size_t n_constraints, unsigned bound, Rng& rng);

Protocol generate_protocol(std::size_t vocab_size, std::size_t n_constraints, unsigned bound, Rng& rng);

/// Uniformly random bijection from `foreign` onto `own` (equal sizes).
AlignmentRelation random_bijection(const std::vector<Word>& foreign, const std::vector<Word>& own, Rng& rng);

/// `first` = translate(`second`, `alignment`); `alignment` maps the second
/// protocol's vocabulary onto the first's.
struct CompatiblePair {
  Protocol first;
  Protocol second;
  AlignmentRelation alignment;
};

inline constexpr std::string_view kFirstVocabularyPrefix = "a";
inline constexpr std::string_view kSecondVocabularyPrefix = "b";

CompatiblePair generate_compatible_pair(std::size_t vocab_size, std::size_t n_constraints, unsigned bound, Rng& rng);

/// A fresh pair compatible under a given alignment (second vocabulary =
/// alignment domain, in `second_vocabulary` order).
CompatiblePair generate_pair_under(const std::vector<Word>& second_vocabulary, const AlignmentRelation& alignment,
                                   std::size_t n_constraints, unsigned bound, Rng& rng);

}  // namespace valign
