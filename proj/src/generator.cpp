#include "valign/generator.hpp"

#include <algorithm>
#include <set>
#include <string>

#include "valign/satisfiability.hpp"

namespace valign {

std::vector<Word> synthetic_vocabulary(std::size_t size, std::string_view prefix) {
  std::vector<Word> out;
  out.reserve(size);
  for (std::size_t i = 0; i < size; ++i) out.push_back(std::string(prefix) + std::to_string(i));
  return out;
}

namespace {

Constraint draw_constraint(const std::vector<Word>& vocabulary, unsigned bound, Rng& rng) {
  const Template kind = kTemplates[rng.below(std::size(kTemplates))];
  if (kind == Template::existence) {
    return Constraint::existence(1 + static_cast<unsigned>(rng.below(bound)), Atom{SenderPattern::any, rng.pick(vocabulary)});
  }
  if (kind == Template::absence) {
    return Constraint::absence(static_cast<unsigned>(rng.below(bound)), Atom{SenderPattern::any, rng.pick(vocabulary)});
  }
  const std::size_t i = rng.below(vocabulary.size());
  std::size_t j = rng.below(vocabulary.size() - 1);
  if (j >= i) ++j;
  return Constraint::binary(kind, Atom{SenderPattern::any, vocabulary[i]}, Atom{SenderPattern::any, vocabulary[j]});
}

}  // namespace

Protocol generate_protocol_over(std::vector<Word> vocabulary, std::size_t n_constraints, unsigned bound, Rng& rng) {
  if (vocabulary.size() < 2) throw GeneratorError("generation needs at least two words");
  if (bound == 0) throw GeneratorError("generation needs a positive bound");
  Protocol p;
  p.vocabulary = std::move(vocabulary);
  p.bound = bound;
  p.validate();

  std::set<Constraint> kept;
  const std::size_t budget = 100 * n_constraints;
  for (std::size_t draws = 0; p.constraints.size() < n_constraints; ++draws) {
    if (draws >= budget) {
      throw GeneratorError("could not add " + std::to_string(n_constraints) + " satisfiable constraints within " +
                           std::to_string(budget) + " draws (kept " + std::to_string(p.constraints.size()) + ")");
    }
    Constraint c = draw_constraint(p.vocabulary, bound, rng);
    if (kept.count(c)) continue;
    Protocol candidate = p;
    candidate.constraints.push_back(c);
    if (!CompiledProtocol(candidate).is_satisfiable()) continue;
    kept.insert(c);
    p = std::move(candidate);
  }
  return p;
}

Protocol generate_protocol(std::size_t vocab_size, std::size_t n_constraints, unsigned bound, Rng& rng) {
  return generate_protocol_over(synthetic_vocabulary(vocab_size, "w"), n_constraints, bound, rng);
}

AlignmentRelation random_bijection(const std::vector<Word>& foreign, const std::vector<Word>& own, Rng& rng) {
  if (foreign.size() != own.size()) throw GeneratorError("a bijection needs vocabularies of equal size");
  std::vector<Word> targets = own;
  rng.shuffle(targets);
  AlignmentRelation a;
  for (std::size_t i = 0; i < foreign.size(); ++i) a.insert(foreign[i], targets[i]);
  return a;
}

CompatiblePair generate_pair_under(const std::vector<Word>& second_vocabulary, const AlignmentRelation& alignment,
                                   std::size_t n_constraints, unsigned bound, Rng& rng) {
  Protocol second = generate_protocol_over(second_vocabulary, n_constraints, bound, rng);
  Protocol first = translate(second, alignment);
  return CompatiblePair{std::move(first), std::move(second), alignment};
}

CompatiblePair generate_compatible_pair(std::size_t vocab_size, std::size_t n_constraints, unsigned bound, Rng& rng) {
  if (vocab_size < 2) throw GeneratorError("generation needs at least two words");
  const auto first_vocabulary = synthetic_vocabulary(vocab_size, kFirstVocabularyPrefix);
  const auto second_vocabulary = synthetic_vocabulary(vocab_size, kSecondVocabularyPrefix);
  AlignmentRelation alignment = random_bijection(second_vocabulary, first_vocabulary, rng);
  return generate_pair_under(second_vocabulary, alignment, n_constraints, bound, rng);
}

}  // namespace valign
