#pragma once

#include "valign/learner.hpp"
#include "valign/protocol.hpp"
#include "valign/random.hpp"

namespace valign {

/// A ratio that is undefined when its denominator is empty; reported as 0.
struct Ratio {
  double value = 0.0;
  bool defined = false;
};

/// |beta ∩ gamma| / |beta|; undefined (0) for an empty beta.
Ratio precision(const AlignmentRelation& beta, const AlignmentRelation& gamma);
/// |beta ∩ gamma| / |gamma|. Throws std::invalid_argument for an empty gamma.
double recall(const AlignmentRelation& beta, const AlignmentRelation& gamma);
/// Harmonic mean of the two, 0 when both are 0.
double f_score(double precision, double recall);
double f_score(const AlignmentRelation& beta, const AlignmentRelation& gamma);

struct PriorDraw {
  PriorAlignment prior;
  /// Precision (= recall) of the prior against the true alignment.
  double achieved_quality = 0.0;
};

/// A total, injective prior whose precision and recall against `truth` both
/// equal round(quality * |truth|) / |truth|: that many foreign words keep their
/// true image, the rest receive a derangement of the remaining images. When
/// a single word would be left to derange, one more correct pair is given up.
/// All confidences are 1.
PriorDraw make_prior(const AlignmentRelation& truth, double quality, Rng& rng);

}  // namespace valign
