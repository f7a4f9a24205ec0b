#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "fss/corpus.hpp"

namespace fss {

// Byline-order weights for fields that encode contribution in author order.
// Intramural bylines (first and last author share an institution) use the
// intra_* values, extramural bylines the extra_* values; the *_rest share is
// split equally among authors holding no named role.
struct PositionWeights {
  double intra_first = 0.40;
  double intra_last = 0.40;
  double intra_rest = 0.20;
  double extra_first = 0.30;
  double extra_last = 0.30;
  double extra_second = 0.15;
  double extra_second_last = 0.15;
  double extra_rest = 0.10;

  void validate() const;
};

struct WeightingScheme {
  Convention kind = Convention::alphabetical;
  PositionWeights weights;
};

// Credit of the author at `position` (1-based). Credits over a byline sum to
// one: roles that collapse on short bylines accumulate on the same author and
// the vector is renormalized.
double fractional_contribution(std::span<const Authorship> byline, int position, const WeightingScheme& scheme);

// Credits for every position of the byline, in byline order.
std::vector<double> credit_vector(std::span<const Authorship> byline, const WeightingScheme& scheme);

// Scheme per field: taxonomy convention plus optional per-field weights.
class SchemeBook {
 public:
  SchemeBook() = default;
  SchemeBook(const FieldTaxonomy& taxonomy, const PositionWeights& defaults,
             const std::map<std::string, PositionWeights>& overrides = {});

  const WeightingScheme& for_sds(const std::string& sds) const;

 private:
  std::map<std::string, WeightingScheme> schemes_;
};

}  // namespace fss
