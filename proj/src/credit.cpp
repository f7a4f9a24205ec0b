#include "fss/credit.hpp"

#include <cmath>

#include "fss/error.hpp"

namespace fss {

void PositionWeights::validate() const {
  for (double w : {intra_first, intra_last, intra_rest, extra_first, extra_last, extra_second, extra_second_last,
                   extra_rest}) {
    if (!(w >= 0.0 && w <= 1.0)) throw InputError("byline weights must lie in [0, 1]");
  }
  if (intra_first + intra_last + intra_rest <= 0.0 ||
      extra_first + extra_last + extra_second + extra_second_last + extra_rest <= 0.0) {
    throw InputError("byline weights must not all be zero");
  }
}

std::vector<double> credit_vector(std::span<const Authorship> byline, const WeightingScheme& scheme) {
  const std::size_t n = byline.size();
  if (n == 0) throw InputError("empty byline");
  std::vector<double> credit(n, 0.0);
  if (scheme.kind == Convention::alphabetical || n == 1) {
    for (auto& c : credit) c = 1.0 / static_cast<double>(n);
    return credit;
  }

  const PositionWeights& w = scheme.weights;
  const std::size_t last = n - 1;
  std::vector<bool> has_role(n, false);
  double rest = 0.0;
  auto assign = [&](std::size_t idx, double weight) {
    credit[idx] += weight;
    has_role[idx] = true;
  };
  if (byline.front().institution == byline.back().institution) {
    assign(0, w.intra_first);
    assign(last, w.intra_last);
    rest = w.intra_rest;
  } else {
    assign(0, w.extra_first);
    assign(last, w.extra_last);
    assign(1, w.extra_second);
    assign(last - 1, w.extra_second_last);
    rest = w.extra_rest;
  }

  std::size_t others = 0;
  for (bool role : has_role) others += role ? 0 : 1;
  if (others > 0) {
    const double share = rest / static_cast<double>(others);
    for (std::size_t i = 0; i < n; ++i) {
      if (!has_role[i]) credit[i] = share;
    }
  }

  double total = 0.0;
  for (double c : credit) total += c;
  if (!(total > 0.0)) throw InputError("byline weights assign no credit");
  // Full-role bylines already sum to one up to rounding; leave the configured
  // weights untouched there.
  if (std::abs(total - 1.0) > 1e-12) {
    for (auto& c : credit) c /= total;
  }
  return credit;
}

double fractional_contribution(std::span<const Authorship> byline, int position, const WeightingScheme& scheme) {
  if (position < 1 || static_cast<std::size_t>(position) > byline.size()) {
    throw InputError("byline position " + std::to_string(position) + " out of range 1.." +
                     std::to_string(byline.size()));
  }
  return credit_vector(byline, scheme)[static_cast<std::size_t>(position - 1)];
}

SchemeBook::SchemeBook(const FieldTaxonomy& taxonomy, const PositionWeights& defaults,
                       const std::map<std::string, PositionWeights>& overrides) {
  defaults.validate();
  for (const auto& [sds, entry] : taxonomy.sds) {
    WeightingScheme scheme{entry.convention, defaults};
    if (auto it = overrides.find(sds); it != overrides.end()) {
      it->second.validate();
      scheme.weights = it->second;
    }
    schemes_.emplace(sds, scheme);
  }
  for (const auto& [sds, weights] : overrides) {
    if (!schemes_.count(sds)) throw InputError("byline weights given for unknown sds '" + sds + "'");
  }
}

const WeightingScheme& SchemeBook::for_sds(const std::string& sds) const {
  auto it = schemes_.find(sds);
  if (it == schemes_.end()) throw InputError("no co-authorship scheme for sds '" + sds + "'");
  return it->second;
}

}  // namespace fss
