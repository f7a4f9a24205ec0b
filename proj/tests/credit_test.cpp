#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "fss/credit.hpp"
#include "fss/error.hpp"

using namespace fss;

namespace {

std::vector<Authorship> byline(std::vector<std::string> institutions) {
  std::vector<Authorship> out;
  for (std::size_t i = 0; i < institutions.size(); ++i) {
    out.push_back(Authorship{static_cast<int>(i + 1), std::nullopt, institutions[i]});
  }
  return out;
}

const WeightingScheme kAlpha{Convention::alphabetical, {}};
const WeightingScheme kPos{Convention::position_weighted, {}};

double sum(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0); }

}  // namespace

TEST_CASE("sole author takes everything") {
  CHECK(credit_vector(byline({"U1"}), kAlpha) == std::vector<double>{1.0});
  CHECK(credit_vector(byline({"U1"}), kPos) == std::vector<double>{1.0});
}

TEST_CASE("alphabetical credit is the inverse of the author count") {
  CHECK(credit_vector(byline({"A", "B", "C", "D"}), kAlpha) == std::vector<double>(4, 0.25));
}

TEST_CASE("intramural position weights, n = 5") {
  auto v = credit_vector(byline({"U1", "U2", "U3", "U4", "U1"}), kPos);
  const double mid = 0.2 / 3.0;
  CHECK(v == std::vector<double>{0.40, mid, mid, mid, 0.40});
}

TEST_CASE("extramural position weights, n = 6") {
  auto v = credit_vector(byline({"U1", "U1", "U2", "U3", "U4", "U4"}), kPos);
  CHECK(v == std::vector<double>{0.30, 0.15, 0.05, 0.05, 0.15, 0.30});
}

TEST_CASE("the branch depends on first and last institutions only") {
  auto intra = credit_vector(byline({"U1", "U7", "U8", "U9", "U1"}), kPos);
  CHECK(intra.front() == 0.40);
  auto extra = credit_vector(byline({"U1", "U1", "U1", "U1", "U2"}), kPos);
  CHECK(extra.front() == 0.30);
}

TEST_CASE("short bylines collapse roles and renormalize") {
  CHECK(credit_vector(byline({"U1", "U1"}), kPos) == std::vector<double>{0.5, 0.5});
  CHECK(credit_vector(byline({"U1", "U2"}), kPos) == std::vector<double>{0.5, 0.5});
  auto three_intra = credit_vector(byline({"U1", "U2", "U1"}), kPos);
  CHECK(three_intra == std::vector<double>{0.40, 0.20, 0.40});
  auto three_extra = credit_vector(byline({"U1", "U2", "U3"}), kPos);
  for (double c : three_extra) CHECK(c == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  auto four_extra = credit_vector(byline({"U1", "U2", "U3", "U4"}), kPos);
  CHECK(four_extra[0] == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(four_extra[1] == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
  CHECK(four_extra[0] == four_extra[3]);
  CHECK(four_extra[1] == four_extra[2]);
  auto five_extra = credit_vector(byline({"U1", "U2", "U3", "U4", "U5"}), kPos);
  CHECK(five_extra == std::vector<double>{0.30, 0.15, 0.10, 0.15, 0.30});
}

TEST_CASE("credits sum to one on random bylines") {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<int> size(1, 40);
  std::uniform_int_distribution<int> inst(0, 3);
  for (int trial = 0; trial < 2000; ++trial) {
    std::vector<std::string> insts(size(rng));
    for (auto& s : insts) s = "U" + std::to_string(inst(rng));
    auto b = byline(insts);
    CHECK(std::abs(sum(credit_vector(b, kPos)) - 1.0) < 1e-12);
    auto alpha = credit_vector(b, kAlpha);
    CHECK(std::abs(sum(alpha) - 1.0) < 1e-12);
    for (double c : alpha) CHECK(c == alpha[0]);
  }
}

TEST_CASE("permuting a byline moves credit between authors but keeps the total") {
  auto b = byline({"U1", "U2", "U3", "U2", "U5", "U1", "U4"});
  auto before = credit_vector(b, kPos);
  // Rotate left: the first author becomes the last.
  std::rotate(b.begin(), b.begin() + 1, b.end());
  for (std::size_t i = 0; i < b.size(); ++i) b[i].position = static_cast<int>(i + 1);
  auto after = credit_vector(b, kPos);
  CHECK(std::abs(sum(after) - 1.0) < 1e-12);
  CHECK(before[0] == 0.30);
  CHECK(after[0] == 0.30);  // the second author now leads
  CHECK(before[1] != after[0]);
}

TEST_CASE("fractional_contribution checks its position") {
  auto b = byline({"U1", "U2", "U1"});
  CHECK(fractional_contribution(b, 2, kPos) == 0.20);
  CHECK_THROWS_AS(fractional_contribution(b, 0, kPos), InputError);
  CHECK_THROWS_AS(fractional_contribution(b, 4, kPos), InputError);
}

TEST_CASE("scheme book picks the convention of the sds and applies overrides") {
  FieldTaxonomy tax;
  tax.sds["BIO/10"] = {"BIO", Convention::position_weighted};
  tax.sds["MAT/05"] = {"MAT", Convention::alphabetical};
  PositionWeights custom;
  custom.intra_first = 0.5;
  custom.intra_last = 0.3;
  SchemeBook book(tax, PositionWeights{}, {{"BIO/10", custom}});
  CHECK(book.for_sds("MAT/05").kind == Convention::alphabetical);
  CHECK(book.for_sds("BIO/10").weights.intra_first == 0.5);
  CHECK_THROWS_AS(book.for_sds("FIS/01"), InputError);
  CHECK_THROWS_AS(SchemeBook(tax, PositionWeights{}, {{"FIS/01", custom}}), InputError);
  PositionWeights bad;
  bad.extra_rest = 1.5;
  CHECK_THROWS_AS(SchemeBook(tax, bad), InputError);
}
