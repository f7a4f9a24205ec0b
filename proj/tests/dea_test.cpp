#include <doctest.h>

#include <random>

#include "fss/dea.hpp"
#include "fss/error.hpp"
#include "oracles/dea_oracle.hpp"
#include "test_support.hpp"

using namespace fss;
using dea::Dmu;
using dea::Model;

namespace {

std::vector<Dmu> random_dmus(std::mt19937_64& rng, std::size_t n, std::size_t ni, std::size_t no) {
  std::uniform_real_distribution<double> u(0.5, 10.0);
  std::vector<Dmu> dmus;
  for (std::size_t j = 0; j < n; ++j) {
    Dmu d{"d" + std::to_string(j), std::vector<double>(ni), std::vector<double>(no)};
    for (auto& v : d.inputs) v = u(rng);
    for (auto& v : d.outputs) v = u(rng);
    dmus.push_back(d);
  }
  return dmus;
}

std::vector<oracle::Unit> as_units(const std::vector<Dmu>& dmus) {
  std::vector<oracle::Unit> out;
  for (const auto& d : dmus) out.push_back({d.inputs, d.outputs});
  return out;
}

}  // namespace

TEST_CASE("a single DMU is its own frontier") {
  std::vector<Dmu> one{{"only", {3.0}, {7.0}}};
  for (Model m : {Model::crs, Model::vrs}) {
    auto r = dea::output_oriented(one, m);
    CHECK(r.units[0].phi == doctest::Approx(1.0));
    CHECK(r.units[0].efficiency == doctest::Approx(1.0));
    CHECK(r.units[0].peers == std::vector<std::string>{"only"});
  }
}

TEST_CASE("two DMUs with equal inputs") {
  std::vector<Dmu> dmus{{"a", {1.0}, {2.0}}, {"b", {1.0}, {1.0}}};
  auto r = dea::output_oriented(dmus, Model::crs);
  CHECK(r.units[0].phi == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(r.units[1].phi == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(r.units[1].efficiency == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(r.units[1].peers == std::vector<std::string>{"a"});
}

TEST_CASE("VRS: an interior point is dominated, the hull is not") {
  std::vector<Dmu> dmus{{"lo", {1.0}, {1.0}}, {"hi", {3.0}, {5.0}}, {"in", {2.0}, {2.0}}};
  auto r = dea::output_oriented(dmus, Model::vrs);
  CHECK(std::abs(r.units[0].phi - 1.0) < dea::frontier_tolerance);
  CHECK(std::abs(r.units[1].phi - 1.0) < dea::frontier_tolerance);
  CHECK(r.units[2].phi == doctest::Approx(1.5).epsilon(1e-9));  // hull output at x = 2 is 3
}

TEST_CASE("scale efficiency") {
  dea::Result crs{Model::crs, {{"u", 2.0, 0.5, {}}}};
  dea::Result vrs{Model::vrs, {{"u", 1.25, 0.8, {}}}};
  CHECK(dea::scale_efficiency(crs, vrs)[0].second == doctest::Approx(0.625));

  std::vector<Dmu> dmus{{"a", {1.0}, {1.0}}, {"b", {2.0}, {2.0}}, {"c", {3.0}, {3.0}}, {"d", {4.0}, {3.5}}};
  auto c = dea::output_oriented(dmus, Model::crs);
  auto v = dea::output_oriented(dmus, Model::vrs);
  auto se = dea::scale_efficiency(c, v);
  for (std::size_t i = 0; i < 3; ++i) CHECK(std::abs(se[i].second - 1.0) < 1e-9);
  CHECK(se[3].second == doctest::Approx(0.875).epsilon(1e-9));

  dea::Result other{Model::vrs, {{"x", 1.0, 1.0, {}}}};
  CHECK_THROWS_AS(dea::scale_efficiency(crs, other), InputError);
}

TEST_CASE("properties and oracle agreement on small random sets") {
  std::mt19937_64 rng(31);
  std::uniform_int_distribution<int> size(1, 6);
  std::uniform_int_distribution<int> dim(1, 2);
  for (int trial = 0; trial < 60; ++trial) {
    auto dmus = random_dmus(rng, size(rng), dim(rng), dim(rng));
    auto crs = dea::output_oriented(dmus, Model::crs);
    auto vrs = dea::output_oriented(dmus, Model::vrs);
    auto se = dea::scale_efficiency(crs, vrs);
    const auto units = as_units(dmus);
    for (std::size_t o = 0; o < dmus.size(); ++o) {
      CHECK(crs.units[o].phi == doctest::Approx(oracle::dea_phi(units, o, false)).epsilon(1e-6));
      CHECK(vrs.units[o].phi == doctest::Approx(oracle::dea_phi(units, o, true)).epsilon(1e-6));
      CHECK(vrs.units[o].efficiency >= crs.units[o].efficiency - 1e-6);
      CHECK(se[o].second <= 1.0 + 1e-6);
      CHECK(crs.units[o].efficiency <= 1.0);
      CHECK(crs.units[o].efficiency > 0.0);
      if (std::abs(crs.units[o].phi - 1.0) < dea::frontier_tolerance) {
        CHECK(std::abs(vrs.units[o].phi - 1.0) < dea::frontier_tolerance);
      }
    }

    // Rescaling one input column changes nothing.
    auto scaled = dmus;
    for (auto& d : scaled) d.inputs[0] *= 1234.5;
    auto crs2 = dea::output_oriented(scaled, Model::crs);
    for (std::size_t o = 0; o < dmus.size(); ++o) {
      CHECK(crs2.units[o].phi == doctest::Approx(crs.units[o].phi).epsilon(1e-7));
    }

    // A dominating newcomer can only push the others further from the frontier.
    auto more = dmus;
    Dmu top{"top", std::vector<double>(dmus[0].inputs.size(), 0.5), std::vector<double>(dmus[0].outputs.size(), 12.0)};
    more.push_back(top);
    auto vrs3 = dea::output_oriented(more, Model::vrs);
    for (std::size_t o = 0; o < dmus.size(); ++o) CHECK(vrs3.units[o].phi >= vrs.units[o].phi - 1e-7);
  }
}

TEST_CASE("thread count does not change results") {
  std::mt19937_64 rng(4);
  auto dmus = random_dmus(rng, 40, 3, 2);
  auto a = dea::output_oriented(dmus, Model::vrs, 1);
  auto b = dea::output_oriented(dmus, Model::vrs, 5);
  for (std::size_t o = 0; o < dmus.size(); ++o) {
    CHECK(a.units[o].phi == b.units[o].phi);
    CHECK(a.units[o].peers == b.units[o].peers);
  }
}

TEST_CASE("validation") {
  CHECK_THROWS_AS(dea::validate({}), InputError);
  CHECK_THROWS_AS(dea::validate({{"a", {1.0}, {1.0}}, {"a", {1.0}, {1.0}}}), InputError);
  CHECK_THROWS_AS(dea::validate({{"a", {1.0}, {1.0}}, {"b", {1.0, 2.0}, {1.0}}}), InputError);
  CHECK_THROWS_AS(dea::validate({{"a", {-1.0}, {1.0}}}), InputError);
  CHECK_THROWS_AS(dea::validate({{"a", {1.0}, {0.0}}}), InputError);
  CHECK_NOTHROW(dea::validate({{"a", {0.0, 1.0}, {0.0, 2.0}}}));
}

TEST_CASE("dmus.csv round trip and column roles") {
  auto dir = fss::testing::scratch_dir("dmus");
  dea::DmuTable t{{"input_cost"}, {"output_papers", "output_impact"}, {{"u1", {1.5}, {2.0, 0.25}}, {"u2", {3.0}, {1.0, 4.0}}}};
  dea::write_dmus(t, dir / "dmus.csv");
  auto back = dea::read_dmus(dir / "dmus.csv");
  CHECK(back.input_names == t.input_names);
  CHECK(back.output_names == t.output_names);
  REQUIRE(back.dmus.size() == 2);
  CHECK(back.dmus[1].outputs == std::vector<double>{1.0, 4.0});
  fss::testing::write_text(dir / "bad.csv", "id,input_a,weird\nu,1,2\n");
  CHECK_THROWS_AS(dea::read_dmus(dir / "bad.csv"), InputError);
}

TEST_CASE("DMUs assembled from a corpus") {
  SyntheticParams params;
  params.researchers = 120;
  Corpus c = generate_synthetic_corpus(6, params);
  auto base = compute_baselines(c);
  SchemeBook schemes(c.taxonomy, PositionWeights{});
  ScoringContext ctx(c, base, schemes);
  auto table = dea::dmus_from_corpus(ctx);
  CHECK_FALSE(table.dmus.empty());
  CHECK(table.output_names == std::vector<std::string>{"output_fractional_impact", "output_fractional_papers"});
  for (const auto& name : table.input_names) CHECK(name.starts_with("input_cost_"));
  CHECK_NOTHROW(dea::validate(table.dmus));
  auto r = dea::output_oriented(table.dmus, Model::vrs);
  bool frontier = false;
  for (const auto& u : r.units) frontier = frontier || std::abs(u.phi - 1.0) < dea::frontier_tolerance;
  CHECK(frontier);
}
