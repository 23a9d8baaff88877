#include <doctest.h>

#include <cmath>
#include <random>

#include "cns/dyadic.hpp"
#include "cns/report.hpp"
#include "cns/errors.hpp"
#include "oracles.hpp"

using namespace cns;
using namespace cns::dyadic;

namespace {

CoefficientField single_entry(int n, int j, std::vector<long long> k,
                              double value) {
  CoefficientField field;
  field.n = n;
  field.entries.emplace_back(
      WaveletIndex(std::vector<int>(n, 1), j, std::move(k)), value);
  return field;
}

// Constant-in-k single-scale generator used by the quadrature tests.
class SingleScaleField final : public TimeField {
 public:
  SingleScaleField(int n, int scale, double value, bool breakpoints)
      : n_(n), scale_(scale), value_(value), breakpoints_(breakpoints) {}
  int dimension() const override { return n_; }
  std::vector<std::vector<int>> channels() const override {
    return {std::vector<int>(n_, 1)};
  }
  std::pair<int, int> active_scales(double t) const override {
    return t < 1.0 ? std::pair<int, int>{scale_, scale_}
                   : std::pair<int, int>{1, 0};
  }
  double coeff(double t, const WaveletIndex& idx) const override {
    if (t >= 1.0 || idx.j != scale_) return 0.0;
    return value_;
  }
  bool constant_in_k() const override { return true; }
  bool dyadic_breakpoints() const override { return breakpoints_; }

 private:
  int n_;
  int scale_;
  double value_;
  bool breakpoints_;
};

// Smooth time profile without dyadic breakpoints: a(t) = t at one scale.
class RampField final : public TimeField {
 public:
  explicit RampField(int n) : n_(n) {}
  int dimension() const override { return n_; }
  std::vector<std::vector<int>> channels() const override {
    return {std::vector<int>(n_, 1)};
  }
  std::pair<int, int> active_scales(double) const override { return {1, 1}; }
  double coeff(double t, const WaveletIndex& idx) const override {
    return idx.j == 1 ? t : 0.0;
  }
  bool constant_in_k() const override { return true; }

 private:
  int n_;
};

}  // namespace

TEST_CASE("cube geometry and containment") {
  DyadicCube unit(0, {0, 0});
  CHECK(unit.side() == 1.0);
  CHECK(unit.volume() == 1.0);
  DyadicCube fine(3, {5, 2});
  CHECK(fine.side() == doctest::Approx(0.125));
  CHECK(fine.volume() == doctest::Approx(1.0 / 64.0));
  CHECK(unit.contains(fine));
  CHECK(!fine.contains(unit));
  CHECK(!unit.contains(DyadicCube(3, {-1, 2})));
  // Negative-coordinate cubes floor correctly.
  DyadicCube neg(0, {-1});
  CHECK(neg.contains(DyadicCube(2, {-4})));
  CHECK(neg.contains(DyadicCube(2, {-1})));
  CHECK(!neg.contains(DyadicCube(2, {0})));
}

TEST_CASE("containment is a partial order on sampled cubes") {
  std::mt19937 rng(11);
  std::uniform_int_distribution<int> scale(0, 4);
  std::uniform_int_distribution<long long> shift(-6, 6);
  std::vector<DyadicCube> cubes;
  for (int s = 0; s < 40; ++s) {
    cubes.emplace_back(scale(rng),
                       std::vector<long long>{shift(rng), shift(rng)});
  }
  for (const auto& a : cubes) {
    CHECK(a.contains(a));
    for (const auto& b : cubes) {
      if (a.contains(b) && b.contains(a)) {
        CHECK(a.j == b.j);
        CHECK(a.k == b.k);
      }
      for (const auto& c : cubes) {
        if (a.contains(b) && b.contains(c)) CHECK(a.contains(c));
      }
    }
  }
}

TEST_CASE("subcube counts match the dyadic formula") {
  for (int n = 1; n <= 2; ++n) {
    for (int j0 : {0, 1, 2}) {
      const std::vector<long long> k0(n, j0 == 2 ? -1 : 0);
      for (int d = 0; d <= 6; ++d) {
        const long long expected = 1LL << (n * d);
        CHECK(oracles::count_subcubes(n, j0, k0, j0 + d) == expected);
      }
    }
  }
}

TEST_CASE("tl_norm on hand-evaluated tables") {
  const SpaceParams bmo{-1.0, 2.0};
  const std::vector<DyadicCube> unit_root{DyadicCube(0, {0, 0})};

  CHECK(tl_norm(single_entry(2, 0, {0, 0}, 1.0), bmo, unit_root) == 1.0);

  // Single coefficient at scale j: best root is its own cube.
  for (int n : {1, 2, 3}) {
    for (int j : {1, 3, 5}) {
      auto field = single_entry(n, j, std::vector<long long>(n, 0), 1.0);
      const std::vector<DyadicCube> roots{
          DyadicCube(j, std::vector<long long>(n, 0)),
          DyadicCube(0, std::vector<long long>(n, 0))};
      CHECK(tl_norm(field, bmo, roots) ==
            doctest::Approx(std::exp2(j * (0.5 * n - 1.0))).epsilon(1e-14));
    }
  }

  CoefficientField empty;
  empty.n = 2;
  CHECK(tl_norm(empty, bmo, unit_root) == 0.0);
  CHECK_THROWS_AS(tl_norm(empty, bmo, {}), ParamError);
  CHECK_THROWS_AS(tl_norm(empty, SpaceParams{-1.0, 0.5}, unit_root),
                  ParamError);
}

TEST_CASE("tl_norm: q = inf reading and root monotonicity") {
  auto field = single_entry(2, 2, {1, 1}, 3.0);
  const SpaceParams sup_params{-1.0, std::numeric_limits<double>::infinity()};
  const std::vector<DyadicCube> own{DyadicCube(2, {1, 1})};
  // sup 2^{j(gamma + n/2)} |a| = 2^{2*0} * 3.
  CHECK(tl_norm(field, sup_params, own) == doctest::Approx(3.0));

  const SpaceParams bmo{-1.0, 2.0};
  std::vector<DyadicCube> roots{DyadicCube(0, {0, 0})};
  const double coarse = tl_norm(field, bmo, roots);
  roots.push_back(DyadicCube(2, {1, 1}));
  const double both = tl_norm(field, bmo, roots);
  CHECK(both >= coarse);
  CHECK(both == doctest::Approx(std::exp2(2.0 * 0.0) * 3.0));
}

TEST_CASE("tl_norm scaling homogeneity is exact for dyadic factors") {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> val(-2.0, 2.0);
  std::uniform_int_distribution<int> scale(0, 4);
  std::uniform_int_distribution<long long> shift(0, 7);
  CoefficientField field;
  field.n = 2;
  for (int s = 0; s < 25; ++s) {
    field.entries.emplace_back(
        WaveletIndex({1, 1}, scale(rng), {shift(rng), shift(rng)}), val(rng));
  }
  CoefficientField doubled = field;
  for (auto& [idx, v] : doubled.entries) v *= 2.0;

  const std::vector<DyadicCube> roots = root_candidates(field);
  // Doubling is exact arithmetic for q in {1, 2, inf}; general q only up to
  // the rounding of pow.
  for (double q : {1.0, 2.0, std::numeric_limits<double>::infinity()}) {
    const SpaceParams params{-1.0, q};
    CHECK(tl_norm(doubled, params, roots) ==
          2.0 * tl_norm(field, params, roots));
  }
  const SpaceParams frac{-1.0, 3.5};
  CHECK(tl_norm(doubled, frac, roots) ==
        doctest::Approx(2.0 * tl_norm(field, frac, roots)).epsilon(1e-13));
}

TEST_CASE("root candidates recover the supremum of a spread table") {
  // Two far-apart unit-scale entries: the sup is attained on the small
  // cubes, not on a giant common ancestor.
  CoefficientField field;
  field.n = 1;
  field.entries.emplace_back(WaveletIndex({1}, 2, {0}), 1.0);
  field.entries.emplace_back(WaveletIndex({1}, 2, {37}), 1.0);
  const auto roots = root_candidates(field);
  const SpaceParams bmo{-1.0, 2.0};
  const double norm = tl_norm(field, bmo, roots);
  CHECK(norm == doctest::Approx(std::exp2(2.0 * (0.5 - 1.0))).epsilon(1e-14));
}

TEST_CASE("fixed-time quantity on tables and generators") {
  const std::vector<long long> origin2{0, 0};
  TableTimeField empty{CoefficientField{2, {}, {}}};
  CHECK(fixed_time_bmo_quantity(empty, 0.5, 0, origin2) == 0.0);

  TableTimeField one(single_entry(2, 0, {0, 0}, 1.0));
  CHECK(fixed_time_bmo_quantity(one, 0.37, 0, origin2) == 1.0);

  CHECK_THROWS_AS(fixed_time_bmo_quantity(one, 0.0, 0, origin2), ParamError);
  CHECK_THROWS_AS(fixed_time_bmo_quantity(one, 1.5, 0, origin2), ParamError);
}

TEST_CASE("fixed-time equals the squared inner tl expression on tables") {
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> val(-1.0, 1.0);
  std::uniform_int_distribution<int> scale(0, 3);
  std::uniform_int_distribution<long long> shift(0, 7);
  CoefficientField table;
  table.n = 2;
  for (int s = 0; s < 30; ++s) {
    table.entries.emplace_back(
        WaveletIndex({1, 1}, scale(rng), {shift(rng), shift(rng)}), val(rng));
  }
  const std::vector<DyadicCube> root{DyadicCube(0, {0, 0})};
  const double norm = tl_norm(table, SpaceParams{-1.0, 2.0}, root);
  TableTimeField field(table);
  const double fixed =
      fixed_time_bmo_quantity(field, 0.5, 0, std::vector<long long>{0, 0});
  CHECK(std::sqrt(fixed) == norm);
}

TEST_CASE("carleson quantity: zero, single-scale count, and table path") {
  const std::vector<long long> origin{0, 0};
  TableTimeField empty{CoefficientField{2, {}, {}}};
  CHECK(carleson_time_quantity(empty, 0, origin).value == 0.0);

  // a(t) = 1 at scale 1 only: 2^{n(j-j0)} = 4 subcubes, unit time window.
  SingleScaleField ones(2, 1, 1.0, /*breakpoints=*/true);
  const auto result = carleson_time_quantity(ones, 0, origin);
  CHECK(result.value == doctest::Approx(4.0).epsilon(1e-9));
  CHECK(result.tail_bound <= 1e-8 * result.value);
}

TEST_CASE("adaptive midpoint path integrates a smooth ramp") {
  // int_0^1 4 t^2 dt = 4/3 on the unit root.
  RampField ramp(2);
  const auto result =
      carleson_time_quantity(ramp, 0, std::vector<long long>{0, 0});
  CHECK(result.value == doctest::Approx(4.0 / 3.0).epsilon(1e-6));
  CHECK(result.bands == 0);  // midpoint fallback, not the band path
}

TEST_CASE("quantities scale quadratically in the field") {
  SingleScaleField base(2, 1, 1.0, true);
  SingleScaleField tripled(2, 1, 3.0, true);
  const std::vector<long long> origin{0, 0};
  CHECK(carleson_time_quantity(tripled, 0, origin).value ==
        doctest::Approx(9.0 * carleson_time_quantity(base, 0, origin).value)
            .epsilon(1e-12));
  CHECK(fixed_time_bmo_quantity(tripled, 0.5, 0, origin) ==
        9.0 * fixed_time_bmo_quantity(base, 0.5, 0, origin));
}

TEST_CASE("n_infty lower bound") {
  CHECK(n_infty({}) == 0.0);

  GridSpec grid{1, 1.0, 8};
  std::vector<TimeSample> samples;
  for (double t : {0.25, 0.5, 1.0}) {
    SampledField constant;
    constant.grid = grid;
    constant.values.assign(grid.total_points(), 3.0);
    samples.push_back({t, std::move(constant)});
  }
  // Constant field: the weight is monotone, so the sup sits at t = 1.
  CHECK(n_infty(samples) == doctest::Approx(3.0));

  samples.front().t = -1.0;
  CHECK_THROWS_AS(n_infty(samples), ParamError);
}

TEST_CASE("coefficient table round trip and schema errors") {
  CoefficientField field;
  field.n = 2;
  field.entries.emplace_back(WaveletIndex({1, 0}, 2, {3, -1}), 0.5);
  field.entries.emplace_back(WaveletIndex({1, 1}, 0, {0, 0}), -1.25);

  const std::string path = "table_roundtrip.json";
  write_coefficient_table(field, path);
  const CoefficientField back = read_coefficient_table(path);
  CHECK(back.n == field.n);
  REQUIRE(back.entries.size() == field.entries.size());
  for (std::size_t i = 0; i < back.entries.size(); ++i) {
    CHECK(back.entries[i].first == field.entries[i].first);
    CHECK(back.entries[i].second == field.entries[i].second);
  }

  write_text_file("table_missing_n.json", "{\"entries\": []}\n");
  CHECK_THROWS_AS(read_coefficient_table("table_missing_n.json"), IoError);
  write_text_file("table_bad.json", "not json\n");
  CHECK_THROWS_AS(read_coefficient_table("table_bad.json"), IoError);
  CHECK_THROWS_AS(read_coefficient_table("does_not_exist.json"), IoError);
}
