#include <doctest.h>

#include <cmath>
#include <random>

#include "cns/blowup.hpp"
#include "cns/errors.hpp"
#include "oracles.hpp"

using namespace cns;
using namespace cns::blowup;
using meyer::kPi;

namespace {
const meyer::MeyerProfile& profile() {
  static meyer::MeyerProfile p(4);
  return p;
}
const BlowupParams kDefault{2, 0.25, 0.75};
}  // namespace

namespace {
std::string gate_message(int n, double a, double b) {
  try {
    validate_params(n, a, b);
  } catch (const ParamError& e) {
    return e.what();
  }
  return "";
}
}  // namespace

TEST_CASE("parameter gate names the violated constraint") {
  const BlowupParams ok = validate_params(2, 0.25, 0.75);
  CHECK(ok.n == 2);
  CHECK(ok.b == 0.75);
  CHECK_NOTHROW(validate_params(2, 0.45, 0.95));
  CHECK_NOTHROW(validate_params(3, 0.3, 1.2));

  CHECK(gate_message(2, 0.25, 0.4).find("lower bound") != std::string::npos);
  CHECK(gate_message(2, 0.6, 0.9).find("0 < a < 1/2") != std::string::npos);
  CHECK(gate_message(2, 0.25, 1.0).find("upper bound") != std::string::npos);
  CHECK(gate_message(1, 0.25, 0.75).find("n >= 2") != std::string::npos);
}

TEST_CASE("coefficient family values and cutoffs") {
  CHECK(coeff(kDefault, 0.25, 1) ==
        doctest::Approx(std::exp2(-0.25)).epsilon(1e-15));
  CHECK(coeff(kDefault, 0.25, 2) == 0.0);  // above -log2(t)/2 = 1
  CHECK(coeff(kDefault, 1.5, 1) == 0.0);   // switched off at t >= 1
  CHECK(coeff(kDefault, 1.0, 1) == 0.0);
  CHECK(coeff(kDefault, 0.01, 0) == 0.0);  // scales start at 1
  CHECK_THROWS_AS(coeff(kDefault, 0.0, 1), ParamError);
  CHECK_THROWS_AS(coeff(kDefault, -0.5, 1), ParamError);
  // At a breakpoint t = 4^{-m}, scale m is still active.
  CHECK(coeff(kDefault, 0.0625, 2) > 0.0);
  CHECK(max_active_scale(0.0625) == 2);
  CHECK(max_active_scale(2.0) == 0);
}

TEST_CASE("carleson closed form against the extended-precision oracle") {
  const double frozen = 2.0 + 2.0 * std::sqrt(2.0);  // S(0) at defaults
  const BbmoResult s0 = bbmo_closed_form(kDefault, 0, 200);
  CHECK(s0.tail_bound <= 1e-9 * s0.value);
  CHECK(s0.value + s0.tail_bound == doctest::Approx(frozen).epsilon(1e-9));
  CHECK(s0.value == doctest::Approx(frozen).epsilon(1e-3));

  const long double oracle0 = oracles::carleson_sum(2, 0.25L, 0.75L, 0, 200);
  CHECK(s0.value ==
        doctest::Approx(static_cast<double>(oracle0)).epsilon(1e-9));

  const BbmoResult s3 = bbmo_closed_form(kDefault, 3, 200);
  CHECK(s3.value <= s0.value);
  CHECK(s3.value ==
        doctest::Approx(1.0 + std::sqrt(2.0)).epsilon(1e-9));  // 1 + sqrt(2)
  CHECK(s3.value == doctest::Approx(static_cast<double>(
                        oracles::carleson_sum(2, 0.25L, 0.75L, 3, 200)))
                        .epsilon(1e-9));

  // Envelope relation: S(j0) <= C int_0^{4^{-j0}} t^{b - n/2 - 2a} dt with
  // C the geometric-sum constant.
  const double expo = kDefault.b - 1.0 - 0.5;  // b - n/2 - 2a
  const double r = std::exp2(2.0 - 2.0 * kDefault.b);
  const double c_geom = r / (r - 1.0);
  for (int j0 : {0, 1, 2, 4}) {
    const double s = bbmo_closed_form(kDefault, j0, 200).value;
    const double envelope =
        c_geom * std::pow(std::exp2(-2.0 * j0), expo + 1.0) / (expo + 1.0);
    CHECK(s <= envelope * (1.0 + 1e-12));
  }

  CHECK_THROWS_AS(bbmo_closed_form(kDefault, 0, 4), ParamError);
  // Gate complement: non-decaying bands are a structured failure.
  const BlowupParams bad{2, 0.25, 0.45};
  CHECK_THROWS_AS(bbmo_closed_form(bad, 0, 200), QuadratureDivergence);
}

TEST_CASE("fixed-time closed form: single terms and the frozen anchor") {
  // One active scale for t in (1/16, 1/4).
  const double t1 = 0.2;
  CHECK(blim_closed_form(kDefault, t1, 0) ==
        doctest::Approx(std::pow(t1, -0.5) * std::exp2(2.0 - 1.5 - 2.0))
            .epsilon(1e-14));

  const double c10 = blim_closed_form(kDefault, std::exp2(-20.0), 0);
  CHECK(c10 >= 500.0);
  CHECK(c10 == doctest::Approx(static_cast<double>(oracles::fixed_time_sum(
                   2, 0.25L, 0.75L, std::exp2(-20.0L), 0)))
                   .epsilon(1e-12));

  CHECK_THROWS_AS(blim_closed_form(kDefault, 0.0, 0), ParamError);
  CHECK_THROWS_AS(blim_closed_form(kDefault, 1.0, 0), ParamError);
}

TEST_CASE("rescaled fixed-time curve increases to the geometric limit") {
  const double limit = std::exp2(-1.5) / (1.0 - std::exp2(-1.5));
  double prev = 0.0;
  for (int m = 1; m <= 20; ++m) {
    const double t = std::exp2(-2.0 * m);
    const double rescaled =
        blim_closed_form(kDefault, t, 0) * std::pow(t, 2.0 * kDefault.a);
    CHECK(rescaled > prev);
    CHECK(rescaled <= limit * (1.0 + 1e-12));
    prev = rescaled;
  }
  CHECK(prev == doctest::Approx(limit).epsilon(1e-8));
}

TEST_CASE("blow-up certificate accepts the family and refuses flat curves") {
  const BlowupCertificate cert = blowup_certificate(kDefault, 4, 16);
  CHECK(cert.monotone);
  CHECK(cert.slope_ok);
  CHECK(cert.accepted());
  CHECK(cert.fitted_exponent == doctest::Approx(1.0).epsilon(0.05));
  CHECK(cert.expected_exponent == doctest::Approx(1.0));
  CHECK(cert.limit_constant ==
        doctest::Approx(std::exp2(-1.5) / (1.0 - std::exp2(-1.5))));
  REQUIRE(cert.t_values.size() == 13);
  CHECK(cert.t_values.front() == std::exp2(-8.0));

  const std::vector<double> zeros(8, 0.0);
  const BlowupCertificate refused = certificate_from_curve(zeros, 4, 1.0);
  CHECK(!refused.accepted());

  const std::vector<double> flat(8, 7.0);
  const BlowupCertificate flat_cert = certificate_from_curve(flat, 4, 1.0);
  CHECK(!flat_cert.accepted());  // no strict growth, slope 0

  CHECK_THROWS_AS(blowup_certificate(kDefault, 4, 6), ParamError);
}

TEST_CASE("monotone blow-up ratio approaches 2^{4a}") {
  const double target = std::exp2(4.0 * kDefault.a);
  for (int m = 12; m <= 20; ++m) {
    const double c_m = blim_closed_form(kDefault, std::exp2(-2.0 * m), 0);
    const double c_next =
        blim_closed_form(kDefault, std::exp2(-2.0 * (m + 1)), 0);
    CHECK(c_next / c_m == doctest::Approx(target).epsilon(0.01));
  }
}

TEST_CASE("weighted sup-norm bound: one-scale value and decay exponent") {
  const auto& p = profile();
  const double p_inf = meyer::periodization_sup_norm(p, std::vector<int>{1, 1});
  // Single active scale (J = 1) at t = 1/4 and t = 0.1.
  for (double t : {0.25, 0.1}) {
    CHECK(sup_norm_bound(kDefault, p, t) ==
          doctest::Approx(std::pow(t, 0.25) * std::exp2(0.25) * p_inf)
              .epsilon(1e-13));
  }

  // Fitted t-exponent on the asymptotic tail (the early window is still
  // dominated by the geometric transient).
  std::vector<double> xs, ys;
  for (int m = 13; m <= 24; ++m) {
    xs.push_back(-2.0 * m);
    ys.push_back(std::log2(sup_norm_bound(kDefault, p, std::exp2(-2.0 * m))));
  }
  CHECK(oracles::ls_slope(xs, ys) == doctest::Approx(0.125).epsilon(0.3));
  CHECK(std::abs(oracles::ls_slope(xs, ys) - 0.125) <= 0.05);

  CHECK_THROWS_AS(sup_norm_bound(kDefault, p, 0.0), ParamError);
  CHECK_THROWS_AS(sup_norm_bound(kDefault, p, 1.0), ParamError);
}

TEST_CASE("u1 synthesis: switch-off, zero mean, and the direct-sum oracle") {
  const auto& p = profile();
  GridSpec grid{2, 1.0, 64};

  // Zero field at t >= 1 (coefficients vanish).
  const SampledField off = synthesize_u1(kDefault, p, 2.0, grid);
  CHECK(off.max_abs() == 0.0);

  const double t = 1.0 / 16.0;  // scales {1, 2}
  const SampledField u1 = synthesize_u1(kDefault, p, t, grid);
  CHECK(std::abs(u1.box_integral()) <= 1e-10);

  // Brute force: the periodized translates at scale j tile the box, so
  // summing sample_wavelet over k in [0, 2^j)^2 re-builds the field.
  SampledField direct;
  direct.grid = grid;
  direct.values.assign(grid.total_points(), 0.0);
  for (int j = 1; j <= 2; ++j) {
    const double amp = coeff(kDefault, t, j);
    for (long long k1 = 0; k1 < (1LL << j); ++k1) {
      for (long long k2 = 0; k2 < (1LL << j); ++k2) {
        const SampledField w =
            sample_wavelet(p, WaveletIndex({1, 1}, j, {k1, k2}), grid);
        for (std::size_t i = 0; i < direct.values.size(); ++i) {
          direct.values[i] += amp * w.values[i];
        }
      }
    }
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < direct.values.size(); ++i) {
    worst = std::max(worst, std::abs(direct.values[i] - u1.values[i]));
  }
  CHECK(worst <= 1e-8);

  // The sup over the grid matches the analytic bound (attained at x = 0).
  CHECK(std::sqrt(t) * u1.max_abs() ==
        doctest::Approx(sup_norm_bound(kDefault, p, t)).epsilon(1e-12));

  CHECK_THROWS_AS(synthesize_u1(kDefault, p, 1e-9, grid), NyquistError);
}

TEST_CASE("u2: sign structure, sup bound and dimension gate") {
  const auto& p = profile();
  GridSpec grid{2, 1.0, 64};
  const double t = 1.0 / 16.0;
  const SampledField u2 = build_u2(kDefault, p, t, grid);

  // Closed form from the +-1 lattice: the multiplier -m1/m2 turns the
  // cosine product into +4 Omega(2pi)^2 sin sin per scale.
  const double om2 = p.omega(2.0 * kPi) * p.omega(2.0 * kPi);
  const int N = grid.points_per_side;
  double worst = 0.0;
  for (int p1 = 0; p1 < N; p1 += 7) {
    for (int p2 = 0; p2 < N; p2 += 7) {
      const double x1 = static_cast<double>(p1) / N;
      const double x2 = static_cast<double>(p2) / N;
      double expected = 0.0;
      for (int j = 1; j <= 2; ++j) {
        expected += std::pow(t, -0.25) * std::exp2(0.25 * j) * 4.0 * om2 *
                    std::sin(2.0 * kPi * std::ldexp(x1, j)) *
                    std::sin(2.0 * kPi * std::ldexp(x2, j));
      }
      worst = std::max(
          worst, std::abs(expected - u2.values[std::size_t(p1) * N + p2]));
    }
  }
  CHECK(worst <= 1e-10);

  const SampledField u1 = synthesize_u1(kDefault, p, t, grid);
  CHECK(u2.max_abs() <= u1.max_abs() * (1.0 + 1e-12));

  const BlowupParams p1d{1, 0.25, 0.25};
  CHECK_THROWS_AS(build_u2(p1d, p, t, GridSpec{1, 1.0, 64}), ParamError);
}

TEST_CASE("divergence residual across grid refinements") {
  const auto& p = profile();
  const double t = 1.0 / 16.0;
  for (int pps : {64, 128, 256}) {
    GridSpec grid{2, 1.0, pps};
    std::vector<SampledField> u;
    u.push_back(synthesize_u1(kDefault, p, t, grid));
    u.push_back(build_u2(kDefault, p, t, grid));
    CHECK(divergence_residual(u) <= 1e-12);
  }

  GridSpec grid{2, 1.0, 64};
  std::vector<SampledField> half;
  half.push_back(synthesize_u1(kDefault, p, t, grid));
  SampledField zero;
  zero.grid = grid;
  zero.values.assign(grid.total_points(), 0.0);
  half.push_back(zero);
  CHECK(divergence_residual(half) >= 0.1);  // u = (u1, 0) is not solenoidal

  std::vector<SampledField> both_zero{zero, zero};
  CHECK(divergence_residual(both_zero) == 0.0);
}

TEST_CASE("family field agrees with the closed forms") {
  FamilyField field(kDefault);
  std::mt19937 rng(31);
  std::uniform_real_distribution<double> logt(std::log(1e-9), std::log(0.9));
  std::uniform_int_distribution<int> root(0, 6);
  const std::vector<long long> k0{0, 0};
  for (int s = 0; s < 20; ++s) {
    const double t = std::exp(logt(rng));
    const int j0 = root(rng);
    const double via_field = dyadic::fixed_time_bmo_quantity(
        field, t, j0, std::vector<long long>{0, 0});
    const double via_closed = blim_closed_form(kDefault, t, j0);
    if (via_closed == 0.0) {
      CHECK(via_field == 0.0);
    } else {
      CHECK(via_field == doctest::Approx(via_closed).epsilon(1e-12));
    }
  }

  for (int j0 = 0; j0 <= 5; ++j0) {
    const auto quad = dyadic::carleson_time_quantity(field, j0, k0);
    const auto closed = bbmo_closed_form(kDefault, j0, 200);
    CHECK(quad.value == doctest::Approx(closed.value).epsilon(1e-9));
  }

  // k0-independence of the constant-in-k quantities.
  const double at_origin =
      dyadic::fixed_time_bmo_quantity(field, 0.01, 1, std::vector<long long>{0, 0});
  for (std::vector<long long> k : {std::vector<long long>{1, 0},
                                   std::vector<long long>{1, 1},
                                   std::vector<long long>{-3, 7}}) {
    CHECK(dyadic::fixed_time_bmo_quantity(field, 0.01, 1, k) == at_origin);
  }

  // Divergent parameters reach the quadrature flag when the gate is
  // bypassed.
  FamilyField divergent(BlowupParams{2, 0.25, 0.45});
  CHECK_THROWS_AS(dyadic::carleson_time_quantity(divergent, 0, k0),
                  QuadratureDivergence);
}

TEST_CASE("u2 re-analysis coefficients match grid inner products") {
  const auto& p = profile();
  const double t = 1.0 / 16.0;
  GridSpec grid{2, 1.0, 64};
  const SampledField u2 = build_u2(kDefault, p, t, grid);
  ReanalysisField field(kDefault, p, 3);

  // The box integral of u2 against a periodized wavelet equals the
  // full-space pairing because u2 is unit-periodic.
  std::mt19937 rng(47);
  std::uniform_int_distribution<int> scale(1, 3);
  std::uniform_int_distribution<long long> shift(0, 3);
  std::uniform_int_distribution<int> channel(1, 3);
  for (int s = 0; s < 12; ++s) {
    WaveletIndex idx;
    const int bits = channel(rng);
    idx.eps = {bits & 1, (bits >> 1) & 1};
    idx.j = scale(rng);
    idx.k = {shift(rng), shift(rng)};
    const SampledField w = sample_wavelet(p, idx, grid);
    const double via_grid = oracles::grid_inner(u2, w);
    const double via_field = field.coeff(t, idx);
    CHECK(via_field == doctest::Approx(via_grid).epsilon(1e-10));
  }

  // Scales above the active window vanish.
  WaveletIndex idle({1, 1}, 3, {0, 0});
  CHECK(field.coeff(0.3, idle) == 0.0);

  // Its Carleson quantity on the tested roots converges.
  for (int j0 : {0, 1}) {
    const auto q = dyadic::carleson_time_quantity(
        field, j0, std::vector<long long>(2, 0));
    CHECK(std::isfinite(q.value));
    CHECK(q.value > 0.0);
    CHECK(q.tail_bound <= 1e-6 * q.value);
  }
}

TEST_CASE("full verification at defaults and at the stress corner") {
  const auto& p = profile();
  const NormReport report = run_verification(kDefault, p, {});
  CHECK(report.claim_bbmo);
  CHECK(report.claim_blim_fails);
  CHECK(report.claim_ninfty);
  CHECK(report.claim_divfree);
  CHECK(report.all_pass());
  CHECK(report.divergence_residual <= 1e-12);
  CHECK(report.blowup_slope == doctest::Approx(1.0).epsilon(0.05));
  REQUIRE(!report.bbmo.empty());
  CHECK(report.bbmo.front().value ==
        doctest::Approx(2.0 + 2.0 * std::sqrt(2.0)).epsilon(1e-3));

  CHECK_THROWS_AS(
      run_verification(BlowupParams{2, 0.25, 0.4}, p, {}), ParamError);

  // Near-boundary parameters converge more slowly; give the band sum room.
  VerifyConfig stress;
  stress.m_max = 500;
  const NormReport corner =
      run_verification(BlowupParams{2, 0.45, 0.95}, p, stress);
  CHECK(corner.all_pass());
}
