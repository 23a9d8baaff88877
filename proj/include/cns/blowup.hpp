#pragma once

#include <memory>
#include <span>
#include <vector>

#include "cns/dyadic.hpp"
#include "cns/grid.hpp"
#include "cns/meyer.hpp"
#include "cns/report.hpp"

namespace cns {

/// Construction of an explicit divergence-free field whose Carleson-box
/// quantity stays uniformly bounded while its fixed-time BMO^{-1}-type
/// quantity inflates like t^{-2a} as t -> 0.
namespace blowup {

/// Admissible parameters: n >= 2, 0 < a < 1/2, n/2 + 2a - 1 < b < n/2.
struct BlowupParams {
  int n = 2;
  double a = 0.25;
  double b = 0.75;
};

/// Validates the three constraints; throws ParamError naming the first
/// violated one.
BlowupParams validate_params(int n, double a, double b);

/// Scale cutoff: active scales at time t are 1 .. floor(-log2(t)/2)
/// (none for t >= 1).
int max_active_scale(double t);

/// a^{e}_{j,k}(t) = t^{-a} 2^{-bj} for 1 <= j <= -log2(t)/2 and t < 1,
/// else 0; independent of k. Requires t > 0.
double coeff(const BlowupParams& params, double t, int j);

struct BbmoResult {
  double value = 0.0;
  double tail_bound = 0.0;
  int terms = 0;  // dyadic bands actually summed
};

/// Exact piecewise-dyadic evaluation of
///   S(j0) = 2^{n j0} int_0^{4^{-j0}} sum_{Q_{j,k} subset Q_{j0,k0}}
///           |a(t)|^2 dt
///         = sum_m G(m) int_{4^{-(m+1)}}^{4^{-m}} t^{-2a} dt,
/// with G(m) = sum_{j=max(j0,1)}^m 2^{(n-2b)j}. Summation stops once the
/// analytic geometric tail drops below rel 1e-9 or m_max bands are used;
/// the remaining tail bound is returned. Throws QuadratureDivergence when
/// b <= n/2 + 2a - 1 (the band contributions do not decay).
BbmoResult bbmo_closed_form(const BlowupParams& params, int j0, int m_max);

/// c(t, j0) = t^{-2a} sum_{j=max(j0,1)}^{floor(-log2(t)/2)} 2^{(n-2b-2)j};
/// the exact fixed-time quantity of the family on root Q_{j0,k0}.
/// Requires 0 < t < 1.
double blim_closed_form(const BlowupParams& params, double t, int j0);

struct BlowupCertificate {
  std::vector<double> t_values;
  std::vector<double> c_values;
  double fitted_exponent = 0.0;  // least-squares slope of log2 c against m
  double expected_exponent = 0.0;  // 4a
  double limit_constant = 0.0;     // lim c(4^{-m},0) (4^{-m})^{2a}
  bool monotone = false;
  bool slope_ok = false;
  bool accepted() const { return monotone && slope_ok; }
};

/// Least-squares fit of log2 c(4^{-m}, 0) against m over [m_lo, m_hi]
/// (length >= 4), asserting strict monotone growth and slope 4a +- 0.05.
BlowupCertificate blowup_certificate(const BlowupParams& params, int m_lo,
                                     int m_hi);

/// Certificate evaluation on an explicit curve; refused (not accepted) when
/// any c-value is non-positive or the fit fails.
BlowupCertificate certificate_from_curve(std::span<const double> c_values,
                                         int m_lo, double expected_slope);

/// Analytic bound t^{1/2} t^{-a} ||P||_inf sum_{j=1}^{J(t)} 2^{(n/2-b)j}
/// for t^{1/2} ||u_1(t)||_inf, with P the periodization of the all-ones
/// channel wavelet. Requires 0 < t < 1.
double sup_norm_bound(const BlowupParams& params,
                      const meyer::MeyerProfile& profile, double t);

/// Samples of u_1(t, x) = t^{-a} sum_j 2^{(n/2-b)j} P(2^j x) on the grid,
/// synthesized from the finite periodization polynomial (exact for this
/// family: coefficients are constant in k).
SampledField synthesize_u1(const BlowupParams& params,
                           const meyer::MeyerProfile& profile, double t,
                           const GridSpec& grid);

/// Samples of u_2 = -(1/d_2) d_1 u_1, built by applying the multiplier
/// -xi_1/xi_2 to u_1's lattice spectrum (it equals -m_1/m_2 on the populated
/// lattice points 2^j 2pi m, m in {+-1}^n). Requires n >= 2.
SampledField build_u2(const BlowupParams& params,
                      const meyer::MeyerProfile& profile, double t,
                      const GridSpec& grid);

/// max over grid frequencies of |sum_i xi_i hat(u)_i| / max |hat(u)|, via
/// forward DFTs of the sampled components; 0 when the field vanishes.
double divergence_residual(std::span<const SampledField> components);

/// The family's coefficients as a TimeField (component 1, channel e only).
class FamilyField final : public dyadic::TimeField {
 public:
  explicit FamilyField(const BlowupParams& params);

  int dimension() const override { return params_.n; }
  std::vector<std::vector<int>> channels() const override;
  std::pair<int, int> active_scales(double t) const override;
  double coeff(double t, const WaveletIndex& idx) const override;
  bool constant_in_k() const override { return true; }
  bool dyadic_breakpoints() const override { return true; }

 private:
  BlowupParams params_;
};

/// Wavelet coefficients of u_2, re-derived from its lattice spectrum.
/// Each coefficient <u_2(t), Phi^{eps}_{j,k}> is a finite sum over source
/// scales j' in {j-1, j} and lattice signs m in {+-1}^n; scales are capped
/// at max_scale for desk-scale use. Coefficients depend on k mod 2 per axis.
class ReanalysisField final : public dyadic::TimeField {
 public:
  ReanalysisField(const BlowupParams& params,
                  const meyer::MeyerProfile& profile, int max_scale);

  int dimension() const override { return params_.n; }
  std::vector<std::vector<int>> channels() const override;
  std::pair<int, int> active_scales(double t) const override;
  double coeff(double t, const WaveletIndex& idx) const override;
  bool dyadic_breakpoints() const override { return true; }

 private:
  BlowupParams params_;
  int max_scale_;
  // Per-channel lattice pairings, eps encoded as a bit mask: against the
  // same-scale lattice (j' = j) and the half-scale lattice (j' = j - 1).
  std::vector<std::complex<double>> same_scale_;
  std::vector<std::complex<double>> half_scale_;
};

struct VerifyConfig {
  int j0_max = 10;
  int m_max = 40;          // band cap for the Carleson sums
  int m_range_lo = 4;      // blow-up certificate fit window
  int m_range_hi = 16;
  int grid_points = 256;   // baseline grid; grown per time slice as needed
  double box_side = 1.0;
  int ninfty_sweep_max = 12;  // dyadic times for the boundedness sweep
  int ninfty_cross_max = 8;   // dyadic times cross-checked on the grid
  int desk_scale_max = 3;     // scale cap for the u_2 re-analysis
};

/// Runs every checkable claim in order: uniform Carleson bound over
/// j0 = 0..j0_max (with the u_2 desk re-analysis on the tested roots),
/// blow-up certificate, weighted sup-norm sweep with grid cross-check, and
/// the divergence residual at grid sizes 64/128/256. Returns the report;
/// never throws on a failed claim (claims read pass/fail), but propagates
/// parameter errors.
NormReport run_verification(const BlowupParams& params,
                            const meyer::MeyerProfile& profile,
                            const VerifyConfig& config = {});

}  // namespace blowup
}  // namespace cns
