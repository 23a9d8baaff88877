#include "cns/blowup.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "cns/errors.hpp"
#include "cns/parallel.hpp"

namespace cns {
namespace blowup {

namespace {
using meyer::kPi;
}

BlowupParams validate_params(int n, double a, double b) {
  if (n < 2) {
    throw ParamError("dimension constraint violated: n >= 2 required, got " +
                     std::to_string(n));
  }
  if (!(a > 0.0 && a < 0.5)) {
    throw ParamError("constraint 0 < a < 1/2 violated: a = " +
                     std::to_string(a));
  }
  const double lower = 0.5 * n + 2.0 * a - 1.0;
  const double upper = 0.5 * n;
  if (!(b > lower)) {
    throw ParamError("lower bound n/2 + 2a - 1 violated: need b > " +
                     std::to_string(lower) + ", got b = " + std::to_string(b));
  }
  if (!(b < upper)) {
    throw ParamError("upper bound n/2 violated: need b < " +
                     std::to_string(upper) + ", got b = " + std::to_string(b));
  }
  return BlowupParams{n, a, b};
}

int max_active_scale(double t) {
  if (t >= 1.0) return 0;
  return static_cast<int>(std::floor(-0.5 * std::log2(t)));
}

double coeff(const BlowupParams& params, double t, int j) {
  if (!(t > 0.0)) throw ParamError("coefficient requires t > 0");
  if (t >= 1.0 || j < 1 || j > max_active_scale(t)) return 0.0;
  return std::pow(t, -params.a) * std::exp2(-params.b * j);
}

BbmoResult bbmo_closed_form(const BlowupParams& params, int j0, int m_max) {
  if (j0 < 0) throw ParamError("bbmo_closed_form requires j0 >= 0");
  const int M = std::max(j0, 1);
  if (m_max < M + 5) {
    throw ParamError("bbmo_closed_form requires m_max >= max(j0,1) + 5");
  }
  const double n = params.n;
  const double kappa = 1.0 - 2.0 * params.a;  // > 0 for a < 1/2
  const double r = std::exp2(n - 2.0 * params.b);
  const double rho = std::exp2(n - 2.0 * params.b + 4.0 * params.a - 2.0);
  if (rho >= 1.0) {
    throw QuadratureDivergence(
        "time integral diverges: b <= n/2 + 2a - 1 makes the dyadic band "
        "contributions non-decaying");
  }

  // S(j0) = sum_m G(m) I(m) with G(m) = sum_{j=M}^m r^j and
  // I(m) = int_{4^{-(m+1)}}^{4^{-m}} t^{-2a} dt = 4^{-m kappa}(1-4^{-kappa})
  //        / kappa.
  const double band_factor = (1.0 - std::exp2(-2.0 * kappa)) / kappa;
  auto tail_at = [&](int m_last, double g_last) {
    if (r < 1.0) {
      // G saturates: tail <= G(inf) * int_0^{4^{-(m_last+1)}} t^{-2a} dt.
      const double g_inf = g_last + std::pow(r, m_last + 1) / (1.0 - r);
      return g_inf * std::exp2(-2.0 * kappa * (m_last + 1)) / kappa;
    }
    // G(m) <= G(m_last) + (m - m_last) r^m for m > m_last, so
    // tail <= G(m_last) * int_0^{4^{-(m_last+1)}} t^{-2a} dt
    //       + band_factor * sum_{l>=1} l rho^{m_last+l}.
    const double flat =
        g_last * std::exp2(-2.0 * kappa * (m_last + 1)) / kappa;
    const double growth = band_factor * std::pow(rho, m_last + 1) /
                          ((1.0 - rho) * (1.0 - rho));
    return flat + growth;
  };

  BbmoResult result;
  double g = 0.0;
  for (int m = M; m <= m_max; ++m) {
    g += std::exp2((n - 2.0 * params.b) * m);
    const double contrib = g * band_factor * std::exp2(-2.0 * kappa * m);
    result.value += contrib;
    ++result.terms;
    result.tail_bound = tail_at(m, g);
    if (result.tail_bound <= 1e-9 * result.value) break;
  }
  return result;
}

double blim_closed_form(const BlowupParams& params, double t, int j0) {
  if (!(t > 0.0 && t < 1.0)) {
    throw ParamError("blim_closed_form requires 0 < t < 1");
  }
  if (j0 < 0) throw ParamError("blim_closed_form requires j0 >= 0");
  const int J = max_active_scale(t);
  const double expo = params.n - 2.0 * params.b - 2.0;
  double sum = 0.0;
  for (int j = std::max(j0, 1); j <= J; ++j) {
    sum += std::exp2(expo * j);
  }
  return std::pow(t, -2.0 * params.a) * sum;
}

BlowupCertificate certificate_from_curve(std::span<const double> c_values,
                                         int m_lo, double expected_slope) {
  BlowupCertificate cert;
  cert.expected_exponent = expected_slope;
  cert.c_values.assign(c_values.begin(), c_values.end());
  cert.t_values.resize(c_values.size());
  for (std::size_t i = 0; i < c_values.size(); ++i) {
    cert.t_values[i] = std::exp2(-2.0 * (m_lo + static_cast<int>(i)));
  }
  if (c_values.size() < 4) {
    throw ParamError("blow-up certificate needs at least 4 samples");
  }
  cert.monotone = true;
  for (std::size_t i = 0; i < c_values.size(); ++i) {
    if (!(c_values[i] > 0.0) || !std::isfinite(c_values[i])) {
      cert.monotone = false;
      cert.slope_ok = false;
      return cert;  // refused: no positive curve to fit
    }
    if (i > 0 && !(c_values[i] > c_values[i - 1])) cert.monotone = false;
  }
  // Least squares of log2 c against m.
  const std::size_t count = c_values.size();
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    const double x = static_cast<double>(m_lo) + static_cast<double>(i);
    const double y = std::log2(c_values[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double denom = count * sxx - sx * sx;
  cert.fitted_exponent = (count * sxy - sx * sy) / denom;
  cert.slope_ok = std::abs(cert.fitted_exponent - expected_slope) <= 0.05;
  return cert;
}

BlowupCertificate blowup_certificate(const BlowupParams& params, int m_lo,
                                     int m_hi) {
  if (m_hi - m_lo + 1 < 4) {
    throw ParamError("blow-up certificate window must span >= 4 samples");
  }
  std::vector<double> curve;
  curve.reserve(m_hi - m_lo + 1);
  for (int m = m_lo; m <= m_hi; ++m) {
    curve.push_back(blim_closed_form(params, std::exp2(-2.0 * m), 0));
  }
  BlowupCertificate cert =
      certificate_from_curve(curve, m_lo, 4.0 * params.a);
  const double ratio = std::exp2(params.n - 2.0 * params.b - 2.0);
  cert.limit_constant = ratio / (1.0 - ratio);
  return cert;
}

double sup_norm_bound(const BlowupParams& params,
                      const meyer::MeyerProfile& profile, double t) {
  if (!(t > 0.0 && t < 1.0)) {
    throw ParamError("sup_norm_bound requires 0 < t < 1");
  }
  const std::vector<int> eps(params.n, 1);
  const double p_inf = meyer::periodization_sup_norm(profile, eps);
  const int J = max_active_scale(t);
  double sum = 0.0;
  for (int j = 1; j <= J; ++j) {
    sum += std::exp2((0.5 * params.n - params.b) * j);
  }
  return std::sqrt(t) * std::pow(t, -params.a) * p_inf * sum;
}

namespace {

// Lattice spectrum of the synthesized field on a unit-periodic box: one term
// per (scale j, sign vector m in {+-1}^n), at frequency 2^j 2pi m, with
// amplitude beta_j(t) * prod_i Psi^1(2pi m_i) and beta_j = t^{-a} 2^{(n/2-b)j}.
struct LatticeTerm {
  int j;
  std::vector<int> m;
  std::complex<double> amplitude;
};

std::vector<LatticeTerm> family_spectrum(const BlowupParams& params,
                                         const meyer::MeyerProfile& profile,
                                         double t, bool apply_multiplier) {
  std::vector<LatticeTerm> terms;
  if (!(t > 0.0)) throw ParamError("synthesis requires t > 0");
  const int J = max_active_scale(t);
  if (J < 1) return terms;
  const auto poly =
      meyer::periodization_polynomial(profile, std::vector<int>(params.n, 1));
  for (int j = 1; j <= J; ++j) {
    const double beta =
        std::pow(t, -params.a) * std::exp2((0.5 * params.n - params.b) * j);
    for (const auto& point : poly) {
      std::complex<double> amp = beta * point.value;
      if (apply_multiplier) {
        // -xi_1/xi_2 on the lattice point 2^j 2pi m is -m_1/m_2.
        amp *= -static_cast<double>(point.m[0]) /
               static_cast<double>(point.m[1]);
      }
      terms.push_back({j, point.m, amp});
    }
  }
  return terms;
}

SampledField synthesize_spectrum(const std::vector<LatticeTerm>& terms,
                                 const GridSpec& grid) {
  grid.validate();
  const int n = grid.n;
  const int N = grid.points_per_side;
  const double L = grid.box_side;

  SampledField out;
  out.grid = grid;
  out.values.assign(grid.total_points(), 0.0);

  // Per-axis phase tables e^{2pi i 2^j x_p} for each distinct scale.
  std::vector<int> scales;
  for (const auto& term : terms) {
    if (std::find(scales.begin(), scales.end(), term.j) == scales.end()) {
      scales.push_back(term.j);
    }
  }
  std::sort(scales.begin(), scales.end());
  std::vector<std::vector<std::complex<double>>> phase(scales.size());
  for (std::size_t s = 0; s < scales.size(); ++s) {
    phase[s].resize(N);
    for (int p = 0; p < N; ++p) {
      const double x = L * static_cast<double>(p) / N;
      phase[s][p] = std::polar(1.0, 2.0 * kPi * std::ldexp(x, scales[s]));
    }
  }
  std::vector<std::size_t> slot(terms.size());
  for (std::size_t i = 0; i < terms.size(); ++i) {
    slot[i] = static_cast<std::size_t>(
        std::lower_bound(scales.begin(), scales.end(), terms[i].j) -
        scales.begin());
  }

  const std::size_t total = out.values.size();
  parallel_for(0, total, [&](std::size_t lo, std::size_t hi) {
    std::vector<int> p(n, 0);
    for (std::size_t flat = lo; flat < hi; ++flat) {
      std::size_t rem = flat;
      for (int i = n - 1; i >= 0; --i) {
        p[i] = static_cast<int>(rem % N);
        rem /= N;
      }
      std::complex<double> acc{0.0, 0.0};
      for (std::size_t ti = 0; ti < terms.size(); ++ti) {
        const auto& ph = phase[slot[ti]];
        std::complex<double> w = terms[ti].amplitude;
        for (int i = 0; i < n; ++i) {
          w *= terms[ti].m[i] > 0 ? ph[p[i]] : std::conj(ph[p[i]]);
        }
        acc += w;
      }
      out.values[flat] = acc.real();
    }
  });
  return out;
}

}  // namespace

SampledField synthesize_u1(const BlowupParams& params,
                           const meyer::MeyerProfile& profile, double t,
                           const GridSpec& grid) {
  grid.validate();
  if (grid.n != params.n) {
    throw ParamError("synthesize_u1: grid dimension != field dimension");
  }
  const int J = max_active_scale(t);
  if (J >= 1) require_resolves_scale(grid, J);
  return synthesize_spectrum(family_spectrum(params, profile, t, false),
                             grid);
}

SampledField build_u2(const BlowupParams& params,
                      const meyer::MeyerProfile& profile, double t,
                      const GridSpec& grid) {
  if (params.n < 2) throw ParamError("build_u2 requires n >= 2");
  grid.validate();
  if (grid.n != params.n) {
    throw ParamError("build_u2: grid dimension != field dimension");
  }
  const int J = max_active_scale(t);
  if (J >= 1) require_resolves_scale(grid, J);
  return synthesize_spectrum(family_spectrum(params, profile, t, true), grid);
}

double divergence_residual(std::span<const SampledField> components) {
  if (components.empty()) {
    throw ParamError("divergence_residual: no components");
  }
  const GridSpec grid = components.front().grid;
  const int n = grid.n;
  if (static_cast<int>(components.size()) != n) {
    throw ParamError("divergence_residual: need one component per axis");
  }
  for (const auto& c : components) {
    if (c.grid.n != grid.n || c.grid.points_per_side != grid.points_per_side ||
        c.grid.box_side != grid.box_side) {
      throw ParamError("divergence_residual: mismatched grids");
    }
  }

  const int N = grid.points_per_side;
  const std::vector<int> dims(static_cast<std::size_t>(n), N);
  const std::size_t total = grid.total_points();

  std::vector<std::vector<std::complex<double>>> spectra(n);
  for (int c = 0; c < n; ++c) {
    spectra[c].assign(components[c].values.begin(),
                      components[c].values.end());
    fft_nd(spectra[c].data(), dims, /*inverse=*/false);
  }

  double max_div = 0.0;
  double max_amp = 0.0;
  std::vector<int> m(n, 0);
  for (std::size_t flat = 0; flat < total; ++flat) {
    std::size_t rem = flat;
    for (int i = n - 1; i >= 0; --i) {
      const int bin = static_cast<int>(rem % N);
      m[i] = bin < N / 2 ? bin : bin - N;
      rem /= N;
    }
    std::complex<double> div{0.0, 0.0};
    for (int c = 0; c < n; ++c) {
      const double xi = 2.0 * kPi * m[c] / grid.box_side;
      div += xi * spectra[c][flat];
      max_amp = std::max(max_amp, std::abs(spectra[c][flat]));
    }
    max_div = std::max(max_div, std::abs(div));
  }
  if (max_amp == 0.0) return 0.0;
  return max_div / max_amp;
}

FamilyField::FamilyField(const BlowupParams& params) : params_(params) {}

std::vector<std::vector<int>> FamilyField::channels() const {
  return {std::vector<int>(params_.n, 1)};
}

std::pair<int, int> FamilyField::active_scales(double t) const {
  return {1, max_active_scale(t)};
}

double FamilyField::coeff(double t, const WaveletIndex& idx) const {
  if (idx.eps != std::vector<int>(params_.n, 1)) return 0.0;
  return blowup::coeff(params_, t, idx.j);
}

ReanalysisField::ReanalysisField(const BlowupParams& params,
                                 const meyer::MeyerProfile& profile,
                                 int max_scale)
    : params_(params), max_scale_(max_scale) {
  if (params.n > 8) {
    throw ParamError("re-analysis supports n <= 8");
  }
  // <u_2(t), Phi^{eps}_{j,k}> is a finite sum over the lattice points
  // 2^{j'} 2pi m, m in {+-1}^n, from the source scales j' in {j-1, j}.
  // The analysis factors do not depend on k except for a parity sign at
  // the half scale, so the mask sums collapse to one constant per channel:
  //   same_scale_[eps] = sum_m d_m conj(prod_i Psi^{eps_i}(2pi m_i)),
  //   half_scale_[eps] = sum_m d_m conj(prod_i Psi^{eps_i}(pi m_i)),
  // with d_m = (-m_1 m_2) prod_i Psi^1(2pi m_i).
  const int n = params.n;
  same_scale_.assign(1 << n, {0.0, 0.0});
  half_scale_.assign(1 << n, {0.0, 0.0});
  for (int mask = 0; mask < (1 << n); ++mask) {
    std::complex<double> d{1.0, 0.0};
    int m[8];
    for (int i = 0; i < n; ++i) {
      m[i] = ((mask >> i) & 1) ? 1 : -1;
      d *= profile.psi(1, 2.0 * kPi * m[i]);
    }
    d *= -static_cast<double>(m[0]) * static_cast<double>(m[1]);
    for (int eps = 1; eps < (1 << n); ++eps) {
      std::complex<double> same{1.0, 0.0}, half{1.0, 0.0};
      for (int i = 0; i < n; ++i) {
        const int eps_i = (eps >> i) & 1;
        same *= std::conj(profile.psi(eps_i, 2.0 * kPi * m[i]));
        half *= std::conj(profile.psi(eps_i, kPi * m[i]));
      }
      same_scale_[eps] += d * same;
      half_scale_[eps] += d * half;
    }
  }
}

std::vector<std::vector<int>> ReanalysisField::channels() const {
  std::vector<std::vector<int>> out;
  const int n = params_.n;
  for (int mask = 1; mask < (1 << n); ++mask) {
    std::vector<int> eps(n, 0);
    for (int i = 0; i < n; ++i) eps[i] = (mask >> i) & 1;
    out.push_back(std::move(eps));
  }
  return out;
}

std::pair<int, int> ReanalysisField::active_scales(double t) const {
  const int J = max_active_scale(t);
  if (J < 1) return {1, 0};
  return {1, std::min(J + 1, max_scale_)};
}

double ReanalysisField::coeff(double t, const WaveletIndex& idx) const {
  const int n = params_.n;
  const int J = max_active_scale(t);
  if (J < 1 || idx.j > max_scale_) return 0.0;
  int eps = 0;
  for (int i = 0; i < n; ++i) eps |= (idx.eps[i] & 1) << i;
  if (eps == 0) return 0.0;

  std::complex<double> acc{0.0, 0.0};
  if (idx.j >= 1 && idx.j <= J) {
    // Same-scale lattice: the translation phase e^{i 2pi m_i k_i} is 1.
    acc += std::exp2((0.5 * n - params_.b) * idx.j) * same_scale_[eps];
  }
  const int jp = idx.j - 1;
  if (jp >= 1 && jp <= J) {
    // Half-scale lattice: phase e^{i pi m_i k_i} = (-1)^{k_i} per axis.
    long long parity = 0;
    for (int i = 0; i < n; ++i) parity += idx.k[i];
    const double sign = (parity & 1) ? -1.0 : 1.0;
    acc += sign * std::exp2((0.5 * n - params_.b) * jp) * half_scale_[eps];
  }
  acc *= std::pow(t, -params_.a) * std::exp2(-0.5 * n * idx.j);
  return acc.real();
}

NormReport run_verification(const BlowupParams& raw,
                            const meyer::MeyerProfile& profile,
                            const VerifyConfig& config) {
  const BlowupParams params = validate_params(raw.n, raw.a, raw.b);

  NormReport report;
  report.n = params.n;
  report.a = params.a;
  report.b = params.b;

  // Carleson quantity over the tested roots, closed form. The tail bound
  // is analytic, so value + tail is a rigorous finite bound whenever the
  // bands decay; the 5% gate only rejects runs truncated too early to
  // report a meaningful number (raise --m-max near the parameter boundary).
  bool bbmo_ok = true;
  for (int j0 = 0; j0 <= config.j0_max; ++j0) {
    BbmoResult s = bbmo_closed_form(params, j0, config.m_max);
    report.bbmo.push_back({j0, s.value, s.tail_bound});
    if (!std::isfinite(s.value) || !std::isfinite(s.tail_bound) ||
        s.tail_bound > 0.05 * s.value) {
      bbmo_ok = false;
    }
  }
  for (const auto& entry : report.bbmo) {
    if (entry.value > report.bbmo.front().value * (1.0 + 1e-12)) {
      bbmo_ok = false;  // coarsest tested root must dominate
    }
  }
  // Desk-scale re-analysis of u_2 on the tested roots: its Carleson
  // quantity must converge (finite).
  {
    ReanalysisField u2(params, profile, config.desk_scale_max);
    const std::vector<long long> origin(params.n, 0);
    for (int j0 = 0; j0 <= 1; ++j0) {
      try {
        const auto q = dyadic::carleson_time_quantity(u2, j0, origin);
        if (!std::isfinite(q.value)) bbmo_ok = false;
      } catch (const QuadratureDivergence&) {
        bbmo_ok = false;
      }
    }
  }
  report.claim_bbmo = bbmo_ok;

  // Fixed-time quantity along dyadic times: strict growth at rate 4a.
  std::vector<double> curve;
  for (int m = config.m_range_lo; m <= config.m_range_hi; ++m) {
    const double t = std::exp2(-2.0 * m);
    const double c = blim_closed_form(params, t, 0);
    report.blim.push_back({m, t, c});
    curve.push_back(c);
  }
  const BlowupCertificate cert =
      certificate_from_curve(curve, config.m_range_lo, 4.0 * params.a);
  report.blowup_slope = cert.fitted_exponent;
  report.blowup_expected = cert.expected_exponent;
  report.claim_blim_fails = cert.accepted();

  // Weighted sup norm: analytic sweep bounded, grid values below the bound.
  bool ninfty_ok = true;
  double sweep_max = 0.0;
  for (int m = 1; m <= config.ninfty_sweep_max; ++m) {
    const double bound = sup_norm_bound(params, profile, std::exp2(-2.0 * m));
    if (!std::isfinite(bound)) ninfty_ok = false;
    sweep_max = std::max(sweep_max, bound);
  }
  // The t-exponent of the bound, measured on the far tail where the
  // geometric sum tracks its envelope; the sweep window itself still shows
  // the pre-asymptotic hump.
  {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const int lo = 13, hi = 24;
    for (int m = lo; m <= hi; ++m) {
      const double x = -2.0 * m;  // log2 t
      const double y =
          std::log2(sup_norm_bound(params, profile, std::exp2(-2.0 * m)));
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
    }
    const int cnt = hi - lo + 1;
    const double slope = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
    const double expected =
        0.5 - params.a - 0.5 * (0.5 * params.n - params.b);
    if (std::abs(slope - expected) > 0.05) ninfty_ok = false;
  }
  if (params.n <= 3) {
    for (int m = 1; m <= config.ninfty_cross_max; ++m) {
      const double t = std::exp2(-2.0 * m);
      const int min_pps =
          min_points_per_side(max_active_scale(t), config.box_side);
      GridSpec grid{params.n, config.box_side,
                    std::max(config.grid_points, min_pps)};
      if (grid.total_points() > (1u << 21)) {
        grid.points_per_side = min_pps;  // drop the baseline, keep exactness
      }
      if (grid.total_points() > (1u << 21)) break;  // cost guard
      const SampledField u1 = synthesize_u1(params, profile, t, grid);
      const double grid_value = std::sqrt(t) * u1.max_abs();
      const double bound = sup_norm_bound(params, profile, t);
      report.ninfty.push_back({t, bound, grid_value});
      if (grid_value > bound * (1.0 + 1e-9)) ninfty_ok = false;
    }
  }
  report.claim_ninfty = ninfty_ok;

  // Divergence-free check in frequency space across grid refinements.
  bool div_ok = true;
  double residual = 0.0;
  if (params.n <= 3) {
    const double t_div = 1.0 / 16.0;
    const std::vector<int> grids =
        params.n == 2 ? std::vector<int>{64, 128, 256} : std::vector<int>{64};
    for (int pps : grids) {
      GridSpec grid{params.n, config.box_side, pps};
      std::vector<SampledField> u;
      u.push_back(synthesize_u1(params, profile, t_div, grid));
      u.push_back(build_u2(params, profile, t_div, grid));
      for (int c = 2; c < params.n; ++c) {
        SampledField zero;
        zero.grid = grid;
        zero.values.assign(grid.total_points(), 0.0);
        u.push_back(std::move(zero));
      }
      residual = std::max(residual, divergence_residual(u));
    }
    if (residual > 1e-12) div_ok = false;
  }
  report.divergence_residual = residual;
  report.claim_divfree = div_ok;

  return report;
}

}  // namespace blowup
}  // namespace cns
