#include "cns/meyer.hpp"

#include <algorithm>
#include <cmath>

#include "cns/errors.hpp"

namespace cns {

bool WaveletIndex::eps_is_zero() const {
  return std::all_of(eps.begin(), eps.end(), [](int e) { return e == 0; });
}

namespace meyer {
namespace {

constexpr double kTwoPiThirds = 2.0 * kPi / 3.0;
constexpr double kFourPiThirds = 4.0 * kPi / 3.0;
constexpr double kEightPiThirds = 8.0 * kPi / 3.0;

}  // namespace

MeyerProfile::MeyerProfile(int transition_order) : order_(transition_order) {
  if (order_ < 1) {
    throw ParamError("transition_order must be >= 1, got " +
                     std::to_string(order_));
  }
  // Pascal row 2p-1, used by the Bernstein form of I_x(p, p).
  const int rows = 2 * order_ - 1;
  binom_.assign(static_cast<std::size_t>(rows) + 1, 1.0);
  for (int i = 1; i <= rows; ++i) {
    binom_[i] = binom_[i - 1] * static_cast<double>(rows - i + 1) /
                static_cast<double>(i);
  }
}

double MeyerProfile::transition(double x) const {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  // nu(x) = I_x(p, p) = sum_{i=p}^{2p-1} C(2p-1, i) x^i (1-x)^{2p-1-i}.
  // The Bernstein form keeps nu(x) + nu(1-x) = 1 exact to roundoff.
  const int p = order_;
  const double y = 1.0 - x;
  double acc = 0.0;
  for (int i = 2 * p - 1; i >= p; --i) {
    acc += binom_[i] * std::pow(x, i) * std::pow(y, 2 * p - 1 - i);
  }
  return acc;
}

double MeyerProfile::psi0(double xi) const {
  const double ax = std::abs(xi);
  if (ax <= kTwoPiThirds) return 1.0;
  if (ax >= kFourPiThirds) return 0.0;
  return std::cos(kPi / 2.0 * transition(3.0 * ax / (2.0 * kPi) - 1.0));
}

double MeyerProfile::omega(double xi) const {
  const double lo = psi0(xi / 2.0);
  const double hi = psi0(xi);
  // Clamp absorbs roundoff-negative differences at the plateau edges.
  return std::sqrt(std::max(lo * lo - hi * hi, 0.0));
}

std::complex<double> MeyerProfile::psi1(double xi) const {
  const double mag = omega(xi);
  if (mag == 0.0) return {0.0, 0.0};
  return std::polar(mag, -xi / 2.0);
}

std::complex<double> MeyerProfile::psi(int eps_i, double xi) const {
  return eps_i == 0 ? std::complex<double>(psi0(xi), 0.0) : psi1(xi);
}

MeyerProfile build_profile(int transition_order) {
  return MeyerProfile(transition_order);
}

std::complex<double> phi_hat(const MeyerProfile& profile,
                             std::span<const int> eps,
                             std::span<const double> xi) {
  if (eps.size() != xi.size()) {
    throw ParamError("phi_hat: eps and xi dimensions differ (" +
                     std::to_string(eps.size()) + " vs " +
                     std::to_string(xi.size()) + ")");
  }
  std::complex<double> acc{1.0, 0.0};
  for (std::size_t i = 0; i < eps.size(); ++i) {
    acc *= profile.psi(eps[i], xi[i]);
    if (acc == std::complex<double>{0.0, 0.0}) return acc;
  }
  return acc;
}

std::vector<LatticePoint> periodization_polynomial(
    const MeyerProfile& profile, std::span<const int> eps) {
  const int n = static_cast<int>(eps.size());
  if (std::all_of(eps.begin(), eps.end(), [](int e) { return e == 0; })) {
    throw ParamError("periodization_polynomial requires eps != 0");
  }
  // Per-axis options: eps_i = 0 contributes only m_i = 0 (Psi0(2pi m) = 0
  // for m != 0), eps_i = 1 only m_i = +-1.
  std::vector<LatticePoint> out;
  std::vector<int> m(n, 0);
  std::vector<std::vector<int>> options(n);
  for (int i = 0; i < n; ++i) {
    options[i] = eps[i] == 0 ? std::vector<int>{0} : std::vector<int>{-1, 1};
  }
  std::vector<std::size_t> cursor(n, 0);
  while (true) {
    std::complex<double> value{1.0, 0.0};
    for (int i = 0; i < n; ++i) {
      m[i] = options[i][cursor[i]];
      value *= profile.psi(eps[i], 2.0 * kPi * m[i]);
    }
    out.push_back({m, value});
    int axis = n - 1;
    while (axis >= 0 && ++cursor[axis] == options[axis].size()) {
      cursor[axis] = 0;
      --axis;
    }
    if (axis < 0) break;
  }
  return out;
}

double periodization_sup_norm(const MeyerProfile& profile,
                              std::span<const int> eps) {
  constexpr int kSamples = 4096;
  double prod = 1.0;
  for (int eps_i : eps) {
    if (eps_i == 0) continue;  // axis factor Psi0(0) = 1
    double axis_max = 0.0;
    const std::complex<double> cplus = profile.psi(1, 2.0 * kPi);
    const std::complex<double> cminus = profile.psi(1, -2.0 * kPi);
    for (int s = 0; s < kSamples; ++s) {
      const double y = static_cast<double>(s) / kSamples;
      const std::complex<double> phase =
          std::polar(1.0, 2.0 * kPi * y);
      axis_max = std::max(axis_max,
                          std::abs(cplus * phase + cminus * std::conj(phase)));
    }
    prod *= axis_max;
  }
  return prod;
}

namespace {

// Trapezoid over [-hi, hi]; integrand vanishes smoothly at the endpoints so
// the rule converges super-algebraically.
std::complex<double> axis_pair_integral(const MeyerProfile& profile,
                                        int eps_a, int j_a, long long k_a,
                                        int eps_b, int j_b, long long k_b) {
  const double support_a = std::ldexp(
      eps_a == 0 ? kFourPiThirds : kEightPiThirds, j_a);
  const double support_b = std::ldexp(
      eps_b == 0 ? kFourPiThirds : kEightPiThirds, j_b);
  const double hi = std::min(support_a, support_b);
  const double shift =
      std::ldexp(static_cast<double>(k_b), -j_b) -
      std::ldexp(static_cast<double>(k_a), -j_a);
  // Base resolution covers the profile transitions; extra points keep a few
  // hundred samples per oscillation of the translation phase.
  const double cycles = std::abs(shift) * hi / kPi;
  int npts = 1 << 16;
  while (npts < 256.0 * cycles && npts < (1 << 22)) npts <<= 1;
  const double h = 2.0 * hi / npts;
  std::complex<double> acc{0.0, 0.0};
  for (int s = 0; s <= npts; ++s) {
    const double xi = -hi + h * static_cast<double>(s);
    std::complex<double> f =
        profile.psi(eps_a, std::ldexp(xi, -j_a)) *
        std::conj(profile.psi(eps_b, std::ldexp(xi, -j_b))) *
        std::polar(1.0, shift * xi);
    if (s == 0 || s == npts) f *= 0.5;
    acc += f;
  }
  return acc * (h * std::exp2(-0.5 * (j_a + j_b)) / (2.0 * kPi));
}

}  // namespace

double inner_product_freq(const MeyerProfile& profile, const WaveletIndex& a,
                          const WaveletIndex& b) {
  if (a.dimension() != b.dimension() ||
      a.dimension() != static_cast<int>(a.k.size()) ||
      b.dimension() != static_cast<int>(b.k.size())) {
    throw ParamError("inner_product_freq: dimension mismatch");
  }
  std::complex<double> acc{1.0, 0.0};
  for (int i = 0; i < a.dimension(); ++i) {
    acc *= axis_pair_integral(profile, a.eps[i], a.j, a.k[i], b.eps[i], b.j,
                              b.k[i]);
  }
  return acc.real();
}

double wavelet_value_1d(const MeyerProfile& profile, int eps_i, double x,
                        int quadrature_points) {
  // (1/2pi) int psi(xi) e^{i x xi} dxi reduces to a cosine integral over the
  // positive support by evenness / Hermitian symmetry.
  const int kPts = quadrature_points;
  double lo, hi, shift;
  if (eps_i == 0) {
    lo = 0.0;
    hi = kFourPiThirds;
    shift = x;
  } else {
    lo = kTwoPiThirds;
    hi = kEightPiThirds;
    shift = x - 0.5;
  }
  const double h = (hi - lo) / kPts;
  double acc = 0.0;
  for (int s = 0; s <= kPts; ++s) {
    const double xi = lo + h * static_cast<double>(s);
    const double mag = eps_i == 0 ? profile.psi0(xi) : profile.omega(xi);
    double f = mag * std::cos(shift * xi);
    if (s == 0 || s == kPts) f *= 0.5;
    acc += f;
  }
  return acc * h / kPi;
}

double periodization_residual(const MeyerProfile& profile, int radius,
                              int y_samples) {
  // sum_{|k| <= R} phi(y - k)
  //   = (1/pi) int Omega(xi) D_R(xi) cos((y - 1/2) xi) dxi,
  // D_R(xi) = sin((R + 1/2) xi) / sin(xi / 2), versus the two-term
  // polynomial -2 Omega(2pi) cos(2pi y).
  const int npts = 1 << 19;  // resolves the Dirichlet oscillation
  const double lo = kTwoPiThirds;
  const double hi = kEightPiThirds;
  const double h = (hi - lo) / npts;
  const double poly_amp = -2.0 * profile.omega(2.0 * kPi);
  const double half_order = radius + 0.5;
  // Both sines vanish together at xi = 2pi; the shifted form keeps the
  // ratio stable there.
  const auto dirichlet = [&](double xi) {
    const double u = xi - 2.0 * kPi;
    if (u == 0.0) return 2.0 * radius + 1.0;
    if (std::abs(u) < 0.5) {
      return std::sin(half_order * u) / std::sin(0.5 * u);
    }
    return std::sin(half_order * xi) / std::sin(0.5 * xi);
  };
  double residual = 0.0;
  for (int s_y = 0; s_y < y_samples; ++s_y) {
    const double y = static_cast<double>(s_y) / y_samples;
    double acc = 0.0;
    for (int s = 0; s <= npts; ++s) {
      const double xi = lo + h * static_cast<double>(s);
      double f = profile.omega(xi) * dirichlet(xi) * std::cos((y - 0.5) * xi);
      if (s == 0 || s == npts) f *= 0.5;
      acc += f;
    }
    const double direct = acc * h / kPi;
    residual = std::max(residual,
                        std::abs(direct - poly_amp * std::cos(2.0 * kPi * y)));
  }
  return residual;
}

}  // namespace meyer
}  // namespace cns

