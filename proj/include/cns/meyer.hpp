#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

namespace cns {

/// Index (eps, j, k) of a tensor-product wavelet: eps in {0,1}^n selects the
/// band-pass factor per axis, j is the dyadic scale, k the translation.
/// Indices with eps != 0 span the wavelet family; eps == 0 is the pure
/// scaling tensor (valid for sampling, not a member of the wavelet set).
struct WaveletIndex {
  std::vector<int> eps;
  int j = 0;
  std::vector<long long> k;

  WaveletIndex() = default;
  WaveletIndex(std::vector<int> eps_, int j_, std::vector<long long> k_)
      : eps(std::move(eps_)), j(j_), k(std::move(k_)) {}

  int dimension() const { return static_cast<int>(eps.size()); }
  bool eps_is_zero() const;
  bool operator==(const WaveletIndex&) const = default;
};

namespace meyer {

inline constexpr double kPi = 3.14159265358979323846;

/// Frequency-domain profile of the wavelet construction.
///
/// psi0 is even, equals 1 on |xi| <= 2pi/3, vanishes for |xi| >= 4pi/3 and
/// transitions via cos(pi/2 * nu(3|xi|/(2pi) - 1)) in between, where nu is
/// the regularized incomplete beta polynomial I_x(p, p) of the given order p
/// (so nu(x) + nu(1-x) = 1 identically).  omega is the band-pass magnitude
/// sqrt(psi0(xi/2)^2 - psi0(xi)^2), supported on 2pi/3 <= |xi| <= 8pi/3, and
/// psi1(xi) = omega(xi) e^{-i xi/2} is the one-dimensional wavelet symbol.
///
/// Immutable after construction; safe to share across threads.
class MeyerProfile {
 public:
  explicit MeyerProfile(int transition_order = 4);

  int transition_order() const { return order_; }

  /// The transition function nu on [0,1]; clamped outside.
  double transition(double x) const;

  double psi0(double xi) const;
  double omega(double xi) const;
  std::complex<double> psi1(double xi) const;

  /// Psi^{eps_i}: the eps-selected one-dimensional symbol.
  std::complex<double> psi(int eps_i, double xi) const;

 private:
  int order_;
  std::vector<double> binom_;  // C(2p-1, i) for i = 0 .. 2p-1
};

/// Convenience: construct a profile, rejecting transition_order < 1.
MeyerProfile build_profile(int transition_order = 4);

/// hat(Phi)^eps(xi) = prod_i Psi^{eps_i}(xi_i).
std::complex<double> phi_hat(const MeyerProfile& profile,
                             std::span<const int> eps,
                             std::span<const double> xi);

/// One nonzero Fourier coefficient hat(Phi)^eps(2 pi m) of the 1-periodic
/// sum P(y) = sum_k Phi^eps(y - k).
struct LatticePoint {
  std::vector<int> m;
  std::complex<double> value;
};

/// All nonzero coefficients of the periodization P. Compact spectral support
/// leaves only m with coordinates in {-1,0,1}; axes with eps_i = 1 force
/// m_i in {-1,+1}, axes with eps_i = 0 force m_i = 0. Requires eps != 0.
std::vector<LatticePoint> periodization_polynomial(const MeyerProfile& profile,
                                                   std::span<const int> eps);

/// Sup norm of the periodization P, by dense per-axis sampling (4096 points
/// per axis; P factorizes across axes so the product of axis maxima is the
/// global maximum).
double periodization_sup_norm(const MeyerProfile& profile,
                              std::span<const int> eps);

/// <Phi^{eps}_{j,k}, Phi^{eps'}_{j',k'}> by frequency-domain quadrature,
/// factored into one trapezoid integral per axis. Desk-scale analysis
/// utility; cost grows with the translation spread.
double inner_product_freq(const MeyerProfile& profile, const WaveletIndex& a,
                          const WaveletIndex& b);

/// Position-space value of the one-dimensional factor wavelet (eps_i = 1)
/// or scaling function (eps_i = 0) at x, by quadrature of its symbol.
/// Desk-scale utility for direct-sum cross-checks.
double wavelet_value_1d(const MeyerProfile& profile, int eps_i, double x,
                        int quadrature_points = 1 << 17);

/// Uniform residual between the truncated direct periodization
/// sum_{|k| <= radius} phi(y - k) (folded through the Dirichlet kernel so
/// large radii stay tractable) and the finite trigonometric polynomial, over
/// y_samples points of one period, in one dimension.
double periodization_residual(const MeyerProfile& profile, int radius,
                              int y_samples);

}  // namespace meyer
}  // namespace cns
