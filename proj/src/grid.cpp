#include "cns/grid.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>

#include "cns/errors.hpp"
#include "cns/parallel.hpp"

namespace cns {

namespace {

bool is_pow2(int v) { return v >= 1 && (v & (v - 1)) == 0; }

int next_pow2(int v) {
  int p = 8;
  while (p < v) p <<= 1;
  return p;
}

}  // namespace

void GridSpec::validate() const {
  if (n < 1 || n > 3) {
    throw ParamError("grid dimension must be 1..3, got " + std::to_string(n));
  }
  if (!(box_side > 0.0)) {
    throw ParamError("box_side must be positive");
  }
  if (points_per_side < 8 || !is_pow2(points_per_side)) {
    throw ParamError("points_per_side must be a power of two >= 8, got " +
                     std::to_string(points_per_side));
  }
}

std::size_t GridSpec::total_points() const {
  std::size_t total = 1;
  for (int i = 0; i < n; ++i) total *= static_cast<std::size_t>(points_per_side);
  return total;
}

double SampledField::max_abs() const {
  double m = 0.0;
  for (double v : values) m = std::max(m, std::abs(v));
  return m;
}

double SampledField::box_integral() const {
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum * std::pow(grid.spacing(), grid.n);
}

int min_points_per_side(int j, double box_side) {
  // Dual lattice 2pi m / L must reach 2^j * 8pi/3, excluding the ambiguous
  // Nyquist bin: floor(2^j * 4L/3) <= N/2 - 1.
  const double max_index = std::floor(std::ldexp(4.0 * box_side / 3.0, j));
  const double needed = 2.0 * (max_index + 1.0);
  if (needed > 1 << 28) {
    throw NyquistError("scale " + std::to_string(j) +
                           " is beyond any supported grid resolution",
                       1 << 28);
  }
  return next_pow2(static_cast<int>(needed));
}

void require_resolves_scale(const GridSpec& grid, int j) {
  const int required = min_points_per_side(j, grid.box_side);
  if (grid.points_per_side < required) {
    throw NyquistError(
        "grid of " + std::to_string(grid.points_per_side) +
            " points per side cannot resolve scale " + std::to_string(j) +
            "; need points_per_side >= " + std::to_string(required),
        required);
  }
}

SampledField sample_wavelet(const meyer::MeyerProfile& profile,
                            const WaveletIndex& idx, const GridSpec& grid) {
  grid.validate();
  const int n = grid.n;
  if (idx.dimension() != n || static_cast<int>(idx.k.size()) != n) {
    throw ParamError("sample_wavelet: index dimension does not match grid");
  }
  require_resolves_scale(grid, idx.j);

  const int N = grid.points_per_side;
  const double L = grid.box_side;

  // The box periodization of Phi^eps_{j,k} has Fourier coefficients
  // L^{-n} hat(Phi)^eps_{j,k}(2pi m / L), all inside the resolved band, so
  // evaluating the series on the grid is exact. Everything factorizes per
  // axis, and Hermitian symmetry of each axis series makes the factors real.
  std::vector<std::vector<double>> axis(n);
  // Symbols vanish outside |m| <= 2^j * 4L/3; keep the sum on the band.
  const int m_band = static_cast<int>(
      std::ceil(std::ldexp(4.0 * L / 3.0, idx.j))) + 1;
  const int m_max = std::min(N / 2 - 1, m_band);
  for (int i = 0; i < n; ++i) {
    std::vector<double> w(static_cast<std::size_t>(N), 0.0);
    for (int p = 0; p < N; ++p) {
      std::complex<double> acc{0.0, 0.0};
      for (int m = -m_max; m <= m_max; ++m) {
        const double xi = 2.0 * meyer::kPi * m / L;
        const std::complex<double> sym =
            profile.psi(idx.eps[i], std::ldexp(xi, -idx.j));
        if (sym == std::complex<double>{0.0, 0.0}) continue;
        const double karg = std::ldexp(static_cast<double>(idx.k[i]), -idx.j);
        acc += sym * std::polar(1.0, -karg * xi) *
               std::polar(1.0, 2.0 * meyer::kPi * m * p / double(N));
      }
      w[p] = (acc * (std::exp2(-0.5 * idx.j) / L)).real();
    }
    axis[i] = std::move(w);
  }

  SampledField out;
  out.grid = grid;
  out.values.assign(grid.total_points(), 0.0);
  const std::size_t total = out.values.size();
  parallel_for(0, total, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t idx_flat = lo; idx_flat < hi; ++idx_flat) {
      std::size_t rem = idx_flat;
      double v = 1.0;
      for (int i = n - 1; i >= 0; --i) {
        v *= axis[i][rem % N];
        rem /= N;
      }
      out.values[idx_flat] = v;
    }
  });
  return out;
}

namespace {
std::mutex g_fftw_plan_mutex;
}

void fft_nd(std::complex<double>* data, std::span<const int> dims,
            bool inverse) {
  std::vector<int> nn(dims.begin(), dims.end());
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(g_fftw_plan_mutex);
    plan = fftw_plan_dft(static_cast<int>(nn.size()), nn.data(),
                         reinterpret_cast<fftw_complex*>(data),
                         reinterpret_cast<fftw_complex*>(data),
                         inverse ? FFTW_BACKWARD : FFTW_FORWARD,
                         FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lock(g_fftw_plan_mutex);
    fftw_destroy_plan(plan);
  }
}

}  // namespace cns
