#pragma once

#include <complex>
#include <span>
#include <vector>

#include "cns/meyer.hpp"

namespace cns {

/// Periodic sampling box: n axes, side length box_side, points_per_side
/// samples per axis (a power of two, >= 8). Grid sampling targets n <= 3.
struct GridSpec {
  int n = 1;
  double box_side = 1.0;
  int points_per_side = 256;

  void validate() const;  // throws ParamError
  std::size_t total_points() const;
  double spacing() const { return box_side / points_per_side; }
};

/// Real samples on a grid, row-major with axis 0 slowest.
struct SampledField {
  GridSpec grid;
  std::vector<double> values;

  double max_abs() const;
  /// (box_side/N)^n * sum of values.
  double box_integral() const;
};

/// Smallest admissible points_per_side resolving scale j on a box: the dual
/// lattice must cover [-2^j 8pi/3, 2^j 8pi/3] per axis.
int min_points_per_side(int j, double box_side);

/// Throws NyquistError (naming the minimal adequate resolution) if the grid
/// cannot resolve scale j.
void require_resolves_scale(const GridSpec& grid, int j);

/// Samples of the box periodization of Phi^eps_{j,k}, synthesized exactly on
/// the grid's dual lattice (no aliasing at admissible resolutions).
SampledField sample_wavelet(const meyer::MeyerProfile& profile,
                            const WaveletIndex& idx, const GridSpec& grid);

/// In-place complex DFT on an n-dimensional row-major array.
/// inverse = false: X_m = sum_p x_p e^{-2pi i m.p/N} (unnormalized);
/// inverse = true : x_p = sum_m X_m e^{+2pi i m.p/N}.
void fft_nd(std::complex<double>* data, std::span<const int> dims,
            bool inverse);

}  // namespace cns
