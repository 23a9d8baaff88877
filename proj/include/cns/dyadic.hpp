#pragma once

#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "cns/grid.hpp"
#include "cns/meyer.hpp"

namespace cns {
namespace dyadic {

/// Q_{j,k} = 2^{-j} k + 2^{-j} [0,1]^n; side 2^{-j}, volume 2^{-nj}.
struct DyadicCube {
  int j = 0;
  std::vector<long long> k;

  DyadicCube() = default;
  DyadicCube(int j_, std::vector<long long> k_) : j(j_), k(std::move(k_)) {}

  int dimension() const { return static_cast<int>(k.size()); }
  double side() const;
  double volume() const;

  /// True iff `fine` lies inside this cube: fine.j >= j and
  /// floor(fine.k_i / 2^{fine.j - j}) == k_i per axis.
  bool contains(const DyadicCube& fine) const;
};

inline DyadicCube index_cube(const WaveletIndex& idx) {
  return DyadicCube(idx.j, idx.k);
}

/// Finite table of wavelet coefficients a^{eps}_{j,k}.
struct CoefficientField {
  enum class Provenance { kExplicitTable, kAnalyticGenerator };

  int n = 1;
  std::vector<std::pair<WaveletIndex, double>> entries;
  Provenance provenance = Provenance::kExplicitTable;

  void validate() const;  // all indices share n
};

/// Regularity index gamma and integrability q in [1, inf].
struct SpaceParams {
  double gamma = -1.0;
  double q = 2.0;

  bool q_infinite() const { return std::isinf(q); }
  void validate() const;
};

/// sup over root cubes Q of
///   { |Q|^{-1} sum_{(eps,j,k): Q_{j,k} subset Q} 2^{jq(gamma+n/2-n/q)}
///     |a|^q }^{1/q},
/// with the q = inf reading sup 2^{j(gamma+n/2)} |a| over the cube.
/// roots must be nonempty.
double tl_norm(const CoefficientField& field, const SpaceParams& params,
               std::span<const DyadicCube> roots);

/// Per-root breakdown of tl_norm (same value = max over the entries).
std::vector<std::pair<DyadicCube, double>> tl_norm_breakdown(
    const CoefficientField& field, const SpaceParams& params,
    std::span<const DyadicCube> roots);

/// Candidate root cubes for a finite table: every entry cube plus its
/// ancestors up to the coarsest scale that can merge distinct entries.
std::vector<DyadicCube> root_candidates(const CoefficientField& field);

/// Time-dependent coefficient family a^{eps}_{j,k}(t), one vector component.
/// Implementations are immutable and evaluation is pure.
class TimeField {
 public:
  virtual ~TimeField() = default;

  virtual int dimension() const = 0;
  /// Populated eps channels (each nonzero).
  virtual std::vector<std::vector<int>> channels() const = 0;
  /// Inclusive scale range with nonzero coefficients at time t;
  /// {lo > hi} means inactive.
  virtual std::pair<int, int> active_scales(double t) const = 0;
  virtual double coeff(double t, const WaveletIndex& idx) const = 0;
  /// Coefficients independent of k (enables the 2^{n(j-j0)} subcube count).
  virtual bool constant_in_k() const { return false; }
  /// Piecewise-smooth in t with breakpoints exactly at t = 4^{-m}.
  virtual bool dyadic_breakpoints() const { return false; }
  /// Explicit entry table, when the field is backed by one.
  virtual const CoefficientField* table() const { return nullptr; }
};

/// Time-independent adapter around a coefficient table.
class TableTimeField final : public TimeField {
 public:
  explicit TableTimeField(CoefficientField table);

  int dimension() const override { return table_.n; }
  std::vector<std::vector<int>> channels() const override;
  std::pair<int, int> active_scales(double t) const override;
  double coeff(double t, const WaveletIndex& idx) const override;
  const CoefficientField* table() const override { return &table_; }

 private:
  CoefficientField table_;
};

struct QuadratureSpec {
  double rel_tol = 1e-9;  // truncation target for the band tail
  int gauss_order = 32;   // nodes per dyadic band
  int max_bands = 512;
  double midpoint_rel_tol = 1e-6;  // fallback for fields without breakpoints
};

struct QuadratureResult {
  double value = 0.0;
  double tail_bound = 0.0;
  int bands = 0;
};

/// 2^{n j0} int_0^{4^{-j0}} sum_{Q_{j,k} subset Q_{j0,k0}} |a(t)|^2 dt,
/// summed over the field's channels. Dyadic-piecewise Gauss quadrature when
/// the field declares breakpoints at t = 4^{-m}; adaptive composite midpoint
/// otherwise. Throws QuadratureDivergence when band contributions fail to
/// decay.
QuadratureResult carleson_time_quantity(const TimeField& field, int j0,
                                        std::span<const long long> k0,
                                        const QuadratureSpec& spec = {});

/// 2^{n j0} sum_{Q_{j,k} subset Q_{j0,k0}} 2^{-2j} |a(t)|^2 over the field's
/// channels: the squared fixed-time quantity on root Q_{j0,k0}. 0 < t <= 1.
double fixed_time_bmo_quantity(const TimeField& field, double t, int j0,
                               std::span<const long long> k0);

/// One time slice of a sampled field.
struct TimeSample {
  double t = 0.0;
  SampledField field;
};

/// max over samples of t^{1/2} * max |values|; a lower bound for the
/// weighted sup norm, to be paired with an analytic upper bound.
double n_infty(std::span<const TimeSample> samples);

/// Coefficient-table JSON: {"n": int, "entries": [{"eps": [...], "j": int,
/// "k": [...], "value": float}, ...]}.
CoefficientField read_coefficient_table(const std::string& path);
void write_coefficient_table(const CoefficientField& field,
                             const std::string& path);

}  // namespace dyadic
}  // namespace cns
