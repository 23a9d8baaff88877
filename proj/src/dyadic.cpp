#include "cns/dyadic.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <set>

#include <json.hpp>

#include "cns/errors.hpp"

namespace cns {
namespace dyadic {

namespace {

// Gauss-Legendre nodes/weights on [-1, 1], computed once per order by
// Newton iteration on the Legendre recurrence.
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

GaussRule gauss_legendre(int order) {
  GaussRule rule;
  rule.nodes.resize(order);
  rule.weights.resize(order);
  for (int i = 0; i < order; ++i) {
    double x = std::cos(meyer::kPi * (i + 0.75) / (order + 0.5));
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int n = 2; n <= order; ++n) {
        const double p2 = ((2 * n - 1) * x * p1 - (n - 1) * p0) / n;
        p0 = p1;
        p1 = p2;
      }
      const double dp = order * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    double p0 = 1.0, p1 = x;
    for (int n = 2; n <= order; ++n) {
      const double p2 = ((2 * n - 1) * x * p1 - (n - 1) * p0) / n;
      p0 = p1;
      p1 = p2;
    }
    const double dp = order * (x * p1 - p0) / (x * x - 1.0);
    rule.nodes[i] = x;
    rule.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return rule;
}

long long floor_shift(long long k, int d) {
  // Arithmetic right shift is floor division by 2^d (two's complement).
  if (d >= 63) return k < 0 ? -1 : 0;
  return k >> d;
}

}  // namespace

double DyadicCube::side() const { return std::exp2(-j); }

double DyadicCube::volume() const {
  return std::exp2(-static_cast<double>(dimension()) * j);
}

bool DyadicCube::contains(const DyadicCube& fine) const {
  if (fine.dimension() != dimension()) {
    throw ParamError("cube containment: dimension mismatch");
  }
  if (fine.j < j) return false;
  const int d = fine.j - j;
  for (int i = 0; i < dimension(); ++i) {
    if (floor_shift(fine.k[i], d) != k[i]) return false;
  }
  return true;
}

void CoefficientField::validate() const {
  for (const auto& [idx, value] : entries) {
    if (idx.dimension() != n || static_cast<int>(idx.k.size()) != n) {
      throw ParamError("coefficient field: entry dimension != n");
    }
  }
}

void SpaceParams::validate() const {
  if (!(q >= 1.0)) {
    throw ParamError("space parameter q must satisfy 1 <= q <= inf");
  }
}

namespace {

double root_quantity(const CoefficientField& field, const SpaceParams& params,
                     const DyadicCube& root) {
  const int n = field.n;
  if (params.q_infinite()) {
    double sup = 0.0;
    for (const auto& [idx, value] : field.entries) {
      if (!root.contains(index_cube(idx))) continue;
      sup = std::max(sup,
                     std::exp2(idx.j * (params.gamma + 0.5 * n)) *
                         std::abs(value));
    }
    return sup;
  }
  const double q = params.q;
  double sum = 0.0;
  for (const auto& [idx, value] : field.entries) {
    if (!root.contains(index_cube(idx))) continue;
    const double weight = idx.j * q * (params.gamma + 0.5 * n - n / q);
    const double mag =
        q == 2.0 ? value * value : std::pow(std::abs(value), q);
    sum += std::exp2(weight) * mag;
  }
  if (sum == 0.0) return 0.0;
  const double scaled = std::exp2(static_cast<double>(n) * root.j) * sum;
  return q == 2.0 ? std::sqrt(scaled) : std::pow(scaled, 1.0 / q);
}

}  // namespace

double tl_norm(const CoefficientField& field, const SpaceParams& params,
               std::span<const DyadicCube> roots) {
  if (roots.empty()) {
    throw ParamError("tl_norm: root cube list must be nonempty");
  }
  params.validate();
  field.validate();
  double sup = 0.0;
  for (const auto& root : roots) {
    sup = std::max(sup, root_quantity(field, params, root));
  }
  return sup;
}

std::vector<std::pair<DyadicCube, double>> tl_norm_breakdown(
    const CoefficientField& field, const SpaceParams& params,
    std::span<const DyadicCube> roots) {
  if (roots.empty()) {
    throw ParamError("tl_norm: root cube list must be nonempty");
  }
  params.validate();
  field.validate();
  std::vector<std::pair<DyadicCube, double>> out;
  out.reserve(roots.size());
  for (const auto& root : roots) {
    out.emplace_back(root, root_quantity(field, params, root));
  }
  return out;
}

std::vector<DyadicCube> root_candidates(const CoefficientField& field) {
  field.validate();
  if (field.entries.empty()) return {};
  // Candidates: every entry cube and its ancestors down to a scale coarse
  // enough to merge any mergeable pair. The supremum over all dyadic cubes
  // of a finite table is attained on dyadic hulls of entry subsets, and
  // every hull is an ancestor of some entry.
  int j_min = field.entries.front().first.j;
  long long spread = 1;
  for (const auto& [idx, value] : field.entries) {
    j_min = std::min(j_min, idx.j);
    for (long long ki : idx.k) {
      spread = std::max(spread, std::llabs(ki) + 1);
    }
  }
  int depth = 1;
  while ((1LL << depth) < spread && depth < 62) ++depth;
  const int j_floor = j_min - depth - 1;

  std::set<std::pair<int, std::vector<long long>>> seen;
  std::vector<DyadicCube> out;
  for (const auto& [idx, value] : field.entries) {
    DyadicCube cube = index_cube(idx);
    while (cube.j >= j_floor) {
      if (seen.insert({cube.j, cube.k}).second) out.push_back(cube);
      DyadicCube up;
      up.j = cube.j - 1;
      up.k.resize(cube.k.size());
      for (std::size_t i = 0; i < cube.k.size(); ++i) {
        up.k[i] = floor_shift(cube.k[i], 1);
      }
      cube = std::move(up);
    }
  }
  return out;
}

TableTimeField::TableTimeField(CoefficientField table)
    : table_(std::move(table)) {
  table_.validate();
}

std::vector<std::vector<int>> TableTimeField::channels() const {
  std::set<std::vector<int>> eps_set;
  for (const auto& [idx, value] : table_.entries) eps_set.insert(idx.eps);
  return {eps_set.begin(), eps_set.end()};
}

std::pair<int, int> TableTimeField::active_scales(double) const {
  if (table_.entries.empty()) return {1, 0};
  int lo = table_.entries.front().first.j;
  int hi = lo;
  for (const auto& [idx, value] : table_.entries) {
    lo = std::min(lo, idx.j);
    hi = std::max(hi, idx.j);
  }
  return {lo, hi};
}

double TableTimeField::coeff(double, const WaveletIndex& idx) const {
  for (const auto& [entry, value] : table_.entries) {
    if (entry == idx) return value;
  }
  return 0.0;
}

namespace {

// sum over channels and scales j in [max(active_lo, j0), active_hi] of
// weight(j) * sum_{Q_{j,k} subset Q_{j0,k0}} |coeff|^2.
double cube_sum(const TimeField& field, double t, int j0,
                std::span<const long long> k0,
                const std::function<double(int)>& weight) {
  const int n = field.dimension();
  if (static_cast<int>(k0.size()) != n) {
    throw ParamError("root cube index dimension != field dimension");
  }
  const DyadicCube root(j0, {k0.begin(), k0.end()});

  if (const CoefficientField* table = field.table()) {
    double sum = 0.0;
    for (const auto& [idx, value] : table->entries) {
      if (!root.contains(index_cube(idx))) continue;
      sum += weight(idx.j) * (value * value);
    }
    return sum;
  }

  auto [lo, hi] = field.active_scales(t);
  lo = std::max(lo, j0);
  double sum = 0.0;
  for (int j = lo; j <= hi; ++j) {
    const int d = j - j0;
    if (field.constant_in_k()) {
      // Coefficients constant in k: the 2^{n(j-j0)} contained subcubes
      // contribute identically, so any representative k works.
      WaveletIndex idx;
      idx.j = j;
      idx.k.assign(n, 0);
      if (d < 62) {
        for (int i = 0; i < n; ++i) idx.k[i] = k0[i] << d;
      }
      const double count = std::exp2(static_cast<double>(n) * d);
      for (const auto& eps : field.channels()) {
        idx.eps = eps;
        const double a = field.coeff(t, idx);
        sum += weight(j) * count * (a * a);
      }
      continue;
    }
    if (static_cast<double>(n) * d > 24) {
      throw ParamError(
          "cube enumeration too large for a k-dependent field (scale span " +
          std::to_string(d) + ")");
    }
    // Enumerate the contained subcubes k in prod_i [k0_i 2^d, (k0_i+1) 2^d).
    WaveletIndex idx;
    idx.j = j;
    idx.k.assign(n, 0);
    std::vector<long long> cursor(n, 0);
    const long long span = 1LL << d;
    for (const auto& eps : field.channels()) {
      idx.eps = eps;
      std::fill(cursor.begin(), cursor.end(), 0);
      while (true) {
        for (int i = 0; i < n; ++i) idx.k[i] = (k0[i] << d) + cursor[i];
        const double a = field.coeff(t, idx);
        if (a != 0.0) sum += weight(j) * (a * a);
        int axis = n - 1;
        while (axis >= 0 && ++cursor[axis] == span) {
          cursor[axis] = 0;
          --axis;
        }
        if (axis < 0) break;
      }
    }
  }
  return sum;
}

}  // namespace

double fixed_time_bmo_quantity(const TimeField& field, double t, int j0,
                               std::span<const long long> k0) {
  if (!(t > 0.0) || t > 1.0) {
    throw ParamError("fixed_time_bmo_quantity requires 0 < t <= 1");
  }
  if (j0 < 0) throw ParamError("fixed_time_bmo_quantity requires j0 >= 0");
  const double sum = cube_sum(field, t, j0, k0,
                              [](int j) { return std::exp2(-2.0 * j); });
  return std::exp2(static_cast<double>(field.dimension()) * j0) * sum;
}

namespace {

double band_integral(const TimeField& field, int j0,
                     std::span<const long long> k0, double t_lo, double t_hi,
                     const GaussRule& rule) {
  const double mid = 0.5 * (t_lo + t_hi);
  const double half = 0.5 * (t_hi - t_lo);
  double acc = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double t = mid + half * rule.nodes[i];
    acc += rule.weights[i] *
           cube_sum(field, t, j0, k0, [](int) { return 1.0; });
  }
  return acc * half;
}

double adaptive_midpoint(const TimeField& field, int j0,
                         std::span<const long long> k0, double t_lo,
                         double t_hi, double rel_tol) {
  // Composite midpoint with doubling; the integrand is assumed smooth on
  // the interval (fields without declared breakpoints).
  const auto integrand = [&](double t) {
    return cube_sum(field, t, j0, k0, [](int) { return 1.0; });
  };
  double prev = 0.0;
  int cells = 8;
  for (int level = 0; level < 16; ++level, cells *= 2) {
    const double h = (t_hi - t_lo) / cells;
    double acc = 0.0;
    for (int c = 0; c < cells; ++c) {
      acc += integrand(t_lo + (c + 0.5) * h);
    }
    acc *= h;
    if (level > 1 && std::abs(acc - prev) <=
                         rel_tol * std::max(std::abs(acc), 1e-300)) {
      return acc;
    }
    prev = acc;
  }
  return prev;
}

}  // namespace

QuadratureResult carleson_time_quantity(const TimeField& field, int j0,
                                        std::span<const long long> k0,
                                        const QuadratureSpec& spec) {
  if (j0 < 0) throw ParamError("carleson_time_quantity requires j0 >= 0");
  const double prefactor =
      std::exp2(static_cast<double>(field.dimension()) * j0);

  QuadratureResult result;
  if (!field.dyadic_breakpoints()) {
    result.value = prefactor * adaptive_midpoint(field, j0, k0, 0.0,
                                                 std::exp2(-2.0 * j0),
                                                 spec.midpoint_rel_tol);
    result.tail_bound = spec.midpoint_rel_tol * std::abs(result.value);
    result.bands = 0;
    return result;
  }

  const GaussRule rule = gauss_legendre(spec.gauss_order);
  // Integrate over dyadic bands (4^{-(m+1)}, 4^{-m}] from t = 4^{-j0} down,
  // stopping once the geometric tail estimate is below rel_tol.
  double value = 0.0;
  double prev1 = -1.0, prev2 = -1.0;  // last two nonzero band contributions
  int grow_streak = 0;
  int bands = 0;
  bool saw_activity = false;
  for (int m = j0; m < j0 + spec.max_bands; ++m) {
    const double t_hi = std::exp2(-2.0 * m);
    if (t_hi <= std::numeric_limits<double>::min()) break;  // band underflow
    const double t_lo = 0.25 * t_hi;
    const double contrib = band_integral(field, j0, k0, t_lo, t_hi, rule);
    ++bands;
    value += contrib;
    if (contrib <= 0.0) {
      if (saw_activity && value > 0.0) {
        // Field switched off for good only if it declares so; keep probing a
        // few bands before trusting a zero contribution.
        if (prev1 == 0.0) {
          result.value = prefactor * value;
          result.tail_bound = 0.0;
          result.bands = bands;
          return result;
        }
      }
      prev2 = prev1;
      prev1 = contrib;
      continue;
    }
    saw_activity = true;
    if (prev1 > 0.0) {
      const double ratio = contrib / prev1;
      grow_streak = ratio >= 1.0 ? grow_streak + 1 : 0;
      if (grow_streak >= 12) {
        throw QuadratureDivergence(
            "band contributions do not decay: time integral diverges");
      }
      double rho = ratio;
      if (prev2 > 0.0) rho = std::max(rho, prev1 / prev2);
      if (rho < 1.0) {
        const double tail = contrib * rho / (1.0 - rho);
        if (tail <= spec.rel_tol * value) {
          result.value = prefactor * value;
          result.tail_bound = prefactor * tail;
          result.bands = bands;
          return result;
        }
      }
    }
    prev2 = prev1;
    prev1 = contrib;
  }
  if (prev1 > 0.0 && prev2 > 0.0 && prev1 >= prev2) {
    throw QuadratureDivergence(
        "band contributions do not decay: time integral diverges");
  }
  result.value = prefactor * value;
  result.tail_bound = prev1 > 0.0 && prev2 > 0.0
                          ? prefactor * prev1 * (prev1 / prev2) /
                                (1.0 - prev1 / prev2)
                          : 0.0;
  result.bands = bands;
  return result;
}

double n_infty(std::span<const TimeSample> samples) {
  double sup = 0.0;
  for (const auto& sample : samples) {
    if (!(sample.t > 0.0)) {
      throw ParamError("n_infty: time grid must be positive");
    }
    sup = std::max(sup, std::sqrt(sample.t) * sample.field.max_abs());
  }
  return sup;
}

CoefficientField read_coefficient_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open coefficient table: " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw IoError("coefficient table parse error in " + path + ": " +
                  e.what());
  }
  if (!doc.is_object() || !doc.contains("n")) {
    throw IoError("coefficient table missing required key \"n\"");
  }
  if (!doc.contains("entries") || !doc["entries"].is_array()) {
    throw IoError("coefficient table missing required key \"entries\"");
  }
  CoefficientField field;
  field.n = doc["n"].get<int>();
  field.provenance = CoefficientField::Provenance::kExplicitTable;
  for (const auto& item : doc["entries"]) {
    if (!item.contains("eps") || !item.contains("j") || !item.contains("k") ||
        !item.contains("value")) {
      throw IoError("coefficient entry missing one of eps/j/k/value");
    }
    WaveletIndex idx;
    idx.eps = item["eps"].get<std::vector<int>>();
    idx.j = item["j"].get<int>();
    idx.k = item["k"].get<std::vector<long long>>();
    field.entries.emplace_back(std::move(idx), item["value"].get<double>());
  }
  field.validate();
  return field;
}

void write_coefficient_table(const CoefficientField& field,
                             const std::string& path) {
  nlohmann::ordered_json doc;
  doc["n"] = field.n;
  doc["entries"] = nlohmann::ordered_json::array();
  for (const auto& [idx, value] : field.entries) {
    nlohmann::ordered_json entry;
    entry["eps"] = idx.eps;
    entry["j"] = idx.j;
    entry["k"] = idx.k;
    entry["value"] = value;
    doc["entries"].push_back(std::move(entry));
  }
  std::ofstream out(path);
  if (!out) throw IoError("cannot write coefficient table: " + path);
  out << doc.dump(2) << "\n";
}

}  // namespace dyadic
}  // namespace cns
