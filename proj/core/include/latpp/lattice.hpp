#pragma once

#include <cstdint>
#include <vector>

namespace latpp {

/// Integer displacement on Z^d, one unit per lattice spacing.
struct LatticeVector {
  std::vector<std::int64_t> coords;

  LatticeVector() = default;
  explicit LatticeVector(std::vector<std::int64_t> c) : coords(std::move(c)) {}

  int dim() const { return static_cast<int>(coords.size()); }

  /// Exact squared Euclidean norm (integer arithmetic, no rounding).
  std::int64_t norm2() const {
    std::int64_t s = 0;
    for (std::int64_t c : coords) s += c * c;
    return s;
  }

  bool is_zero() const {
    for (std::int64_t c : coords)
      if (c != 0) return false;
    return true;
  }

  LatticeVector operator-() const {
    LatticeVector r(*this);
    for (auto& c : r.coords) c = -c;
    return r;
  }

  friend LatticeVector operator-(const LatticeVector& a, const LatticeVector& b);
  friend bool operator==(const LatticeVector& a, const LatticeVector& b) {
    return a.coords == b.coords;
  }
};

LatticeVector operator-(const LatticeVector& a, const LatticeVector& b);

/// Target correlation pair: density rho and the radial distribution that is 0
/// on-site, alpha at the 2d nearest neighbors and 1 beyond.
struct RadialSpec {
  double alpha = 0.0;
  double rho = 0.0;
  int dim = 1;

  RadialSpec(double alpha_, double rho_, int dim_);
};

/// Axis-aligned finite window on Z^d.
struct BoxRegion {
  std::vector<std::int64_t> side_lengths;
  LatticeVector origin;

  explicit BoxRegion(std::vector<std::int64_t> sides);
  BoxRegion(std::vector<std::int64_t> sides, LatticeVector origin_);

  int dim() const { return static_cast<int>(side_lengths.size()); }

  /// Product of side lengths, guarded against 64-bit overflow.
  double site_count() const;

  /// Unordered nearest-neighbor pairs inside the box:
  /// sum over axes m of (L_m - 1) * prod_{m' != m} L_{m'}.
  double nearest_neighbor_pairs() const;
};

/// Point of the reciprocal torus, radians per lattice spacing.
struct WaveVector {
  std::vector<double> components;

  WaveVector() = default;
  explicit WaveVector(std::vector<double> c) : components(std::move(c)) {}
  int dim() const { return static_cast<int>(components.size()); }
};

/// Radial distribution value: 0 at the origin, alpha on the 2d unit vectors,
/// 1 everywhere else. Rejects dimension-zero vectors.
double g_alpha(double alpha, const LatticeVector& x);

/// f_alpha(k) = 1 - 2(alpha-1) sum_j cos(k_j). Its maximum over R^d is
/// 1 + 2d|1-alpha|, at k=0 for alpha<1 and k=(pi,...,pi) for alpha>1.
double f_alpha(double alpha, const WaveVector& k);

/// Closed-form maximum of f_alpha over R^d.
double f_alpha_max(double alpha, int dim);

/// Structure function S(k) = rho * (1 - rho * f_alpha(k)); nonnegativity for
/// all k is necessary for realizability.
double structure_function(const RadialSpec& spec, const WaveVector& k);

/// 1/f_alpha_max - rho: nonnegative iff the positivity condition holds.
double psd_margin(const RadialSpec& spec);

/// rho|Box| + rho^2 * sum_{x != y in Box} (g_alpha(x-y) - 1)
///   = rho|Box| + 2 rho^2 (alpha-1) * (nearest-neighbor pairs in Box).
double number_variance(const RadialSpec& spec, const BoxRegion& box);

/// Yamada inequality: number_variance >= theta(1-theta) with theta the
/// fractional part of rho|Box|.
bool yamada_holds(const RadialSpec& spec, const BoxRegion& box);

/// Maximum of f_alpha over a per-component grid on [0, pi] refined near the
/// endpoints; cross-check for f_alpha_max.
double max_f_alpha_on_grid(double alpha, int dim);

/// Minimum of the structure function over the same refined grid.
double min_structure_function_on_grid(const RadialSpec& spec);

}  // namespace latpp
