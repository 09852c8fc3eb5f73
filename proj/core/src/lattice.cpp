#include "latpp/lattice.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace latpp {

LatticeVector operator-(const LatticeVector& a, const LatticeVector& b) {
  if (a.dim() != b.dim())
    throw std::invalid_argument("LatticeVector: dimension mismatch");
  LatticeVector r;
  r.coords.reserve(a.coords.size());
  for (int m = 0; m < a.dim(); ++m) r.coords.push_back(a.coords[m] - b.coords[m]);
  return r;
}

RadialSpec::RadialSpec(double alpha_, double rho_, int dim_)
    : alpha(alpha_), rho(rho_), dim(dim_) {
  if (!(alpha >= 0.0)) throw std::invalid_argument("RadialSpec: alpha must be >= 0");
  if (!(rho >= 0.0 && rho <= 1.0))
    throw std::invalid_argument("RadialSpec: rho must lie in [0,1]");
  if (dim < 1) throw std::invalid_argument("RadialSpec: dim must be >= 1");
}

BoxRegion::BoxRegion(std::vector<std::int64_t> sides)
    : BoxRegion(std::move(sides), LatticeVector{}) {}

BoxRegion::BoxRegion(std::vector<std::int64_t> sides, LatticeVector origin_)
    : side_lengths(std::move(sides)), origin(std::move(origin_)) {
  if (side_lengths.empty()) throw std::invalid_argument("BoxRegion: dim must be >= 1");
  for (std::int64_t s : side_lengths)
    if (s < 1) throw std::invalid_argument("BoxRegion: side lengths must be >= 1");
  if (origin.coords.empty()) origin.coords.assign(side_lengths.size(), 0);
  if (origin.dim() != dim())
    throw std::invalid_argument("BoxRegion: origin dimension mismatch");
}

namespace {

// Products of side lengths can exceed 2^63 for large boxes; accumulate in
// 128-bit and fall back to long double only past that.
long double product_of(const std::vector<std::int64_t>& v, int skip = -1) {
  unsigned __int128 acc = 1;
  bool overflow = false;
  for (int m = 0; m < static_cast<int>(v.size()); ++m) {
    if (m == skip) continue;
    unsigned __int128 next = acc * static_cast<unsigned __int128>(v[m]);
    if (v[m] != 0 && next / static_cast<unsigned __int128>(v[m]) != acc) {
      overflow = true;
      break;
    }
    acc = next;
  }
  if (!overflow) return static_cast<long double>(acc);
  long double r = 1.0L;
  for (int m = 0; m < static_cast<int>(v.size()); ++m) {
    if (m == skip) continue;
    r *= static_cast<long double>(v[m]);
  }
  return r;
}

}  // namespace

double BoxRegion::site_count() const {
  return static_cast<double>(product_of(side_lengths));
}

double BoxRegion::nearest_neighbor_pairs() const {
  long double total = 0.0L;
  for (int m = 0; m < dim(); ++m)
    total += static_cast<long double>(side_lengths[m] - 1) * product_of(side_lengths, m);
  return static_cast<double>(total);
}

double g_alpha(double alpha, const LatticeVector& x) {
  if (!(alpha >= 0.0)) throw std::invalid_argument("g_alpha: alpha must be >= 0");
  if (x.dim() == 0) throw std::invalid_argument("g_alpha: dimension-zero vector");
  const std::int64_t n2 = x.norm2();
  if (n2 == 0) return 0.0;
  if (n2 == 1) return alpha;
  return 1.0;
}

double f_alpha(double alpha, const WaveVector& k) {
  double cos_sum = 0.0;
  for (double kj : k.components) cos_sum += std::cos(kj);
  return 1.0 - 2.0 * (alpha - 1.0) * cos_sum;
}

double f_alpha_max(double alpha, int dim) {
  return 1.0 + 2.0 * dim * std::abs(1.0 - alpha);
}

double structure_function(const RadialSpec& spec, const WaveVector& k) {
  if (k.dim() != spec.dim)
    throw std::invalid_argument("structure_function: wave vector dimension mismatch");
  return spec.rho * (1.0 - spec.rho * f_alpha(spec.alpha, k));
}

double psd_margin(const RadialSpec& spec) {
  return 1.0 / f_alpha_max(spec.alpha, spec.dim) - spec.rho;
}

double number_variance(const RadialSpec& spec, const BoxRegion& box) {
  if (box.dim() != spec.dim)
    throw std::invalid_argument("number_variance: box dimension mismatch");
  const double pairs = box.nearest_neighbor_pairs();
  return spec.rho * box.site_count() +
         2.0 * spec.rho * spec.rho * (spec.alpha - 1.0) * pairs;
}

bool yamada_holds(const RadialSpec& spec, const BoxRegion& box) {
  const double mean = spec.rho * box.site_count();
  const double theta = mean - std::floor(mean);
  return number_variance(spec, box) >= theta * (1.0 - theta);
}

namespace {

// Per-component grid on [0, pi]: coarse interior plus geometric refinement at
// both endpoints, where the extrema of f_alpha sit.
std::vector<double> refined_axis_grid() {
  constexpr double pi = std::numbers::pi;
  std::vector<double> pts;
  for (double eps : {0.0, 1e-6, 1e-4, 1e-3, 1e-2, 1e-1}) {
    pts.push_back(eps);
    pts.push_back(pi - eps);
  }
  const int coarse = 13;
  for (int i = 1; i < coarse; ++i) pts.push_back(pi * i / coarse);
  return pts;
}

template <typename Visit>
void for_each_grid_point(int dim, Visit&& visit) {
  const std::vector<double> axis = refined_axis_grid();
  std::vector<std::size_t> idx(static_cast<std::size_t>(dim), 0);
  WaveVector k;
  k.components.assign(static_cast<std::size_t>(dim), 0.0);
  while (true) {
    for (int m = 0; m < dim; ++m) k.components[m] = axis[idx[m]];
    visit(k);
    int m = 0;
    for (; m < dim; ++m) {
      if (++idx[m] < axis.size()) break;
      idx[m] = 0;
    }
    if (m == dim) break;
  }
}

}  // namespace

double max_f_alpha_on_grid(double alpha, int dim) {
  double best = -std::numeric_limits<double>::infinity();
  for_each_grid_point(dim, [&](const WaveVector& k) {
    best = std::max(best, f_alpha(alpha, k));
  });
  return best;
}

double min_structure_function_on_grid(const RadialSpec& spec) {
  double best = std::numeric_limits<double>::infinity();
  for_each_grid_point(spec.dim, [&](const WaveVector& k) {
    best = std::min(best, structure_function(spec, k));
  });
  return best;
}

}  // namespace latpp
