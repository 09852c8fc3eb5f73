#include "latpp/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include "latpp/lattice.hpp"
#include "latpp/text_format.hpp"

namespace latpp {

namespace {

void check_alpha_dim(double alpha, int dim, const char* who) {
  if (!(alpha >= 0.0)) throw std::invalid_argument(std::string(who) + ": alpha must be >= 0");
  if (dim < 1) throw std::invalid_argument(std::string(who) + ": dim must be >= 1");
}

}  // namespace

double rf_upper(double alpha, int dim) {
  check_alpha_dim(alpha, dim, "rf_upper");
  return 1.0 / (1.0 + 2.0 * dim * std::abs(1.0 - alpha));
}

double ra_lower(double alpha, int dim) {
  check_alpha_dim(alpha, dim, "ra_lower");
  if (alpha >= 1.0) return 1.0 / std::pow(alpha, 2.0 * dim);
  return 1.0 / (std::numbers::e * (2.0 * dim + 1.0 - 2.0 * dim * alpha));
}

double explicit_lower_1d(double alpha) {
  if (!(alpha >= 0.0)) throw std::invalid_argument("explicit_lower_1d: alpha must be >= 0");
  if (alpha < 0.5) {
    const double s = 1.0 + std::sqrt(1.0 - alpha);
    return 1.0 / (s * s);
  }
  if (alpha <= 1.0) return 1.0 / (1.0 + std::sqrt(2.0 - 2.0 * alpha));
  return 1.0 / (2.0 * alpha - 1.0);
}

double rc_lower(double alpha, int dim) {
  if (dim < 2) throw std::invalid_argument("rc_lower: dim must be >= 2");
  return std::pow(explicit_lower_1d(alpha), dim);
}

CrossoverResult crossover_alpha(int dim, double tol) {
  if (dim < 2) throw std::invalid_argument("crossover_alpha: dim must be >= 2");
  if (!(tol > 0.0)) throw std::invalid_argument("crossover_alpha: tol must be > 0");
  const auto h = [dim](double a) { return rc_lower(a, dim) - ra_lower(a, dim); };

  constexpr double kPreStep = 1e-3;
  const int steps = static_cast<int>(std::round(0.5 / kPreStep));
  double prev_a = 0.5;
  double prev_h = h(prev_a);
  double lo = 0.0, hi = 0.0;
  bool bracketed = false;
  for (int k = 1; k <= steps; ++k) {
    const double a = k == steps ? 1.0 : 0.5 + k * kPreStep;
    const double ha = h(a);
    if ((prev_h < 0.0) != (ha < 0.0)) {
      lo = prev_a;
      hi = a;
      bracketed = true;
      break;
    }
    prev_a = a;
    prev_h = ha;
  }
  if (!bracketed) {
    // no sign change scanned; h(1) = 0, so h >= 0 throughout means the
    // construction bound dominates on the whole interval
    return CrossoverResult{dim, 0.5, true, h(0.5)};
  }

  double hlo = h(lo);
  double mid = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    mid = 0.5 * (lo + hi);
    const double hm = h(mid);
    if (std::abs(hm) <= tol || hi - lo < 4.0 * std::numeric_limits<double>::epsilon())
      return CrossoverResult{dim, mid, false, hm};
    if ((hm < 0.0) == (hlo < 0.0)) {
      lo = mid;
      hlo = hm;
    } else {
      hi = mid;
    }
  }
  return CrossoverResult{dim, mid, false, h(mid)};
}

YamadaBound yamada_upper_1d(double alpha, int n_max, double rho_step) {
  if (!(alpha >= 0.0)) throw std::invalid_argument("yamada_upper_1d: alpha must be >= 0");
  if (n_max < 2) throw std::invalid_argument("yamada_upper_1d: n_max must be >= 2");
  if (!(rho_step > 0.0 && rho_step <= 1.0))
    throw std::invalid_argument("yamada_upper_1d: rho_step must lie in (0,1]");

  YamadaBound out;
  out.alpha = alpha;
  out.n_max = n_max;
  out.rho_step = rho_step;

  const auto yamada_all_intervals = [&](double rho, std::int64_t* failing_n) {
    for (std::int64_t n = 1; n <= n_max; ++n) {
      const double var =
          rho * static_cast<double>(n) +
          2.0 * rho * rho * (alpha - 1.0) * static_cast<double>(n - 1);
      const double mean = rho * static_cast<double>(n);
      const double theta = mean - std::floor(mean);
      if (var < theta * (1.0 - theta)) {
        if (failing_n) *failing_n = n;
        return false;
      }
    }
    return true;
  };

  const double psd_cap = rf_upper(alpha, 1);
  const std::int64_t grid_points =
      static_cast<std::int64_t>(std::floor((1.0 + 1e-9) / rho_step));

  bool have_joint_failure_above_best = false;
  for (std::int64_t k = 1; k <= grid_points; ++k) {
    const double rho = std::min(1.0, static_cast<double>(k) * rho_step);
    std::int64_t failing_n = 0;
    const bool yamada_ok = yamada_all_intervals(rho, &failing_n);
    const bool psd_ok = rho <= psd_cap;
    if (yamada_ok) out.yamada_only = rho;
    if (yamada_ok && psd_ok) {
      out.r_y = rho;
      have_joint_failure_above_best = false;
    } else if (!have_joint_failure_above_best) {
      have_joint_failure_above_best = true;
      out.witness.rho = rho;
      if (!yamada_ok) {
        out.witness.kind = YamadaWitness::Kind::kYamada;
        out.witness.interval = failing_n;
      } else {
        out.witness.kind = YamadaWitness::Kind::kPsd;
        out.witness.interval = 0;
      }
    }
  }
  if (!have_joint_failure_above_best) out.witness = YamadaWitness{};
  return out;
}

ReferenceConstants reference_constants() {
  ReferenceConstants c;
  c.lower_1d_alpha0 = 0.265;
  c.upper_1d_alpha0 = (326.0 - std::sqrt(3115.0)) / 822.0;
  return c;
}

BoundsReport bounds_report(double alpha, int dim) {
  check_alpha_dim(alpha, dim, "bounds_report");
  BoundsReport r;
  r.alpha = alpha;
  r.dim = dim;
  r.r_f = rf_upper(alpha, dim);
  r.r_a = ra_lower(alpha, dim);
  r.lower_1d = explicit_lower_1d(alpha);
  r.ratio_a = r.r_a / r.r_f;
  if (dim >= 2) {
    r.r_c = rc_lower(alpha, dim);
    r.ratio_c = *r.r_c / r.r_f;
  }
  return r;
}

std::vector<double> alpha_grid(double step) {
  if (!(step > 0.0 && step <= 0.5))
    throw std::invalid_argument("alpha_grid: step must lie in (0, 0.5]");
  std::vector<double> grid;
  for (std::int64_t k = 0;; ++k) {
    const double a = static_cast<double>(k) * step;
    if (a >= 1.0 - 1e-9) break;
    grid.push_back(a);
  }
  return grid;
}

std::vector<Figure4Row> figure4_table(std::vector<int> dims, std::vector<double> alphas) {
  std::sort(dims.begin(), dims.end());
  std::sort(alphas.begin(), alphas.end());
  for (int d : dims)
    if (d < 2) throw std::invalid_argument("figure4_table: dims must be >= 2");
  for (double a : alphas)
    if (!(a >= 0.0 && a < 1.0))
      throw std::invalid_argument("figure4_table: alpha grid must lie in [0,1)");
  std::vector<Figure4Row> rows;
  rows.reserve(dims.size() * alphas.size());
  for (int d : dims)
    for (double a : alphas) {
      const double rf = rf_upper(a, d);
      rows.push_back(Figure4Row{a, d, rc_lower(a, d) / rf, ra_lower(a, d) / rf});
    }
  return rows;
}

void write_figure4(std::ostream& os, const std::vector<Figure4Row>& rows) {
  os << "alpha,d,ratio_C,ratio_A\n";
  for (const Figure4Row& row : rows)
    os << fmt12(row.alpha) << ',' << row.dim << ',' << fmt12(row.ratio_c) << ','
       << fmt12(row.ratio_a) << '\n';
}

}  // namespace latpp
