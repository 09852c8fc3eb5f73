#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace latpp {

/// Upper bound from structure-function positivity:
/// R_F(alpha, d) = 1 / (1 + 2d|1-alpha|).
double rf_upper(double alpha, int dim);

/// General-method lower bound:
/// r_A = 1/(e(2d+1-2d*alpha)) for 0 <= alpha < 1, 1/alpha^(2d) for alpha >= 1.
/// Discontinuous at alpha = 1 (left limit 1/e, value 1); the boundary belongs
/// to the second branch.
double ra_lower(double alpha, int dim);

/// Explicit one-dimensional construction bound:
/// 1/(1+sqrt(1-alpha))^2 on [0,1/2), 1/(1+sqrt(2-2alpha)) on [1/2,1],
/// 1/(2alpha-1) for alpha >= 1.
double explicit_lower_1d(double alpha);

/// Product-construction lower bound for d >= 2: explicit_lower_1d(alpha)^d.
double rc_lower(double alpha, int dim);

struct CrossoverResult {
  int dim = 0;
  double alpha = 0.5;
  bool boundary = false;  // r_C >= r_A on all of [1/2, 1]
  double gap = 0.0;       // r_C - r_A at the returned alpha
};

/// Leftmost sign change of h(alpha) = r_C - r_A on [1/2, 1], located by a
/// 1e-3 pre-grid scan plus bisection; boundary flag when h >= 0 throughout.
CrossoverResult crossover_alpha(int dim, double tol = 1e-12);

struct YamadaWitness {
  enum class Kind { kNone, kPsd, kYamada };
  Kind kind = Kind::kNone;
  std::int64_t interval = 0;  // witnessing interval length (kYamada only)
  double rho = 0.0;           // smallest failing grid density above the bound
};

struct YamadaBound {
  double alpha = 0.0;
  int n_max = 256;
  double rho_step = 1e-4;
  /// Largest grid density passing both necessary conditions: structure-function
  /// positivity and the Yamada inequality on every interval n <= n_max.
  double r_y = 0.0;
  /// Largest grid density passing the Yamada clause alone (diagnostic; shows
  /// when the interval conditions bind at all).
  double yamada_only = 0.0;
  YamadaWitness witness;
};

/// Grid search over densities in (0, 1], monotone nonincreasing in n_max.
YamadaBound yamada_upper_1d(double alpha, int n_max = 256, double rho_step = 1e-4);

/// Cited reference interval for the maximal density at alpha = 0, d = 1:
/// lower 0.265 and upper (326 - sqrt(3115))/822, for report annotation only.
struct ReferenceConstants {
  double lower_1d_alpha0 = 0.0;
  double upper_1d_alpha0 = 0.0;
};
ReferenceConstants reference_constants();

struct BoundsReport {
  double alpha = 0.0;
  int dim = 1;
  double r_f = 0.0;
  double r_a = 0.0;
  std::optional<double> r_c;  // dim >= 2 only
  double lower_1d = 0.0;
  std::optional<double> ratio_c;  // r_c / r_f
  double ratio_a = 0.0;           // r_a / r_f; exactly 1/e for alpha < 1
};
BoundsReport bounds_report(double alpha, int dim);

struct Figure4Row {
  double alpha = 0.0;
  int dim = 2;
  double ratio_c = 0.0;
  double ratio_a = 0.0;
};

/// Multiples of step in [0, 1).
std::vector<double> alpha_grid(double step);

/// Rows sorted by (dim, alpha).
std::vector<Figure4Row> figure4_table(std::vector<int> dims, std::vector<double> alphas);

/// Delimited text with header "alpha,d,ratio_C,ratio_A", 12 significant digits.
void write_figure4(std::ostream& os, const std::vector<Figure4Row>& rows);

}  // namespace latpp
