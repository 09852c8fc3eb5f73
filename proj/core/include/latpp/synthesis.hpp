#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "latpp/block_factor.hpp"

namespace latpp {

enum class SynthesisMode {
  kMaximizeDensity,  // objective -density subject to the profile constraints
  kHitDensity,       // density target joins the constraint set
};

struct SynthesisOptions {
  double alpha_target = 0.0;
  int window = 2;
  SynthesisMode mode = SynthesisMode::kMaximizeDensity;
  double gamma_target = 0.0;  // kHitDensity only, must lie in (0,1)
  double tol = 1e-6;
  std::uint64_t seed = 1;
  int starts = 32;
};

struct SynthesisReport {
  int starts = 0;
  long long iterations = 0;  // inner descent iterations summed over starts
  double best_residual = 0.0;
  double achieved_gamma = 0.0;
  int winning_start = -1;
  bool feasible = false;
};

struct SynthesisResult {
  BlockFactorProcess1D process;
  CorrelationProfile1D profile;
  SynthesisReport report;
};

/// No start reached residual <= tol; carries the best attempt.
class InfeasibleAtWindow : public std::runtime_error {
 public:
  InfeasibleAtWindow(const std::string& what, SynthesisReport report)
      : std::runtime_error(what), report_(report) {}
  const SynthesisReport& report() const { return report_; }

 private:
  SynthesisReport report_;
};

/// Searches (driver_p, response table) for a window-w process whose profile is
/// g^(alpha): lag_1 = alpha*density^2, lag_k = density^2 for 2 <= k < w, plus
/// the density target (kHitDensity) or -density as the objective
/// (kMaximizeDensity). Penalty-method projected descent with central-difference
/// gradients; `starts` independent multi-starts with per-start seed
/// seed XOR start index. The returned process is re-verified through the
/// enumeration oracle; throws InfeasibleAtWindow when no start reaches tol.
SynthesisResult synthesize(const SynthesisOptions& options);

}  // namespace latpp
