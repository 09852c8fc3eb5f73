#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "latpp/lattice.hpp"
#include "latpp/product_process.hpp"

namespace latpp {

/// One displacement class: norm2 = 0 is the on-site/density row, norm2 = 1
/// pools the 2d unit vectors, larger values pool the shell of that squared
/// norm inside the sup-ball. +x and -x always land in the same class.
struct ClassEstimate {
  std::int64_t norm2 = 0;
  LatticeVector representative;
  int pooled = 0;  // displacements pooled into the class
  double mean = 0.0;
  double stderr_ = 0.0;  // replica-to-replica deviation, divisor replicas-1
  double target = 0.0;
  double z = 0.0;  // 0 when zero_variance and the target matches exactly
  bool zero_variance = false;
  bool exact_match = false;
};

struct CorrelationEstimate {
  RadialSpec target;
  BoxRegion box;
  BoxRegion core;  // box shrunk by the radius on every side
  int radius = 0;
  int replicas = 0;
  std::vector<ClassEstimate> classes;  // norm2 ascending; front() is on-site

  const ClassEstimate& density() const { return classes.front(); }
  bool all_zero_variance() const;
};

/// Per replica, samples the box and averages P_i and P_i P_{i+x} over the
/// interior core for every displacement with sup-norm <= radius; means and
/// standard errors are taken across replicas. Per-replica seeds derive from
/// (seed, replica), so results are bit-identical under any schedule.
CorrelationEstimate estimate(const ProductProcessND& proc, const BoxRegion& box,
                             int radius, int replicas, std::uint64_t seed);

struct ConsistencyRow {
  std::int64_t norm2 = 0;
  double mean = 0.0;
  double stderr_ = 0.0;
  double target = 0.0;
  double z = 0.0;
  bool zero_variance = false;
  bool exact_match = false;
  bool pass = false;
};

struct ConsistencyReport {
  bool pass = false;
  double z_max = 4.0;
  int classes_tested = 0;
  std::string note;  // multiple-comparison note
  std::vector<ConsistencyRow> rows;  // sorted worst first
};

/// Pass iff every class z-score (recomputed against the given spec) stays
/// within z_max. Zero-variance classes pass only on an exact target match;
/// a mismatch is reported explicitly, never as a silent infinite z. Rejects
/// estimates whose classes all have zero replica variance.
ConsistencyReport consistency_test(const CorrelationEstimate& est, const RadialSpec& spec,
                                   double z_max = 4.0);

struct ThinningReport {
  double t = 1.0;
  CorrelationEstimate est;  // computed against (t*rho, alpha)
  bool degenerate = false;  // all classes zero variance (t = 0, full lattice)
  std::optional<ConsistencyReport> consistency;
  bool pass = false;
};

/// Thins each sampled field sitewise (occupied sites kept with probability t)
/// and checks density t*rho with the radial profile unchanged.
ThinningReport thinning_check(const ProductProcessND& proc, double t, const BoxRegion& box,
                              int radius, int replicas, std::uint64_t seed);

/// Delimited rows: class label, displacement representative, estimate,
/// standard error, target, z-score.
void write_estimate(std::ostream& os, const CorrelationEstimate& est);
std::string estimate_to_text(const CorrelationEstimate& est);

}  // namespace latpp
