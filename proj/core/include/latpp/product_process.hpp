#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "latpp/block_factor.hpp"
#include "latpp/lattice.hpp"

namespace latpp {

/// d independent families of axis-aligned 1D processes combined by sitewise
/// product. Family m is the set of lines parallel to axis m, one independent
/// 1D process per line; all families share the same 1D parameters and draw
/// from distinct seed streams. Realizes density gamma^d with the axis
/// process's radial profile.
class ProductProcessND {
 public:
  ProductProcessND(BlockFactorProcess1D axis, int dim, CorrelationProfile1D axis_profile);

  int dim() const { return dim_; }
  const BlockFactorProcess1D& axis_process() const { return axis_; }
  const CorrelationProfile1D& axis_profile() const { return profile_; }
  double gamma() const { return profile_.density; }
  double rho() const { return rho_; }
  /// alpha realized by the axis profile; 1 by convention for the empty process.
  double alpha_hat() const { return alpha_hat_; }
  RadialSpec target() const { return RadialSpec(alpha_hat_, rho_, dim_); }

 private:
  BlockFactorProcess1D axis_;
  int dim_;
  CorrelationProfile1D profile_;
  double rho_;
  double alpha_hat_;
};

/// Builds the product process from a 1D process whose profile is of g^(alpha)
/// form (lags 2..w-1 equal density^2 within 1e-9); rejects anything else.
ProductProcessND realize(const BlockFactorProcess1D& proc1d, int dim);

/// <B^(m)_i B^(m)_j> for the family of lines parallel to axis m (1-based):
/// gamma^2 when any coordinate off axis m differs (independent lines),
/// otherwise the 1D value at lag |i_m - j_m|.
double axis_pair_expectation(const ProductProcessND& proc, int axis,
                             const LatticeVector& i, const LatticeVector& j);

/// <P_i P_j> = product over axes of axis_pair_expectation.
double exact_pair_expectation(const ProductProcessND& proc, const LatticeVector& i,
                              const LatticeVector& j);

struct DeviationRow {
  LatticeVector representative;
  std::int64_t norm2 = 0;
  int class_size = 0;  // displacements sharing the |coordinate| multiset
  double value = 0.0;
  double target = 0.0;
  double deviation = 0.0;
};

struct VerifyReport {
  RadialSpec target;
  int radius = 0;
  double max_deviation = 0.0;
  std::vector<DeviationRow> rows;  // one per displacement class, norm2 ascending
};

/// Evaluates exact_pair_expectation on the sup-norm ball of the given radius
/// and compares against the closed targets (rho on-site, alpha*rho^2 on unit
/// vectors, rho^2 beyond). Displacements are grouped by the multiset of
/// coordinate magnitudes, the symmetry of the product expectation.
VerifyReport verify_against_target(const ProductProcessND& proc, int radius);

/// Binary occupation field on a finite box, row-major with the last axis
/// fastest.
struct FieldSample {
  BoxRegion box;
  std::vector<std::uint8_t> values;

  std::size_t flat_index(const std::vector<std::int64_t>& idx) const;
};

/// Samples the box: for each axis, one independent 1D path per line (driver
/// extended w-1 beyond the line so every site has a full window), then the
/// sitewise product. Per-line seeds derive from (seed, axis, line index), so
/// the sample is reproducible and schedule-independent.
FieldSample sample_box(const ProductProcessND& proc, const BoxRegion& box,
                       std::uint64_t seed);

/// Header "d L_1 ... L_d", then one 0/1 line per last-axis run. Bit-exact
/// round-trip; '#' lines ignored on input.
void write_field(std::ostream& os, const FieldSample& field);
std::string field_to_text(const FieldSample& field);
FieldSample field_from_text(std::istream& is);
FieldSample field_from_text(const std::string& text);

}  // namespace latpp
