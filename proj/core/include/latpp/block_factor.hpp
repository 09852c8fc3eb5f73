#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace latpp {

/// Stationary binary process A on Z built from an i.i.d. Bernoulli(driver_p)
/// driver X: given the driver, each site independently sets A_i = 1 with
/// probability response[b], b the window pattern (X_i,...,X_{i+w-1}) read
/// little-endian (first window position = least significant bit).
///
/// Correlations vanish structurally beyond the window: for any lag >= w the
/// two windows are disjoint, so <A_0 A_lag> = density^2 exactly.
class BlockFactorProcess1D {
 public:
  BlockFactorProcess1D(int window, double driver_p, std::vector<double> response);

  int window() const { return window_; }
  double driver_p() const { return driver_p_; }
  const std::vector<double>& response() const { return response_; }

  bool operator==(const BlockFactorProcess1D&) const = default;

 private:
  int window_;
  double driver_p_;
  std::vector<double> response_;
};

struct CorrelationProfile1D {
  double density = 0.0;
  /// Exact values for lags 1..w-1 (enumerated). Every lag >= w equals
  /// tail_value = density^2.
  std::vector<double> lag_values;
  double tail_value = 0.0;
  /// lag_1 / density^2; absent when density == 0.
  std::optional<double> alpha_hat;
  /// max_{2 <= k < w} |lag_k - density^2|; 0 when the range is empty.
  double residual = 0.0;
};

/// <A_i> = sum_b P(b) response[b], accumulated in extended precision.
double exact_density(const BlockFactorProcess1D& proc);

/// <A_0 A_lag>. lag 0 returns the density (A^2 = A); 1 <= lag < w enumerates
/// the 2^(w+lag) joint driver patterns; lag >= w returns density^2 without
/// enumeration unless force_enumeration is set (test cross-check path).
/// Enumeration is refused when w + lag > 30.
double exact_lag_correlation(const BlockFactorProcess1D& proc, int lag,
                             bool force_enumeration = false);

/// The classical nearest-neighbor exclusion construction A_i = X_i(1-X_{i+1}):
/// window 2, deterministic response on pattern (1,0). Realizes density
/// p(1-p) with zero lag-1 correlation; maximal density 1/4 at p = 1/2.
BlockFactorProcess1D alpha0_exclusion_factor(double p);

CorrelationProfile1D profile(const BlockFactorProcess1D& proc);

/// Independent thinning: response scaled entrywise by t. Density scales to
/// t*density, every lag >= 1 scales by t^2, so the normalized profile (and
/// alpha_hat) is unchanged.
BlockFactorProcess1D thin(const BlockFactorProcess1D& proc, double t);

/// Draws n + w - 1 driver bits, then one uniform decision per site.
/// Identical seed implies identical output.
std::vector<std::uint8_t> sample_path(const BlockFactorProcess1D& proc,
                                      std::int64_t n, std::uint64_t seed);

/// Flat text record: line 1 "w driver_p", then 2^w lines "bits value" with
/// little-endian pattern bits and 17-significant-digit values. Round-trips
/// bit-exactly. Lines starting with '#' are ignored on input.
void write_process(std::ostream& os, const BlockFactorProcess1D& proc);
std::string process_to_text(const BlockFactorProcess1D& proc);
BlockFactorProcess1D process_from_text(std::istream& is);
BlockFactorProcess1D process_from_text(const std::string& text);

}  // namespace latpp
