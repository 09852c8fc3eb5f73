#include "latpp/block_factor.hpp"

#include <bit>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "latpp/detail/rng.hpp"
#include "latpp/errors.hpp"
#include "latpp/text_format.hpp"

namespace latpp {

namespace {

constexpr int kMaxWindow = 24;        // response table memory guard
constexpr int kEnumerationBits = 30;  // 2^30 weighted terms is the ceiling

// Bernoulli product weights indexed by popcount.
std::vector<long double> pattern_weights(double p, int bits) {
  std::vector<long double> w(static_cast<std::size_t>(bits) + 1);
  for (int ones = 0; ones <= bits; ++ones) {
    long double v = 1.0L;
    for (int i = 0; i < ones; ++i) v *= static_cast<long double>(p);
    for (int i = 0; i < bits - ones; ++i) v *= static_cast<long double>(1.0 - p);
    w[static_cast<std::size_t>(ones)] = v;
  }
  return w;
}

}  // namespace

BlockFactorProcess1D::BlockFactorProcess1D(int window, double driver_p,
                                           std::vector<double> response)
    : window_(window), driver_p_(driver_p), response_(std::move(response)) {
  if (window_ < 1) throw std::invalid_argument("BlockFactorProcess1D: window must be >= 1");
  if (window_ > kMaxWindow)
    throw std::invalid_argument("BlockFactorProcess1D: window exceeds table guard");
  if (!(driver_p_ >= 0.0 && driver_p_ <= 1.0))
    throw std::invalid_argument("BlockFactorProcess1D: driver_p must lie in [0,1]");
  if (response_.size() != (std::size_t{1} << window_))
    throw std::invalid_argument("BlockFactorProcess1D: response table must have 2^w entries");
  for (double q : response_)
    if (!(q >= 0.0 && q <= 1.0))
      throw std::invalid_argument("BlockFactorProcess1D: response entries must lie in [0,1]");
}

double exact_density(const BlockFactorProcess1D& proc) {
  const int w = proc.window();
  const auto weights = pattern_weights(proc.driver_p(), w);
  long double sum = 0.0L;
  const std::uint64_t table = std::uint64_t{1} << w;
  for (std::uint64_t b = 0; b < table; ++b)
    sum += weights[static_cast<std::size_t>(std::popcount(b))] * proc.response()[b];
  return static_cast<double>(sum);
}

double exact_lag_correlation(const BlockFactorProcess1D& proc, int lag,
                             bool force_enumeration) {
  if (lag < 0) throw std::invalid_argument("exact_lag_correlation: lag must be >= 0");
  const int w = proc.window();
  if (lag == 0) return exact_density(proc);
  if (lag >= w && !force_enumeration) {
    const double gamma = exact_density(proc);
    return gamma * gamma;
  }
  const int bits = w + lag;
  if (bits > kEnumerationBits)
    throw EnumerationLimit("exact_lag_correlation: w + lag = " + std::to_string(bits) +
                           " exceeds the enumeration guard of " +
                           std::to_string(kEnumerationBits));
  const auto weights = pattern_weights(proc.driver_p(), bits);
  const std::uint64_t mask = (std::uint64_t{1} << w) - 1;
  long double sum = 0.0L;
  const std::uint64_t patterns = std::uint64_t{1} << bits;
  for (std::uint64_t m = 0; m < patterns; ++m) {
    const double q0 = proc.response()[m & mask];
    if (q0 == 0.0) continue;
    const double q1 = proc.response()[(m >> lag) & mask];
    if (q1 == 0.0) continue;
    sum += weights[static_cast<std::size_t>(std::popcount(m))] * q0 * q1;
  }
  return static_cast<double>(sum);
}

BlockFactorProcess1D alpha0_exclusion_factor(double p) {
  if (!(p >= 0.0 && p <= 1.0))
    throw std::invalid_argument("alpha0_exclusion_factor: p must lie in [0,1]");
  std::vector<double> response(4, 0.0);
  response[1] = 1.0;  // pattern (X_i, X_{i+1}) = (1, 0)
  return BlockFactorProcess1D(2, p, std::move(response));
}

CorrelationProfile1D profile(const BlockFactorProcess1D& proc) {
  CorrelationProfile1D out;
  out.density = exact_density(proc);
  out.tail_value = out.density * out.density;
  const int w = proc.window();
  out.lag_values.reserve(static_cast<std::size_t>(w > 1 ? w - 1 : 0));
  for (int k = 1; k < w; ++k) out.lag_values.push_back(exact_lag_correlation(proc, k));
  const double lag1 = w > 1 ? out.lag_values[0] : out.tail_value;
  if (out.density > 0.0) out.alpha_hat = lag1 / out.tail_value;
  double residual = 0.0;
  for (int k = 2; k < w; ++k)
    residual = std::max(residual,
                        std::abs(out.lag_values[static_cast<std::size_t>(k - 1)] - out.tail_value));
  out.residual = residual;
  return out;
}

BlockFactorProcess1D thin(const BlockFactorProcess1D& proc, double t) {
  if (!(t >= 0.0 && t <= 1.0)) throw std::invalid_argument("thin: t must lie in [0,1]");
  std::vector<double> response = proc.response();
  for (double& q : response) q *= t;
  return BlockFactorProcess1D(proc.window(), proc.driver_p(), std::move(response));
}

std::vector<std::uint8_t> sample_path(const BlockFactorProcess1D& proc,
                                      std::int64_t n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("sample_path: n must be >= 1");
  const int w = proc.window();
  std::mt19937_64 gen(seed);
  std::vector<std::uint8_t> driver(static_cast<std::size_t>(n + w - 1));
  for (auto& bit : driver)
    bit = detail::bernoulli(gen, proc.driver_p()) ? std::uint8_t{1} : std::uint8_t{0};
  std::vector<std::uint8_t> path(static_cast<std::size_t>(n));
  for (std::int64_t i = 0; i < n; ++i) {
    std::uint64_t pattern = 0;
    for (int j = 0; j < w; ++j)
      pattern |= static_cast<std::uint64_t>(driver[static_cast<std::size_t>(i + j)]) << j;
    path[static_cast<std::size_t>(i)] =
        detail::bernoulli(gen, proc.response()[pattern]) ? std::uint8_t{1} : std::uint8_t{0};
  }
  return path;
}

void write_process(std::ostream& os, const BlockFactorProcess1D& proc) {
  const int w = proc.window();
  os << w << ' ' << fmt17(proc.driver_p()) << '\n';
  const std::uint64_t table = std::uint64_t{1} << w;
  for (std::uint64_t b = 0; b < table; ++b) {
    std::string bits(static_cast<std::size_t>(w), '0');
    for (int j = 0; j < w; ++j)
      if ((b >> j) & 1u) bits[static_cast<std::size_t>(j)] = '1';
    os << bits << ' ' << fmt17(proc.response()[b]) << '\n';
  }
}

std::string process_to_text(const BlockFactorProcess1D& proc) {
  std::ostringstream os;
  write_process(os, proc);
  return os.str();
}

namespace {

bool next_content_line(std::istream& is, std::string& line) {
  while (std::getline(is, line)) {
    std::size_t start = line.find_first_not_of(" \t\r");
    if (start == std::string::npos) continue;
    if (line[start] == '#') continue;
    return true;
  }
  return false;
}

}  // namespace

BlockFactorProcess1D process_from_text(std::istream& is) {
  std::string line;
  if (!next_content_line(is, line)) throw ParseError("process record: missing header line");
  std::istringstream head(line);
  int w = 0;
  double p = 0.0;
  if (!(head >> w >> p)) throw ParseError("process record: bad header line: " + line);
  if (w < 1 || w > kMaxWindow) throw ParseError("process record: bad window");
  const std::uint64_t table = std::uint64_t{1} << w;
  std::vector<double> response(table, 0.0);
  for (std::uint64_t b = 0; b < table; ++b) {
    if (!next_content_line(is, line))
      throw ParseError("process record: truncated response table");
    std::istringstream row(line);
    std::string bits;
    double value = 0.0;
    if (!(row >> bits >> value)) throw ParseError("process record: bad row: " + line);
    if (bits.size() != static_cast<std::size_t>(w))
      throw ParseError("process record: pattern width mismatch: " + line);
    std::uint64_t idx = 0;
    for (int j = 0; j < w; ++j) {
      const char c = bits[static_cast<std::size_t>(j)];
      if (c != '0' && c != '1') throw ParseError("process record: bad pattern bits: " + line);
      if (c == '1') idx |= std::uint64_t{1} << j;
    }
    if (idx != b) throw ParseError("process record: rows out of order: " + line);
    response[b] = value;
  }
  try {
    return BlockFactorProcess1D(w, p, std::move(response));
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("process record: ") + e.what());
  }
}

BlockFactorProcess1D process_from_text(const std::string& text) {
  std::istringstream is(text);
  return process_from_text(is);
}

}  // namespace latpp
