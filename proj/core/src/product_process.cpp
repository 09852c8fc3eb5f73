#include "latpp/product_process.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "latpp/detail/rng.hpp"
#include "latpp/errors.hpp"

namespace latpp {

namespace {

constexpr double kProfileResidualTol = 1e-9;

}  // namespace

ProductProcessND::ProductProcessND(BlockFactorProcess1D axis, int dim,
                                   CorrelationProfile1D axis_profile)
    : axis_(std::move(axis)), dim_(dim), profile_(std::move(axis_profile)) {
  rho_ = 1.0;
  for (int m = 0; m < dim_; ++m) rho_ *= profile_.density;
  alpha_hat_ = profile_.alpha_hat.value_or(1.0);
}

ProductProcessND realize(const BlockFactorProcess1D& proc1d, int dim) {
  if (dim < 2) throw std::invalid_argument("realize: dim must be >= 2");
  CorrelationProfile1D prof = profile(proc1d);
  if (prof.residual > kProfileResidualTol)
    throw std::invalid_argument(
        "realize: 1D profile is not of g^(alpha) form (lag residual " +
        std::to_string(prof.residual) + ")");
  return ProductProcessND(proc1d, dim, std::move(prof));
}

namespace {

double axis_lag_value(const ProductProcessND& proc, std::int64_t lag) {
  const CorrelationProfile1D& prof = proc.axis_profile();
  if (lag == 0) return prof.density;
  const std::int64_t w = proc.axis_process().window();
  if (lag < w) return prof.lag_values[static_cast<std::size_t>(lag - 1)];
  return prof.tail_value;
}

}  // namespace

double axis_pair_expectation(const ProductProcessND& proc, int axis,
                             const LatticeVector& i, const LatticeVector& j) {
  if (axis < 1 || axis > proc.dim())
    throw std::invalid_argument("axis_pair_expectation: axis must lie in 1..dim");
  if (i.dim() != proc.dim() || j.dim() != proc.dim())
    throw std::invalid_argument("axis_pair_expectation: vector dimension mismatch");
  const int a = axis - 1;
  for (int m = 0; m < proc.dim(); ++m) {
    if (m == a) continue;
    if (i.coords[m] != j.coords[m]) return proc.gamma() * proc.gamma();
  }
  return axis_lag_value(proc, std::abs(i.coords[a] - j.coords[a]));
}

double exact_pair_expectation(const ProductProcessND& proc, const LatticeVector& i,
                              const LatticeVector& j) {
  if (i.dim() != proc.dim() || j.dim() != proc.dim())
    throw std::invalid_argument("exact_pair_expectation: vector dimension mismatch");
  double value = 1.0;
  for (int m = 1; m <= proc.dim(); ++m) value *= axis_pair_expectation(proc, m, i, j);
  return value;
}

VerifyReport verify_against_target(const ProductProcessND& proc, int radius) {
  if (radius < 2) throw std::invalid_argument("verify_against_target: radius must be >= 2");
  const int d = proc.dim();
  const RadialSpec target = proc.target();
  const double rho2 = target.rho * target.rho;

  // key: coordinate magnitudes sorted descending (the symmetry class of the
  // product expectation under sign flips and axis permutations)
  std::map<std::vector<std::int64_t>, DeviationRow> classes;

  LatticeVector x;
  x.coords.assign(static_cast<std::size_t>(d), -radius);
  const LatticeVector origin_vec{std::vector<std::int64_t>(static_cast<std::size_t>(d), 0)};
  while (true) {
    const double value = exact_pair_expectation(proc, x, origin_vec);
    const std::int64_t n2 = x.norm2();
    const double want = n2 == 0 ? target.rho : (n2 == 1 ? target.alpha * rho2 : rho2);

    std::vector<std::int64_t> key(x.coords);
    for (auto& c : key) c = std::llabs(c);
    std::sort(key.begin(), key.end(), std::greater<>());

    auto [it, inserted] = classes.try_emplace(key);
    DeviationRow& row = it->second;
    if (inserted) {
      row.representative = x;
      row.norm2 = n2;
      row.value = value;
      row.target = want;
      row.deviation = std::abs(value - want);
    } else {
      row.deviation = std::max(row.deviation, std::abs(value - want));
    }
    ++row.class_size;

    int m = 0;
    for (; m < d; ++m) {
      if (++x.coords[m] <= radius) break;
      x.coords[m] = -radius;
    }
    if (m == d) break;
  }

  VerifyReport report{target, radius, 0.0, {}};
  report.rows.reserve(classes.size());
  for (auto& [key, row] : classes) report.rows.push_back(std::move(row));
  std::sort(report.rows.begin(), report.rows.end(),
            [](const DeviationRow& a, const DeviationRow& b) {
              return a.norm2 < b.norm2;
            });
  for (const DeviationRow& row : report.rows)
    report.max_deviation = std::max(report.max_deviation, row.deviation);
  return report;
}

std::size_t FieldSample::flat_index(const std::vector<std::int64_t>& idx) const {
  std::size_t flat = 0;
  for (int m = 0; m < box.dim(); ++m)
    flat = flat * static_cast<std::size_t>(box.side_lengths[m]) +
           static_cast<std::size_t>(idx[static_cast<std::size_t>(m)]);
  return flat;
}

FieldSample sample_box(const ProductProcessND& proc, const BoxRegion& box,
                       std::uint64_t seed) {
  if (box.dim() != proc.dim()) throw std::invalid_argument("sample_box: box dimension mismatch");
  const int d = box.dim();
  const auto& sides = box.side_lengths;

  std::size_t total = 1;
  for (std::int64_t s : sides) total *= static_cast<std::size_t>(s);

  // strides for row-major layout, last axis fastest
  std::vector<std::size_t> stride(static_cast<std::size_t>(d), 1);
  for (int m = d - 2; m >= 0; --m)
    stride[static_cast<std::size_t>(m)] =
        stride[static_cast<std::size_t>(m + 1)] * static_cast<std::size_t>(sides[m + 1]);

  FieldSample field{box, std::vector<std::uint8_t>(total, 1)};

  std::vector<std::int64_t> line_coord(static_cast<std::size_t>(d), 0);
  for (int a = 0; a < d; ++a) {
    std::uint64_t line_index = 0;
    std::fill(line_coord.begin(), line_coord.end(), 0);
    while (true) {
      std::size_t base = 0;
      for (int m = 0; m < d; ++m)
        if (m != a)
          base += static_cast<std::size_t>(line_coord[static_cast<std::size_t>(m)]) *
                  stride[static_cast<std::size_t>(m)];

      const std::uint64_t line_seed = detail::derive_seed(
          seed, {static_cast<std::uint64_t>(a), line_index});
      const std::vector<std::uint8_t> path =
          sample_path(proc.axis_process(), sides[a], line_seed);
      for (std::int64_t t = 0; t < sides[a]; ++t)
        field.values[base + static_cast<std::size_t>(t) * stride[static_cast<std::size_t>(a)]] &=
            path[static_cast<std::size_t>(t)];

      ++line_index;
      int m = d - 1;
      for (; m >= 0; --m) {
        if (m == a) continue;
        if (++line_coord[static_cast<std::size_t>(m)] < sides[m]) break;
        line_coord[static_cast<std::size_t>(m)] = 0;
      }
      if (m < 0) break;
    }
  }
  return field;
}

void write_field(std::ostream& os, const FieldSample& field) {
  const int d = field.box.dim();
  os << d;
  for (std::int64_t s : field.box.side_lengths) os << ' ' << s;
  os << '\n';
  const std::size_t run = static_cast<std::size_t>(field.box.side_lengths[d - 1]);
  for (std::size_t start = 0; start < field.values.size(); start += run) {
    std::string line(run, '0');
    for (std::size_t t = 0; t < run; ++t)
      if (field.values[start + t]) line[t] = '1';
    os << line << '\n';
  }
}

std::string field_to_text(const FieldSample& field) {
  std::ostringstream os;
  write_field(os, field);
  return os.str();
}

namespace {

bool next_content_line(std::istream& is, std::string& line) {
  while (std::getline(is, line)) {
    std::size_t start = line.find_first_not_of(" \t\r");
    if (start == std::string::npos) continue;
    if (line[start] == '#') continue;
    if (line.ends_with("\r")) line.pop_back();
    return true;
  }
  return false;
}

}  // namespace

FieldSample field_from_text(std::istream& is) {
  std::string line;
  if (!next_content_line(is, line)) throw ParseError("field sample: missing header");
  std::istringstream head(line);
  int d = 0;
  if (!(head >> d) || d < 1) throw ParseError("field sample: bad dimension");
  std::vector<std::int64_t> sides(static_cast<std::size_t>(d));
  for (auto& s : sides)
    if (!(head >> s) || s < 1) throw ParseError("field sample: bad side lengths");

  BoxRegion box(sides);
  std::size_t total = 1;
  for (std::int64_t s : sides) total *= static_cast<std::size_t>(s);
  FieldSample field{box, std::vector<std::uint8_t>(total, 0)};

  const std::size_t run = static_cast<std::size_t>(sides[static_cast<std::size_t>(d - 1)]);
  for (std::size_t start = 0; start < total; start += run) {
    if (!next_content_line(is, line)) throw ParseError("field sample: truncated data");
    if (line.size() != run) throw ParseError("field sample: bad run length: " + line);
    for (std::size_t t = 0; t < run; ++t) {
      if (line[t] == '1')
        field.values[start + t] = 1;
      else if (line[t] != '0')
        throw ParseError("field sample: bad character in data row");
    }
  }
  return field;
}

FieldSample field_from_text(const std::string& text) {
  std::istringstream is(text);
  return field_from_text(is);
}

}  // namespace latpp
