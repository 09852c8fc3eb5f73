#include "latpp/estimate.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "latpp/detail/parallel.hpp"
#include "latpp/detail/rng.hpp"
#include "latpp/text_format.hpp"

namespace latpp {

namespace {

constexpr std::uint64_t kThinningStreamTag = 0x7468696eull;  // distinct from sampling

struct ClassLayout {
  std::int64_t norm2 = 0;
  LatticeVector representative;
  std::vector<std::vector<std::int64_t>> displacements;
};

// All displacements with sup-norm <= radius, grouped by squared norm.
std::vector<ClassLayout> build_classes(int dim, int radius) {
  std::map<std::int64_t, ClassLayout> grouped;
  std::vector<std::int64_t> x(static_cast<std::size_t>(dim), -radius);
  while (true) {
    std::int64_t n2 = 0;
    for (std::int64_t c : x) n2 += c * c;
    auto [it, inserted] = grouped.try_emplace(n2);
    if (inserted) {
      it->second.norm2 = n2;
      it->second.representative = LatticeVector(x);
    }
    it->second.displacements.push_back(x);

    int m = 0;
    for (; m < dim; ++m) {
      if (++x[static_cast<std::size_t>(m)] <= radius) break;
      x[static_cast<std::size_t>(m)] = -radius;
    }
    if (m == dim) break;
  }
  std::vector<ClassLayout> classes;
  classes.reserve(grouped.size());
  for (auto& [n2, layout] : grouped) classes.push_back(std::move(layout));
  return classes;
}

double target_value(const RadialSpec& spec, std::int64_t norm2) {
  if (norm2 == 0) return spec.rho;
  const double rho2 = spec.rho * spec.rho;
  return norm2 == 1 ? spec.alpha * rho2 : rho2;
}

bool exact_match(double mean, double target) {
  return std::abs(mean - target) <= 1e-12 * std::max(1.0, std::abs(target));
}

using FieldMaker = std::function<FieldSample(int replica)>;

CorrelationEstimate estimate_with(const ProductProcessND& proc, const RadialSpec& target,
                                  const BoxRegion& box, int radius, int replicas,
                                  const FieldMaker& make_field) {
  if (box.dim() != proc.dim()) throw std::invalid_argument("estimate: box dimension mismatch");
  if (radius < 1) throw std::invalid_argument("estimate: radius must be >= 1");
  if (replicas < 2) throw std::invalid_argument("estimate: replicas must be >= 2");
  const int d = box.dim();
  std::vector<std::int64_t> core_sides(static_cast<std::size_t>(d));
  for (int m = 0; m < d; ++m) {
    core_sides[static_cast<std::size_t>(m)] = box.side_lengths[m] - 2 * radius;
    if (core_sides[static_cast<std::size_t>(m)] < 1)
      throw std::invalid_argument("estimate: core degenerate (box too small for radius)");
  }
  BoxRegion core(core_sides,
                 LatticeVector(std::vector<std::int64_t>(static_cast<std::size_t>(d), radius)));

  const std::vector<ClassLayout> classes = build_classes(d, radius);
  const std::size_t n_classes = classes.size();

  std::vector<std::size_t> stride(static_cast<std::size_t>(d), 1);
  for (int m = d - 2; m >= 0; --m)
    stride[static_cast<std::size_t>(m)] =
        stride[static_cast<std::size_t>(m + 1)] *
        static_cast<std::size_t>(box.side_lengths[m + 1]);

  // per-class flat offsets of each displacement (valid from any core site)
  std::vector<std::vector<std::ptrdiff_t>> offsets(n_classes);
  for (std::size_t c = 0; c < n_classes; ++c)
    for (const auto& disp : classes[c].displacements) {
      std::ptrdiff_t off = 0;
      for (int m = 0; m < d; ++m)
        off += static_cast<std::ptrdiff_t>(disp[static_cast<std::size_t>(m)]) *
               static_cast<std::ptrdiff_t>(stride[static_cast<std::size_t>(m)]);
      offsets[c].push_back(off);
    }

  double core_sites = 1.0;
  for (std::int64_t s : core_sides) core_sites *= static_cast<double>(s);

  // replica x class averages
  std::vector<std::vector<double>> replica_means(
      static_cast<std::size_t>(replicas), std::vector<double>(n_classes, 0.0));

  detail::parallel_for(static_cast<std::size_t>(replicas), [&](std::size_t r) {
    const FieldSample field = make_field(static_cast<int>(r));
    std::vector<double> sums(n_classes, 0.0);

    std::vector<std::int64_t> idx(static_cast<std::size_t>(d), radius);
    while (true) {
      std::size_t flat = 0;
      for (int m = 0; m < d; ++m)
        flat += static_cast<std::size_t>(idx[static_cast<std::size_t>(m)]) *
                stride[static_cast<std::size_t>(m)];
      if (field.values[flat]) {
        for (std::size_t c = 0; c < n_classes; ++c) {
          double s = 0.0;
          for (std::ptrdiff_t off : offsets[c])
            s += field.values[static_cast<std::size_t>(
                static_cast<std::ptrdiff_t>(flat) + off)];
          sums[c] += s;
        }
      }
      int m = 0;
      for (; m < d; ++m) {
        if (++idx[static_cast<std::size_t>(m)] < radius + core_sides[static_cast<std::size_t>(m)])
          break;
        idx[static_cast<std::size_t>(m)] = radius;
      }
      if (m == d) break;
    }
    for (std::size_t c = 0; c < n_classes; ++c)
      replica_means[r][c] =
          sums[c] / (core_sites * static_cast<double>(offsets[c].size()));
  });

  CorrelationEstimate est{target, box, core, radius, replicas, {}};
  est.classes.reserve(n_classes);
  for (std::size_t c = 0; c < n_classes; ++c) {
    ClassEstimate ce;
    ce.norm2 = classes[c].norm2;
    ce.representative = classes[c].representative;
    ce.pooled = static_cast<int>(classes[c].displacements.size());
    double sum = 0.0;
    for (int r = 0; r < replicas; ++r) sum += replica_means[static_cast<std::size_t>(r)][c];
    ce.mean = sum / replicas;
    double ss = 0.0;
    for (int r = 0; r < replicas; ++r) {
      const double dmean = replica_means[static_cast<std::size_t>(r)][c] - ce.mean;
      ss += dmean * dmean;
    }
    ce.stderr_ = std::sqrt(ss / (replicas - 1) / replicas);
    ce.target = target_value(target, ce.norm2);
    ce.zero_variance = ce.stderr_ == 0.0;
    ce.exact_match = ce.zero_variance && exact_match(ce.mean, ce.target);
    ce.z = ce.zero_variance ? 0.0 : (ce.mean - ce.target) / ce.stderr_;
    est.classes.push_back(std::move(ce));
  }
  return est;
}

}  // namespace

bool CorrelationEstimate::all_zero_variance() const {
  for (const ClassEstimate& c : classes)
    if (!c.zero_variance) return false;
  return true;
}

CorrelationEstimate estimate(const ProductProcessND& proc, const BoxRegion& box,
                             int radius, int replicas, std::uint64_t seed) {
  return estimate_with(proc, proc.target(), box, radius, replicas, [&](int replica) {
    return sample_box(proc, box,
                      detail::derive_seed(seed, {static_cast<std::uint64_t>(replica)}));
  });
}

ConsistencyReport consistency_test(const CorrelationEstimate& est, const RadialSpec& spec,
                                   double z_max) {
  if (spec.dim != est.target.dim)
    throw std::invalid_argument("consistency_test: dimension mismatch");
  if (!(z_max > 0.0)) throw std::invalid_argument("consistency_test: z_max must be > 0");
  if (est.all_zero_variance())
    throw std::invalid_argument(
        "consistency_test: degenerate estimate (zero replica variance in every class)");

  ConsistencyReport report;
  report.z_max = z_max;
  report.classes_tested = static_cast<int>(est.classes.size());
  report.pass = true;
  for (const ClassEstimate& c : est.classes) {
    ConsistencyRow row;
    row.norm2 = c.norm2;
    row.mean = c.mean;
    row.stderr_ = c.stderr_;
    row.target = target_value(spec, c.norm2);
    row.zero_variance = c.zero_variance;
    if (c.zero_variance) {
      row.exact_match = exact_match(c.mean, row.target);
      row.z = 0.0;
      row.pass = row.exact_match;  // mismatch fails explicitly, never z = inf
    } else {
      row.z = (c.mean - row.target) / c.stderr_;
      row.pass = std::abs(row.z) <= z_max;
    }
    report.pass = report.pass && row.pass;
    report.rows.push_back(row);
  }
  std::sort(report.rows.begin(), report.rows.end(),
            [](const ConsistencyRow& a, const ConsistencyRow& b) {
              const double sa = a.pass ? std::abs(a.z) : 1e300;
              const double sb = b.pass ? std::abs(b.z) : 1e300;
              if (sa != sb) return sa > sb;
              return std::abs(a.z) > std::abs(b.z);
            });
  std::ostringstream note;
  note << report.classes_tested
       << " classes tested simultaneously; with z_max=" << z_max
       << " occasional single-class excursions are expected at rate ~"
       << report.classes_tested << " * P(|Z|>" << z_max << ")";
  report.note = note.str();
  return report;
}

ThinningReport thinning_check(const ProductProcessND& proc, double t, const BoxRegion& box,
                              int radius, int replicas, std::uint64_t seed) {
  if (!(t >= 0.0 && t <= 1.0))
    throw std::invalid_argument("thinning_check: t must lie in [0,1]");
  const RadialSpec thinned(proc.alpha_hat(), t * proc.rho(), proc.dim());

  auto est = estimate_with(proc, thinned, box, radius, replicas, [&](int replica) {
    FieldSample field = sample_box(
        proc, box, detail::derive_seed(seed, {static_cast<std::uint64_t>(replica)}));
    if (t < 1.0) {
      std::mt19937_64 gen(detail::derive_seed(
          seed, {static_cast<std::uint64_t>(replica), kThinningStreamTag}));
      for (auto& v : field.values)
        if (v && !detail::bernoulli(gen, t)) v = 0;
    }
    return field;
  });
  ThinningReport report{t, std::move(est), false, std::nullopt, false};

  if (report.est.all_zero_variance()) {
    report.degenerate = true;
    report.pass = true;
    for (const ClassEstimate& c : report.est.classes)
      report.pass = report.pass && c.exact_match;
  } else {
    report.consistency = consistency_test(report.est, thinned);
    report.pass = report.consistency->pass;
  }
  return report;
}

namespace {

std::string class_label(std::int64_t norm2) {
  if (norm2 == 0) return "onsite";
  if (norm2 == 1) return "nearest";
  return "shell" + std::to_string(norm2);
}

std::string representative_label(const LatticeVector& v) {
  std::string s;
  for (int m = 0; m < v.dim(); ++m) {
    if (m) s += ';';
    s += std::to_string(v.coords[static_cast<std::size_t>(m)]);
  }
  return s;
}

}  // namespace

void write_estimate(std::ostream& os, const CorrelationEstimate& est) {
  os << "class,representative,estimate,stderr,target,z,status\n";
  for (const ClassEstimate& c : est.classes) {
    const char* status = !c.zero_variance        ? "ok"
                         : c.exact_match         ? "exact"
                                                 : "zero-variance-mismatch";
    os << class_label(c.norm2) << ',' << representative_label(c.representative) << ','
       << fmt12(c.mean) << ',' << fmt12(c.stderr_) << ',' << fmt12(c.target) << ','
       << fmt12(c.z) << ',' << status << '\n';
  }
}

std::string estimate_to_text(const CorrelationEstimate& est) {
  std::ostringstream os;
  write_estimate(os, est);
  return os.str();
}

}  // namespace latpp
