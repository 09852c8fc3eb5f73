#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "latpp/errors.hpp"
#include "latpp/product_process.hpp"

using namespace latpp;

namespace {

LatticeVector vec(std::vector<std::int64_t> c) { return LatticeVector(std::move(c)); }

// Exact window-2 fixture with alpha = 0.75, gamma = 0.3: p = 1/2,
// q(1,0) = 0.9, q(0,1) = 0.3 gives lag1 = 0.9*0.3/4 = alpha*gamma^2.
BlockFactorProcess1D alpha075_fixture() {
  return BlockFactorProcess1D(2, 0.5, {0.0, 0.9, 0.3, 0.0});
}

BlockFactorProcess1D ones_process(int w) {
  return BlockFactorProcess1D(w, 0.5, std::vector<double>(std::size_t{1} << w, 1.0));
}

double closed_target(const ProductProcessND& proc, const LatticeVector& x) {
  const std::int64_t n2 = x.norm2();
  if (n2 == 0) return proc.rho();
  const double rho2 = proc.rho() * proc.rho();
  return n2 == 1 ? proc.alpha_hat() * rho2 : rho2;
}

}  // namespace

TEST_CASE("realize density is gamma to the d") {
  CHECK(realize(alpha0_exclusion_factor(0.5), 2).rho() == 0.0625);
  CHECK(realize(alpha0_exclusion_factor(0.5), 3).rho() == 0.015625);
  CHECK(realize(ones_process(1), 3).rho() == 1.0);
  const auto fx = realize(alpha075_fixture(), 2);
  CHECK(fx.gamma() == doctest::Approx(0.3).epsilon(1e-15));
  CHECK(fx.alpha_hat() == doctest::Approx(0.75).epsilon(1e-12));
}

TEST_CASE("realize rejects inputs outside the profile family") {
  CHECK_THROWS_AS(realize(alpha0_exclusion_factor(0.5), 1), std::invalid_argument);
  // A_i = X_i AND X_{i+2}: lag-2 correlation p^3 differs from gamma^2 = p^4
  std::vector<double> and_gate(8, 0.0);
  for (std::uint64_t b = 0; b < 8; ++b)
    if ((b & 1u) && (b & 4u)) and_gate[b] = 1.0;
  CHECK_THROWS_AS(realize(BlockFactorProcess1D(3, 0.5, and_gate), 2),
                  std::invalid_argument);
}

TEST_CASE("realize accepts the empty process") {
  const auto empty = realize(BlockFactorProcess1D(2, 0.5, std::vector<double>(4, 0.0)), 2);
  CHECK(empty.rho() == 0.0);
  CHECK(empty.alpha_hat() == 1.0);  // conventional; every pair target is 0
}

TEST_CASE("axis pair expectations split by line membership") {
  const auto proc = realize(alpha075_fixture(), 2);
  const double g2 = proc.gamma() * proc.gamma();

  // family 1 runs along axis 1; (3,4) and (5,4) share the line, lag 2
  CHECK(axis_pair_expectation(proc, 1, vec({3, 4}), vec({5, 4})) == g2);
  // (3,4) and (3,5) sit on different axis-1 lines
  CHECK(axis_pair_expectation(proc, 1, vec({3, 4}), vec({3, 5})) == g2);
  // same axis-2 line at lag 1: alpha * gamma^2
  CHECK(axis_pair_expectation(proc, 2, vec({3, 4}), vec({3, 5})) ==
        doctest::Approx(0.0675).epsilon(1e-12));
  // same site
  CHECK(axis_pair_expectation(proc, 1, vec({3, 4}), vec({3, 4})) == proc.gamma());
  CHECK(axis_pair_expectation(proc, 2, vec({3, 4}), vec({3, 4})) == proc.gamma());

  CHECK_THROWS_AS(axis_pair_expectation(proc, 0, vec({0, 0}), vec({0, 0})),
                  std::invalid_argument);
  CHECK_THROWS_AS(axis_pair_expectation(proc, 3, vec({0, 0}), vec({0, 0})),
                  std::invalid_argument);
  CHECK_THROWS_AS(axis_pair_expectation(proc, 1, vec({0}), vec({0, 0})),
                  std::invalid_argument);
}

TEST_CASE("pair expectation reproduces the four-case table") {
  const auto excl = realize(alpha0_exclusion_factor(0.5), 2);
  const LatticeVector origin = vec({0, 0});
  CHECK(exact_pair_expectation(excl, origin, origin) == 0.0625);
  CHECK(exact_pair_expectation(excl, vec({0, 1}), origin) == 0.0);
  CHECK(exact_pair_expectation(excl, vec({1, 0}), origin) == 0.0);
  CHECK(exact_pair_expectation(excl, vec({1, 1}), origin) == 0.00390625);
  CHECK(exact_pair_expectation(excl, vec({1, 2}), origin) == 0.00390625);
  CHECK(exact_pair_expectation(excl, vec({2, 1}), origin) == 0.00390625);
  CHECK(exact_pair_expectation(excl, vec({0, 2}), origin) == 0.00390625);

  for (const auto& fixture : {alpha0_exclusion_factor(0.5), alpha075_fixture()}) {
    const auto proc = realize(fixture, 2);
    for (std::int64_t x1 = -3; x1 <= 3; ++x1)
      for (std::int64_t x2 = -3; x2 <= 3; ++x2) {
        const LatticeVector x = vec({x1, x2});
        CHECK(exact_pair_expectation(proc, x, origin) ==
              doctest::Approx(closed_target(proc, x)).epsilon(1e-12));
      }
  }
}

TEST_CASE("verification against the closed targets") {
  for (int d : {2, 3}) {
    const auto report = verify_against_target(realize(alpha0_exclusion_factor(0.5), d), 3);
    CHECK(report.max_deviation <= 1e-12);
  }
  const auto fx = verify_against_target(realize(alpha075_fixture(), 2), 3);
  CHECK(fx.max_deviation <= 1e-12);

  const auto full = verify_against_target(realize(ones_process(1), 2), 3);
  CHECK(full.max_deviation == 0.0);
  CHECK(full.target.alpha == 1.0);

  const auto excl2 = verify_against_target(realize(alpha0_exclusion_factor(0.5), 2), 3);
  REQUIRE(excl2.rows.size() >= 3);
  CHECK(excl2.rows[0].norm2 == 0);
  CHECK(excl2.rows[0].value == 0.0625);
  CHECK(excl2.rows[1].norm2 == 1);
  CHECK(excl2.rows[1].value == 0.0);
  CHECK(excl2.rows[1].class_size == 4);
  for (std::size_t i = 2; i < excl2.rows.size(); ++i)
    CHECK(excl2.rows[i].value == 0.00390625);

  CHECK_THROWS_AS(verify_against_target(realize(alpha0_exclusion_factor(0.5), 2), 1),
                  std::invalid_argument);
}

TEST_CASE("box sampling determinism and degenerate processes") {
  const BoxRegion box({8, 8});
  const auto full = sample_box(realize(ones_process(1), 2), box, 7);
  for (auto v : full.values) CHECK(v == 1);

  const auto proc = realize(alpha0_exclusion_factor(0.5), 2);
  const auto a = sample_box(proc, box, 7);
  const auto b = sample_box(proc, box, 7);
  CHECK(a.values == b.values);
  const auto c = sample_box(proc, box, 8);
  CHECK(a.values != c.values);

  CHECK_THROWS_AS(sample_box(proc, BoxRegion({8}), 7), std::invalid_argument);
}

TEST_CASE("exclusion samples contain no axis-adjacent occupied pairs") {
  const auto proc = realize(alpha0_exclusion_factor(0.5), 2);
  const std::int64_t n = 32;
  const BoxRegion box({n, n});
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto field = sample_box(proc, box, seed);
    auto at = [&](std::int64_t i, std::int64_t j) {
      return field.values[static_cast<std::size_t>(i * n + j)];
    };
    for (std::int64_t i = 0; i < n; ++i)
      for (std::int64_t j = 0; j < n; ++j) {
        if (i + 1 < n) CHECK(at(i, j) * at(i + 1, j) == 0);
        if (j + 1 < n) CHECK(at(i, j) * at(i, j + 1) == 0);
      }
  }
}

TEST_CASE("sampled density matches the exact value across replicas") {
  const auto proc = realize(alpha0_exclusion_factor(0.5), 2);
  const std::int64_t n = 32;
  const BoxRegion box({n, n});
  const int replicas = 200;
  std::vector<double> means;
  means.reserve(replicas);
  for (int r = 0; r < replicas; ++r) {
    const auto field = sample_box(proc, box, 1000 + static_cast<std::uint64_t>(r));
    double s = 0.0;
    for (auto v : field.values) s += v;
    means.push_back(s / static_cast<double>(n * n));
  }
  double mean = 0.0;
  for (double m : means) mean += m;
  mean /= replicas;
  double ss = 0.0;
  for (double m : means) ss += (m - mean) * (m - mean);
  const double se = std::sqrt(ss / (replicas - 1) / replicas);
  CHECK(std::abs(mean - 0.0625) < 4.0 * se);
}

TEST_CASE("no systematic drift across the box interior") {
  const auto proc = realize(alpha0_exclusion_factor(0.5), 2);
  const std::int64_t n = 16;
  const BoxRegion box({n, n});
  const int replicas = 200;
  std::vector<double> site_sum(static_cast<std::size_t>(n * n), 0.0);
  for (int r = 0; r < replicas; ++r) {
    const auto field = sample_box(proc, box, 5000 + static_cast<std::uint64_t>(r));
    for (std::size_t i = 0; i < site_sum.size(); ++i) site_sum[i] += field.values[i];
  }
  const double rho = 0.0625;
  const double se = std::sqrt(rho * (1.0 - rho) / replicas);
  double worst = 0.0;
  for (double s : site_sum)
    worst = std::max(worst, std::abs(s / replicas - rho) / se);
  CHECK(worst < 5.0);
}

TEST_CASE("field sample round-trips bit-exactly") {
  FieldSample tiny{BoxRegion({2, 3}), {1, 0, 0, 0, 1, 1}};
  CHECK(field_to_text(tiny) == "2 2 3\n100\n011\n");
  const auto back = field_from_text(field_to_text(tiny));
  CHECK(back.values == tiny.values);
  CHECK(back.box.side_lengths == tiny.box.side_lengths);

  const auto proc = realize(alpha0_exclusion_factor(0.5), 3);
  const auto field = sample_box(proc, BoxRegion({4, 5, 6}), 21);
  const auto round = field_from_text(field_to_text(field));
  CHECK(round.values == field.values);
  CHECK(round.box.side_lengths == field.box.side_lengths);

  CHECK_THROWS_AS(field_from_text("2 2 3\n100\n"), ParseError);
  CHECK_THROWS_AS(field_from_text("2 2 3\n100\n0111\n"), ParseError);
  CHECK_THROWS_AS(field_from_text("2 2 3\n100\n01x\n"), ParseError);
  CHECK_THROWS_AS(field_from_text(""), ParseError);
}
