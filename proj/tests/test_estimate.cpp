#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>
#include <sstream>

#include "latpp/estimate.hpp"

using namespace latpp;

namespace {

ProductProcessND exclusion2d() { return realize(alpha0_exclusion_factor(0.5), 2); }

ProductProcessND full_lattice2d() {
  return realize(BlockFactorProcess1D(1, 0.5, {1.0, 1.0}), 2);
}

ProductProcessND empty2d() {
  return realize(BlockFactorProcess1D(2, 0.5, std::vector<double>(4, 0.0)), 2);
}

}  // namespace

TEST_CASE("full lattice estimates are exact and flagged zero-variance") {
  const auto est = estimate(full_lattice2d(), BoxRegion({16, 16}), 2, 10, 1);
  CHECK(est.density().mean == 1.0);
  CHECK(est.density().zero_variance);
  CHECK(est.density().exact_match);
  for (const auto& c : est.classes) {
    CHECK(c.mean == 1.0);
    CHECK(c.zero_variance);
  }
  CHECK(est.all_zero_variance());
  CHECK_THROWS_AS(consistency_test(est, RadialSpec(1.0, 1.0, 2)), std::invalid_argument);
}

TEST_CASE("empty process estimates are zero") {
  const auto est = estimate(empty2d(), BoxRegion({16, 16}), 2, 5, 1);
  CHECK(est.density().mean == 0.0);
  for (const auto& c : est.classes) CHECK(c.mean == 0.0);
}

TEST_CASE("exclusion process passes the consistency test") {
  const auto proc = exclusion2d();
  const auto est = estimate(proc, BoxRegion({32, 32}), 3, 100, 42);
  const auto report = consistency_test(est, proc.target());
  CHECK(report.pass);
  CHECK(report.classes_tested == static_cast<int>(est.classes.size()));
  CHECK_FALSE(report.note.empty());

  // the nearest-neighbor class is structurally zero for alpha = 0
  bool found_nn = false;
  for (const auto& c : est.classes)
    if (c.norm2 == 1) {
      found_nn = true;
      CHECK(c.mean == 0.0);
      CHECK(c.zero_variance);
      CHECK(c.exact_match);
      CHECK(c.z == 0.0);
    }
  CHECK(found_nn);
}

TEST_CASE("a deliberately wrong alpha fails on the unit-vector class") {
  const auto proc = exclusion2d();
  const auto est = estimate(proc, BoxRegion({32, 32}), 3, 100, 42);
  const RadialSpec wrong(0.5, proc.rho(), 2);
  const auto report = consistency_test(est, wrong);
  CHECK_FALSE(report.pass);
  REQUIRE(!report.rows.empty());
  CHECK(report.rows.front().norm2 == 1);
  CHECK(report.rows.front().zero_variance);
  CHECK_FALSE(report.rows.front().exact_match);
  CHECK_FALSE(report.rows.front().pass);
}

TEST_CASE("estimates are bit-identical for identical seeds") {
  const auto proc = exclusion2d();
  const auto a = estimate(proc, BoxRegion({24, 24}), 2, 40, 9);
  const auto b = estimate(proc, BoxRegion({24, 24}), 2, 40, 9);
  REQUIRE(a.classes.size() == b.classes.size());
  for (std::size_t i = 0; i < a.classes.size(); ++i) {
    CHECK(a.classes[i].mean == b.classes[i].mean);
    CHECK(a.classes[i].stderr_ == b.classes[i].stderr_);
  }
  const auto c = estimate(proc, BoxRegion({24, 24}), 2, 40, 10);
  CHECK(a.density().mean != c.density().mean);
}

TEST_CASE("density estimator is unbiased at desk scale") {
  const auto proc = exclusion2d();
  const auto est = estimate(proc, BoxRegion({16, 16}), 1, 1000, 7);
  const auto& density = est.density();
  CHECK(density.stderr_ > 0.0);
  CHECK(std::abs(density.mean - 0.0625) < 5.0 * density.stderr_);
}

TEST_CASE("displacement classes pool by squared norm") {
  const auto est = estimate(exclusion2d(), BoxRegion({16, 16}), 3, 2, 3);
  std::set<std::int64_t> norms;
  for (const auto& c : est.classes) norms.insert(c.norm2);
  CHECK(norms == std::set<std::int64_t>{0, 1, 2, 4, 5, 8, 9, 10, 13, 18});
  for (const auto& c : est.classes) {
    if (c.norm2 == 0) CHECK(c.pooled == 1);
    if (c.norm2 == 1) CHECK(c.pooled == 4);
    if (c.norm2 == 2) CHECK(c.pooled == 4);
    if (c.norm2 == 5) CHECK(c.pooled == 8);
  }
  CHECK(est.core.side_lengths == std::vector<std::int64_t>{10, 10});
}

TEST_CASE("estimate argument validation") {
  const auto proc = exclusion2d();
  CHECK_THROWS_AS(estimate(proc, BoxRegion({6, 6}), 3, 4, 1), std::invalid_argument);
  CHECK_THROWS_AS(estimate(proc, BoxRegion({16, 16}), 3, 1, 1), std::invalid_argument);
  CHECK_THROWS_AS(estimate(proc, BoxRegion({16, 16}), 0, 4, 1), std::invalid_argument);
  CHECK_THROWS_AS(estimate(proc, BoxRegion({16}), 2, 4, 1), std::invalid_argument);
  CHECK_THROWS_AS(consistency_test(estimate(proc, BoxRegion({16, 16}), 2, 4, 1),
                                   RadialSpec(0.0, 0.0625, 3)),
                  std::invalid_argument);
}

TEST_CASE("thinning check scales the density and keeps the profile") {
  const auto proc = exclusion2d();
  const auto report = thinning_check(proc, 0.5, BoxRegion({32, 32}), 3, 100, 11);
  CHECK(report.pass);
  CHECK_FALSE(report.degenerate);
  CHECK(report.est.target.rho == doctest::Approx(0.03125).epsilon(1e-15));
  REQUIRE(report.consistency.has_value());
  CHECK(report.consistency->pass);
  // nearest class stays structurally zero under thinning
  for (const auto& c : report.est.classes)
    if (c.norm2 == 1) CHECK(c.mean == 0.0);
}

TEST_CASE("thinning with t=1 reproduces the plain estimate") {
  const auto proc = exclusion2d();
  const auto base = estimate(proc, BoxRegion({24, 24}), 2, 30, 13);
  const auto report = thinning_check(proc, 1.0, BoxRegion({24, 24}), 2, 30, 13);
  REQUIRE(report.est.classes.size() == base.classes.size());
  for (std::size_t i = 0; i < base.classes.size(); ++i)
    CHECK(report.est.classes[i].mean == base.classes[i].mean);
}

TEST_CASE("thinning with t=0 empties every sample") {
  const auto report = thinning_check(exclusion2d(), 0.0, BoxRegion({16, 16}), 2, 5, 3);
  CHECK(report.degenerate);
  CHECK(report.pass);  // every class matches its zero target exactly
  CHECK(report.est.density().mean == 0.0);
  CHECK_FALSE(report.consistency.has_value());
  CHECK_THROWS_AS(thinning_check(exclusion2d(), 1.5, BoxRegion({16, 16}), 2, 5, 3),
                  std::invalid_argument);
}

TEST_CASE("estimate serialization lists every class") {
  const auto est = estimate(exclusion2d(), BoxRegion({16, 16}), 2, 4, 2);
  const std::string text = estimate_to_text(est);
  CHECK(text.starts_with("class,representative,estimate,stderr,target,z,status\n"));
  CHECK(text.find("onsite,") != std::string::npos);
  CHECK(text.find("nearest,") != std::string::npos);
  CHECK(text.find("shell2,") != std::string::npos);
  std::size_t lines = 0;
  for (char ch : text)
    if (ch == '\n') ++lines;
  CHECK(lines == est.classes.size() + 1);
}
