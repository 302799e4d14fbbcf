#include <gtest/gtest.h>

#include <cmath>

#include "olr/classes.hpp"
#include "olr/complexity.hpp"
#include "olr/rng.hpp"

using namespace olr;

namespace {

std::vector<Point> grid_points(std::size_t n) {
  std::vector<Point> pts;
  for (std::size_t i = 0; i < n; ++i) pts.push_back({(i + 0.5) / static_cast<double>(n)});
  return pts;
}

FunctionClass two_constants() {
  const std::vector<double> v{0.0, 1.0};
  return constant_class(v);
}

}  // namespace

TEST(FatShattering, SingletonIsZero) {
  const std::vector<double> v{0.3};
  const FunctionClass cls = constant_class(v);
  for (double alpha : {0.01, 0.5, 2.0}) {
    EXPECT_EQ(fat_shattering_dim(cls, grid_points(5), alpha).dimension, 0u);
  }
}

TEST(FatShattering, ConstantPairIsOneWithMidpointWitness) {
  const FunctionClass cls = two_constants();
  const auto r = fat_shattering_dim(cls, grid_points(4), 1.0);
  EXPECT_EQ(r.dimension, 1u);
  ASSERT_EQ(r.certificate.size(), 1u);
  EXPECT_DOUBLE_EQ(r.certificate.witness[0], 0.5);
  EXPECT_TRUE(verify_certificate(cls, r.certificate));
  EXPECT_EQ(fat_shattering_dim(cls, grid_points(4), 1.01).dimension, 0u);
}

TEST(FatShattering, ThresholdsAreOne) {
  std::vector<double> th;
  for (int i = 0; i < 10; ++i) th.push_back(i / 10.0);
  const FunctionClass cls = threshold_class(th);
  for (double alpha : {0.1, 0.5, 1.0}) {
    const auto r = fat_shattering_dim(cls, grid_points(9), alpha);
    EXPECT_EQ(r.dimension, 1u);
    EXPECT_TRUE(verify_certificate(cls, r.certificate));
  }
}

TEST(FatShattering, BvClassShattersCellCentres) {
  const FunctionClass cls = bv_class(3.0, 3, 2);
  const auto r = fat_shattering_dim(cls, grid_points(3), 1.0);
  EXPECT_EQ(r.dimension, 3u);
  EXPECT_TRUE(verify_certificate(cls, r.certificate));
  EXPECT_EQ(r.certificate.realizing.size(), 8u);
}

TEST(FatShattering, TamperedCertificateFails) {
  const FunctionClass cls = two_constants();
  auto r = fat_shattering_dim(cls, grid_points(2), 1.0);
  ASSERT_EQ(r.dimension, 1u);
  r.certificate.witness[0] = 0.2;
  EXPECT_FALSE(verify_certificate(cls, r.certificate));
}

TEST(FatShattering, CapReportsLowerBound) {
  const FunctionClass cls = bv_class(4.0, 4, 1);
  const auto r = fat_shattering_dim(cls, grid_points(4), 1.0, 2);
  EXPECT_EQ(r.dimension, 2u);
  EXPECT_TRUE(r.lower_bound_only);
}

TEST(FatShattering, RejectsBadScale) {
  EXPECT_THROW(fat_shattering_dim(two_constants(), grid_points(2), 0.0), InvalidInput);
}

TEST(Cover, PolicyOracles) {
  const FunctionClass cls = two_constants();
  const auto pts = grid_points(3);
  EXPECT_EQ(covering_number_linf(cls, pts, 0.5, {CenterPolicy::trace_only, true}).size, 2u);
  const auto mid = covering_number_linf(cls, pts, 0.5, {CenterPolicy::midrange, true});
  EXPECT_EQ(mid.size, 1u);
  EXPECT_DOUBLE_EQ(mid.centers.row(0)[0], 0.5);
}

TEST(Cover, WideRadiusIsOne) {
  const FunctionClass cls = bv_class(2.0, 3, 2);
  const auto pts = grid_points(6);
  for (CenterPolicy p : {CenterPolicy::trace_only, CenterPolicy::midrange}) {
    EXPECT_EQ(covering_number_linf(cls, pts, 1.0, {p, false}).size, 1u);
  }
}

TEST(Cover, ZeroRadiusCountsDistinctTraces) {
  std::vector<double> th;
  for (int i = 0; i < 8; ++i) th.push_back(i / 8.0);
  const FunctionClass cls = threshold_class(th);
  // Points 0.3 and 0.8: traces are (1,1), (0,1), (0,0).
  const std::vector<Point> pts{{0.3}, {0.8}};
  const auto r = covering_number_linf(cls, pts, 0.0);
  EXPECT_EQ(r.size, 3u);
  EXPECT_EQ(r.distinct_traces, 3u);
}

TEST(Cover, EveryTraceWithinRadius) {
  Rng rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<std::vector<double>> traces(12, std::vector<double>(5));
    for (auto& t : traces) {
      for (double& v : t) v = rng.uniform();
    }
    const double alpha = 0.3;
    for (CenterPolicy p : {CenterPolicy::trace_only, CenterPolicy::midrange}) {
      for (bool exact : {false, true}) {
        const auto r = cover_traces(traces, alpha, {p, exact});
        ASSERT_EQ(r.assignment.size(), traces.size());
        for (std::size_t k = 0; k < traces.size(); ++k) {
          const auto c = r.centers.row(r.assignment[k]);
          for (std::size_t t = 0; t < 5; ++t) {
            EXPECT_LE(std::abs(c[t] - traces[k][t]), alpha + 1e-12);
          }
        }
      }
    }
  }
}

TEST(Cover, ExactNeverWorseThanGreedy) {
  Rng rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<std::vector<double>> traces(4 + rng.below(16), std::vector<double>(3));
    for (auto& t : traces) {
      for (double& v : t) v = rng.uniform();
    }
    for (CenterPolicy p : {CenterPolicy::trace_only, CenterPolicy::midrange}) {
      const auto g = cover_traces(traces, 0.25, {p, false});
      const auto e = cover_traces(traces, 0.25, {p, true});
      EXPECT_TRUE(e.exact);
      EXPECT_LE(e.size, g.size);
    }
  }
}

TEST(Cover, NegativeRadiusThrows) {
  EXPECT_THROW(covering_number_linf(two_constants(), grid_points(2), -0.1), InvalidInput);
}

TEST(Rademacher, Oracles) {
  const std::vector<double> zero{0.0};
  EXPECT_DOUBLE_EQ(empirical_rademacher(constant_class(zero), grid_points(5), 100, 1).mean, 0.0);
  const auto one = empirical_rademacher(two_constants(), grid_points(1), 20000, 2);
  EXPECT_NEAR(one.mean, 0.5, 3.0 * one.stderr + 1e-9);
}

TEST(Rademacher, ConstantPairMatchesBinomialWalk) {
  // sup over {0, 1} of (1/T) sum sigma_t f = max(0, S_T) / T.
  constexpr std::size_t kT = 64;
  double exact = 0.0;
  double log_c = 0.0;  // log C(T, j)
  for (std::size_t j = 0; j <= kT; ++j) {
    if (j > 0) log_c += std::log(double(kT - j + 1)) - std::log(double(j));
    const double s = 2.0 * double(j) - double(kT);
    if (s > 0) exact += std::exp(log_c - double(kT) * std::log(2.0)) * s / double(kT);
  }
  const auto est = empirical_rademacher(two_constants(), grid_points(kT), 20000, 3);
  EXPECT_NEAR(est.mean, exact, 4.0 * est.stderr);
}

TEST(ExpertTable, DistinctTracesKeepsFirstOccurrence) {
  const std::vector<double> tr{0.1, 0.2, 0.3, 0.4, 0.1, 0.2};
  const auto d = distinct_traces(tr, 3, 2);
  ASSERT_EQ(d.size(), 2u);
  EXPECT_EQ(d[0], (std::vector<double>{0.1, 0.2}));
  EXPECT_EQ(d[1], (std::vector<double>{0.3, 0.4}));
}
