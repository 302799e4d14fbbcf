#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "olr/core.hpp"
#include "olr/mwa.hpp"
#include "olr/rng.hpp"

using namespace olr;

TEST(Mwa, DefaultEtaOracles) {
  EXPECT_DOUBLE_EQ(Mwa::default_eta(625, 1000), std::sqrt(8.0 * std::log(625.0) / 1000.0));
  EXPECT_NEAR(Mwa::default_eta(625, 1000), 0.2270, 1e-4);
  EXPECT_DOUBLE_EQ(Mwa::default_eta(2, 8), std::sqrt(std::log(2.0)));
  EXPECT_NEAR(Mwa::default_eta(2, 8), 0.8326, 1e-4);
  EXPECT_DOUBLE_EQ(Mwa::default_eta(1, 100), 0.0);
}

TEST(Mwa, LoneExpertAlwaysChosen) {
  Mwa mwa(1, 100, 1);
  const std::vector<double> pred{0.4}, loss{0.9};
  for (int t = 0; t < 100; ++t) {
    EXPECT_DOUBLE_EQ(mwa.predict(pred), 0.4);
    mwa.update(loss);
  }
}

TEST(Mwa, ConstantExpertsBothModes) {
  for (MwaMode mode : {MwaMode::sampled, MwaMode::averaged}) {
    Mwa mwa(3, 10, 5, mode);
    const std::vector<double> pred{0.7, 0.7, 0.7};
    EXPECT_DOUBLE_EQ(mwa.predict(pred), 0.7);
  }
}

TEST(Mwa, AveragedFollowsHeavyWeight) {
  Mwa mwa(2, 10000, 1, MwaMode::averaged);
  const std::vector<double> pred{0.2, 0.9}, loss{0.0, 1.0};
  for (int t = 0; t < 2000; ++t) {
    mwa.predict(pred);
    mwa.update(loss);
  }
  EXPECT_NEAR(mwa.predict(pred), 0.2, 1e-3);
}

TEST(Mwa, EqualLossesKeepRatios) {
  Mwa mwa(3, 16, 1);
  const std::vector<double> pred{0.1, 0.2, 0.3};
  mwa.predict(pred);
  mwa.update(std::vector<double>{0.0, 1.0, 0.5});
  const auto before = mwa.distribution();
  mwa.predict(pred);
  mwa.update(std::vector<double>{0.3, 0.3, 0.3});
  for (std::size_t k = 0; k < 3; ++k) EXPECT_NEAR(mwa.distribution()[k], before[k], 1e-15);
}

TEST(Mwa, SingleUpdateRatioIsExpEta) {
  Mwa mwa(2, 8, 1);
  const std::vector<double> pred{0.0, 1.0};
  mwa.predict(pred);
  mwa.update(std::vector<double>{0.0, 1.0});
  const auto& p = mwa.distribution();
  EXPECT_NEAR(p[0] / p[1], std::exp(mwa.eta()), 1e-12);
}

TEST(Mwa, WinnerWeightIncreasesMonotonically) {
  Mwa mwa(2, 50, 1);
  const std::vector<double> pred{0.0, 1.0}, loss{0.0, 1.0};
  double last = 0.5;
  for (int t = 0; t < 50; ++t) {
    mwa.predict(pred);
    mwa.update(loss);
    EXPECT_GT(mwa.distribution()[0], last);
    last = mwa.distribution()[0];
  }
  EXPECT_GT(last, 0.99);
}

TEST(Mwa, RejectsLossesOutsideUnitInterval) {
  Mwa mwa(2, 2, 1);
  mwa.predict(std::vector<double>{0.0, 1.0});
  EXPECT_THROW(mwa.update(std::vector<double>{0.0, 2.0}), ContractViolation);
  EXPECT_THROW(mwa.update(std::vector<double>{-0.5, 0.0}), ContractViolation);
}

TEST(Mwa, RejectsEmptyAndWrongWidth) {
  EXPECT_THROW(Mwa(0, 10, 1), EmptyExperts);
  EXPECT_THROW(Mwa(2, 0, 1), InvalidInput);
  Mwa mwa(2, 2, 1);
  EXPECT_THROW(mwa.predict(std::vector<double>{0.5}), InvalidInput);
  EXPECT_THROW(mwa.update(std::vector<double>{0.0}), InvalidInput);
}

TEST(Mwa, SameSeedSameChoices) {
  Mwa a(16, 100, 9), b(16, 100, 9);
  Rng rng(1);
  for (int t = 0; t < 100; ++t) {
    std::vector<double> pred(16), loss(16);
    for (std::size_t k = 0; k < 16; ++k) {
      pred[k] = rng.uniform();
      loss[k] = rng.uniform();
    }
    EXPECT_EQ(a.predict(pred), b.predict(pred));
    a.update(loss);
    b.update(loss);
  }
}

TEST(Mwa, AveragedRegretWithinBound) {
  constexpr std::size_t kT = 500, kK = 8;
  Rng rng(11);
  Mwa mwa(kK, kT, 1, MwaMode::averaged);
  std::vector<double> totals(kK, 0.0);
  double learner = 0.0;
  for (std::size_t t = 0; t < kT; ++t) {
    const double y = rng.uniform();
    std::vector<double> pred(kK), loss(kK);
    for (std::size_t k = 0; k < kK; ++k) {
      pred[k] = rng.uniform();
      loss[k] = std::abs(pred[k] - y);
      totals[k] += loss[k];
    }
    learner += std::abs(mwa.predict(pred) - y);
    mwa.update(loss);
  }
  const double best = *std::min_element(totals.begin(), totals.end());
  EXPECT_LE(learner - best, std::sqrt(kT * std::log(double(kK)) / 2.0));
}
