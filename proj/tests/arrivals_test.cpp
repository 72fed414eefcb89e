// Copyright 2026 The auxbandit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <sstream>

#include "auxbandit/arrivals.hpp"

namespace auxbandit {
namespace {

TEST(Stationary, DegenerateRates) {
  const auto zero = gen_stationary(3, 50, 0.0, 1);
  const auto one = gen_stationary(3, 50, 1.0, 1);
  for (std::size_t k = 0; k < 3; ++k) {
    EXPECT_EQ(zero.total(k), 0);
    EXPECT_EQ(one.total(k), 50);
  }
  EXPECT_THROW(gen_stationary(3, 50, 1.5, 1), DomainError);
  EXPECT_THROW(gen_stationary(3, 50, -0.1, 1), DomainError);
}

TEST(Stationary, BinomialConcentration) {
  const std::size_t K = 3, T = 10000;
  const double lambda = 0.05;
  const double tol = 3.0 * std::sqrt(T * lambda * (1.0 - lambda));
  int inside = 0, total = 0;
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    const auto H = gen_stationary(K, T, lambda, seed);
    for (std::size_t k = 0; k < K; ++k) {
      ++total;
      if (std::abs(static_cast<double>(H.total(k)) - lambda * T) <= tol) ++inside;
    }
  }
  EXPECT_GE(static_cast<double>(inside) / total, 0.99);
}

TEST(Stationary, SeedDeterminesMatrix) {
  EXPECT_EQ(gen_stationary(2, 500, 0.3, 9), gen_stationary(2, 500, 0.3, 9));
  EXPECT_FALSE(gen_stationary(2, 500, 0.3, 9) == gen_stationary(2, 500, 0.3, 10));
}

TEST(Stationary, ArmRestriction) {
  const auto H = gen_stationary(3, 100, 1.0, 4, {1});
  EXPECT_EQ(H.total(0), 0);
  EXPECT_EQ(H.total(1), 100);
  EXPECT_EQ(H.total(2), 0);
}

TEST(DiminishingBernoulli, ClipsEarlyPeriods) {
  Warnings w;
  const auto H = gen_diminishing_bernoulli(2, 100, 4.0, 3, &w);
  for (std::size_t k = 0; k < 2; ++k)
    for (std::size_t t = 0; t < 4; ++t) EXPECT_EQ(H.at(k, t), 1);
  ASSERT_EQ(w.size(), 1u);
  EXPECT_THROW(gen_diminishing_bernoulli(2, 100, 0.0, 3), DomainError);
}

TEST(DiminishingBernoulli, MeanTotalMatchesHarmonicOracle) {
  const std::size_t T = 2000;
  const double kappa = 2.0;
  double expected = 0.0;
  for (std::size_t t = 1; t <= T; ++t) expected += std::min(1.0, kappa / static_cast<double>(t));
  double sum = 0.0;
  const int seeds = 400;
  for (int s = 0; s < seeds; ++s) sum += static_cast<double>(gen_diminishing_bernoulli(1, T, kappa, s).total(0));
  // Variance per row is below the expected total; 5 standard errors.
  EXPECT_NEAR(sum / seeds, expected, 5.0 * std::sqrt(expected / seeds));
}

TEST(DiminishingDeterministic, CumulativeIsFloorOfScaledLog) {
  const double kappa = 3.0, delta = 0.2, sigma_hat = 0.5;
  const double c = sigma_hat * sigma_hat * kappa / (2.0 * delta * delta);
  const std::size_t T = 5000;
  const auto H = gen_diminishing_deterministic(2, T, kappa, delta, sigma_hat);
  const auto cum = H.cumulative_row(1);
  for (std::size_t t = 1; t <= T; ++t)
    ASSERT_EQ(cum[t - 1], static_cast<std::int64_t>(std::floor(c * std::log(static_cast<double>(t))))) << t;
  EXPECT_EQ(H.at(0, 0), 0);
}

TEST(DiminishingDeterministic, TinyScaleGivesZeros) {
  // c log T < 1 with c = 0.25 * 0.01 / (2 * 0.04).
  const auto H = gen_diminishing_deterministic(2, 1000, 0.01, 0.2, 0.5);
  EXPECT_EQ(H.total(0) + H.total(1), 0);
  EXPECT_THROW(gen_diminishing_deterministic(2, 10, 0.0, 0.2, 0.5), DomainError);
}

TEST(GammaFamily, ProbabilitiesTelescopeToLambdaT) {
  const std::size_t T = 10000;
  for (double g : {0.0, 0.3, 0.5, 0.9}) {
    double s = 0.0;
    for (std::size_t t = 1; t <= T; ++t) s += gamma_family_probability(t, T, 0.01, g);
    EXPECT_NEAR(s, 0.01 * T, 1e-9) << g;
  }
  EXPECT_EQ(gamma_family_probability(1, T, 0.01, 0.5), 0.0);
}

TEST(GammaFamily, FirstQuarterShareMatchesClosedForm) {
  const std::size_t T = 10000;
  double first = 0.0;
  for (std::size_t t = 1; t <= T / 4; ++t) first += gamma_family_probability(t, T, 0.01, 0.5);
  // (sqrt(T/4) - 1) / (sqrt(T) - 1) = 49 / 99.
  EXPECT_NEAR(first / (0.01 * T), 49.0 / 99.0, 1e-12);
}

TEST(GammaFamily, ZeroGammaMatchesStationaryAtEqualProbability) {
  const std::size_t T = 400;
  const double lambda = 0.2;
  // Per-period probability lambda' T / (T - 1) = lambda for t >= 2.
  const double lp = lambda * static_cast<double>(T - 1) / static_cast<double>(T);
  EXPECT_NEAR(gamma_family_probability(7, T, lp, 0.0), lambda, 1e-15);
  const auto G = gen_gamma_family(2, T, lp, 0.0, 11);
  const auto S = gen_stationary(2, T, lambda, 11);
  for (std::size_t k = 0; k < 2; ++k) {
    EXPECT_EQ(G.at(k, 0), 0);
    for (std::size_t t = 1; t < T; ++t) EXPECT_EQ(G.at(k, t), S.at(k, t));
  }
}

TEST(GammaFamily, ClippingIsReported) {
  Warnings w;
  gen_gamma_family(1, 100, 1.0, 0.9, 2, &w);
  ASSERT_EQ(w.size(), 1u);
  EXPECT_NE(w[0].find("clipped"), std::string::npos);
  EXPECT_THROW(gen_gamma_family(1, 100, 0.1, 1.0, 2), DomainError);
}

TEST(MatrixIo, DirectRead) {
  std::istringstream in("0,1,0\n2,0,0\n");
  const auto H = parse_matrix(in);
  EXPECT_EQ(H.arms(), 2u);
  EXPECT_EQ(H.horizon(), 3u);
  EXPECT_EQ(H.at(0, 1), 1);
  EXPECT_EQ(H.at(1, 0), 2);
}

TEST(MatrixIo, RoundTrip) {
  const auto H = gen_diminishing_deterministic(3, 200, 8.0, 0.2, 0.5);
  const auto path = std::filesystem::temp_directory_path() / "auxbandit_roundtrip.csv";
  save_matrix(H, path.string());
  EXPECT_EQ(load_matrix(path.string()), H);
  std::filesystem::remove(path);
}

TEST(MatrixIo, ErrorsNameRowAndColumn) {
  auto check = [](const std::string& text, std::size_t row, std::size_t col) {
    std::istringstream in(text);
    try {
      parse_matrix(in);
      ADD_FAILURE() << "no error for " << text;
    } catch (const ParseError& e) {
      EXPECT_EQ(e.row(), row) << text;
      EXPECT_EQ(e.col(), col) << text;
    }
  };
  check("0,1\n0,-1\n", 2, 2);
  check("0,x,1\n", 1, 2);
  check("0,1.5\n", 1, 2);
  check("0,1,0\n1,1\n", 2, 2);
}

TEST(Generate, DispatchAndValidation) {
  ArrivalSpec s;
  s.kind = ArrivalKind::kStationary;
  EXPECT_THROW(generate(s, 2, 10, 1), ConfigError);  // lambda missing
  s.lambda = 1.5;
  EXPECT_FALSE(s.problems().empty());
  s.lambda = 0.3;
  EXPECT_EQ(generate(s, 2, 10, 1), gen_stationary(2, 10, 0.3, 1));
  EXPECT_TRUE(is_stochastic(s));
  ArrivalSpec d;
  d.kind = ArrivalKind::kDiminishingDeterministic;
  d.kappa = 2.0;
  d.delta = 0.2;
  d.sigma_hat = 0.5;
  EXPECT_FALSE(is_stochastic(d));
  EXPECT_EQ(generate(d, 2, 10, 1), gen_diminishing_deterministic(2, 10, 2.0, 0.2, 0.5));
}

}  // namespace
}  // namespace auxbandit
