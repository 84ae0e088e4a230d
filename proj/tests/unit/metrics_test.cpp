#include "robinf/metrics.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "oracle.hpp"
#include "robinf/inference.hpp"

namespace robinf {
namespace {

const std::vector<std::size_t> kEvidence{1, 2, 3, 4};

ChainParameters random_chain(std::uint64_t seed) {
  RandomStream rng(seed, 31);
  return sample_true_model(rng, Topology::prototypical());
}

HypothesisSplit split_of(const ChainParameters& chain) {
  return split_by_hypothesis(to_joint(chain), Topology::prototypical());
}

oracle::Tables tables_of(const ChainParameters& chain) {
  oracle::Tables tables;
  for (std::size_t k = 0; k < chain.variable_count(); ++k)
    tables.emplace_back(chain.table(k).begin(), chain.table(k).end());
  return tables;
}

std::vector<double> posterior_rb(const ChainParameters& chain) {
  std::vector<double> rb;
  for (const auto& p : posterior_table(to_joint(chain), Topology::prototypical())) rb.push_back(p.value());
  return rb;
}

TEST(MseTest, ConstantHalfIsOneQuarter) {
  const auto split = split_of(random_chain(1));
  const std::vector<double> rb(16, 0.5);
  EXPECT_NEAR(expected_mse(rb, split), 0.25, 1e-15);
  const auto rates = pe_pc(rb, split, DecisionThresholds{});
  EXPECT_EQ(rates.pe, 0.0);
  EXPECT_EQ(rates.pc, 0.0);
  EXPECT_FALSE(relative_error(rates).has_value());
  EXPECT_FALSE(dprime(rb, split).has_value());
}

TEST(MseTest, PosteriorAttainsMinimum) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto chain = random_chain(seed);
    const auto split = split_of(chain);
    ASSERT_NEAR(expected_mse(posterior_rb(chain), split), min_possible_mse(split), 1e-12);
  }
}

TEST(MseTest, MinimumIsAFloor) {
  RandomStream rng(2, 0);
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto split = split_of(random_chain(seed));
    std::vector<double> rb(16);
    for (double& r : rb) r = rng.uniform();
    ASSERT_GE(expected_mse(rb, split), min_possible_mse(split) - 1e-15);
  }
}

TEST(MseTest, DeterministicTruth) {
  // H is fully determined by A.
  const ChainParameters chain({{0.5}, {0.0, 1.0}, {0.5, 0.5, 0.5, 0.5}, std::vector<double>(8, 0.5),
                               std::vector<double>(16, 0.5)});
  const auto split = split_of(chain);
  const auto rb = posterior_rb(chain);
  EXPECT_EQ(min_possible_mse(split), 0.0);
  EXPECT_EQ(expected_mse(rb, split), 0.0);
  const auto rates = pe_pc(rb, split, DecisionThresholds{});
  EXPECT_EQ(rates.pe, 0.0);
  EXPECT_NEAR(rates.pc, 1.0, 1e-15);
}

TEST(MseTest, UniformTruthMinimumIsOneQuarter) {
  EXPECT_NEAR(min_possible_mse(split_of(ChainParameters::constant(5, 0.5))), 0.25, 1e-15);
}

TEST(MseTest, RandomCaseMinimumAverage) {
  double total = 0.0;
  constexpr int n = 1000;
  for (int c = 0; c < n; ++c) total += min_possible_mse(split_of(random_chain(static_cast<std::uint64_t>(c))));
  EXPECT_NEAR(total / n, 0.085, 0.01);
}

TEST(MseTest, UninformedRandomBeliefsScoreOneThird) {
  RandomStream rng(3, 0);
  double total = 0.0;
  constexpr int n = 20000;
  for (int c = 0; c < n; ++c) {
    const auto split = split_of(random_chain(static_cast<std::uint64_t>(c)));
    std::vector<double> rb(16);
    for (double& r : rb) r = rng.uniform();
    total += expected_mse(rb, split);
  }
  EXPECT_NEAR(total / n, 1.0 / 3.0, 0.005);
}

TEST(OracleTest, MetricsMatchBruteForce) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto truth = random_chain(seed);
    RandomStream rng(seed, 32);
    const auto belief = BeliefModel{Regime::marginalized,
                                    perturb_chain(truth, ErrorRange(0.8), rng), std::nullopt};
    const auto split = split_of(truth);
    const auto tables = tables_of(truth);
    for (auto id : kAllProcedures) {
      const auto rb = evaluate(id, belief, Topology::prototypical()).rb;
      ASSERT_NEAR(expected_mse(rb, split), oracle::mse(tables, kEvidence, rb), 1e-10);
      const auto rates = pe_pc(rb, split, DecisionThresholds{});
      const auto expected = oracle::decisions(tables, kEvidence, rb, 0.35, 0.65);
      ASSERT_NEAR(rates.pe, expected.pe, 1e-10);
      ASSERT_NEAR(rates.pc, expected.pc, 1e-10);
      const auto d = dprime(rb, split);
      const auto od = oracle::dprime(tables, kEvidence, rb);
      ASSERT_EQ(d.has_value(), od.has_value()) << to_string(id);
      if (d) ASSERT_NEAR(*d, *od, 1e-8);
    }
    ASSERT_NEAR(min_possible_mse(split), oracle::min_mse(tables, kEvidence), 1e-10);
  }
}

TEST(DecisionTest, WiderThresholdsDecideLess) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto chain = random_chain(seed);
    const auto split = split_of(chain);
    const auto rb = posterior_rb(chain);
    const auto narrow = pe_pc(rb, split, DecisionThresholds(0.45, 0.55));
    const auto wide = pe_pc(rb, split, DecisionThresholds(0.2, 0.8));
    ASSERT_LE(wide.pe + wide.pc, narrow.pe + narrow.pc + 1e-15);
  }
}

TEST(DecisionTest, ThresholdsAreStrict) {
  const HypothesisSplit split{{0.3, 0.2}, {0.1, 0.4}};
  const auto rates = pe_pc(std::vector<double>{0.35, 0.65}, split, DecisionThresholds{});
  EXPECT_EQ(rates.pe, 0.0);
  EXPECT_EQ(rates.pc, 0.0);
}

TEST(DecisionTest, HandBuiltRates) {
  // State 0 declared F, state 1 declared T.
  const HypothesisSplit split{{0.1, 0.4}, {0.3, 0.2}};
  const auto rates = pe_pc(std::vector<double>{0.2, 0.9}, split, DecisionThresholds{});
  EXPECT_NEAR(rates.pe, 0.1 + 0.2, 1e-15);
  EXPECT_NEAR(rates.pc, 0.3 + 0.4, 1e-15);
  EXPECT_NEAR(relative_error(rates).value(), 0.3, 1e-15);
}

TEST(DecisionTest, RelativeErrorExamples) {
  EXPECT_NEAR(relative_error({0.1, 0.3}).value(), 0.25, 1e-15);
  EXPECT_EQ(relative_error({0.0, 0.5}).value(), 0.0);
  EXPECT_EQ(relative_error({0.5, 0.0}).value(), 1.0);
  EXPECT_FALSE(relative_error({0.0, 0.0}).has_value());
}

TEST(DecisionTest, ThresholdValidation) {
  EXPECT_THROW(DecisionThresholds(0.7, 0.3), std::invalid_argument);
  EXPECT_THROW(DecisionThresholds(0.5, 0.5), std::invalid_argument);
  EXPECT_THROW(DecisionThresholds(0.0, 0.5), std::invalid_argument);
  EXPECT_THROW(DecisionThresholds(0.5, 1.0), std::invalid_argument);
  EXPECT_EQ(DecisionThresholds{}.lower(), 0.35);
  EXPECT_EQ(DecisionThresholds{}.upper(), 0.65);
}

TEST(DprimeTest, SignFollowsOrientation) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto chain = random_chain(seed);
    const auto split = split_of(chain);
    auto rb = posterior_rb(chain);
    const auto d = dprime(rb, split);
    ASSERT_TRUE(d.has_value());
    ASSERT_GE(*d, 0.0);
    for (double& r : rb) r = 1.0 - r;
    ASSERT_NEAR(dprime(rb, split).value(), -*d, 1e-9);
  }
}

TEST(DprimeTest, PoolingOptions) {
  // Two states: sd_T and sd_F differ, so the two poolings disagree.
  const HypothesisSplit split{{0.4, 0.1}, {0.1, 0.4}};
  const std::vector<double> rb{0.9, 0.1};
  const double mean_t = (0.4 * 0.9 + 0.1 * 0.1) / 0.5, mean_f = (0.1 * 0.9 + 0.4 * 0.1) / 0.5;
  const double var = 0.8 * 0.2 * 0.8 * 0.8;
  EXPECT_NEAR(dprime(rb, split, DprimePooling::pooled).value(), (mean_t - mean_f) / std::sqrt(var), 1e-12);
  EXPECT_NEAR(dprime(rb, split, DprimePooling::average_of_sds).value(), (mean_t - mean_f) / std::sqrt(var),
              1e-12);
  const HypothesisSplit lopsided{{0.45, 0.05}, {0.25, 0.25}};
  const double pooled = dprime(rb, lopsided, DprimePooling::pooled).value();
  const double averaged = dprime(rb, lopsided, DprimePooling::average_of_sds).value();
  EXPECT_GT(averaged, pooled);
  EXPECT_EQ(parse_dprime_pooling("average-of-sds"), DprimePooling::average_of_sds);
  EXPECT_EQ(to_string(DprimePooling::pooled), "pooled");
  EXPECT_FALSE(parse_dprime_pooling("mean").has_value());
}

TEST(DprimeTest, ZeroMassSideIsUndefined) {
  const HypothesisSplit split{{0.5, 0.5}, {0.0, 0.0}};
  EXPECT_FALSE(dprime(std::vector<double>{0.2, 0.8}, split).has_value());
}

TEST(DprimeTest, FromRates) {
  EXPECT_NEAR(dprime_from_rates({0.5, 0.5}).value(), 0.0, 1e-12);
  // z(0.8413447460685429) = 1.
  EXPECT_NEAR(dprime_from_rates({1.0 - 0.8413447460685429, 0.8413447460685429}).value(), 2.0, 1e-9);
  EXPECT_FALSE(dprime_from_rates({0.0, 0.5}).has_value());
  EXPECT_FALSE(dprime_from_rates({0.2, 0.0}).has_value());
}

TEST(EvaluateMetricsTest, BundlesEveryMetric) {
  const auto chain = random_chain(7);
  const auto split = split_of(chain);
  const auto rb = posterior_rb(chain);
  const auto record = evaluate_metrics(rb, split, DecisionThresholds{});
  EXPECT_EQ(record.mse, expected_mse(rb, split));
  EXPECT_EQ(record.min_mse, min_possible_mse(split));
  EXPECT_EQ(record.pe, pe_pc(rb, split, DecisionThresholds{}).pe);
  EXPECT_EQ(record.dprime, dprime(rb, split));
  EXPECT_THROW(expected_mse(std::vector<double>(3, 0.5), split), std::invalid_argument);
}

}  // namespace
}  // namespace robinf
