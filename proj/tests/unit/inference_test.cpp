#include "robinf/inference.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <set>

namespace robinf {
namespace {

ChainParameters random_chain(std::uint64_t seed, const Topology& topology = Topology::prototypical()) {
  RandomStream rng(seed, 21);
  return sample_true_model(rng, topology);
}

BeliefModel marginalized(ChainParameters chain) {
  return BeliefModel{Regime::marginalized, std::move(chain), std::nullopt};
}

ProcedureInputs single_item(double prior, double given_true, double given_false) {
  return ProcedureInputs{prior, {given_true}, {given_false}};
}

TEST(ProcedureIdTest, StableIdentifiers) {
  EXPECT_EQ(to_string(ProcedureId::strong_naive_bayes), "strong_naive_bayes");
  EXPECT_EQ(display_name(ProcedureId::strong_naive_bayes), "Strong Bayes");
  for (auto id : kAllProcedures) EXPECT_EQ(parse_procedure(to_string(id)), id);
  EXPECT_FALSE(parse_procedure("bayes").has_value());
}

TEST(ProperBayesTest, ZeroRangeEqualsTruePosterior) {
  for (const auto& topology : {Topology::prototypical(), Topology::hierarchical()}) {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
      const auto truth = random_chain(seed, topology);
      const auto rb = proper_bayes(marginalized(truth), topology).rb;
      const auto posterior = posterior_table(to_joint(truth), topology);
      ASSERT_EQ(rb.size(), topology.evidential_state_count());
      for (std::size_t e = 0; e < rb.size(); ++e) ASSERT_NEAR(rb[e], posterior[e].value(), 1e-12);
    }
  }
}

TEST(ProcedureTest, UniformBeliefsGiveOneHalf) {
  const auto model = marginalized(ChainParameters::constant(5, 0.5));
  for (auto id : kAllProcedures)
    for (double rb : evaluate(id, model, Topology::prototypical()).rb) EXPECT_DOUBLE_EQ(rb, 0.5) << to_string(id);
}

TEST(NaiveBayesTest, HandArithmetic) {
  const auto table = naive_bayes(single_item(0.6, 0.8, 0.4));
  ASSERT_EQ(table.rb.size(), 2u);
  EXPECT_NEAR(table.rb[1], 0.6 * 0.8 / (0.6 * 0.8 + 0.4 * 0.4), 1e-15);
  EXPECT_NEAR(table.rb[1], 0.75, 1e-15);
  // Observed F uses the complements.
  EXPECT_NEAR(table.rb[0], 0.6 * 0.2 / (0.6 * 0.2 + 0.4 * 0.6), 1e-15);
}

TEST(NaiveBayesTest, EqualsProperBayesUnderConditionalIndependence) {
  RandomStream rng(31, 0);
  for (int trial = 0; trial < 50; ++trial) {
    // Evidence entries depend on H only (context bit 0).
    std::vector<std::vector<double>> tables{{rng.uniform_open()}};
    for (std::size_t k = 1; k < 5; ++k) {
      const double given_false = rng.uniform_open(), given_true = rng.uniform_open();
      std::vector<double> table(std::size_t{1} << k);
      for (std::size_t ctx = 0; ctx < table.size(); ++ctx) table[ctx] = (ctx & 1u) ? given_true : given_false;
      tables.push_back(std::move(table));
    }
    const auto model = marginalized(ChainParameters(tables));
    const auto topology = Topology::prototypical();
    const auto naive = evaluate(ProcedureId::naive_bayes, model, topology).rb;
    const auto proper = proper_bayes(model, topology).rb;
    for (std::size_t e = 0; e < naive.size(); ++e) ASSERT_NEAR(naive[e], proper[e], 1e-12);
  }
}

TEST(NaiveBayesTest, UsesDirectInputsWhenPresent) {
  const DirectInputs direct{0.3, {0.9, 0.2, 0.6, 0.5}, {0.1, 0.4, 0.6, 0.7}};
  const BeliefModel model{Regime::direct, random_chain(2), direct};
  const auto table = evaluate(ProcedureId::naive_bayes, model, Topology::prototypical());
  const auto expected = naive_bayes(ProcedureInputs{0.3, direct.likelihood_given_true, direct.likelihood_given_false});
  EXPECT_EQ(table.rb, expected.rb);
}

TEST(StrongNaiveBayesTest, AllItemsDroppedFallsBackToPrior) {
  const ProcedureInputs in{0.7, {0.5, 0.52, 0.48, 0.55}, {0.5, 0.5, 0.5, 0.5}};
  for (double rb : strong_naive_bayes(in).rb) EXPECT_NEAR(rb, 0.7, 1e-15);
}

TEST(StrongNaiveBayesTest, BoundaryRatioIsRetained) {
  // LR(x=T) = 0.75 / 0.5 = 1.5 exactly, so x=T keeps its factor.
  const auto in = single_item(0.5, 0.75, 0.5);
  EXPECT_EQ(in.likelihood_ratio(0, EvidentialState{1}), 1.5);
  EXPECT_DOUBLE_EQ(strong_naive_bayes(in).rb[1], naive_bayes(in).rb[1]);
  EXPECT_DOUBLE_EQ(strong_naive_bayes(in).rb[1], 0.6);
}

TEST(StrongNaiveBayesTest, MatchesNaiveBayesOnReducedEvidence) {
  // Items 0 and 2 sit inside the deadband for both values; items 1 and 3 do not.
  const ProcedureInputs full{0.4, {0.5, 0.9, 0.52, 0.3}, {0.45, 0.2, 0.5, 0.8}};
  const ProcedureInputs reduced{0.4, {0.9, 0.3}, {0.2, 0.8}};
  const auto strong = strong_naive_bayes(full).rb;
  const auto naive = naive_bayes(reduced).rb;
  for (std::uint32_t e = 0; e < 16; ++e) {
    const std::uint32_t reduced_state = ((e >> 1) & 1u) | (((e >> 3) & 1u) << 1);
    EXPECT_NEAR(strong[e], naive[reduced_state], 1e-15) << e;
  }
}

TEST(StrongNaiveBayesTest, PerItemModeDropsEverywhere) {
  // LR(x=T) = 0.9/0.7 is inside the band; LR(x=F) = 0.1/0.3 is not.
  const auto in = single_item(0.5, 0.9, 0.7);
  const auto per_value = strong_naive_bayes(in, StrongNaiveDrop::per_observed_value).rb;
  const auto per_item = strong_naive_bayes(in, StrongNaiveDrop::per_item).rb;
  EXPECT_DOUBLE_EQ(per_value[1], 0.5);
  EXPECT_DOUBLE_EQ(per_value[0], naive_bayes(in).rb[0]);
  EXPECT_DOUBLE_EQ(per_item[0], 0.5);
  EXPECT_DOUBLE_EQ(per_item[1], 0.5);
}

// Inputs whose all-true state has LRs 2.0, 0.5, 1.2, 0.9.
ProcedureInputs vote_fixture() { return ProcedureInputs{0.8, {0.8, 0.2, 0.6, 0.45}, {0.4, 0.4, 0.5, 0.5}}; }

TEST(SimpleLinearTest, DirectRuleApplication) {
  const auto in = vote_fixture();
  EXPECT_NEAR(in.likelihood_ratio(0, EvidentialState{0b1111}), 2.0, 1e-15);
  EXPECT_NEAR(in.likelihood_ratio(3, EvidentialState{0b1111}), 0.9, 1e-15);
  EXPECT_DOUBLE_EQ(simple_linear(in).rb[0b1111], 0.6);
}

TEST(SimpleLinearTest, TiesVoteZero) {
  const ProcedureInputs in{0.5, {0.3, 0.6, 0.5, 0.9}, {0.3, 0.6, 0.5, 0.9}};
  for (double rb : simple_linear(in).rb) EXPECT_DOUBLE_EQ(rb, 0.5);
}

TEST(SimpleLinearTest, OddVoteCountsWithoutTies) {
  std::set<double> seen;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto in = procedure_inputs(marginalized(random_chain(seed)), Topology::prototypical());
    for (double rb : simple_linear(in).rb) {
      const long sl = std::lround(rb * 10.0) - 5;
      ASSERT_TRUE(sl == -5 || sl == -3 || sl == -1 || sl == 1 || sl == 3 || sl == 5) << rb;
      seen.insert(rb);
    }
  }
  EXPECT_EQ(seen, (std::set<double>{0.0, 0.2, 0.4, 0.6, 0.8, 1.0}));
}

TEST(StrongLinearTest, DirectRuleApplication) {
  EXPECT_DOUBLE_EQ(strong_linear(vote_fixture()).rb[0b1111], 0.6);
}

TEST(StrongLinearTest, DeadbandsGiveOneHalf) {
  const ProcedureInputs in{0.65, {0.5, 0.55, 0.45, 0.6}, {0.5, 0.5, 0.5, 0.55}};
  for (double rb : strong_linear(in).rb) EXPECT_DOUBLE_EQ(rb, 0.5);
}

TEST(StrongLinearTest, NoVoteInsideWideDeadband) {
  RandomStream rng(41, 0);
  int compared = 0;
  for (int i = 0; i < 5000; ++i) {
    const auto in = single_item(0.5, rng.uniform_open(), rng.uniform_open());
    for (std::uint32_t e = 0; e < 2; ++e) {
      const double lr = in.likelihood_ratio(0, EvidentialState{e});
      if (lr >= 2.0 / 3.0 && lr <= 1.5 && lr != 1.0) {
        EXPECT_NE(simple_linear(in).rb[e], 0.5);
        EXPECT_EQ(strong_linear(in).rb[e], 0.5);
        ++compared;
      }
    }
  }
  EXPECT_GT(compared, 100);
}

TEST(ProcedureInvariantsTest, RangeGridAndComplementSymmetry) {
  for (const auto& topology : {Topology::prototypical(), Topology::hierarchical()}) {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      RandomStream rng(seed, 51);
      const auto chain = perturb_chain(random_chain(seed, topology), ErrorRange(1.0), rng);
      const auto model = marginalized(chain);
      for (auto id : kAllProcedures) {
        const auto rb = evaluate(id, model, topology).rb;
        ASSERT_EQ(rb.size(), topology.evidential_state_count());
        for (double r : rb) {
          ASSERT_GE(r, 0.0);
          ASSERT_LE(r, 1.0);
          if (id == ProcedureId::simple_linear || id == ProcedureId::strong_linear)
            ASSERT_NEAR(r * 10.0, std::round(r * 10.0), 1e-12);
        }
      }

      // Relabel H: flip the root probability and swap each table's H=T/H=F contexts.
      std::vector<std::vector<double>> flipped{{1.0 - chain.at(0, 0)}};
      for (std::size_t k = 1; k < chain.variable_count(); ++k) {
        std::vector<double> table(std::size_t{1} << k);
        for (std::size_t ctx = 0; ctx < table.size(); ++ctx) table[ctx] = chain.at(k, ctx ^ 1u);
        flipped.push_back(std::move(table));
      }
      const auto mirror = marginalized(ChainParameters(flipped));
      for (auto id : {ProcedureId::proper_bayes, ProcedureId::naive_bayes}) {
        const auto rb = evaluate(id, model, topology).rb;
        const auto rb_mirror = evaluate(id, mirror, topology).rb;
        for (std::size_t e = 0; e < rb.size(); ++e) ASSERT_NEAR(rb_mirror[e], 1.0 - rb[e], 1e-12);
      }
    }
  }
}

TEST(ProcedureInvariantsTest, NaiveAndLinearShareInputs) {
  const auto model = marginalized(random_chain(9));
  const auto topology = Topology::prototypical();
  const auto in = procedure_inputs(model, topology);
  EXPECT_EQ(evaluate(ProcedureId::naive_bayes, model, topology).rb, naive_bayes(in).rb);
  EXPECT_EQ(evaluate(ProcedureId::simple_linear, model, topology).rb, simple_linear(in).rb);
  EXPECT_EQ(evaluate(ProcedureId::strong_naive_bayes, model, topology).rb, strong_naive_bayes(in).rb);
  EXPECT_EQ(evaluate(ProcedureId::strong_linear, model, topology).rb, strong_linear(in).rb);
}

TEST(ProcedureInvariantsTest, HierarchicalLinearUsesFixedNormalization) {
  const ProcedureInputs in{0.9, {0.9, 0.9, 0.9}, {0.1, 0.1, 0.1}};
  const auto rb = simple_linear(in).rb;
  ASSERT_EQ(rb.size(), 8u);
  EXPECT_DOUBLE_EQ(rb[0b111], 0.9);
  EXPECT_DOUBLE_EQ(rb[0b000], 0.3);
}

}  // namespace
}  // namespace robinf
