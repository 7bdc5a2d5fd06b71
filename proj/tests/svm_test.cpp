#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "fiomon/svm.hpp"
#include "support/oracles.hpp"

namespace fiomon {
namespace {

using Dense = std::vector<std::vector<double>>;

std::vector<TrainingExample> make_examples(const Dense& x, const std::vector<int>& y) {
  std::vector<TrainingExample> out;
  for (std::size_t i = 0; i < x.size(); ++i) {
    std::vector<SparseEntry> pairs;
    for (std::size_t k = 0; k < x[i].size(); ++k) pairs.push_back({static_cast<std::uint32_t>(k), x[i][k]});
    out.push_back({SparseVector::from_pairs(pairs), y[i] > 0 ? Label::kRelevant : Label::kIrrelevant});
  }
  return out;
}

TrainingConfig tight(double c, std::uint64_t seed = 42) {
  TrainingConfig cfg;
  cfg.c = c;
  cfg.tolerance = 1e-12;
  cfg.max_epochs = 100000;
  cfg.seed = seed;
  return cfg;
}

TEST(Train, SymmetricOneDimensionalCase) {
  const auto ex = make_examples({{1.0}, {-1.0}}, {1, -1});
  const auto m = train(ex, 1, tight(10.0));
  EXPECT_GT(m.weights[0], 0.0);
  EXPECT_LT(std::fabs(m.bias), m.weights[0]);
  EXPECT_EQ(predict(m, ex[0].features), Label::kRelevant);
  EXPECT_EQ(predict(m, ex[1].features), Label::kIrrelevant);
  // oracle: w = 1, b = 0, objective 0.5
  EXPECT_NEAR(m.meta.final_objective, 0.5, 1e-9);
}

TEST(Train, TwoDimensionalInstanceMatchesFrozenOracle) {
  const Dense x = {{1, 1}, {2, 2}, {-1, -1}, {-2, -1}};
  const std::vector<int> y = {1, 1, -1, -1};
  const auto m = train(make_examples(x, y), 2, tight(1.0));
  // Active-set enumeration of the augmented dual gives w = (0.5, 0.5), b = 0, objective 0.25.
  EXPECT_NEAR(m.meta.final_objective, 0.25, 0.25 * 1e-6);
  EXPECT_NEAR(m.weights[0], 0.5, 1e-5);
  EXPECT_NEAR(m.weights[1], 0.5, 1e-5);
  EXPECT_NEAR(m.bias, 0.0, 1e-5);
  EXPECT_TRUE(m.meta.converged);
}

TEST(Train, RejectsBadInput) {
  const TrainingConfig cfg;
  EXPECT_THROW(train({}, 1, cfg), TrainingDataError);
  EXPECT_THROW(train(make_examples({{1.0}, {2.0}}, {1, 1}), 1, cfg), TrainingDataError);
  EXPECT_THROW(train(make_examples({{std::numeric_limits<double>::infinity()}, {1.0}}, {1, -1}), 1, cfg),
               TrainingDataError);
  EXPECT_THROW(train(make_examples({{1.0, 1.0}, {1.0, 1.0}}, {1, -1}), 1, cfg), TrainingDataError);
  TrainingConfig bad;
  bad.c = 0.0;
  EXPECT_THROW(train(make_examples({{1.0}, {-1.0}}, {1, -1}), 1, bad), std::invalid_argument);
}

TEST(Objective, ZeroModelCostsCPerExample) {
  const auto ex = make_examples({{1, 2}, {3, 4}, {5, 6}}, {1, -1, 1});
  const std::vector<double> w = {0.0, 0.0};
  EXPECT_DOUBLE_EQ(objective(w, 0.0, ex, 2.5), 2.5 * 3);
}

TEST(DecisionValue, Arithmetic) {
  LinearSvm m;
  m.weights = {2.0, 0.0};
  m.bias = -1.0;
  EXPECT_DOUBLE_EQ(decision_value(m, SparseVector{}), -1.0);
  EXPECT_DOUBLE_EQ(decision_value(m, SparseVector::from_pairs({{0, 1.5}})), 2.0);
  EXPECT_THROW(decision_value(m, SparseVector::from_pairs({{2, 1.0}})), std::out_of_range);
}

TEST(Predict, SignRuleAndTie) {
  EXPECT_EQ(label_for(3.2), Label::kRelevant);
  EXPECT_EQ(label_for(-0.1), Label::kIrrelevant);
  EXPECT_EQ(label_for(0.0), Label::kRelevant);
  LinearSvm m;
  m.weights = {1.0};
  m.bias = 0.0;
  EXPECT_EQ(predict(m, SparseVector{}), Label::kRelevant);
}

struct Instance {
  Dense x;
  std::vector<int> y;
  double c;
};

std::vector<Instance> random_instances(std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  std::vector<Instance> out;
  const double cs[] = {0.1, 1.0, 10.0};
  for (std::size_t t = 0; t < count; ++t) {
    Instance inst;
    const std::size_t n = 2 + t % 5;
    const std::size_t d = 1 + t % 3;
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<double> row(d);
      for (auto& v : row) v = u(rng);
      inst.x.push_back(row);
      inst.y.push_back(i % 2 ? 1 : -1);
    }
    inst.c = cs[t % 3];
    out.push_back(inst);
  }
  return out;
}

TEST(Train, MatchesQpOracleOnRandomSmallInstances) {
  for (const auto& inst : random_instances(60, 123)) {
    const auto ex = make_examples(inst.x, inst.y);
    const auto m = train(ex, inst.x[0].size(), tight(inst.c));
    const auto ref = oracle::solve_svm(inst.x, inst.y, inst.c);
    EXPECT_NEAR(m.meta.final_objective, ref.objective, 1e-6 * ref.objective);
    for (std::size_t i = 0; i < inst.x.size(); ++i) {
      double ref_value = ref.bias;
      for (std::size_t k = 0; k < ref.weights.size(); ++k) ref_value += ref.weights[k] * inst.x[i][k];
      // Points on the decision boundary are ambiguous; skip those within solver noise.
      if (std::fabs(ref_value) > 1e-6) {
        EXPECT_EQ(predict(m, ex[i].features), label_for(ref_value));
      }
    }
  }
}

TEST(Train, DualFeasibilityAndMonotoneIncumbent) {
  for (const auto& inst : random_instances(90, 77)) {
    const auto ex = make_examples(inst.x, inst.y);
    double previous = std::numeric_limits<double>::infinity();
    train(ex, inst.x[0].size(), tight(inst.c), [&](const EpochTrace& t) {
      for (const double a : t.alphas) {
        EXPECT_GE(a, 0.0);
        EXPECT_LE(a, inst.c);
      }
      EXPECT_LE(t.primal_objective, previous + 1e-9);
      EXPECT_LE(t.primal_objective, t.iterate_objective);
      previous = t.primal_objective;
    });
  }
}

TEST(Train, LabelNegationNegatesDecisionValues) {
  for (const auto& inst : random_instances(30, 5)) {
    auto flipped = inst.y;
    for (auto& v : flipped) v = -v;
    const auto ex = make_examples(inst.x, inst.y);
    const auto ex_flipped = make_examples(inst.x, flipped);
    TrainingConfig cfg;
    const auto a = train(ex, inst.x[0].size(), cfg);
    const auto b = train(ex_flipped, inst.x[0].size(), cfg);
    for (const auto& e : ex) EXPECT_NEAR(decision_value(a, e.features), -decision_value(b, e.features), 1e-9);
  }
}

TEST(Train, DeterministicForSeed) {
  const auto inst = random_instances(5, 9).back();
  const auto ex = make_examples(inst.x, inst.y);
  TrainingConfig cfg;
  cfg.seed = 1234;
  EXPECT_EQ(train(ex, inst.x[0].size(), cfg), train(ex, inst.x[0].size(), cfg));
}

TEST(Train, StopsAtMaxEpochs) {
  const auto inst = random_instances(5, 9).back();
  TrainingConfig cfg = tight(10.0);
  cfg.max_epochs = 1;
  const auto m = train(make_examples(inst.x, inst.y), inst.x[0].size(), cfg);
  EXPECT_EQ(m.meta.epochs_run, 1u);
}

}  // namespace
}  // namespace fiomon
