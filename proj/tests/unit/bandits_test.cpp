#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>

#include "bct/bandits.hpp"
#include "helpers.hpp"

namespace bct {
namespace {

using testing::arms;
using testing::star;

struct Sets {
  std::set<PointId> must;  // d <= d* + eps
  std::set<PointId> may;   // d <= d* + eps + gamma
};

Sets cover_by_hand(const std::vector<double>& d, double eps, double gamma) {
  const double best = *std::min_element(d.begin(), d.end());
  Sets s;
  for (std::size_t k = 0; k < d.size(); ++k) {
    const auto id = static_cast<PointId>(k + 1);
    if (d[k] <= best + eps) s.must.insert(id);
    if (d[k] <= best + eps + gamma) s.may.insert(id);
  }
  return s;
}

bool sandwiched(const std::vector<PointId>& got, const Sets& s) {
  const std::set<PointId> g(got.begin(), got.end());
  return std::includes(g.begin(), g.end(), s.must.begin(), s.must.end()) &&
         std::includes(s.may.begin(), s.may.end(), g.begin(), g.end());
}

TEST(IdentifyCover, ExactOracleKeepsNearAndDropsFar) {
  const std::vector<double> d{1.0, 1.4, 3.0};
  ExactOracle oracle(star(d));
  SampleLedger ledger;
  const auto ids = arms(3);
  const auto out = identify_cover({0, ids, 0.5, 0.25, 0.1, 3}, oracle, ledger);
  EXPECT_EQ(out.selected, (std::vector<PointId>{1, 2}));
  EXPECT_TRUE(sandwiched(out.selected, cover_by_hand(d, 0.5, 0.25)));
}

TEST(IdentifyCover, OptionalBandMembersMayGoEitherWay) {
  const std::vector<double> d{1.0, 1.6, 1.7};
  const auto ids = arms(3);
  const Sets s = cover_by_hand(d, 0.5, 0.25);
  EXPECT_EQ(s.must, (std::set<PointId>{1}));
  EXPECT_EQ(s.may, (std::set<PointId>{1, 2, 3}));
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    GaussianOracle oracle(star(d), 1.0, seed);
    SampleLedger ledger;
    const auto out = identify_cover({0, ids, 0.5, 0.25, 0.1, 3}, oracle, ledger);
    EXPECT_FALSE(out.capped);
    EXPECT_TRUE(sandwiched(out.selected, s)) << "seed " << seed;
  }
}

TEST(IdentifyCover, SingletonCostsNothing) {
  GaussianOracle oracle(star({2.0}), 1.0, 1);
  SampleLedger ledger;
  const auto ids = arms(1);
  const auto out = identify_cover({0, ids, 0.5, 0.25, 0.1, 1}, oracle, ledger);
  EXPECT_EQ(out.selected, (std::vector<PointId>{1}));
  EXPECT_EQ(out.oracle_calls, 0u);
  EXPECT_EQ(oracle.calls(), 0u);
}

TEST(IdentifyCover, ContractChecks) {
  ExactOracle oracle(star({1.0, 2.0}));
  SampleLedger ledger;
  const std::vector<PointId> with_anchor{0, 1};
  const std::vector<PointId> dup{1, 1};
  const std::vector<PointId> none;
  const auto ids = arms(2);
  EXPECT_THROW(identify_cover({0, with_anchor, 0.5, 0.25, 0.1, 2}, oracle, ledger), ContractViolation);
  EXPECT_THROW(identify_cover({0, dup, 0.5, 0.25, 0.1, 2}, oracle, ledger), ContractViolation);
  EXPECT_THROW(identify_cover({0, none, 0.5, 0.25, 0.1, 1}, oracle, ledger), ContractViolation);
  EXPECT_THROW(identify_cover({0, ids, 0.0, 0.25, 0.1, 2}, oracle, ledger), ContractViolation);
  EXPECT_THROW(identify_cover({0, ids, 0.5, -1.0, 0.1, 2}, oracle, ledger), ContractViolation);
  EXPECT_THROW(identify_cover({0, ids, 0.5, 0.25, 1.5, 2}, oracle, ledger), ContractViolation);
}

// Random instances with |Q| <= 12 and random (eps, gamma); the containment
// must hold in at least 1 - delta of the runs.
TEST(IdentifyCover, SandwichProperty) {
  std::mt19937_64 gen(77);
  std::uniform_int_distribution<int> size(1, 12);
  std::uniform_real_distribution<double> dist(0.0, 4.0), eps(0.25, 1.5), frac(0.25, 1.0);
  const int runs = 200;
  const double delta = 0.1;
  int held = 0;
  for (int r = 0; r < runs; ++r) {
    std::vector<double> d(static_cast<std::size_t>(size(gen)));
    for (double& x : d) x = dist(gen);
    const double e = eps(gen);
    const double g = e * frac(gen);
    GaussianOracle oracle(star(d), 1.0, static_cast<std::uint64_t>(r));
    SampleLedger ledger;
    const auto ids = arms(d.size());
    const auto out = identify_cover({0, ids, e, g, delta, ids.size()}, oracle, ledger);
    held += sandwiched(out.selected, cover_by_hand(d, e, g));
  }
  EXPECT_GE(held, static_cast<int>((1.0 - delta) * runs));
}

TEST(IdentifyCover, VariantKeepsTheSandwich) {
  const std::vector<double> d{1.0, 1.2, 2.0, 3.5};
  const auto ids = arms(4);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    GaussianOracle oracle(star(d), 1.0, seed);
    SampleLedger ledger;
    BanditOptions options;
    options.lt_variant = true;
    const auto out = identify_cover({0, ids, 0.5, 0.25, 0.1, 4}, oracle, ledger, options);
    EXPECT_TRUE(sandwiched(out.selected, cover_by_hand(d, 0.5, 0.25))) << "seed " << seed;
  }
}

TEST(IdentifyCover, CapTerminatesOnBoundaryArm) {
  // Arm 2 sits exactly on d* + eps, where no finite sample count decides it.
  const std::vector<double> d{1.0, 1.5};
  GaussianOracle oracle(star(d), 1.0, 5);
  SampleLedger ledger;
  BanditOptions options;
  options.t_max = 2000;
  options.lt_variant = true;
  const auto ids = arms(2);
  const auto out = identify_cover({0, ids, 0.5, 0.0, 0.1, 2}, oracle, ledger, options);
  EXPECT_TRUE(out.capped);
  EXPECT_TRUE(std::find(out.selected.begin(), out.selected.end(), 1u) != out.selected.end());
  EXPECT_LE(ledger.count(0, 2), 2000u);
}

TEST(ThresholdPartition, ExactSplit) {
  ExactOracle oracle(star({1.0, 3.0}));
  SampleLedger ledger;
  const auto ids = arms(2);
  const auto out = threshold_partition({0, ids, 2.0, 0.1, 2}, oracle, ledger);
  EXPECT_EQ(out.below, (std::vector<PointId>{1}));
  EXPECT_EQ(out.above, (std::vector<PointId>{2}));
  EXPECT_FALSE(out.capped);
}

TEST(ThresholdPartition, EmptyCandidates) {
  ExactOracle oracle(star({1.0}));
  SampleLedger ledger;
  const auto out = threshold_partition({0, {}, 2.0, 0.1, 1}, oracle, ledger);
  EXPECT_TRUE(out.below.empty());
  EXPECT_TRUE(out.above.empty());
  EXPECT_EQ(out.oracle_calls, 0u);
  EXPECT_EQ(oracle.calls(), 0u);
}

TEST(ThresholdPartition, PrepopulatedArmsAreNotReinitialized) {
  ExactOracle exact(star({1.0, 3.0}));
  SampleLedger ledger;
  for (int k = 0; k < 5; ++k) ledger.record(0, 1, 1.0);
  const auto ids = arms(2);
  threshold_partition({0, ids, 2.0, 0.1, 2}, exact, ledger);
  EXPECT_EQ(exact.calls(), 1u);
  EXPECT_EQ(ledger.count(0, 1), 5u);
  EXPECT_EQ(ledger.count(0, 2), 1u);

  GaussianOracle noisy(star({1.0, 3.0}), 1.0, 3);
  SampleLedger shared;
  for (int k = 0; k < 5; ++k) shared.record(0, 1, 1.0);
  std::vector<std::uint64_t> first_counts;
  BanditOptions options;
  options.trace = [&](const PullTrace& t) {
    if (t.arm == 1 && first_counts.empty()) first_counts.push_back(shared.count(0, 1));
  };
  const auto out = threshold_partition({0, ids, 2.0, 0.1, 2}, noisy, shared, options);
  EXPECT_GE(shared.count(0, 1), 5u);
  EXPECT_EQ(out.ledger_delta.count(0, 1) + 5, shared.count(0, 1));
  EXPECT_EQ(out.below, (std::vector<PointId>{1}));
}

TEST(ThresholdPartition, ExactOracleMatchesTruePartition) {
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> dist(0.0, 10.0);
  for (int r = 0; r < 100; ++r) {
    std::vector<double> d(9);
    for (double& x : d) x = dist(gen);
    const double theta = 5.0 + 0.001 * r;  // never hit exactly
    ExactOracle oracle(star(d));
    SampleLedger ledger;
    const auto ids = arms(d.size());
    const auto out = threshold_partition({0, ids, theta, 0.1, 9}, oracle, ledger);
    std::vector<PointId> below, above;
    for (std::size_t k = 0; k < d.size(); ++k) {
      (d[k] <= theta ? below : above).push_back(static_cast<PointId>(k + 1));
    }
    EXPECT_EQ(out.below, below);
    EXPECT_EQ(out.above, above);
  }
}

TEST(ThresholdPartition, NoisyPartitionIsUsuallyRight) {
  const std::vector<double> d{0.5, 1.5, 2.5, 3.5};
  const auto ids = arms(4);
  int right = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    GaussianOracle oracle(star(d), 1.0, seed);
    SampleLedger ledger;
    const auto out = threshold_partition({0, ids, 2.0, 0.1, 4}, oracle, ledger);
    right += out.below == std::vector<PointId>{1, 2};
  }
  EXPECT_GE(right, 90);
}

TEST(ThresholdPartition, StopsAtFirstBelow) {
  const std::vector<double> d{0.2, 0.3, 5.0, 6.0};
  GaussianOracle oracle(star(d), 1.0, 1);
  SampleLedger ledger;
  const auto ids = arms(4);
  ThresholdQuery q{0, ids, 2.0, 0.1, 4};
  q.stop_at_first_below = true;
  const auto out = threshold_partition(q, oracle, ledger);
  EXPECT_FALSE(out.below.empty());
}

TEST(ThresholdPartition, BudgetLeavesStraddlersUndecided) {
  // Arm 1 clears the threshold, arm 2 sits on it, arm 3 has no samples.
  const std::vector<double> d{0.5, 2.0, 9.0};
  GaussianOracle oracle(star(d), 0.1, 3);
  SampleLedger ledger;
  for (int k = 0; k < 50; ++k) {
    ledger.record(0, 1, oracle.query(0, 1));
    ledger.record(0, 2, oracle.query(0, 2));
  }
  const auto before = oracle.calls();
  const auto ids = arms(3);
  ThresholdQuery q{0, ids, 2.0, 0.1, 3};
  q.pull_budget = 0;
  const auto out = threshold_partition(q, oracle, ledger);
  EXPECT_EQ(oracle.calls(), before);
  EXPECT_EQ(out.oracle_calls, 0u);
  EXPECT_EQ(out.below, (std::vector<PointId>{1}));
  EXPECT_TRUE(out.above.empty());
  EXPECT_EQ(out.undecided, (std::vector<PointId>{2, 3}));

  q.pull_budget = 40;
  const auto more = threshold_partition(q, oracle, ledger);
  EXPECT_EQ(more.oracle_calls, 40u);
  EXPECT_EQ(more.above, (std::vector<PointId>{3}));
  EXPECT_EQ(more.undecided, (std::vector<PointId>{2}));
}

TEST(ThresholdPartition, ZeroGapIsCappedAndFlagged) {
  GaussianOracle oracle(star({2.0}), 1.0, 4);
  SampleLedger ledger;
  BanditOptions options;
  options.t_max = 500;
  const auto ids = arms(1);
  const auto out = threshold_partition({0, ids, 2.0, 0.1, 1}, oracle, ledger, options);
  EXPECT_TRUE(out.capped);
  EXPECT_EQ(ledger.count(0, 1), 500u);
  EXPECT_EQ(out.below.size() + out.above.size(), 1u);
}

TEST(FindSmallest, ExactArgmin) {
  ExactOracle oracle(star({3.0, 1.0, 2.0}));
  SampleLedger ledger;
  const auto ids = arms(3);
  EXPECT_EQ(find_smallest_in_set({0, ids, 0.1, 3}, oracle, ledger).best, 2u);
}

TEST(FindSmallest, ExactTieGoesToLowestIndex) {
  ExactOracle oracle(star({2.0, 1.0, 1.0}));
  SampleLedger ledger;
  const auto ids = arms(3);
  EXPECT_EQ(find_smallest_in_set({0, ids, 0.1, 3}, oracle, ledger).best, 2u);
}

TEST(FindSmallest, SingletonCostsNothing) {
  GaussianOracle oracle(star({3.0}), 1.0, 1);
  SampleLedger ledger;
  const auto ids = arms(1);
  const auto out = find_smallest_in_set({0, ids, 0.1, 1}, oracle, ledger);
  EXPECT_EQ(out.best, 1u);
  EXPECT_EQ(out.oracle_calls, 0u);
  EXPECT_EQ(oracle.calls(), 0u);
  EXPECT_THROW(find_smallest_in_set({0, {}, 0.1, 1}, oracle, ledger), ContractViolation);
}

TEST(FindSmallest, NoisyTwoArmsMonteCarlo) {
  const auto ids = arms(2);
  int right = 0;
  const int runs = 1000;
  for (int r = 0; r < runs; ++r) {
    GaussianOracle oracle(star({1.0, 2.0}), 1.0, static_cast<std::uint64_t>(r));
    SampleLedger ledger;
    right += find_smallest_in_set({0, ids, 0.05, 2}, oracle, ledger).best == 1u;
  }
  EXPECT_GE(right, 950);
}

TEST(FindSmallest, CallsShrinkAsTheGapGrows) {
  const auto ids = arms(4);
  double previous = 1e300;
  for (const double gap : {0.25, 0.5, 1.0, 2.0}) {
    std::vector<double> calls;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
      GaussianOracle oracle(star({1.0, 1.0 + gap, 1.0 + 2 * gap, 1.0 + 3 * gap}), 1.0, seed);
      SampleLedger ledger;
      calls.push_back(static_cast<double>(find_smallest_in_set({0, ids, 0.1, 4}, oracle, ledger).oracle_calls));
    }
    std::nth_element(calls.begin(), calls.begin() + 25, calls.end());
    EXPECT_LT(calls[25], previous) << "gap " << gap;
    previous = calls[25];
  }
}

TEST(FindSmallest, ExactTieUnderNoiseIsCapped) {
  GaussianOracle oracle(star({1.0, 1.0}), 1.0, 2);
  SampleLedger ledger;
  BanditOptions options;
  options.t_max = 300;
  const auto ids = arms(2);
  const auto out = find_smallest_in_set({0, ids, 0.1, 2}, oracle, ledger, options);
  EXPECT_TRUE(out.capped);
  EXPECT_EQ(oracle.calls(), 600u);
}

// Every outcome's call count equals the oracle counter delta and the size
// of its ledger delta, including when the shared ledger was pre-populated.
TEST(Bandits, CallConservation) {
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> dist(0.0, 3.0);
  for (int r = 0; r < 30; ++r) {
    std::vector<double> d(6);
    for (double& x : d) x = dist(gen);
    GaussianOracle oracle(star(d), 1.0, static_cast<std::uint64_t>(r));
    SampleLedger ledger;
    ledger.record(0, 1, d[0]);
    const auto ids = arms(6);

    std::uint64_t before = oracle.calls();
    std::uint64_t total = ledger.total_count();
    const auto c = identify_cover({0, ids, 0.5, 0.25, 0.1, 6}, oracle, ledger);
    EXPECT_EQ(c.oracle_calls, oracle.calls() - before);
    EXPECT_EQ(c.oracle_calls, c.ledger_delta.total_count());
    EXPECT_EQ(ledger.total_count() - total, c.oracle_calls);

    before = oracle.calls();
    total = ledger.total_count();
    const auto t = threshold_partition({0, ids, 1.5, 0.1, 6}, oracle, ledger);
    EXPECT_EQ(t.oracle_calls, oracle.calls() - before);
    EXPECT_EQ(t.oracle_calls, t.ledger_delta.total_count());
    EXPECT_EQ(ledger.total_count() - total, t.oracle_calls);

    before = oracle.calls();
    const auto s = find_smallest_in_set({0, ids, 0.1, 6}, oracle, ledger);
    EXPECT_EQ(s.oracle_calls, oracle.calls() - before);
    EXPECT_EQ(s.oracle_calls, s.ledger_delta.total_count());
  }
}

TEST(Bandits, TraceSeesEveryPull) {
  GaussianOracle oracle(star({1.0, 2.0, 3.0}), 1.0, 9);
  SampleLedger ledger;
  std::uint64_t traced = 0;
  BanditOptions options;
  options.trace = [&](const PullTrace& t) {
    ++traced;
    EXPECT_EQ(t.anchor, 0u);
    EXPECT_GT(t.width, 0.0);
  };
  const auto ids = arms(3);
  const auto out = identify_cover({0, ids, 0.5, 0.25, 0.1, 3}, oracle, ledger, options);
  EXPECT_EQ(traced, out.oracle_calls);
}

}  // namespace
}  // namespace bct
