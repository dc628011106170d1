/// Acceptance gate: one test per published claim, each printing a single
/// [ACCEPTANCE] pass/fail line. Tolerances are pinned in the assertions.

#include <gtest/gtest.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <set>
#include <vector>

#include "cayley/bifurcation.hpp"
#include "cayley/ctnn.hpp"
#include "cayley/entropy.hpp"
#include "cayley/io.hpp"
#include "cayley/separation.hpp"
#include "cayley/snre.hpp"
#include "cayley/spectral.hpp"
#include "cayley/tree_shift.hpp"
#include "test_util.hpp"

namespace {

using cayley::BasicSet;
using cayley::ChildCouplings;
using cayley::MarkovTreeShift;
using cayley::SignVector;
using cayley::Snre;
using cayley::SweepGrid;
using cayley::Template;
using cayley::TwoBlock;

constexpr double kLnTwo = 0.6931471805599453;
constexpr double kLnThree = 1.0986122886681098;
constexpr double kTribonacciConstant = 1.8392867552;

class Acceptance : public ::testing::Test {
 protected:
  void TearDown() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    std::printf("[ACCEPTANCE] %s: %s\n", info->name(), HasFailure() ? "FAIL" : "PASS");
    std::fflush(stdout);
  }
};

std::string fixture_path(const std::string& name) {
  const char* dir = std::getenv("CAYLEY_FIXTURES");
  EXPECT_NE(dir, nullptr) << "CAYLEY_FIXTURES must point at the fixture directory";
  return std::string(dir) + "/" + name;
}

/// The shared 201 x 201 sweep over a in [-2, 3], z in [-2, 2] with
/// alpha = (-0.25, 0.75), used by the dichotomy and duality criteria.
const SweepGrid& shared_sweep() {
  static const SweepGrid grid = cayley::sweep(cayley::child_couplings({-0.25, 0.75}),
                                              {-2.0, 3.0}, {-2.0, 2.0}, 201, 4);
  return grid;
}

TEST_F(Acceptance, Criterion01TribonacciEntropyAndArgmax) {
  const auto start = std::chrono::steady_clock::now();
  const MarkovTreeShift shift =
      cayley::tree_shift_from_json(cayley::read_text_file(fixture_path("tribonacci.json")));
  const cayley::TsftEntropy result = cayley::entropy_tsft(shift);
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  EXPECT_NEAR(result.entropy, std::log(kTribonacciConstant), 1e-6);
  EXPECT_EQ(result.argmax_matrix,
            (std::vector<std::vector<int>>{{1, 1, 0}, {0, 0, 1}, {2, 1, 0}}));
  EXPECT_LT(elapsed, 1.0);
}

TEST_F(Acceptance, Criterion02WorkedReductionEnumeration) {
  Snre snre;
  snre.degree = 2;
  snre.symbol_count = 2;
  snre.symbols = {"a1", "a2"};
  snre.rows = {{cayley::Monomial{1, {2, 0}}, cayley::Monomial{1, {0, 2}}},
               {cayley::Monomial{2, {1, 1}}}};
  snre.init = {1, 1};

  const cayley::IndicatorMatrix indicator = cayley::indicator_matrix(snre);
  EXPECT_EQ(indicator.entries,
            (std::vector<std::vector<long long>>{{1, 0, 1}, {0, 2, 0}}));

  const auto reduced = cayley::enumerate_reduced(snre);
  ASSERT_EQ(reduced.size(), 2u);
  bool found = false;
  for (const auto& system : reduced) {
    if (cayley::reduced_indicator(snre, system) !=
        std::vector<std::vector<int>>{{1, 0, 0}, {0, 1, 0}})
      continue;
    found = true;
    const auto adjacency = cayley::weighted_adjacency(system);
    EXPECT_EQ(adjacency, (std::vector<std::vector<int>>{{2, 0}, {1, 1}}));
    EXPECT_EQ(cayley::spectral_radius(adjacency), 2.0);
  }
  EXPECT_TRUE(found);
}

TEST_F(Acceptance, Criterion03ExhaustiveSpectrumTwoSymbols) {
  // Degree 2: all 2^8 allowed-sets land exactly on {0, ln 2}.
  {
    const auto blocks = cayley::testing::all_two_blocks(2, 2);
    ASSERT_EQ(blocks.size(), 8u);
    bool saw_full = false;
    for (unsigned mask = 0; mask < 256u; ++mask) {
      std::set<TwoBlock> allowed;
      for (unsigned bit = 0; bit < 8u; ++bit)
        if (mask & (1u << bit)) allowed.insert(blocks[bit]);
      const double h =
          cayley::entropy_tsft(MarkovTreeShift(cayley::testing::numbered_alphabet(2), 2,
                                               std::move(allowed)))
              .entropy;
      EXPECT_TRUE(std::abs(h) <= 1e-9 || std::abs(h - kLnTwo) <= 1e-9) << "mask " << mask;
      if (std::abs(h - kLnTwo) <= 1e-9) saw_full = true;
    }
    EXPECT_TRUE(saw_full);
  }

  // Degree 3: all 2^16 allowed-sets land exactly on {0, ln 2, ln 3} in
  // under two minutes.
  const auto start = std::chrono::steady_clock::now();
  const auto blocks = cayley::testing::all_two_blocks(2, 3);
  ASSERT_EQ(blocks.size(), 16u);
  bool saw_two = false;
  bool saw_three = false;
  for (unsigned long mask = 0; mask < 65536u; ++mask) {
    std::set<TwoBlock> allowed;
    for (unsigned bit = 0; bit < 16u; ++bit)
      if (mask & (1ul << bit)) allowed.insert(blocks[bit]);
    const double h = cayley::entropy_tsft(MarkovTreeShift(cayley::testing::numbered_alphabet(2),
                                                          3, std::move(allowed)))
                         .entropy;
    const bool ok = std::abs(h) <= 1e-9 || std::abs(h - kLnTwo) <= 1e-9 ||
                    std::abs(h - kLnThree) <= 1e-9;
    EXPECT_TRUE(ok) << "mask " << mask << " entropy " << h;
    if (!ok) break;
    if (std::abs(h - kLnTwo) <= 1e-9) saw_two = true;
    if (std::abs(h - kLnThree) <= 1e-9) saw_three = true;
  }
  EXPECT_TRUE(saw_two);
  EXPECT_TRUE(saw_three);
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  EXPECT_LT(elapsed, 120.0);
}

TEST_F(Acceptance, Criterion04CountingOracleEquivalence) {
  std::mt19937_64 rng(12345);
  int positive_cases = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const int k = 2 + static_cast<int>(rng() % 2);
    const MarkovTreeShift shift = cayley::testing::random_shift(rng, 2, k);

    // Exhaustive listings match the counting recursion exactly.
    cayley::CountOptions exact_options;
    exact_options.exact = true;
    for (int n = 1; n <= 3; ++n) {
      const auto listed = cayley::enumerate_blocks(shift, n);
      const auto counted = cayley::count_blocks(shift, n, exact_options).total(n);
      EXPECT_EQ(counted, cayley::BigInt(static_cast<long>(listed.size())))
          << "trial " << trial << " n " << n;
    }

    // The finite-depth estimate sits within 0.05 of the exact entropy for
    // every positive-entropy instance.
    const cayley::TsftEntropy exact = cayley::entropy_tsft(shift);
    if (exact.entropy > 0.0) {
      ++positive_cases;
      const cayley::EntropyEstimate estimate = cayley::entropy_estimate(shift, 200);
      EXPECT_NEAR(estimate.value, exact.entropy, 0.05) << "trial " << trial;
    }
  }
  EXPECT_GT(positive_cases, 10);
}

TEST_F(Acceptance, Criterion05SweepDichotomyAndRuleAgreement) {
  // The sweep completing at all is the zero-inconsistency claim: every
  // classified point re-derives its entropy spectrally and throws on any
  // disagreement with the region-code rule.
  const SweepGrid& grid = shared_sweep();
  ASSERT_EQ(grid.points.size(), 201u * 201u);
  std::size_t classified = 0;
  for (const cayley::SweepPoint& point : grid.points) {
    if (point.boundary) continue;
    ++classified;
    const bool rule_zero = std::min(point.p, point.q) == 0 || std::max(point.p, point.q) == 1;
    const double expected = rule_zero ? 0.0 : kLnTwo;
    EXPECT_TRUE(std::abs(point.entropy - expected) <= 1e-9)
        << "a=" << point.a << " z=" << point.z;
    EXPECT_TRUE(std::abs(point.entropy) <= 1e-9 || std::abs(point.entropy - kLnTwo) <= 1e-9);
  }
  EXPECT_GT(classified, 38000u);
}

TEST_F(Acceptance, Criterion06CriticalCurveProbeAndSpecialization) {
  const ChildCouplings cc = cayley::child_couplings({-0.25, 0.75});
  for (int j = 0; j <= 20; ++j) {
    const double z = -2.0 + 0.2 * j;
    const double a_star = cayley::critical_a(cc, z);
    EXPECT_TRUE(cayley::verify_critical_by_definition(cc, a_star, z, 0.05, 400, 0)) << "z=" << z;
    EXPECT_FALSE(cayley::verify_critical_by_definition(cc, a_star + 0.2, z, 0.05, 400, 0))
        << "z=" << z;
    EXPECT_FALSE(cayley::verify_critical_by_definition(cc, a_star - 0.2, z, 0.05, 400, 0))
        << "z=" << z;
  }

  // Closed-form specialization for 0 < -alpha_1 < alpha_2:
  // a - 1 = ||z| + alpha_1| - alpha_2.
  for (int j = 0; j <= 1600; ++j) {
    const double z = -2.0 + 0.0025 * j;
    const double specialized = 1.0 + std::abs(std::abs(z) + (-0.25)) - 0.75;
    EXPECT_NEAR(cayley::critical_a(cc, z), specialized, 1e-12);
  }
}

TEST_F(Acceptance, Criterion07WorkedBinaryTemplatePatterns) {
  const Template tmpl{2, 1.375, {-0.25, 0.75}, 0.375};
  const cayley::CtnnEntropy result = cayley::ctnn_entropy(tmpl);
  const std::set<SignVector> plus = {{-1, 1}, {1, 1}, {-1, -1}};
  const std::set<SignVector> minus = {{1, -1}, {-1, -1}};
  EXPECT_EQ(result.basic.plus, plus);
  EXPECT_EQ(result.basic.minus, minus);
  EXPECT_EQ(result.code, (cayley::RegionCode{3, 2}));
  EXPECT_NEAR(result.entropy, kLnTwo, 1e-12);
}

TEST_F(Acceptance, Criterion08SeparableSubsetCounts) {
  const auto vertices = cayley::sign_vectors(2);
  int separable_total = 0;
  int separable_proper = 0;
  for (unsigned mask = 0; mask < 16u; ++mask) {
    std::set<SignVector> members;
    for (unsigned bit = 0; bit < 4u; ++bit)
      if (mask & (1u << bit)) members.insert(vertices[bit]);
    if (!cayley::is_linearly_separable(2, members).has_value()) continue;
    ++separable_total;
    if (mask != 0u && mask != 15u) ++separable_proper;
  }
  EXPECT_EQ(separable_proper, 12);
  EXPECT_EQ(separable_total, 14);
}

TEST_F(Acceptance, Criterion09LearningRoundtripAcrossPartition) {
  const cayley::PlanePartition partition =
      cayley::partition_plane(cayley::child_couplings({-0.25, 0.75}));
  ASSERT_EQ(partition.cells.size(), 25u);
  std::set<BasicSet> seen;
  for (const cayley::PlaneCell& cell : partition.cells) {
    const BasicSet basic =
        cayley::admissible_patterns(Template{2, cell.rep_a, {-0.25, 0.75}, cell.rep_z});
    seen.insert(basic);
    EXPECT_TRUE(cayley::check_realizable(basic).realizable);
    const cayley::RealizeResult learned = cayley::realize(basic);
    ASSERT_TRUE(learned.realizable);
    EXPECT_EQ(cayley::admissible_patterns(learned.tmpl), basic);
  }
  EXPECT_EQ(seen.size(), 25u);

  // The hand-built impossible request is refused.
  BasicSet impossible;
  impossible.degree = 2;
  impossible.plus = {{1, 1}};
  impossible.minus = {{1, -1}};
  EXPECT_FALSE(cayley::check_realizable(impossible).realizable);
  EXPECT_FALSE(cayley::realize(impossible).realizable);
}

TEST_F(Acceptance, Criterion10DualitySwapsCodes) {
  const SweepGrid& grid = shared_sweep();
  const std::vector<double> alpha = {-0.25, 0.75};
  for (const cayley::SweepPoint& point : grid.points) {
    const Template mirrored{2, point.a, alpha, -point.z};
    if (point.boundary) {
      EXPECT_THROW(cayley::ctnn_entropy(mirrored), cayley::BoundaryParameterError);
      continue;
    }
    const cayley::CtnnEntropy dual = cayley::ctnn_entropy(mirrored);
    EXPECT_EQ(dual.code.p, point.q);
    EXPECT_EQ(dual.code.q, point.p);
    EXPECT_EQ(dual.entropy, point.entropy);
  }
}

TEST_F(Acceptance, Criterion11PartitionAndCatalogCounts) {
  const cayley::BasicSetCatalog single = cayley::distinct_basic_sets({{-0.25, 0.75}});
  EXPECT_EQ(single.per_profile, (std::vector<std::size_t>{25}));
  EXPECT_EQ(single.total, 25u);

  const cayley::BasicSetCatalog catalog = cayley::distinct_basic_sets(
      {{-0.25, 0.75}, {-0.25, -0.75}, {0.25, 0.75}, {0.25, -0.75},
       {-0.75, 0.25}, {-0.75, -0.25}, {0.75, 0.25}, {0.75, -0.25}});
  for (std::size_t count : catalog.per_profile) EXPECT_EQ(count, 25u);
  EXPECT_LE(catalog.total, 200u);
}

}  // namespace
