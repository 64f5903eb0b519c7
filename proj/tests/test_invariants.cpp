#include <algorithm>

#include <gtest/gtest.h>

#include "support.hpp"
#include "solch/builders.hpp"
#include "solch/catalog.hpp"
#include "solch/invariants.hpp"

using namespace solch;

namespace {

AnalysisOptions at_depth(std::size_t depth, std::size_t max_word_length = 6) {
  AnalysisOptions o;
  o.depth = depth;
  o.max_word_length = max_word_length;
  return o;
}

bool contains_word(const std::vector<KernelWord>& ws, const Word& w) {
  return std::any_of(ws.begin(), ws.end(), [&](const KernelWord& k) { return k.word == w; });
}

const Word kB({2});
const Word kB2({2, 2});

ChainTower klein_rebased(std::size_t depth) {
  ChainTower t = rt_klein(depth);
  return rebase(t, klein_off_orbit_point(t));
}

ChainTower product_fixture() {
  return product_chain(alternating_group(5), PermutationGroup(5, {Permutation::from_cycles(5, "(0 1 2 3 4)")}),
                       {2, 2, 2});
}

}  // namespace

TEST(CoreQuotients, SmallExamples) {
  auto dy = core_quotient_tower(odometer({2, 2, 2}));
  EXPECT_EQ(dy[3].H.order(), 8u);
  EXPECT_EQ(FiniteGroup(dy[3].H.generators(), 100).size(), 8u);
  auto kl = core_quotient_tower(rt_klein(3));
  EXPECT_EQ(kl[1].H.order(), 2u);
  ASSERT_TRUE(kl[1].bonding.has_value());
  EXPECT_TRUE(kl[1].bonding->verify_on_generator_pairs());
  auto ad = core_quotient_tower(alt_diagonal_chain(cyclic_group(3, 3), 5, 1));
  EXPECT_EQ(ad[1].H.order(), 60u);
}

TEST(Discriminant, Dyadic) {
  DiscriminantTower d = discriminant_tower(odometer(std::vector<std::uint64_t>(8, 2)), at_depth(8));
  for (auto o : d.orders()) EXPECT_EQ(o, 1u);
}

TEST(Discriminant, KleinOrders) {
  DiscriminantTower d = discriminant_tower(rt_klein(8), at_depth(8));
  // D_1 is trivial: G_1 has index 2, hence is normal, and H_1 acts regularly.
  EXPECT_EQ(d.orders(), (std::vector<std::uint64_t>{1, 1, 2, 2, 2, 2, 2, 2, 2}));
  for (const auto& l : d.levels) {
    EXPECT_EQ(l.h_order, l.degree * l.D.order());
    EXPECT_TRUE(l.bonding_verified);
  }
}

TEST(Discriminant, EventualImagesAreMonotone) {
  DiscriminantTower d = discriminant_tower(product_fixture(), at_depth(3));
  EXPECT_EQ(d.orders(), (std::vector<std::uint64_t>{1, 5, 5, 5}));
  for (const auto& l : d.levels) {
    for (std::size_t i = 1; i < l.image_orders.size(); ++i) EXPECT_LE(l.image_orders[i], l.image_orders[i - 1]);
    EXPECT_EQ(l.eventual.order(), l.image_orders.back());
  }
}

TEST(Molino, KleinFiberSizesAndRegularity) {
  MolinoTower m = molino_tower(rt_klein(6), at_depth(6));
  EXPECT_EQ(m.tower.degrees(), (std::vector<std::size_t>{1, 2, 8, 16, 32, 64, 128}));
  EXPECT_EQ(m.fiber_sizes, (std::vector<std::uint64_t>{1, 1, 2, 2, 2, 2, 2}));
  EXPECT_TRUE(validate(m.tower).ok());
  auto raw = support::raw(m.tower);
  for (std::size_t l = 0; l <= 6; ++l) EXPECT_EQ(oracle::level_orders(raw, l).second, 1u);
}

TEST(Molino, RegularTowerIsItsOwnMolinoTower) {
  ChainTower t = odometer(std::vector<std::uint64_t>(5, 2));
  MolinoTower m = molino_tower(t, at_depth(5));
  EXPECT_EQ(m.tower.degrees(), t.degrees());
  EXPECT_EQ(equivalence_probe(m.tower, t, 5).verdict, EquivalenceKind::equivalent);
}

TEST(Classify, Goldens) {
  EXPECT_EQ(classify(odometer(std::vector<std::uint64_t>(6, 2)), at_depth(6)).verdict, Regularity::regular);
  Classification p = classify(product_fixture(), at_depth(3));
  EXPECT_EQ(p.verdict, Regularity::weakly_normal);
  EXPECT_EQ(p.witness, 1u);
  Classification k = classify(rt_klein(6), at_depth(6));
  EXPECT_EQ(k.verdict, Regularity::irregular);
  EXPECT_EQ(k.scan_last, 4u);
  EXPECT_EQ(classify(alt_diagonal_chain(cyclic_group(3, 3), 5, 3), at_depth(3)).verdict, Regularity::irregular);
}

TEST(Classify, DegenerateDepthsAreVacuous) {
  EXPECT_EQ(classify(odometer({2}), at_depth(0)).verdict, Regularity::regular);
  EXPECT_EQ(stability_report(odometer({2}), at_depth(1)).verdict, StabilityKind::undetermined);
}

TEST(Stability, Goldens) {
  StabilityReport d = stability_report(odometer(std::vector<std::uint64_t>(6, 2)), at_depth(6));
  EXPECT_EQ(d.verdict, StabilityKind::stable);
  EXPECT_EQ(d.n0, 0u);
  StabilityReport k = stability_report(rt_klein(6), at_depth(6));
  EXPECT_EQ(k.verdict, StabilityKind::stable);
  for (const auto& row : k.rows) {
    if (row.in_margin) {
      EXPECT_EQ(row.fingerprint.name(), "C2");
    }
  }
  StabilityReport p = stability_report(product_fixture(), at_depth(3));
  EXPECT_EQ(p.verdict, StabilityKind::stable);
  EXPECT_EQ(p.n0, 1u);
  StabilityReport f = stability_report(full_product_chain({{cyclic_group(3, 3), 5}, {cyclic_group(3, 3), 5},
                                                           {cyclic_group(3, 3), 5}}),
                                       at_depth(3));
  EXPECT_EQ(f.verdict, StabilityKind::wild);
}

TEST(Stability, AltDiagonalIsConstantC3) {
  StabilityReport s = stability_report(alt_diagonal_chain(cyclic_group(3, 3), 5, 3), at_depth(3));
  ASSERT_EQ(s.rows.size(), 3u);
  for (const auto& row : s.rows) EXPECT_EQ(row.fingerprint.name(), "C3");
  EXPECT_EQ(s.verdict, StabilityKind::stable);
  for (const auto& p : s.psi) EXPECT_TRUE(p.surjective);
}

TEST(Kernel, DyadicOnlyIdentity) {
  ChainTower t = odometer(std::vector<std::uint64_t>(8, 2));
  auto ws = kernel_words(t, 6, 8);
  ASSERT_EQ(ws.size(), 1u);
  EXPECT_TRUE(ws[0].acts_trivially);
}

TEST(Kernel, KleinFindsB) {
  auto ws = kernel_words(rt_klein(6), 4, 6);
  EXPECT_TRUE(contains_word(ws, kB));
  for (const auto& k : ws) EXPECT_EQ(k.certified_depth, 6u);
}

TEST(Kernel, RebasedKleinFindsBSquaredNotB) {
  auto ws = kernel_words(klein_rebased(6), 4, 6);
  EXPECT_TRUE(contains_word(ws, kB2));
  EXPECT_FALSE(contains_word(ws, kB));
}

TEST(Kernel, MatchesOracleClasses) {
  ChainTower t = rt_klein(4);
  auto raw = support::raw(t);
  auto expected = oracle::kernel_classes(raw, 4);
  auto ws = kernel_words(t, 4, 4);
  EXPECT_EQ(ws.size(), expected.size());
  for (const auto& [action, word] : expected) {
    if (word.empty()) continue;
    EXPECT_TRUE(contains_word(ws, word)) << word.format(t.generator_names());
  }
}

TEST(Holonomy, KleinB) {
  ChainTower t = rt_klein(6);
  HolonomyVerdict v = holonomy_test(t, kB, 6);
  EXPECT_FALSE(v.trivial);
  ASSERT_EQ(v.witnesses.size(), v.scan_last + 1);
  for (std::size_t n = 0; n < v.witnesses.size(); ++n) {
    const FiberPoint& y = v.witnesses[n];
    EXPECT_TRUE(cylinder(t, basepoint(t), n).contains(y));
    EXPECT_NE(t.act(6, kB, y.coords[6]), y.coords[6]);
  }
  HolonomyVerdict v2 = holonomy_test(t, kB2, 6);
  EXPECT_TRUE(v2.trivial);
  EXPECT_EQ(v2.level, 0u);
  EXPECT_THROW(holonomy_test(t, Word({1}), 6), DomainError);
}

TEST(Holonomy, KernelAgainstDiscriminant) {
  TowerAnalysis k(rt_klein(6), at_depth(6));
  KernelDiscriminantReport r = kernel_vs_discriminant(k, 6, 4);
  EXPECT_TRUE(r.sets_agree);
  EXPECT_FALSE(r.germinal_words.empty());
  EXPECT_TRUE(r.nontrivial_fiber_consistent);
  TowerAnalysis a(alt_diagonal_chain(cyclic_group(3, 3), 5, 3), at_depth(3));
  EXPECT_TRUE(kernel_vs_discriminant(a, 3, 6).germinal_words.empty());
}

TEST(Sqa, KleinNoneFound) {
  TowerAnalysis a(rt_klein(6), at_depth(6));
  SqaVerdict v = sqa_violation_search(a, 6, 6);
  EXPECT_FALSE(v.violation);
  EXPECT_EQ(v.scope, "word-level only");
  EXPECT_GT(v.classes_examined, 0u);
}

TEST(Sqa, FixtureViolation) {
  ChainTower t = sqa_fixture();
  TowerAnalysis a(t, at_depth(3));
  SqaVerdict v = sqa_violation_search(a, 3, 6);
  ASSERT_TRUE(v.violation);
  EXPECT_EQ(v.level, 1u);
  ASSERT_TRUE(v.witness.has_value());
  // The word fixes every point below (level, point) and moves the witness.
  for (std::size_t z = 0; z < t.degree(3); ++z) {
    if (t.project(static_cast<Point>(z), 3, v.level) == v.point) {
      EXPECT_EQ(t.act(3, v.word, static_cast<Point>(z)), z);
    }
  }
  EXPECT_NE(t.act(3, v.word, v.witness->coords[3]), v.witness->coords[3]);
}

TEST(Equivalence, Goldens) {
  ChainTower o2 = odometer({2, 2, 2, 2});
  ChainTower o4 = odometer({4, 4});
  ChainTower o3 = odometer({3, 3, 3});
  EquivalenceResult e = equivalence_probe(o2, o4, 6);
  EXPECT_EQ(e.verdict, EquivalenceKind::equivalent);
  EXPECT_FALSE(e.interleaving.empty());
  EXPECT_EQ(equivalence_probe(o2, o3, 6).verdict, EquivalenceKind::distinct);
  ChainTower k = rt_klein(6);
  EquivalenceResult c = equivalence_probe(k, klein_rebased(6), 6);
  EXPECT_EQ(c.verdict, EquivalenceKind::conjugate_equivalent);
  ASSERT_TRUE(c.point.has_value());
  EXPECT_THROW(equivalence_probe(o2, k, 4), DomainError);
}

TEST(VirtualRegularity, KleinIndexTwo) {
  std::vector<std::string> names{"a", "b"};
  VirtualRegularityReport r =
      virtual_regularity_probe(rt_klein(6), {{Word::parse("a", names), Word::parse("b^2", names)}}, 6);
  EXPECT_EQ(r.verdict, VirtualRegularityKind::virtually_regular);
  ASSERT_EQ(r.probes.size(), 2u);
  EXPECT_EQ(r.probes[1].index, std::optional<std::size_t>(2));
  EXPECT_TRUE(r.probes[1].normal);
}

TEST(VirtualRegularity, RegularTowerWitnessIsWholeGroup) {
  VirtualRegularityReport r = virtual_regularity_probe(odometer({2, 2, 2}), {}, 3);
  EXPECT_EQ(r.verdict, VirtualRegularityKind::virtually_regular);
  EXPECT_EQ(r.witness, std::optional<std::size_t>(0));
}

TEST(VirtualRegularity, RestrictionIsOrbitAction) {
  ChainTower t = rt_klein(4);
  ChainTower r = restrict_to_subgroup(t, {Word({1, 1})}, 4);
  EXPECT_TRUE(validate(r).ok());
  EXPECT_EQ(r.degrees(), (std::vector<std::size_t>{1, 1, 2, 4, 8}));
  EXPECT_EQ(r.origin_words()[0], Word({1, 1}));
}
