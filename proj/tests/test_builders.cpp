#include <gtest/gtest.h>

#include "support.hpp"
#include "solch/builders.hpp"
#include "solch/invariants.hpp"

using namespace solch;

namespace {

PermutationGroup z3() { return cyclic_group(3, 3); }

std::vector<std::size_t> degrees(const ChainTower& t) { return t.degrees(); }

}  // namespace

TEST(Odometer, Degrees) {
  EXPECT_EQ(degrees(odometer({2, 2, 2})), (std::vector<std::size_t>{1, 2, 4, 8}));
  EXPECT_EQ(degrees(odometer({2, 3})), (std::vector<std::size_t>{1, 2, 6}));
  ChainTower six = odometer({6});
  EXPECT_EQ(six.images(1)[0].to_cycles(), "(0 1 2 3 4 5)");
  // a is the +1 step: the basepoint goes to (0, 1, 1, ...).
  ChainTower d = odometer({2, 2, 2, 2, 2});
  FiberPoint y = act(d, Word::generator(0), basepoint(d));
  EXPECT_EQ(y.coords, (std::vector<Point>{0, 1, 1, 1, 1, 1}));
  EXPECT_THROW(odometer({1, 2}), Error);
}

TEST(RtKlein, LevelOneAction) {
  ChainTower t = rt_klein(3);
  EXPECT_EQ(degrees(t), (std::vector<std::size_t>{1, 2, 4, 8}));
  EXPECT_EQ(t.images(1)[0].to_cycles(), "(0 1)");
  EXPECT_TRUE(t.images(1)[1].is_identity());
  EXPECT_THROW(rt_klein(0), DomainError);
}

TEST(ProductChain, DegreesAndCoreCheck) {
  PermutationGroup a5 = alternating_group(5);
  PermutationGroup k(5, {Permutation::from_cycles(5, "(0 1 2 3 4)")});
  ChainTower t = product_chain(a5, k, {2, 2});
  EXPECT_EQ(degrees(t), (std::vector<std::size_t>{1, 24, 48}));
  EXPECT_TRUE(validate(t).ok());
  PermutationGroup a4 = alternating_group(4);
  PermutationGroup v4(4, {Permutation::from_cycles(4, "(0 1)(2 3)"), Permutation::from_cycles(4, "(0 2)(1 3)")});
  EXPECT_THROW(product_chain(a4, v4, {2}), ValidationError);
}

TEST(ProductChain, TruncationAtOneIsRegular) {
  PermutationGroup a5 = alternating_group(5);
  PermutationGroup k(5, {Permutation::from_cycles(5, "(0 1 2 3 4)")});
  ChainTower t = product_chain(a5, k, {2, 2, 2});
  ChainTower t1 = truncate(t, 1);
  auto raw = support::raw(t1);
  for (std::size_t l = 0; l <= t1.depth(); ++l) EXPECT_EQ(oracle::level_orders(raw, l).second, 1u) << l;
}

TEST(AltDiagonal, DegreesFollowIndexArithmetic) {
  ChainTower t = alt_diagonal_chain(z3(), 5, 3);
  EXPECT_EQ(degrees(t), (std::vector<std::size_t>{1, 20, 1200, 72000}));
  EXPECT_TRUE(validate(t).ok());
  EXPECT_THROW(alt_diagonal_chain(z3(), 5, 3, 0, {CoreMode::strict, 1000, {}}), BudgetError);
}

TEST(AltDiagonal, TrivialFIsRegular) {
  ChainTower t = alt_diagonal_chain(PermutationGroup::trivial(1), 5, 2);
  EXPECT_EQ(degrees(t), (std::vector<std::size_t>{1, 60, 3600}));
  EXPECT_EQ(classify(t).verdict, Regularity::regular);
}

TEST(AltDiagonal, CoreChecks) {
  // <(0 1)(2 3)> is not normal in Alt(4): its core is trivial.
  PermutationGroup c2(4, {Permutation::from_cycles(4, "(0 1)(2 3)")});
  EXPECT_NO_THROW(alt_diagonal_spec(c2, 4, 1));
  // The Klein four-group is normal in Alt(4) and is rejected with a core element.
  PermutationGroup v4(4, {Permutation::from_cycles(4, "(0 1)(2 3)"), Permutation::from_cycles(4, "(0 2)(1 3)")});
  EXPECT_THROW(alt_diagonal_spec(v4, 4, 1), ValidationError);
  EXPECT_THROW(alt_diagonal_spec(PermutationGroup(3, {Permutation::from_cycles(3, "(0 1)")}), 5, 1), ValidationError);
}

TEST(FullProduct, Degrees) {
  ChainTower t = full_product_chain({{z3(), 5}, {z3(), 5}, {z3(), 5}});
  EXPECT_EQ(degrees(t), (std::vector<std::size_t>{1, 20, 400, 8000}));
  EXPECT_TRUE(validate(t).ok());
}

TEST(FullProduct, SingleFactorMatchesDiagonal) {
  ChainTower a = full_product_chain({{z3(), 5}});
  ChainTower b = alt_diagonal_chain(z3(), 5, 1);
  EXPECT_EQ(degrees(a), degrees(b));
  auto ra = support::raw(a), rb = support::raw(b);
  EXPECT_EQ(oracle::level_orders(ra, 1), oracle::level_orders(rb, 1));
  EXPECT_EQ(equivalence_probe(a, b, 1).verdict, EquivalenceKind::equivalent);
}

TEST(Lenstra, CyclicSpecReproducesDyadic) {
  ChainTower l = lenstra_chain(cyclic_spec(5)).tower;
  ChainTower d = odometer({2, 2, 2, 2, 2});
  EXPECT_EQ(degrees(l), degrees(d));
  EXPECT_EQ(equivalence_probe(l, d, 5).verdict, EquivalenceKind::equivalent);
}

TEST(Lenstra, WholeGroupDiscriminantRejected) {
  QuotientTowerSpec s = cyclic_spec(2);
  s.discriminants[1] = s.groups[1];
  EXPECT_THROW(lenstra_chain(s), ValidationError);
}

TEST(Lenstra, IncoherentGeneratorsRejected) {
  QuotientTowerSpec s = cyclic_spec(3);
  s.generator_images[2][0] = s.generator_images[2][0] * s.generator_images[2][0] * s.generator_images[2][0];
  EXPECT_THROW(lenstra_chain(s), ValidationError);
}

TEST(Lenstra, CoreModes) {
  PermutationGroup a4 = alternating_group(4);
  PermutationGroup v4(4, {Permutation::from_cycles(4, "(0 1)(2 3)"), Permutation::from_cycles(4, "(0 2)(1 3)")});
  QuotientTowerSpec s = product_spec(a4, v4, {2});
  EXPECT_THROW(lenstra_chain(s), ValidationError);
  LenstraChain q = lenstra_chain(s, {CoreMode::quotient, kDefaultDegreeCap, {}});
  EXPECT_EQ(q.tower.degree(1), 6u);
  EXPECT_EQ(q.cores[0].verdict, CoreVerdict::nontrivial);
  EXPECT_FALSE(q.tower.source().notes.empty());
}

TEST(Lenstra, EventualDiscriminantsMatchInput) {
  QuotientTowerSpec s = alt_diagonal_spec(z3(), 5, 2);
  ChainTower t = lenstra_chain(s).tower;
  AnalysisOptions o;
  o.depth = 0;
  DiscriminantTower d = discriminant_tower(t, o);
  for (std::size_t l = 1; l <= t.depth(); ++l) {
    Fingerprint input = fingerprint(s.discriminants[l - 1].generators(), s.discriminants[l - 1].order());
    EXPECT_EQ(d.levels[l].eventual_fingerprint, input) << "level " << l;
  }
}

TEST(FreeTree, RejectsBadDegrees) {
  EXPECT_THROW(free_tree_tower({"a"}, {2, 3}, {{Permutation::from_cycles(2, "(0 1)")},
                                                {Permutation::from_cycles(3, "(0 1 2)")}}),
               ValidationError);
  ChainTower s = sqa_fixture();
  EXPECT_EQ(degrees(s), (std::vector<std::size_t>{1, 2, 4, 8}));
}
