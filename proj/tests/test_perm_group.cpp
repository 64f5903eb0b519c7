#include <random>

#include <gtest/gtest.h>

#include "oracle.hpp"
#include "solch/builders.hpp"
#include "solch/core.hpp"
#include "solch/finite_group.hpp"
#include "solch/perm_group.hpp"

using namespace solch;

namespace {

Permutation random_permutation(std::size_t n, std::mt19937& rng) {
  std::vector<Point> p(n);
  for (std::size_t i = 0; i < n; ++i) p[i] = static_cast<Point>(i);
  std::shuffle(p.begin(), p.end(), rng);
  return Permutation(std::move(p));
}

PermutationGroup group(std::size_t n, std::initializer_list<const char*> cycles) {
  std::vector<Permutation> gens;
  for (const char* c : cycles) gens.push_back(Permutation::from_cycles(n, c));
  return PermutationGroup(n, gens);
}

}  // namespace

TEST(PermutationGroup, OrderAndMembershipMatchClosure) {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 60; ++trial) {
    std::size_t n = 2 + rng() % 6;
    std::vector<Permutation> gens{random_permutation(n, rng), random_permutation(n, rng)};
    if (trial % 3 == 0) gens.pop_back();
    PermutationGroup g(n, gens);
    auto all = oracle::closure(gens, n);
    ASSERT_EQ(g.order(), all.size());
    for (int k = 0; k < 20; ++k) {
      Permutation p = random_permutation(n, rng);
      EXPECT_EQ(g.contains(p), all.count(oracle::images_of(p)) == 1);
    }
    for (const auto& e : g.elements()) EXPECT_TRUE(all.count(oracle::images_of(e)));
    EXPECT_EQ(g.elements().size(), all.size());
  }
}

TEST(PermutationGroup, OrbitStabilizer) {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 40; ++trial) {
    std::size_t n = 2 + rng() % 7;
    std::vector<Permutation> gens{random_permutation(n, rng), random_permutation(n, rng)};
    PermutationGroup g(n, gens);
    auto all = oracle::closure(gens, n);
    for (Point p = 0; p < n; ++p) {
      OrbitResult o = orbit(g, p);
      PermutationGroup s = stabilizer(g, p);
      EXPECT_EQ(s.order(), oracle::stabilizer_order(all, p));
      EXPECT_EQ(o.points.size() * s.order(), g.order());
    }
  }
}

TEST(PermutationGroup, SymmetricAndAlternatingOrders) {
  EXPECT_EQ(alternating_group(5).order(), 60u);
  EXPECT_EQ(alternating_group(12).order(), 239500800u);
  EXPECT_EQ(group(6, {"(0 1)", "(0 1 2 3 4 5)"}).order(), 720u);
  EXPECT_TRUE(PermutationGroup::trivial(4).is_trivial());
}

TEST(GroupMap, BlockQuotientIsHomomorphism) {
  // D4 on the square's vertices acts on the two diagonals.
  PermutationGroup d4 = group(4, {"(0 1 2 3)", "(1 3)"});
  auto [quotient, map] = induced_action(d4, {0, 1, 0, 1});
  EXPECT_EQ(quotient.order(), 2u);
  EXPECT_TRUE(map.verify_on_generator_pairs());
  PermutationGroup kernel = kernel_of_action(map);
  EXPECT_EQ(kernel.order(), 4u);
  EXPECT_EQ(kernel.order() * quotient.order(), d4.order());
}

TEST(GroupMap, RejectsNonInvariantPartition) {
  PermutationGroup d4 = group(4, {"(0 1 2 3)", "(1 3)"});
  EXPECT_THROW(induced_action(d4, {0, 0, 1, 1}), ValidationError);
}

TEST(GroupMap, NormalClosure) {
  PermutationGroup s4 = group(4, {"(0 1)", "(0 1 2 3)"});
  EXPECT_EQ(normal_closure(s4, {Permutation::from_cycles(4, "(0 1)(2 3)")}).order(), 4u);
  EXPECT_EQ(normal_closure(s4, {Permutation::from_cycles(4, "(0 1 2)")}).order(), 12u);
  EXPECT_EQ(normal_closure(s4, {Permutation::from_cycles(4, "(0 1)")}).order(), 24u);
}

TEST(Core, AlternatingThreeInTwelveIsCoreFree) {
  PermutationGroup a12 = alternating_group(12);
  PermutationGroup a3(12, {Permutation::from_cycles(12, "(0 1 2)")});
  CoreResult r = core_triviality_witness(a12, a3);
  ASSERT_EQ(r.verdict, CoreVerdict::trivial);
  ASSERT_FALSE(r.witnesses.empty());
  for (const auto& w : r.witnesses) {
    EXPECT_TRUE(a3.contains(w.element));
    EXPECT_FALSE(w.element.is_identity());
    EXPECT_TRUE(a12.contains(w.conjugator));
    EXPECT_FALSE(a3.contains(w.conjugator.inverse() * w.element * w.conjugator));
  }
}

TEST(Core, KleinFourInAlternatingFourIsNormal) {
  PermutationGroup a4 = alternating_group(4);
  PermutationGroup v4 = group(4, {"(0 1)(2 3)", "(0 2)(1 3)"});
  CoreResult r = core_triviality_witness(a4, v4);
  EXPECT_EQ(r.verdict, CoreVerdict::nontrivial);
  ASSERT_TRUE(r.core_element.has_value());
  EXPECT_TRUE(v4.contains(*r.core_element));
  EXPECT_EQ(r.core_order, 4u);
}

TEST(Core, SingleInvolutionInAlternatingFourIsCoreFree) {
  PermutationGroup a4 = alternating_group(4);
  PermutationGroup c2 = group(4, {"(0 1)(2 3)"});
  EXPECT_EQ(core_triviality_witness(a4, c2).verdict, CoreVerdict::trivial);
}

TEST(Core, RejectsSubgroupOutsideAmbient) {
  PermutationGroup a4 = alternating_group(4);
  EXPECT_THROW(core_triviality_witness(a4, group(4, {"(0 1)"})), DomainError);
}

TEST(Fingerprint, DistinguishesSmallGroups) {
  auto fp = [](const PermutationGroup& g) { return fingerprint(FiniteGroup(g.generators(), 10000)); };
  Fingerprint c4 = fp(group(4, {"(0 1 2 3)"}));
  Fingerprint v4 = fp(group(4, {"(0 1)(2 3)", "(0 2)(1 3)"}));
  EXPECT_EQ(c4.name(), "C4");
  EXPECT_EQ(v4.name(), "C2 x C2");
  EXPECT_FALSE(c4 == v4);
  Fingerprint a5 = fp(alternating_group(5));
  EXPECT_EQ(a5.order, 60u);
  EXPECT_TRUE(a5.abelian_invariants.empty());
  EXPECT_FALSE(fingerprint(alternating_group(6).generators(), 360, 100).complete);
}

TEST(Fingerprint, IsomorphismSearch) {
  // S3 as a permutation group of degree 3 and acting on six points.
  FiniteGroup s3(group(3, {"(0 1)", "(0 1 2)"}).generators(), 100);
  FiniteGroup s3_regular(group(6, {"(0 1)(2 5)(3 4)", "(0 2 4)(1 3 5)"}).generators(), 100);
  FiniteGroup c6(group(6, {"(0 1 2 3 4 5)"}).generators(), 100);
  EXPECT_EQ(isomorphic(s3, s3_regular), std::optional<bool>(true));
  EXPECT_EQ(isomorphic(s3, c6), std::optional<bool>(false));
  // Q8 and D4 share order and abelianization but not element orders.
  FiniteGroup q8(group(8, {"(0 1 3 6)(2 5 7 4)", "(0 2 3 7)(1 4 6 5)"}).generators(), 100);
  FiniteGroup d4(group(4, {"(0 1 2 3)", "(1 3)"}).generators(), 100);
  EXPECT_EQ(q8.size(), 8u);
  EXPECT_EQ(isomorphic(q8, d4), std::optional<bool>(false));
  EXPECT_EQ(isomorphic(q8, d4, 4), std::nullopt);
}
