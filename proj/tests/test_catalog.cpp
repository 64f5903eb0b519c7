#include <cctype>
#include <map>
#include <numeric>

#include <gtest/gtest.h>

#include "oracle.hpp"
#include "solch/catalog.hpp"
#include "solch/todd_coxeter.hpp"

using namespace solch;

namespace {

/// Index-n normal subgroups of the free group on two generators, counted as
/// pairs in S_n generating a regular group, up to relabeling the n-1
/// non-base points.
std::size_t brute_force_normal_count(std::size_t n) {
  std::vector<Point> p(n);
  std::iota(p.begin(), p.end(), Point{0});
  std::vector<Permutation> all;
  do {
    all.emplace_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  std::size_t count = 0;
  for (const auto& x : all) {
    for (const auto& y : all) {
      // Regular means transitive with every element determined by the image
      // of 0, so the closure stops as soon as it exceeds n elements.
      std::set<oracle::Images> seen{oracle::images_of(Permutation(n))};
      std::vector<oracle::Images> queue(seen.begin(), seen.end());
      bool too_big = false;
      for (std::size_t i = 0; i < queue.size() && !too_big; ++i) {
        for (const auto* g : {&x, &y}) {
          auto m = oracle::compose(oracle::images_of(*g), queue[i]);
          if (seen.insert(m).second) {
            queue.push_back(m);
            if (queue.size() > n) {
              too_big = true;
              break;
            }
          }
        }
      }
      if (too_big || queue.size() != n) continue;
      std::set<Point> orbit;
      for (const auto& g : queue) orbit.insert(g[0]);
      if (orbit.size() == n) ++count;
    }
  }
  std::size_t relabel = 1;
  for (std::size_t k = 2; k < n; ++k) relabel *= k;
  return count / relabel;
}

}  // namespace

TEST(SmallGroups, OrdersMatchNames) {
  for (const auto& g : small_groups()) {
    std::uint64_t order = g.group.order();
    std::string digits;
    for (char c : g.name) {
      if (std::isdigit(static_cast<unsigned char>(c))) digits += c;
    }
    if (g.name[0] == 'C' && g.name.find('x') == std::string::npos) {
      EXPECT_EQ(order, std::stoull(digits)) << g.name;
    }
    if (g.name == "Q8" || g.name == "D4" || g.name == "C4xC2" || g.name == "C2xC2xC2") {
      EXPECT_EQ(order, 8u);
    }
    if (g.name == "A4" || g.name == "D6" || g.name == "Dic3" || g.name == "C6xC2") {
      EXPECT_EQ(order, 12u);
    }
  }
}

TEST(NormalSubgroups, EachIsNormalOfStatedIndex) {
  Presentation free2 = Presentation::parse({"x", "y"}, {});
  auto all = free_normal_subgroups(12);
  EXPECT_EQ(all.size(), 149u);
  for (const auto& n : all) {
    CosetTable t = todd_coxeter(free2, n.words, 1000);
    ASSERT_TRUE(t.complete);
    EXPECT_EQ(t.coset_count, n.index) << n.quotient;
    for (const auto& w : n.words) {
      for (int g : {1, -1, 2, -2}) {
        Word c = Word({-g}) * w * Word({g});
        EXPECT_EQ(t.trace(0, c.reduced()), 0u) << n.quotient;
      }
    }
    auto action = action_from_table(t);
    EXPECT_EQ(PermutationGroup(n.index, action).order(), n.index) << n.quotient;
  }
}

TEST(NormalSubgroups, CountsMatchBruteForce) {
  std::map<std::size_t, std::size_t> by_index;
  for (const auto& n : free_normal_subgroups(12)) ++by_index[n.index];
  for (std::size_t n = 2; n <= 6; ++n) EXPECT_EQ(by_index[n], brute_force_normal_count(n)) << "index " << n;
}

TEST(NormalSubgroups, DistinctKernels) {
  Presentation free2 = Presentation::parse({"x", "y"}, {});
  auto all = free_normal_subgroups(12);
  // Two subgroups are equal iff each one's generators lie in the other.
  for (std::size_t i = 0; i < all.size(); ++i) {
    CosetTable ti = todd_coxeter(free2, all[i].words, 1000);
    for (std::size_t j = i + 1; j < all.size(); ++j) {
      if (all[j].index != all[i].index) continue;
      bool inside = std::all_of(all[j].words.begin(), all[j].words.end(),
                                [&](const Word& w) { return ti.trace(0, w) == 0; });
      EXPECT_FALSE(inside) << i << " and " << j;
    }
  }
}

TEST(Fixtures, AllBuildAndAreNamedUniquely) {
  std::set<std::string> names;
  for (const auto& f : fixtures()) {
    EXPECT_TRUE(names.insert(f.name).second);
    ChainTower t = f.build();
    EXPECT_GE(t.depth(), f.depth) << f.name;
  }
  EXPECT_THROW(find_fixture(fixtures(), "nope"), DomainError);
}
