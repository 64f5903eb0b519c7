#include <random>

#include <gtest/gtest.h>

#include "oracle.hpp"
#include "solch/errors.hpp"
#include "solch/permutation.hpp"
#include "solch/word.hpp"

using namespace solch;

namespace {

Permutation random_permutation(std::size_t n, std::mt19937& rng) {
  std::vector<Point> p(n);
  for (std::size_t i = 0; i < n; ++i) p[i] = static_cast<Point>(i);
  std::shuffle(p.begin(), p.end(), rng);
  return Permutation(std::move(p));
}

}  // namespace

TEST(Permutation, ComposesRightToLeft) {
  Permutation p = Permutation::from_cycles(3, "(0 1)");
  Permutation q = Permutation::from_cycles(3, "(1 2)");
  // (p*q)(x) = p(q(x)): 1 -> 2 -> 2, 2 -> 1 -> 0.
  EXPECT_EQ((p * q)(1), 2u);
  EXPECT_EQ((p * q)(2), 0u);
  EXPECT_EQ((p * q).to_cycles(), "(0 1 2)");
}

TEST(Permutation, RejectsNonBijections) {
  EXPECT_THROW(Permutation(std::vector<Point>{0, 0}), Error);
  EXPECT_THROW(Permutation(std::vector<Point>{0, 2}), Error);
}

TEST(Permutation, CycleRoundTrip) {
  Permutation p = Permutation::from_cycles(8, "(0 1 3 6)(2 5 7 4)");
  EXPECT_EQ(Permutation::from_cycles(8, p.to_cycles()), p);
  EXPECT_EQ(p.order(), 4u);
  EXPECT_TRUE(p.is_even());
  EXPECT_FALSE(Permutation::from_cycles(4, "(0 1)").is_even());
}

TEST(Permutation, GroupLawsOnRandomSamples) {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    std::size_t n = 1 + rng() % 12;
    Permutation a = random_permutation(n, rng), b = random_permutation(n, rng), c = random_permutation(n, rng);
    EXPECT_EQ((a * b) * c, a * (b * c));
    EXPECT_TRUE((a * a.inverse()).is_identity());
    EXPECT_EQ((a * b).inverse(), b.inverse() * a.inverse());
    EXPECT_EQ(oracle::images_of(a * b), oracle::compose(oracle::images_of(a), oracle::images_of(b)));
    Permutation power(n);
    for (std::uint64_t k = 0; k < a.order(); ++k) power = power * a;
    EXPECT_TRUE(power.is_identity());
  }
}

TEST(Word, ParseAndFormat) {
  std::vector<std::string> names{"a", "b"};
  Word w = Word::parse("b a b^-1 a", names);
  EXPECT_EQ(w.letters(), (std::vector<int>{2, 1, -2, 1}));
  EXPECT_EQ(w.format(names), "b a b^-1 a");
  EXPECT_EQ(Word::parse("a^3", names).letters(), (std::vector<int>{1, 1, 1}));
  EXPECT_EQ(Word::parse("b^-2", names).format(names), "b^-2");
  EXPECT_EQ(Word().format(names), "1");
}

TEST(Word, ParseErrorsCarryPosition) {
  std::vector<std::string> names{"a", "b"};
  try {
    (void)Word::parse("a c", names);
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.position(), 2u);
  }
  EXPECT_THROW((void)Word::parse("a^", names), ParseError);
}

TEST(Word, ReductionAndInverse) {
  Word w({1, 2, -2, -1, 1});
  EXPECT_EQ(w.reduced(), Word({1}));
  Word u({1, -2, 1});
  EXPECT_EQ((u * u.inverse()).reduced(), Word());
}

TEST(Word, ShortlexOrderMatchesLetterRanks) {
  // a < a^-1 < b < b^-1, then longer words.
  std::vector<Word> ws{Word({1}), Word({-1}), Word({2}), Word({-2}), Word({1, 1})};
  EXPECT_TRUE(std::is_sorted(ws.begin(), ws.end()));
  auto all = oracle::reduced_words(2, 3);
  EXPECT_EQ(all.size(), 1u + 4u + 12u + 36u);
  EXPECT_TRUE(std::is_sorted(all.begin(), all.end()));
}
