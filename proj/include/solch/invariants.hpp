#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "solch/errors.hpp"
#include "solch/finite_group.hpp"
#include "solch/perm_group.hpp"
#include "solch/regular_orbit.hpp"
#include "solch/todd_coxeter.hpp"
#include "solch/tower.hpp"
#include "solch/word.hpp"

namespace solch {

struct AnalysisOptions {
  /// 0 means the tower depth.
  std::size_t depth = 6;
  std::size_t max_word_length = 6;
  std::size_t degree_cap = 200000;
  /// Largest level image group handled (regular-orbit enumeration).
  std::uint64_t group_order_cap = 2000000;
  std::uint64_t molino_cap = 1000000;
  std::uint64_t fingerprint_cap = 100000;
  /// Exhaustive isomorphism search bound.
  std::size_t isomorphism_bound = 5040;
  /// Words enumerated by any single word search.
  std::uint64_t word_budget = 2000000;
  /// Coset budget for subgroup index checks.
  std::size_t coset_budget = 100000;
  /// Fiber points tried when searching for a conjugate equivalence.
  std::size_t rebase_candidates = 4096;
  std::uint64_t seed = 0;
};

/// Verdicts that depend on how a level sits in the tower look two levels
/// ahead: a cylinder at level depth-1 holds only the points of a single
/// fiber, which small dihedral-type actions can fix pointwise by accident.
inline constexpr std::size_t kMargin = 2;

inline std::size_t effective_depth(const ChainTower& t, const AnalysisOptions& o) {
  return o.depth == 0 ? t.depth() : std::min(o.depth, t.depth());
}

// ---------------------------------------------------------------------------
// Level image groups

/// The faithful image H of a level action with a certified base from the
/// regular orbit, and the basepoint stabilizer D.
struct LevelImage {
  PermutationGroup H;
  PermutationGroup D;
  std::vector<Point> base;
  std::shared_ptr<const RegularOrbit> regular;
};

inline LevelImage level_image(const std::vector<Permutation>& gens, std::size_t degree, std::uint64_t order_cap) {
  if (degree == 1 || gens.empty()) {
    if (degree != 1) throw ValidationError("level without generators has degree " + std::to_string(degree));
    return {PermutationGroup::trivial(1), PermutationGroup::trivial(1), {0}, nullptr};
  }
  auto regular = std::make_shared<const RegularOrbit>(gens, degree, order_cap);
  const auto& base = regular->base();
  PermutationGroup H(degree, gens, {base, true});
  if (H.order() != regular->group_order()) throw Error("stabilizer chain disagrees with regular orbit");
  PermutationGroup D(degree, H.pointwise_stabilizer_generators(1), {base, true});
  if (D.order() * degree != H.order()) {
    throw Error("|H| != d |D| at a level of degree " + std::to_string(degree) + "; internal inconsistency");
  }
  return {std::move(H), std::move(D), base, std::move(regular)};
}

/// Group of the images of `gens` after projecting from `from` down to `to`.
inline std::vector<Permutation> push_down(const ChainTower& t, const std::vector<Permutation>& gens, std::size_t from,
                                          std::size_t to) {
  std::vector<Point> rep(t.degree(to), kNoPoint);
  for (std::size_t x = 0; x < t.degree(from); ++x) {
    Point b = t.project(static_cast<Point>(x), from, to);
    if (rep[b] == kNoPoint) rep[b] = static_cast<Point>(x);
  }
  std::vector<Permutation> out;
  for (const auto& g : gens) {
    std::vector<Point> images(t.degree(to));
    for (std::size_t b = 0; b < images.size(); ++b) images[b] = t.project(g(rep[b]), from, to);
    out.push_back(Permutation::unchecked(std::move(images)));
  }
  return out;
}

/// Memoized level images for one tower.
class TowerAnalysis {
 public:
  TowerAnalysis(ChainTower tower, AnalysisOptions options)
      : tower_(std::move(tower)), options_(options), images_(tower_.depth() + 1) {}

  const ChainTower& tower() const noexcept { return tower_; }
  const AnalysisOptions& options() const noexcept { return options_; }

  const LevelImage& level(std::size_t l) {
    if (!images_.at(l)) {
      if (tower_.degree(l) > options_.degree_cap) {
        throw BudgetError("level " + std::to_string(l) + " degree " + std::to_string(tower_.degree(l)) +
                          " above cap");
      }
      images_[l] = std::make_unique<LevelImage>(level_image(tower_.images(l), tower_.degree(l),
                                                            options_.group_order_cap));
    }
    return *images_[l];
  }

  /// The n-truncation of the tower, generators deduplicated by action.
  TowerAnalysis& truncation(std::size_t n) {
    auto it = truncations_.find(n);
    if (it == truncations_.end()) {
      ChainTower t = truncate(tower_, n, {true});
      it = truncations_.emplace(n, std::make_unique<TowerAnalysis>(std::move(t), options_)).first;
    }
    return *it->second;
  }

 private:
  ChainTower tower_;
  AnalysisOptions options_;
  std::vector<std::unique_ptr<LevelImage>> images_;
  std::map<std::size_t, std::unique_ptr<TowerAnalysis>> truncations_;
};

// ---------------------------------------------------------------------------
// Core quotients and discriminants

struct CoreQuotientLevel {
  PermutationGroup H;
  /// H_{l+1} -> H_l along the projection; absent at the top level.
  std::optional<GroupMap> bonding;
};

inline std::vector<CoreQuotientLevel> core_quotient_tower(TowerAnalysis& a) {
  const ChainTower& t = a.tower();
  std::vector<CoreQuotientLevel> out;
  for (std::size_t l = 0; l <= t.depth(); ++l) {
    CoreQuotientLevel q{a.level(l).H, std::nullopt};
    if (l < t.depth()) {
      q.bonding.emplace(MapKind::tower_bonding, t.images(l + 1), t.images(l), t.degree(l), t.projection(l + 1));
    }
    out.push_back(std::move(q));
  }
  return out;
}

inline std::vector<CoreQuotientLevel> core_quotient_tower(const ChainTower& t, const AnalysisOptions& o = {}) {
  TowerAnalysis a(t, o);
  return core_quotient_tower(a);
}

struct DiscriminantLevel {
  std::uint64_t degree = 1;
  std::uint64_t h_order = 1;
  PermutationGroup D;
  Fingerprint fingerprint;
  /// D_{l+1} -> D_l; absent at the top level.
  std::optional<GroupMap> bonding;
  bool bonding_verified = true;
  /// Image of D_depth in D_l.
  PermutationGroup eventual;
  Fingerprint eventual_fingerprint;
  /// |image(D_m -> D_l)| for m = l..depth.
  std::vector<std::uint64_t> image_orders;
  /// The image chain was constant before depth ran out.
  bool stabilized = false;
  std::size_t stabilized_at = 0;
};

struct DiscriminantTower {
  std::size_t depth = 0;
  std::vector<DiscriminantLevel> levels;

  std::vector<std::uint64_t> orders() const {
    std::vector<std::uint64_t> o;
    for (const auto& l : levels) o.push_back(l.D.order());
    return o;
  }
};

inline DiscriminantTower discriminant_tower(TowerAnalysis& a, std::size_t depth) {
  const ChainTower& t = a.tower();
  const AnalysisOptions& o = a.options();
  depth = std::min(depth, t.depth());
  DiscriminantTower out;
  out.depth = depth;
  for (std::size_t l = 0; l <= depth; ++l) {
    const LevelImage& li = a.level(l);
    DiscriminantLevel dl;
    dl.degree = t.degree(l);
    dl.h_order = li.H.order();
    dl.D = li.D;
    if (dl.h_order != dl.degree * dl.D.order()) throw Error("|H| != d |D|; internal inconsistency");
    dl.fingerprint = fingerprint(dl.D.generators(), dl.D.order(), o.fingerprint_cap);
    out.levels.push_back(std::move(dl));
  }
  for (std::size_t l = 0; l < depth; ++l) {
    const auto& src = out.levels[l + 1].D.generators();
    std::vector<Permutation> images = push_down(t, src, l + 1, l);
    for (const auto& g : images) {
      if (!out.levels[l].D.contains(g)) throw Error("bonding map leaves the discriminant; internal inconsistency");
    }
    GroupMap m(MapKind::tower_bonding, src, std::move(images), t.degree(l), t.projection(l + 1));
    bool exhaustive = out.levels[l + 1].D.order() <= o.isomorphism_bound || src.size() <= 8;
    out.levels[l].bonding_verified = exhaustive ? m.verify_on_generator_pairs() : true;
    if (!exhaustive) {
      // Sampled: the first eight generator pairs.
      std::vector<Permutation> s(src.begin(), src.begin() + 8);
      std::vector<Permutation> si(m.images().begin(), m.images().begin() + 8);
      out.levels[l].bonding_verified =
          GroupMap(MapKind::tower_bonding, s, si, t.degree(l), t.projection(l + 1)).verify_on_generator_pairs();
    }
    if (!out.levels[l].bonding_verified) throw Error("discriminant bonding is not a homomorphism");
    out.levels[l].bonding.emplace(std::move(m));
  }
  for (std::size_t l = 0; l <= depth; ++l) {
    DiscriminantLevel& dl = out.levels[l];
    for (std::size_t m = l; m <= depth; ++m) {
      PermutationGroup img(t.degree(l), push_down(t, out.levels[m].D.generators(), m, l));
      dl.image_orders.push_back(img.order());
      if (m == depth) dl.eventual = std::move(img);
    }
    std::uint64_t last = dl.image_orders.back();
    std::size_t first = 0;
    while (dl.image_orders[first] != last) ++first;
    dl.stabilized_at = l + first;
    dl.stabilized = dl.stabilized_at < depth;
    dl.eventual_fingerprint = fingerprint(dl.eventual.generators(), dl.eventual.order(), o.fingerprint_cap);
    if (l < depth) {
      const auto& up = out.levels[l + 1].eventual;
      for (const auto& g : push_down(t, up.generators(), l + 1, l)) {
        if (!dl.eventual.contains(g)) throw Error("eventual images are not monotone; internal inconsistency");
      }
    }
  }
  return out;
}

inline DiscriminantTower discriminant_tower(const ChainTower& t, const AnalysisOptions& o = {}) {
  TowerAnalysis a(t, o);
  return discriminant_tower(a, effective_depth(t, o));
}

// ---------------------------------------------------------------------------
// Molino tower

struct MolinoTower {
  ChainTower tower;
  /// fibration[l][h] is h . basepoint on the original level l.
  std::vector<std::vector<Point>> fibration;
  std::vector<std::uint64_t> fiber_sizes;
};

/// Level l is H_l acting on itself by left translation.  Elements are
/// labelled by the lexicographic rank of their base images, so the identity
/// is point 0.
inline MolinoTower molino_tower(TowerAnalysis& a, std::size_t depth) {
  const ChainTower& t = a.tower();
  depth = std::min(depth, t.depth());
  std::size_t r = t.generator_count();
  std::vector<TowerLevel> levels(depth + 1);
  MolinoTower out{ChainTower({"_"}, {TowerLevel{{Permutation(1)}, {}}}), {}, {}};
  std::vector<std::vector<std::uint32_t>> ranks(depth + 1);
  std::vector<const TupleOrbit*> orbits(depth + 1, nullptr);
  for (std::size_t l = 0; l <= depth; ++l) {
    const LevelImage& li = a.level(l);
    if (li.H.order() > a.options().molino_cap) {
      throw BudgetError("Molino level " + std::to_string(l) + " has " + std::to_string(li.H.order()) +
                        " points, above cap");
    }
    std::vector<Point> fib;
    if (!li.regular) {
      for (std::size_t g = 0; g < r; ++g) levels[l].images.emplace_back(1);
      fib.push_back(0);
      ranks[l] = {0};
    } else {
      const TupleOrbit& orb = li.regular->orbit();
      orbits[l] = &orb;
      ranks[l] = li.regular->lex_ranks();
      std::size_t n = orb.size();
      fib.assign(n, 0);
      for (std::size_t g = 0; g < r; ++g) {
        std::vector<Point> images(n);
        for (std::size_t i = 0; i < n; ++i) images[ranks[l][i]] = ranks[l][orb.action(g)[i]];
        levels[l].images.emplace_back(std::move(images));
      }
      for (std::size_t i = 0; i < n; ++i) fib[ranks[l][i]] = orb.coordinate(i, 0);
    }
    if (l > 0) {
      // The quotient map is equivariant and sends the identity to the
      // identity; propagate along the breadth-first tree.
      std::size_t n = ranks[l].size();
      std::vector<std::uint32_t> down(n, 0);
      if (orbits[l]) {
        const TupleOrbit& orb = *orbits[l];
        for (std::size_t i = 1; i < n; ++i) {
          std::uint32_t p = down[orb.parent(i)];
          down[i] = orbits[l - 1] ? orbits[l - 1]->action(orb.parent_generator(i))[p] : 0;
        }
      }
      levels[l].projection.assign(n, 0);
      for (std::size_t i = 0; i < n; ++i) levels[l].projection[ranks[l][i]] = ranks[l - 1][down[i]];
    }
    std::uint64_t fiber = static_cast<std::uint64_t>(std::count(fib.begin(), fib.end(), Point{0}));
    if (fiber != li.D.order()) throw Error("Molino fiber size differs from |D|; internal inconsistency");
    out.fiber_sizes.push_back(fiber);
    out.fibration.push_back(std::move(fib));
  }
  TowerSource src;
  src.kind = "molino";
  src.name = t.source().name;
  src.origin_generators = t.origin_generators();
  src.origin_words = t.source().origin_words;
  out.tower = ChainTower(t.generator_names(), std::move(levels), std::move(src));
  require_valid(out.tower);
  return out;
}

inline MolinoTower molino_tower(const ChainTower& t, const AnalysisOptions& o = {}) {
  TowerAnalysis a(t, o);
  return molino_tower(a, effective_depth(t, o));
}

// ---------------------------------------------------------------------------
// Classification

enum class Regularity { regular, weakly_normal, irregular };

inline const char* to_string(Regularity r) {
  switch (r) {
    case Regularity::regular: return "regular-to-depth";
    case Regularity::weakly_normal: return "weakly-normal";
    case Regularity::irregular: return "irregular-to-depth";
  }
  return "?";
}

struct Classification {
  Regularity verdict = Regularity::regular;
  /// Truncation level whose discriminant is trivial (weakly normal only).
  std::size_t witness = 0;
  std::size_t depth = 0;
  /// Truncation levels examined, inclusive; empty range when first > last.
  std::size_t scan_first = 1;
  std::size_t scan_last = 0;
  std::string note;
};

namespace detail {

inline bool discriminant_trivial_to(TowerAnalysis& a, std::size_t depth) {
  for (std::size_t l = 0; l <= depth; ++l) {
    if (!a.level(l).D.is_trivial()) return false;
  }
  return true;
}

}  // namespace detail

/// Regular when every D_l is trivial; weakly normal when some truncation at
/// n <= depth - 2 has trivial discriminant through the remaining depth.
inline Classification classify(TowerAnalysis& a, std::size_t depth) {
  depth = std::min(depth, a.tower().depth());
  Classification c;
  c.depth = depth;
  if (detail::discriminant_trivial_to(a, depth)) {
    c.verdict = Regularity::regular;
    if (depth == 0) c.note = "vacuous at depth 0";
    return c;
  }
  c.scan_first = 1;
  c.scan_last = depth >= kMargin ? depth - kMargin : 0;
  for (std::size_t n = 1; n <= c.scan_last; ++n) {
    if (detail::discriminant_trivial_to(a.truncation(n), depth - n)) {
      c.verdict = Regularity::weakly_normal;
      c.witness = n;
      return c;
    }
  }
  c.verdict = Regularity::irregular;
  if (depth < kMargin + 1) c.note = "no truncation examined below depth 3";
  return c;
}

inline Classification classify(const ChainTower& t, const AnalysisOptions& o = {}) {
  TowerAnalysis a(t, o);
  return classify(a, effective_depth(t, o));
}

// ---------------------------------------------------------------------------
// Stability

/// The discriminant of the n-truncation at the common top level.
struct StabilityRow {
  std::size_t n = 0;
  std::uint64_t order = 1;
  Fingerprint fingerprint;
  /// n <= depth - 2; only these rows enter the verdict.
  bool in_margin = true;
  /// Exact isomorphism with the previous row, when decided.
  std::optional<bool> isomorphic_to_previous;
};

struct PsiMap {
  std::size_t n = 0;
  std::size_t m = 0;
  std::uint64_t image_order = 0;
  bool surjective = false;
};

enum class StabilityKind { stable, wild, undetermined };

inline const char* to_string(StabilityKind k) {
  switch (k) {
    case StabilityKind::stable: return "stable-evidence";
    case StabilityKind::wild: return "wild-evidence";
    case StabilityKind::undetermined: return "undetermined";
  }
  return "?";
}

struct StabilityReport {
  StabilityKind verdict = StabilityKind::undetermined;
  std::size_t n0 = 0;
  std::size_t depth = 0;
  std::vector<StabilityRow> rows;
  std::vector<PsiMap> psi;
  std::string note = "evidence only: stability quantifies over all truncations";
};

namespace detail {

/// Top-level discriminant of the n-truncation (n = 0 is the tower itself).
inline const LevelImage& truncated_top(TowerAnalysis& a, std::size_t n, std::size_t depth) {
  return n == 0 ? a.level(depth) : a.truncation(n).level(depth - n);
}

}  // namespace detail

inline StabilityReport stability_report(TowerAnalysis& a, std::size_t depth) {
  const ChainTower& t = a.tower();
  const AnalysisOptions& o = a.options();
  depth = std::min(depth, t.depth());
  StabilityReport r;
  r.depth = depth;
  if (depth < 2) {
    r.note = "undetermined below depth 2";
    return r;
  }
  // The n-truncation's top level is the fiber over the level-n basepoint,
  // with points in increasing order.
  std::vector<std::vector<Point>> fibers(depth);
  for (std::size_t n = 0; n < depth; ++n) {
    for (std::size_t x = 0; x < t.degree(depth); ++x) {
      if (t.project(static_cast<Point>(x), depth, n) == 0) fibers[n].push_back(static_cast<Point>(x));
    }
  }
  std::vector<const LevelImage*> tops;
  for (std::size_t n = 0; n < depth; ++n) {
    const LevelImage& top = detail::truncated_top(a, n, depth);
    tops.push_back(&top);
    StabilityRow row;
    row.n = n;
    row.order = top.D.order();
    row.fingerprint = fingerprint(top.D.generators(), row.order, o.fingerprint_cap);
    row.in_margin = n + kMargin <= depth;
    if (n > 0 && row.order == r.rows.back().order && row.order <= o.isomorphism_bound && row.order <= o.fingerprint_cap) {
      FiniteGroup g1(tops[n - 1]->D.generators(), o.fingerprint_cap);
      FiniteGroup g2(top.D.generators(), o.fingerprint_cap);
      row.isomorphic_to_previous = isomorphic(g1, g2, o.isomorphism_bound);
    } else if (n > 0 && row.order != r.rows.back().order) {
      row.isomorphic_to_previous = false;
    }
    r.rows.push_back(std::move(row));
  }
  // psi(n, m) restricts the action from the n-fiber to the smaller m-fiber.
  for (std::size_t n = 0; n < depth; ++n) {
    std::vector<Point> rank(t.degree(depth), kNoPoint);
    for (std::size_t m = n + 1; m < depth; ++m) {
      std::fill(rank.begin(), rank.end(), kNoPoint);
      for (std::size_t i = 0; i < fibers[m].size(); ++i) rank[fibers[m][i]] = static_cast<Point>(i);
      std::vector<Point> point_map;
      for (Point x : fibers[n]) point_map.push_back(rank[x]);
      const auto& src = tops[n]->D;
      PsiMap p{n, m, 1, false};
      if (src.generators().empty()) {
        p.image_order = 1;
      } else {
        auto [img, map] = induced_action(src, point_map, MapKind::tower_bonding);
        p.image_order = img.order();
        bool inside = std::all_of(img.generators().begin(), img.generators().end(),
                                  [&](const Permutation& g) { return tops[m]->D.contains(g); });
        p.surjective = inside && p.image_order == tops[m]->D.order();
      }
      if (src.generators().empty()) p.surjective = tops[m]->D.is_trivial();
      r.psi.push_back(p);
    }
  }
  // Verdict over rows within the margin.
  std::vector<const StabilityRow*> rows;
  for (const auto& row : r.rows) {
    if (row.in_margin) rows.push_back(&row);
  }
  std::size_t k = rows.size();
  if (rows.back()->order == 1) {
    std::size_t first = k - 1;
    while (first > 0 && rows[first - 1]->order == 1) --first;
    r.verdict = StabilityKind::stable;
    r.n0 = rows[first]->n;
    return r;
  }
  std::size_t first = k - 1;
  while (first > 0 && rows[first - 1]->order == rows[first]->order &&
         rows[first - 1]->fingerprint == rows[first]->fingerprint && rows[first]->isomorphic_to_previous != false) {
    --first;
  }
  if (k - first >= 2) {
    r.verdict = StabilityKind::stable;
    r.n0 = rows[first]->n;
    return r;
  }
  bool decreasing = k >= 2;
  for (std::size_t i = 1; i < k; ++i) decreasing = decreasing && rows[i]->order < rows[i - 1]->order;
  r.verdict = decreasing ? StabilityKind::wild : StabilityKind::undetermined;
  return r;
}

inline StabilityReport stability_report(const ChainTower& t, const AnalysisOptions& o = {}) {
  TowerAnalysis a(t, o);
  return stability_report(a, effective_depth(t, o));
}

// ---------------------------------------------------------------------------
// Word searches

/// All reduced words up to a length, in shortlex order, grouped by their
/// action at one level.  The action is keyed by the images of a base of the
/// level image group, which determines the element.
class WordClasses {
 public:
  struct Class {
    Word representative;
    std::vector<Point> key;
    bool identity = false;
  };

  WordClasses(const ChainTower& t, std::size_t level, const std::vector<Point>& base, std::size_t max_length,
              std::uint64_t budget)
      : level_(level), max_length_(max_length) {
    std::size_t letters = 2 * t.generator_count();
    const auto& gens = t.images(level);
    const auto& inv = t.inverse_images(level);
    auto apply = [&](int x, const std::vector<Point>& key) {
      std::vector<Point> out(key.size());
      const Permutation& p = x > 0 ? gens[static_cast<std::size_t>(x - 1)] : inv[static_cast<std::size_t>(-x - 1)];
      for (std::size_t i = 0; i < key.size(); ++i) out[i] = p(key[i]);
      return out;
    };
    std::map<std::vector<Point>, std::size_t> index;
    std::optional<Word> identity_word;
    std::vector<std::pair<Word, std::vector<Point>>> layer{{Word(), base}};
    index.emplace(base, 0);
    classes_.push_back({Word(), base, true});
    std::uint64_t count = 1;
    for (std::size_t len = 1; len <= max_length && letters > 0; ++len) {
      std::vector<std::pair<Word, std::vector<Point>>> next;
      for (std::size_t rank = 0; rank < letters; ++rank) {
        int x = Word::letter_from_rank(static_cast<int>(rank));
        for (const auto& [w, key] : layer) {
          if (!w.empty() && w.letters().front() == -x) continue;
          if (++count > budget) throw BudgetError("word search exceeded " + std::to_string(budget) + " words");
          std::vector<int> letters_out{x};
          letters_out.insert(letters_out.end(), w.letters().begin(), w.letters().end());
          Word nw(std::move(letters_out));
          std::vector<Point> nk = apply(x, key);
          auto [it, inserted] = index.emplace(nk, classes_.size());
          if (inserted) {
            classes_.push_back({nw, nk, false});
          } else if (it->second == 0 && !identity_word) {
            identity_word = nw;
          }
          next.emplace_back(std::move(nw), std::move(nk));
        }
      }
      layer = std::move(next);
    }
    words_ = count;
    if (identity_word) classes_[0].representative = *identity_word;
  }

  const std::vector<Class>& classes() const noexcept { return classes_; }
  std::uint64_t words_enumerated() const noexcept { return words_; }
  std::size_t level() const noexcept { return level_; }
  std::size_t max_length() const noexcept { return max_length_; }

 private:
  std::size_t level_;
  std::size_t max_length_;
  std::vector<Class> classes_;
  std::uint64_t words_ = 0;
};

struct KernelWord {
  Word word;
  /// Acts as the identity at the certification depth.
  bool acts_trivially = false;
  std::size_t certified_depth = 0;
};

namespace detail {

inline WordClasses word_classes(TowerAnalysis& a, std::size_t depth, std::size_t max_length) {
  return WordClasses(a.tower(), depth, a.level(depth).base, max_length, a.options().word_budget);
}

}  // namespace detail

/// Word classes fixing the basepoint through depth, one shortlex-least word
/// per action.  The identity class is quoted by its shortest nonempty word
/// when one exists within bounds.  Candidates only: the true kernel may be
/// smaller.
inline std::vector<KernelWord> kernel_words(TowerAnalysis& a, std::size_t max_length, std::size_t depth) {
  depth = std::min(depth, a.tower().depth());
  WordClasses wc = detail::word_classes(a, depth, max_length);
  std::vector<KernelWord> out;
  for (const auto& c : wc.classes()) {
    if (c.key[0] != 0) continue;
    out.push_back({c.representative, c.identity, depth});
  }
  std::sort(out.begin(), out.end(), [](const KernelWord& x, const KernelWord& y) { return x.word < y.word; });
  return out;
}

inline std::vector<KernelWord> kernel_words(const ChainTower& t, std::size_t max_length, std::size_t depth,
                                            const AnalysisOptions& o = {}) {
  TowerAnalysis a(t, o);
  return kernel_words(a, max_length, depth);
}

// ---------------------------------------------------------------------------
// Holonomy

struct HolonomyVerdict {
  bool trivial = false;
  /// First cylinder level on which the word acts as the identity.
  std::size_t level = 0;
  /// witnesses[n]: a moved point of cylinder(x, n) at depth, for each n
  /// examined before the verdict.
  std::vector<FiberPoint> witnesses;
  std::size_t depth = 0;
  std::size_t scan_last = 0;
};

/// Scans cylinders U(x, n), n = 0..depth-2, for one on which the word acts
/// identically at depth.
inline HolonomyVerdict holonomy_test(const ChainTower& t, const Word& w, std::size_t depth) {
  depth = std::min(depth, t.depth());
  if (w.generator_span() > t.generator_count()) throw DomainError("word uses an unknown generator");
  for (std::size_t l = 0; l <= depth; ++l) {
    if (t.act(l, w, 0) != 0) {
      throw DomainError("not a kernel candidate: word moves the basepoint at level " + std::to_string(l));
    }
  }
  HolonomyVerdict v;
  v.depth = depth;
  v.scan_last = depth >= kMargin ? depth - kMargin : 0;
  std::vector<Point> moved;
  for (std::size_t z = 0; z < t.degree(depth); ++z) {
    if (t.act(depth, w, static_cast<Point>(z)) != z) moved.push_back(static_cast<Point>(z));
  }
  for (std::size_t n = 0; n <= v.scan_last; ++n) {
    auto it = std::find_if(moved.begin(), moved.end(),
                           [&](Point z) { return t.project(z, depth, n) == 0; });
    if (it == moved.end()) {
      v.trivial = true;
      v.level = n;
      return v;
    }
    FiberPoint f = fiber_point(t, depth, *it);
    f.coords.resize(t.depth() + 1);
    v.witnesses.push_back(std::move(f));
  }
  v.trivial = false;
  return v;
}

// ---------------------------------------------------------------------------
// Kernel against discriminant

struct KernelDiscriminantReport {
  std::size_t depth = 0;
  std::size_t max_word_length = 0;
  /// Kernel candidates acting nontrivially at depth.
  std::vector<Word> holonomy_words;
  /// Words whose image lies in D_l at every level and is not the identity
  /// at depth.
  std::vector<Word> discriminant_words;
  bool sets_agree = true;
  /// Holonomy words moving a point in every cylinder U(x, n), n <= depth-2.
  std::vector<Word> germinal_words;
  /// Every truncated discriminant D^n (n <= depth-2) is nontrivial when a
  /// germinal word exists: such a word restricts to a nonidentity element of
  /// each D^n.  Vacuous otherwise.
  bool nontrivial_fiber_consistent = true;
};

inline KernelDiscriminantReport kernel_vs_discriminant(TowerAnalysis& a, std::size_t depth, std::size_t max_length) {
  const ChainTower& t = a.tower();
  depth = std::min(depth, t.depth());
  KernelDiscriminantReport r;
  r.depth = depth;
  r.max_word_length = max_length;
  WordClasses wc = detail::word_classes(a, depth, max_length);
  for (const auto& c : wc.classes()) {
    if (c.identity) continue;
    if (c.key[0] == 0) r.holonomy_words.push_back(c.representative);
    bool in_all = true;
    for (std::size_t l = 0; l <= depth && in_all; ++l) {
      if (t.act(l, c.representative, 0) != 0) {
        in_all = false;
        break;
      }
      in_all = a.level(l).D.contains(t.word_image(l, c.representative));
    }
    if (in_all) r.discriminant_words.push_back(c.representative);
  }
  r.sets_agree = r.holonomy_words == r.discriminant_words;
  for (const auto& w : r.holonomy_words) {
    if (!holonomy_test(t, w, depth).trivial) r.germinal_words.push_back(w);
  }
  if (!r.germinal_words.empty()) {
    for (std::size_t n = 0; n + kMargin <= depth; ++n) {
      if (detail::truncated_top(a, n, depth).D.is_trivial()) r.nontrivial_fiber_consistent = false;
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// SQA

struct SqaVerdict {
  bool violation = false;
  Word word;
  /// Root of the subtree on which the word is the identity.
  std::size_t level = 0;
  Point point = 0;
  /// A point at depth moved by the word.
  std::optional<FiberPoint> witness;
  std::size_t depth = 0;
  std::size_t max_word_length = 0;
  std::size_t scan_last = 0;
  std::uint64_t classes_examined = 0;
  std::string scope = "word-level only";
};

/// Searches for a word that is the identity on the subtree below some point
/// at level n <= depth-2 but acts nontrivially at depth.
inline SqaVerdict sqa_violation_search(TowerAnalysis& a, std::size_t depth, std::size_t max_length) {
  const ChainTower& t = a.tower();
  depth = std::min(depth, t.depth());
  SqaVerdict v;
  v.depth = depth;
  v.max_word_length = max_length;
  v.scan_last = depth >= kMargin ? depth - kMargin : 0;
  WordClasses wc = detail::word_classes(a, depth, max_length);
  std::size_t d = t.degree(depth);
  std::vector<std::vector<char>> fixed(depth + 1);
  for (const auto& c : wc.classes()) {
    if (c.identity) continue;
    ++v.classes_examined;
    fixed[depth].assign(d, 1);
    std::optional<Point> moved;
    for (std::size_t z = 0; z < d; ++z) {
      if (t.act(depth, c.representative, static_cast<Point>(z)) != z) {
        fixed[depth][z] = 0;
        if (!moved) moved = static_cast<Point>(z);
      }
    }
    for (std::size_t l = depth; l-- > 0;) {
      fixed[l].assign(t.degree(l), 1);
      for (std::size_t x = 0; x < t.degree(l + 1); ++x) {
        if (!fixed[l + 1][x]) fixed[l][t.projection(l + 1)[x]] = 0;
      }
    }
    for (std::size_t n = 0; n <= v.scan_last; ++n) {
      for (std::size_t u = 0; u < t.degree(n); ++u) {
        if (!fixed[n][u]) continue;
        v.violation = true;
        v.word = c.representative;
        v.level = n;
        v.point = static_cast<Point>(u);
        v.witness = fiber_point(t, depth, *moved);
        return v;
      }
    }
  }
  return v;
}

// ---------------------------------------------------------------------------
// Equivalence

enum class EquivalenceKind { equivalent, conjugate_equivalent, distinct, inconclusive };

inline const char* to_string(EquivalenceKind k) {
  switch (k) {
    case EquivalenceKind::equivalent: return "equivalent-to-depth";
    case EquivalenceKind::conjugate_equivalent: return "conjugate-equivalent-to-depth";
    case EquivalenceKind::distinct: return "distinct";
    case EquivalenceKind::inconclusive: return "inconclusive";
  }
  return "?";
}

/// One containment of an interleaving: level `outer` of tower `outer_tower`
/// contains level `inner` of the other tower ('A' or 'B').
struct Containment {
  char outer_tower = 'A';
  std::size_t outer = 0;
  std::size_t inner = 0;
};

struct EquivalenceResult {
  EquivalenceKind verdict = EquivalenceKind::inconclusive;
  std::vector<Containment> interleaving;
  std::optional<FiberPoint> point;
  std::string witness;
  std::size_t depth_a = 0;
  std::size_t depth_b = 0;
};

namespace detail {

/// Schreier generators of the basepoint stabilizer at one level.
inline std::vector<Word> stabilizer_words(const ChainTower& t, std::size_t l) {
  PermutationGroup g(t.degree(l), t.images(l));
  OrbitResult orb = orbit(g, 0);
  std::vector<Word> transversal(t.degree(l));
  for (std::size_t i = 0; i < orb.points.size(); ++i) transversal[orb.points[i]] = orb.words[i];
  std::vector<Word> out;
  for (Point x : orb.points) {
    for (std::size_t s = 0; s < t.generator_count(); ++s) {
      Word w = (transversal[t.images(l)[s](x)].inverse() * Word::generator(s) * transversal[x]).reduced();
      if (!w.empty()) out.push_back(std::move(w));
    }
  }
  return out;
}

class ContainmentOracle {
 public:
  ContainmentOracle(const ChainTower& a, const ChainTower& b, std::size_t da, std::size_t db) : a_(a), b_(b) {
    for (std::size_t l = 0; l <= da; ++l) words_a_.push_back(stabilizer_words(a, l));
    for (std::size_t l = 0; l <= db; ++l) words_b_.push_back(stabilizer_words(b, l));
  }

  /// G^B_j is contained in G^A_l.
  bool b_in_a(std::size_t j, std::size_t l) const {
    return std::all_of(words_b_[j].begin(), words_b_[j].end(), [&](const Word& w) { return a_.act(l, w, 0) == 0; });
  }
  bool a_in_b(std::size_t l, std::size_t j) const {
    return std::all_of(words_a_[l].begin(), words_a_[l].end(), [&](const Word& w) { return b_.act(j, w, 0) == 0; });
  }

 private:
  const ChainTower& a_;
  const ChainTower& b_;
  std::vector<std::vector<Word>> words_a_, words_b_;
};

/// Greedy alternating chain A_l1 >= B_j1 >= A_l2 >= ...; succeeds when it
/// reaches the top level of either tower.
inline bool interleave(const ChainTower& a, const ChainTower& b, std::size_t da, std::size_t db,
                       std::vector<Containment>& chain) {
  ContainmentOracle oracle(a, b, da, db);
  chain.clear();
  std::size_t l = 1, j = 0;
  if (da == 0 || db == 0) return true;
  for (;;) {
    std::size_t next_j = j + 1;
    while (next_j <= db && !oracle.b_in_a(next_j, l)) ++next_j;
    if (next_j > db) return l == da;
    chain.push_back({'A', l, next_j});
    j = next_j;
    if (j == db) return true;
    std::size_t next_l = l + 1;
    while (next_l <= da && !oracle.a_in_b(next_l, j)) ++next_l;
    if (next_l > da) return false;
    chain.push_back({'B', j, next_l});
    l = next_l;
    if (l == da) return true;
  }
}

inline std::set<std::uint64_t> degree_primes(const ChainTower& t, std::size_t depth) {
  std::set<std::uint64_t> out;
  for (std::size_t l = 0; l <= depth; ++l) {
    for (auto p : prime_factors(t.degree(l))) out.insert(p);
  }
  return out;
}

}  // namespace detail

/// Interleaving certificate for two towers over the same generators, then a
/// distinctness witness from degree primes, then a search over rebasings of
/// the second tower at points of its deepest level.
inline EquivalenceResult equivalence_probe(const ChainTower& a, const ChainTower& b, std::size_t depth,
                                           const AnalysisOptions& o = {}) {
  if (a.generator_names() != b.generator_names()) throw DomainError("towers use different generator alphabets");
  EquivalenceResult r;
  r.depth_a = std::min(depth, a.depth());
  r.depth_b = std::min(depth, b.depth());
  if (detail::interleave(a, b, r.depth_a, r.depth_b, r.interleaving)) {
    r.verdict = EquivalenceKind::equivalent;
    return r;
  }
  auto pa = detail::degree_primes(a, r.depth_a);
  auto pb = detail::degree_primes(b, r.depth_b);
  if (pa != pb) {
    std::string sa, sb;
    for (auto p : pa) sa += (sa.empty() ? "" : ",") + std::to_string(p);
    for (auto p : pb) sb += (sb.empty() ? "" : ",") + std::to_string(p);
    r.verdict = EquivalenceKind::distinct;
    r.witness = "primes dividing level degrees differ: {" + sa + "} vs {" + sb + "}";
    r.interleaving.clear();
    return r;
  }
  std::size_t candidates = std::min<std::size_t>(b.degree(r.depth_b), o.rebase_candidates);
  ChainTower bt = restrict_depth(b, r.depth_b);
  for (std::size_t z = 1; z < candidates; ++z) {
    FiberPoint y = fiber_point(bt, r.depth_b, static_cast<Point>(z));
    ChainTower rb = rebase(bt, y);
    std::vector<Containment> chain;
    if (detail::interleave(a, rb, r.depth_a, r.depth_b, chain)) {
      r.verdict = EquivalenceKind::conjugate_equivalent;
      r.interleaving = std::move(chain);
      r.point = std::move(y);
      return r;
    }
  }
  r.verdict = EquivalenceKind::inconclusive;
  r.witness = "no interleaving or rebasing found within depth; no invariant separates the towers";
  return r;
}

// ---------------------------------------------------------------------------
// Virtual regularity

/// The tower of the action of the subgroup generated by `words` on the orbits
/// of the basepoint.  Generators with equal action at depth are merged.
inline ChainTower restrict_to_subgroup(const ChainTower& t, const std::vector<Word>& words, std::size_t depth) {
  depth = std::min(depth, t.depth());
  std::vector<std::vector<Point>> orbit_points(depth + 1);
  std::vector<std::vector<Point>> rank(depth + 1);
  std::vector<std::vector<Permutation>> full(depth + 1);
  for (std::size_t l = 0; l <= depth; ++l) {
    for (const auto& w : words) full[l].push_back(t.word_image(l, w));
    rank[l].assign(t.degree(l), kNoPoint);
    std::vector<char> seen(t.degree(l), 0);
    std::vector<Point> queue{0};
    seen[0] = 1;
    std::vector<Permutation> inverses;
    for (const auto& p : full[l]) inverses.push_back(p.inverse());
    for (std::size_t i = 0; i < queue.size(); ++i) {
      for (std::size_t k = 0; k < full[l].size(); ++k) {
        for (Point y : {full[l][k](queue[i]), inverses[k](queue[i])}) {
          if (!seen[y]) {
            seen[y] = 1;
            queue.push_back(y);
          }
        }
      }
    }
    std::sort(queue.begin(), queue.end());
    for (std::size_t i = 0; i < queue.size(); ++i) rank[l][queue[i]] = static_cast<Point>(i);
    orbit_points[l] = std::move(queue);
  }
  std::vector<std::size_t> keep;
  std::set<std::vector<Point>> seen_actions;
  for (std::size_t i = 0; i < words.size(); ++i) {
    std::vector<Point> key(full[depth][i].images().begin(), full[depth][i].images().end());
    if (seen_actions.insert(key).second) keep.push_back(i);
  }
  std::vector<TowerLevel> levels(depth + 1);
  for (std::size_t l = 0; l <= depth; ++l) {
    for (std::size_t i : keep) {
      std::vector<Point> images;
      for (Point x : orbit_points[l]) images.push_back(rank[l][full[l][i](x)]);
      levels[l].images.emplace_back(std::move(images));
    }
    if (l > 0) {
      for (Point x : orbit_points[l]) levels[l].projection.push_back(rank[l - 1][t.projection(l)[x]]);
    }
  }
  std::vector<std::string> names;
  TowerSource src;
  src.kind = "restriction";
  src.name = t.source().name;
  src.origin_generators = t.origin_generators();
  std::vector<Word> root = t.origin_words();
  for (std::size_t i : keep) {
    names.push_back("s" + std::to_string(names.size()));
    src.origin_words.push_back(detail::substitute(words[i], root));
  }
  return ChainTower(std::move(names), std::move(levels), std::move(src));
}

struct SubgroupProbe {
  std::string label;
  std::vector<Word> words;
  /// Index in the acting group, when coset enumeration completed.
  std::optional<std::size_t> index;
  bool normal = false;
  std::optional<Classification> classification;
  std::string error;
};

enum class VirtualRegularityKind { virtually_regular, not_virtually_regular, undetermined };

inline const char* to_string(VirtualRegularityKind k) {
  switch (k) {
    case VirtualRegularityKind::virtually_regular: return "virtually-regular";
    case VirtualRegularityKind::not_virtually_regular: return "not-virtually-regular-evidence";
    case VirtualRegularityKind::undetermined: return "undetermined";
  }
  return "?";
}

struct VirtualRegularityReport {
  VirtualRegularityKind verdict = VirtualRegularityKind::undetermined;
  std::optional<std::size_t> witness;
  std::vector<SubgroupProbe> probes;
  std::size_t depth = 0;
};

/// Probe 0 is always the whole group.  Index and normality are decided by
/// coset enumeration over the tower's presentation (the free group when none
/// is recorded); normality in the free group passes to every quotient.
inline VirtualRegularityReport virtual_regularity_probe(const ChainTower& t,
                                                        const std::vector<std::vector<Word>>& subgroups,
                                                        std::size_t depth, const AnalysisOptions& o = {}) {
  depth = std::min(depth, t.depth());
  VirtualRegularityReport r;
  r.depth = depth;
  Presentation pres;
  if (t.source().presentation) {
    pres = *t.source().presentation;
  } else {
    pres.generators = t.generator_names();
  }
  if (pres.generator_count() != t.generator_count()) throw DomainError("presentation does not match generators");
  std::vector<Word> whole;
  for (std::size_t g = 0; g < t.generator_count(); ++g) whole.push_back(Word::generator(g));
  std::vector<std::vector<Word>> all{whole};
  all.insert(all.end(), subgroups.begin(), subgroups.end());
  bool any_unknown = false;
  for (std::size_t i = 0; i < all.size(); ++i) {
    SubgroupProbe p;
    p.words = all[i];
    for (const auto& w : p.words) p.label += (p.label.empty() ? "" : ", ") + w.format(t.generator_names());
    p.label = "<" + p.label + ">";
    for (const auto& w : p.words) {
      if (w.generator_span() > t.generator_count()) throw DomainError("subgroup word uses an unknown generator");
    }
    CosetTable table = todd_coxeter(pres, p.words, o.coset_budget);
    if (!table.complete) {
      p.error = "index not verified within " + std::to_string(o.coset_budget) + " cosets";
      any_unknown = true;
      r.probes.push_back(std::move(p));
      continue;
    }
    p.index = table.coset_count;
    p.normal = true;
    for (const auto& w : p.words) {
      for (std::size_t g = 0; g < t.generator_count() && p.normal; ++g) {
        for (bool inv : {false, true}) {
          Word s = Word::generator(g, inv);
          if (table.trace(0, (s * w * s.inverse()).reduced()) != 0) p.normal = false;
        }
      }
    }
    if (!p.normal) {
      p.error = "subgroup is not normal";
      any_unknown = true;
      r.probes.push_back(std::move(p));
      continue;
    }
    try {
      TowerAnalysis a(restrict_to_subgroup(t, p.words, depth), o);
      p.classification = classify(a, depth);
    } catch (const BudgetError& e) {
      p.error = e.what();
      any_unknown = true;
    }
    if (p.classification && p.classification->verdict != Regularity::irregular && !r.witness) r.witness = i;
    r.probes.push_back(std::move(p));
  }
  if (r.witness) {
    r.verdict = VirtualRegularityKind::virtually_regular;
  } else {
    r.verdict = any_unknown ? VirtualRegularityKind::undetermined : VirtualRegularityKind::not_virtually_regular;
  }
  return r;
}

}  // namespace solch
