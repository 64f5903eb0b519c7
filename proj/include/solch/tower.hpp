#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <unordered_set>
#include <vector>

#include "solch/errors.hpp"
#include "solch/perm_group.hpp"
#include "solch/permutation.hpp"
#include "solch/todd_coxeter.hpp"
#include "solch/word.hpp"

namespace solch {

/// One level of a tower: generator actions on d points and the projection to
/// the previous level (empty at level 0).
struct TowerLevel {
  std::vector<Permutation> images;
  std::vector<Point> projection;

  std::size_t degree() const { return images.empty() ? projection.size() : images.front().degree(); }
};

/// A coherent point sequence (x_0, ..., x_L).
struct FiberPoint {
  std::vector<Point> coords;

  friend bool operator==(const FiberPoint&, const FiberPoint&) = default;
};

/// Where a tower came from.  Generators are recorded as words in the root
/// alphabet so truncated or restricted towers can quote elements of the
/// original group.
struct TowerSource {
  std::string kind;  // permutation_tower, fp_presentation, builder, truncation, rebase, restriction
  std::string name;
  /// Builder parameters as JSON text; empty when not applicable.
  std::string parameters;
  /// Absent means the acting group is treated as free on the generators.
  std::optional<Presentation> presentation;
  /// Per-level subgroup generator words, for fp_presentation towers.
  std::vector<std::vector<Word>> subgroup_words;
  std::vector<std::string> origin_generators;
  std::vector<Word> origin_words;
  std::vector<std::string> notes;
};

namespace detail {

/// Replaces each letter by the corresponding word (or its inverse).
inline Word substitute(const Word& w, const std::vector<Word>& images) {
  std::vector<int> out;
  for (int x : w.letters()) {
    const Word& img = images.at(static_cast<std::size_t>(std::abs(x) - 1));
    Word piece = x > 0 ? img : img.inverse();
    out.insert(out.end(), piece.letters().begin(), piece.letters().end());
  }
  return Word(std::move(out)).reduced();
}

}  // namespace detail

/// A depth-L tower of transitive actions on coset spaces G_0/G_l with
/// equivariant projections.  Point 0 is the basepoint at every level.
/// Construction checks only shapes; `validate` checks the invariants.
class ChainTower {
 public:
  ChainTower(std::vector<std::string> generator_names, std::vector<TowerLevel> levels, TowerSource source = {})
      : names_(std::move(generator_names)), levels_(std::move(levels)), source_(std::move(source)) {
    if (levels_.empty()) throw ValidationError("tower has no levels");
    for (std::size_t l = 0; l < levels_.size(); ++l) {
      const TowerLevel& L = levels_[l];
      if (L.images.size() != names_.size()) {
        throw ValidationError("level " + std::to_string(l) + " has " + std::to_string(L.images.size()) +
                              " generator images, expected " + std::to_string(names_.size()));
      }
      std::size_t d = L.images.empty() ? (l == 0 ? 1 : L.projection.size()) : L.images.front().degree();
      if (d == 0) throw ValidationError("level " + std::to_string(l) + " has degree 0");
      for (const auto& g : L.images) {
        if (g.degree() != d) throw ValidationError("level " + std::to_string(l) + " images differ in degree");
      }
      if (l == 0) {
        if (!L.projection.empty()) throw ValidationError("level 0 has a projection");
      } else {
        if (L.projection.size() != d) {
          throw ValidationError("level " + std::to_string(l) + " projection has wrong length");
        }
        for (Point p : L.projection) {
          if (p >= degrees_.back()) {
            throw ValidationError("level " + std::to_string(l) + " projection value " + std::to_string(p) +
                                  " out of range");
          }
        }
      }
      degrees_.push_back(d);
      std::vector<Permutation> inv;
      for (const auto& g : L.images) inv.push_back(g.inverse());
      inverses_.push_back(std::move(inv));
    }
  }

  std::size_t depth() const noexcept { return levels_.size() - 1; }
  std::size_t generator_count() const noexcept { return names_.size(); }
  const std::vector<std::string>& generator_names() const noexcept { return names_; }
  const TowerLevel& level(std::size_t l) const { return levels_.at(l); }
  const std::vector<TowerLevel>& levels() const noexcept { return levels_; }
  std::size_t degree(std::size_t l) const { return degrees_.at(l); }
  const std::vector<std::size_t>& degrees() const noexcept { return degrees_; }
  const std::vector<Permutation>& images(std::size_t l) const { return levels_.at(l).images; }
  const std::vector<Permutation>& inverse_images(std::size_t l) const { return inverses_.at(l); }
  const std::vector<Point>& projection(std::size_t l) const { return levels_.at(l).projection; }
  const TowerSource& source() const noexcept { return source_; }

  /// Image of x under the composite projection from level `from` to `to`.
  Point project(Point x, std::size_t from, std::size_t to) const {
    for (std::size_t l = from; l > to; --l) x = levels_[l].projection[x];
    return x;
  }

  /// Word action at one level; the rightmost letter acts first.
  Point act(std::size_t l, const Word& w, Point x) const { return act_word(levels_[l].images, inverses_[l], w, x); }

  /// Full permutation of a word at one level.
  Permutation word_image(std::size_t l, const Word& w) const {
    Permutation p(degrees_[l]);
    const auto& letters = w.letters();
    for (int x : letters) {
      p = p * (x > 0 ? levels_[l].images[static_cast<std::size_t>(x - 1)]
                     : inverses_[l][static_cast<std::size_t>(-x - 1)]);
    }
    return p;
  }

  /// Words of the generators in the root alphabet (identity map when the
  /// tower is its own root).
  std::vector<Word> origin_words() const {
    if (!source_.origin_words.empty()) return source_.origin_words;
    std::vector<Word> out;
    for (std::size_t g = 0; g < names_.size(); ++g) out.push_back(Word::generator(g));
    return out;
  }
  std::vector<std::string> origin_generators() const {
    return source_.origin_generators.empty() ? names_ : source_.origin_generators;
  }

 private:
  std::vector<std::string> names_;
  std::vector<TowerLevel> levels_;
  TowerSource source_;
  std::vector<std::size_t> degrees_;
  std::vector<std::vector<Permutation>> inverses_;
};

struct ValidationIssue {
  std::string kind;  // level-zero, not-transitive, basepoint, not-surjective, not-equivariant
  std::size_t level = 0;
  std::optional<std::size_t> generator;
  std::optional<Point> point;
  std::string message;
};

struct ValidationReport {
  std::vector<ValidationIssue> issues;
  /// Depth 0.
  bool trivial = false;
  /// Degrees strictly increase from level to level.
  bool proper = true;

  bool ok() const noexcept { return issues.empty(); }
};

inline ValidationReport validate(const ChainTower& t) {
  ValidationReport r;
  r.trivial = t.depth() == 0;
  if (t.degree(0) != 1) {
    r.issues.push_back({"level-zero", 0, std::nullopt, std::nullopt,
                        "level 0 has degree " + std::to_string(t.degree(0)) + ", expected 1"});
  }
  for (std::size_t l = 0; l <= t.depth(); ++l) {
    std::size_t d = t.degree(l);
    std::vector<char> seen(d, 0);
    std::vector<Point> queue{0};
    seen[0] = 1;
    for (std::size_t i = 0; i < queue.size(); ++i) {
      for (std::size_t g = 0; g < t.generator_count(); ++g) {
        for (Point y : {t.images(l)[g](queue[i]), t.inverse_images(l)[g](queue[i])}) {
          if (!seen[y]) {
            seen[y] = 1;
            queue.push_back(y);
          }
        }
      }
    }
    if (queue.size() != d) {
      Point missing = static_cast<Point>(std::find(seen.begin(), seen.end(), 0) - seen.begin());
      r.issues.push_back({"not-transitive", l, std::nullopt, missing,
                          "level " + std::to_string(l) + ": point " + std::to_string(missing) +
                              " is not in the orbit of the basepoint"});
    }
    if (l == 0) continue;
    if (d <= t.degree(l - 1)) r.proper = false;
    const auto& p = t.projection(l);
    if (p[0] != 0) {
      r.issues.push_back({"basepoint", l, std::nullopt, Point{0},
                          "level " + std::to_string(l) + ": basepoint projects to " + std::to_string(p[0])});
    }
    std::vector<char> hit(t.degree(l - 1), 0);
    for (Point y : p) hit[y] = 1;
    auto miss = std::find(hit.begin(), hit.end(), 0);
    if (miss != hit.end()) {
      Point m = static_cast<Point>(miss - hit.begin());
      r.issues.push_back({"not-surjective", l, std::nullopt, m,
                          "level " + std::to_string(l) + ": projection misses level-" + std::to_string(l - 1) +
                              " point " + std::to_string(m)});
    }
    for (std::size_t g = 0; g < t.generator_count(); ++g) {
      for (std::size_t x = 0; x < d; ++x) {
        Point lhs = p[t.images(l)[g](static_cast<Point>(x))];
        Point rhs = t.images(l - 1)[g](p[x]);
        if (lhs != rhs) {
          r.issues.push_back({"not-equivariant", l, g, static_cast<Point>(x),
                              "level " + std::to_string(l) + ": projection not equivariant for generator " +
                                  t.generator_names()[g] + " at point " + std::to_string(x)});
          break;
        }
      }
    }
  }
  return r;
}

/// Throws ValidationError naming the first violated invariant.
inline void require_valid(const ChainTower& t) {
  ValidationReport r = validate(t);
  if (!r.ok()) throw ValidationError(r.issues.front().message);
}

inline FiberPoint basepoint(const ChainTower& t) { return {std::vector<Point>(t.depth() + 1, 0)}; }

/// Levels 0..depth of a tower.
inline ChainTower restrict_depth(const ChainTower& t, std::size_t depth) {
  if (depth >= t.depth()) return t;
  std::vector<TowerLevel> levels(t.levels().begin(), t.levels().begin() + static_cast<std::ptrdiff_t>(depth + 1));
  return ChainTower(t.generator_names(), std::move(levels), t.source());
}

/// The coherent sequence of projections of a point at `level`, extended
/// upward by the smallest preimage at each finer level.
inline FiberPoint fiber_point(const ChainTower& t, std::size_t level, Point x) {
  if (level > t.depth() || x >= t.degree(level)) throw DomainError("fiber point out of range");
  FiberPoint f{std::vector<Point>(t.depth() + 1, 0)};
  for (std::size_t l = level + 1; l-- > 0;) {
    f.coords[l] = x;
    if (l > 0) x = t.projection(l)[x];
  }
  for (std::size_t l = level + 1; l <= t.depth(); ++l) {
    const auto& p = t.projection(l);
    f.coords[l] = static_cast<Point>(std::find(p.begin(), p.end(), f.coords[l - 1]) - p.begin());
  }
  return f;
}

inline bool is_coherent(const ChainTower& t, const FiberPoint& y) {
  if (y.coords.size() != t.depth() + 1) return false;
  for (std::size_t l = 0; l <= t.depth(); ++l) {
    if (y.coords[l] >= t.degree(l)) return false;
    if (l > 0 && t.projection(l)[y.coords[l]] != y.coords[l - 1]) return false;
  }
  return true;
}

inline FiberPoint act(const ChainTower& t, const Word& w, const FiberPoint& y) {
  if (w.generator_span() > t.generator_count()) throw DomainError("word uses an unknown generator");
  if (!is_coherent(t, y)) throw DomainError("fiber point is not coherent");
  FiberPoint out = y;
  for (std::size_t l = 0; l <= t.depth(); ++l) out.coords[l] = t.act(l, w, y.coords[l]);
  return out;
}

struct TruncateOptions {
  /// Drop Schreier generators whose action on every truncated level repeats
  /// an earlier generator's.  Group images are unchanged; the abstract group
  /// is not, so word searches should use the default.
  bool dedupe_by_action = false;
};

/// The tower of the restricted action of G_n on the fiber above the level-n
/// basepoint.  Generators are the Schreier generators of G_n, recorded as
/// words in the root alphabet.
inline ChainTower truncate(const ChainTower& t, std::size_t n, TruncateOptions options = {}) {
  if (n > t.depth()) throw DomainError("truncation level " + std::to_string(n) + " exceeds depth");
  if (n == 0) return t;
  const std::size_t L = t.depth();

  // Schreier generators u_{sx}^-1 s u_x over the level-n orbit.
  PermutationGroup level_group(t.degree(n), t.images(n));
  OrbitResult orb = orbit(level_group, 0);
  std::vector<Word> transversal(t.degree(n));
  for (std::size_t i = 0; i < orb.points.size(); ++i) transversal[orb.points[i]] = orb.words[i];
  std::vector<Word> words;
  std::unordered_set<std::string> seen_words;
  auto key = [](const Word& w) {
    std::string s;
    for (int x : w.letters()) s += std::to_string(x) + ",";
    return s;
  };
  for (Point x : orb.points) {
    for (std::size_t g = 0; g < t.generator_count(); ++g) {
      Point y = t.images(n)[g](x);
      Word w = (transversal[y].inverse() * Word::generator(g) * transversal[x]).reduced();
      if (w.empty() || !seen_words.insert(key(w)).second) continue;
      words.push_back(std::move(w));
    }
  }

  // Fibers, ordered by point index at the finer level.
  std::vector<std::vector<Point>> fibers(L - n + 1);
  std::vector<std::vector<Point>> rank(L - n + 1);
  for (std::size_t k = 0; k <= L - n; ++k) {
    rank[k].assign(t.degree(n + k), kNoPoint);
    for (std::size_t x = 0; x < t.degree(n + k); ++x) {
      if (t.project(static_cast<Point>(x), n + k, n) == 0) {
        rank[k][x] = static_cast<Point>(fibers[k].size());
        fibers[k].push_back(static_cast<Point>(x));
      }
    }
  }

  auto images_at = [&](const Word& w, std::size_t k) {
    std::vector<Point> images(fibers[k].size());
    for (std::size_t i = 0; i < fibers[k].size(); ++i) images[i] = rank[k][t.act(n + k, w, fibers[k][i])];
    return Permutation(std::move(images));
  };

  if (options.dedupe_by_action) {
    std::vector<Word> kept;
    std::set<std::vector<Permutation>> kept_images;
    for (auto& w : words) {
      std::vector<Permutation> ims;
      for (std::size_t k = 1; k <= L - n; ++k) ims.push_back(images_at(w, k));
      bool trivial = std::all_of(ims.begin(), ims.end(), [](const Permutation& p) { return p.is_identity(); });
      if (trivial && !kept.empty()) continue;
      if (!kept_images.insert(std::move(ims)).second) continue;
      kept.push_back(std::move(w));
    }
    words = std::move(kept);
  }

  std::vector<std::string> names;
  for (std::size_t i = 0; i < words.size(); ++i) names.push_back("t" + std::to_string(i));
  std::vector<TowerLevel> levels(L - n + 1);
  for (std::size_t k = 0; k <= L - n; ++k) {
    for (const auto& w : words) levels[k].images.push_back(images_at(w, k));
    if (k > 0) {
      for (Point x : fibers[k]) levels[k].projection.push_back(rank[k - 1][t.projection(n + k)[x]]);
    }
  }
  TowerSource src;
  src.kind = "truncation";
  src.name = t.source().name;
  src.origin_generators = t.origin_generators();
  std::vector<Word> root = t.origin_words();
  for (const auto& w : words) src.origin_words.push_back(detail::substitute(w, root));
  src.notes.push_back("truncated at level " + std::to_string(n));
  if (t.source().presentation) src.notes.push_back("relations of the truncated group are not computed");
  return ChainTower(std::move(names), std::move(levels), std::move(src));
}

/// The same levelwise action with y as the new basepoint: at each level the
/// points 0 and y_l are exchanged.
inline ChainTower rebase(const ChainTower& t, const FiberPoint& y) {
  if (!is_coherent(t, y)) throw DomainError("rebase point is not coherent");
  std::vector<TowerLevel> levels(t.depth() + 1);
  std::vector<Permutation> swaps;
  for (std::size_t l = 0; l <= t.depth(); ++l) {
    std::vector<Point> s(t.degree(l));
    for (std::size_t x = 0; x < s.size(); ++x) s[x] = static_cast<Point>(x);
    std::swap(s[0], s[y.coords[l]]);
    swaps.push_back(Permutation::unchecked(std::move(s)));
  }
  for (std::size_t l = 0; l <= t.depth(); ++l) {
    const Permutation& s = swaps[l];
    for (const auto& g : t.images(l)) levels[l].images.push_back(s * g * s);
    if (l > 0) {
      levels[l].projection.resize(t.degree(l));
      for (std::size_t x = 0; x < t.degree(l); ++x) {
        levels[l].projection[x] = swaps[l - 1](t.projection(l)[s(static_cast<Point>(x))]);
      }
    }
  }
  TowerSource src = t.source();
  src.kind = "rebase";
  std::string coords;
  for (Point c : y.coords) coords += (coords.empty() ? "" : ",") + std::to_string(c);
  src.notes.push_back("rebased at (" + coords + ")");
  return ChainTower(t.generator_names(), std::move(levels), std::move(src));
}

/// The clopen set of fiber points agreeing with `center` through level n.
struct Cylinder {
  FiberPoint center;
  std::size_t n = 0;

  bool contains(const FiberPoint& y) const {
    for (std::size_t l = 0; l <= n; ++l) {
      if (y.coords.at(l) != center.coords.at(l)) return false;
    }
    return true;
  }
};

inline Cylinder cylinder(const ChainTower& t, const FiberPoint& center, std::size_t n) {
  if (n > t.depth()) throw DomainError("cylinder level exceeds depth");
  if (!is_coherent(t, center)) throw DomainError("cylinder center is not coherent");
  return {center, n};
}

/// Points of `level` lying in the cylinder, ascending.
inline std::vector<Point> cylinder_points(const ChainTower& t, const Cylinder& c, std::size_t level) {
  if (level < c.n || level > t.depth()) throw DomainError("cylinder level out of range");
  std::vector<Point> out;
  for (std::size_t x = 0; x < t.degree(level); ++x) {
    if (t.project(static_cast<Point>(x), level, c.n) == c.center.coords[c.n]) out.push_back(static_cast<Point>(x));
  }
  return out;
}

}  // namespace solch
