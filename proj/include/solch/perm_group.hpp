#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "solch/errors.hpp"
#include "solch/permutation.hpp"
#include "solch/word.hpp"

namespace solch {

inline constexpr std::uint64_t kMaxGroupOrder = 1'000'000'000'000ull;

struct GroupOptions {
  /// Points placed first in the base, in order.
  std::vector<Point> base_prefix;
  /// The pointwise stabilizer of base_prefix is known to be trivial.  Sifting
  /// then inspects base images only.
  bool certified_base = false;
};

/// A permutation group with a stabilizer chain built by deterministic
/// Schreier-Sims.  Immutable after construction.
class PermutationGroup {
 public:
  PermutationGroup() : PermutationGroup(1, {}) {}

  PermutationGroup(std::size_t degree, std::vector<Permutation> generators, GroupOptions options = {})
      : degree_(degree), generators_(std::move(generators)), certified_(options.certified_base) {
    if (degree_ == 0) throw DomainError("permutation group of degree 0");
    for (const auto& g : generators_) {
      if (g.degree() != degree_) throw DomainError("generator degree differs from group degree");
    }
    build(std::move(options.base_prefix));
  }

  static PermutationGroup trivial(std::size_t degree) { return PermutationGroup(degree, {}); }

  std::size_t degree() const noexcept { return degree_; }
  const std::vector<Permutation>& generators() const noexcept { return generators_; }
  std::uint64_t order() const noexcept { return order_; }
  bool is_trivial() const noexcept { return order_ == 1; }
  const std::vector<Point>& base() const noexcept { return base_; }
  std::size_t basic_orbit_size(std::size_t level) const { return levels_.at(level).orbit.size(); }

  std::vector<Permutation> strong_generators() const {
    std::vector<Permutation> out;
    for (const auto& s : strong_) out.push_back(Permutation::unchecked(s));
    return out;
  }

  /// Strong generators fixing base()[0 .. prefix_length-1]; they generate that
  /// pointwise stabilizer.
  std::vector<Permutation> pointwise_stabilizer_generators(std::size_t prefix_length) const {
    std::vector<Permutation> out;
    if (prefix_length >= levels_.size()) return out;
    for (std::uint32_t gi : levels_[prefix_length].gens) out.push_back(Permutation::unchecked(strong_[gi]));
    return out;
  }

  bool contains(const Permutation& g) const {
    if (g.degree() != degree_) throw DomainError("membership test with mismatched degree");
    std::size_t k = levels_.size();
    std::vector<Point> img(k);
    for (std::size_t l = 0; l < k; ++l) img[l] = g(base_[l]);
    std::vector<Point> coset(k);
    for (std::size_t l = 0; l < k; ++l) {
      Point c = img[l];
      if (levels_[l].edge[c] == kOutside) return false;
      coset[l] = c;
      for (std::size_t m = l + 1; m < k; ++m) img[m] = apply_inverse_transversal(l, c, img[m]);
    }
    if (certified_) return true;
    for (std::size_t q = 0; q < degree_; ++q) {
      Point v = g(static_cast<Point>(q));
      for (std::size_t l = 0; l < k; ++l) v = apply_inverse_transversal(l, coset[l], v);
      if (v != q) return false;
    }
    return true;
  }

  /// All elements, in a deterministic order.  Throws when order() > cap.
  std::vector<Permutation> elements(std::uint64_t cap = 100000) const {
    if (order_ > cap) throw BudgetError("group of order " + std::to_string(order_) + " exceeds element cap");
    std::vector<std::vector<Permutation>> transversals;
    for (std::size_t l = 0; l < levels_.size(); ++l) {
      std::vector<Permutation> t;
      for (Point x : levels_[l].orbit) t.push_back(transversal_element(l, x));
      transversals.push_back(std::move(t));
    }
    std::vector<Permutation> out{Permutation(degree_)};
    for (std::size_t l = levels_.size(); l-- > 0;) {
      std::vector<Permutation> next;
      next.reserve(out.size() * transversals[l].size());
      for (const auto& u : transversals[l]) {
        for (const auto& e : out) next.push_back(u * e);
      }
      out = std::move(next);
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  /// The transversal element u_x of the given level, with u_x(base[level]) = x.
  Permutation transversal_element(std::size_t level, Point x) const {
    std::vector<Point> images(degree_);
    std::vector<std::int32_t> path;
    collect_path(level, x, path);
    for (std::size_t q = 0; q < degree_; ++q) {
      images[q] = apply_path_forward(path, static_cast<Point>(q));
    }
    return Permutation::unchecked(std::move(images));
  }

  /// Stabilizer of a point, with its own stabilizer chain.
  PermutationGroup stabilizer(Point point) const {
    if (point >= degree_) throw DomainError("stabilizer point out of range");
    if (order_ == 1) return trivial(degree_);
    if (!base_.empty() && base_[0] == point) {
      std::vector<Point> rest(base_.begin() + 1, base_.end());
      return PermutationGroup(degree_, pointwise_stabilizer_generators(1), {rest, true});
    }
    std::vector<Point> prefix{point};
    for (Point b : base_) {
      if (b != point) prefix.push_back(b);
    }
    PermutationGroup rebased(degree_, generators_, {prefix, true});
    return rebased.stabilizer(point);
  }

 private:
  static constexpr std::int32_t kOutside = -1;
  static constexpr std::int32_t kRoot = -2;

  struct Level {
    Point base = 0;
    std::vector<std::uint32_t> gens;
    std::vector<Point> orbit;
    // kOutside, kRoot, or 2*gen + inv: the point is s(parent) (inv = 0) or
    // s^-1(parent) (inv = 1).
    std::vector<std::int32_t> edge;
  };

  std::size_t degree_ = 1;
  std::vector<Permutation> generators_;
  std::vector<std::vector<Point>> strong_;
  std::vector<std::vector<Point>> strong_inv_;
  std::vector<Point> base_;
  std::vector<Level> levels_;
  bool certified_ = false;
  std::uint64_t order_ = 1;

  void collect_path(std::size_t level, Point x, std::vector<std::int32_t>& path) const {
    path.clear();
    const Level& L = levels_[level];
    while (L.edge[x] != kRoot) {
      std::int32_t e = L.edge[x];
      path.push_back(e);
      std::uint32_t g = static_cast<std::uint32_t>(e >> 1);
      x = (e & 1) == 0 ? strong_inv_[g][x] : strong_[g][x];
    }
  }

  // path is leaf-to-root; u_x applies root-to-leaf.
  Point apply_path_forward(const std::vector<std::int32_t>& path, Point q) const {
    for (std::size_t i = path.size(); i-- > 0;) {
      std::int32_t e = path[i];
      std::uint32_t g = static_cast<std::uint32_t>(e >> 1);
      q = (e & 1) == 0 ? strong_[g][q] : strong_inv_[g][q];
    }
    return q;
  }

  Point apply_inverse_transversal(std::size_t level, Point x, Point q) const {
    const Level& L = levels_[level];
    while (L.edge[x] != kRoot) {
      std::int32_t e = L.edge[x];
      std::uint32_t g = static_cast<std::uint32_t>(e >> 1);
      if ((e & 1) == 0) {
        x = strong_inv_[g][x];
        q = strong_inv_[g][q];
      } else {
        x = strong_[g][x];
        q = strong_[g][q];
      }
    }
    return q;
  }

  void add_strong(const std::vector<Point>& images) {
    std::vector<Point> inv(images.size());
    for (std::size_t i = 0; i < images.size(); ++i) inv[images[i]] = static_cast<Point>(i);
    strong_.push_back(images);
    strong_inv_.push_back(std::move(inv));
  }

  bool fixes_prefix(const std::vector<Point>& s, std::size_t count) const {
    for (std::size_t l = 0; l < count; ++l) {
      if (s[base_[l]] != base_[l]) return false;
    }
    return true;
  }

  void recompute_orbit(std::size_t l) {
    Level& L = levels_[l];
    L.edge.assign(degree_, kOutside);
    L.orbit.clear();
    L.edge[L.base] = kRoot;
    L.orbit.push_back(L.base);
    for (std::size_t i = 0; i < L.orbit.size(); ++i) {
      Point p = L.orbit[i];
      for (std::uint32_t g : L.gens) {
        Point y = strong_[g][p];
        if (L.edge[y] == kOutside) {
          L.edge[y] = static_cast<std::int32_t>(2 * g);
          L.orbit.push_back(y);
        }
        Point z = strong_inv_[g][p];
        if (L.edge[z] == kOutside) {
          L.edge[z] = static_cast<std::int32_t>(2 * g + 1);
          L.orbit.push_back(z);
        }
      }
    }
  }

  void push_level(Point b) {
    base_.push_back(b);
    Level L;
    L.base = b;
    std::size_t l = levels_.size();
    for (std::uint32_t g = 0; g < strong_.size(); ++g) {
      if (fixes_prefix(strong_[g], l)) L.gens.push_back(g);
    }
    levels_.push_back(std::move(L));
    recompute_orbit(l);
  }

  // Full residue of the Schreier generator u_y^-1 s u_x of level i, sifted
  // through levels i+1 .. i+cosets.size().
  std::vector<Point> full_residue(std::size_t i, Point x, std::uint32_t s, Point y,
                                  const std::vector<Point>& cosets) const {
    std::vector<std::int32_t> path;
    collect_path(i, x, path);
    std::vector<Point> out(degree_);
    for (std::size_t q = 0; q < degree_; ++q) {
      Point v = apply_path_forward(path, static_cast<Point>(q));
      v = strong_[s][v];
      v = apply_inverse_transversal(i, y, v);
      for (std::size_t m = 0; m < cosets.size(); ++m) v = apply_inverse_transversal(i + 1 + m, cosets[m], v);
      out[q] = v;
    }
    return out;
  }

  void build(std::vector<Point> prefix) {
    for (const auto& g : generators_) {
      if (g.is_identity()) continue;
      std::vector<Point> images(g.images().begin(), g.images().end());
      if (std::find(strong_.begin(), strong_.end(), images) == strong_.end()) add_strong(images);
    }
    for (Point b : prefix) {
      if (b >= degree_) throw DomainError("base point out of range");
      if (std::find(base_.begin(), base_.end(), b) == base_.end()) push_level(b);
    }
    for (std::uint32_t g = 0; g < strong_.size(); ++g) {
      if (fixes_prefix(strong_[g], base_.size())) {
        if (certified_) throw DomainError("certified base is fixed by a nonidentity generator");
        Point b = Permutation::unchecked(strong_[g]).first_moved();
        push_level(b);
      }
    }
    if (!strong_.empty()) schreier_sims();
    order_ = 1;
    for (const auto& L : levels_) {
      std::uint64_t size = L.orbit.size();
      if (order_ > kMaxGroupOrder / size) {
        throw BudgetError("group order exceeds 10^12");
      }
      order_ *= size;
    }
  }

  void check_order_cap() const {
    std::uint64_t o = 1;
    for (const auto& L : levels_) {
      std::uint64_t size = L.orbit.size();
      if (o > kMaxGroupOrder / size) throw BudgetError("group order exceeds 10^12");
      o *= size;
    }
  }

  void schreier_sims() {
    std::size_t i = levels_.size() - 1;
    std::vector<std::int32_t> path;
    for (;;) {
      bool added = false;
      for (std::size_t oi = 0; oi < levels_[i].orbit.size() && !added; ++oi) {
        Point x = levels_[i].orbit[oi];
        for (std::size_t gj = 0; gj < levels_[i].gens.size() && !added; ++gj) {
          std::uint32_t s = levels_[i].gens[gj];
          Point y = strong_[s][x];
          const auto& edge = levels_[i].edge;
          if (edge[y] == static_cast<std::int32_t>(2 * s) && strong_inv_[s][y] == x) continue;
          if (edge[x] == static_cast<std::int32_t>(2 * s + 1) && strong_[s][x] == y) continue;
          std::size_t k = levels_.size();
          collect_path(i, x, path);
          std::vector<Point> img;
          for (std::size_t m = i + 1; m < k; ++m) {
            Point v = apply_path_forward(path, base_[m]);
            v = strong_[s][v];
            img.push_back(apply_inverse_transversal(i, y, v));
          }
          std::vector<Point> cosets;
          std::size_t drop = k;
          for (std::size_t m = i + 1; m < k; ++m) {
            Point c = img[m - i - 1];
            if (levels_[m].edge[c] == kOutside) {
              drop = m;
              break;
            }
            cosets.push_back(c);
            for (std::size_t r = m + 1; r < k; ++r) {
              img[r - i - 1] = apply_inverse_transversal(m, c, img[r - i - 1]);
            }
          }
          if (drop == k && certified_) continue;
          std::vector<Point> h = full_residue(i, x, s, y, cosets);
          Point moved = Permutation::unchecked(h).first_moved();
          if (moved == kNoPoint) continue;
          add_strong(h);
          std::uint32_t hi = static_cast<std::uint32_t>(strong_.size() - 1);
          if (drop == k) {
            push_level(moved);
            for (std::size_t l = 0; l < k; ++l) levels_[l].gens.push_back(hi);
            for (std::size_t l = i + 1; l < k; ++l) recompute_orbit(l);
          } else {
            for (std::size_t l = 0; l <= drop; ++l) levels_[l].gens.push_back(hi);
            for (std::size_t l = i + 1; l <= drop; ++l) recompute_orbit(l);
          }
          check_order_cap();
          i = drop;
          added = true;
        }
      }
      if (added) continue;
      if (i == 0) break;
      --i;
    }
  }
};

/// Orbit of a point with, for each orbit point, a word in the group
/// generators (letters +k / -k) carrying the point to it.
struct OrbitResult {
  std::vector<Point> points;  // breadth-first order
  std::vector<Word> words;    // parallel to points
};

inline Point act_word(const std::vector<Permutation>& gens, const std::vector<Permutation>& inverses,
                      const Word& w, Point p) {
  const auto& letters = w.letters();
  for (std::size_t i = letters.size(); i-- > 0;) {
    int x = letters[i];
    p = x > 0 ? gens[static_cast<std::size_t>(x - 1)](p) : inverses[static_cast<std::size_t>(-x - 1)](p);
  }
  return p;
}

inline OrbitResult orbit(const PermutationGroup& group, Point point) {
  if (point >= group.degree()) throw DomainError("orbit point out of range");
  const auto& gens = group.generators();
  std::vector<Permutation> inv;
  for (const auto& g : gens) inv.push_back(g.inverse());
  OrbitResult r;
  std::vector<std::int64_t> index(group.degree(), -1);
  r.points.push_back(point);
  r.words.emplace_back();
  index[point] = 0;
  for (std::size_t i = 0; i < r.points.size(); ++i) {
    Point p = r.points[i];
    for (std::size_t g = 0; g < gens.size(); ++g) {
      for (int sign : {1, -1}) {
        Point y = sign > 0 ? gens[g](p) : inv[g](p);
        if (index[y] >= 0) continue;
        index[y] = static_cast<std::int64_t>(r.points.size());
        r.points.push_back(y);
        r.words.push_back(Word::generator(g, sign < 0) * r.words[i]);
      }
    }
  }
  return r;
}

inline PermutationGroup stabilizer(const PermutationGroup& group, Point point) {
  return group.stabilizer(point);
}

enum class MapKind { coset_action, block_quotient, tower_bonding };

inline const char* to_string(MapKind k) {
  switch (k) {
    case MapKind::coset_action: return "coset-action";
    case MapKind::block_quotient: return "block-quotient";
    case MapKind::tower_bonding: return "tower-bonding";
  }
  return "?";
}

/// A homomorphism given by generator images.  Block-based maps also carry
/// the point map so arbitrary elements can be pushed through.
class GroupMap {
 public:
  GroupMap(MapKind kind, std::vector<Permutation> source_generators, std::vector<Permutation> images,
           std::size_t target_degree, std::vector<Point> point_map = {})
      : kind_(kind),
        source_(std::move(source_generators)),
        images_(std::move(images)),
        target_degree_(target_degree),
        point_map_(std::move(point_map)) {
    if (source_.size() != images_.size()) throw DomainError("group map generator and image counts differ");
    for (const auto& im : images_) {
      if (im.degree() != target_degree_) throw DomainError("group map image degree mismatch");
    }
    if (!point_map_.empty()) {
      representative_.assign(target_degree_, kNoPoint);
      for (std::size_t x = 0; x < point_map_.size(); ++x) {
        Point b = point_map_[x];
        if (b != kNoPoint && representative_[b] == kNoPoint) representative_[b] = static_cast<Point>(x);
      }
    }
  }

  MapKind kind() const noexcept { return kind_; }
  const std::vector<Permutation>& source_generators() const noexcept { return source_; }
  const std::vector<Permutation>& images() const noexcept { return images_; }
  std::size_t target_degree() const noexcept { return target_degree_; }
  bool has_point_map() const noexcept { return !point_map_.empty(); }
  const std::vector<Point>& point_map() const noexcept { return point_map_; }

  Permutation apply(const Permutation& g) const {
    if (point_map_.empty()) throw DomainError("group map without point map cannot apply arbitrary elements");
    std::vector<Point> out(target_degree_);
    for (std::size_t b = 0; b < target_degree_; ++b) out[b] = point_map_[g(representative_[b])];
    return Permutation(std::move(out));
  }

  /// Checks image(gh) = image(g) image(h) on all generator pairs.
  bool verify_on_generator_pairs() const {
    if (point_map_.empty()) return true;
    for (std::size_t i = 0; i < source_.size(); ++i) {
      if (apply(source_[i]) != images_[i]) return false;
      for (std::size_t j = 0; j < source_.size(); ++j) {
        if (apply(source_[i] * source_[j]) != images_[i] * images_[j]) return false;
      }
    }
    return true;
  }

 private:
  MapKind kind_;
  std::vector<Permutation> source_;
  std::vector<Permutation> images_;
  std::size_t target_degree_;
  std::vector<Point> point_map_;
  std::vector<Point> representative_;
};

/// Action on blocks.  block_map[x] is the block of x, or kNoPoint for points
/// outside an invariant domain that the quotient ignores.
inline std::pair<PermutationGroup, GroupMap> induced_action(const PermutationGroup& group,
                                                            const std::vector<Point>& block_map,
                                                            MapKind kind = MapKind::block_quotient) {
  if (block_map.size() != group.degree()) throw DomainError("block map size differs from degree");
  std::size_t blocks = 0;
  for (Point b : block_map) {
    if (b != kNoPoint) blocks = std::max<std::size_t>(blocks, b + 1);
  }
  if (blocks == 0) throw DomainError("block map has no blocks");
  std::vector<bool> hit(blocks, false);
  for (Point b : block_map) {
    if (b != kNoPoint) hit[b] = true;
  }
  for (std::size_t b = 0; b < blocks; ++b) {
    if (!hit[b]) throw DomainError("block map is not surjective onto 0.." + std::to_string(blocks - 1));
  }
  std::vector<Permutation> images;
  const auto& gens = group.generators();
  for (std::size_t g = 0; g < gens.size(); ++g) {
    std::vector<Point> image(blocks, kNoPoint);
    for (std::size_t x = 0; x < block_map.size(); ++x) {
      Point b = block_map[x];
      Point t = block_map[gens[g](static_cast<Point>(x))];
      if ((b == kNoPoint) != (t == kNoPoint) || (b != kNoPoint && image[b] != kNoPoint && image[b] != t)) {
        throw ValidationError("partition not invariant: generator " + std::to_string(g) + " splits block " +
                              std::to_string(b == kNoPoint ? t : b));
      }
      if (b != kNoPoint) image[b] = t;
    }
    std::vector<bool> seen(blocks, false);
    for (std::size_t b = 0; b < blocks; ++b) {
      if (seen[image[b]]) {
        throw ValidationError("partition not invariant: generator " + std::to_string(g) + " merges block " +
                              std::to_string(b));
      }
      seen[image[b]] = true;
    }
    images.push_back(Permutation::unchecked(std::move(image)));
  }
  PermutationGroup target(blocks, images);
  GroupMap map(kind, gens, std::move(images), blocks, block_map);
  return {std::move(target), std::move(map)};
}

/// Kernel of the homomorphism described by a GroupMap.  The source group acts
/// on its points, the images on the target points; the kernel is the
/// pointwise stabilizer of the target points in the diagonal action.
inline PermutationGroup kernel_of_action(const GroupMap& map) {
  const auto& src = map.source_generators();
  if (src.empty()) return PermutationGroup::trivial(1);
  std::size_t n = src.front().degree();
  std::size_t m = map.target_degree();
  std::vector<Permutation> diagonal;
  for (std::size_t i = 0; i < src.size(); ++i) diagonal.push_back(direct_sum(src[i], map.images()[i]));
  std::vector<Point> prefix;
  for (std::size_t t = 0; t < m; ++t) prefix.push_back(static_cast<Point>(n + t));
  PermutationGroup graph(n + m, diagonal, {prefix, false});
  PermutationGroup source(n, src);
  if (graph.order() != source.order()) throw DomainError("group map is not a homomorphism");
  std::vector<Permutation> kernel_gens;
  for (const auto& k : graph.pointwise_stabilizer_generators(m)) {
    std::vector<Point> images(k.images().begin(), k.images().begin() + static_cast<std::ptrdiff_t>(n));
    kernel_gens.push_back(Permutation::unchecked(std::move(images)));
  }
  PermutationGroup kernel(n, std::move(kernel_gens));
  for (const auto& s : src) {
    Permutation sinv = s.inverse();
    for (const auto& k : kernel.generators()) {
      if (!kernel.contains(s * k * sinv)) throw Error("kernel is not normal; internal inconsistency");
    }
  }
  return kernel;
}

/// Smallest normal subgroup of `ambient` containing `elements`.
inline PermutationGroup normal_closure(const PermutationGroup& ambient, const std::vector<Permutation>& elements) {
  std::vector<Permutation> gens;
  for (const auto& e : elements) {
    if (!e.is_identity()) gens.push_back(e);
  }
  PermutationGroup closure(ambient.degree(), gens);
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& a : ambient.generators()) {
      Permutation ainv = a.inverse();
      for (std::size_t i = 0; i < gens.size() && !changed; ++i) {
        Permutation c = a * gens[i] * ainv;
        if (!closure.contains(c)) {
          gens.push_back(c);
          closure = PermutationGroup(ambient.degree(), gens);
          changed = true;
        }
      }
      if (changed) break;
    }
  }
  return closure;
}

}  // namespace solch
