#pragma once

#include <algorithm>
#include <cstdint>
#include <memory>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "solch/errors.hpp"
#include "solch/permutation.hpp"

namespace solch {

/// Orbit of a tuple of points under a list of generators, enumerated
/// breadth-first with forward generators only.  Index 0 is the seed.
class TupleOrbit {
 public:
  TupleOrbit(const std::vector<Permutation>& gens, std::vector<Point> seed, std::uint64_t cap)
      : width_(seed.size()) {
    if (width_ == 0) throw DomainError("empty seed tuple");
    slots_.assign(64, kEmpty);
    insert(seed);
    parent_.push_back(0);
    parent_gen_.push_back(0);
    actions_.assign(gens.size(), {});
    std::vector<Point> next(width_);
    for (std::size_t i = 0; i < size(); ++i) {
      for (std::size_t g = 0; g < gens.size(); ++g) {
        for (std::size_t c = 0; c < width_; ++c) next[c] = gens[g](flat_[i * width_ + c]);
        auto [index, inserted] = insert(next);
        if (inserted) {
          if (size() > cap) throw BudgetError("orbit exceeds cap of " + std::to_string(cap) + " elements");
          parent_.push_back(static_cast<std::uint32_t>(i));
          parent_gen_.push_back(static_cast<std::uint32_t>(g));
        }
        actions_[g].push_back(index);
      }
    }
  }

  std::size_t size() const noexcept { return flat_.size() / width_; }
  std::size_t width() const noexcept { return width_; }
  std::span<const Point> tuple(std::size_t i) const { return {flat_.data() + i * width_, width_}; }
  Point coordinate(std::size_t i, std::size_t c) const { return flat_[i * width_ + c]; }
  const std::vector<std::uint32_t>& action(std::size_t g) const { return actions_[g]; }
  std::size_t generator_count() const noexcept { return actions_.size(); }
  std::uint32_t parent(std::size_t i) const { return parent_[i]; }
  std::uint32_t parent_generator(std::size_t i) const { return parent_gen_[i]; }

  std::optional<std::uint32_t> find(std::span<const Point> t) const {
    std::size_t mask = slots_.size() - 1;
    for (std::size_t h = hash(t) & mask;; h = (h + 1) & mask) {
      std::uint32_t s = slots_[h];
      if (s == kEmpty) return std::nullopt;
      if (std::equal(t.begin(), t.end(), flat_.begin() + static_cast<std::ptrdiff_t>(s * width_))) return s;
    }
  }

 private:
  static constexpr std::uint32_t kEmpty = static_cast<std::uint32_t>(-1);

  std::size_t width_;
  std::vector<Point> flat_;
  std::vector<std::uint32_t> slots_;
  std::vector<std::uint32_t> parent_;
  std::vector<std::uint32_t> parent_gen_;
  std::vector<std::vector<std::uint32_t>> actions_;

  static std::size_t hash(std::span<const Point> t) noexcept {
    std::uint64_t h = 0x9e3779b97f4a7c15ull;
    for (Point x : t) {
      h ^= x + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
      h *= 0xff51afd7ed558ccdull;
    }
    return static_cast<std::size_t>(h ^ (h >> 29));
  }

  std::pair<std::uint32_t, bool> insert(std::span<const Point> t) {
    if (auto found = find(t)) return {*found, false};
    std::uint32_t index = static_cast<std::uint32_t>(size());
    flat_.insert(flat_.end(), t.begin(), t.end());
    if (2 * size() > slots_.size()) {
      std::vector<std::uint32_t> old(slots_.size() * 2, kEmpty);
      std::swap(old, slots_);
      for (std::uint32_t s = 0; s < index; ++s) place(s);
    }
    place(index);
    return {index, true};
  }

  void place(std::uint32_t s) {
    std::size_t mask = slots_.size() - 1;
    std::size_t h = hash(tuple(s)) & mask;
    while (slots_[h] != kEmpty) h = (h + 1) & mask;
    slots_[h] = s;
  }
};

/// Outcome of covering an orbit by centralizer elements.  When the action
/// is not regular, `moved_point` is a point moved by some element of the
/// stabilizer of the seed tuple.
struct RegularityCheck {
  bool regular = false;
  Point moved_point = kNoPoint;
};

namespace detail {

/// The map c with c(root) = v and c(s x) = s c(x) along the BFS tree; empty
/// optional plus the conflicting pair when c does not commute with some
/// generator.
struct CentralizerAttempt {
  std::vector<std::uint32_t> map;
  bool commutes = true;
  std::uint32_t conflict_a = 0;  // c(y)
  std::uint32_t conflict_b = 0;  // s c(x)
};

inline CentralizerAttempt centralizer_from(const TupleOrbit& orbit, std::uint32_t v) {
  CentralizerAttempt r;
  std::size_t n = orbit.size();
  r.map.resize(n);
  r.map[0] = v;
  for (std::size_t i = 1; i < n; ++i) {
    r.map[i] = orbit.action(orbit.parent_generator(i))[r.map[orbit.parent(i)]];
  }
  for (std::size_t g = 0; g < orbit.generator_count(); ++g) {
    const auto& a = orbit.action(g);
    for (std::size_t x = 0; x < n; ++x) {
      std::uint32_t lhs = r.map[a[x]];
      std::uint32_t rhs = a[r.map[x]];
      if (lhs != rhs) {
        r.commutes = false;
        r.conflict_a = lhs;
        r.conflict_b = rhs;
        return r;
      }
    }
  }
  return r;
}

}  // namespace detail

/// Decides whether the generators act regularly on the orbit by covering it
/// with centralizer elements; the action is regular iff the centralizer is
/// transitive.
inline RegularityCheck check_regular(const TupleOrbit& orbit) {
  std::size_t n = orbit.size();
  std::vector<char> covered(n, 0);
  covered[0] = 1;
  std::vector<std::vector<std::uint32_t>> cents;
  for (std::uint32_t v = 0; v < n; ++v) {
    if (covered[v]) continue;
    auto attempt = detail::centralizer_from(orbit, v);
    if (!attempt.commutes) {
      auto a = orbit.tuple(attempt.conflict_a);
      auto b = orbit.tuple(attempt.conflict_b);
      std::size_t j = 0;
      while (a[j] == b[j]) ++j;
      return {false, orbit.coordinate(v, j)};
    }
    cents.push_back(std::move(attempt.map));
    std::vector<std::uint32_t> queue{0};
    std::fill(covered.begin(), covered.end(), 0);
    covered[0] = 1;
    for (std::size_t i = 0; i < queue.size(); ++i) {
      for (const auto& c : cents) {
        std::uint32_t y = c[queue[i]];
        if (!covered[y]) {
          covered[y] = 1;
          queue.push_back(y);
        }
      }
    }
  }
  return {true, kNoPoint};
}

/// Regularity of a transitive action on points 0..degree-1.
inline RegularityCheck check_regular(const std::vector<Permutation>& gens, std::size_t degree) {
  TupleOrbit orbit(gens, {0}, degree);
  if (orbit.size() != degree) throw ValidationError("action is not transitive");
  return check_regular(orbit);
}

/// The regular representation of the group generated by a transitive action:
/// a tuple T starting with point 0 whose orbit is acted on regularly.  Then T
/// is a base, the orbit is in bijection with the group, and tuples whose first
/// coordinate is 0 are the point stabilizer.  Regularity forces Stab(T) to be
/// normal, and a normal subgroup fixing a point of a transitive action is
/// trivial.
class RegularOrbit {
 public:
  RegularOrbit(const std::vector<Permutation>& gens, std::size_t degree, std::uint64_t cap) : gens_(gens) {
    std::vector<Point> base{0};
    orbit_ = std::make_shared<const TupleOrbit>(gens_, base, cap);
    if (orbit_->size() != degree) throw ValidationError("action is not transitive");
    degree_ = degree;
    for (;;) {
      RegularityCheck check = check_regular(*orbit_);
      if (check.regular) break;
      std::vector<Point> extended = base;
      extended.push_back(check.moved_point);
      TupleOrbit probe(gens_, extended, cap);
      Point best = check.moved_point;
      for (std::size_t i = 0; i < probe.size(); ++i) {
        auto t = probe.tuple(i);
        if (std::equal(base.begin(), base.end(), t.begin())) best = std::min(best, t[base.size()]);
      }
      extended.back() = best;
      base = std::move(extended);
      orbit_ = std::make_shared<const TupleOrbit>(gens_, base, cap);
    }
    base_ = std::move(base);
  }

  const std::vector<Point>& base() const noexcept { return base_; }
  std::uint64_t group_order() const noexcept { return orbit_->size(); }
  std::uint64_t stabilizer_order() const noexcept { return orbit_->size() / degree_; }
  std::size_t degree() const noexcept { return degree_; }
  const TupleOrbit& orbit() const noexcept { return *orbit_; }
  const std::vector<Permutation>& generators() const noexcept { return gens_; }

  /// Orbit indices of the elements fixing point 0, identity first.
  std::vector<std::uint32_t> stabilizer_indices() const {
    std::vector<std::uint32_t> out;
    for (std::size_t i = 0; i < orbit_->size(); ++i) {
      if (orbit_->coordinate(i, 0) == 0) out.push_back(static_cast<std::uint32_t>(i));
    }
    return out;
  }

  /// Actions of the given elements on the points 0..degree-1.
  std::vector<Permutation> element_permutations(const std::vector<std::uint32_t>& indices) const {
    std::vector<Permutation> out;
    if (indices.empty()) return out;
    const TupleOrbit& o = *orbit_;
    std::size_t n = o.size();
    // Right multiplication by generator s sends k.T to (k s).T; it is the
    // centralizer element taking T to s.T.
    std::vector<std::vector<std::uint32_t>> right;
    for (std::size_t g = 0; g < o.generator_count(); ++g) {
      right.push_back(detail::centralizer_from(o, o.action(g)[0]).map);
    }
    std::vector<std::uint32_t> order{0};
    std::vector<std::uint32_t> par(n, 0), gen(n, 0);
    std::vector<char> seen(n, 0);
    seen[0] = 1;
    for (std::size_t i = 0; i < order.size(); ++i) {
      for (std::size_t g = 0; g < right.size(); ++g) {
        std::uint32_t y = right[g][order[i]];
        if (!seen[y]) {
          seen[y] = 1;
          par[y] = order[i];
          gen[y] = static_cast<std::uint32_t>(g);
          order.push_back(y);
        }
      }
    }
    std::vector<std::uint32_t> hk(n);
    for (std::uint32_t h : indices) {
      hk[0] = h;
      std::vector<Point> images(degree_, kNoPoint);
      images[o.coordinate(0, 0)] = o.coordinate(h, 0);
      for (std::size_t i = 1; i < order.size(); ++i) {
        std::uint32_t k = order[i];
        hk[k] = right[gen[k]][hk[par[k]]];
        images[o.coordinate(k, 0)] = o.coordinate(hk[k], 0);
      }
      out.push_back(Permutation::unchecked(std::move(images)));
    }
    return out;
  }

  /// Rank of each orbit tuple in lexicographic order; the seed has rank 0.
  std::vector<std::uint32_t> lex_ranks() const {
    const TupleOrbit& o = *orbit_;
    std::vector<std::uint32_t> idx(o.size());
    std::iota(idx.begin(), idx.end(), 0u);
    std::sort(idx.begin(), idx.end(), [&](std::uint32_t a, std::uint32_t b) {
      auto ta = o.tuple(a);
      auto tb = o.tuple(b);
      return std::lexicographical_compare(ta.begin(), ta.end(), tb.begin(), tb.end());
    });
    std::vector<std::uint32_t> rank(o.size());
    for (std::size_t r = 0; r < idx.size(); ++r) rank[idx[r]] = static_cast<std::uint32_t>(r);
    return rank;
  }

 private:
  std::vector<Permutation> gens_;
  std::size_t degree_ = 1;
  std::vector<Point> base_;
  std::shared_ptr<const TupleOrbit> orbit_;
};

}  // namespace solch
