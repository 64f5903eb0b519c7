#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <functional>
#include <numeric>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "solch/errors.hpp"

namespace solch {

using Point = std::uint32_t;

inline constexpr Point kNoPoint = static_cast<Point>(-1);

/// A bijection of {0, ..., degree-1}.  Composition is right to left:
/// (p * q)(x) == p(q(x)).
class Permutation {
 public:
  Permutation() = default;

  explicit Permutation(std::size_t degree) : images_(degree) {
    std::iota(images_.begin(), images_.end(), Point{0});
  }

  explicit Permutation(std::vector<Point> images) : images_(std::move(images)) {
    std::vector<bool> seen(images_.size(), false);
    for (std::size_t i = 0; i < images_.size(); ++i) {
      Point y = images_[i];
      if (y >= images_.size() || seen[y]) {
        throw DomainError("image array is not a bijection at index " + std::to_string(i));
      }
      seen[y] = true;
    }
  }

  /// Skips the bijection check; the caller guarantees it.
  static Permutation unchecked(std::vector<Point> images) {
    Permutation p;
    p.images_ = std::move(images);
    return p;
  }

  /// Parses cycle notation such as "(0 1 2)(3 4)"; "()" or "" is the identity.
  static Permutation from_cycles(std::size_t degree, std::string_view text) {
    std::vector<Point> images(degree);
    std::iota(images.begin(), images.end(), Point{0});
    std::vector<bool> used(degree, false);
    std::size_t i = 0;
    auto skip_space = [&] {
      while (i < text.size() && (text[i] == ' ' || text[i] == ',' || text[i] == '\t')) ++i;
    };
    skip_space();
    while (i < text.size()) {
      if (text[i] != '(') throw ParseError("expected '(' in cycle notation", i);
      ++i;
      std::vector<Point> cycle;
      for (;;) {
        skip_space();
        if (i >= text.size()) throw ParseError("unterminated cycle", i);
        if (text[i] == ')') {
          ++i;
          break;
        }
        if (text[i] < '0' || text[i] > '9') throw ParseError("expected a point index", i);
        std::uint64_t v = 0;
        while (i < text.size() && text[i] >= '0' && text[i] <= '9') {
          v = v * 10 + static_cast<std::uint64_t>(text[i] - '0');
          if (v >= degree) throw ParseError("point index exceeds degree", i);
          ++i;
        }
        if (used[v]) throw ParseError("point repeated in cycle notation", i);
        used[v] = true;
        cycle.push_back(static_cast<Point>(v));
      }
      for (std::size_t k = 0; k < cycle.size(); ++k) {
        images[cycle[k]] = cycle[(k + 1) % cycle.size()];
      }
      skip_space();
    }
    return unchecked(std::move(images));
  }

  std::size_t degree() const noexcept { return images_.size(); }
  Point operator()(Point x) const noexcept { return images_[x]; }
  std::span<const Point> images() const noexcept { return images_; }

  bool is_identity() const noexcept {
    for (std::size_t i = 0; i < images_.size(); ++i) {
      if (images_[i] != i) return false;
    }
    return true;
  }

  Permutation inverse() const {
    std::vector<Point> inv(images_.size());
    for (std::size_t i = 0; i < images_.size(); ++i) inv[images_[i]] = static_cast<Point>(i);
    return unchecked(std::move(inv));
  }

  friend Permutation operator*(const Permutation& p, const Permutation& q) {
    if (p.degree() != q.degree()) throw DomainError("composing permutations of different degree");
    std::vector<Point> out(q.degree());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = p.images_[q.images_[i]];
    return unchecked(std::move(out));
  }

  friend bool operator==(const Permutation&, const Permutation&) = default;
  friend auto operator<=>(const Permutation& a, const Permutation& b) {
    return a.images_ <=> b.images_;
  }

  /// Order of the cyclic group generated by this permutation.
  std::uint64_t order() const {
    std::uint64_t result = 1;
    std::vector<bool> seen(images_.size(), false);
    for (std::size_t i = 0; i < images_.size(); ++i) {
      if (seen[i]) continue;
      std::uint64_t len = 0;
      for (Point x = static_cast<Point>(i); !seen[x]; x = images_[x]) {
        seen[x] = true;
        ++len;
      }
      result = std::lcm(result, len);
    }
    return result;
  }

  /// Smallest moved point, or kNoPoint for the identity.
  Point first_moved() const noexcept {
    for (std::size_t i = 0; i < images_.size(); ++i) {
      if (images_[i] != i) return static_cast<Point>(i);
    }
    return kNoPoint;
  }

  bool is_even() const {
    std::size_t transpositions = 0;
    std::vector<bool> seen(images_.size(), false);
    for (std::size_t i = 0; i < images_.size(); ++i) {
      if (seen[i]) continue;
      std::size_t len = 0;
      for (Point x = static_cast<Point>(i); !seen[x]; x = images_[x]) {
        seen[x] = true;
        ++len;
      }
      transpositions += len - 1;
    }
    return transpositions % 2 == 0;
  }

  std::string to_cycles() const {
    std::string out;
    std::vector<bool> seen(images_.size(), false);
    for (std::size_t i = 0; i < images_.size(); ++i) {
      if (seen[i] || images_[i] == i) continue;
      out += '(';
      for (Point x = static_cast<Point>(i); !seen[x]; x = images_[x]) {
        seen[x] = true;
        if (out.back() != '(') out += ' ';
        out += std::to_string(x);
      }
      out += ')';
    }
    return out.empty() ? "()" : out;
  }

  std::size_t hash() const noexcept {
    std::uint64_t h = 1469598103934665603ull;
    for (Point x : images_) {
      h ^= x;
      h *= 1099511628211ull;
    }
    return static_cast<std::size_t>(h);
  }

 private:
  std::vector<Point> images_;
};

struct PermutationHash {
  std::size_t operator()(const Permutation& p) const noexcept { return p.hash(); }
};

/// The permutation on `a + b` points acting as `p` on the first block and as
/// `q` shifted by `a` on the second.
inline Permutation direct_sum(const Permutation& p, const Permutation& q) {
  std::vector<Point> images(p.degree() + q.degree());
  for (std::size_t i = 0; i < p.degree(); ++i) images[i] = p(static_cast<Point>(i));
  for (std::size_t i = 0; i < q.degree(); ++i) {
    images[p.degree() + i] = static_cast<Point>(p.degree() + q(static_cast<Point>(i)));
  }
  return Permutation::unchecked(std::move(images));
}

}  // namespace solch
