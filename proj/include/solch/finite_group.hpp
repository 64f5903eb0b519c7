#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "solch/errors.hpp"
#include "solch/permutation.hpp"

namespace solch {

/// A small group held as an explicit element list.  Elements are stored as
/// permutations restricted to the support of the generators; products are
/// looked up by hashing.
class FiniteGroup {
 public:
  FiniteGroup(const std::vector<Permutation>& generators, std::uint64_t cap) {
    std::size_t degree = generators.empty() ? 1 : generators.front().degree();
    std::vector<bool> moved(degree, false);
    for (const auto& g : generators) {
      for (std::size_t x = 0; x < degree; ++x) {
        if (g(static_cast<Point>(x)) != x) moved[x] = true;
      }
    }
    std::vector<Point> support;
    std::vector<Point> local(degree, kNoPoint);
    for (std::size_t x = 0; x < degree; ++x) {
      if (moved[x]) {
        local[x] = static_cast<Point>(support.size());
        support.push_back(static_cast<Point>(x));
      }
    }
    std::size_t n = std::max<std::size_t>(support.size(), 1);
    for (const auto& g : generators) {
      std::vector<Point> images(n);
      std::iota(images.begin(), images.end(), Point{0});
      for (std::size_t i = 0; i < support.size(); ++i) images[i] = local[g(support[i])];
      gens_.push_back(Permutation::unchecked(std::move(images)));
    }
    add(Permutation(n));
    for (std::size_t i = 0; i < elements_.size(); ++i) {
      for (const auto& g : gens_) {
        Permutation y = elements_[i] * g;
        if (!index_.count(y)) {
          if (elements_.size() >= cap) throw BudgetError("group exceeds element cap " + std::to_string(cap));
          add(std::move(y));
        }
      }
    }
    for (const auto& g : gens_) gen_index_.push_back(index_.at(g));
    for (const auto& e : elements_) orders_.push_back(e.order());
  }

  std::size_t size() const noexcept { return elements_.size(); }
  const std::vector<std::size_t>& generator_indices() const noexcept { return gen_index_; }
  std::uint64_t element_order(std::size_t a) const { return orders_[a]; }
  std::size_t mul(std::size_t a, std::size_t b) const { return index_.at(elements_[a] * elements_[b]); }
  std::size_t inv(std::size_t a) const { return index_.at(elements_[a].inverse()); }
  static constexpr std::size_t identity() noexcept { return 0; }

  /// Subgroup closure of a set of elements, as a sorted index list.
  std::vector<std::size_t> closure(const std::vector<std::size_t>& gens) const {
    std::vector<char> in(size(), 0);
    std::vector<std::size_t> out{0};
    in[0] = 1;
    for (std::size_t i = 0; i < out.size(); ++i) {
      for (std::size_t g : gens) {
        std::size_t y = mul(out[i], g);
        if (!in[y]) {
          in[y] = 1;
          out.push_back(y);
        }
      }
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  /// Derived subgroup: normal closure of generator commutators.
  std::vector<std::size_t> derived_subgroup() const {
    std::vector<std::size_t> comm;
    for (std::size_t a : gen_index_) {
      for (std::size_t b : gen_index_) {
        std::size_t c = mul(mul(inv(a), inv(b)), mul(a, b));
        if (c != 0) comm.push_back(c);
      }
    }
    std::vector<std::size_t> sub = closure(comm);
    for (bool changed = true; changed;) {
      changed = false;
      std::vector<char> in(size(), 0);
      for (std::size_t x : sub) in[x] = 1;
      for (std::size_t x : std::vector<std::size_t>(sub)) {
        for (std::size_t g : gen_index_) {
          std::size_t y = mul(mul(g, x), inv(g));
          if (!in[y]) {
            comm.push_back(y);
            changed = true;
          }
        }
      }
      if (changed) sub = closure(comm);
    }
    return sub;
  }

 private:
  std::vector<Permutation> gens_;
  std::vector<Permutation> elements_;
  std::unordered_map<Permutation, std::size_t, PermutationHash> index_;
  std::vector<std::size_t> gen_index_;
  std::vector<std::uint64_t> orders_;

  void add(Permutation p) {
    index_.emplace(p, elements_.size());
    elements_.push_back(std::move(p));
  }
};

/// Isomorphism-invariant summary of a finite group.
struct Fingerprint {
  std::uint64_t order = 1;
  /// Primary invariants of the abelianization, sorted by prime then exponent.
  std::vector<std::uint64_t> abelian_invariants;
  /// (element order, count) pairs, ascending.
  std::vector<std::pair<std::uint64_t, std::uint64_t>> element_orders;
  /// False when only the order was computed (group above the element cap).
  bool complete = true;

  friend bool operator==(const Fingerprint&, const Fingerprint&) = default;

  bool is_cyclic() const {
    return complete && (order == 1 || (!element_orders.empty() && element_orders.back().first == order));
  }
  bool is_abelian() const {
    std::uint64_t p = 1;
    for (auto q : abelian_invariants) p *= q;
    return complete && p == order;
  }

  std::string name() const {
    if (order == 1) return "1";
    if (!complete) return "order " + std::to_string(order);
    if (is_cyclic()) return "C" + std::to_string(order);
    if (is_abelian()) {
      std::string s;
      for (auto q : abelian_invariants) s += (s.empty() ? "C" : " x C") + std::to_string(q);
      return s;
    }
    std::string ab;
    for (auto q : abelian_invariants) ab += (ab.empty() ? "C" : " x C") + std::to_string(q);
    return "nonabelian of order " + std::to_string(order) + " (abelianization " + (ab.empty() ? "1" : ab) + ")";
  }
};

namespace detail {

inline std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t p = 2; p * p <= n; ++p) {
    if (n % p == 0) {
      out.push_back(p);
      while (n % p == 0) n /= p;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

}  // namespace detail

inline Fingerprint fingerprint(const FiniteGroup& g) {
  Fingerprint f;
  f.order = g.size();
  std::map<std::uint64_t, std::uint64_t> counts;
  for (std::size_t a = 0; a < g.size(); ++a) ++counts[g.element_order(a)];
  f.element_orders.assign(counts.begin(), counts.end());

  std::vector<std::size_t> derived = g.derived_subgroup();
  std::vector<char> in_derived(g.size(), 0);
  for (std::size_t x : derived) in_derived[x] = 1;
  std::uint64_t quotient = g.size() / derived.size();
  // Order of each coset a G' in the abelianization; every coset is counted
  // |G'| times.
  std::map<std::uint64_t, std::uint64_t> coset_orders;
  for (std::size_t a = 0; a < g.size(); ++a) {
    std::uint64_t k = 1;
    std::size_t power = a;
    while (!in_derived[power]) {
      power = g.mul(power, a);
      ++k;
    }
    ++coset_orders[k];
  }
  for (auto& [k, c] : coset_orders) c /= derived.size();
  for (std::uint64_t p : detail::prime_factors(quotient)) {
    // n_e = #{x : x^(p^e) = 1} = p^(sum_j min(e, e_j)).
    std::size_t top = 0;
    for (std::uint64_t q = quotient; q % p == 0; q /= p) ++top;
    std::vector<std::uint64_t> logs{0};
    std::uint64_t pe = 1;
    for (std::size_t e = 1; e <= top; ++e) {
      pe *= p;
      std::uint64_t n = 0;
      for (auto [k, c] : coset_orders) {
        if (pe % k == 0) n += c;
      }
      std::uint64_t lg = 0;
      for (std::uint64_t v = n; v > 1; v /= p) ++lg;
      logs.push_back(lg);
    }
    // #{j : e_j >= e} = logs[e] - logs[e-1].
    std::vector<std::uint64_t> at_least;
    for (std::size_t e = 1; e < logs.size(); ++e) at_least.push_back(logs[e] - logs[e - 1]);
    at_least.push_back(0);
    std::vector<std::uint64_t> powers;
    for (std::size_t e = 1; e < at_least.size(); ++e) {
      std::uint64_t exactly = at_least[e - 1] - at_least[e];
      std::uint64_t q = 1;
      for (std::size_t i = 0; i < e; ++i) q *= p;
      for (std::uint64_t i = 0; i < exactly; ++i) powers.push_back(q);
    }
    std::sort(powers.begin(), powers.end());
    f.abelian_invariants.insert(f.abelian_invariants.end(), powers.begin(), powers.end());
  }
  return f;
}

inline Fingerprint fingerprint(const std::vector<Permutation>& generators, std::uint64_t order,
                               std::uint64_t cap = 100000) {
  if (order > cap) {
    Fingerprint f;
    f.order = order;
    f.complete = false;
    return f;
  }
  return fingerprint(FiniteGroup(generators, cap));
}

/// Exhaustive isomorphism test by generator-image search.  Returns nullopt
/// when either group exceeds the order bound.
inline std::optional<bool> isomorphic(const FiniteGroup& a, const FiniteGroup& b, std::size_t bound = 5040) {
  if (a.size() > bound || b.size() > bound) return std::nullopt;
  if (a.size() != b.size()) return false;
  if (!(fingerprint(a) == fingerprint(b))) return false;
  std::size_t n = a.size();
  // Greedy generating set of a, largest element orders first.
  std::vector<std::size_t> by_order(n);
  std::iota(by_order.begin(), by_order.end(), std::size_t{0});
  std::stable_sort(by_order.begin(), by_order.end(),
                   [&](std::size_t x, std::size_t y) { return a.element_order(x) > a.element_order(y); });
  std::vector<std::size_t> gens;
  std::vector<std::size_t> span{0};
  for (std::size_t x : by_order) {
    if (span.size() == n) break;
    if (std::binary_search(span.begin(), span.end(), x)) continue;
    gens.push_back(x);
    span = a.closure(gens);
  }
  std::vector<std::size_t> images(gens.size());
  // Extends the partial map on <gens[0..k)> by right multiplication; false
  // on inconsistency or non-injectivity.
  auto consistent = [&](std::size_t k) {
    std::vector<std::size_t> phi(n, static_cast<std::size_t>(-1));
    std::vector<char> used(b.size(), 0);
    std::vector<std::size_t> queue{0};
    phi[0] = 0;
    used[0] = 1;
    for (std::size_t i = 0; i < queue.size(); ++i) {
      std::size_t x = queue[i];
      for (std::size_t j = 0; j < k; ++j) {
        std::size_t y = a.mul(x, gens[j]);
        std::size_t t = b.mul(phi[x], images[j]);
        if (phi[y] == static_cast<std::size_t>(-1)) {
          if (used[t]) return false;
          used[t] = 1;
          phi[y] = t;
          queue.push_back(y);
        } else if (phi[y] != t) {
          return false;
        }
      }
    }
    return true;
  };
  std::function<bool(std::size_t)> search = [&](std::size_t k) {
    if (k == gens.size()) return true;
    for (std::size_t t = 0; t < b.size(); ++t) {
      if (b.element_order(t) != a.element_order(gens[k])) continue;
      images[k] = t;
      if (consistent(k + 1) && search(k + 1)) return true;
    }
    return false;
  };
  return search(0);
}

}  // namespace solch
