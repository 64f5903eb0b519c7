#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "solch/errors.hpp"
#include "solch/perm_group.hpp"

namespace solch {

enum class CoreVerdict { trivial, nontrivial, undetermined };

inline const char* to_string(CoreVerdict v) {
  switch (v) {
    case CoreVerdict::trivial: return "trivial";
    case CoreVerdict::nontrivial: return "nontrivial";
    case CoreVerdict::undetermined: return "undetermined";
  }
  return "?";
}

/// conjugator^-1 * element * conjugator lies outside the subgroup.
struct CoreWitness {
  Permutation element;
  Permutation conjugator;
};

struct CoreResult {
  CoreVerdict verdict = CoreVerdict::undetermined;
  std::vector<CoreWitness> witnesses;
  std::optional<Permutation> core_element;
  std::optional<std::uint64_t> core_order;
  std::string note;
};

struct CoreOptions {
  std::uint64_t element_cap = 50000;
};

namespace detail {

/// The involution exchanging the first and last floor(n/2) points.
inline Permutation block_swap(std::size_t degree) {
  std::vector<Point> images(degree);
  std::size_t h = degree / 2;
  for (std::size_t i = 0; i < degree; ++i) images[i] = static_cast<Point>(i);
  for (std::size_t i = 0; i < h; ++i) {
    images[i] = static_cast<Point>(degree - h + i);
    images[degree - h + i] = static_cast<Point>(i);
  }
  return Permutation::unchecked(std::move(images));
}

}  // namespace detail

/// Decides whether the core of `subgroup` in `ambient` is trivial.  The core
/// is the largest subset of the subgroup closed under conjugation by the
/// ambient generators; it is computed as a greatest fixpoint, and each
/// removal records the conjugation that expelled the element, which yields a
/// conjugator witness for every nontrivial element.
inline CoreResult core_triviality_witness(const PermutationGroup& ambient, const PermutationGroup& subgroup,
                                          CoreOptions options = {}) {
  if (ambient.degree() != subgroup.degree()) throw DomainError("core test with mismatched degrees");
  for (const auto& g : subgroup.generators()) {
    if (!ambient.contains(g)) throw DomainError("subgroup generator " + g.to_cycles() + " not in ambient group");
  }
  CoreResult r;
  if (subgroup.is_trivial()) {
    r.verdict = CoreVerdict::trivial;
    r.core_order = 1;
    return r;
  }
  bool normal = true;
  for (const auto& a : ambient.generators()) {
    Permutation ainv = a.inverse();
    for (const auto& k : subgroup.generators()) {
      if (!subgroup.contains(a * k * ainv)) normal = false;
    }
  }
  if (normal) {
    r.verdict = CoreVerdict::nontrivial;
    for (const auto& k : subgroup.generators()) {
      if (!k.is_identity()) {
        r.core_element = k;
        break;
      }
    }
    r.core_order = subgroup.order();
    r.note = subgroup.order() == ambient.order() ? "core is the ambient group" : "subgroup is normal";
    return r;
  }
  if (subgroup.order() > options.element_cap) {
    r.note = "subgroup order " + std::to_string(subgroup.order()) + " above element cap";
    return r;
  }

  std::vector<Permutation> elems = subgroup.elements(options.element_cap);
  std::unordered_map<Permutation, std::size_t, PermutationHash> index;
  for (std::size_t i = 0; i < elems.size(); ++i) index.emplace(elems[i], i);
  std::vector<Permutation> conj;  // ambient generators and their inverses
  for (const auto& a : ambient.generators()) {
    conj.push_back(a);
    conj.push_back(a.inverse());
  }
  // reason[i] = (j, t): conj[j] * e_i * conj[j]^-1 = e_t, which was outside
  // the set (t == npos when outside the subgroup altogether).
  constexpr std::size_t npos = static_cast<std::size_t>(-1);
  std::vector<char> alive(elems.size(), 1);
  std::vector<std::pair<std::size_t, std::size_t>> reason(elems.size(), {npos, npos});
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t i = 0; i < elems.size(); ++i) {
      if (!alive[i]) continue;
      for (std::size_t j = 0; j < conj.size(); ++j) {
        Permutation y = conj[j] * elems[i] * conj[j ^ 1];
        auto it = index.find(y);
        if (it == index.end() || !alive[it->second]) {
          alive[i] = 0;
          reason[i] = {j, it == index.end() ? npos : it->second};
          changed = true;
          break;
        }
      }
    }
  }
  std::uint64_t core_size = 0;
  for (char a : alive) core_size += a ? 1 : 0;
  r.core_order = core_size;
  if (core_size > 1) {
    for (std::size_t i = 0; i < elems.size(); ++i) {
      if (alive[i] && !elems[i].is_identity()) {
        r.core_element = elems[i];
        break;
      }
    }
    PermutationGroup closure = normal_closure(ambient, {*r.core_element});
    for (const auto& g : closure.generators()) {
      if (!subgroup.contains(g)) throw Error("core element fails normal-closure certification");
    }
    r.verdict = CoreVerdict::nontrivial;
    return r;
  }
  // Conjugator for element i: if conj[j] e_i conj[j]^-1 = e_t then
  // c_i = conj[j]^-1 c_t, with c = identity once outside the subgroup.
  std::vector<std::optional<Permutation>> memo(elems.size());
  std::function<Permutation(std::size_t)> conjugator = [&](std::size_t i) -> Permutation {
    if (memo[i]) return *memo[i];
    auto [j, t] = reason[i];
    Permutation c = conj[j ^ 1];
    if (t != npos) c = c * conjugator(t);
    memo[i] = c;
    return c;
  };
  Permutation swap = detail::block_swap(ambient.degree());
  bool swap_ok = ambient.contains(swap);
  for (std::size_t i = 0; i < elems.size(); ++i) {
    if (elems[i].is_identity()) continue;
    if (swap_ok && !index.count(swap.inverse() * elems[i] * swap)) {
      r.witnesses.push_back({elems[i], swap});
    } else {
      r.witnesses.push_back({elems[i], conjugator(i)});
    }
  }
  for (const auto& w : r.witnesses) {
    if (index.count(w.conjugator.inverse() * w.element * w.conjugator)) {
      throw Error("conjugator witness fails verification");
    }
  }
  r.verdict = CoreVerdict::trivial;
  return r;
}

}  // namespace solch
