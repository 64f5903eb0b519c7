#pragma once

#include <algorithm>
#include <array>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "solch/builders.hpp"
#include "solch/perm_group.hpp"
#include "solch/tower.hpp"
#include "solch/word.hpp"

namespace solch {

struct SmallGroup {
  std::string name;
  PermutationGroup group;
};

/// Every group of order 2..12 as a permutation group.  C2^3 is included for
/// completeness; it needs three generators and contributes no quotient of F2.
inline std::vector<SmallGroup> small_groups() {
  auto g = [](const char* name, std::size_t degree, std::vector<const char*> cycles) {
    std::vector<Permutation> gens;
    for (const char* c : cycles) gens.push_back(Permutation::from_cycles(degree, c));
    return SmallGroup{name, PermutationGroup(degree, std::move(gens))};
  };
  std::vector<SmallGroup> out;
  for (std::size_t n = 2; n <= 12; ++n) out.push_back({"C" + std::to_string(n), cyclic_group(n, n)});
  out.push_back(g("C2xC2", 4, {"(0 1)", "(2 3)"}));
  out.push_back(g("S3", 3, {"(0 1 2)", "(0 1)"}));
  out.push_back(g("C4xC2", 6, {"(0 1 2 3)", "(4 5)"}));
  out.push_back(g("C2xC2xC2", 6, {"(0 1)", "(2 3)", "(4 5)"}));
  out.push_back(g("D4", 4, {"(0 1 2 3)", "(1 3)"}));
  out.push_back(g("Q8", 8, {"(0 1 3 6)(2 5 7 4)", "(0 2 3 7)(1 4 6 5)"}));
  out.push_back(g("C3xC3", 6, {"(0 1 2)", "(3 4 5)"}));
  out.push_back(g("D5", 5, {"(0 1 2 3 4)", "(1 4)(2 3)"}));
  out.push_back(g("C6xC2", 8, {"(0 1 2 3 4 5)", "(6 7)"}));
  out.push_back(g("A4", 4, {"(0 1 2)", "(0 1)(2 3)"}));
  out.push_back(g("D6", 6, {"(0 1 2 3 4 5)", "(1 5)(2 4)"}));
  out.push_back(g("Dic3", 7, {"(0 1 2)", "(1 2)(3 4 5 6)"}));
  return out;
}

/// A normal subgroup N of the free group on two generators, as the kernel of
/// an epimorphism onto `quotient`.
struct NormalSubgroup {
  std::size_t index = 0;
  std::string quotient;
  /// Schreier generators of N, reduced.
  std::vector<Word> words;
};

namespace detail {

/// Right-regular coset table of the pair (x, y) renumbered breadth-first
/// from the identity, columns in shortlex letter order.
struct RegularTable {
  std::vector<std::array<std::uint32_t, 2>> forward;
  std::vector<Word> transversal;
};

inline std::optional<RegularTable> regular_table(const std::vector<Permutation>& elements,
                                                 const std::unordered_map<Permutation, std::uint32_t, PermutationHash>& index,
                                                 std::uint32_t x, std::uint32_t y) {
  std::size_t n = elements.size();
  std::vector<std::array<std::uint32_t, 4>> act(n);
  for (std::size_t e = 0; e < n; ++e) {
    act[e][0] = index.at(elements[e] * elements[x]);
    act[e][2] = index.at(elements[e] * elements[y]);
  }
  for (std::size_t e = 0; e < n; ++e) {
    act[act[e][0]][1] = static_cast<std::uint32_t>(e);
    act[act[e][2]][3] = static_cast<std::uint32_t>(e);
  }
  std::uint32_t identity = index.at(Permutation(elements[0].degree()));
  std::vector<std::uint32_t> label(n, kNoPoint);
  std::vector<std::uint32_t> order{identity};
  std::vector<Word> words{Word()};
  label[identity] = 0;
  for (std::size_t i = 0; i < order.size(); ++i) {
    for (std::size_t c = 0; c < 4; ++c) {
      std::uint32_t z = act[order[i]][c];
      if (label[z] != kNoPoint) continue;
      label[z] = static_cast<std::uint32_t>(order.size());
      order.push_back(z);
      words.push_back(words[i] * Word::generator(c / 2, c % 2 == 1));
    }
  }
  if (order.size() != n) return std::nullopt;
  RegularTable t;
  t.transversal = std::move(words);
  t.forward.resize(n);
  for (std::size_t i = 0; i < n; ++i) t.forward[i] = {label[act[order[i]][0]], label[act[order[i]][2]]};
  return t;
}

}  // namespace detail

/// All normal subgroups of F2 = <x, y> of index 2..max_index, in order of
/// index, then quotient, then coset table.  Words read left to right as the
/// right action on cosets.
inline std::vector<NormalSubgroup> free_normal_subgroups(std::size_t max_index = 12) {
  std::vector<NormalSubgroup> out;
  for (const auto& sg : small_groups()) {
    if (sg.group.order() > max_index) continue;
    std::vector<Permutation> elements = sg.group.elements();
    std::sort(elements.begin(), elements.end());
    std::unordered_map<Permutation, std::uint32_t, PermutationHash> index;
    for (std::size_t i = 0; i < elements.size(); ++i) index.emplace(elements[i], static_cast<std::uint32_t>(i));
    std::map<std::vector<std::array<std::uint32_t, 2>>, std::vector<Word>> seen;
    for (std::uint32_t x = 0; x < elements.size(); ++x) {
      for (std::uint32_t y = 0; y < elements.size(); ++y) {
        auto t = detail::regular_table(elements, index, x, y);
        if (!t || seen.count(t->forward)) continue;
        std::vector<Word> words;
        std::set<Word> unique;
        for (std::size_t c = 0; c < t->forward.size(); ++c) {
          for (std::size_t s = 0; s < 2; ++s) {
            Word w = (t->transversal[c] * Word::generator(s) * t->transversal[t->forward[c][s]].inverse()).reduced();
            if (!w.empty() && unique.insert(w).second) words.push_back(std::move(w));
          }
        }
        seen.emplace(std::move(t->forward), std::move(words));
      }
    }
    for (auto& [table, words] : seen) out.push_back({table.size(), sg.name, std::move(words)});
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const NormalSubgroup& a, const NormalSubgroup& b) { return a.index < b.index; });
  return out;
}

// ---------------------------------------------------------------------------
// Named fixtures

struct Fixture {
  std::string name;
  std::string description;
  std::function<ChainTower()> build;
  /// Analysis depth used by catalog-wide runs.
  std::size_t depth = 6;
};

inline std::vector<Fixture> fixtures() {
  auto z3 = [] { return cyclic_group(3, 3); };
  return {
      {"dyadic", "odometer with scales 2 x 6", [] { return odometer(std::vector<std::uint64_t>(6, 2)); }, 6},
      {"odometer_2_3", "odometer with scales 2,3,2,3", [] { return odometer({2, 3, 2, 3}); }, 4},
      {"rt_klein", "Klein bottle group, subgroups <a^(2^l), b>", [] { return rt_klein(6); }, 6},
      {"rt_klein_rebased", "rt_klein rebased at a point off the basepoint orbit",
       [] {
         ChainTower t = rt_klein(6);
         return rebase(t, klein_off_orbit_point(t));
       },
       6},
      {"product_chain", "Alt(5) x Z with K = <(0 1 2 3 4)>, scales 2,2,2",
       [] {
         return product_chain(alternating_group(5), PermutationGroup(5, {Permutation::from_cycles(5, "(0 1 2 3 4)")}),
                              {2, 2, 2});
       },
       3},
      {"alt_diagonal", "Z/3 diagonal in Alt(5)^3", [z3] { return alt_diagonal_chain(z3(), 5, 3); }, 3},
      {"full_product", "Z/3 in each factor of Alt(5)^3", [z3] { return full_product_chain({{z3(), 5}, {z3(), 5}, {z3(), 5}}); },
       3},
      {"sqa_fixture", "binary tree, g trivial on one subtree", [] { return sqa_fixture(); }, 3},
      {"lenstra_dyadic", "Lenstra construction with H_l = Z/2^l, trivial D",
       [] { return lenstra_chain(cyclic_spec(6)).tower; }, 6},
  };
}

inline const Fixture& find_fixture(const std::vector<Fixture>& all, const std::string& name) {
  for (const auto& f : all) {
    if (f.name == name) return f;
  }
  throw DomainError("unknown fixture '" + name + "'");
}

}  // namespace solch
