#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <unordered_map>
#include <vector>

#include "solch/core.hpp"
#include "solch/errors.hpp"
#include "solch/perm_group.hpp"
#include "solch/permutation.hpp"
#include "solch/todd_coxeter.hpp"
#include "solch/tower.hpp"
#include "solch/word.hpp"

namespace solch {

inline constexpr std::size_t kDefaultDegreeCap = 200000;

// ---------------------------------------------------------------------------
// Towers from presentations

/// Level l is G_0/G_l for the subgroup generated by subgroup_words[l-1]; level
/// 0 is the single coset.  Generators act on left cosets, so a word fixes the
/// basepoint at level l iff it lies in G_l.
inline ChainTower fp_tower(const Presentation& pres, const std::vector<std::vector<Word>>& subgroup_words,
                           std::size_t max_cosets = kDefaultDegreeCap) {
  std::size_t r = pres.generator_count();
  std::vector<CosetTable> tables;
  for (std::size_t l = 0; l < subgroup_words.size(); ++l) {
    CosetTable t = todd_coxeter(pres, subgroup_words[l], max_cosets);
    if (!t.complete) {
      throw BudgetError("coset enumeration for level " + std::to_string(l + 1) + " exceeded " +
                        std::to_string(max_cosets) + " cosets (not a proof of infinite index)");
    }
    if (l > 0) {
      for (const auto& w : subgroup_words[l]) {
        if (tables.back().trace(0, w) != 0) {
          throw ValidationError("level " + std::to_string(l + 1) + " subgroup word " + w.format(pres.generators) +
                                " is not in the level " + std::to_string(l) + " subgroup");
        }
      }
    }
    tables.push_back(std::move(t));
  }
  std::vector<TowerLevel> levels(subgroup_words.size() + 1);
  for (std::size_t g = 0; g < r; ++g) levels[0].images.emplace_back(1);
  for (std::size_t l = 0; l < tables.size(); ++l) {
    const CosetTable& t = tables[l];
    for (std::size_t g = 0; g < r; ++g) {
      std::vector<Point> images(t.coset_count);
      for (std::size_t c = 0; c < t.coset_count; ++c) images[c] = t.rows[c][2 * g + 1];
      levels[l + 1].images.emplace_back(std::move(images));
    }
    // Coset G_{l+1} h maps to G_l h; traced together from coset 0.
    std::vector<Point> proj(t.coset_count, kNoPoint);
    proj[0] = 0;
    std::vector<std::uint32_t> queue{0};
    for (std::size_t i = 0; i < queue.size(); ++i) {
      std::uint32_t c = queue[i];
      for (std::size_t col = 0; col < 2 * r; ++col) {
        std::uint32_t d = t.rows[c][col];
        if (proj[d] != kNoPoint) continue;
        proj[d] = l == 0 ? 0 : tables[l - 1].rows[proj[c]][col];
        queue.push_back(d);
      }
    }
    levels[l + 1].projection = std::move(proj);
  }
  TowerSource src;
  src.kind = "fp_presentation";
  src.presentation = pres;
  src.subgroup_words = subgroup_words;
  ChainTower tower(pres.generators, std::move(levels), std::move(src));
  require_valid(tower);
  return tower;
}

/// Subgroups <a^(2^l), b> of the Klein bottle group <a, b | b a b^-1 a>.
inline ChainTower rt_klein(std::size_t depth) {
  if (depth < 1) throw DomainError("rt_klein depth must be at least 1");
  if (depth > 16) throw BudgetError("rt_klein depth above 16");
  Presentation pres = Presentation::parse({"a", "b"}, {"b a b^-1 a"});
  std::vector<std::vector<Word>> subgroups;
  for (std::size_t l = 1; l <= depth; ++l) {
    subgroups.push_back({Word(std::vector<int>(std::size_t{1} << l, 1)), Word::generator(1)});
  }
  ChainTower t = fp_tower(pres, subgroups);
  TowerSource src = t.source();
  src.kind = "builder";
  src.name = "rt_klein";
  src.parameters = "{\"depth\":" + std::to_string(depth) + "}";
  return ChainTower(t.generator_names(), t.levels(), std::move(src));
}

/// A point of the Klein tower outside the orbit of the basepoint: at level l
/// it is a^k . x with 3k = -1 mod 2^l, a 2-adic limit that is not an integer.
inline FiberPoint klein_off_orbit_point(const ChainTower& t) {
  FiberPoint y{std::vector<Point>(t.depth() + 1, 0)};
  for (std::size_t l = 1; l <= t.depth(); ++l) {
    std::uint64_t m = std::uint64_t{1} << l;
    std::uint64_t k = 0;
    while ((3 * k + 1) % m != 0) ++k;
    Point x = 0;
    for (std::uint64_t i = 0; i < k; ++i) x = t.images(l)[0](x);
    y.coords[l] = x;
  }
  if (!is_coherent(t, y)) throw Error("off-orbit point is not coherent");
  return y;
}

// ---------------------------------------------------------------------------
// Odometers and free-group towers

/// Generator a acts as +1 on Z/m_l, m_l the product of the first l scales.
inline ChainTower odometer(const std::vector<std::uint64_t>& scales, std::size_t degree_cap = kDefaultDegreeCap) {
  std::vector<TowerLevel> levels(1);
  levels[0].images.emplace_back(1);
  std::uint64_t m = 1;
  for (std::uint64_t s : scales) {
    if (s < 2) throw DomainError("odometer scale " + std::to_string(s) + " is below 2");
    std::uint64_t prev = m;
    m *= s;
    if (m > degree_cap) throw BudgetError("odometer level degree " + std::to_string(m) + " above cap");
    TowerLevel L;
    std::vector<Point> images(m), proj(m);
    for (std::uint64_t x = 0; x < m; ++x) {
      images[x] = static_cast<Point>((x + 1) % m);
      proj[x] = static_cast<Point>(x % prev);
    }
    L.images.emplace_back(std::move(images));
    L.projection = std::move(proj);
    levels.push_back(std::move(L));
  }
  std::string params;
  for (auto s : scales) params += (params.empty() ? "" : ",") + std::to_string(s);
  TowerSource src{"builder", "odometer", "{\"scales\":[" + params + "]}", std::nullopt, {}, {}, {}, {}};
  ChainTower t({"a"}, std::move(levels), std::move(src));
  require_valid(t);
  return t;
}

/// Tower over a free group with points Z/d_l and projections x -> x mod
/// d_{l-1}.  images[l-1][g] is generator g at level l.
inline ChainTower free_tree_tower(std::vector<std::string> names, const std::vector<std::size_t>& degrees,
                                  const std::vector<std::vector<Permutation>>& images) {
  if (degrees.size() != images.size()) throw DomainError("free tree: degree and image level counts differ");
  std::vector<TowerLevel> levels(1);
  for (std::size_t g = 0; g < names.size(); ++g) levels[0].images.emplace_back(1);
  std::size_t prev = 1;
  for (std::size_t l = 0; l < degrees.size(); ++l) {
    std::size_t d = degrees[l];
    if (d % prev != 0) throw ValidationError("free tree: degree " + std::to_string(d) + " not a multiple of " +
                                             std::to_string(prev));
    TowerLevel L;
    L.images = images[l];
    for (const auto& p : L.images) {
      if (p.degree() != d) throw ValidationError("free tree: image degree mismatch at level " + std::to_string(l + 1));
    }
    for (std::size_t x = 0; x < d; ++x) L.projection.push_back(static_cast<Point>(x % prev));
    levels.push_back(std::move(L));
    prev = d;
  }
  TowerSource src;
  src.kind = "builder";
  src.name = "free_tree";
  ChainTower t(std::move(names), std::move(levels), std::move(src));
  require_valid(t);
  return t;
}

/// Binary tree of depth 3.  a is the odometer step; g is the identity on the
/// subtree of even points and exchanges 1 and 3 below the odd point.
inline ChainTower sqa_fixture() {
  std::vector<std::vector<Permutation>> images;
  for (std::size_t l = 1; l <= 3; ++l) {
    std::size_t d = std::size_t{1} << l;
    std::vector<Point> a(d), g(d);
    for (std::size_t x = 0; x < d; ++x) {
      a[x] = static_cast<Point>((x + 1) % d);
      g[x] = static_cast<Point>(x);
    }
    for (std::size_t x = 1; x + 2 < d; x += 4) std::swap(g[x], g[x + 2]);
    images.push_back({Permutation(std::move(a)), Permutation(std::move(g))});
  }
  ChainTower t = free_tree_tower({"a", "g"}, {2, 4, 8}, images);
  TowerSource src = t.source();
  src.name = "sqa_fixture";
  return ChainTower(t.generator_names(), t.levels(), std::move(src));
}

// ---------------------------------------------------------------------------
// Lenstra construction

/// Finite quotient data for levels 1..L (index 0 is level 1).
struct QuotientTowerSpec {
  std::vector<std::string> generator_names;
  std::vector<PermutationGroup> groups;
  /// generator_images[l][g]: image of abstract generator g in H_{l+1}.
  std::vector<std::vector<Permutation>> generator_images;
  /// bonding[l]: H_{l+2} -> H_{l+1}, a block quotient with a point map.
  std::vector<GroupMap> bonding;
  std::vector<PermutationGroup> discriminants;
  std::string name = "lenstra";
  std::string parameters;

  std::size_t depth() const noexcept { return groups.size(); }
};

enum class CoreMode { strict, quotient };

struct LenstraOptions {
  CoreMode mode = CoreMode::strict;
  std::size_t degree_cap = kDefaultDegreeCap;
  CoreOptions core;
};

struct LenstraChain {
  ChainTower tower;
  std::vector<CoreResult> cores;  // per level 1..L
};

/// Checks coherence, density and the subgroup tower of a spec; throws
/// ValidationError on the first failure.
inline void check_spec(const QuotientTowerSpec& s) {
  std::size_t L = s.depth();
  if (L == 0) throw DomainError("quotient tower spec has no levels");
  if (s.generator_images.size() != L || s.discriminants.size() != L || s.bonding.size() + 1 != L) {
    throw ValidationError("quotient tower spec has inconsistent level counts");
  }
  for (std::size_t l = 0; l < L; ++l) {
    const auto& H = s.groups[l];
    if (s.generator_images[l].size() != s.generator_names.size()) {
      throw ValidationError("level " + std::to_string(l + 1) + " generator image count mismatch");
    }
    for (const auto& g : s.generator_images[l]) {
      if (!H.contains(g)) throw ValidationError("level " + std::to_string(l + 1) + " generator image outside H");
    }
    PermutationGroup dense(H.degree(), s.generator_images[l]);
    if (dense.order() != H.order()) {
      throw ValidationError("level " + std::to_string(l + 1) + ": generator images generate order " +
                            std::to_string(dense.order()) + ", H has order " + std::to_string(H.order()));
    }
    const auto& D = s.discriminants[l];
    if (D.degree() != H.degree()) throw ValidationError("level " + std::to_string(l + 1) + " D degree mismatch");
    for (const auto& d : D.generators()) {
      if (!H.contains(d)) throw ValidationError("level " + std::to_string(l + 1) + " D is not inside H");
    }
    if (D.order() == H.order()) {
      throw ValidationError("level " + std::to_string(l + 1) + ": D = H gives index 1, not a proper chain");
    }
    if (l + 1 < L) {
      const GroupMap& theta = s.bonding[l];
      if (!theta.has_point_map()) throw ValidationError("bonding map without point map");
      for (std::size_t g = 0; g < s.generator_names.size(); ++g) {
        if (theta.apply(s.generator_images[l + 1][g]) != s.generator_images[l][g]) {
          throw ValidationError("generator " + s.generator_names[g] + " is not coherent between levels " +
                                std::to_string(l + 1) + " and " + std::to_string(l + 2));
        }
      }
      for (const auto& d : s.discriminants[l + 1].generators()) {
        if (!D.contains(theta.apply(d))) {
          throw ValidationError("bonding map does not carry D_" + std::to_string(l + 2) + " into D_" +
                                std::to_string(l + 1));
        }
      }
    }
  }
}

/// Level l is H_l/D_l with the abstract generators acting by left
/// multiplication.  A coset hD is keyed by the lexicographically least image
/// array among h d, d in D.
inline LenstraChain lenstra_chain(const QuotientTowerSpec& s, LenstraOptions options = {}) {
  check_spec(s);
  std::size_t L = s.depth();
  std::vector<CoreResult> cores;
  std::vector<std::string> notes;
  for (std::size_t l = 0; l < L; ++l) {
    CoreResult c = core_triviality_witness(s.groups[l], s.discriminants[l], options.core);
    if (c.verdict == CoreVerdict::nontrivial) {
      if (options.mode == CoreMode::strict) {
        throw ValidationError("level " + std::to_string(l + 1) + ": D has nontrivial core, element " +
                              c.core_element->to_cycles());
      }
      notes.push_back("level " + std::to_string(l + 1) + ": core of order " + std::to_string(*c.core_order) +
                      " factored out; the action is that of H/core");
    } else if (c.verdict == CoreVerdict::undetermined) {
      notes.push_back("level " + std::to_string(l + 1) + ": core triviality undetermined (" + c.note + ")");
    }
    cores.push_back(std::move(c));
  }
  for (std::size_t l = 0; l < L; ++l) {
    std::uint64_t index = s.groups[l].order() / s.discriminants[l].order();
    if (index > options.degree_cap) {
      throw BudgetError("level " + std::to_string(l + 1) + " degree " + std::to_string(index) + " above cap " +
                        std::to_string(options.degree_cap));
    }
  }

  std::size_t r = s.generator_names.size();
  std::vector<TowerLevel> levels(L + 1);
  for (std::size_t g = 0; g < r; ++g) levels[0].images.emplace_back(1);
  std::vector<std::unordered_map<Permutation, Point, PermutationHash>> keys(L);
  std::vector<std::vector<Permutation>> reps(L);
  for (std::size_t l = 0; l < L; ++l) {
    std::vector<Permutation> delems = s.discriminants[l].elements(options.degree_cap);
    auto canonical = [&](const Permutation& h) {
      Permutation best = h * delems.front();
      for (std::size_t i = 1; i < delems.size(); ++i) {
        Permutation c = h * delems[i];
        if (c < best) best = std::move(c);
      }
      return best;
    };
    std::size_t n = s.groups[l].degree();
    auto& key = keys[l];
    auto& rep = reps[l];
    key.emplace(canonical(Permutation(n)), 0);
    rep.emplace_back(n);
    std::vector<std::vector<Point>> images(r);
    for (std::size_t i = 0; i < rep.size(); ++i) {
      for (std::size_t g = 0; g < r; ++g) {
        Permutation h = s.generator_images[l][g] * rep[i];
        Permutation k = canonical(h);
        auto it = key.find(k);
        Point target;
        if (it == key.end()) {
          target = static_cast<Point>(rep.size());
          key.emplace(std::move(k), target);
          rep.push_back(std::move(h));
        } else {
          target = it->second;
        }
        images[g].push_back(target);
      }
    }
    for (auto& im : images) levels[l + 1].images.emplace_back(std::move(im));
    if (l > 0) {
      std::vector<Permutation> prev_delems = s.discriminants[l - 1].elements(options.degree_cap);
      auto& proj = levels[l + 1].projection;
      for (const auto& h : rep) {
        Permutation down = s.bonding[l - 1].apply(h);
        Permutation best = down * prev_delems.front();
        for (std::size_t i = 1; i < prev_delems.size(); ++i) {
          Permutation c = down * prev_delems[i];
          if (c < best) best = std::move(c);
        }
        proj.push_back(keys[l - 1].at(best));
      }
    } else {
      levels[1].projection.assign(rep.size(), 0);
    }
  }
  TowerSource src;
  src.kind = "builder";
  src.name = s.name;
  src.parameters = s.parameters;
  src.notes = std::move(notes);
  ChainTower tower(s.generator_names, std::move(levels), std::move(src));
  require_valid(tower);
  return {std::move(tower), std::move(cores)};
}

namespace detail {

/// Generators of Alt(m) on points offset..offset+m-1 inside degree n.
inline std::vector<Permutation> alternating_generators(std::size_t m, std::size_t offset, std::size_t n) {
  if (m < 3) return {};
  std::vector<Permutation> out;
  std::vector<Point> c3(n), big(n);
  for (std::size_t x = 0; x < n; ++x) c3[x] = big[x] = static_cast<Point>(x);
  c3[offset] = static_cast<Point>(offset + 1);
  c3[offset + 1] = static_cast<Point>(offset + 2);
  c3[offset + 2] = static_cast<Point>(offset);
  out.emplace_back(std::move(c3));
  if (m > 3) {
    // An (m)-cycle when m is odd, an (m-1)-cycle fixing offset when m is even.
    std::size_t start = m % 2 == 1 ? 0 : 1;
    for (std::size_t i = start; i < m; ++i) {
      big[offset + i] = static_cast<Point>(offset + (i + 1 < m ? i + 1 : start));
    }
    out.emplace_back(std::move(big));
  }
  return out;
}

/// Uniform-enough even permutation from raw mt19937 output; avoids the
/// implementation-defined standard distributions so runs are portable.
inline std::vector<Point> random_even(std::size_t m, std::mt19937& rng) {
  std::vector<Point> p(m);
  for (std::size_t i = 0; i < m; ++i) p[i] = static_cast<Point>(i);
  for (std::size_t i = m; i-- > 1;) std::swap(p[i], p[rng() % (i + 1)]);
  if (!Permutation::unchecked(p).is_even()) std::swap(p[0], p[1]);
  return p;
}

inline std::uint64_t alternating_order(std::size_t m) {
  std::uint64_t o = 1;
  for (std::size_t i = 3; i <= m; ++i) o *= i;
  return o;
}

/// Places per-factor permutations side by side.
inline Permutation block_product(const std::vector<std::vector<Point>>& factors, const std::vector<std::size_t>& sizes) {
  std::vector<Point> images;
  std::size_t offset = 0;
  for (std::size_t i = 0; i < factors.size(); ++i) {
    for (Point x : factors[i]) images.push_back(static_cast<Point>(x + offset));
    offset += sizes[i];
  }
  return Permutation(std::move(images));
}

/// For each factor, a pair of even permutations such that the two coherent
/// sequences generate the full product at every level.
inline std::vector<std::pair<std::vector<Point>, std::vector<Point>>> dense_pairs(const std::vector<std::size_t>& ms,
                                                                                  std::uint64_t seed) {
  std::mt19937 rng(static_cast<std::mt19937::result_type>(seed));
  std::vector<std::pair<std::vector<Point>, std::vector<Point>>> pairs;
  std::uint64_t target = 1;
  for (std::size_t i = 0; i < ms.size(); ++i) {
    target *= alternating_order(ms[i]);
    std::vector<std::size_t> sizes(ms.begin(), ms.begin() + static_cast<std::ptrdiff_t>(i + 1));
    std::size_t n = 0;
    for (auto m : sizes) n += m;
    bool found = false;
    for (int attempt = 0; attempt < 1000 && !found; ++attempt) {
      auto x = random_even(ms[i], rng);
      auto y = random_even(ms[i], rng);
      std::vector<std::vector<Point>> xs, ys;
      for (const auto& [px, py] : pairs) {
        xs.push_back(px);
        ys.push_back(py);
      }
      xs.push_back(x);
      ys.push_back(y);
      PermutationGroup g(n, {block_product(xs, sizes), block_product(ys, sizes)});
      if (g.order() == target) {
        pairs.emplace_back(std::move(x), std::move(y));
        found = true;
      }
    }
    if (!found) throw Error("no generating pair found for factor " + std::to_string(i + 1));
  }
  return pairs;
}

/// Alt(m_1) x ... x Alt(m_L) towers with two dense generators; d_factors[l]
/// lists the generators of D_{l+1} as per-factor permutations.
inline QuotientTowerSpec alternating_product_spec(const std::vector<std::size_t>& ms,
                                                  const std::vector<std::vector<std::vector<std::vector<Point>>>>& d_factors,
                                                  std::uint64_t seed) {
  QuotientTowerSpec s;
  s.generator_names = {"x", "y"};
  auto pairs = dense_pairs(ms, seed);
  for (std::size_t l = 1; l <= ms.size(); ++l) {
    std::vector<std::size_t> sizes(ms.begin(), ms.begin() + static_cast<std::ptrdiff_t>(l));
    std::size_t n = 0;
    for (auto m : sizes) n += m;
    std::vector<Permutation> hgens;
    std::size_t offset = 0;
    for (auto m : sizes) {
      for (auto& g : alternating_generators(m, offset, n)) hgens.push_back(std::move(g));
      offset += m;
    }
    s.groups.emplace_back(n, std::move(hgens));
    std::vector<std::vector<Point>> xs, ys;
    for (std::size_t i = 0; i < l; ++i) {
      xs.push_back(pairs[i].first);
      ys.push_back(pairs[i].second);
    }
    s.generator_images.push_back({block_product(xs, sizes), block_product(ys, sizes)});
    std::vector<Permutation> dgens;
    for (const auto& per_factor : d_factors[l - 1]) dgens.push_back(block_product(per_factor, sizes));
    s.discriminants.emplace_back(n, std::move(dgens));
    if (l >= 2) {
      std::vector<Point> point_map(n, kNoPoint);
      for (std::size_t x = 0; x < n - sizes.back(); ++x) point_map[x] = static_cast<Point>(x);
      s.bonding.emplace_back(MapKind::block_quotient, s.generator_images[l - 1], s.generator_images[l - 2],
                             n - sizes.back(), std::move(point_map));
    }
  }
  return s;
}

inline std::vector<Point> identity_images(std::size_t m) {
  std::vector<Point> p(m);
  for (std::size_t i = 0; i < m; ++i) p[i] = static_cast<Point>(i);
  return p;
}

/// F's generators as permutations of 0..m-1; checks F <= Alt(m) with trivial
/// core.
inline std::vector<std::vector<Point>> embed_in_alternating(const PermutationGroup& F, std::size_t m,
                                                            CoreOptions core) {
  if (F.degree() > m) throw DomainError("F has degree " + std::to_string(F.degree()) + " above m");
  if (m < 3) throw DomainError("alternating degree must be at least 3");
  std::vector<std::vector<Point>> gens;
  std::vector<Permutation> lifted;
  for (const auto& f : F.generators()) {
    std::vector<Point> p = identity_images(m);
    for (std::size_t x = 0; x < F.degree(); ++x) p[x] = f(static_cast<Point>(x));
    Permutation q(p);
    if (!q.is_even()) throw ValidationError("F generator " + f.to_cycles() + " is odd, not in Alt(" +
                                            std::to_string(m) + ")");
    if (q.is_identity()) continue;
    lifted.push_back(q);
    gens.push_back(std::move(p));
  }
  PermutationGroup alt(m, alternating_generators(m, 0, m));
  PermutationGroup sub(m, lifted);
  CoreResult c = core_triviality_witness(alt, sub, core);
  if (c.verdict == CoreVerdict::nontrivial) {
    throw ValidationError("F has nontrivial core in Alt(" + std::to_string(m) + "), element " +
                          c.core_element->to_cycles());
  }
  if (c.verdict == CoreVerdict::undetermined) throw BudgetError("core of F in Alt(m) undetermined: " + c.note);
  return gens;
}

}  // namespace detail

/// H_l = Alt(m)^l with D_l the diagonal copy of F.
inline QuotientTowerSpec alt_diagonal_spec(const PermutationGroup& F, std::size_t m, std::size_t depth,
                                           std::uint64_t seed = 0, CoreOptions core = {}) {
  if (depth < 1) throw DomainError("alt_diagonal depth must be at least 1");
  auto fgens = detail::embed_in_alternating(F, m, core);
  std::vector<std::size_t> ms(depth, m);
  std::vector<std::vector<std::vector<std::vector<Point>>>> d(depth);
  for (std::size_t l = 1; l <= depth; ++l) {
    for (const auto& f : fgens) d[l - 1].push_back(std::vector<std::vector<Point>>(l, f));
  }
  QuotientTowerSpec s = detail::alternating_product_spec(ms, d, seed);
  s.name = "alt_diagonal";
  s.parameters = "{\"F\":\"" + std::to_string(F.order()) + "\",\"m\":" + std::to_string(m) +
                 ",\"depth\":" + std::to_string(depth) + ",\"seed\":" + std::to_string(seed) + "}";
  return s;
}

inline ChainTower alt_diagonal_chain(const PermutationGroup& F, std::size_t m, std::size_t depth,
                                     std::uint64_t seed = 0, LenstraOptions options = {}) {
  std::uint64_t index = 1;
  for (std::size_t l = 0; l < depth; ++l) {
    index *= detail::alternating_order(m);
    if (index / F.order() > options.degree_cap) throw BudgetError("alt_diagonal degree above cap");
  }
  return lenstra_chain(alt_diagonal_spec(F, m, depth, seed, options.core), options).tower;
}

struct ProductFactor {
  PermutationGroup F;
  std::size_t m = 5;
};

/// H_l = Alt(m_1) x ... x Alt(m_l) with D_l = F_1 x ... x F_l factor by factor.
inline QuotientTowerSpec full_product_spec(const std::vector<ProductFactor>& factors, std::uint64_t seed = 0,
                                           CoreOptions core = {}) {
  if (factors.empty()) throw DomainError("full_product needs at least one factor");
  std::vector<std::size_t> ms;
  std::vector<std::vector<std::vector<Point>>> fgens;
  for (const auto& f : factors) {
    ms.push_back(f.m);
    fgens.push_back(detail::embed_in_alternating(f.F, f.m, core));
  }
  std::vector<std::vector<std::vector<std::vector<Point>>>> d(factors.size());
  for (std::size_t l = 1; l <= factors.size(); ++l) {
    for (std::size_t i = 0; i < l; ++i) {
      for (const auto& f : fgens[i]) {
        std::vector<std::vector<Point>> per(l);
        for (std::size_t j = 0; j < l; ++j) per[j] = j == i ? f : detail::identity_images(ms[j]);
        d[l - 1].push_back(std::move(per));
      }
    }
  }
  QuotientTowerSpec s = detail::alternating_product_spec(ms, d, seed);
  s.name = "full_product";
  std::string p;
  for (const auto& f : factors) {
    p += (p.empty() ? "" : ",") + std::string("{\"F\":\"") + std::to_string(f.F.order()) + "\",\"m\":" +
         std::to_string(f.m) + "}";
  }
  s.parameters = "{\"factors\":[" + p + "],\"seed\":" + std::to_string(seed) + "}";
  return s;
}

inline ChainTower full_product_chain(const std::vector<ProductFactor>& factors, std::uint64_t seed = 0,
                                     LenstraOptions options = {}) {
  std::uint64_t index = 1;
  for (const auto& f : factors) {
    index *= detail::alternating_order(f.m) / f.F.order();
    if (index > options.degree_cap) throw BudgetError("full_product degree above cap");
  }
  return lenstra_chain(full_product_spec(factors, seed, options.core), options).tower;
}

/// H_l = H x Z/m_l with D_l = K x 1; generators are those of H plus z, the
/// +1 step on the cyclic factor.
inline QuotientTowerSpec product_spec(const PermutationGroup& H, const PermutationGroup& K,
                                      const std::vector<std::uint64_t>& scales) {
  if (scales.empty()) throw DomainError("product_chain needs at least one scale");
  if (K.degree() != H.degree()) throw DomainError("K and H differ in degree");
  std::size_t n = H.degree();
  QuotientTowerSpec s;
  for (std::size_t g = 0; g < H.generators().size(); ++g) s.generator_names.push_back("h" + std::to_string(g + 1));
  s.generator_names.push_back("z");
  std::uint64_t m = 1;
  std::uint64_t prev = 1;
  for (std::size_t l = 0; l < scales.size(); ++l) {
    if (scales[l] < 2) throw DomainError("product_chain scale below 2");
    prev = m;
    m *= scales[l];
    std::size_t deg = n + m;
    auto extend = [&](const Permutation& h) {
      std::vector<Point> p(deg);
      for (std::size_t x = 0; x < n; ++x) p[x] = h(static_cast<Point>(x));
      for (std::size_t x = n; x < deg; ++x) p[x] = static_cast<Point>(x);
      return Permutation(std::move(p));
    };
    std::vector<Permutation> gens;
    for (const auto& h : H.generators()) gens.push_back(extend(h));
    std::vector<Point> z(deg);
    for (std::size_t x = 0; x < deg; ++x) z[x] = static_cast<Point>(x);
    for (std::uint64_t c = 0; c < m; ++c) z[n + c] = static_cast<Point>(n + (c + 1) % m);
    gens.emplace_back(std::move(z));
    s.groups.emplace_back(deg, gens);
    s.generator_images.push_back(gens);
    std::vector<Permutation> dgens;
    for (const auto& k : K.generators()) dgens.push_back(extend(k));
    s.discriminants.emplace_back(deg, std::move(dgens));
    if (l >= 1) {
      std::vector<Point> point_map(deg);
      for (std::size_t x = 0; x < n; ++x) point_map[x] = static_cast<Point>(x);
      for (std::uint64_t c = 0; c < m; ++c) point_map[n + c] = static_cast<Point>(n + c % prev);
      s.bonding.emplace_back(MapKind::block_quotient, s.generator_images[l], s.generator_images[l - 1], n + prev,
                             std::move(point_map));
    }
  }
  std::string p;
  for (auto x : scales) p += (p.empty() ? "" : ",") + std::to_string(x);
  s.name = "product_chain";
  s.parameters = "{\"H\":" + std::to_string(H.order()) + ",\"K\":" + std::to_string(K.order()) + ",\"scales\":[" +
                 p + "]}";
  return s;
}

inline ChainTower product_chain(const PermutationGroup& H, const PermutationGroup& K,
                                const std::vector<std::uint64_t>& scales, LenstraOptions options = {}) {
  CoreResult c = core_triviality_witness(H, K, options.core);
  if (c.verdict == CoreVerdict::nontrivial) {
    throw ValidationError("K has nontrivial core in H, element " + c.core_element->to_cycles());
  }
  if (c.verdict == CoreVerdict::undetermined) throw BudgetError("core of K in H undetermined: " + c.note);
  return lenstra_chain(product_spec(H, K, scales), options).tower;
}

/// H_l = Z/2^l with trivial D: the Lenstra route to the dyadic odometer.
inline QuotientTowerSpec cyclic_spec(std::size_t depth) {
  QuotientTowerSpec s;
  s.generator_names = {"a"};
  for (std::size_t l = 1; l <= depth; ++l) {
    std::size_t m = std::size_t{1} << l;
    std::vector<Point> a(m);
    for (std::size_t x = 0; x < m; ++x) a[x] = static_cast<Point>((x + 1) % m);
    Permutation g(std::move(a));
    s.groups.emplace_back(m, std::vector<Permutation>{g});
    s.generator_images.push_back({g});
    s.discriminants.push_back(PermutationGroup::trivial(m));
    if (l >= 2) {
      std::vector<Point> point_map(m);
      for (std::size_t x = 0; x < m; ++x) point_map[x] = static_cast<Point>(x % (m / 2));
      s.bonding.emplace_back(MapKind::block_quotient, s.generator_images[l - 1], s.generator_images[l - 2], m / 2,
                             std::move(point_map));
    }
  }
  s.name = "lenstra_dyadic";
  s.parameters = "{\"depth\":" + std::to_string(depth) + "}";
  return s;
}

// Small groups used by the catalog.

inline PermutationGroup cyclic_group(std::size_t n, std::size_t degree) {
  std::vector<Point> p(degree);
  for (std::size_t x = 0; x < degree; ++x) p[x] = static_cast<Point>(x);
  for (std::size_t x = 0; x < n; ++x) p[x] = static_cast<Point>((x + 1) % n);
  return PermutationGroup(degree, {Permutation(std::move(p))});
}

inline PermutationGroup alternating_group(std::size_t m) {
  return PermutationGroup(m, detail::alternating_generators(m, 0, m));
}

}  // namespace solch
