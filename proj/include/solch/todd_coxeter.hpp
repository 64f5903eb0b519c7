#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "solch/errors.hpp"
#include "solch/permutation.hpp"
#include "solch/word.hpp"

namespace solch {

struct Presentation {
  std::vector<std::string> generators;
  std::vector<Word> relators;

  std::size_t generator_count() const noexcept { return generators.size(); }

  /// Relators are freely reduced; an empty relator is rejected.
  static Presentation parse(std::vector<std::string> generators, const std::vector<std::string>& relators) {
    Presentation p;
    p.generators = std::move(generators);
    for (std::size_t i = 0; i < p.generators.size(); ++i) {
      if (p.generators[i].empty()) throw ParseError("empty generator name");
      for (std::size_t j = 0; j < i; ++j) {
        if (p.generators[i] == p.generators[j]) throw ParseError("duplicate generator '" + p.generators[i] + "'");
      }
    }
    for (const auto& text : relators) {
      Word w = Word::parse(text, p.generators).reduced();
      if (w.empty()) throw ParseError("relator '" + text + "' reduces to the empty word");
      p.relators.push_back(std::move(w));
    }
    return p;
  }
};

/// Right action of the generators on right cosets.  Column 2g is generator g,
/// column 2g+1 its inverse.
struct CosetTable {
  std::size_t generator_count = 0;
  std::size_t coset_count = 0;
  std::vector<std::vector<std::uint32_t>> rows;
  bool complete = false;
  /// Total cosets defined during enumeration, including those later merged.
  std::size_t defined = 0;

  static constexpr std::uint32_t kUndefined = static_cast<std::uint32_t>(-1);

  static std::size_t column(int letter) noexcept {
    return letter > 0 ? 2 * static_cast<std::size_t>(letter - 1) : 2 * static_cast<std::size_t>(-letter - 1) + 1;
  }

  /// Coset reached from `coset` by reading `w` left to right.
  std::uint32_t trace(std::uint32_t coset, const Word& w) const {
    for (int x : w.letters()) {
      coset = rows[coset][column(x)];
      if (coset == kUndefined) return kUndefined;
    }
    return coset;
  }

  friend bool operator==(const CosetTable&, const CosetTable&) = default;
};

namespace detail {

class HltEnumerator {
 public:
  HltEnumerator(const Presentation& pres, std::size_t max_cosets)
      : cols_(2 * pres.generator_count()), max_(max_cosets) {}

  CosetTable run(const Presentation& pres, const std::vector<Word>& subgroup) {
    new_coset();
    bool ok = true;
    for (const auto& w : subgroup) {
      if (!(ok = scan_and_fill(0, w.reduced()))) break;
    }
    for (std::size_t c = 0; ok && c < parent_.size(); ++c) {
      if (parent_[c] != c) continue;
      for (const auto& r : pres.relators) {
        if (!(ok = scan_and_fill(static_cast<std::uint32_t>(c), r))) break;
        if (parent_[c] != c) break;
      }
      if (!ok || parent_[c] != c) continue;
      for (std::size_t x = 0; x < cols_; ++x) {
        if (at(c, x) == CosetTable::kUndefined) {
          if (!(ok = define(static_cast<std::uint32_t>(c), x))) break;
        }
      }
    }
    return compact(ok);
  }

 private:
  std::size_t cols_;
  std::size_t max_;
  std::vector<std::uint32_t> table_;
  std::vector<std::uint32_t> parent_;
  std::vector<std::uint32_t> queue_;

  std::uint32_t& at(std::size_t c, std::size_t x) { return table_[c * cols_ + x]; }
  static std::size_t inv(std::size_t x) noexcept { return x ^ 1; }

  bool new_coset() {
    if (parent_.size() >= max_) return false;
    parent_.push_back(static_cast<std::uint32_t>(parent_.size()));
    table_.resize(table_.size() + cols_, CosetTable::kUndefined);
    return true;
  }

  bool define(std::uint32_t c, std::size_t x) {
    if (!new_coset()) return false;
    std::uint32_t d = static_cast<std::uint32_t>(parent_.size() - 1);
    at(c, x) = d;
    at(d, inv(x)) = c;
    return true;
  }

  std::uint32_t rep(std::uint32_t k) {
    std::uint32_t r = k;
    while (parent_[r] != r) r = parent_[r];
    while (parent_[k] != r) {
      std::uint32_t next = parent_[k];
      parent_[k] = r;
      k = next;
    }
    return r;
  }

  void merge(std::uint32_t k, std::uint32_t l) {
    k = rep(k);
    l = rep(l);
    if (k == l) return;
    if (k > l) std::swap(k, l);
    parent_[l] = k;
    queue_.push_back(l);
  }

  void coincidence(std::uint32_t a, std::uint32_t b) {
    queue_.clear();
    merge(a, b);
    for (std::size_t i = 0; i < queue_.size(); ++i) {
      std::uint32_t g = queue_[i];
      for (std::size_t x = 0; x < cols_; ++x) {
        std::uint32_t d = at(g, x);
        if (d == CosetTable::kUndefined) continue;
        at(d, inv(x)) = CosetTable::kUndefined;
        std::uint32_t mu = rep(g);
        std::uint32_t nu = rep(d);
        if (at(mu, x) != CosetTable::kUndefined) {
          merge(nu, at(mu, x));
        } else if (at(nu, inv(x)) != CosetTable::kUndefined) {
          merge(mu, at(nu, inv(x)));
        } else {
          at(mu, x) = nu;
          at(nu, inv(x)) = mu;
        }
      }
    }
  }

  // Returns false when the coset budget runs out.
  bool scan_and_fill(std::uint32_t c, const Word& w) {
    const auto& letters = w.letters();
    if (letters.empty()) return true;
    for (;;) {
      std::uint32_t f = c;
      std::uint32_t b = c;
      std::size_t i = 0;
      std::size_t j = letters.size();  // letters [i, j) remain
      while (i < j && at(f, CosetTable::column(letters[i])) != CosetTable::kUndefined) {
        f = at(f, CosetTable::column(letters[i]));
        ++i;
      }
      if (i == j) {
        if (f != b) coincidence(f, b);
        return true;
      }
      while (j > i && at(b, inv(CosetTable::column(letters[j - 1]))) != CosetTable::kUndefined) {
        b = at(b, inv(CosetTable::column(letters[j - 1])));
        --j;
      }
      if (j == i) {
        coincidence(f, b);
        return true;
      }
      if (j == i + 1) {
        std::size_t x = CosetTable::column(letters[i]);
        at(f, x) = b;
        at(b, inv(x)) = f;
        return true;
      }
      if (!define(f, CosetTable::column(letters[i]))) return false;
      if (parent_[c] != c) return true;
    }
  }

  CosetTable compact(bool ok) {
    CosetTable t;
    t.generator_count = cols_ / 2;
    t.defined = parent_.size();
    std::vector<std::uint32_t> renumber(parent_.size(), CosetTable::kUndefined);
    for (std::size_t c = 0; c < parent_.size(); ++c) {
      if (parent_[c] == c) renumber[c] = static_cast<std::uint32_t>(t.coset_count++);
    }
    bool full = ok;
    for (std::size_t c = 0; c < parent_.size(); ++c) {
      if (parent_[c] != c) continue;
      std::vector<std::uint32_t> row(cols_, CosetTable::kUndefined);
      for (std::size_t x = 0; x < cols_; ++x) {
        std::uint32_t d = at(c, x);
        if (d == CosetTable::kUndefined) {
          full = false;
          continue;
        }
        row[x] = renumber[rep(d)];
      }
      t.rows.push_back(std::move(row));
    }
    t.complete = full;
    return t;
  }
};

}  // namespace detail

/// HLT coset enumeration.  An incomplete result (budget exhausted) is not a
/// proof of infinite index.
inline CosetTable todd_coxeter(const Presentation& pres, const std::vector<Word>& subgroup, std::size_t max_cosets) {
  if (max_cosets < 1) throw DomainError("max_cosets must be at least 1");
  for (const auto& w : subgroup) {
    if (w.generator_span() > pres.generator_count()) throw DomainError("subgroup word uses an unknown generator");
  }
  for (const auto& r : pres.relators) {
    if (r.generator_span() > pres.generator_count()) throw DomainError("relator uses an unknown generator");
  }
  CosetTable t = detail::HltEnumerator(pres, max_cosets).run(pres, subgroup);
  if (!t.complete) return t;
  for (std::uint32_t c = 0; c < t.coset_count; ++c) {
    for (const auto& r : pres.relators) {
      if (t.trace(c, r) != c) throw Error("coset table fails relator check; internal inconsistency");
    }
  }
  for (const auto& w : subgroup) {
    if (t.trace(0, w) != 0) throw Error("coset table fails subgroup check; internal inconsistency");
  }
  return t;
}

/// Right action of each generator on the cosets: coset c goes to c.g.
inline std::vector<Permutation> action_from_table(const CosetTable& t) {
  if (!t.complete) throw DomainError("coset table is incomplete");
  std::vector<Permutation> out;
  for (std::size_t g = 0; g < t.generator_count; ++g) {
    std::vector<Point> images(t.coset_count);
    for (std::size_t c = 0; c < t.coset_count; ++c) images[c] = t.rows[c][2 * g];
    out.emplace_back(std::move(images));
  }
  std::vector<char> seen(t.coset_count, 0);
  std::vector<Point> queue{0};
  seen[0] = 1;
  for (std::size_t i = 0; i < queue.size(); ++i) {
    for (const auto& p : out) {
      Point y = p(queue[i]);
      if (!seen[y]) {
        seen[y] = 1;
        queue.push_back(y);
      }
    }
  }
  if (queue.size() != t.coset_count) throw Error("coset action is not transitive; internal inconsistency");
  return out;
}

}  // namespace solch
