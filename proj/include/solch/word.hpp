#pragma once

#include <compare>
#include <cstdlib>
#include <string>
#include <string_view>
#include <vector>

#include "solch/errors.hpp"

namespace solch {

/// A word in signed generator letters: +k is generator k-1, -k its inverse.
class Word {
 public:
  Word() = default;
  explicit Word(std::vector<int> letters) : letters_(std::move(letters)) {
    for (int x : letters_) {
      if (x == 0) throw DomainError("word letter 0 is not a generator");
    }
  }

  static Word generator(std::size_t index, bool inverse = false) {
    int x = static_cast<int>(index) + 1;
    return Word({inverse ? -x : x});
  }

  const std::vector<int>& letters() const noexcept { return letters_; }
  std::size_t size() const noexcept { return letters_.size(); }
  bool empty() const noexcept { return letters_.empty(); }

  Word inverse() const {
    std::vector<int> out(letters_.rbegin(), letters_.rend());
    for (int& x : out) x = -x;
    return Word(std::move(out));
  }

  Word reduced() const {
    std::vector<int> out;
    out.reserve(letters_.size());
    for (int x : letters_) {
      if (!out.empty() && out.back() == -x) {
        out.pop_back();
      } else {
        out.push_back(x);
      }
    }
    return Word(std::move(out));
  }

  bool is_reduced() const noexcept {
    for (std::size_t i = 1; i < letters_.size(); ++i) {
      if (letters_[i] == -letters_[i - 1]) return false;
    }
    return true;
  }

  /// Largest generator index used plus one.
  std::size_t generator_span() const noexcept {
    std::size_t m = 0;
    for (int x : letters_) m = std::max(m, static_cast<std::size_t>(std::abs(x)));
    return m;
  }

  friend Word operator*(const Word& a, const Word& b) {
    std::vector<int> out = a.letters_;
    out.insert(out.end(), b.letters_.begin(), b.letters_.end());
    return Word(std::move(out));
  }

  friend bool operator==(const Word&, const Word&) = default;

  /// Shortlex order with letters ranked g1, g1^-1, g2, g2^-1, ...
  friend std::strong_ordering operator<=>(const Word& a, const Word& b) {
    if (a.size() != b.size()) return a.size() <=> b.size();
    for (std::size_t i = 0; i < a.size(); ++i) {
      int ra = letter_rank(a.letters_[i]);
      int rb = letter_rank(b.letters_[i]);
      if (ra != rb) return ra <=> rb;
    }
    return std::strong_ordering::equal;
  }

  static int letter_rank(int x) noexcept { return x > 0 ? 2 * (x - 1) : 2 * (-x - 1) + 1; }
  static int letter_from_rank(int r) noexcept { return r % 2 == 0 ? r / 2 + 1 : -(r / 2 + 1); }

  /// Space-separated syllables, powers folded: "a^2 b^-1".  Empty word is "1".
  std::string format(const std::vector<std::string>& names) const {
    if (letters_.empty()) return "1";
    std::string out;
    std::size_t i = 0;
    while (i < letters_.size()) {
      std::size_t j = i;
      while (j < letters_.size() && letters_[j] == letters_[i]) ++j;
      long power = static_cast<long>(j - i) * (letters_[i] > 0 ? 1 : -1);
      std::size_t g = static_cast<std::size_t>(std::abs(letters_[i])) - 1;
      if (!out.empty()) out += ' ';
      out += g < names.size() ? names[g] : "g" + std::to_string(g);
      if (power != 1) out += "^" + std::to_string(power);
      i = j;
    }
    return out;
  }

  /// Parses syllables `name`, `name^k`, `name^-k` separated by spaces or '*'.
  /// "1" and "" denote the empty word.
  static Word parse(std::string_view text, const std::vector<std::string>& names) {
    std::vector<int> letters;
    std::size_t i = 0;
    auto is_sep = [](char c) { return c == ' ' || c == '*' || c == '\t'; };
    auto is_name_char = [](char c) {
      return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_';
    };
    while (i < text.size()) {
      if (is_sep(text[i])) {
        ++i;
        continue;
      }
      std::size_t start = i;
      while (i < text.size() && is_name_char(text[i])) ++i;
      if (i == start) throw ParseError("unexpected character '" + std::string(1, text[i]) + "'", i);
      std::string_view name = text.substr(start, i - start);
      long power = 1;
      if (i < text.size() && text[i] == '^') {
        ++i;
        bool negative = false;
        if (i < text.size() && text[i] == '-') {
          negative = true;
          ++i;
        }
        std::size_t num_start = i;
        long v = 0;
        while (i < text.size() && text[i] >= '0' && text[i] <= '9') {
          v = v * 10 + (text[i] - '0');
          if (v > 1000000) throw ParseError("exponent too large", num_start);
          ++i;
        }
        if (i == num_start) throw ParseError("expected exponent after '^'", i);
        power = negative ? -v : v;
      }
      if (name == "1" && power == 1) continue;
      std::size_t g = 0;
      while (g < names.size() && names[g] != name) ++g;
      if (g == names.size()) throw ParseError("unknown generator '" + std::string(name) + "'", start);
      int letter = static_cast<int>(g) + 1;
      for (long k = 0; k < std::labs(power); ++k) letters.push_back(power < 0 ? -letter : letter);
    }
    return Word(std::move(letters));
  }

 private:
  std::vector<int> letters_;
};

}  // namespace solch
