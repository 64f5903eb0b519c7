#pragma once

#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "solch/builders.hpp"
#include "solch/catalog.hpp"
#include "solch/errors.hpp"
#include "solch/invariants.hpp"
#include "solch/tower.hpp"

namespace solch {

using Json = nlohmann::ordered_json;

inline constexpr const char* kChainSchema = "solch.chain/1";
inline constexpr const char* kTowerSchema = "solch.tower/1";
inline constexpr const char* kReportSchema = "solch.report/1";

/// Bounds a description may carry; flags and environment override them.
struct DescriptionOptions {
  std::optional<std::size_t> depth;
  std::optional<std::size_t> max_word_length;
  std::optional<std::size_t> degree_cap;
  std::optional<std::uint64_t> seed;
};

struct LoadedTower {
  ChainTower tower;
  DescriptionOptions options;
};

namespace detail {

/// Field access with schema errors; `where` names the enclosing object.
inline const Json& field(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object()) throw ParseError(where + ": expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw ParseError(where + ": missing field '" + key + "'");
  return *it;
}

template <class T>
T get_as(const Json& j, const std::string& where) {
  try {
    return j.get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(where + ": " + e.what());
  }
}

template <class T>
T get_or(const Json& j, const char* key, T fallback, const std::string& where) {
  if (!j.is_object()) throw ParseError(where + ": expected an object");
  auto it = j.find(key);
  return it == j.end() ? fallback : get_as<T>(*it, where + "." + key);
}

inline Permutation permutation_from_json(const Json& j, const std::string& where) {
  auto images = get_as<std::vector<Point>>(j, where);
  try {
    return Permutation(std::move(images));
  } catch (const Error& e) {
    throw ValidationError(where + ": " + e.what());
  }
}

inline Json permutation_to_json(const Permutation& p) {
  return Json(std::vector<Point>(p.images().begin(), p.images().end()));
}

inline Word word_from_json(const Json& j, const std::vector<std::string>& names, const std::string& where) {
  auto text = get_as<std::string>(j, where);
  try {
    return Word::parse(text, names);
  } catch (const ParseError& e) {
    throw ParseError(where + ": " + e.what());
  }
}

inline std::vector<Word> words_from_json(const Json& j, const std::vector<std::string>& names,
                                         const std::string& where) {
  if (!j.is_array()) throw ParseError(where + ": expected an array of words");
  std::vector<Word> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(word_from_json(j[i], names, where + "[" + std::to_string(i) + "]"));
  return out;
}

inline Json words_to_json(const std::vector<Word>& ws, const std::vector<std::string>& names) {
  Json out = Json::array();
  for (const auto& w : ws) out.push_back(w.format(names));
  return out;
}

/// {"alternating": m} | {"cyclic": n, "degree": d} | {"degree": n, "generators": ["(0 1 2)", ...]}
inline PermutationGroup group_from_json(const Json& j, const std::string& where) {
  if (j.contains("alternating")) return alternating_group(get_as<std::size_t>(j["alternating"], where + ".alternating"));
  if (j.contains("cyclic")) {
    auto n = get_as<std::size_t>(j["cyclic"], where + ".cyclic");
    return cyclic_group(n, get_or<std::size_t>(j, "degree", n, where));
  }
  auto degree = get_as<std::size_t>(field(j, "degree", where), where + ".degree");
  std::vector<Permutation> gens;
  const Json& g = field(j, "generators", where);
  if (!g.is_array()) throw ParseError(where + ".generators: expected an array");
  for (std::size_t i = 0; i < g.size(); ++i) {
    std::string at = where + ".generators[" + std::to_string(i) + "]";
    if (g[i].is_string()) {
      try {
        gens.push_back(Permutation::from_cycles(degree, g[i].get<std::string>()));
      } catch (const Error& e) {
        throw ParseError(at + ": " + e.what());
      }
    } else {
      gens.push_back(permutation_from_json(g[i], at));
    }
  }
  return PermutationGroup(degree, std::move(gens));
}

inline LenstraOptions lenstra_options(const Json& p, const std::string& where) {
  LenstraOptions o;
  auto mode = get_or<std::string>(p, "core", "strict", where);
  if (mode == "strict") {
    o.mode = CoreMode::strict;
  } else if (mode == "quotient") {
    o.mode = CoreMode::quotient;
  } else {
    throw ParseError(where + ".core: expected \"strict\" or \"quotient\"");
  }
  o.degree_cap = get_or<std::size_t>(p, "degree_cap", kDefaultDegreeCap, where);
  return o;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Builders by name

struct BuilderInfo {
  std::string name;
  std::string parameters;
  std::function<ChainTower(const Json&, const std::string&)> build;
};

inline const std::vector<BuilderInfo>& builders() {
  using detail::get_or;
  static const std::vector<BuilderInfo> all = {
      {"odometer", "scales: [int >= 2, ...]",
       [](const Json& p, const std::string& w) {
         return odometer(detail::get_as<std::vector<std::uint64_t>>(detail::field(p, "scales", w), w + ".scales"));
       }},
      {"dyadic", "depth: int (default 6)",
       [](const Json& p, const std::string& w) {
         return odometer(std::vector<std::uint64_t>(get_or<std::size_t>(p, "depth", 6, w), 2));
       }},
      {"rt_klein", "depth: int (default 6)",
       [](const Json& p, const std::string& w) { return rt_klein(get_or<std::size_t>(p, "depth", 6, w)); }},
      {"rt_klein_rebased", "depth: int (default 6); rebased off the basepoint orbit",
       [](const Json& p, const std::string& w) {
         ChainTower t = rt_klein(get_or<std::size_t>(p, "depth", 6, w));
         return rebase(t, klein_off_orbit_point(t));
       }},
      {"product_chain", "H: group, K: group, scales: [int]",
       [](const Json& p, const std::string& w) {
         return product_chain(detail::group_from_json(detail::field(p, "H", w), w + ".H"),
                              detail::group_from_json(detail::field(p, "K", w), w + ".K"),
                              detail::get_as<std::vector<std::uint64_t>>(detail::field(p, "scales", w), w + ".scales"),
                              detail::lenstra_options(p, w));
       }},
      {"alt_diagonal", "F: group, m: int, depth: int, seed: int (default 0), core: strict|quotient",
       [](const Json& p, const std::string& w) {
         return alt_diagonal_chain(detail::group_from_json(detail::field(p, "F", w), w + ".F"),
                                   detail::get_as<std::size_t>(detail::field(p, "m", w), w + ".m"),
                                   detail::get_as<std::size_t>(detail::field(p, "depth", w), w + ".depth"),
                                   get_or<std::uint64_t>(p, "seed", 0, w), detail::lenstra_options(p, w));
       }},
      {"full_product", "factors: [{F: group, m: int}, ...], seed: int (default 0), core: strict|quotient",
       [](const Json& p, const std::string& w) {
         const Json& fs = detail::field(p, "factors", w);
         if (!fs.is_array()) throw ParseError(w + ".factors: expected an array");
         std::vector<ProductFactor> factors;
         for (std::size_t i = 0; i < fs.size(); ++i) {
           std::string at = w + ".factors[" + std::to_string(i) + "]";
           factors.push_back({detail::group_from_json(detail::field(fs[i], "F", at), at + ".F"),
                              detail::get_as<std::size_t>(detail::field(fs[i], "m", at), at + ".m")});
         }
         return full_product_chain(factors, get_or<std::uint64_t>(p, "seed", 0, w), detail::lenstra_options(p, w));
       }},
      {"free_tree", "generators: [name], degrees: [int], images: [[image array per generator] per level]",
       [](const Json& p, const std::string& w) {
         auto names = detail::get_as<std::vector<std::string>>(detail::field(p, "generators", w), w + ".generators");
         auto degrees = detail::get_as<std::vector<std::size_t>>(detail::field(p, "degrees", w), w + ".degrees");
         const Json& im = detail::field(p, "images", w);
         if (!im.is_array()) throw ParseError(w + ".images: expected an array");
         std::vector<std::vector<Permutation>> images;
         for (std::size_t l = 0; l < im.size(); ++l) {
           std::vector<Permutation> level;
           for (std::size_t g = 0; g < im[l].size(); ++g) {
             level.push_back(detail::permutation_from_json(
                 im[l][g], w + ".images[" + std::to_string(l) + "][" + std::to_string(g) + "]"));
           }
           if (level.size() != names.size()) {
             throw ParseError(w + ".images[" + std::to_string(l) + "]: one image per generator expected");
           }
           images.push_back(std::move(level));
         }
         return free_tree_tower(std::move(names), degrees, images);
       }},
      {"sqa_fixture", "(none)", [](const Json&, const std::string&) { return sqa_fixture(); }},
      {"lenstra_dyadic", "depth: int (default 6)",
       [](const Json& p, const std::string& w) {
         return lenstra_chain(cyclic_spec(get_or<std::size_t>(p, "depth", 6, w))).tower;
       }},
  };
  return all;
}

inline ChainTower build_named(const std::string& name, const Json& parameters) {
  for (const auto& b : builders()) {
    if (b.name != name) continue;
    Json p = parameters.is_null() ? Json::object() : parameters;
    if (!p.is_object()) throw ParseError("parameters: expected an object");
    ChainTower t = b.build(p, "parameters");
    TowerSource src = t.source();
    src.name = name;
    src.parameters = p.dump();
    return ChainTower(t.generator_names(), t.levels(), std::move(src));
  }
  throw ParseError("unknown builder '" + name + "'");
}

// ---------------------------------------------------------------------------
// Tower files

inline Json tower_to_json(const ChainTower& t) {
  Json j;
  j["schema"] = kTowerSchema;
  j["generators"] = t.generator_names();
  const TowerSource& s = t.source();
  Json src;
  src["kind"] = s.kind;
  src["name"] = s.name;
  src["parameters"] = s.parameters.empty() ? Json(nullptr) : Json::parse(s.parameters);
  if (s.presentation) {
    src["presentation"] = {{"generators", s.presentation->generators},
                           {"relators", detail::words_to_json(s.presentation->relators, s.presentation->generators)}};
  }
  if (!s.subgroup_words.empty()) {
    Json sw = Json::array();
    for (const auto& level : s.subgroup_words) sw.push_back(detail::words_to_json(level, t.generator_names()));
    src["subgroup_words"] = std::move(sw);
  }
  if (!s.origin_generators.empty()) {
    src["origin_generators"] = s.origin_generators;
    src["origin_words"] = detail::words_to_json(s.origin_words, s.origin_generators);
  }
  src["notes"] = s.notes;
  j["source"] = std::move(src);
  Json levels = Json::array();
  for (std::size_t l = 0; l <= t.depth(); ++l) {
    Json level;
    Json images = Json::array();
    for (const auto& p : t.images(l)) images.push_back(detail::permutation_to_json(p));
    level["images"] = std::move(images);
    level["projection"] = t.projection(l);
    levels.push_back(std::move(level));
  }
  j["levels"] = std::move(levels);
  return j;
}

/// With `check` false the tower is only shape-checked, for reporting issues.
inline ChainTower tower_from_json(const Json& j, bool check = true) {
  using detail::field;
  auto names = detail::get_as<std::vector<std::string>>(field(j, "generators", "tower"), "tower.generators");
  const Json& ls = field(j, "levels", "tower");
  if (!ls.is_array() || ls.empty()) throw ParseError("tower.levels: expected a nonempty array");
  std::vector<TowerLevel> levels;
  for (std::size_t l = 0; l < ls.size(); ++l) {
    std::string at = "tower.levels[" + std::to_string(l) + "]";
    TowerLevel level;
    const Json& im = field(ls[l], "images", at);
    if (!im.is_array()) throw ParseError(at + ".images: expected an array");
    for (std::size_t g = 0; g < im.size(); ++g) {
      level.images.push_back(detail::permutation_from_json(im[g], at + ".images[" + std::to_string(g) + "]"));
    }
    level.projection = detail::get_or<std::vector<Point>>(ls[l], "projection", {}, at);
    levels.push_back(std::move(level));
  }
  TowerSource src;
  if (j.contains("source")) {
    const Json& s = j["source"];
    src.kind = detail::get_or<std::string>(s, "kind", "", "tower.source");
    src.name = detail::get_or<std::string>(s, "name", "", "tower.source");
    if (s.contains("parameters") && !s["parameters"].is_null()) src.parameters = s["parameters"].dump();
    if (s.contains("presentation")) {
      const Json& p = s["presentation"];
      auto gens = detail::get_as<std::vector<std::string>>(field(p, "generators", "presentation"), "presentation.generators");
      auto rels = detail::get_as<std::vector<std::string>>(field(p, "relators", "presentation"), "presentation.relators");
      src.presentation = Presentation::parse(std::move(gens), rels);
    }
    if (s.contains("subgroup_words")) {
      for (std::size_t l = 0; l < s["subgroup_words"].size(); ++l) {
        src.subgroup_words.push_back(
            detail::words_from_json(s["subgroup_words"][l], names, "source.subgroup_words[" + std::to_string(l) + "]"));
      }
    }
    if (s.contains("origin_generators")) {
      src.origin_generators = detail::get_as<std::vector<std::string>>(s["origin_generators"], "source.origin_generators");
      src.origin_words = detail::words_from_json(field(s, "origin_words", "source"), src.origin_generators,
                                                 "source.origin_words");
    }
    src.notes = detail::get_or<std::vector<std::string>>(s, "notes", {}, "tower.source");
  }
  try {
    ChainTower t(std::move(names), std::move(levels), std::move(src));
    if (check) require_valid(t);
    return t;
  } catch (const ParseError&) {
    throw;
  } catch (const BudgetError&) {
    throw;
  } catch (const Error& e) {
    throw ValidationError(e.what());
  }
}

// ---------------------------------------------------------------------------
// Chain descriptions

inline DescriptionOptions description_options(const Json& j) {
  DescriptionOptions o;
  if (j.contains("depth")) o.depth = detail::get_as<std::size_t>(j["depth"], "depth");
  if (j.contains("options")) {
    const Json& op = j["options"];
    if (op.contains("max_word_length")) o.max_word_length = detail::get_as<std::size_t>(op["max_word_length"], "options.max_word_length");
    if (op.contains("degree_cap")) o.degree_cap = detail::get_as<std::size_t>(op["degree_cap"], "options.degree_cap");
    if (op.contains("seed")) o.seed = detail::get_as<std::uint64_t>(op["seed"], "options.seed");
  }
  if (o.depth && *o.depth < 1) throw ParseError("depth: must be at least 1");
  return o;
}

/// Builds the tower a chain description or tower file denotes.
inline LoadedTower load_json(const Json& j, bool check = true) {
  auto schema = detail::get_as<std::string>(detail::field(j, "schema", "document"), "schema");
  if (schema == kTowerSchema) return {tower_from_json(j, check), {}};
  if (schema != kChainSchema) throw ParseError("schema: unsupported '" + schema + "'");
  DescriptionOptions opts = description_options(j);
  auto kind = detail::get_as<std::string>(detail::field(j, "kind", "chain"), "kind");
  std::size_t cap = opts.degree_cap.value_or(kDefaultDegreeCap);
  ChainTower t = [&]() -> ChainTower {
    if (kind == "builder") {
      auto name = detail::get_as<std::string>(detail::field(j, "name", "chain"), "name");
      Json params = j.contains("parameters") ? j["parameters"] : Json::object();
      return build_named(name, params);
    }
    if (kind == "fp_presentation") {
      auto names = detail::get_as<std::vector<std::string>>(detail::field(j, "generators", "chain"), "generators");
      auto rels = detail::get_or<std::vector<std::string>>(j, "relators", {}, "chain");
      Presentation pres = Presentation::parse(names, rels);
      const Json& subs = detail::field(j, "subgroups", "chain");
      if (!subs.is_array()) throw ParseError("subgroups: expected an array of word lists");
      std::vector<std::vector<Word>> words;
      for (std::size_t l = 0; l < subs.size(); ++l) {
        words.push_back(detail::words_from_json(subs[l], names, "subgroups[" + std::to_string(l) + "]"));
      }
      return fp_tower(pres, words, detail::get_or<std::size_t>(j, "max_cosets", cap, "chain"));
    }
    if (kind == "permutation_tower") {
      auto names = detail::get_as<std::vector<std::string>>(detail::field(j, "generators", "chain"), "generators");
      const Json& ls = detail::field(j, "levels", "chain");
      if (!ls.is_array()) throw ParseError("levels: expected an array");
      Json tower{{"generators", names}, {"levels", Json::array()}};
      Json zero{{"images", Json::array()}, {"projection", Json::array()}};
      for (std::size_t g = 0; g < names.size(); ++g) zero["images"].push_back({0});
      tower["levels"].push_back(zero);
      for (std::size_t l = 0; l < ls.size(); ++l) {
        Json level = ls[l];
        if (l == 0 && !level.contains("projection") && level.contains("images") && level["images"].is_array() &&
            !level["images"].empty() && level["images"][0].is_array()) {
          level["projection"] = std::vector<Point>(level["images"][0].size(), 0);
        }
        tower["levels"].push_back(std::move(level));
      }
      ChainTower out = tower_from_json(tower, check);
      TowerSource src = out.source();
      src.kind = "permutation_tower";
      src.name = detail::get_or<std::string>(j, "name", "", "chain");
      return ChainTower(out.generator_names(), out.levels(), std::move(src));
    }
    throw ParseError("kind: expected permutation_tower, fp_presentation or builder");
  }();
  for (std::size_t l = 0; l <= t.depth(); ++l) {
    if (t.degree(l) > cap) {
      throw BudgetError("level " + std::to_string(l) + " has degree " + std::to_string(t.degree(l)) + " above cap " +
                        std::to_string(cap));
    }
  }
  if (opts.depth && *opts.depth < t.depth()) t = restrict_depth(t, *opts.depth);
  return {std::move(t), opts};
}

inline Json parse_json_text(const std::string& text, const std::string& origin) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(origin + ": " + e.what(), e.byte);
  }
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

inline LoadedTower load_file(const std::string& path, bool check = true) {
  return load_json(parse_json_text(read_file(path), path), check);
}

}  // namespace solch
