#pragma once

#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "solch/invariants.hpp"
#include "solch/io.hpp"

namespace solch {

/// A report document plus whether any section ran out of budget.
struct Report {
  Json json;
  bool partial = false;
};

namespace detail {

inline Json fingerprint_json(const Fingerprint& f) {
  Json pairs = Json::array();
  for (auto [o, c] : f.element_orders) pairs.push_back({o, c});
  return {{"name", f.name()},
          {"order", f.order},
          {"abelian_invariants", f.abelian_invariants},
          {"element_orders", std::move(pairs)},
          {"complete", f.complete}};
}

inline Json fiber_point_json(const FiberPoint& p) { return Json(p.coords); }

inline Json tower_summary(const ChainTower& t) {
  return {{"name", t.source().name},
          {"kind", t.source().kind},
          {"generators", t.generator_names()},
          {"depth", t.depth()},
          {"degrees", t.degrees()}};
}

inline Json bounds_json(const AnalysisOptions& o, std::size_t depth) {
  return {{"depth", depth},
          {"max_word_length", o.max_word_length},
          {"degree_cap", o.degree_cap},
          {"seed", o.seed}};
}

/// Runs one section; a budget overrun marks the section and the report
/// partial instead of aborting the whole run.
inline void section(Report& r, const char* name, const std::function<Json()>& fn) {
  try {
    r.json["sections"][name] = fn();
  } catch (const BudgetError& e) {
    r.json["sections"][name] = {{"partial", true}, {"error", e.what()}};
    r.partial = true;
  }
}

inline Report start_report(const char* command, const ChainTower& t, const AnalysisOptions& o, std::size_t depth) {
  Report r;
  r.json["schema"] = kReportSchema;
  r.json["command"] = command;
  r.json["tower"] = tower_summary(t);
  r.json["bounds"] = bounds_json(o, depth);
  r.json["sections"] = Json::object();
  return r;
}

inline void finish(Report& r) { r.json["partial"] = r.partial; }

}  // namespace detail

// ---------------------------------------------------------------------------
// Section builders

inline Json core_quotients_json(TowerAnalysis& a, std::size_t depth) {
  Json orders = Json::array();
  for (std::size_t l = 0; l <= depth; ++l) orders.push_back(a.level(l).H.order());
  return {{"orders", std::move(orders)}};
}

inline Json discriminant_json(const DiscriminantTower& d) {
  Json levels = Json::array();
  for (std::size_t l = 0; l < d.levels.size(); ++l) {
    const auto& x = d.levels[l];
    levels.push_back({{"level", l},
                      {"degree", x.degree},
                      {"h_order", x.h_order},
                      {"order", x.D.order()},
                      {"fingerprint", detail::fingerprint_json(x.fingerprint)},
                      {"bonding_verified", x.bonding_verified},
                      {"eventual_order", x.eventual.order()},
                      {"eventual_fingerprint", detail::fingerprint_json(x.eventual_fingerprint)},
                      {"image_orders", x.image_orders},
                      {"stabilized", x.stabilized},
                      {"stabilized_at", x.stabilized_at}});
  }
  return {{"depth", d.depth}, {"levels", std::move(levels)}};
}

inline Json molino_json(const MolinoTower& m) {
  return {{"level_sizes", m.tower.degrees()}, {"fiber_sizes", m.fiber_sizes}};
}

inline Json classification_json(const Classification& c) {
  Json j{{"verdict", to_string(c.verdict)}, {"depth", c.depth}};
  if (c.verdict == Regularity::weakly_normal) j["witness"] = c.witness;
  j["truncations_examined"] = {c.scan_first, c.scan_last};
  if (!c.note.empty()) j["note"] = c.note;
  return j;
}

inline Json stability_json(const StabilityReport& s) {
  Json rows = Json::array();
  for (const auto& r : s.rows) {
    Json row{{"n", r.n}, {"order", r.order}, {"fingerprint", detail::fingerprint_json(r.fingerprint)},
             {"in_margin", r.in_margin}};
    row["isomorphic_to_previous"] = r.isomorphic_to_previous ? Json(*r.isomorphic_to_previous) : Json(nullptr);
    rows.push_back(std::move(row));
  }
  Json psi = Json::array();
  for (const auto& p : s.psi) {
    psi.push_back({{"n", p.n}, {"m", p.m}, {"image_order", p.image_order}, {"surjective", p.surjective}});
  }
  Json j{{"verdict", to_string(s.verdict)}, {"depth", s.depth}};
  if (s.verdict == StabilityKind::stable) j["n0"] = s.n0;
  j["rows"] = std::move(rows);
  j["psi"] = std::move(psi);
  j["note"] = s.note;
  return j;
}

inline Json holonomy_json(const HolonomyVerdict& h, const std::string& word) {
  Json w = Json::array();
  for (const auto& p : h.witnesses) w.push_back(detail::fiber_point_json(p));
  Json j{{"word", word}, {"verdict", h.trivial ? "trivial-evidence" : "nontrivial"}, {"depth", h.depth}};
  if (h.trivial) j["level"] = h.level;
  j["cylinders_examined"] = {0, h.scan_last};
  j["witnesses"] = std::move(w);
  return j;
}

inline Json kernel_json(TowerAnalysis& a, std::size_t depth, std::size_t max_length) {
  const ChainTower& t = a.tower();
  Json words = Json::array();
  for (const auto& k : kernel_words(a, max_length, depth)) {
    std::string w = k.word.format(t.generator_names());
    Json entry{{"word", w}, {"acts_trivially", k.acts_trivially}, {"certified_depth", k.certified_depth}};
    if (!k.word.empty()) entry["holonomy"] = holonomy_json(holonomy_test(t, k.word, depth), w);
    words.push_back(std::move(entry));
  }
  return {{"depth", depth}, {"max_word_length", max_length}, {"candidates", std::move(words)},
          {"note", "candidates only: each class is quoted by its shortlex-least word"}};
}

inline Json kernel_vs_discriminant_json(const KernelDiscriminantReport& r, const std::vector<std::string>& names) {
  return {{"depth", r.depth},
          {"max_word_length", r.max_word_length},
          {"holonomy_words", detail::words_to_json(r.holonomy_words, names)},
          {"discriminant_words", detail::words_to_json(r.discriminant_words, names)},
          {"sets_agree", r.sets_agree},
          {"germinal_holonomy_words", detail::words_to_json(r.germinal_words, names)},
          {"nontrivial_fiber_consistent", r.nontrivial_fiber_consistent}};
}

inline Json sqa_json(const SqaVerdict& v, const ChainTower& t) {
  Json j{{"verdict", v.violation ? "violation" : "none-found"},
         {"depth", v.depth},
         {"max_word_length", v.max_word_length},
         {"levels_examined", {0, v.scan_last}},
         {"classes_examined", v.classes_examined},
         {"scope", v.scope}};
  if (v.violation) {
    j["word"] = v.word.format(t.generator_names());
    j["cylinder"] = {{"level", v.level}, {"point", v.point}};
    j["witness"] = detail::fiber_point_json(*v.witness);
  }
  return j;
}

// ---------------------------------------------------------------------------
// Commands

inline Report analyze_report(const ChainTower& t, const AnalysisOptions& o) {
  std::size_t depth = effective_depth(t, o);
  TowerAnalysis a(restrict_depth(t, depth), o);
  Report r = detail::start_report("analyze", t, o, depth);
  std::size_t len = o.max_word_length;
  detail::section(r, "core_quotients", [&] { return core_quotients_json(a, depth); });
  detail::section(r, "discriminant", [&] { return discriminant_json(discriminant_tower(a, depth)); });
  detail::section(r, "molino", [&] { return molino_json(molino_tower(a, depth)); });
  detail::section(r, "classification", [&] { return classification_json(classify(a, depth)); });
  detail::section(r, "stability", [&] { return stability_json(stability_report(a, depth)); });
  detail::section(r, "kernel", [&] { return kernel_json(a, depth, len); });
  detail::section(r, "kernel_vs_discriminant", [&] {
    return kernel_vs_discriminant_json(kernel_vs_discriminant(a, depth, len), t.generator_names());
  });
  detail::section(r, "sqa", [&] { return sqa_json(sqa_violation_search(a, depth, len), t); });
  detail::finish(r);
  return r;
}

inline Report classify_report(const ChainTower& t, const AnalysisOptions& o) {
  std::size_t depth = effective_depth(t, o);
  TowerAnalysis a(restrict_depth(t, depth), o);
  Report r = detail::start_report("classify", t, o, depth);
  detail::section(r, "classification", [&] { return classification_json(classify(a, depth)); });
  detail::finish(r);
  return r;
}

inline Report stability_command_report(const ChainTower& t, const AnalysisOptions& o) {
  std::size_t depth = effective_depth(t, o);
  TowerAnalysis a(restrict_depth(t, depth), o);
  Report r = detail::start_report("stability", t, o, depth);
  detail::section(r, "stability", [&] { return stability_json(stability_report(a, depth)); });
  detail::finish(r);
  return r;
}

inline Report holonomy_report(const ChainTower& t, const Word& w, const AnalysisOptions& o) {
  std::size_t depth = effective_depth(t, o);
  Report r = detail::start_report("holonomy", t, o, depth);
  detail::section(r, "holonomy",
                  [&] { return holonomy_json(holonomy_test(t, w, depth), w.format(t.generator_names())); });
  detail::finish(r);
  return r;
}

inline Report sqa_report(const ChainTower& t, const AnalysisOptions& o) {
  std::size_t depth = effective_depth(t, o);
  TowerAnalysis a(restrict_depth(t, depth), o);
  Report r = detail::start_report("sqa", t, o, depth);
  detail::section(r, "sqa", [&] { return sqa_json(sqa_violation_search(a, depth, o.max_word_length), t); });
  detail::finish(r);
  return r;
}

inline Report equivalence_report(const ChainTower& a, const ChainTower& b, const AnalysisOptions& o) {
  std::size_t depth = o.depth == 0 ? std::max(a.depth(), b.depth()) : o.depth;
  Report r = detail::start_report("equiv", a, o, depth);
  r.json["other"] = detail::tower_summary(b);
  detail::section(r, "equivalence", [&] {
    EquivalenceResult e = equivalence_probe(a, b, depth, o);
    Json chain = Json::array();
    for (const auto& c : e.interleaving) {
      chain.push_back({{"outer_tower", std::string(1, c.outer_tower)}, {"outer_level", c.outer}, {"inner_level", c.inner}});
    }
    Json j{{"verdict", to_string(e.verdict)}, {"depth_a", e.depth_a}, {"depth_b", e.depth_b},
           {"interleaving", std::move(chain)}};
    if (e.point) j["rebase_point"] = detail::fiber_point_json(*e.point);
    if (!e.witness.empty()) j["witness"] = e.witness;
    return j;
  });
  detail::finish(r);
  return r;
}

inline Report virtual_regularity_report(const ChainTower& t, const std::vector<std::vector<Word>>& subgroups,
                                        const AnalysisOptions& o) {
  std::size_t depth = effective_depth(t, o);
  Report r = detail::start_report("vr", t, o, depth);
  detail::section(r, "virtual_regularity", [&] {
    VirtualRegularityReport v = virtual_regularity_probe(t, subgroups, depth, o);
    Json probes = Json::array();
    for (const auto& p : v.probes) {
      Json j{{"subgroup", p.label}, {"normal", p.normal}};
      j["index"] = p.index ? Json(*p.index) : Json(nullptr);
      if (p.classification) j["classification"] = classification_json(*p.classification);
      if (!p.error.empty()) j["error"] = p.error;
      probes.push_back(std::move(j));
    }
    Json j{{"verdict", to_string(v.verdict)}, {"depth", v.depth}};
    if (v.witness) j["witness"] = v.probes[*v.witness].label;
    j["probes"] = std::move(probes);
    return j;
  });
  detail::finish(r);
  return r;
}

inline Report validation_report(const ChainTower& t) {
  Report r;
  r.json["schema"] = kReportSchema;
  r.json["command"] = "validate";
  r.json["tower"] = detail::tower_summary(t);
  ValidationReport v = validate(t);
  Json issues = Json::array();
  for (const auto& i : v.issues) {
    issues.push_back({{"kind", i.kind}, {"level", i.level}, {"generator", i.generator ? Json(*i.generator) : Json(nullptr)},
                      {"point", i.point ? Json(*i.point) : Json(nullptr)},
                      {"message", i.message}});
  }
  r.json["valid"] = v.ok();
  r.json["trivial"] = v.trivial;
  r.json["proper"] = v.proper;
  r.json["issues"] = std::move(issues);
  return r;
}

// ---------------------------------------------------------------------------
// Text rendering

namespace detail {

inline std::string join(const Json& array, const char* sep = ", ") {
  std::string out;
  for (const auto& x : array) {
    if (!out.empty()) out += sep;
    out += x.is_string() ? x.get<std::string>() : x.dump();
  }
  return out;
}

inline std::string cylinder_text(const Json& point, std::size_t n) {
  std::string s = "U(x, " + std::to_string(n) + ") at (";
  s += join(point, " ") + ")";
  return s;
}

inline void render_section(std::ostream& out, const std::string& name, const Json& s) {
  if (s.contains("partial")) {
    out << name << ": partial (" << s["error"].get<std::string>() << ")\n";
    return;
  }
  if (name == "core_quotients") {
    out << "core quotient orders |H_l|: " << join(s["orders"]) << "\n";
  } else if (name == "discriminant") {
    out << "discriminant tower (depth " << s["depth"] << "):\n";
    for (const auto& l : s["levels"]) {
      out << "  l=" << l["level"] << "  d=" << l["degree"] << "  |H_l| = " << l["h_order"] << "  |D_l| = "
          << l["order"] << " (" << l["fingerprint"]["name"].get<std::string>() << ")  eventual image "
          << l["eventual_order"] << (l["stabilized"].get<bool>() ? " (stabilized)" : "") << "\n";
    }
  } else if (name == "molino") {
    out << "Molino level sizes: " << join(s["level_sizes"]) << "; fiber sizes: " << join(s["fiber_sizes"]) << "\n";
  } else if (name == "classification") {
    out << "classification: " << s["verdict"].get<std::string>();
    if (s.contains("witness")) out << "(" << s["witness"] << ")";
    out << " [depth " << s["depth"] << ", truncations " << s["truncations_examined"][0] << ".."
        << s["truncations_examined"][1] << "]";
    if (s.contains("note")) out << " " << s["note"].get<std::string>();
    out << "\n";
  } else if (name == "stability") {
    out << "stability: " << s["verdict"].get<std::string>();
    if (s.contains("n0")) out << "(" << s["n0"] << ")";
    out << " [depth " << s["depth"] << "]\n";
    for (const auto& r : s["rows"]) {
      out << "  n=" << r["n"] << "  |D^n| = " << r["order"] << "  " << r["fingerprint"]["name"].get<std::string>()
          << (r["in_margin"].get<bool>() ? "" : "  (outside margin)") << "\n";
    }
    for (const auto& p : s["psi"]) {
      out << "  psi(" << p["n"] << "," << p["m"] << "): image order " << p["image_order"]
          << (p["surjective"].get<bool>() ? ", surjective" : ", not surjective") << "\n";
    }
    out << "  " << s["note"].get<std::string>() << "\n";
  } else if (name == "holonomy") {
    out << "holonomy of " << s["word"].get<std::string>() << ": " << s["verdict"].get<std::string>();
    if (s.contains("level")) out << "(" << s["level"] << ")";
    out << " [depth " << s["depth"] << "]\n";
    for (std::size_t n = 0; n < s["witnesses"].size(); ++n) {
      out << "  witness in " << cylinder_text(s["witnesses"][n], n) << "\n";
    }
  } else if (name == "kernel") {
    out << "kernel candidates (word length <= " << s["max_word_length"] << ", depth " << s["depth"] << "):\n";
    for (const auto& k : s["candidates"]) {
      std::string w = k["word"].get<std::string>();
      out << "  kernel candidate: " << (w == "1" ? "1 (identity class)" : w)
          << (k["acts_trivially"].get<bool>() ? "  acts trivially" : "") << "\n";
      if (k.contains("holonomy")) {
        const Json& h = k["holonomy"];
        out << "    holonomy: " << h["verdict"].get<std::string>();
        if (h.contains("level")) out << "(" << h["level"] << ")";
        if (!h["witnesses"].empty()) out << " (witness " << cylinder_text(h["witnesses"][0], 0) << ", ...)";
        out << "\n";
      }
    }
  } else if (name == "kernel_vs_discriminant") {
    out << "kernel vs discriminant: holonomy words {" << join(s["holonomy_words"]) << "}, discriminant words {"
        << join(s["discriminant_words"]) << "}" << (s["sets_agree"].get<bool>() ? ", agree" : ", DISAGREE")
        << "; nontrivial germinal holonomy {" << join(s["germinal_holonomy_words"]) << "}"
        << (s["nontrivial_fiber_consistent"].get<bool>() ? "" : ", fiber inconsistency") << "\n";
  } else if (name == "sqa") {
    out << "SQA: " << s["verdict"].get<std::string>() << " [" << s["scope"].get<std::string>() << ", depth "
        << s["depth"] << ", word length <= " << s["max_word_length"] << "]\n";
    if (s.contains("word")) {
      out << "  word " << s["word"].get<std::string>() << " is the identity on the subtree at level "
          << s["cylinder"]["level"] << ", point " << s["cylinder"]["point"] << "; moves (" << join(s["witness"], " ")
          << ")\n";
    }
  } else if (name == "equivalence") {
    out << "equivalence: " << s["verdict"].get<std::string>() << "\n";
    for (const auto& c : s["interleaving"]) {
      std::string outer = c["outer_tower"].get<std::string>();
      std::string inner = outer == "A" ? "B" : "A";
      out << "  " << outer << "_" << c["outer_level"] << " contains " << inner << "_" << c["inner_level"] << "\n";
    }
    if (s.contains("rebase_point")) out << "  rebased at (" << join(s["rebase_point"], " ") << ")\n";
    if (s.contains("witness")) out << "  " << s["witness"].get<std::string>() << "\n";
  } else if (name == "virtual_regularity") {
    out << "virtual regularity: " << s["verdict"].get<std::string>();
    if (s.contains("witness")) out << " (witness " << s["witness"].get<std::string>() << ")";
    out << " [depth " << s["depth"] << "]\n";
    for (const auto& p : s["probes"]) {
      out << "  " << p["subgroup"].get<std::string>() << "  index " << (p["index"].is_null() ? "?" : p["index"].dump())
          << "  ";
      if (p.contains("classification")) {
        out << p["classification"]["verdict"].get<std::string>();
      } else {
        out << p["error"].get<std::string>();
      }
      out << "\n";
    }
  }
}

}  // namespace detail

inline std::string render_text(const Json& report) {
  std::ostringstream out;
  const Json& t = report["tower"];
  out << "tower " << (t["name"].get<std::string>().empty() ? "(unnamed)" : t["name"].get<std::string>()) << " ["
      << t["kind"].get<std::string>() << "], generators " << detail::join(t["generators"]) << ", degrees "
      << detail::join(t["degrees"]) << "\n";
  if (report.contains("other")) {
    const Json& o = report["other"];
    out << "other tower " << o["name"].get<std::string>() << ", degrees " << detail::join(o["degrees"]) << "\n";
  }
  if (report["command"] == "validate") {
    out << (report["valid"].get<bool>() ? "valid" : "invalid") << "\n";
    for (const auto& i : report["issues"]) out << "  " << i["kind"].get<std::string>() << ": " << i["message"].get<std::string>() << "\n";
    return out.str();
  }
  const Json& b = report["bounds"];
  out << "bounds: depth " << b["depth"] << ", word length " << b["max_word_length"] << ", degree cap "
      << b["degree_cap"] << "\n";
  for (const auto& [name, s] : report["sections"].items()) detail::render_section(out, name, s);
  if (report["partial"].get<bool>()) out << "report is partial: a budget was exceeded\n";
  return out.str();
}

}  // namespace solch
