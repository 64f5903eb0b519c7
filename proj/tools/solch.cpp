// Command-line front end: build, validate and analyze group-chain towers.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "solch/catalog.hpp"
#include "solch/io.hpp"
#include "solch/report.hpp"

namespace {

using namespace solch;

constexpr int kExitOk = 0;
constexpr int kExitParse = 2;
constexpr int kExitValidation = 3;
constexpr int kExitBudget = 4;

struct Bounds {
  std::size_t depth = 6;
  std::size_t max_word_length = 6;
  std::size_t degree_cap = 200000;
  std::uint64_t seed = 0;
  std::string format = "text";
};

void add_bounds(CLI::App& app, Bounds& b) {
  app.add_option("--depth", b.depth, "certification depth (default 6)")->envname("SOLCH_DEPTH");
  app.add_option("--max-word-len", b.max_word_length, "word length bound (default 6)")->envname("SOLCH_MAX_WORD_LEN");
  app.add_option("--degree-cap", b.degree_cap, "largest level degree (default 200000)")->envname("SOLCH_DEGREE_CAP");
  app.add_option("--seed", b.seed, "seed for randomized choices (default 0)")->envname("SOLCH_SEED");
  app.add_option("--format", b.format, "text or json")->check(CLI::IsMember({"text", "json"}));
}

/// Flags and environment win over the description, which wins over defaults.
AnalysisOptions resolve(const CLI::App& sub, const Bounds& b, const DescriptionOptions& d) {
  auto given = [&](const char* flag) { return sub.get_option(flag)->count() > 0; };
  AnalysisOptions o;
  o.depth = given("--depth") ? b.depth : d.depth.value_or(b.depth);
  o.max_word_length = given("--max-word-len") ? b.max_word_length : d.max_word_length.value_or(b.max_word_length);
  o.degree_cap = given("--degree-cap") ? b.degree_cap : d.degree_cap.value_or(b.degree_cap);
  o.seed = given("--seed") ? b.seed : d.seed.value_or(b.seed);
  return o;
}

void check_cap(const ChainTower& t, const AnalysisOptions& o) {
  for (std::size_t l = 0; l <= t.depth(); ++l) {
    if (t.degree(l) > o.degree_cap) {
      throw BudgetError("level " + std::to_string(l) + " degree " + std::to_string(t.degree(l)) + " above cap " +
                        std::to_string(o.degree_cap));
    }
  }
}

int emit(const Report& r, const std::string& format) {
  if (format == "json") {
    std::cout << r.json.dump(2) << "\n";
  } else {
    std::cout << render_text(r.json);
  }
  return r.partial ? kExitBudget : kExitOk;
}

std::vector<Word> parse_subgroup(const std::string& text, const std::vector<std::string>& names) {
  std::vector<Word> out;
  std::size_t start = 0;
  for (;;) {
    std::size_t comma = text.find(',', start);
    std::string piece = text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    if (piece.find_first_not_of(" \t") != std::string::npos) out.push_back(Word::parse(piece, names));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  if (out.empty()) throw ParseError("empty subgroup '" + text + "'");
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"solch: group chains, discriminants and regularity of weak solenoids"};
  app.require_subcommand(1);
  Bounds bounds;

  std::string input, input_b, output, word;
  std::vector<std::string> subgroups;
  bool normal_catalog = false;
  bool list_normal = false;

  auto* build = app.add_subcommand("build", "build a tower file from a chain description");
  build->add_option("description", input, "chain description (JSON)")->required();
  build->add_option("-o,--output", output, "output path (default stdout)");

  auto* validate_cmd = app.add_subcommand("validate", "check a chain description or tower file");
  validate_cmd->add_option("file", input)->required();
  validate_cmd->add_option("--format", bounds.format)->check(CLI::IsMember({"text", "json"}));

  std::vector<CLI::App*> analysis;
  for (const char* name : {"analyze", "classify", "stability", "sqa"}) {
    auto* sub = app.add_subcommand(name, std::string(name) + " a tower");
    sub->add_option("file", input)->required();
    add_bounds(*sub, bounds);
    analysis.push_back(sub);
  }
  auto* holonomy = app.add_subcommand("holonomy", "germinal holonomy of a kernel word");
  holonomy->add_option("file", input)->required();
  holonomy->add_option("--word", word, "word fixing the basepoint")->required();
  add_bounds(*holonomy, bounds);

  auto* equiv = app.add_subcommand("equiv", "compare two towers over the same generators");
  equiv->add_option("a", input)->required();
  equiv->add_option("b", input_b)->required();
  add_bounds(*equiv, bounds);

  auto* vr = app.add_subcommand("vr", "virtual regularity over normal subgroups");
  vr->add_option("file", input)->required();
  vr->add_option("--subgroup", subgroups, "comma-separated generator words; repeatable");
  vr->add_flag("--normal-catalog", normal_catalog, "all normal subgroups of index <= 12 (two generators)");
  add_bounds(*vr, bounds);

  auto* catalog = app.add_subcommand("catalog", "list builders and fixtures");
  catalog->add_flag("--normal-subgroups", list_normal, "list normal subgroups of F2 of index <= 12");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitParse;
  }

  try {
    if (build->parsed()) {
      LoadedTower t = load_file(input);
      std::string text = tower_to_json(t.tower).dump(2) + "\n";
      if (output.empty()) {
        std::cout << text;
      } else {
        std::ofstream out(output, std::ios::binary);
        if (!out) throw ParseError("cannot write '" + output + "'");
        out << text;
      }
      return kExitOk;
    }
    if (validate_cmd->parsed()) {
      LoadedTower t = load_file(input, false);
      Report r = validation_report(t.tower);
      emit(r, bounds.format);
      return r.json["valid"].get<bool>() ? kExitOk : kExitValidation;
    }
    if (catalog->parsed()) {
      if (list_normal) {
        std::vector<std::string> names{"x", "y"};
        for (const auto& n : free_normal_subgroups(12)) {
          std::cout << "index " << n.index << "  " << n.quotient << "  <";
          for (std::size_t i = 0; i < n.words.size(); ++i) std::cout << (i ? ", " : "") << n.words[i].format(names);
          std::cout << ">\n";
        }
        return kExitOk;
      }
      std::cout << "builders:\n";
      for (const auto& b : builders()) std::cout << "  " << b.name << "  " << b.parameters << "\n";
      std::cout << "fixtures:\n";
      for (const auto& f : fixtures()) std::cout << "  " << f.name << "  " << f.description << "\n";
      return kExitOk;
    }
    if (equiv->parsed()) {
      LoadedTower a = load_file(input);
      LoadedTower b = load_file(input_b);
      AnalysisOptions o = resolve(*equiv, bounds, a.options);
      check_cap(a.tower, o);
      check_cap(b.tower, o);
      return emit(equivalence_report(a.tower, b.tower, o), bounds.format);
    }
    const CLI::App* sub = app.get_subcommands().front();
    LoadedTower t = load_file(input);
    AnalysisOptions o = resolve(*sub, bounds, t.options);
    check_cap(t.tower, o);
    const ChainTower& tower = t.tower;
    if (holonomy->parsed()) return emit(holonomy_report(tower, Word::parse(word, tower.generator_names()), o), bounds.format);
    if (vr->parsed()) {
      std::vector<std::vector<Word>> subs;
      for (const auto& s : subgroups) subs.push_back(parse_subgroup(s, tower.generator_names()));
      if (normal_catalog) {
        if (tower.generator_count() != 2) throw DomainError("--normal-catalog needs a two-generator tower");
        for (const auto& n : free_normal_subgroups(12)) subs.push_back(n.words);
      }
      return emit(virtual_regularity_report(tower, subs, o), bounds.format);
    }
    if (analysis[0]->parsed()) return emit(analyze_report(tower, o), bounds.format);
    if (analysis[1]->parsed()) return emit(classify_report(tower, o), bounds.format);
    if (analysis[2]->parsed()) return emit(stability_command_report(tower, o), bounds.format);
    if (analysis[3]->parsed()) return emit(sqa_report(tower, o), bounds.format);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitParse;
  } catch (const BudgetError& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
    return kExitBudget;
  } catch (const ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const DomainError& e) {
    std::cerr << "invalid request: " << e.what() << "\n";
    return kExitValidation;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return kExitOk;
}
