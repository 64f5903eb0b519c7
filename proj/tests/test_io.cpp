#include <cstdio>
#include <fstream>

#include <gtest/gtest.h>

#include "support.hpp"
#include "solch/catalog.hpp"
#include "solch/io.hpp"
#include "solch/report.hpp"

using namespace solch;

namespace {

const std::string kCli = SOLCH_CLI;
const std::string kChains = SOLCH_CHAINS;

std::string chain(const std::string& name) { return kChains + "/" + name; }

support::RunResult cli(const std::string& args) { return support::run("'" + kCli + "' " + args); }

}  // namespace

TEST(Json, TowerRoundTripIsByteIdentical) {
  for (const auto& f : fixtures()) {
    ChainTower t = f.build();
    std::string first = tower_to_json(t).dump(2);
    ChainTower back = tower_from_json(parse_json_text(first, f.name));
    EXPECT_EQ(back.degrees(), t.degrees()) << f.name;
    EXPECT_EQ(tower_to_json(back).dump(2), first) << f.name;
  }
}

TEST(Json, BuilderDescriptionsMatchBuilders) {
  Json j = parse_json_text(R"({"schema": "solch.chain/1", "kind": "builder", "name": "rt_klein",
                               "parameters": {"depth": 4}})",
                           "inline");
  LoadedTower t = load_json(j);
  EXPECT_EQ(t.tower.degrees(), rt_klein(4).degrees());
  EXPECT_EQ(t.tower.source().name, "rt_klein");
}

TEST(Json, PermutationTowerDescription) {
  LoadedTower t = load_file(chain("odometer_table.json"));
  EXPECT_EQ(t.tower.degrees(), (std::vector<std::size_t>{1, 2, 4}));
  EXPECT_EQ(t.options.max_word_length, std::optional<std::size_t>(4));
  EXPECT_FALSE(t.options.depth.has_value());
}

TEST(Json, FpPresentationDescription) {
  LoadedTower t = load_file(chain("klein_fp.json"));
  EXPECT_EQ(t.tower.degrees(), rt_klein(4).degrees());
  ASSERT_TRUE(t.tower.source().presentation.has_value());
}

TEST(Json, Errors) {
  EXPECT_THROW(parse_json_text("{\"schema\": ", "inline"), ParseError);
  EXPECT_THROW(load_json(parse_json_text(R"({"schema": "other/1"})", "inline")), ParseError);
  EXPECT_THROW(load_file(chain("bad_relator.json")), ParseError);
  EXPECT_THROW(load_file(chain("not_equivariant.json")), ValidationError);
  EXPECT_NO_THROW(load_file(chain("not_equivariant.json"), false));
  EXPECT_THROW(load_file(chain("does_not_exist.json")), ParseError);
  EXPECT_THROW(build_named("no_such_builder", Json::object()), Error);
}

TEST(Json, ReportsAreDeterministic) {
  for (const auto& f : fixtures()) {
    AnalysisOptions o;
    o.depth = f.depth;
    o.max_word_length = 4;
    std::string a = analyze_report(f.build(), o).json.dump(2);
    std::string b = analyze_report(f.build(), o).json.dump(2);
    EXPECT_EQ(a, b) << f.name;
  }
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(cli("build " + chain("dyadic.json")).status, 0);
  EXPECT_EQ(cli("validate " + chain("dyadic.json")).status, 0);
  EXPECT_EQ(cli("build " + chain("bad_relator.json")).status, 2);
  EXPECT_EQ(cli("build " + chain("missing.json")).status, 2);
  EXPECT_EQ(cli("frobnicate").status, 2);
  EXPECT_EQ(cli("validate " + chain("not_equivariant.json")).status, 3);
  EXPECT_EQ(cli("holonomy " + chain("rt_klein.json") + " --word a").status, 3);
  EXPECT_EQ(cli("holonomy " + chain("rt_klein.json") + " --word c").status, 2);
  EXPECT_EQ(cli("classify " + chain("rt_klein.json") + " --degree-cap 10").status, 4);
}

TEST(Cli, BuildRoundTrip) {
  std::string out = "solch_io_built.json";
  ASSERT_EQ(cli("build " + chain("rt_klein.json") + " -o " + out).status, 0);
  LoadedTower t = load_file(out);
  EXPECT_EQ(t.tower.degrees(), load_file(chain("rt_klein.json")).tower.degrees());
  std::string again = tower_to_json(t.tower).dump(2) + "\n";
  EXPECT_EQ(again, read_file(out));
  std::remove(out.c_str());
}

TEST(Cli, JsonOutputAndPrecedence) {
  auto r = cli("classify " + chain("dyadic.json") + " --format json");
  ASSERT_EQ(r.status, 0);
  Json j = parse_json_text(r.out, "cli");
  EXPECT_EQ(j["schema"], kReportSchema);
  EXPECT_EQ(j["sections"]["classification"]["verdict"], "regular-to-depth");
  std::size_t default_depth = j["bounds"]["depth"].get<std::size_t>();
  auto env = support::run("SOLCH_DEPTH=2 '" + kCli + "' classify " + chain("dyadic.json") + " --format json");
  ASSERT_EQ(env.status, 0);
  EXPECT_EQ(parse_json_text(env.out, "cli")["bounds"]["depth"], 2);
  auto flag = support::run("SOLCH_DEPTH=2 '" + kCli + "' classify " + chain("dyadic.json") +
                           " --depth 3 --format json");
  EXPECT_EQ(parse_json_text(flag.out, "cli")["bounds"]["depth"], 3);
  EXPECT_NE(default_depth, 2u);
}

TEST(Cli, DescriptionOptionsApply) {
  auto r = cli("analyze " + chain("odometer_table.json") + " --format json");
  ASSERT_EQ(r.status, 0);
  EXPECT_EQ(parse_json_text(r.out, "cli")["bounds"]["max_word_length"], 4);
  auto f = cli("analyze " + chain("odometer_table.json") + " --max-word-len 2 --format json");
  EXPECT_EQ(parse_json_text(f.out, "cli")["bounds"]["max_word_length"], 2);
}

TEST(Cli, TextOutput) {
  auto r = cli("analyze " + chain("rt_klein.json"));
  ASSERT_EQ(r.status, 0);
  EXPECT_NE(r.out.find("irregular-to-depth"), std::string::npos);
  EXPECT_NE(r.out.find("word-level only"), std::string::npos);
}

TEST(Cli, AnalyzeTwiceIsByteIdentical) {
  for (const char* f : {"dyadic.json", "rt_klein.json", "sqa_fixture.json", "product_chain.json"}) {
    auto a = cli(std::string("analyze ") + chain(f) + " --format json");
    auto b = cli(std::string("analyze ") + chain(f) + " --format json");
    EXPECT_EQ(a.status, 0) << f;
    EXPECT_EQ(a.out, b.out) << f;
  }
}
