// Acceptance run: one PASS/FAIL line per criterion, with the time limits
// pinned below.  Exit status is nonzero when any criterion fails.

#include <chrono>
#include <functional>
#include <iostream>
#include <sstream>

#include "support.hpp"
#include "solch/builders.hpp"
#include "solch/catalog.hpp"
#include "solch/invariants.hpp"
#include "solch/io.hpp"
#include "solch/report.hpp"

using namespace solch;

namespace {

constexpr double kLimitOdometer = 1.0;
constexpr double kLimitKlein = 10.0;
constexpr double kLimitProduct = 10.0;
constexpr double kLimitAltDiagonal = 60.0;
constexpr double kLimitCore = 1.0;
constexpr double kLimitSqa = 30.0;
constexpr double kLimitVirtual = 60.0;

/// Collects failed sub-checks of one criterion.
class Checks {
 public:
  void expect(bool ok, const std::string& what) {
    if (!ok) failures_.push_back(what);
  }
  bool ok() const { return failures_.empty(); }
  std::string summary() const {
    std::string s;
    for (const auto& f : failures_) s += (s.empty() ? "" : "; ") + f;
    return s;
  }

 private:
  std::vector<std::string> failures_;
};

int failed = 0;

void criterion(int number, const std::string& title, double limit, const std::function<void(Checks&)>& body) {
  Checks c;
  auto start = std::chrono::steady_clock::now();
  try {
    body(c);
  } catch (const std::exception& e) {
    c.expect(false, std::string("exception: ") + e.what());
  }
  double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (limit > 0) c.expect(seconds < limit, "took " + std::to_string(seconds) + " s, limit " + std::to_string(limit));
  std::ostringstream line;
  line.setf(std::ios::fixed);
  line.precision(2);
  line << (c.ok() ? "PASS" : "FAIL") << "  " << number << "  " << title << "  (" << seconds << " s)";
  if (!c.ok()) {
    line << "  -- " << c.summary();
    ++failed;
  }
  std::cout << line.str() << "\n";
}

AnalysisOptions at_depth(std::size_t depth) {
  AnalysisOptions o;
  o.depth = depth;
  return o;
}

bool has_word(const std::vector<KernelWord>& ws, const Word& w) {
  for (const auto& k : ws) {
    if (k.word == w) return true;
  }
  return false;
}

PermutationGroup z3() { return cyclic_group(3, 3); }

}  // namespace

int main() {
  std::cout << std::unitbuf;

  criterion(1, "odometer 2x10 at depth 10: trivial D, regular, Molino tower is the input", kLimitOdometer,
            [](Checks& c) {
              ChainTower t = odometer(std::vector<std::uint64_t>(10, 2));
              TowerAnalysis a(t, at_depth(10));
              DiscriminantTower d = discriminant_tower(a, 10);
              for (std::size_t l = 0; l <= 10; ++l) {
                c.expect(d.levels[l].D.is_trivial(), "D_" + std::to_string(l) + " nontrivial");
              }
              c.expect(classify(a, 10).verdict == Regularity::regular, "not regular");
              MolinoTower m = molino_tower(a, 10);
              c.expect(m.tower.degrees() == t.degrees(), "Molino degrees differ");
              c.expect(m.tower.images(10) == t.images(10), "Molino top action differs");
              c.expect(equivalence_probe(m.tower, t, 10).verdict == EquivalenceKind::equivalent,
                       "Molino tower not equivalent");
            });

  criterion(2, "rt_klein depth 8: indices, |D|, oracle, kernel, holonomy, rebase, stability", kLimitKlein,
            [](Checks& c) {
              ChainTower t = rt_klein(8);
              TowerAnalysis a(t, at_depth(8));
              for (std::size_t l = 0; l <= 8; ++l) {
                c.expect(t.degree(l) == (std::size_t{1} << l), "index at level " + std::to_string(l));
              }
              DiscriminantTower d = discriminant_tower(a, 8);
              for (std::size_t l = 1; l <= 8; ++l) {
                if (d.levels[l].D.order() != 2) {
                  c.expect(false, "|D_" + std::to_string(l) + "| = " + std::to_string(d.levels[l].D.order()) +
                                      ", expected 2");
                }
              }
              auto raw = support::raw(restrict_depth(t, 5));
              for (std::size_t l = 0; l <= 5; ++l) {
                auto [h, dd] = oracle::level_orders(raw, l);
                c.expect(h == d.levels[l].h_order && dd == d.levels[l].D.order(),
                         "oracle disagrees at level " + std::to_string(l));
              }
              const Word b({2}), b2({2, 2});
              c.expect(has_word(kernel_words(a, 4, 8), b), "kernel search misses b");
              HolonomyVerdict hb = holonomy_test(t, b, 8);
              c.expect(!hb.trivial && hb.witnesses.size() == hb.scan_last + 1, "holonomy(b) not nontrivial everywhere");
              for (std::size_t n = 0; n < hb.witnesses.size(); ++n) {
                const FiberPoint& y = hb.witnesses[n];
                c.expect(cylinder(t, basepoint(t), n).contains(y) && t.act(8, b, y.coords[8]) != y.coords[8],
                         "bad holonomy witness at n = " + std::to_string(n));
              }
              HolonomyVerdict hb2 = holonomy_test(t, b2, 8);
              c.expect(hb2.trivial && hb2.level == 0, "holonomy(b^2) is not trivial-evidence(0)");
              ChainTower r = rebase(t, klein_off_orbit_point(t));
              auto rw = kernel_words(r, 4, 8);
              c.expect(has_word(rw, b2) && !has_word(rw, b), "rebased kernel search is not {b^2, not b}");
              StabilityReport s = stability_report(a, 8);
              c.expect(s.verdict == StabilityKind::stable, "not stable");
              for (const auto& row : s.rows) {
                if (row.in_margin) c.expect(row.fingerprint.name() == "C2", "row " + std::to_string(row.n) + " not C2");
              }
            });

  criterion(3, "product chain Alt(5), 5-cycle, scales 2,2,2: |D| = 5, weakly-normal(1)", kLimitProduct,
            [](Checks& c) {
              ChainTower t = product_chain(alternating_group(5),
                                           PermutationGroup(5, {Permutation::from_cycles(5, "(0 1 2 3 4)")}), {2, 2, 2});
              TowerAnalysis a(t, at_depth(3));
              DiscriminantTower d = discriminant_tower(a, 3);
              for (std::size_t l = 1; l <= 3; ++l) {
                c.expect(d.levels[l].D.order() == 5, "|D_" + std::to_string(l) + "| != 5");
              }
              Classification k = classify(a, 3);
              c.expect(k.verdict == Regularity::weakly_normal && k.witness == 1, "not weakly-normal(1)");
            });

  criterion(4, "alt diagonal Z3, m = 5, depth 3: degrees, C3 rows, stable, irregular, no germinal words",
            kLimitAltDiagonal, [](Checks& c) {
              ChainTower t = alt_diagonal_chain(z3(), 5, 3);
              c.expect(t.degrees() == std::vector<std::size_t>{1, 20, 1200, 72000}, "degrees");
              TowerAnalysis a(t, at_depth(3));
              StabilityReport s = stability_report(a, 3);
              for (std::size_t n = 0; n <= 2; ++n) {
                c.expect(n < s.rows.size() && s.rows[n].fingerprint.name() == "C3", "row " + std::to_string(n) + " not C3");
              }
              c.expect(s.verdict == StabilityKind::stable, "not stable");
              c.expect(classify(a, 3).verdict == Regularity::irregular, "not irregular");
              KernelDiscriminantReport k = kernel_vs_discriminant(a, 3, 6);
              c.expect(k.germinal_words.empty(), "holonomy witness found at word length <= 6");
            });

  criterion(5, "core of Alt(3) in Alt(12) is trivial with a conjugator", kLimitCore, [](Checks& c) {
    PermutationGroup a12 = alternating_group(12);
    PermutationGroup a3(12, {Permutation::from_cycles(12, "(0 1 2)")});
    CoreResult r = core_triviality_witness(a12, a3);
    c.expect(r.verdict == CoreVerdict::trivial, "core not trivial");
    c.expect(!r.witnesses.empty(), "no witness");
    for (const auto& w : r.witnesses) {
      c.expect(a12.contains(w.conjugator) && !a3.contains(w.conjugator.inverse() * w.element * w.conjugator),
               "witness " + w.element.to_cycles() + " does not leave the subgroup");
    }
  });

  criterion(6, "Lenstra round trip: eventual discriminants match the input", 0, [](Checks& c) {
    std::vector<QuotientTowerSpec> specs{cyclic_spec(6), alt_diagonal_spec(z3(), 5, 2),
                                         full_product_spec({{z3(), 5}, {z3(), 5}, {z3(), 5}})};
    for (const auto& s : specs) {
      ChainTower t = lenstra_chain(s).tower;
      DiscriminantTower d = discriminant_tower(t, at_depth(t.depth()));
      for (std::size_t l = 1; l <= t.depth(); ++l) {
        const auto& D = s.discriminants[l - 1];
        c.expect(d.levels[l].eventual_fingerprint == fingerprint(D.generators(), D.order()),
                 s.name + " level " + std::to_string(l));
      }
    }
  });

  criterion(7, "SQA: rt_klein none-found; free-tree fixture violates at level 1", kLimitSqa, [](Checks& c) {
    TowerAnalysis k(rt_klein(6), at_depth(6));
    c.expect(!sqa_violation_search(k, 6, 6).violation, "rt_klein violation");
    ChainTower f = sqa_fixture();
    TowerAnalysis a(f, at_depth(3));
    SqaVerdict v = sqa_violation_search(a, 3, 6);
    c.expect(v.violation && v.level == 1 && !v.word.empty() && v.witness.has_value(),
             "fixture lacks a level-1 violation with word and cylinder");
  });

  criterion(8, "catalog properties and oracle agreement (d <= 64, depth <= 4)", 0, [](Checks& c) {
    for (const auto& fx : fixtures()) {
      ChainTower t = fx.build();
      TowerAnalysis a(t, at_depth(fx.depth));
      DiscriminantTower d = discriminant_tower(a, fx.depth);
      for (std::size_t l = 0; l < d.levels.size(); ++l) {
        const auto& lv = d.levels[l];
        c.expect(lv.h_order == lv.degree * lv.D.order(), fx.name + ": |H| != d|D| at " + std::to_string(l));
        c.expect(lv.bonding_verified && (!lv.bonding || lv.bonding->verify_on_generator_pairs()),
                 fx.name + ": bonding map at " + std::to_string(l));
      }
      for (const auto& p : stability_report(a, fx.depth).psi) {
        c.expect(p.surjective, fx.name + ": psi(" + std::to_string(p.n) + "," + std::to_string(p.m) + ")");
      }
      // Oracle-sized prefix.
      std::size_t depth = 0;
      while (depth < std::min<std::size_t>(t.depth(), 4) && t.degree(depth + 1) <= 64) ++depth;
      ChainTower s = restrict_depth(t, depth);
      auto raw = support::raw(s);
      DiscriminantTower ds = discriminant_tower(s, at_depth(depth));
      for (std::size_t l = 0; l <= depth; ++l) {
        auto [h, dd] = oracle::level_orders(raw, l);
        c.expect(h == ds.levels[l].h_order && dd == ds.levels[l].D.order(),
                 fx.name + ": oracle level orders at " + std::to_string(l));
      }
      auto orders = ds.orders();
      for (std::size_t x = 1; x < std::min<std::size_t>(s.degree(depth), 8); ++x) {
        ChainTower r = rebase(s, fiber_point(s, depth, static_cast<Point>(x)));
        c.expect(discriminant_tower(r, at_depth(depth)).orders() == orders, fx.name + ": rebase changes orders");
      }
      MolinoTower m = molino_tower(s, at_depth(depth));
      auto mraw = support::raw(m.tower);
      for (std::size_t l = 0; l <= depth; ++l) {
        c.expect(oracle::level_orders(mraw, l).second == 1, fx.name + ": Molino level " + std::to_string(l));
      }
      if (depth >= 2) {
        for (const auto& row : stability_report(s, at_depth(depth)).rows) {
          c.expect(row.order == oracle::truncated_top_discriminant(raw, row.n),
                   fx.name + ": truncated discriminant n = " + std::to_string(row.n));
        }
      }
    }
  });

  criterion(9, "full_product depth 3: every normal restriction of index <= 12 is irregular", kLimitVirtual,
            [](Checks& c) {
              ChainTower t = full_product_chain({{z3(), 5}, {z3(), 5}, {z3(), 5}});
              std::vector<std::vector<Word>> subs;
              for (const auto& n : free_normal_subgroups(12)) subs.push_back(n.words);
              VirtualRegularityReport r = virtual_regularity_probe(t, subs, 3);
              c.expect(r.probes.size() == subs.size() + 1, "probe count");
              for (const auto& p : r.probes) {
                c.expect(p.error.empty(), p.label + ": " + p.error);
                c.expect(p.classification && p.classification->verdict == Regularity::irregular,
                         p.label + " not irregular");
              }
              c.expect(r.verdict == VirtualRegularityKind::not_virtually_regular, "verdict");
            });

  criterion(10, "determinism: two analyze runs per catalog fixture are byte-identical", 0, [](Checks& c) {
    for (const auto& fx : fixtures()) {
      AnalysisOptions o = at_depth(fx.depth);
      std::string first = analyze_report(fx.build(), o).json.dump(2);
      std::string second = analyze_report(fx.build(), o).json.dump(2);
      c.expect(first == second, fx.name);
    }
    const std::string cli = SOLCH_CLI;
    for (const char* f : {"dyadic.json", "rt_klein.json", "rt_klein_rebased.json", "product_chain.json",
                          "alt_diagonal.json", "full_product.json", "sqa_fixture.json", "lenstra_dyadic.json"}) {
      std::string cmd = "'" + cli + "' analyze '" + std::string(SOLCH_CHAINS) + "/" + f + "' --format json";
      auto a = support::run(cmd);
      auto b = support::run(cmd);
      c.expect(a.status == 0 && a.out == b.out, std::string("cli ") + f);
    }
  });

  std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed") << "\n";
  return failed == 0 ? 0 : 1;
}
