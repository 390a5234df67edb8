// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "json.hpp"
#include "oracles.hpp"
#include "qstack/cli.hpp"
#include "support.hpp"

using namespace qstack;
using namespace support;
using json = nlohmann::ordered_json;

namespace {

struct Verdict {
  bool pass = true;
  std::string detail;
};

struct Criterion {
  int id;
  std::string name;
  double limit_s;  // 0: no runtime limit
  std::function<Verdict()> run;
};

// pullback_action on random cospans of G-sets
Verdict pullback_actions() {
  const auto groups = small_groups();
  std::size_t instances = 0, failures = 0, attempts = 0;
  for (std::uint64_t n = 0; instances < 200 && n < 20000; ++n, ++attempts) {
    auto rng = gen::case_rng(1001, n);
    const FinGroup& g = groups[n % groups.size()];
    const GAction y = gen::random_action(rng, g, 2, 5);
    const GAction p = gen::random_action(rng, g, 3, 5), z = gen::random_action(rng, g, 3, 5);
    const auto f = gen::random_equivariant(rng, p, y), k = gen::random_equivariant(rng, z, y);
    if (!f || !k) continue;
    const PullbackAction pa = pullback_action(check_equivariant(*f, p, y).value(), check_equivariant(*k, z, y).value());
    const bool ok = check_action(g, pa.action.space(), pa.action.act()).ok() &&
                    check_equivariant(pa.cert.proj1, pa.action, p).ok() &&
                    check_equivariant(pa.cert.proj2, pa.action, z).ok() &&
                    oracle::pullback_pairs(*f, *k).size() == pa.action.space().size();
    failures += !ok;
    ++instances;
  }
  return {instances >= 200 && failures == 0,
          std::to_string(instances - failures) + "/" + std::to_string(instances) + " instances pass"};
}

Verdict pullback_bundles() {
  const auto groups = small_groups();
  std::size_t instances = 0, failures = 0;
  for (std::uint64_t n = 0; n < 200; ++n) {
    auto rng = gen::case_rng(1002, n);
    const FinGroup& g = groups[n % groups.size()];
    const Bundle b = gen::random_bundle(rng, g, gen::random_set(rng, 0, 4));
    const FinSet zs = b.base().empty() ? FinSet() : gen::random_set(rng, 0, 4);
    const Bundle p = pullback_bundle(b, gen::random_map(rng, zs, b.base()));
    const bool ok = is_principal_bundle(p.proj()).ok() &&
                    oracle::fiberwise_torsor(oracle::act_rows(p.total()), oracle::table_of(p.proj().map()), zs.size());
    failures += !ok;
    ++instances;
  }
  return {failures == 0, std::to_string(instances - failures) + "/" + std::to_string(instances) + " instances pass"};
}

// every family of <= max_legs legs into {0..t-1}, each leg of size <= max_leg
std::vector<CoveringFamily> families(std::size_t t, std::size_t max_legs, std::size_t max_leg) {
  std::vector<FinMap> pool;
  for (std::size_t s = 0; s <= max_leg; ++s)
    for_each_map(FinSet::range(s), FinSet::range(t), [&](const FinMap& m) { return pool.push_back(m), true; });
  std::vector<CoveringFamily> out;
  for (std::size_t k = 0; k <= max_legs; ++k)
    oracle::each_table(k, pool.size(), [&](const oracle::Table& pick) {
      std::vector<FinMap> legs;
      for (Index i : pick) legs.push_back(pool[i]);
      out.push_back(make_family(FinSet::range(t), legs));
    });
  return out;
}

std::vector<CoveringFamily> family_corpus() {
  std::vector<CoveringFamily> all;
  for (std::size_t t = 0; t <= 3; ++t)
    for (auto& c : families(t, 3, 2)) all.push_back(std::move(c));
  return all;
}

Verdict canonical_covers() {
  std::size_t checked = 0, disagreements = 0;
  for (const auto& c : family_corpus()) {
    disagreements += is_canonical_cover(c) != oracle::jointly_surjective(c);
    ++checked;
  }
  return {disagreements == 0, std::to_string(checked) + " families, " + std::to_string(disagreements) + " disagreements"};
}

Verdict subcanonical() {
  std::size_t covers = 0, checks = 0, failures = 0;
  for (const auto& c : family_corpus()) {
    if (!is_canonical_cover(c)) continue;
    ++covers;
    for (std::size_t a = 0; a <= 3; ++a) {
      failures += !check_sheaf_condition(c, FinSet::range(a));
      ++checks;
    }
  }
  return {covers > 0 && failures == 0, std::to_string(covers) + " canonical covers, " + std::to_string(checks) +
                                           " sheaf checks, " + std::to_string(failures) + " failures"};
}

Verdict stack_conditions() {
  const QuotientStack bg = classifying_stack(cyclic_group(2));
  const StackReport ex = verify_stack(bg, exhaustive_corpus(bg, 2));
  std::size_t random_cases = 0;
  bool random_ok = true;
  for (std::uint64_t s = 0; s < 20; ++s) {
    auto rng = gen::case_rng(1005, s);
    const QuotientStack st = random_stack(rng, 4);
    const StackReport r = verify_stack(st, random_corpus(st, 10, 4, 1005 + s));
    random_ok = random_ok && r.all_pass();
    random_cases += r.cases;
  }
  return {ex.all_pass() && ex.cases > 0 && random_ok && random_cases >= 200,
          "exhaustive " + std::to_string(ex.cases) + " cases " + (ex.all_pass() ? "pass" : "FAIL") + ", random " +
              std::to_string(random_cases) + " cases " + (random_ok ? "pass" : "FAIL")};
}

Verdict round_trip() {
  std::size_t cases = 0, recovered = 0, squares = 0;
  for (std::uint64_t n = 0; n < 200; ++n) {
    auto rng = gen::case_rng(1006, n);
    const QuotientStack st = random_stack(rng, 4);
    const FinSet y = gen::random_set(rng, 0, 4);
    const QSObject obj = random_object(rng, st, y);
    const DescentDatum d = restrict_to_datum(obj, gen::random_family(rng, y, 3, 3, true));
    const GluingResult r = glue_object(d);
    recovered += qs_isomorphism(r.glued, obj).has_value();
    squares += psi_squares_hold(d, r);
    ++cases;
  }
  return {recovered == cases && squares == cases, std::to_string(recovered) + "/" + std::to_string(cases) +
                                                      " recovered, psi squares hold in " + std::to_string(squares)};
}

Verdict exact_counts() {
  const Bundle t2 = trivial_bundle(cyclic_group(2), FinSet::range(2));
  const Bundle t3 = trivial_bundle(cyclic_group(3), terminal());
  const std::size_t a2 = oracle::count_endos_over(oracle::act_rows(t2.total()), oracle::table_of(t2.proj().map()));
  const std::size_t a3 = oracle::count_endos_over(oracle::act_rows(t3.total()), oracle::table_of(t3.proj().map()));
  const std::size_t l2 = enumerate_bundle_morphisms(t2, t2).size();
  const std::size_t l3 = enumerate_bundle_morphisms(t3, t3).size();

  std::size_t cases = 0, single = 0;
  for (const auto& g : small_groups()) {
    if (g.order() > 4) continue;
    for (std::size_t nx = 0; nx <= 3; ++nx) {
      std::vector<Bundle> reps;
      for (const auto& b : enumerate_principal_bundles(g, FinSet::range(nx))) {
        bool seen = false;
        for (const auto& r : reps) seen = seen || bundle_isomorphism(b, r).has_value();
        if (!seen) reps.push_back(b);
      }
      single += reps.size() == 1;
      ++cases;
    }
  }
  return {a2 == 4 && l2 == 4 && a3 == 3 && l3 == 3 && single == cases,
          "Aut(Z/2 over 2 points) = " + std::to_string(a2) + " (library " + std::to_string(l2) +
              "), Aut(Z/3 over a point) = " + std::to_string(a3) + " (library " + std::to_string(l3) + "), " +
              std::to_string(single) + "/" + std::to_string(cases) + " (G, X) with one iso class"};
}

Verdict coherence() {
  std::size_t squares = 0, components = 0, failures = 0, triples = 0;
  for (std::uint64_t n = 0; n < 60; ++n) {
    auto rng = gen::case_rng(1008, n);
    const QuotientStack st = random_stack(rng, 4);
    const FinSet y = gen::random_set(rng, 1, 3);
    std::vector<QSObject> objects;
    std::vector<QSMorphism> morphisms;
    for (int k = 0; k < 2; ++k) {
      objects.push_back(random_object(rng, st, y));
      morphisms.push_back(random_iso_from(rng, objects.back()));
      objects.push_back(morphisms.back().dst());
    }
    const FinMap f = gen::random_map(rng, gen::random_set(rng, 1, 3), y);
    const FinMap g = gen::random_map(rng, gen::random_set(rng, 1, 3), f.src());
    const FinMap h = gen::random_map(rng, gen::random_set(rng, 0, 3), g.src());
    for (const CoherenceCell& cell : {coherence_iota(y, objects, morphisms), coherence_epsilon(f, g, objects, morphisms)}) {
      failures += !cell.ok();
      squares += cell.naturality_squares;
      for (const auto& c : cell.components) {
        failures += !is_iso(c);
        ++components;
      }
    }
    failures += !associativity_coherent(objects[0], f, g, h);
    ++triples;
  }
  return {squares >= 100 && triples >= 50 && failures == 0,
          std::to_string(squares) + " naturality squares, " + std::to_string(components) + " components, " +
              std::to_string(triples) + " associativity triples, " + std::to_string(failures) + " failures"};
}

Verdict negative_witnesses() {
  struct Expect {
    std::string file, command;
    int exit_code;
    std::string kind;
  };
  const std::vector<Expect> cases{
      {"nonassoc_group.site", "check-group", 1, "NotAssociative"},
      {"nonassoc_group.site", "check-action", 2, "NotAssociative"},
      {"non_action.site", "check-action", 1, "AssocFail"},
      {"non_equivariant.site", "check-action", 1, "EquivarianceFail"},
      {"non_torsor.site", "check-bundle", 1, "NotBundle"},
      {"cocycle_violation.site", "glue-object", 1, "CocycleFail"},
      {"non_canonical_cover.site", "check-cover", 1, "NotCanonicalCover"},
  };
  std::size_t matched = 0;
  std::string misses;
  for (const auto& c : cases) {
    const cli::RunResult r = cli::run(c.command, std::string(QSTACK_FIXTURES) + "/" + c.file, {});
    const json rep = json::parse(r.report);
    std::string kind;
    if (r.exit_code == 1) {
      for (const auto& ch : rep["checks"])
        if (ch["status"] == "fail") {
          kind = ch["witness"]["kind"];
          break;
        }
    } else if (rep["error"].is_object() && rep["error"].contains("witness")) {
      kind = rep["error"]["witness"]["kind"];
    }
    if (r.exit_code == c.exit_code && kind == c.kind)
      ++matched;
    else
      misses += " " + c.file + ":" + c.command + "->" + std::to_string(r.exit_code) + "/" + kind;
  }
  return {matched == cases.size(), std::to_string(matched) + "/" + std::to_string(cases.size()) + " rejected as expected" + misses};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "pullback actions", 10, pullback_actions},
      {2, "pullback bundles", 10, pullback_bundles},
      {3, "canonical covers vs joint surjectivity", 30, canonical_covers},
      {4, "subcanonicity", 0, subcanonical},
      {5, "stack conditions", 60, stack_conditions},
      {6, "effectiveness round trip", 0, round_trip},
      {7, "exact counts", 0, exact_counts},
      {8, "pseudofunctor coherence", 0, coherence},
      {9, "negative witnesses", 0, negative_witnesses},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v = {false, std::string("threw: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = c.limit_s == 0 || secs < c.limit_s;
    const bool pass = v.pass && in_time;
    failed += !pass;
    char timing[64];
    if (c.limit_s > 0)
      std::snprintf(timing, sizeof timing, "%.2f s, limit %.0f s", secs, c.limit_s);
    else
      std::snprintf(timing, sizeof timing, "%.2f s", secs);
    std::printf("%s %d %s: %s (%s)\n", pass ? "PASS" : "FAIL", c.id, c.name.c_str(), v.detail.c_str(), timing);
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
