#include "qstack/cli.hpp"

#include <chrono>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "json.hpp"
#include "qstack/site_file.hpp"

namespace qstack::cli {

using json = nlohmann::ordered_json;

namespace {

json witness_json(const Violation& v) {
  return json{{"kind", to_string(v.kind)}, {"atoms", v.witness}, {"detail", v.detail}};
}

struct Entry {
  std::string name;
  std::string kind;
  bool passed = true;
  std::optional<Violation> witness;
  json details = json::object();
};

class Session {
 public:
  Session(const site::SiteFile& s, const RunOptions& o) : site_(s), opt_(o) {}

  std::vector<Entry> entries;

  void pass(const site::Decl& d, json details = json::object()) {
    entries.push_back({d.name, d.kind, true, std::nullopt, std::move(details)});
  }
  void fail(const site::Decl& d, Violation v, json details = json::object()) {
    entries.push_back({d.name, d.kind, false, std::move(v), std::move(details)});
  }

  void require_some(std::initializer_list<std::string_view> kinds) {
    for (auto k : kinds)
      if (!site_.decls(k).empty()) return;
    std::string names;
    for (auto k : kinds) names += (names.empty() ? "" : " or ") + std::string(k);
    throw Error(ErrorKind::InvalidInput, "site file declares no " + names);
  }

  void check_group() {
    require_some({"group"});
    for (const auto* d : site_.decls("group")) {
      const auto& g = site_.group(d->name);
      if (!g) {
        fail(*d, g.violation());
        continue;
      }
      bool abelian = true;
      for (Index a = 0; a < g->order(); ++a)
        for (Index b = 0; b < g->order(); ++b) abelian = abelian && g->multiply(a, b) == g->multiply(b, a);
      pass(*d, {{"order", g->order()}, {"identity", g->carrier()[g->identity_element()]}, {"abelian", abelian}});
    }
  }

  void check_action() {
    require_some({"action", "equivariant"});
    for (const auto* d : site_.decls("action")) {
      const auto& a = site_.action(d->name);
      if (!a) fail(*d, a.violation());
      else pass(*d, {{"space", a->space().size()}, {"orbits", orbits(*a).size()}, {"free", is_free(*a)}});
    }
    for (const auto* d : site_.decls("equivariant")) {
      const auto& e = site_.equivariant(d->name);
      if (!e) fail(*d, e.violation());
      else pass(*d);
    }
  }

  void check_bundle() {
    require_some({"bundle"});
    for (const auto* d : site_.decls("bundle")) {
      const auto& b = site_.bundle(d->name);
      if (!b) {
        fail(*d, b.violation());
        continue;
      }
      pass(*d, {{"base", b->base().size()},
                {"total", b->total_space().size()},
                {"trivializing_legs", b->trivialization() ? b->trivialization()->legs.size() : 0}});
    }
  }

  static std::vector<Atom> uncovered(const CoveringFamily& c) {
    std::vector<char> hit(c.target.size(), 0);
    for (const auto& f : c.legs)
      for (Index v : f.table()) hit[v] = 1;
    std::vector<Atom> out;
    for (Index y = 0; y < c.target.size(); ++y)
      if (!hit[y]) out.push_back(c.target[y]);
    return out;
  }

  void check_cover() {
    require_some({"cover"});
    for (const auto* d : site_.decls("cover")) {
      const CoveringFamily& c = site_.cover(d->name);
      UniversalityOptions u;
      u.seed = opt_.seed;
      const bool canonical = is_canonical_cover(c, u);
      const bool colim = is_colim_sieve(GeneratedSieve{c});
      json details{{"legs", c.legs.size()}, {"canonical", canonical}, {"colim_sieve", colim}};
      if (canonical) pass(*d, std::move(details));
      else fail(*d, Violation{ViolationKind::NotCanonicalCover, uncovered(c), "legs miss these points"}, std::move(details));
    }
  }

  void check_sheaf() {
    require_some({"cover"});
    std::vector<std::pair<std::string, FinSet>> targets;
    for (std::size_t k = 0; k <= opt_.bound; ++k) targets.emplace_back("range(" + std::to_string(k) + ")", FinSet::range(k));
    for (const auto* s : site_.decls("set")) targets.emplace_back(s->name, site_.set(s->name));
    for (const auto* d : site_.decls("cover")) {
      const CoveringFamily& c = site_.cover(d->name);
      json checked = json::array();
      std::optional<Violation> bad;
      for (const auto& [label, a] : targets) {
        const bool ok = check_sheaf_condition(c, a);
        checked.push_back({{"A", label}, {"size", a.size()}, {"sheaf", ok}});
        if (!ok && !bad)
          bad = Violation{ViolationKind::NotSheaf, {d->name, label}, "matching families do not glue uniquely"};
      }
      json details{{"canonical", is_canonical_cover(c)}, {"targets", std::move(checked)}};
      if (bad) fail(*d, *bad, std::move(details));
      else pass(*d, std::move(details));
    }
  }

  void glue_morphisms_cmd() {
    require_some({"gluing"});
    for (const auto* d : site_.decls("gluing")) {
      const auto& g = site_.gluing(d->name);
      if (!g) {
        fail(*d, g.violation());
        continue;
      }
      if (!is_canonical_cover(g->cover)) {
        fail(*d, Violation{ViolationKind::NotCanonicalCover, uncovered(g->cover), "gluing needs a canonical cover"});
        continue;
      }
      std::vector<QSMorphism> locals;
      std::optional<Violation> bad;
      for (std::size_t i = 0; i < g->locals.size() && !bad; ++i) {
        auto m = check_qs_morphism(restrict(g->src, g->cover.legs[i]), restrict(g->dst, g->cover.legs[i]), g->locals[i]);
        if (!m) {
          bad = m.violation();
          bad->detail = "local " + std::to_string(i) + ": " + bad->detail;
        } else {
          locals.push_back(std::move(m).value());
        }
      }
      if (bad) {
        fail(*d, *bad);
        continue;
      }
      auto eta = glue_morphisms(g->cover, g->src, g->dst, locals);
      if (!eta) {
        fail(*d, eta.violation());
        continue;
      }
      json images = json::object();
      for (Index p = 0; p < eta->map().src().size(); ++p) images[eta->map().src()[p]] = eta->map().dst()[eta->map()(p)];
      pass(*d, {{"glued", std::move(images)}, {"iso", is_iso(*eta)}});
    }
  }

  void glue_object_cmd() {
    require_some({"datum"});
    for (const auto* d : site_.decls("datum")) {
      const auto& dat = site_.datum(d->name);
      if (!dat) {
        fail(*d, dat.violation());
        continue;
      }
      if (!is_canonical_cover(dat->cover)) {
        fail(*d, Violation{ViolationKind::NotCanonicalCover, uncovered(dat->cover), "gluing needs a canonical cover"});
        continue;
      }
      if (auto c = check_cocycle(*dat); !c) {
        fail(*d, c.violation());
        continue;
      }
      const GluingResult r = glue_object(*dat);
      json psi = json::array();
      for (const auto& m : r.comparison_isos) psi.push_back({{"size", m.map().src().size()}, {"iso", is_iso(m)}});
      pass(*d, {{"base", r.glued.base().size()},
                {"total", r.glued.total_space().size()},
                {"total_atoms", r.glued.total_space().atoms()},
                {"comparison_isos", std::move(psi)},
                {"compatibility_squares", r.compatibility_squares}});
    }
  }

  static json tally_json(const ConditionTally& t) {
    return {{"checked", t.checked}, {"passed", t.passed}, {"counterexamples", t.counterexamples}};
  }

  void verify_stack_cmd() {
    require_some({"stack"});
    for (const auto* d : site_.decls("stack")) {
      const auto& st = site_.stack(d->name);
      if (!st) {
        fail(*d, st.violation());
        continue;
      }
      std::vector<StackCase> corpus = exhaustive_corpus(*st, opt_.bound, opt_.seed);
      const std::size_t exhaustive = corpus.size();
      if (!st->x_action.space().empty()) {
        auto extra = random_corpus(*st, opt_.budget, std::max<std::size_t>(opt_.bound, 4), opt_.seed);
        corpus.insert(corpus.end(), extra.begin(), extra.end());
      }
      std::vector<DatumCase> data;
      for (const auto* dd : site_.decls("datum")) {
        if (site_.datum_stack(dd->name) != d->name) continue;
        const auto& dat = site_.datum(dd->name);
        if (dat) data.push_back({dd->name, *dat});
      }
      VerifyOptions vo;
      vo.parallel = opt_.parallel;
      const StackReport rep = verify_stack(*st, corpus, data, vo);
      json details{{"group_order", st->group.order()},
                   {"x_size", st->x_action.space().size()},
                   {"exhaustive_cases", exhaustive},
                   {"random_cases", corpus.size() - exhaustive},
                   {"declared_data", data.size()},
                   {"effectiveness", tally_json(rep.effectiveness)},
                   {"morphism_gluing", tally_json(rep.morphism_gluing)},
                   {"uniqueness", tally_json(rep.uniqueness)},
                   {"rejected_inputs", rep.rejections}};
      if (rep.all_pass()) {
        pass(*d, std::move(details));
      } else {
        std::string first;
        for (const auto* t : {&rep.effectiveness, &rep.morphism_gluing, &rep.uniqueness})
          if (!t->counterexamples.empty() && first.empty()) first = t->counterexamples.front();
        fail(*d, Violation{ViolationKind::Mismatch, {d->name}, "stack condition failed: " + first}, std::move(details));
      }
    }
  }

  void classify_cmd() {
    require_some({"group"});
    for (const auto* d : site_.decls("group")) {
      const FinGroup& g = *site_.group(d->name);
      json bases = json::array();
      std::optional<Violation> bad;
      std::optional<std::size_t> bounded_at;
      for (std::size_t n = 0; n <= opt_.bound && !bounded_at; ++n) {
        try {
          const ClassifyingReport r = classifying_fiber_equiv(g, FinSet::range(n));
          bases.push_back({{"base", n},
                           {"bundles", r.bundle_objects},
                           {"stack_objects", r.stack_objects},
                           {"iso_classes", r.bundle_iso_classes},
                           {"stack_iso_classes", r.stack_iso_classes},
                           {"aut_trivial", r.bundle_aut_trivial},
                           {"stack_aut_trivial", r.stack_aut_trivial},
                           {"hom_pairs_checked", r.hom_pairs_checked},
                           {"consistent", r.consistent()}});
          if (!bad && (!r.consistent() || r.bundle_iso_classes != 1))
            bad = Violation{ViolationKind::Mismatch, {d->name, std::to_string(n)},
                            "classifying fiber differs from principal bundles"};
        } catch (const Error& e) {
          if (e.kind() != ErrorKind::BoundExceeded) throw;
          bounded_at = n;
        }
      }
      json details{{"order", g.order()}, {"bases", std::move(bases)}};
      if (bounded_at) details["enumeration_bounded_at"] = *bounded_at;
      if (bad) fail(*d, *bad, std::move(details));
      else pass(*d, std::move(details));
    }
  }

 private:
  const site::SiteFile& site_;
  RunOptions opt_;
};

using Handler = void (Session::*)();

const std::map<std::string, Handler>& handlers() {
  static const std::map<std::string, Handler> h = {
      {"check-group", &Session::check_group},       {"check-action", &Session::check_action},
      {"check-bundle", &Session::check_bundle},     {"check-cover", &Session::check_cover},
      {"check-sheaf", &Session::check_sheaf},       {"glue-morphisms", &Session::glue_morphisms_cmd},
      {"glue-object", &Session::glue_object_cmd},   {"verify-stack", &Session::verify_stack_cmd},
      {"classify", &Session::classify_cmd},
  };
  return h;
}

RunResult execute(const std::string& command, const std::function<site::SiteFile(const site::LoadOptions&)>& load,
                  const RunOptions& options, const std::string& source) {
  const auto start = std::chrono::steady_clock::now();
  json report;
  report["schema"] = kReportSchema;
  report["schema_version"] = kReportSchemaVersion;
  report["command"] = command;
  report["site"] = source;
  report["options"] = {{"seed", options.seed}, {"budget", options.budget}, {"bound", options.bound}};

  RunResult result;
  std::ostringstream text;
  json checks = json::array();
  json error = nullptr;

  try {
    auto it = handlers().find(command);
    if (it == handlers().end()) throw Error(ErrorKind::UnknownCommand, "unknown command '" + command + "'");
    site::LoadOptions lo;
    lo.defer_group_checks = command == "check-group";
    const site::SiteFile site = load(lo);
    Session session(site, options);
    (session.*(it->second))();

    std::size_t passed = 0;
    for (const auto& e : session.entries) {
      json c{{"name", e.name}, {"kind", e.kind}, {"status", e.passed ? "pass" : "fail"}};
      c["witness"] = e.witness ? witness_json(*e.witness) : json(nullptr);
      c["details"] = e.details;
      checks.push_back(std::move(c));
      if (e.passed) {
        ++passed;
        text << "PASS " << e.kind << " " << e.name << "\n";
      } else {
        text << "FAIL " << e.kind << " " << e.name << ": " << e.witness->describe() << "\n";
      }
    }
    const std::size_t failed = session.entries.size() - passed;
    text << command << ": " << passed << " passed, " << failed << " failed\n";
    result.exit_code = failed ? 1 : 0;
  } catch (const site::SiteError& e) {
    error = {{"kind", to_string(e.kind())},
             {"message", e.what()},
             {"line", e.location().line},
             {"column", e.location().column},
             {"declaration", e.declaration()}};
    error["witness"] = e.violation() ? witness_json(*e.violation()) : json(nullptr);
    text << "ERROR " << e.what() << "\n";
    result.exit_code = 2;
  } catch (const Error& e) {
    error = {{"kind", to_string(e.kind())}, {"message", e.what()}, {"line", nullptr}, {"column", nullptr},
             {"declaration", nullptr}, {"witness", nullptr}};
    text << "ERROR " << e.what() << "\n";
    result.exit_code = 2;
  }

  report["status"] = result.exit_code == 0 ? "pass" : result.exit_code == 1 ? "fail" : "error";
  report["exit_code"] = result.exit_code;
  report["checks"] = std::move(checks);
  report["error"] = std::move(error);
  const auto ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  report["timing"] = {{"elapsed_ms", ms}};
  result.text = text.str();
  result.report = report.dump(2) + "\n";
  return result;
}

}  // namespace

const std::vector<std::string>& commands() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& [k, h] : handlers()) v.push_back(k);
    return v;
  }();
  return names;
}

RunResult run(const std::string& command, const std::string& site_path, const RunOptions& options) {
  return execute(
      command, [&](const site::LoadOptions& lo) { return site::SiteFile::load_file(site_path, lo); }, options,
      site_path);
}

RunResult run_text(const std::string& command, std::string_view site_text, const RunOptions& options,
                   const std::string& source) {
  return execute(
      command, [&](const site::LoadOptions& lo) { return site::SiteFile::load_text(site_text, lo); }, options,
      source);
}

}  // namespace qstack::cli
