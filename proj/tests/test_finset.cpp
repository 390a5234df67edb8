#include "helpers.hpp"
#include "oracles.hpp"
#include "qstack/generators.hpp"

using namespace testing;

TEST_SUITE_BEGIN("finset");

TEST_CASE("compose") {
  const FinMap id2 = identity(FinSet::range(2));
  CHECK(compose(id2, id2) == id2);

  const FinMap f = tab(2, 3, {1, 2});
  const FinMap c = compose(tab(3, 1, {0, 0, 0}), f);
  CHECK(c == tab(2, 1, {0, 0}));

  const FinMap swap = tab(2, 2, {1, 0});
  CHECK(compose(swap, swap) == id2);

  CHECK(error_kind([&] { compose(f, f); }) == ErrorKind::SrcDstMismatch);
}

TEST_CASE("product") {
  const Product p = product(terminal(), FinSet::range(2));
  CHECK(p.apex.size() == 2);
  CHECK(morphism_predicates(p.proj2).iso);

  const Product q = product(FinSet::range(2), FinSet::range(2));
  CHECK(q.apex.atoms() == std::vector<Atom>{"(0,0)", "(0,1)", "(1,0)", "(1,1)"});

  CHECK(product(FinSet(), FinSet::range(3)).apex.empty());
}

TEST_CASE("terminal and bang") {
  CHECK(terminal().atoms() == std::vector<Atom>{"*"});
  const FinMap b = bang(FinSet::range(2));
  CHECK(b.dst() == terminal());
  CHECK(b.table().size() == 2);
  std::size_t maps = 0;
  for_each_map(FinSet::range(2), terminal(), [&](const FinMap&) { return ++maps, true; });
  CHECK(maps == 1);

  CHECK(bang(FinSet()).table().empty());
  CHECK(bang(terminal()) == identity(terminal()));
}

TEST_CASE("coproduct") {
  const Coproduct c = coproduct({FinSet::range(1), FinSet::range(1)});
  CHECK(c.apex.atoms() == std::vector<Atom>{"0·0", "1·0"});
  CHECK(coproduct({}).apex.empty());
  const Coproduct d = coproduct({FinSet::range(2), FinSet::range(3)});
  CHECK(d.apex.size() == 5);
  std::vector<Index> all;
  for (const auto& inj : d.injections) {
    CHECK(is_injective(inj));
    for (Index v : inj.table()) all.push_back(v);
  }
  std::sort(all.begin(), all.end());
  CHECK(all == std::vector<Index>{0, 1, 2, 3, 4});
}

TEST_CASE("pullback") {
  const FinMap c2 = bang(FinSet::range(2));
  CHECK(pullback(c2, c2).apex.size() == 4);

  const FinMap id2 = identity(FinSet::range(2));
  CHECK(pullback(id2, id2).apex.atoms() == std::vector<Atom>{"(0,0)", "(1,1)"});

  const PullbackCert p = pullback(tab(3, 2, {0, 0, 1}), tab(2, 2, {1, 0}));
  CHECK(p.apex.atoms() == std::vector<Atom>{"(0,1)", "(1,1)", "(2,0)"});
  CHECK(compose(p.f, p.proj1) == compose(p.g, p.proj2));

  CHECK(error_kind([] { pullback(tab(1, 2, {0}), tab(1, 3, {0})); }) == ErrorKind::CodomainMismatch);
}

TEST_CASE("mediate_pullback") {
  const PullbackCert p = pullback(tab(3, 2, {0, 0, 1}), tab(2, 2, {1, 0}));
  CHECK(mediate_pullback(p, p.proj1, p.proj2) == identity(p.apex));

  const FinMap c2 = bang(FinSet::range(2));
  const PullbackCert q = pullback(c2, c2);
  const FinMap t = mediate_pullback(q, point(FinSet::range(2), 0), point(FinSet::range(2), 1));
  CHECK(q.apex[t(0)] == "(0,1)");

  CHECK(error_kind([&] { mediate_pullback(p, tab(1, 3, {0}), tab(1, 2, {0})); }) == ErrorKind::SquareNotCommuting);
  CHECK(error_kind([&] { mediate_pullback(p, tab(1, 3, {0}), tab(2, 2, {1, 1})); }) == ErrorKind::SrcMismatch);
}

TEST_CASE("coequalizer") {
  const FinMap g = tab(2, 3, {0, 1});
  const CoequalizerCert same = coequalizer(g, g);
  CHECK(same.quotient.size() == 3);
  CHECK(morphism_predicates(same.proj).iso);

  const CoequalizerCert one = coequalizer(tab(2, 3, {0, 1}), tab(2, 3, {1, 2}));
  CHECK(one.quotient.atoms() == std::vector<Atom>{"0"});

  const FinMap e = tab(0, 3, {});
  CHECK(coequalizer(e, e).quotient == FinSet::range(3));

  CHECK(error_kind([] { coequalizer(tab(2, 3, {0, 1}), tab(1, 3, {0})); }) == ErrorKind::ShapeMismatch);
}

TEST_CASE("mediate_coequalizer") {
  const CoequalizerCert c = coequalizer(tab(1, 3, {0}), tab(1, 3, {1}));
  CHECK(mediate_coequalizer(c, c.proj) == identity(c.quotient));
  const FinMap k = constant(FinSet::range(3), FinSet::range(2), 1);
  CHECK(mediate_coequalizer(c, k) == constant(c.quotient, FinSet::range(2), 1));
  CHECK(error_kind([&] { mediate_coequalizer(c, identity(FinSet::range(3))); }) == ErrorKind::NotCoequalized);
}

TEST_CASE("morphism predicates") {
  const auto swap = morphism_predicates(tab(2, 2, {1, 0}));
  CHECK((swap.mono && swap.epi && swap.iso));
  const auto k = morphism_predicates(tab(2, 2, {0, 0}));
  CHECK_FALSE((k.mono || k.epi || k.iso));
  const auto inc = morphism_predicates(inclusion(FinSet::range(1), FinSet::range(2)));
  CHECK((inc.mono && !inc.epi && !inc.iso));
}

TEST_CASE("colimit_of_diagram") {
  const Colimit one = colimit_of_diagram({{FinSet::range(3)}, {}});
  CHECK(one.apex.size() == 3);
  CHECK(morphism_predicates(one.cocone[0]).iso);

  CHECK(colimit_of_diagram({{FinSet::range(2), FinSet::range(1)}, {}}).apex.size() == 3);

  const FinMap id1 = identity(FinSet::range(1));
  const Colimit span = colimit_of_diagram({{FinSet::range(1), FinSet::range(1), FinSet::range(1)}, {{0, 1, id1}, {0, 2, id1}}});
  CHECK(span.apex.size() == 1);

  CHECK(error_kind([&] { colimit_of_diagram({{FinSet::range(1)}, {{0, 3, id1}}}); }) == ErrorKind::DanglingArrow);
}

TEST_CASE("atom order") {
  CHECK(atom_less("2", "10"));
  CHECK(atom_less("10", "a"));
  CHECK(atom_less("a", "0·0"));
  CHECK(atom_less("1·5", "(0,0)"));
  CHECK(atom_less("(0,2)", "(0,10)"));
  CHECK(FinSet::of({"b", "10", "2"}).atoms() == std::vector<Atom>{"2", "10", "b"});
  CHECK(error_kind([] { FinSet::of({"a", "a"}); }) == ErrorKind::InvalidInput);
}

TEST_CASE("property: composition is associative with identity units") {
  gen::Rng rng(11);
  for (int n = 0; n < 600; ++n) {
    const FinSet a = gen::random_set(rng, 0, 5), b = gen::random_set(rng, 1, 5), c = gen::random_set(rng, 1, 5),
                 d = gen::random_set(rng, 1, 5);
    const FinMap f = gen::random_map(rng, a, b), g = gen::random_map(rng, b, c), h = gen::random_map(rng, c, d);
    const FinMap lhs = compose(compose(h, g), f), rhs = compose(h, compose(g, f));
    REQUIRE(lhs == rhs);
    for (Index x = 0; x < a.size(); ++x) REQUIRE(lhs(x) == h(g(f(x))));
    REQUIRE(compose(identity(b), f) == f);
    REQUIRE(compose(f, identity(a)) == f);
  }
}

TEST_CASE("property: pullback apex and unique mediator") {
  gen::Rng rng(12);
  std::size_t squares = 0;
  for (int n = 0; n < 300; ++n) {
    const FinSet y = gen::random_set(rng, 1, 3);
    const FinMap f = gen::random_map(rng, gen::random_set(rng, 0, 4), y);
    const FinMap g = gen::random_map(rng, gen::random_set(rng, 0, 4), y);
    const PullbackCert p = pullback(f, g);
    const auto pairs = oracle::pullback_pairs(f, g);
    REQUIRE(p.apex.size() == pairs.size());
    for (std::size_t k = 0; k < pairs.size(); ++k) {
      REQUIRE(p.apex[k] == pair_atom(f.src()[pairs[k].first], g.src()[pairs[k].second]));
      REQUIRE(p.proj1(k) == pairs[k].first);
      REQUIRE(p.proj2(k) == pairs[k].second);
    }
    if (p.apex.size() > 4) continue;
    // a commuting square from C, built from a random map into the oracle pairs
    const FinSet c = gen::random_set(rng, 0, 3);
    if (pairs.empty() && !c.empty()) continue;
    const FinMap w = gen::random_map(rng, c, p.apex);
    std::vector<Index> u(c.size()), v(c.size());
    for (Index x = 0; x < c.size(); ++x) std::tie(u[x], v[x]) = pairs[w(x)];
    const FinMap um(c, f.src(), u), vm(c, g.src(), v);
    const FinMap t = mediate_pullback(p, um, vm);
    REQUIRE(compose(p.proj1, t) == um);
    REQUIRE(compose(p.proj2, t) == vm);
    std::size_t fillers = 0;
    for_each_map(c, p.apex, [&](const FinMap& cand) {
      fillers += compose(p.proj1, cand) == um && compose(p.proj2, cand) == vm;
      return true;
    });
    REQUIRE(fillers == 1);
    ++squares;
  }
  CHECK(squares > 100);
}

TEST_CASE("property: coequalizer classes, epi and unique filler") {
  gen::Rng rng(13);
  for (int n = 0; n < 300; ++n) {
    const FinSet k = gen::random_set(rng, 0, 4), d = gen::random_set(rng, 1, 4);
    const FinMap g1 = gen::random_map(rng, k, d), g2 = gen::random_map(rng, k, d);
    const CoequalizerCert c = coequalizer(g1, g2);
    REQUIRE(c.quotient.size() == oracle::class_count(g1, g2));
    REQUIRE(is_surjective(c.proj));
    REQUIRE(compose(c.proj, g1) == compose(c.proj, g2));
    const auto labels = oracle::closure_labels(g1, g2);
    for (Index a = 0; a < d.size(); ++a)
      for (Index b = 0; b < d.size(); ++b) REQUIRE((labels[a] == labels[b]) == (c.proj(a) == c.proj(b)));

    // any map constant on classes factors uniquely
    const FinSet e = gen::random_set(rng, 1, 3);
    std::vector<Index> on_class(d.size());
    for (auto& v : on_class) v = static_cast<Index>(gen::uniform(rng, 0, e.size() - 1));
    std::vector<Index> dt(d.size());
    for (Index a = 0; a < d.size(); ++a) dt[a] = on_class[labels[a]];
    const FinMap dm(d, e, dt);
    const FinMap m = mediate_coequalizer(c, dm);
    REQUIRE(compose(m, c.proj) == dm);
    std::size_t fillers = 0;
    for_each_map(c.quotient, e, [&](const FinMap& cand) {
      fillers += compose(cand, c.proj) == dm;
      return true;
    });
    REQUIRE(fillers == 1);
  }
}

TEST_CASE("property: colimit with a terminal cocone object") {
  gen::Rng rng(14);
  for (int n = 0; n < 100; ++n) {
    Diagram d;
    d.objects.push_back(gen::random_set(rng, 0, 4));
    const std::size_t legs = gen::uniform(rng, 0, 3);
    for (std::size_t i = 0; i < legs; ++i) {
      d.objects.push_back(gen::random_set(rng, 0, 3));
      if (d.objects[0].empty() && !d.objects.back().empty()) d.objects.back() = FinSet();
      d.arrows.push_back({i + 1, 0, gen::random_map(rng, d.objects.back(), d.objects[0])});
    }
    const Colimit c = colimit_of_diagram(d);
    REQUIRE(morphism_predicates(c.cocone[0]).iso);
    for (const auto& a : d.arrows) REQUIRE(compose(c.cocone[a.to], a.map) == c.cocone[a.from]);
  }
}

TEST_CASE("property: maps over a target are the filtered maps") {
  for (std::uint64_t n = 0; n < 200; ++n) {
    auto rng = gen::case_rng(15, n);
    const FinSet y = gen::random_set(rng, 0, 3);
    const FinMap p = gen::random_map(rng, y.empty() ? FinSet() : gen::random_set(rng, 0, 4), y);
    const FinMap q = gen::random_map(rng, y.empty() ? FinSet() : gen::random_set(rng, 0, 4), y);
    std::vector<FinMap> fast, slow;
    for_each_map_over(p, q, [&](const FinMap& m) { return fast.push_back(m), true; });
    for_each_map(p.src(), q.src(), [&](const FinMap& m) {
      if (compose(q, m) == p) slow.push_back(m);
      return true;
    });
    REQUIRE(fast == slow);
  }
  CHECK(error_kind([] { for_each_map_over(tab(1, 2, {0}), tab(1, 3, {0}), [](const FinMap&) { return true; }); }) ==
        ErrorKind::TargetMismatch);
}

TEST_SUITE_END();
