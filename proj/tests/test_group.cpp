#include "helpers.hpp"
#include "oracles.hpp"
#include "qstack/generators.hpp"

using namespace testing;

TEST_SUITE_BEGIN("group");

namespace {

using Rows = std::vector<std::vector<Atom>>;

GAction action_from(const FinGroup& g, std::size_t n, const std::vector<std::vector<Index>>& rows) {
  const FinSet x = FinSet::range(n);
  std::vector<Index> t;
  for (const auto& r : rows) t.insert(t.end(), r.begin(), r.end());
  return check_action(g, x, FinMap(product(g.carrier(), x).apex, x, t)).value();
}

}  // namespace

TEST_CASE("check_group") {
  const auto z2 = check_group(FinSet::range(2), Rows{{"0", "1"}, {"1", "0"}});
  REQUIRE(z2.ok());
  CHECK(z2->order() == 2);
  CHECK(z2->identity_element() == 0);
  CHECK(z2->inverse_of(1) == 1);

  const auto& bad = violation_of(check_group(FinSet::range(2), Rows{{"0", "1"}, {"1", "1"}}));
  CHECK(bad.kind == ViolationKind::NoInverse);
  CHECK(bad.witness == std::vector<std::string>{"1"});

  const auto z3 = check_group(FinSet::range(3), Rows{{"0", "1", "2"}, {"1", "2", "0"}, {"2", "0", "1"}});
  REQUIRE(z3.ok());
  CHECK(z3->order() == 3);
  CHECK(*z3 == cyclic_group(3));

  const auto& na = violation_of(check_group(FinSet::range(3), Rows{{"0", "1", "2"}, {"1", "2", "0"}, {"2", "1", "0"}}));
  CHECK(na.kind == ViolationKind::NotAssociative);
  CHECK(na.witness == std::vector<std::string>{"1", "1", "1"});

  CHECK(violation_of(check_group(FinSet::range(2), Rows{{"0", "0"}, {"0", "0"}})).kind == ViolationKind::NoUnit);
}

TEST_CASE("small groups satisfy the axioms by direct scan") {
  std::vector<std::size_t> orders;
  for (const auto& g : small_groups()) {
    orders.push_back(g.order());
    const std::size_t n = g.order();
    const Index e = g.identity_element();
    for (Index a = 0; a < n; ++a) {
      CHECK(g.multiply(e, a) == a);
      CHECK(g.multiply(a, g.inverse_of(a)) == e);
      for (Index b = 0; b < n; ++b)
        for (Index c = 0; c < n; ++c) CHECK(g.multiply(g.multiply(a, b), c) == g.multiply(a, g.multiply(b, c)));
    }
  }
  CHECK(orders == std::vector<std::size_t>{1, 2, 3, 4, 4, 6, 6});
}

TEST_CASE("check_action") {
  const FinGroup g = z(3);
  const GAction t = trivial_action(g, FinSet::range(4));
  CHECK(t.act() == product(g.carrier(), FinSet::range(4)).proj2);

  const FinSet x = FinSet::range(2);
  const FinMap swap(product(z(2).carrier(), x).apex, x, {0, 1, 1, 0});
  CHECK(check_action(z(2), x, swap).ok());

  const FinMap to_zero(product(z(2).carrier(), x).apex, x, {0, 1, 0, 0});
  const auto& v = violation_of(check_action(z(2), x, to_zero));
  CHECK(v.kind == ViolationKind::AssocFail);
  CHECK(v.witness == std::vector<std::string>{"1", "1", "1"});

  const FinMap no_unit(product(z(2).carrier(), x).apex, x, {0, 0, 0, 0});
  CHECK(violation_of(check_action(z(2), x, no_unit)).kind == ViolationKind::UnitFail);
}

TEST_CASE("check_equivariant") {
  const GAction s = swap_action();
  CHECK(check_equivariant(identity(s.space()), s, s).ok());

  // trivial actions on both sides: every map qualifies
  const GAction a = trivial_action(z(2), FinSet::range(3)), b = trivial_action(z(2), FinSet::range(2));
  std::size_t maps = 0;
  for_each_map(a.space(), b.space(), [&](const FinMap& f) {
    maps += check_equivariant(f, a, b).ok();
    return true;
  });
  CHECK(maps == 8);

  const auto& v = violation_of(check_equivariant(tab(2, 2, {0, 0}), s, s));
  CHECK(v.kind == ViolationKind::EquivarianceFail);
  CHECK(v.witness == std::vector<std::string>{"1", "0"});
}

TEST_CASE("pullback_action") {
  const FinGroup g = z(3);
  const GAction reg = regular_action(g), pt = trivial_action(g, terminal());
  const auto pg = check_equivariant(bang(g.carrier()), reg, pt).value();
  const auto tt = check_equivariant(identity(terminal()), pt, pt).value();

  const PullbackAction unit_leg = pullback_action(pg, tt);
  CHECK(unit_leg.action.space().size() == 3);
  CHECK(morphism_predicates(unit_leg.cert.proj1).iso);
  for (Index a = 0; a < 3; ++a)
    for (Index p = 0; p < 3; ++p) CHECK(unit_leg.cert.proj1(unit_leg.action.apply(a, p)) == g.multiply(a, unit_leg.cert.proj1(p)));

  // P = Z = G over T: the diagonal action on G×G
  const PullbackAction diag = pullback_action(pg, pg);
  REQUIRE(diag.action.space().size() == 9);
  for (Index a = 0; a < 3; ++a)
    for (Index k = 0; k < 9; ++k) {
      const Index img = diag.action.apply(a, k);
      CHECK(diag.cert.proj1(img) == g.multiply(a, diag.cert.proj1(k)));
      CHECK(diag.cert.proj2(img) == g.multiply(a, diag.cert.proj2(k)));
    }

  const GAction t1 = trivial_action(g, FinSet::range(2)), t2 = trivial_action(g, FinSet::range(3)),
                ty = trivial_action(g, FinSet::range(2));
  const auto f1 = check_equivariant(tab(2, 2, {0, 1}), t1, ty).value();
  const auto f2 = check_equivariant(tab(3, 2, {1, 1, 0}), t2, ty).value();
  const PullbackAction triv = pullback_action(f1, f2);
  CHECK(triv.action == trivial_action(g, triv.cert.apex));
}

TEST_CASE("product_action") {
  CHECK(product_action(z(3), terminal()).space().size() == 3);
  CHECK(oracle::count_isos_over(oracle::act_rows(product_action(z(3), terminal())), oracle::act_rows(regular_action(z(3))),
                                {0, 0, 0}, {0, 0, 0}) == 3);

  const GAction pa = product_action(z(2), FinSet::range(2));
  REQUIRE(pa.space().atoms() == std::vector<Atom>{"(0,0)", "(0,1)", "(1,0)", "(1,1)"});
  const std::vector<std::vector<Atom>> expected{{"(0,0)", "(0,1)", "(1,0)", "(1,1)"}, {"(1,0)", "(1,1)", "(0,0)", "(0,1)"}};
  for (Index g = 0; g < 2; ++g)
    for (Index x = 0; x < 4; ++x) CHECK(pa.space()[pa.apply(g, x)] == expected[g][x]);
  CHECK(is_free(pa));

  CHECK(product_action(z(2), FinSet()).space().empty());
}

TEST_CASE("gset_isomorphism_over") {
  const GAction reg = swap_action();
  const auto id = gset_isomorphism_over(reg, reg, bang(reg.space()), bang(reg.space()));
  REQUIRE(id);
  CHECK(check_equivariant(*id, reg, reg).ok());

  const GAction triv = trivial_action(z(2), FinSet::range(2));
  CHECK_FALSE(gset_isomorphism_over(reg, triv, bang(reg.space()), bang(triv.space())));

  // two free orbits {0,2}, {1,3} lying over 0 and 1
  const GAction free4 = action_from(z(2), 4, {{0, 1, 2, 3}, {2, 3, 0, 1}});
  const GAction pa = product_action(z(2), FinSet::range(2));
  const FinMap over = tab(4, 2, {0, 1, 0, 1});
  const Product gu = product(z(2).carrier(), FinSet::range(2));
  const auto h = gset_isomorphism_over(free4, pa, over, gu.proj2);
  REQUIRE(h);
  CHECK(compose(gu.proj2, *h) == over);
  CHECK(check_equivariant(*h, free4, pa).ok());
}

TEST_CASE("property: induced action on pullbacks") {
  std::size_t instances = 0;
  for (std::uint64_t n = 0; instances < 220 && n < 5000; ++n) {
    auto rng = gen::case_rng(21, n);
    const FinGroup g = gen::random_group(rng, 6);
    const GAction y = gen::random_action(rng, g, 2, 5);
    const GAction p = gen::random_action(rng, g, 3, 5), zc = gen::random_action(rng, g, 3, 5);
    const auto f = gen::random_equivariant(rng, p, y), k = gen::random_equivariant(rng, zc, y);
    if (!f || !k) continue;
    const PullbackAction pa = pullback_action(check_equivariant(*f, p, y).value(), check_equivariant(*k, zc, y).value());
    REQUIRE(check_action(g, pa.action.space(), pa.action.act()).ok());
    REQUIRE(check_equivariant(pa.cert.proj1, pa.action, p).ok());
    REQUIRE(check_equivariant(pa.cert.proj2, pa.action, zc).ok());
    ++instances;

    // unique: no other action on a small apex makes both projections equivariant
    const std::size_t cells = g.order() * pa.action.space().size();
    if (cells > 8 || pa.action.space().size() > 4) continue;
    std::size_t found = 0;
    oracle::each_table(cells, pa.action.space().size(), [&](const oracle::Table& t) {
      const FinMap act(pa.action.domain().apex, pa.action.space(), t);
      const auto cand = check_action(g, pa.action.space(), act);
      if (!cand) return;
      if (check_equivariant(pa.cert.proj1, *cand, p).ok() && check_equivariant(pa.cert.proj2, *cand, zc).ok()) {
        ++found;
        CHECK(*cand == pa.action);
      }
    });
    REQUIRE(found == 1);
  }
  CHECK(instances >= 200);
}

TEST_CASE("property: product actions are free with orbits the fibers of proj2") {
  for (const auto& g : small_groups())
    for (std::size_t u = 0; u <= 3; ++u) {
      const GAction pa = product_action(g, FinSet::range(u));
      CHECK(is_free(pa));
      const Product gu = product(g.carrier(), FinSet::range(u));
      const auto orbs = orbits(pa);
      REQUIRE(orbs.size() == u);
      for (const auto& o : orbs) {
        CHECK(o.size() == g.order());
        for (Index x : o) CHECK(gu.proj2(x) == gu.proj2(o.front()));
      }
    }
}

TEST_CASE("property: iso search agrees with permutation search") {
  std::size_t found = 0, missing = 0;
  for (std::uint64_t n = 0; n < 300; ++n) {
    auto rng = gen::case_rng(22, n);
    const FinGroup g = gen::random_group(rng, 4);
    const GAction a = gen::random_action(rng, g, 3, 6);
    GAction b = gen::random_action(rng, g, 3, 6);
    if (gen::uniform(rng, 0, 1) == 0) b = transport_action(a, gen::random_bijection(rng, a.space()));
    if (b.space().size() != a.space().size()) continue;
    const FinSet u = gen::random_set(rng, 1, 2);
    const GAction tu = trivial_action(g, u);
    const auto pa = gen::random_equivariant(rng, a, tu), pb = gen::random_equivariant(rng, b, tu);
    REQUIRE((pa && pb));
    const auto h = gset_isomorphism_over(a, b, *pa, *pb);
    const std::size_t brute =
        oracle::count_isos_over(oracle::act_rows(a), oracle::act_rows(b), oracle::table_of(*pa), oracle::table_of(*pb));
    REQUIRE(h.has_value() == (brute > 0));
    if (h) {
      REQUIRE(check_equivariant(*h, a, b).ok());
      REQUIRE(morphism_predicates(*h).iso);
      REQUIRE(compose(*pb, *h) == *pa);
      ++found;
    } else {
      ++missing;
    }
  }
  CHECK(found > 20);
  CHECK(missing > 20);
}

TEST_SUITE_END();
