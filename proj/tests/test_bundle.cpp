#include "helpers.hpp"
#include "oracles.hpp"
#include "qstack/generators.hpp"

using namespace testing;

TEST_SUITE_BEGIN("bundle");

namespace {

EquivariantMap over_base(const GAction& total, const FinMap& proj) {
  return check_equivariant(proj, total, base_action(total.group(), proj.dst())).value();
}

GAction fiberwise_swap() {
  // Z/2 on {0,1,2,3}: swaps 0<->1 and 2<->3
  const FinSet x = FinSet::range(4);
  return check_action(z(2), x, FinMap(product(z(2).carrier(), x).apex, x, {0, 1, 2, 3, 1, 0, 3, 2})).value();
}

}  // namespace

TEST_CASE("is_locally_trivial") {
  const Bundle triv = trivial_bundle(z(2), FinSet::range(2));
  const auto cert = is_locally_trivial(triv.proj(), identity_cover(FinSet::range(2)));
  REQUIRE(cert.ok());
  REQUIRE(cert->legs.size() == 1);
  CHECK(cert->legs[0].model == product_action(z(2), FinSet::range(2)));
  CHECK(check_equivariant(cert->legs[0].iso, cert->legs[0].restricted.action, cert->legs[0].model).ok());

  const GAction lonely = trivial_action(z(2), FinSet::range(1));
  const auto& v = violation_of(is_locally_trivial(over_base(lonely, bang(lonely.space())), identity_cover(terminal())));
  CHECK(v.kind == ViolationKind::NotTrivial);
  CHECK(v.witness == std::vector<std::string>{"0"});

  const GAction sw = fiberwise_swap();
  const auto ok = is_locally_trivial(over_base(sw, tab(4, 2, {0, 0, 1, 1})), point_cover(FinSet::range(2)));
  REQUIRE(ok.ok());
  CHECK(ok->legs.size() == 2);

  const CoveringFamily partial = make_family(FinSet::range(2), {point(FinSet::range(2), 0)});
  CHECK(error_kind([&] { is_locally_trivial(over_base(sw, tab(4, 2, {0, 0, 1, 1})), partial); }) ==
        ErrorKind::CoverNotInTopology);
  CHECK(error_kind([&] { is_locally_trivial(triv.proj(), identity_cover(FinSet::range(3))); }) ==
        ErrorKind::TargetMismatch);
}

TEST_CASE("is_principal_bundle") {
  const Bundle triv = trivial_bundle(z(3), FinSet::range(2));
  CHECK(is_principal_bundle(triv.proj()).ok());
  const GAction reg = regular_action(z(3));
  CHECK(is_principal_bundle(reg, bang(reg.space())).ok());

  const FinSet three = FinSet::range(3);
  const GAction partial =
      check_action(z(2), three, FinMap(product(z(2).carrier(), three).apex, three, {0, 1, 2, 1, 0, 2})).value();
  const auto& v = violation_of(is_principal_bundle(partial, bang(three)));
  CHECK(v.kind == ViolationKind::NotBundle);
  CHECK(v.witness == std::vector<std::string>{"*", "not free"});

  const GAction sw = fiberwise_swap();
  CHECK(violation_of(is_principal_bundle(sw, bang(sw.space()))).witness ==
        std::vector<std::string>{"*", "not transitive"});
  CHECK(violation_of(is_principal_bundle(regular_action(z(2)), tab(2, 2, {0, 0}))).witness ==
        std::vector<std::string>{"1", "wrong size"});
}

TEST_CASE("pullback_bundle") {
  const FinSet y = FinSet::range(3);
  gen::Rng rng(41);
  const Bundle b = gen::random_bundle(rng, z(2), y);
  const Bundle same = pullback_bundle(b, identity(y));
  CHECK(same.base() == y);
  CHECK(bundle_isomorphism(same, b).has_value());

  const Bundle triv = trivial_bundle(z(3), y);
  const Bundle pulled = pullback_bundle(triv, tab(4, 3, {2, 2, 0, 1}));
  CHECK(pulled.total_space().size() == 12);
  CHECK(bundle_isomorphism(pulled, trivial_bundle(z(3), FinSet::range(4))).has_value());

  const Bundle empty = pullback_bundle(triv, tab(0, 3, {}));
  CHECK(empty.total_space().empty());
  CHECK(empty.base().empty());

  CHECK(error_kind([&] { pullback_bundle(triv, tab(1, 2, {0})); }) == ErrorKind::BaseMismatch);
}

TEST_CASE("check_bundle_morphism") {
  const Bundle triv = trivial_bundle(z(2), FinSet::range(2));
  CHECK(check_bundle_morphism(triv, triv, identity(triv.total_space())).ok());

  // gauge by 0 at base point 0 and 1 at base point 1
  const FinMap gauge = endo(triv.total_space(), {0, 3, 2, 1});
  CHECK(check_bundle_morphism(triv, triv, gauge).ok());

  const FinMap flip = endo(triv.total_space(), {1, 0, 3, 2});
  const auto& v = violation_of(check_bundle_morphism(triv, triv, flip));
  CHECK(v.kind == ViolationKind::TriangleFail);
  CHECK(v.witness == std::vector<std::string>{"(0,0)"});

  const FinMap squash = endo(triv.total_space(), {0, 1, 0, 1});
  CHECK(violation_of(check_bundle_morphism(triv, triv, squash)).kind == ViolationKind::EquivarianceFail);
}

TEST_CASE("enumerate_bundle_morphisms") {
  const Bundle t2 = trivial_bundle(z(2), FinSet::range(2));
  CHECK(enumerate_bundle_morphisms(t2, t2).size() == 4);
  CHECK(oracle::count_endos_over(oracle::act_rows(t2.total()), oracle::table_of(t2.proj().map())) == 4);

  const Bundle t3 = trivial_bundle(z(3), terminal());
  CHECK(enumerate_bundle_morphisms(t3, t3).size() == 3);
  CHECK(oracle::count_endos_over(oracle::act_rows(t3.total()), oracle::table_of(t3.proj().map())) == 3);

  CHECK(error_kind([&] { enumerate_bundle_morphisms(t2, trivial_bundle(z(2), terminal())); }) == ErrorKind::BaseMismatch);
  CHECK(error_kind([&] { enumerate_bundle_morphisms(t2, t2, 10); }) == ErrorKind::BoundExceeded);
}

TEST_CASE("property: pullback bundles are principal") {
  for (std::uint64_t n = 0; n < 250; ++n) {
    auto rng = gen::case_rng(42, n);
    const FinGroup g = gen::random_group(rng, 4);
    const Bundle b = gen::random_bundle(rng, g, gen::random_set(rng, 0, 4));
    const FinSet zs = b.base().empty() ? FinSet() : gen::random_set(rng, 0, 4);
    const FinMap f = gen::random_map(rng, zs, b.base());
    const Bundle p = pullback_bundle(b, f);
    REQUIRE(is_principal_bundle(p.proj()).ok());
    REQUIRE(p.trivialization().has_value());
    REQUIRE(p.base() == zs);
    REQUIRE(oracle::fiberwise_torsor(oracle::act_rows(p.total()), oracle::table_of(p.proj().map()), zs.size()));
  }
}

TEST_CASE("property: torsor test agrees with local triviality, exhaustively on small instances") {
  std::size_t instances = 0, bundles = 0;
  for (const auto& g : small_groups()) {
    if (g.order() > 3) continue;
    for (std::size_t np = 0; np <= (g.order() <= 2 ? 4u : 3u); ++np) {
      const FinSet p = FinSet::range(np);
      const Product dom = product(g.carrier(), p);
      oracle::each_table(dom.apex.size(), np, [&](const oracle::Table& t) {
        const auto act = check_action(g, p, FinMap(dom.apex, p, t));
        if (!act) return;
        const auto rows = oracle::act_rows(*act);
        for (std::size_t nx = 0; nx <= 3; ++nx) {
          const GAction base = base_action(g, FinSet::range(nx));
          for_each_map(p, base.space(), [&](const FinMap& pr) {
            const auto e = check_equivariant(pr, *act, base);
            if (!e) return true;
            const bool torsor = !torsor_violation(*e).has_value();
            const bool local = is_locally_trivial(*e, point_cover(base.space())).ok();
            REQUIRE(torsor == local);
            REQUIRE(torsor == oracle::fiberwise_torsor(rows, oracle::table_of(pr), nx));
            REQUIRE(torsor == is_principal_bundle(*e).ok());
            if (torsor) REQUIRE(is_principal_bundle(*e, identity_cover(base.space())).ok());
            ++instances;
            bundles += torsor;
            return true;
          });
        }
      });
    }
  }
  CHECK(instances > 600);
  CHECK(bundles > 20);
}

TEST_CASE("property: bundle morphisms are isos") {
  std::size_t morphisms = 0;
  for (const auto& g : small_groups()) {
    if (g.order() > 3) continue;
    for (std::size_t nx = 0; nx <= 2; ++nx) {
      const auto all = enumerate_principal_bundles(g, FinSet::range(nx));
      for (const auto& a : all)
        for (const auto& b : all)
          for (const auto& m : enumerate_bundle_morphisms(a, b)) {
            REQUIRE(morphism_predicates(m.map().map()).iso);
            ++morphisms;
          }
    }
  }
  CHECK(morphisms > 50);
}

TEST_CASE("property: every principal bundle is trivial") {
  for (const auto& g : small_groups()) {
    if (g.order() > 4) continue;
    for (std::size_t nx = 0; nx <= 3; ++nx) {
      const FinSet x = FinSet::range(nx);
      const Bundle triv = trivial_bundle(g, x);
      const auto all = enumerate_principal_bundles(g, x);
      std::size_t expected = 1;
      for (std::size_t k = 2; k < g.order(); ++k) expected *= k;
      std::size_t power = 1;
      for (std::size_t i = 0; i < nx; ++i) power *= expected;
      REQUIRE(all.size() == power);
      for (const auto& b : all) {
        const auto h = bundle_isomorphism(b, triv);
        REQUIRE(h);
        REQUIRE(check_bundle_morphism(b, triv, *h).ok());
        if (b.total_space().size() <= 6)
          REQUIRE(oracle::count_isos_over(oracle::act_rows(b.total()), oracle::act_rows(triv.total()),
                                          oracle::table_of(b.proj().map()), oracle::table_of(triv.proj().map())) > 0);
      }
    }
  }
}

TEST_SUITE_END();
