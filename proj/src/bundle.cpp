#include "qstack/bundle.hpp"

#include <algorithm>
#include <numeric>

namespace qstack {

class BundleFactory {
 public:
  static Bundle make(EquivariantMap proj, std::optional<Trivialization> triv) {
    return Bundle(std::move(proj), std::move(triv));
  }
};

GAction base_action(const FinGroup& group, const FinSet& base) { return trivial_action(group, base); }

EquivariantMap trivially_equivariant(const FinGroup& group, const FinMap& f) {
  return check_equivariant(f, base_action(group, f.src()), base_action(group, f.dst())).value();
}

namespace {

bool is_trivial_action(const GAction& a) { return a.act() == a.domain().proj2; }

void require_bundle_shape(const EquivariantMap& proj) {
  if (!is_trivial_action(proj.dst()))
    throw Error(ErrorKind::InvalidInput, "the base of a bundle must carry the trivial action");
}

Outcome<LegTrivialization> trivialize_leg(const EquivariantMap& proj, const FinMap& leg) {
  const FinGroup& G = proj.src().group();
  PullbackAction restricted = pullback_action(proj, trivially_equivariant(G, leg));
  GAction model = product_action(G, leg.src());
  const Product gu = product(G.carrier(), leg.src());
  auto iso = gset_isomorphism_over(restricted.action, model, restricted.cert.proj2, gu.proj2);
  if (!iso) return Violation{ViolationKind::NotTrivial, {}, "no equivariant iso onto G×U over U"};
  return LegTrivialization{std::move(restricted), std::move(model), std::move(*iso)};
}

}  // namespace

Outcome<Trivialization> is_locally_trivial(const EquivariantMap& proj, const CoveringFamily& cover) {
  require_bundle_shape(proj);
  if (!(cover.target == proj.map().dst()))
    throw Error(ErrorKind::TargetMismatch, "cover is not a cover of the bundle's base");
  if (!is_canonical_cover(cover)) throw Error(ErrorKind::CoverNotInTopology, "cover is not jointly surjective");
  Trivialization triv{cover, {}};
  triv.legs.reserve(cover.legs.size());
  for (std::size_t i = 0; i < cover.legs.size(); ++i) {
    auto leg = trivialize_leg(proj, cover.legs[i]);
    if (!leg) return Violation{ViolationKind::NotTrivial, {std::to_string(i)}, leg.violation().detail};
    triv.legs.push_back(std::move(leg).value());
  }
  return triv;
}

std::optional<Violation> torsor_violation(const EquivariantMap& proj) {
  const GAction& p = proj.src();
  const FinMap& pi = proj.map();
  const FinSet& base = pi.dst();
  const Index e = p.group().identity_element();
  std::vector<std::size_t> fiber_size(base.size(), 0);
  for (Index v : pi.table()) ++fiber_size[v];

  std::vector<char> reported(base.size(), 0);
  auto fail = [&](Index x, const char* reason) {
    return Violation{ViolationKind::NotBundle, {base[x], reason}, "fiber is not a G-torsor"};
  };
  std::optional<Violation> first;
  auto consider = [&](Index x, const char* reason) {
    // Keep the violation at the least base atom.
    if (!first || x < base.index_of(first->witness[0])) first = fail(x, reason);
  };
  for (Index q = 0; q < pi.src().size(); ++q) {
    const Index x = pi(q);
    if (reported[x]) continue;
    for (Index g = 0; g < p.group().order(); ++g)
      if (g != e && p.apply(g, q) == q) {
        reported[x] = 1;
        consider(x, "not free");
        break;
      }
  }
  for (Index q = 0; q < pi.src().size(); ++q) {
    const Index x = pi(q);
    if (reported[x]) continue;
    // Free orbits have |G| elements; a larger fiber holds several.
    if (fiber_size[x] != p.group().order()) {
      reported[x] = 1;
      consider(x, "not transitive");
    }
  }
  for (Index x = 0; x < base.size(); ++x)
    if (!reported[x] && fiber_size[x] != p.group().order()) consider(x, "wrong size");
  return first;
}

Outcome<Bundle> is_principal_bundle(const EquivariantMap& proj, const CoveringFamily& cover) {
  auto triv = is_locally_trivial(proj, cover);
  if (!triv) return triv.violation();
  return BundleFactory::make(proj, std::move(triv).value());
}

Outcome<Bundle> is_principal_bundle(const EquivariantMap& proj) {
  require_bundle_shape(proj);
  const FinSet& base = proj.map().dst();
  const std::optional<Violation> torsor = torsor_violation(proj);
  auto triv = is_locally_trivial(proj, point_cover(base));
  if (triv.ok() == torsor.has_value())
    throw Error(ErrorKind::InvalidInput, "internal: torsor test and local triviality disagree");
  if (!triv) return *torsor;
  return BundleFactory::make(proj, std::move(triv).value());
}

Outcome<Bundle> is_principal_bundle(const GAction& total, const FinMap& proj) {
  auto eq = check_equivariant(proj, total, base_action(total.group(), proj.dst()));
  if (!eq) return eq.violation();
  return is_principal_bundle(eq.value());
}

Bundle pullback_bundle(const Bundle& bundle, const FinMap& f) {
  if (!(f.dst() == bundle.base())) throw Error(ErrorKind::BaseMismatch, "pullback along a map into another base");
  const FinGroup& G = bundle.group();
  const PullbackAction pa = pullback_action(bundle.proj(), trivially_equivariant(G, f));
  EquivariantMap proj = check_equivariant(pa.cert.proj2, pa.action, base_action(G, f.src())).value();

  if (!bundle.trivialization()) return is_principal_bundle(proj).value();

  // Carry each leg V_i -> Y of the old cover to V_i ×_Y Z -> Z. The new
  // iso sends ((p,z),(v,z)) to (pr1 α_i(p,v), (v,z)).
  const Trivialization& old = *bundle.trivialization();
  Trivialization triv{pullback_family(old.cover, f), {}};
  for (std::size_t i = 0; i < old.legs.size(); ++i) {
    const LegTrivialization& leg = old.legs[i];
    const PullbackCert over = pullback(old.cover.legs[i], f);  // V_i ×_Y Z
    const FinMap& new_leg = triv.cover.legs[i];
    PullbackAction restricted = pullback_action(proj, trivially_equivariant(G, new_leg));
    const FinMap& r = restricted.cert.proj1;
    const FinMap& l = restricted.cert.proj2;
    const FinMap q = mediate_pullback(leg.restricted.cert, compose(pa.cert.proj1, r), compose(over.proj1, l));
    const Product g_old = product(G.carrier(), old.cover.legs[i].src());
    const Product g_new = product(G.carrier(), new_leg.src());
    const FinMap iso = pairing(g_new, compose(g_old.proj1, compose(leg.iso, q)), l);
    GAction model = product_action(G, new_leg.src());
    if (!morphism_predicates(iso).iso || !check_equivariant(iso, restricted.action, model).ok() ||
        !(compose(g_new.proj2, iso) == l))
      throw Error(ErrorKind::InvalidInput, "internal: transported trivialization is not an equivariant iso");
    triv.legs.push_back({std::move(restricted), std::move(model), iso});
  }
  return BundleFactory::make(std::move(proj), std::move(triv));
}

Bundle trivial_bundle(const FinGroup& group, const FinSet& base) {
  const GAction total = product_action(group, base);
  const Product gx = product(group.carrier(), base);
  return is_principal_bundle(total, gx.proj2).value();
}

Outcome<BundleMorphism> check_bundle_morphism(const Bundle& src, const Bundle& dst, const FinMap& m) {
  if (!(src.group() == dst.group())) throw Error(ErrorKind::BaseMismatch, "bundles for different groups");
  if (!(src.base() == dst.base())) throw Error(ErrorKind::BaseMismatch, "bundles over different bases");
  if (!(m.src() == src.total_space()) || !(m.dst() == dst.total_space()))
    throw Error(ErrorKind::SrcDstMismatch, "map does not run between the total spaces");
  const FinMap& ps = src.proj().map();
  const FinMap& pd = dst.proj().map();
  for (Index p = 0; p < m.src().size(); ++p)
    if (pd(m(p)) != ps(p))
      return Violation{ViolationKind::TriangleFail, {m.src()[p]}, "map moves a point to another fiber"};
  auto eq = check_equivariant(m, src.total(), dst.total());
  if (!eq) return eq.violation();
  return BundleMorphism(src, dst, std::move(eq).value());
}

std::vector<BundleMorphism> enumerate_bundle_morphisms(const Bundle& src, const Bundle& dst, std::uint64_t bound) {
  if (!(src.group() == dst.group()) || !(src.base() == dst.base()))
    throw Error(ErrorKind::BaseMismatch, "bundles over different bases");
  std::vector<BundleMorphism> out;
  for_each_map_over(
      src.proj().map(), dst.proj().map(),
      [&](const FinMap& m) {
        auto bm = check_bundle_morphism(src, dst, m);
        if (bm) out.push_back(std::move(bm).value());
        return true;
      },
      bound);
  return out;
}

std::optional<FinMap> bundle_isomorphism(const Bundle& a, const Bundle& b) {
  if (!(a.group() == b.group()) || !(a.base() == b.base()))
    throw Error(ErrorKind::BaseMismatch, "bundles over different bases");
  return gset_isomorphism_over(a.total(), b.total(), a.proj().map(), b.proj().map());
}

std::vector<Bundle> enumerate_principal_bundles(const FinGroup& group, const FinSet& base) {
  const Product gx = product(group.carrier(), base);
  const std::size_t n = group.order();
  const std::size_t nx = base.size();
  const Index e = group.identity_element();

  // A torsor structure on fiber x is fixed by a bijection b: G -> fiber
  // with b(e) = (e, x); the action is h·b(k) = b(hk).
  std::vector<Index> others;
  for (Index g = 0; g < n; ++g)
    if (g != e) others.push_back(g);
  std::vector<std::vector<Index>> perms;
  do perms.push_back(others);
  while (std::next_permutation(others.begin(), others.end()));

  std::vector<Bundle> out;
  std::vector<std::size_t> choice(nx, 0);
  const Product dom = product(group.carrier(), gx.apex);
  while (true) {
    std::vector<Index> act(dom.apex.size());
    for (Index x = 0; x < nx; ++x) {
      std::vector<Index> b(n);  // group element -> first coordinate of the fiber atom
      b[e] = e;
      for (std::size_t k = 0; k < others.size(); ++k) b[others[k]] = perms[choice[x]][k];
      std::vector<Index> b_inv(n);
      for (Index k = 0; k < n; ++k) b_inv[b[k]] = k;
      for (Index h = 0; h < n; ++h)
        for (Index g = 0; g < n; ++g) {
          const Index source = static_cast<Index>(g * nx + x);  // atom (g, x) = b(b_inv[g])
          const Index image = static_cast<Index>(b[group.multiply(h, b_inv[g])] * nx + x);
          act[h * gx.apex.size() + source] = image;
        }
    }
    const GAction total = check_action(group, gx.apex, FinMap(dom.apex, gx.apex, std::move(act))).value();
    out.push_back(is_principal_bundle(total, gx.proj2).value());

    std::size_t i = 0;
    while (i < nx && ++choice[i] == perms.size()) choice[i++] = 0;
    if (i == nx) break;
  }
  return out;
}

}  // namespace qstack
