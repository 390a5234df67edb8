#include "qstack/group.hpp"

#include <algorithm>
#include <array>
#include <functional>
#include <numeric>

namespace qstack {

namespace {

Violation violation(ViolationKind kind, std::vector<std::string> witness, std::string detail = {}) {
  return Violation{kind, std::move(witness), std::move(detail)};
}

}  // namespace

// ---------------------------------------------------------------------------
// Groups

Outcome<FinGroup> check_group(const FinSet& carrier, const FinMap& mul) {
  Product sq = product(carrier, carrier);
  if (!(mul.src() == sq.apex) || !(mul.dst() == carrier))
    throw Error(ErrorKind::ShapeMismatch, "multiplication must be a map G×G -> G");
  const std::size_t n = carrier.size();
  auto m = [&](Index a, Index b) { return mul(a * n + b); };

  for (Index a = 0; a < n; ++a)
    for (Index b = 0; b < n; ++b)
      for (Index c = 0; c < n; ++c)
        if (m(m(a, b), c) != m(a, m(b, c)))
          return violation(ViolationKind::NotAssociative, {carrier[a], carrier[b], carrier[c]},
                           "(ab)c != a(bc)");

  std::optional<Index> unit;
  for (Index e = 0; e < n && !unit; ++e) {
    bool ok = true;
    for (Index x = 0; x < n && ok; ++x) ok = m(e, x) == x && m(x, e) == x;
    if (ok) unit = e;
  }
  if (!unit) return violation(ViolationKind::NoUnit, {}, "no two-sided identity in the table");

  std::vector<Index> inv(n);
  for (Index a = 0; a < n; ++a) {
    std::optional<Index> found;
    for (Index b = 0; b < n && !found; ++b)
      if (m(a, b) == *unit && m(b, a) == *unit) found = b;
    if (!found) return violation(ViolationKind::NoInverse, {carrier[a]}, "no x with a·x = x·a = e");
    inv[a] = *found;
  }

  FinGroup g;
  g.carrier_ = carrier;
  g.square_ = std::move(sq);
  g.mul_ = mul;
  g.unit_ = point(carrier, *unit);
  g.inv_ = FinMap(carrier, carrier, std::move(inv));
  return g;
}

Outcome<FinGroup> check_group(const FinSet& carrier, const std::vector<std::vector<Atom>>& rows) {
  const std::size_t n = carrier.size();
  if (rows.size() != n) throw Error(ErrorKind::ShapeMismatch, "Cayley table needs one row per element");
  std::vector<Atom> images;
  images.reserve(n * n);
  for (const auto& row : rows) {
    if (row.size() != n) throw Error(ErrorKind::ShapeMismatch, "Cayley table row has the wrong length");
    images.insert(images.end(), row.begin(), row.end());
  }
  return check_group(carrier, FinMap::from_images(product(carrier, carrier).apex, carrier, images));
}

namespace {

FinGroup group_from_rule(std::size_t n, const std::function<Index(Index, Index)>& rule) {
  FinSet carrier = FinSet::range(n);
  std::vector<Index> t(n * n);
  for (Index a = 0; a < n; ++a)
    for (Index b = 0; b < n; ++b) t[a * n + b] = rule(a, b);
  return check_group(carrier, FinMap(product(carrier, carrier).apex, carrier, std::move(t))).value();
}

}  // namespace

FinGroup trivial_group() { return cyclic_group(1); }

FinGroup cyclic_group(std::size_t n) {
  if (n == 0) throw Error(ErrorKind::InvalidInput, "a group has at least one element");
  return group_from_rule(n, [n](Index a, Index b) { return static_cast<Index>((a + b) % n); });
}

FinGroup klein_four_group() {
  return group_from_rule(4, [](Index a, Index b) { return a ^ b; });
}

FinGroup symmetric_group_3() {
  std::vector<std::array<int, 3>> perms;
  std::array<int, 3> p{0, 1, 2};
  do perms.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));
  // (a·b)(i) = a(b(i))
  return group_from_rule(6, [perms](Index a, Index b) {
    std::array<int, 3> c{};
    for (int i = 0; i < 3; ++i) c[i] = perms[a][perms[b][i]];
    return static_cast<Index>(std::find(perms.begin(), perms.end(), c) - perms.begin());
  });
}

std::vector<FinGroup> small_groups() {
  return {trivial_group(), cyclic_group(2), cyclic_group(3), cyclic_group(4),
          klein_four_group(), cyclic_group(6), symmetric_group_3()};
}

// ---------------------------------------------------------------------------
// Actions

Outcome<GAction> check_action(const FinGroup& group, const FinSet& space, const FinMap& act) {
  Product dom = product(group.carrier(), space);
  if (!(act.src() == dom.apex) || !(act.dst() == space))
    throw Error(ErrorKind::ShapeMismatch, "action must be a map G×X -> X");
  const std::size_t n = group.order();
  const std::size_t nx = space.size();
  auto ap = [&](Index g, Index x) { return act(g * nx + x); };
  const FinSet& G = group.carrier();

  for (Index g = 0; g < n; ++g)
    for (Index h = 0; h < n; ++h)
      for (Index x = 0; x < nx; ++x)
        if (ap(g, ap(h, x)) != ap(group.multiply(g, h), x))
          return violation(ViolationKind::AssocFail, {G[g], G[h], space[x]}, "g·(h·x) != (gh)·x");

  const Index e = group.identity_element();
  for (Index x = 0; x < nx; ++x)
    if (ap(e, x) != x) return violation(ViolationKind::UnitFail, {space[x]}, "e·x != x");

  GAction a;
  a.group_ = group;
  a.space_ = space;
  a.domain_ = std::move(dom);
  a.act_ = act;
  return a;
}

Outcome<GAction> check_action(const FinGroup& group, const FinSet& space,
                              const std::vector<std::vector<Atom>>& rows) {
  if (rows.size() != group.order()) throw Error(ErrorKind::ShapeMismatch, "action table needs one row per group element");
  std::vector<Atom> images;
  for (const auto& row : rows) {
    if (row.size() != space.size()) throw Error(ErrorKind::ShapeMismatch, "action table row has the wrong length");
    images.insert(images.end(), row.begin(), row.end());
  }
  return check_action(group, space, FinMap::from_images(product(group.carrier(), space).apex, space, images));
}

GAction trivial_action(const FinGroup& group, const FinSet& space) {
  Product dom = product(group.carrier(), space);
  return check_action(group, space, dom.proj2).value();
}

GAction regular_action(const FinGroup& group) { return check_action(group, group.carrier(), group.mul()).value(); }

GAction product_action(const FinGroup& group, const FinSet& base) {
  // θ(g, (h, u)) = (gh, u)
  const Product gu = product(group.carrier(), base);
  const Product dom = product(group.carrier(), gu.apex);
  const std::size_t nu = base.size();
  std::vector<Index> t(dom.apex.size());
  for (Index g = 0; g < group.order(); ++g)
    for (Index hu = 0; hu < gu.apex.size(); ++hu) {
      const Index h = gu.proj1(hu), u = gu.proj2(hu);
      t[g * gu.apex.size() + hu] = static_cast<Index>(group.multiply(g, h) * nu + u);
    }
  return check_action(group, gu.apex, FinMap(dom.apex, gu.apex, std::move(t))).value();
}

GAction transport_action(const GAction& a, const FinMap& sigma) {
  if (!(sigma.src() == a.space())) throw Error(ErrorKind::SrcDstMismatch, "transport along a map out of another object");
  const FinMap back = inverse(sigma);
  const Product dom = product(a.group().carrier(), sigma.dst());
  const std::size_t ny = sigma.dst().size();
  std::vector<Index> t(dom.apex.size());
  for (Index g = 0; g < a.group().order(); ++g)
    for (Index y = 0; y < ny; ++y) t[g * ny + y] = sigma(a.apply(g, back(y)));
  return check_action(a.group(), sigma.dst(), FinMap(dom.apex, sigma.dst(), std::move(t))).value();
}

GAction coproduct_action(const FinGroup& group, const Coproduct& c, const std::vector<GAction>& parts) {
  if (parts.size() != c.injections.size()) throw Error(ErrorKind::ShapeMismatch, "one action per summand");
  const Product dom = product(group.carrier(), c.apex);
  const std::size_t n = c.apex.size();
  std::vector<Index> t(dom.apex.size());
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (!(parts[i].group() == group) || !(parts[i].space() == c.injections[i].src()))
      throw Error(ErrorKind::ShapeMismatch, "summand action does not match the coproduct");
    const FinMap& inj = c.injections[i];
    for (Index g = 0; g < group.order(); ++g)
      for (Index x = 0; x < inj.src().size(); ++x) t[g * n + inj(x)] = inj(parts[i].apply(g, x));
  }
  return check_action(group, c.apex, FinMap(dom.apex, c.apex, std::move(t))).value();
}

// ---------------------------------------------------------------------------
// Equivariance

Outcome<EquivariantMap> check_equivariant(const FinMap& f, const GAction& a, const GAction& b) {
  if (!(a.group() == b.group())) throw Error(ErrorKind::ShapeMismatch, "actions of different groups");
  if (!(f.src() == a.space()) || !(f.dst() == b.space()))
    throw Error(ErrorKind::SrcDstMismatch, "map does not run between the acted-on objects");
  const FinSet& G = a.group().carrier();
  for (Index g = 0; g < G.size(); ++g)
    for (Index x = 0; x < a.space().size(); ++x)
      if (f(a.apply(g, x)) != b.apply(g, f(x)))
        return violation(ViolationKind::EquivarianceFail, {G[g], a.space()[x]}, "f(g·x) != g·f(x)");
  EquivariantMap e;
  e.map_ = f;
  e.src_ = a;
  e.dst_ = b;
  return e;
}

PullbackAction pullback_action(const EquivariantMap& f, const EquivariantMap& g) {
  if (!(f.dst() == g.dst())) throw Error(ErrorKind::CodomainMismatch, "equivariant maps into different G-objects");
  const GAction& p = f.src();
  const GAction& z = g.src();
  const FinGroup& G = p.group();

  PullbackCert cert = pullback(f.map(), g.map());
  const Product g_apex = product(G.carrier(), cert.apex);
  const FinMap id_g = identity(G.carrier());
  // p ∘ (id × proj_P) and z ∘ (id × proj_Z)
  const FinMap u = compose(p.act(), cross(g_apex, p.domain(), id_g, cert.proj1));
  const FinMap v = compose(z.act(), cross(g_apex, z.domain(), id_g, cert.proj2));
  const FinMap psi = mediate_pullback(cert, u, v);
  GAction action = check_action(G, cert.apex, psi).value();
  return {std::move(cert), std::move(action)};
}

// ---------------------------------------------------------------------------
// Orbits and isomorphism search

std::vector<std::vector<Index>> orbits(const GAction& a) {
  const std::size_t n = a.space().size();
  std::vector<char> seen(n, 0);
  std::vector<std::vector<Index>> out;
  for (Index x = 0; x < n; ++x) {
    if (seen[x]) continue;
    std::vector<Index> orbit;
    for (Index g = 0; g < a.group().order(); ++g) {
      Index y = a.apply(g, x);
      if (!seen[y]) {
        seen[y] = 1;
        orbit.push_back(y);
      }
    }
    std::sort(orbit.begin(), orbit.end());
    out.push_back(std::move(orbit));
  }
  return out;
}

bool is_free(const GAction& a) {
  const Index e = a.group().identity_element();
  for (Index g = 0; g < a.group().order(); ++g) {
    if (g == e) continue;
    for (Index x = 0; x < a.space().size(); ++x)
      if (a.apply(g, x) == x) return false;
  }
  return true;
}

namespace {

struct IsoSearch {
  const GAction& a;
  const GAction& b;
  const FinMap& pa;
  const FinMap& pb;
  std::vector<std::vector<Index>> a_orbits;
  std::vector<std::vector<Index>> b_orbits;
  std::vector<Index> b_orbit_of;
  std::vector<char> b_orbit_used;
  std::vector<Index> h;  // partial map A -> B
  static constexpr Index kUnset = ~Index{0};

  // Sends the orbit of r onto the orbit of s via g·r -> g·s, if consistent.
  bool assign(Index r, Index s, std::vector<Index>& touched) {
    const std::size_t n = a.group().order();
    for (Index g = 0; g < n; ++g) {
      const Index x = a.apply(g, r);
      const Index y = b.apply(g, s);
      if (pa(x) != pb(y)) return false;
      if (h[x] == kUnset) {
        h[x] = y;
        touched.push_back(x);
      } else if (h[x] != y) {
        return false;
      }
    }
    return true;
  }

  bool run(std::size_t k) {
    if (k == a_orbits.size()) return true;
    const auto& orbit = a_orbits[k];
    const Index r = orbit.front();
    for (std::size_t j = 0; j < b_orbits.size(); ++j) {
      if (b_orbit_used[j] || b_orbits[j].size() != orbit.size()) continue;
      for (Index s : b_orbits[j]) {
        std::vector<Index> touched;
        // Equal orbit sizes plus a well-defined map give equal stabilizers,
        // hence a bijection between the two orbits.
        if (assign(r, s, touched)) {
          b_orbit_used[j] = 1;
          if (run(k + 1)) return true;
          b_orbit_used[j] = 0;
        }
        for (Index x : touched) h[x] = kUnset;
      }
    }
    return false;
  }
};

}  // namespace

std::optional<FinMap> gset_isomorphism_over(const GAction& a, const GAction& b, const FinMap& pa,
                                            const FinMap& pb) {
  if (!(a.group() == b.group())) throw Error(ErrorKind::ShapeMismatch, "actions of different groups");
  if (!(pa.src() == a.space()) || !(pb.src() == b.space()) || !(pa.dst() == pb.dst()))
    throw Error(ErrorKind::SrcDstMismatch, "base maps do not match the actions");
  if (a.space().size() != b.space().size()) return std::nullopt;

  IsoSearch search{a, b, pa, pb, orbits(a), orbits(b), {}, {}, {}};
  search.b_orbit_of.assign(b.space().size(), 0);
  for (Index j = 0; j < search.b_orbits.size(); ++j)
    for (Index y : search.b_orbits[j]) search.b_orbit_of[y] = j;
  search.b_orbit_used.assign(search.b_orbits.size(), 0);
  search.h.assign(a.space().size(), IsoSearch::kUnset);
  if (!search.run(0)) return std::nullopt;

  FinMap h(a.space(), b.space(), search.h);
  if (!is_injective(h) || !check_equivariant(h, a, b).ok() || !(compose(pb, h) == pa))
    throw Error(ErrorKind::InvalidInput, "internal: isomorphism search produced an invalid map");
  return h;
}

}  // namespace qstack
