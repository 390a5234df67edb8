#include "qstack/quotient_stack.hpp"

#include <algorithm>
#include <functional>

namespace qstack {

QuotientStack make_quotient_stack(const GAction& x_action) { return {x_action.group(), x_action}; }

QuotientStack classifying_stack(const FinGroup& group) {
  return make_quotient_stack(trivial_action(group, terminal()));
}

// ---------------------------------------------------------------------------
// Objects and morphisms

Outcome<QSObject> check_qs_object(const Bundle& bundle, const FinMap& alpha, const GAction& x_action) {
  if (!(alpha.src() == bundle.total_space()) || !(alpha.dst() == x_action.space()))
    throw Error(ErrorKind::SrcDstMismatch, "α must run from the total space to X");
  auto eq = check_equivariant(alpha, bundle.total(), x_action);
  if (!eq) return eq.violation();
  return QSObject(bundle, std::move(eq).value());
}

Outcome<QSMorphism> check_qs_morphism(const QSObject& src, const QSObject& dst, const FinMap& m) {
  if (!(src.x_action() == dst.x_action())) throw Error(ErrorKind::BaseMismatch, "objects of different stacks");
  auto bm = check_bundle_morphism(src.bundle(), dst.bundle(), m);
  if (!bm) return bm.violation();
  const FinMap& a = src.alpha().map();
  const FinMap& b = dst.alpha().map();
  for (Index p = 0; p < m.src().size(); ++p)
    if (b(m(p)) != a(p)) return Violation{ViolationKind::TriangleFail, {m.src()[p]}, "β∘φ != α"};
  return QSMorphism(src, dst, std::move(bm).value());
}

QSMorphism identity_morphism(const QSObject& obj) {
  return check_qs_morphism(obj, obj, identity(obj.total_space())).value();
}

QSMorphism compose(const QSMorphism& g, const QSMorphism& f) {
  if (!(f.dst() == g.src())) throw Error(ErrorKind::SrcDstMismatch, "morphisms are not composable");
  return check_qs_morphism(f.src(), g.dst(), compose(g.map(), f.map())).value();
}

bool is_iso(const QSMorphism& m) { return morphism_predicates(m.map()).iso; }

QSMorphism inverse(const QSMorphism& m) { return check_qs_morphism(m.dst(), m.src(), inverse(m.map())).value(); }

Transported transport_object(const QSObject& obj, const FinMap& sigma) {
  const FinMap back = inverse(sigma);
  const GAction total = transport_action(obj.bundle().total(), sigma);
  Bundle b = is_principal_bundle(total, compose(obj.bundle().proj().map(), back)).value();
  QSObject moved = check_qs_object(b, compose(obj.alpha().map(), back), obj.x_action()).value();
  return {std::move(moved), sigma};
}

std::optional<FinMap> qs_isomorphism(const QSObject& a, const QSObject& b) {
  if (!(a.base() == b.base()) || !(a.x_action() == b.x_action())) return std::nullopt;
  const Product yx = product(a.base(), a.x_action().space());
  return gset_isomorphism_over(a.bundle().total(), b.bundle().total(),
                               pairing(yx, a.bundle().proj().map(), a.alpha().map()),
                               pairing(yx, b.bundle().proj().map(), b.alpha().map()));
}

// ---------------------------------------------------------------------------
// Restriction

namespace {

PullbackCert restriction_cert(const QSObject& obj, const FinMap& f) {
  if (!(f.dst() == obj.base())) throw Error(ErrorKind::BaseMismatch, "restriction along a map into another base");
  return pullback(obj.bundle().proj().map(), f);
}

}  // namespace

QSObject restrict(const QSObject& obj, const FinMap& f) {
  const PullbackCert cert = restriction_cert(obj, f);
  Bundle b = pullback_bundle(obj.bundle(), f);
  return check_qs_object(b, compose(obj.alpha().map(), cert.proj1), obj.x_action()).value();
}

QSMorphism restrict_morphism(const QSMorphism& m, const FinMap& f) {
  const PullbackCert from = restriction_cert(m.src(), f);
  const PullbackCert to = restriction_cert(m.dst(), f);
  const FinMap t = mediate_pullback(to, compose(m.map(), from.proj1), from.proj2);
  return check_qs_morphism(restrict(m.src(), f), restrict(m.dst(), f), t).value();
}

QSMorphism iota_component(const QSObject& obj) {
  const FinMap id_y = identity(obj.base());
  const PullbackCert cert = restriction_cert(obj, id_y);
  const FinMap forward = cert.proj1;
  const FinMap backward = mediate_pullback(cert, identity(obj.total_space()), obj.bundle().proj().map());
  if (!(compose(backward, forward) == identity(cert.apex)) || !(compose(forward, backward) == identity(obj.total_space())))
    throw Error(ErrorKind::NotIso, "ι component is not invertible");
  return check_qs_morphism(restrict(obj, id_y), obj, forward).value();
}

QSMorphism epsilon_component(const QSObject& obj, const FinMap& f, const FinMap& g) {
  const FinMap fg = compose(f, g);
  const PullbackCert direct = restriction_cert(obj, fg);           // P ×_Y W
  const PullbackCert first = restriction_cert(obj, f);             // P ×_Y Z
  const PullbackCert second = pullback(first.proj2, g);            // (P ×_Y Z) ×_Z W
  const FinMap into_first = mediate_pullback(first, direct.proj1, compose(g, direct.proj2));
  const FinMap forward = mediate_pullback(second, into_first, direct.proj2);
  const FinMap backward = mediate_pullback(direct, compose(first.proj1, second.proj1), second.proj2);
  if (!(compose(backward, forward) == identity(direct.apex)) || !(compose(forward, backward) == identity(second.apex)))
    throw Error(ErrorKind::NotIso, "ε component is not invertible");
  return check_qs_morphism(restrict(obj, fg), restrict(restrict(obj, f), g), forward).value();
}

CoherenceCell coherence_iota(const FinSet& base, const std::vector<QSObject>& objects,
                             const std::vector<QSMorphism>& morphisms) {
  CoherenceCell cell{CoherenceCell::Kind::Iota, {}, 0, {}};
  for (const auto& obj : objects) {
    if (!(obj.base() == base)) continue;
    cell.components.push_back(iota_component(obj));
    if (!is_iso(cell.components.back())) cell.failures.push_back("ι component not iso");
  }
  const FinMap id_y = identity(base);
  for (const auto& m : morphisms) {
    if (!(m.src().base() == base)) continue;
    const QSMorphism lhs = compose(iota_component(m.dst()), restrict_morphism(m, id_y));
    const QSMorphism rhs = compose(m, iota_component(m.src()));
    ++cell.naturality_squares;
    if (!(lhs.map() == rhs.map())) cell.failures.push_back("ι naturality square fails");
  }
  return cell;
}

CoherenceCell coherence_epsilon(const FinMap& f, const FinMap& g, const std::vector<QSObject>& objects,
                                const std::vector<QSMorphism>& morphisms) {
  CoherenceCell cell{CoherenceCell::Kind::Epsilon, {}, 0, {}};
  const FinMap fg = compose(f, g);
  for (const auto& obj : objects) {
    if (!(obj.base() == f.dst())) continue;
    cell.components.push_back(epsilon_component(obj, f, g));
    if (!is_iso(cell.components.back())) cell.failures.push_back("ε component not iso");
  }
  for (const auto& m : morphisms) {
    if (!(m.src().base() == f.dst())) continue;
    const QSMorphism lhs = compose(epsilon_component(m.dst(), f, g), restrict_morphism(m, fg));
    const QSMorphism rhs = compose(restrict_morphism(restrict_morphism(m, f), g), epsilon_component(m.src(), f, g));
    ++cell.naturality_squares;
    if (!(lhs.map() == rhs.map())) cell.failures.push_back("ε naturality square fails");
  }
  return cell;
}

bool associativity_coherent(const QSObject& obj, const FinMap& f, const FinMap& g, const FinMap& h) {
  const FinMap fg = compose(f, g);
  const FinMap gh = compose(g, h);
  const QSMorphism path_a = compose(restrict_morphism(epsilon_component(obj, f, g), h), epsilon_component(obj, fg, h));
  const QSMorphism path_b = compose(epsilon_component(restrict(obj, f), g, h), epsilon_component(obj, f, gh));
  return path_a.map() == path_b.map();
}

bool unit_coherent(const QSObject& obj, const FinMap& f, const FinMap& g) {
  const QSObject of = restrict(obj, f);
  const QSMorphism right = compose(iota_component(of), epsilon_component(obj, f, identity(f.src())));
  const QSMorphism left =
      compose(restrict_morphism(iota_component(obj), g), epsilon_component(obj, identity(obj.base()), g));
  return right.map() == identity(of.total_space()) && left.map() == identity(restrict(obj, g).total_space());
}

// ---------------------------------------------------------------------------
// Enumeration

std::vector<QSMorphism> enumerate_qs_morphisms(const QSObject& src, const QSObject& dst) {
  if (!(src.base() == dst.base())) throw Error(ErrorKind::BaseMismatch, "objects over different bases");
  const GAction& a = src.bundle().total();
  const GAction& b = dst.bundle().total();
  const FinMap& ps = src.bundle().proj().map();
  const FinMap& pd = dst.bundle().proj().map();
  const auto src_orbits = orbits(a);

  // An equivariant map out of a free G-set is fixed by where it sends one
  // point of each orbit; the image must lie over the same base point.
  std::vector<std::vector<Index>> options(src_orbits.size());
  for (std::size_t k = 0; k < src_orbits.size(); ++k) {
    const Index r = src_orbits[k].front();
    for (Index q = 0; q < b.space().size(); ++q)
      if (pd(q) == ps(r)) options[k].push_back(q);
  }
  std::vector<QSMorphism> out;
  std::vector<Index> table(a.space().size());
  std::function<void(std::size_t)> rec = [&](std::size_t k) {
    if (k == src_orbits.size()) {
      auto m = check_qs_morphism(src, dst, FinMap(a.space(), b.space(), table));
      if (m) out.push_back(std::move(m).value());
      return;
    }
    const Index r = src_orbits[k].front();
    for (Index q : options[k]) {
      bool consistent = true;
      std::vector<std::pair<Index, Index>> set;
      for (Index g = 0; g < a.group().order() && consistent; ++g) {
        const Index x = a.apply(g, r);
        const Index y = b.apply(g, q);
        auto it = std::find_if(set.begin(), set.end(), [x](auto& p) { return p.first == x; });
        if (it == set.end()) set.emplace_back(x, y);
        else consistent = it->second == y;
      }
      if (!consistent) continue;
      for (auto [x, y] : set) table[x] = y;
      rec(k + 1);
    }
  };
  rec(0);
  return out;
}

std::vector<QSMorphism> enumerate_qs_morphisms_brute(const QSObject& src, const QSObject& dst, std::uint64_t bound) {
  if (!(src.base() == dst.base())) throw Error(ErrorKind::BaseMismatch, "objects over different bases");
  std::vector<QSMorphism> out;
  for_each_map_over(
      src.bundle().proj().map(), dst.bundle().proj().map(),
      [&](const FinMap& m) {
        auto qm = check_qs_morphism(src, dst, m);
        if (qm) out.push_back(std::move(qm).value());
        return true;
      },
      bound);
  return out;
}

std::vector<QSObject> enumerate_qs_objects(const QuotientStack& stack, const FinSet& base, std::uint64_t bound) {
  std::vector<QSObject> out;
  for (const Bundle& b : enumerate_principal_bundles(stack.group, base)) {
    // α is fixed by its value on one point per (free) orbit.
    const GAction& total = b.total();
    const auto orb = orbits(total);
    const std::size_t nx = stack.x_action.space().size();
    if (count_maps(orb.size(), nx) > bound) throw Error(ErrorKind::BoundExceeded, "too many candidate α maps");
    std::vector<Index> choice(orb.size(), 0);
    if (nx == 0 && !orb.empty()) continue;
    while (true) {
      std::vector<Index> t(total.space().size());
      for (std::size_t k = 0; k < orb.size(); ++k)
        for (Index g = 0; g < total.group().order(); ++g)
          t[total.apply(g, orb[k].front())] = stack.x_action.apply(g, choice[k]);
      auto obj = check_qs_object(b, FinMap(total.space(), stack.x_action.space(), std::move(t)), stack.x_action);
      if (obj) out.push_back(std::move(obj).value());
      std::size_t i = 0;
      while (i < orb.size() && ++choice[i] == nx) choice[i++] = 0;
      if (i == orb.size()) break;
    }
    if (out.size() > bound) throw Error(ErrorKind::BoundExceeded, "too many objects in the fiber category");
  }
  return out;
}

namespace {

template <class T, class Iso>
std::size_t count_iso_classes(const std::vector<T>& items, Iso iso) {
  std::vector<const T*> reps;
  for (const auto& x : items) {
    bool found = false;
    for (const T* r : reps)
      if (iso(x, *r)) {
        found = true;
        break;
      }
    if (!found) reps.push_back(&x);
  }
  return reps.size();
}

}  // namespace

ClassifyingReport classifying_fiber_equiv(const FinGroup& group, const FinSet& base, std::uint64_t bound) {
  std::uint64_t per_fiber = 1;
  for (std::size_t k = 2; k < group.order(); ++k) per_fiber *= k;
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < base.size(); ++i) {
    total *= per_fiber;
    if (total > bound) throw Error(ErrorKind::BoundExceeded, "too many bundles to enumerate over this base");
  }

  const QuotientStack bg = classifying_stack(group);
  const std::vector<Bundle> bundles = enumerate_principal_bundles(group, base);
  const std::vector<QSObject> objects = enumerate_qs_objects(bg, base, bound);

  ClassifyingReport r;
  r.bundle_objects = bundles.size();
  r.stack_objects = objects.size();
  for (const auto& b : bundles) r.alpha_forced = r.alpha_forced && count_maps(b.total_space().size(), 1) == 1;
  r.bundle_iso_classes =
      count_iso_classes(bundles, [](const Bundle& a, const Bundle& b) { return bundle_isomorphism(a, b).has_value(); });
  r.stack_iso_classes =
      count_iso_classes(objects, [](const QSObject& a, const QSObject& b) { return qs_isomorphism(a, b).has_value(); });

  const Bundle triv = trivial_bundle(group, base);
  const QSObject triv_obj = check_qs_object(triv, bang(triv.total_space()), bg.x_action).value();
  r.bundle_aut_trivial = enumerate_bundle_morphisms(triv, triv, bound * 100).size();
  r.stack_aut_trivial = enumerate_qs_morphisms_brute(triv_obj, triv_obj, bound * 100).size();

  // Hom-sets agree pairwise: the forgetful correspondence is bijective.
  for (std::size_t i = 0; i < bundles.size() && i < objects.size(); ++i)
    for (std::size_t j = 0; j < bundles.size() && j < objects.size(); ++j) {
      if (r.hom_pairs_checked >= bound) break;
      const auto qs = enumerate_qs_morphisms(objects[i], objects[j]);
      std::size_t bun = 0;
      for (const auto& m : qs) bun += check_bundle_morphism(bundles[i], bundles[j], m.map()).ok() ? 1 : 0;
      const auto bun_homs = enumerate_qs_morphisms(check_qs_object(bundles[i], bang(bundles[i].total_space()), bg.x_action).value(),
                                                   check_qs_object(bundles[j], bang(bundles[j].total_space()), bg.x_action).value());
      r.homs_agree = r.homs_agree && bun == qs.size() && bun_homs.size() == qs.size();
      ++r.hom_pairs_checked;
    }
  return r;
}

}  // namespace qstack
