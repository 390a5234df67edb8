#pragma once

// Random instances and checks shared by the tests and the acceptance run.

#include "qstack/descent.hpp"
#include "qstack/generators.hpp"

namespace support {

using namespace qstack;

// A stack with |G| <= max_order and a nonempty X.
inline QuotientStack random_stack(gen::Rng& rng, std::size_t max_order, std::size_t max_x = 4) {
  const FinGroup g = gen::random_group(rng, max_order);
  while (true) {
    const GAction x = gen::random_action(rng, g, 2, max_x);
    if (!x.space().empty()) return make_quotient_stack(x);
  }
}

inline QSObject random_object(gen::Rng& rng, const QuotientStack& st, const FinSet& base) {
  while (true)
    if (auto o = gen::random_object(rng, st, base)) return *o;
}

// A morphism obj -> (some object iso to obj): a random automorphism
// followed by a transport along a random bijection.
inline QSMorphism random_iso_from(gen::Rng& rng, const QSObject& obj) {
  const auto autos = enumerate_qs_morphisms(obj, obj);
  const QSMorphism& a = autos[gen::uniform(rng, 0, autos.size() - 1)];
  const Transported t = transport_object(obj, gen::random_bijection(rng, obj.total_space()));
  return compose(check_qs_morphism(obj, t.object, t.iso).value(), a);
}

inline bool same_morphism(const QSMorphism& a, const QSMorphism& b) {
  return a.src() == b.src() && a.dst() == b.dst() && a.map() == b.map();
}

// φ_ij ∘ ψ_i|pr1 against ψ_j|pr2 ∘ (canonical iso between the two restrictions of the glued object).
inline bool psi_squares_hold(const DescentDatum& d, const GluingResult& r) {
  const Overlaps ov = overlaps(d.cover);
  for (std::size_t i = 0; i < d.objects.size(); ++i)
    for (std::size_t j = 0; j < d.objects.size(); ++j) {
      const PullbackCert& pb = ov.pairs[i][j];
      const FinMap& fi = d.cover.legs[i];
      const FinMap& fj = d.cover.legs[j];
      const QSMorphism canon =
          compose(epsilon_component(r.glued, fj, pb.proj2), inverse(epsilon_component(r.glued, fi, pb.proj1)));
      const FinMap lhs = compose(d.overlap_isos[i][j], restrict_morphism(r.comparison_isos[i], pb.proj1)).map();
      const FinMap rhs = compose(restrict_morphism(r.comparison_isos[j], pb.proj2), canon).map();
      if (!(lhs == rhs)) return false;
    }
  return true;
}

}  // namespace support
