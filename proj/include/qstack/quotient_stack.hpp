#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "qstack/bundle.hpp"

namespace qstack {

// [X/G]: a group, the G-object X it acts on, and the canonical topology.
struct QuotientStack {
  FinGroup group;
  GAction x_action;
};

QuotientStack make_quotient_stack(const GAction& x_action);
// [T/G]
QuotientStack classifying_stack(const FinGroup& group);

// (P, α): a principal bundle over Y with an equivariant α: P -> X.
class QSObject {
 public:
  const Bundle& bundle() const { return bundle_; }
  const EquivariantMap& alpha() const { return alpha_; }
  const FinSet& base() const { return bundle_.base(); }
  const FinSet& total_space() const { return bundle_.total_space(); }
  const GAction& x_action() const { return alpha_.dst(); }

  friend bool operator==(const QSObject& a, const QSObject& b) {
    return a.bundle_ == b.bundle_ && a.alpha_ == b.alpha_;
  }

 private:
  friend Outcome<QSObject> check_qs_object(const Bundle&, const FinMap&, const GAction&);
  QSObject(Bundle b, EquivariantMap a) : bundle_(std::move(b)), alpha_(std::move(a)) {}

  Bundle bundle_;
  EquivariantMap alpha_;
};

// Violation EquivarianceFail(g,p).
Outcome<QSObject> check_qs_object(const Bundle& bundle, const FinMap& alpha, const GAction& x_action);

class QSMorphism {
 public:
  const QSObject& src() const { return src_; }
  const QSObject& dst() const { return dst_; }
  const FinMap& map() const { return map_.map().map(); }
  const BundleMorphism& bundle_morphism() const { return map_; }

 private:
  friend Outcome<QSMorphism> check_qs_morphism(const QSObject&, const QSObject&, const FinMap&);
  QSMorphism(QSObject s, QSObject d, BundleMorphism m) : src_(std::move(s)), dst_(std::move(d)), map_(std::move(m)) {}

  QSObject src_;
  QSObject dst_;
  BundleMorphism map_;
};

// Bundle-morphism violations, plus TriangleFail(p) for β∘φ != α.
Outcome<QSMorphism> check_qs_morphism(const QSObject& src, const QSObject& dst, const FinMap& m);
QSMorphism identity_morphism(const QSObject& obj);
QSMorphism compose(const QSMorphism& g, const QSMorphism& f);
bool is_iso(const QSMorphism& m);
QSMorphism inverse(const QSMorphism& m);

// The object carried along a bijection sigma of its total space, and
// sigma itself as an iso obj -> transported.
struct Transported {
  QSObject object;
  FinMap iso;
};
Transported transport_object(const QSObject& obj, const FinMap& sigma);

// Iso in the fiber category: equivariant bijection over Y × X.
std::optional<FinMap> qs_isomorphism(const QSObject& a, const QSObject& b);

// (P ×_Y Z, α ∘ proj_P)
QSObject restrict(const QSObject& obj, const FinMap& f);
// Mediated from (m ∘ proj_P, proj_Z).
QSMorphism restrict_morphism(const QSMorphism& m, const FinMap& f);

// restrict(obj, id_Y) -> obj
QSMorphism iota_component(const QSObject& obj);
// restrict(obj, f∘g) -> restrict(restrict(obj, f), g)
QSMorphism epsilon_component(const QSObject& obj, const FinMap& f, const FinMap& g);

struct CoherenceCell {
  enum class Kind { Iota, Epsilon };
  Kind kind;
  std::vector<QSMorphism> components;
  std::size_t naturality_squares = 0;
  std::vector<std::string> failures;

  bool ok() const { return failures.empty(); }
};

// Components for every sampled object; naturality against every sampled
// morphism whose endpoints live over the right base.
CoherenceCell coherence_iota(const FinSet& base, const std::vector<QSObject>& objects,
                             const std::vector<QSMorphism>& morphisms);
CoherenceCell coherence_epsilon(const FinMap& f, const FinMap& g, const std::vector<QSObject>& objects,
                                const std::vector<QSMorphism>& morphisms);

// The two reassociations restrict(obj, f∘g∘h) -> ((obj|f)|g)|h agree.
bool associativity_coherent(const QSObject& obj, const FinMap& f, const FinMap& g, const FinMap& h);
// ι ∘ ε_{f,id} = id and restrict(ι, g) ∘ ε_{id,g} = id.
bool unit_coherent(const QSObject& obj, const FinMap& f, const FinMap& g);

// Morphisms between two objects, enumerated orbit by orbit.
std::vector<QSMorphism> enumerate_qs_morphisms(const QSObject& src, const QSObject& dst);
// Same hom-set by brute force over every map of total spaces over the base.
std::vector<QSMorphism> enumerate_qs_morphisms_brute(const QSObject& src, const QSObject& dst,
                                                     std::uint64_t bound = 1'000'000);

// Every (bundle, α) over base for a fixed stack, with bundles from
// enumerate_principal_bundles and α ranging over equivariant maps.
std::vector<QSObject> enumerate_qs_objects(const QuotientStack& stack, const FinSet& base,
                                           std::uint64_t bound = 100'000);

struct ClassifyingReport {
  std::size_t bundle_objects = 0;
  std::size_t stack_objects = 0;
  std::size_t bundle_iso_classes = 0;
  std::size_t stack_iso_classes = 0;
  std::size_t bundle_aut_trivial = 0;
  std::size_t stack_aut_trivial = 0;
  std::size_t hom_pairs_checked = 0;
  bool alpha_forced = true;
  bool homs_agree = true;

  bool consistent() const {
    return alpha_forced && homs_agree && bundle_objects == stack_objects &&
           bundle_iso_classes == stack_iso_classes && bundle_aut_trivial == stack_aut_trivial;
  }
};

// [T/G](Y) against Bun_G(Y). Throws BoundExceeded when the enumeration of
// bundles over Y exceeds bound.
ClassifyingReport classifying_fiber_equiv(const FinGroup& group, const FinSet& base, std::uint64_t bound = 10'000);

}  // namespace qstack
