#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qstack/group.hpp"
#include "qstack/site.hpp"

namespace qstack {

// One leg of a local trivialization: the restriction P ×_X U_i with its
// induced action and an equivariant iso onto G × U_i over U_i.
struct LegTrivialization {
  PullbackAction restricted;
  GAction model;  // product_action(G, U_i)
  FinMap iso;     // P ×_X U_i -> G × U_i
};

struct Trivialization {
  CoveringFamily cover;
  std::vector<LegTrivialization> legs;
};

// A principal G-bundle: an equivariant map onto a base carrying the
// trivial action, together with the certificate of local triviality.
class Bundle {
 public:
  const FinGroup& group() const { return proj_.src().group(); }
  const FinSet& base() const { return proj_.map().dst(); }
  const FinSet& total_space() const { return proj_.map().src(); }
  const GAction& total() const { return proj_.src(); }
  const EquivariantMap& proj() const { return proj_; }
  const std::optional<Trivialization>& trivialization() const { return trivialization_; }

  friend bool operator==(const Bundle& a, const Bundle& b) { return a.proj_ == b.proj_; }

 private:
  friend class BundleFactory;
  Bundle(EquivariantMap proj, std::optional<Trivialization> triv)
      : proj_(std::move(proj)), trivialization_(std::move(triv)) {}

  EquivariantMap proj_;
  std::optional<Trivialization> trivialization_;
};

// Trivial G-action on a base object.
GAction base_action(const FinGroup& group, const FinSet& base);
// Any map between objects with trivial actions, as an equivariant map.
EquivariantMap trivially_equivariant(const FinGroup& group, const FinMap& f);

// Violation NotTrivial(leg) names the first leg without an iso.
// Throws CoverNotInTopology for a non-canonical cover, TargetMismatch for a
// cover of another object.
Outcome<Trivialization> is_locally_trivial(const EquivariantMap& proj, const CoveringFamily& cover);

// Uses the point cover. Violation NotBundle(x, reason) with reason one of
// "not free", "not transitive", "wrong size".
Outcome<Bundle> is_principal_bundle(const EquivariantMap& proj);
Outcome<Bundle> is_principal_bundle(const EquivariantMap& proj, const CoveringFamily& cover);
Outcome<Bundle> is_principal_bundle(const GAction& total, const FinMap& proj);

// Fiberwise torsor test, the closed form of local triviality here.
std::optional<Violation> torsor_violation(const EquivariantMap& proj);

// Total space P ×_Y Z with the induced action, projecting to Z; the
// trivialization is carried along the pulled-back cover.
Bundle pullback_bundle(const Bundle& bundle, const FinMap& f);

Bundle trivial_bundle(const FinGroup& group, const FinSet& base);

class BundleMorphism {
 public:
  const Bundle& src() const { return src_; }
  const Bundle& dst() const { return dst_; }
  const EquivariantMap& map() const { return map_; }

 private:
  friend Outcome<BundleMorphism> check_bundle_morphism(const Bundle&, const Bundle&, const FinMap&);
  BundleMorphism(Bundle s, Bundle d, EquivariantMap m) : src_(std::move(s)), dst_(std::move(d)), map_(std::move(m)) {}

  Bundle src_;
  Bundle dst_;
  EquivariantMap map_;
};

// Violations TriangleFail(p), EquivarianceFail(g,p). Throws BaseMismatch.
Outcome<BundleMorphism> check_bundle_morphism(const Bundle& src, const Bundle& dst, const FinMap& m);

// All morphisms by brute force over every map of total spaces over the base.
std::vector<BundleMorphism> enumerate_bundle_morphisms(const Bundle& src, const Bundle& dst,
                                                       std::uint64_t bound = 1'000'000);

// An iso of bundles over the common base, if any.
std::optional<FinMap> bundle_isomorphism(const Bundle& a, const Bundle& b);

// Every torsor structure on the total space of trivial_bundle(G, X) with
// projection onto X: ((|G|-1)!)^|X| bundles.
std::vector<Bundle> enumerate_principal_bundles(const FinGroup& group, const FinSet& base);

}  // namespace qstack
