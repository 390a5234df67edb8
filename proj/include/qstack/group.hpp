#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qstack/finset.hpp"

namespace qstack {

// A group object in finite sets, certified on construction. The unit and
// inverse morphisms are synthesized from the multiplication table.
class FinGroup {
 public:
  const FinSet& carrier() const { return carrier_; }
  const Product& square() const { return square_; }  // G×G
  const FinMap& mul() const { return mul_; }          // G×G -> G
  const FinMap& unit() const { return unit_; }        // T -> G
  const FinMap& inv() const { return inv_; }          // G -> G

  std::size_t order() const { return carrier_.size(); }
  Index multiply(Index a, Index b) const { return mul_(a * order() + b); }
  Index identity_element() const { return unit_(0); }
  Index inverse_of(Index a) const { return inv_(a); }

  friend bool operator==(const FinGroup& a, const FinGroup& b) {
    return a.carrier_ == b.carrier_ && a.mul_ == b.mul_;
  }

 private:
  friend Outcome<FinGroup> check_group(const FinSet& carrier, const FinMap& mul);
  friend class GAction;
  FinGroup() = default;

  FinSet carrier_;
  Product square_;
  FinMap mul_;
  FinMap unit_;
  FinMap inv_;
};

// mul must be a map product(carrier, carrier).apex -> carrier.
// Violations: NotAssociative(a,b,c), NoUnit, NoInverse(a).
Outcome<FinGroup> check_group(const FinSet& carrier, const FinMap& mul);
// rows[i][j] = carrier[i] · carrier[j]
Outcome<FinGroup> check_group(const FinSet& carrier, const std::vector<std::vector<Atom>>& rows);

FinGroup trivial_group();
FinGroup cyclic_group(std::size_t n);
FinGroup klein_four_group();
FinGroup symmetric_group_3();
// Every group of order 1, 2, 3, 4 and 6 up to isomorphism.
std::vector<FinGroup> small_groups();

class GAction {
 public:
  const FinGroup& group() const { return group_; }
  const FinSet& space() const { return space_; }
  const Product& domain() const { return domain_; }  // G×X
  const FinMap& act() const { return act_; }         // G×X -> X

  Index apply(Index g, Index x) const { return act_(g * space_.size() + x); }

  friend bool operator==(const GAction& a, const GAction& b) {
    return a.group_ == b.group_ && a.space_ == b.space_ && a.act_ == b.act_;
  }

 private:
  friend Outcome<GAction> check_action(const FinGroup& group, const FinSet& space, const FinMap& act);
  friend class EquivariantMap;
  GAction() = default;

  FinGroup group_;
  FinSet space_;
  Product domain_;
  FinMap act_;
};

// Violations: AssocFail(g,h,x), UnitFail(x).
Outcome<GAction> check_action(const FinGroup& group, const FinSet& space, const FinMap& act);
// rows[g][x] = g·x as atoms of space.
Outcome<GAction> check_action(const FinGroup& group, const FinSet& space, const std::vector<std::vector<Atom>>& rows);

GAction trivial_action(const FinGroup& group, const FinSet& space);
GAction regular_action(const FinGroup& group);
// G acting on G×U by left multiplication on the first factor.
GAction product_action(const FinGroup& group, const FinSet& base);
// The action carried along a bijection sigma: a.space -> Y, making sigma equivariant.
GAction transport_action(const GAction& a, const FinMap& sigma);
// Coproduct of actions on ∐ X_i.
GAction coproduct_action(const FinGroup& group, const Coproduct& c, const std::vector<GAction>& parts);

class EquivariantMap {
 public:
  const FinMap& map() const { return map_; }
  const GAction& src() const { return src_; }
  const GAction& dst() const { return dst_; }

  friend bool operator==(const EquivariantMap& a, const EquivariantMap& b) {
    return a.map_ == b.map_ && a.src_ == b.src_ && a.dst_ == b.dst_;
  }

 private:
  friend Outcome<EquivariantMap> check_equivariant(const FinMap& f, const GAction& a, const GAction& b);
  EquivariantMap() = default;

  FinMap map_;
  GAction src_;
  GAction dst_;
};

// Violation: EquivarianceFail(g,x).
Outcome<EquivariantMap> check_equivariant(const FinMap& f, const GAction& a, const GAction& b);

// The induced action on P ×_Y Z of two equivariant maps into a common
// G-object, obtained by mediating into the pullback.
struct PullbackAction {
  PullbackCert cert;
  GAction action;
};

PullbackAction pullback_action(const EquivariantMap& f, const EquivariantMap& g);

// Orbits in increasing order of their least element; each orbit sorted.
std::vector<std::vector<Index>> orbits(const GAction& a);
bool is_free(const GAction& a);

// An equivariant bijection h: A -> B with pb∘h = pa, or nullopt when none
// exists. Pass bang maps to ignore the base.
std::optional<FinMap> gset_isomorphism_over(const GAction& a, const GAction& b, const FinMap& pa,
                                            const FinMap& pb);

}  // namespace qstack
