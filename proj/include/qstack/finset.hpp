#pragma once

// The ambient category: explicit finite sets and total functions between
// them, with the limits and colimits the bundle and descent code consumes.
//
// Derived objects use canonical atom names so that two runs of the same
// construction produce byte-identical sets:
//   product / pullback apex   "(a,b)"
//   coproduct summand         "i·a"
//   coequalizer class         least representative of the class
// Sets are kept sorted under compare_atoms, which orders pairs and tags
// structurally; every construction emits its atoms already in that order.

#include <compare>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qstack/error.hpp"

namespace qstack {

using Atom = std::string;
using Index = std::uint32_t;

// Total order on atoms: naturals (numeric) < symbols < tags < pairs.
std::strong_ordering compare_atoms(std::string_view a, std::string_view b);
inline bool atom_less(std::string_view a, std::string_view b) { return compare_atoms(a, b) < 0; }

Atom pair_atom(std::string_view a, std::string_view b);
Atom tag_atom(std::size_t tag, std::string_view a);

class FinSet {
 public:
  FinSet();

  // Sorts; throws InvalidInput on duplicates.
  static FinSet of(std::vector<Atom> atoms);
  // {0, 1, ..., n-1}
  static FinSet range(std::size_t n);
  // Caller guarantees strictly increasing order (checked by assert).
  static FinSet from_sorted(std::vector<Atom> atoms);

  std::size_t size() const { return atoms_->size(); }
  bool empty() const { return atoms_->empty(); }
  const Atom& operator[](std::size_t i) const { return (*atoms_)[i]; }
  const std::vector<Atom>& atoms() const { return *atoms_; }
  auto begin() const { return atoms_->begin(); }
  auto end() const { return atoms_->end(); }

  std::optional<Index> find(std::string_view atom) const;
  Index index_of(std::string_view atom) const;  // throws InvalidInput
  bool contains(std::string_view atom) const { return find(atom).has_value(); }

  friend bool operator==(const FinSet& a, const FinSet& b) {
    return a.atoms_ == b.atoms_ || *a.atoms_ == *b.atoms_;
  }

 private:
  explicit FinSet(std::shared_ptr<const std::vector<Atom>> atoms) : atoms_(std::move(atoms)) {}
  std::shared_ptr<const std::vector<Atom>> atoms_;
};

std::string to_string(const FinSet& s);
std::ostream& operator<<(std::ostream& os, const FinSet& s);

class FinMap {
 public:
  FinMap() = default;
  // table[i] is the dst index of src[i]; validated.
  FinMap(FinSet src, FinSet dst, std::vector<Index> table);

  // images[i] is the dst atom for src[i].
  static FinMap from_images(FinSet src, FinSet dst, const std::vector<Atom>& images);
  static FinMap from_pairs(FinSet src, FinSet dst,
                           const std::vector<std::pair<Atom, Atom>>& assignment);

  const FinSet& src() const { return src_; }
  const FinSet& dst() const { return dst_; }
  Index operator()(std::size_t i) const { return table_[i]; }
  const Atom& apply(std::string_view atom) const { return dst_[table_[src_.index_of(atom)]]; }
  std::span<const Index> table() const { return table_; }

  friend bool operator==(const FinMap& a, const FinMap& b) {
    return a.table_ == b.table_ && a.src_ == b.src_ && a.dst_ == b.dst_;
  }

 private:
  FinSet src_;
  FinSet dst_;
  std::vector<Index> table_;
};

std::string to_string(const FinMap& f);
std::ostream& operator<<(std::ostream& os, const FinMap& f);

FinMap identity(const FinSet& a);
FinMap compose(const FinMap& g, const FinMap& f);  // g ∘ f
FinSet terminal();
FinMap bang(const FinSet& a);                       // a -> terminal()
FinMap point(const FinSet& a, Index i);             // terminal() -> a
FinMap constant(const FinSet& src, const FinSet& dst, Index value);
FinMap inclusion(const FinSet& sub, const FinSet& super);

struct Product {
  FinSet apex;
  FinMap proj1;
  FinMap proj2;
};

Product product(const FinSet& a, const FinSet& b);
// <u, v>: C -> A×B
FinMap pairing(const Product& p, const FinMap& u, const FinMap& v);
// f × g: A×B -> C×D over the two given products.
FinMap cross(const Product& from, const Product& to, const FinMap& f, const FinMap& g);
FinMap cross(const FinMap& f, const FinMap& g);

struct Coproduct {
  FinSet apex;
  std::vector<FinMap> injections;
};

Coproduct coproduct(const std::vector<FinSet>& parts);
// [m_0, ..., m_n]: ∐ A_i -> C. The target is required when there are no summands.
FinMap copair(const Coproduct& c, const std::vector<FinMap>& maps, std::optional<FinSet> target = std::nullopt);

struct PullbackCert {
  FinSet apex;
  FinMap proj1;  // to f.src
  FinMap proj2;  // to g.src
  FinMap f;
  FinMap g;
  std::vector<Index> block_start;  // first apex index with proj1 == a, size |f.src|+1
};

PullbackCert pullback(const FinMap& f, const FinMap& g);
// Unique t with proj1∘t = u and proj2∘t = v.
FinMap mediate_pullback(const PullbackCert& cert, const FinMap& u, const FinMap& v);
std::optional<Index> pullback_index(const PullbackCert& cert, Index a, Index b);

struct CoequalizerCert {
  FinMap gamma1;
  FinMap gamma2;
  FinSet quotient;
  FinMap proj;
  std::vector<Index> representative;  // class -> least dst index
};

CoequalizerCert coequalizer(const FinMap& gamma1, const FinMap& gamma2);
// Unique m with m∘proj = d.
FinMap mediate_coequalizer(const CoequalizerCert& cert, const FinMap& d);

struct MorphismPredicates {
  bool mono = false;
  bool epi = false;
  bool iso = false;
};

MorphismPredicates morphism_predicates(const FinMap& f);
bool is_injective(const FinMap& f);
bool is_surjective(const FinMap& f);
FinMap inverse(const FinMap& f);  // throws NotIso

struct DiagramArrow {
  std::size_t from;
  std::size_t to;
  FinMap map;
};

struct Diagram {
  std::vector<FinSet> objects;
  std::vector<DiagramArrow> arrows;
};

struct Colimit {
  FinSet apex;
  std::vector<FinMap> cocone;
};

Colimit colimit_of_diagram(const Diagram& d);

// Calls fn for every map src -> dst in lexicographic table order; stops
// early when fn returns false. Throws BoundExceeded above `bound` maps.
void for_each_map(const FinSet& src, const FinSet& dst, const std::function<bool(const FinMap&)>& fn,
                  std::uint64_t bound = 10'000'000);
std::uint64_t count_maps(std::size_t src_size, std::size_t dst_size);

// Same, restricted to maps m with q∘m = p (p: A -> Y, q: B -> Y).
void for_each_map_over(const FinMap& p, const FinMap& q, const std::function<bool(const FinMap&)>& fn,
                       std::uint64_t bound = 10'000'000);

}  // namespace qstack
