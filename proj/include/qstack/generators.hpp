#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "qstack/quotient_stack.hpp"

// Random instances for property checks and verification corpora.
namespace qstack::gen {

using Rng = std::mt19937_64;

// Independent stream for case `index` of a run seeded with `seed`.
Rng case_rng(std::uint64_t seed, std::uint64_t index);

std::size_t uniform(Rng& rng, std::size_t lo, std::size_t hi);  // inclusive
FinSet random_set(Rng& rng, std::size_t lo, std::size_t hi);
FinMap random_map(Rng& rng, const FinSet& src, const FinSet& dst);
FinMap random_bijection(Rng& rng, const FinSet& a);

// One of small_groups() of order at most max_order.
FinGroup random_group(Rng& rng, std::size_t max_order);

// Subgroups as sorted index lists.
std::vector<std::vector<Index>> subgroups(const FinGroup& group);
// G acting on the left cosets G/H, cosets numbered by least element.
GAction coset_action(const FinGroup& group, const std::vector<Index>& subgroup);
// A disjoint union of 0..max_orbits coset spaces, relabeled at random.
GAction random_action(Rng& rng, const FinGroup& group, std::size_t max_orbits, std::size_t max_size = 6);

// A random equivariant map, or nullopt when some orbit of a has no
// admissible image in b.
std::optional<FinMap> random_equivariant(Rng& rng, const GAction& a, const GAction& b);

// The trivial bundle transported along a random bijection.
Bundle random_bundle(Rng& rng, const FinGroup& group, const FinSet& base);
// nullopt when X is empty over a nonempty base.
std::optional<QSObject> random_object(Rng& rng, const QuotientStack& stack, const FinSet& base);

// 1..max_legs legs with sources of size 0..max_leg_size; when canonical,
// points missed by every leg are added to random legs.
CoveringFamily random_family(Rng& rng, const FinSet& base, std::size_t max_legs, std::size_t max_leg_size,
                             bool canonical);

}  // namespace qstack::gen
