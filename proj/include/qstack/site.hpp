#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "qstack/finset.hpp"

namespace qstack {

// Finitely many maps into a common target. An empty family is allowed.
struct CoveringFamily {
  FinSet target;
  std::vector<FinMap> legs;
};

// Throws TargetMismatch when a leg does not land in target.
CoveringFamily make_family(FinSet target, std::vector<FinMap> legs);
CoveringFamily identity_cover(const FinSet& base);
// One leg T -> base per base atom.
CoveringFamily point_cover(const FinSet& base);
// t*F: the legs U_i ×_Y Z -> Z for t: Z -> Y.
CoveringFamily pullback_family(const CoveringFamily& family, const FinMap& t);

// A sieve, represented by the family that generates it.
struct GeneratedSieve {
  CoveringFamily generators;
};

struct Factorization {
  std::size_t leg;
  FinMap through;  // legs[leg] ∘ through == g
};

// Decides membership: g factors through leg f_i iff im(g) ⊆ im(f_i).
std::optional<Factorization> sieve_member(const GeneratedSieve& sieve, const FinMap& g);

bool is_jointly_surjective(const CoveringFamily& family);
// ∐ f_i : ∐ U_i -> Y
FinMap family_map(const CoveringFamily& family);

// Coequalizer of the kernel pair, compared against the codomain.
bool is_effective_epi(const FinMap& f);

struct UniversalityOptions {
  std::size_t exhaustive_max_source = 3;  // all t: Z -> Y with |Z| up to this
  std::size_t sample_budget = 8;          // plus this many random larger t
  std::uint64_t seed = 0;
};

bool is_universal_effective_epi(const FinMap& f, const UniversalityOptions& options = {});
bool is_canonical_cover(const CoveringFamily& family, const UniversalityOptions& options = {});

// The coequalizer of ∐_{i,j} U_i ×_Y U_j ⇉ ∐_i U_i together with its
// comparison map to the target.
struct CechRealization {
  std::vector<std::vector<PullbackCert>> overlaps;  // overlaps[i][j] = pullback(f_i, f_j)
  Coproduct legs;
  Coproduct pairs;  // summand i*n + j is overlaps[i][j].apex
  CoequalizerCert quotient;
  FinMap comparison;  // quotient -> target
};

CechRealization cech_realization(const CoveringFamily& family);

bool is_colim_sieve(const GeneratedSieve& sieve);

// Colimit of the Čech diagram extended by further sieve members (each
// attached along its factorization), compared against the target.
// Throws InvalidInput if an extra map is not in the sieve.
bool extended_colimit_is_target(const GeneratedSieve& sieve, const std::vector<FinMap>& extra_members);

enum class SheafStrategy { Auto, Exhaustive, Constructive };

struct SheafBounds {
  std::uint64_t max_matching_candidates = 1'000'000;  // |A|^(Σ|U_i|)
  std::uint64_t max_global_sections = 1'000'000;      // |A|^|Y|
};

// Every matching family U_i -> A glues to a unique Y -> A.
// Throws BoundExceeded when Exhaustive is forced beyond the bounds.
bool check_sheaf_condition(const CoveringFamily& family, const FinSet& a,
                           SheafStrategy strategy = SheafStrategy::Auto, const SheafBounds& bounds = {});

}  // namespace qstack
