#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qstack/quotient_stack.hpp"

namespace qstack {

// Overlap U_i ×_Y U_j of two legs, with pr1 into U_i and pr2 into U_j.
struct Overlaps {
  std::vector<std::vector<PullbackCert>> pairs;  // pairs[i][j]
};
Overlaps overlaps(const CoveringFamily& cover);

// Objects W_i over the legs U_i and isos
//   φ_ij: restrict(W_i, pr1_ij) -> restrict(W_j, pr2_ij)
// over every ordered overlap, including i = j.
struct DescentDatum {
  QuotientStack stack;
  CoveringFamily cover;
  std::vector<QSObject> objects;
  std::vector<std::vector<QSMorphism>> overlap_isos;  // [i][j]
};

// Builds a datum from raw maps on total spaces. Violations come from the
// morphism checks, or NotIso(i,j) for a non-bijective φ_ij.
Outcome<DescentDatum> make_descent_datum(const QuotientStack& stack, const CoveringFamily& cover, std::vector<QSObject> objects,
                                         const std::vector<std::vector<FinMap>>& overlap_maps);

// W_i = restrict(obj, f_i) and φ_ij the canonical reassociation isos.
DescentDatum restrict_to_datum(const QSObject& obj, const CoveringFamily& cover);

// Replaces W_i by its transport along sigmas[i] and conjugates φ.
DescentDatum twist_datum(const DescentDatum& d, const std::vector<FinMap>& sigmas);

// Base change of the datum along t: Z -> Y.
DescentDatum pullback_datum(const DescentDatum& d, const FinMap& t);

// Violation CocycleFail(i,j,k,point) at the first triple and point of
// U_i ×_Y U_j ×_Y U_k where φ_jk ∘ φ_ij != φ_ik.
Check check_cocycle(const DescentDatum& d);

// Locals m_i: restrict(x, f_i) -> restrict(y, f_i). Violation
// OverlapMismatch(i,j) when two locals differ on U_ij. Throws
// CoverNotCanonical, and NotCoequalized if δ fails to descend.
Outcome<QSMorphism> glue_morphisms(const CoveringFamily& cover, const QSObject& x, const QSObject& y,
                                   const std::vector<QSMorphism>& locals);

struct UniquenessResult {
  bool restrictions_agree = true;
  bool globally_equal = true;
  std::optional<std::size_t> leg;  // first leg where the restrictions differ
  std::optional<Atom> point;       // and a point of restrict(x, f_leg) there

  bool holds() const { return restrictions_agree == globally_equal; }
};
// Throws CoverNotCanonical.
UniquenessResult check_uniqueness(const CoveringFamily& cover, const QSMorphism& m1, const QSMorphism& m2);

struct GluingResult {
  QSObject glued;
  std::vector<QSMorphism> comparison_isos;  // ψ_i: restrict(glued, f_i) -> W_i
  std::size_t compatibility_squares = 0;
};

// Glues along the Čech coequalizer. Throws CocycleRequired for a datum
// failing the cocycle condition, CoverNotCanonical for a non-covering
// family. Every ψ_i and every square φ_ij against ψ_i, ψ_j is verified.
GluingResult glue_object(const DescentDatum& d);

// One entry of a verification corpus.
struct StackCase {
  QSObject object;
  CoveringFamily cover;
  std::uint64_t seed = 0;  // drives the twist and the sampled morphisms
};

struct ConditionTally {
  std::size_t checked = 0;
  std::size_t passed = 0;
  std::vector<std::string> counterexamples;

  bool ok() const { return checked == passed; }
};

struct StackReport {
  ConditionTally effectiveness;
  ConditionTally morphism_gluing;
  ConditionTally uniqueness;
  std::size_t cases = 0;
  std::size_t rejected_inputs = 0;
  std::vector<std::string> rejections;

  bool all_pass() const { return effectiveness.ok() && morphism_gluing.ok() && uniqueness.ok(); }
};

// Outcome of one case against the three conditions.
struct CaseResult {
  bool effective = false;
  bool glues_morphisms = false;
  bool unique = false;
  std::string detail;
};
CaseResult verify_case(const StackCase& c);

// Data given directly (for example from a site file): rejected inputs
// are counted, not failures.
struct DatumCase {
  std::string name;
  DescentDatum datum;
};

struct VerifyOptions {
  bool parallel = true;
};

StackReport verify_stack(const QuotientStack& stack, const std::vector<StackCase>& corpus,
                         const std::vector<DatumCase>& data = {}, const VerifyOptions& options = {});

// Every object over {0..n-1} for n <= max_base, each with its point cover
// and identity cover.
std::vector<StackCase> exhaustive_corpus(const QuotientStack& stack, std::size_t max_base, std::uint64_t seed = 0);
// budget random objects with random canonical covers.
std::vector<StackCase> random_corpus(const QuotientStack& stack, std::size_t budget, std::size_t max_base,
                                     std::uint64_t seed);

}  // namespace qstack
