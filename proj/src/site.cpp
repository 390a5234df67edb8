#include "qstack/site.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <random>

namespace qstack {

CoveringFamily make_family(FinSet target, std::vector<FinMap> legs) {
  for (std::size_t i = 0; i < legs.size(); ++i)
    if (!(legs[i].dst() == target))
      throw Error(ErrorKind::TargetMismatch, "leg " + std::to_string(i) + " does not land in " + to_string(target));
  return {std::move(target), std::move(legs)};
}

CoveringFamily identity_cover(const FinSet& base) { return {base, {identity(base)}}; }

CoveringFamily point_cover(const FinSet& base) {
  std::vector<FinMap> legs;
  legs.reserve(base.size());
  for (Index x = 0; x < base.size(); ++x) legs.push_back(point(base, x));
  return {base, std::move(legs)};
}

CoveringFamily pullback_family(const CoveringFamily& family, const FinMap& t) {
  if (!(t.dst() == family.target)) throw Error(ErrorKind::TargetMismatch, "base change along a map into another object");
  std::vector<FinMap> legs;
  legs.reserve(family.legs.size());
  for (const auto& f : family.legs) legs.push_back(pullback(f, t).proj2);
  return {t.src(), std::move(legs)};
}

std::optional<Factorization> sieve_member(const GeneratedSieve& sieve, const FinMap& g) {
  const CoveringFamily& fam = sieve.generators;
  if (!(g.dst() == fam.target)) throw Error(ErrorKind::TargetMismatch, "map does not land in the sieve's target");
  constexpr Index kNone = ~Index{0};
  for (std::size_t i = 0; i < fam.legs.size(); ++i) {
    const FinMap& f = fam.legs[i];
    // Least preimage of each target point under f.
    std::vector<Index> section(fam.target.size(), kNone);
    for (Index u = 0; u < f.src().size(); ++u)
      if (section[f(u)] == kNone) section[f(u)] = u;
    std::vector<Index> h(g.src().size());
    bool ok = true;
    for (Index z = 0; z < g.src().size() && ok; ++z) {
      h[z] = section[g(z)];
      ok = h[z] != kNone;
    }
    if (ok) return Factorization{i, FinMap(g.src(), f.src(), std::move(h))};
  }
  return std::nullopt;
}

bool is_jointly_surjective(const CoveringFamily& family) {
  std::vector<char> hit(family.target.size(), 0);
  for (const auto& f : family.legs)
    for (Index v : f.table()) hit[v] = 1;
  return std::all_of(hit.begin(), hit.end(), [](char c) { return c != 0; });
}

FinMap family_map(const CoveringFamily& family) {
  std::vector<FinSet> parts;
  parts.reserve(family.legs.size());
  for (const auto& f : family.legs) parts.push_back(f.src());
  return copair(coproduct(parts), family.legs, family.target);
}

bool is_effective_epi(const FinMap& f) {
  const PullbackCert kernel = pullback(f, f);
  const CoequalizerCert q = coequalizer(kernel.proj1, kernel.proj2);
  const FinMap comparison = mediate_coequalizer(q, f);
  const bool effective = morphism_predicates(comparison).iso;
  assert(effective == is_surjective(f));
  return effective;
}

bool is_universal_effective_epi(const FinMap& f, const UniversalityOptions& options) {
  if (!is_effective_epi(f)) return false;
  const FinSet& base = f.dst();
  bool ok = true;
  auto probe = [&](const FinMap& t) {
    ok = is_effective_epi(pullback(f, t).proj2);
    return ok;
  };
  for (std::size_t k = 0; k <= options.exhaustive_max_source && ok; ++k)
    for_each_map(FinSet::range(k), base, probe);
  if (!ok) return false;

  if (!base.empty()) {
    std::mt19937_64 rng(options.seed);
    std::uniform_int_distribution<std::size_t> size_dist(options.exhaustive_max_source + 1,
                                                         options.exhaustive_max_source + 3);
    std::uniform_int_distribution<Index> value_dist(0, static_cast<Index>(base.size() - 1));
    for (std::size_t s = 0; s < options.sample_budget && ok; ++s) {
      const std::size_t n = size_dist(rng);
      std::vector<Index> t(n);
      for (auto& v : t) v = value_dist(rng);
      probe(FinMap(FinSet::range(n), base, std::move(t)));
    }
  }
  assert(ok == is_surjective(f));
  return ok;
}

bool is_canonical_cover(const CoveringFamily& family, const UniversalityOptions& options) {
  const bool canonical = is_universal_effective_epi(family_map(family), options);
  assert(canonical == is_jointly_surjective(family));
  return canonical;
}

CechRealization cech_realization(const CoveringFamily& family) {
  const std::size_t n = family.legs.size();
  CechRealization out;
  out.overlaps.resize(n);
  std::vector<FinSet> leg_sources, pair_sources;
  for (const auto& f : family.legs) leg_sources.push_back(f.src());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      out.overlaps[i].push_back(pullback(family.legs[i], family.legs[j]));
      pair_sources.push_back(out.overlaps[i][j].apex);
    }
  out.legs = coproduct(leg_sources);
  out.pairs = coproduct(pair_sources);

  std::vector<FinMap> to_first, to_second;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      to_first.push_back(compose(out.legs.injections[i], out.overlaps[i][j].proj1));
      to_second.push_back(compose(out.legs.injections[j], out.overlaps[i][j].proj2));
    }
  out.quotient = coequalizer(copair(out.pairs, to_first, out.legs.apex), copair(out.pairs, to_second, out.legs.apex));
  out.comparison = mediate_coequalizer(out.quotient, family_map(family));
  return out;
}

bool is_colim_sieve(const GeneratedSieve& sieve) {
  return morphism_predicates(cech_realization(sieve.generators).comparison).iso;
}

bool extended_colimit_is_target(const GeneratedSieve& sieve, const std::vector<FinMap>& extra_members) {
  const CoveringFamily& fam = sieve.generators;
  const std::size_t n = fam.legs.size();
  Diagram d;
  std::vector<FinMap> to_target;
  for (const auto& f : fam.legs) {
    d.objects.push_back(f.src());
    to_target.push_back(f);
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const PullbackCert c = pullback(fam.legs[i], fam.legs[j]);
      const std::size_t o = d.objects.size();
      d.objects.push_back(c.apex);
      to_target.push_back(compose(fam.legs[i], c.proj1));
      d.arrows.push_back({o, i, c.proj1});
      d.arrows.push_back({o, j, c.proj2});
    }
  for (const auto& h : extra_members) {
    auto fact = sieve_member(sieve, h);
    if (!fact) throw Error(ErrorKind::InvalidInput, "extra map is not a member of the sieve");
    const std::size_t o = d.objects.size();
    d.objects.push_back(h.src());
    to_target.push_back(h);
    d.arrows.push_back({o, fact->leg, fact->through});
  }
  const Colimit colim = colimit_of_diagram(d);

  // Induced map out of the colimit, checked for well-definedness.
  constexpr Index kUnset = ~Index{0};
  std::vector<Index> t(colim.apex.size(), kUnset);
  for (std::size_t o = 0; o < d.objects.size(); ++o)
    for (Index x = 0; x < d.objects[o].size(); ++x) {
      const Index c = colim.cocone[o](x);
      const Index y = to_target[o](x);
      if (t[c] == kUnset) t[c] = y;
      else if (t[c] != y) return false;
    }
  for (Index v : t)
    if (v == kUnset) return false;
  return morphism_predicates(FinMap(colim.apex, fam.target, std::move(t))).iso;
}

namespace {

bool sheaf_exhaustive(const CoveringFamily& family, const FinSet& a, const SheafBounds& bounds) {
  const CechRealization cech = cech_realization(family);
  const FinSet& legs = cech.legs.apex;
  const FinMap fam = family_map(family);
  const FinMap& gamma1 = cech.quotient.gamma1;
  const FinMap& gamma2 = cech.quotient.gamma2;

  if (count_maps(legs.size(), a.size()) > bounds.max_matching_candidates ||
      count_maps(family.target.size(), a.size()) > bounds.max_global_sections)
    throw Error(ErrorKind::BoundExceeded, "sheaf check exceeds the exhaustive bounds");

  // Restrictions s∘(∐f_i) of every global section, with multiplicity.
  std::map<std::vector<Index>, std::size_t> restrictions;
  for_each_map(
      family.target, a,
      [&](const FinMap& s) {
        const FinMap r = compose(s, fam);
        ++restrictions[std::vector<Index>(r.table().begin(), r.table().end())];
        return true;
      },
      bounds.max_global_sections);

  bool ok = true;
  for_each_map(
      legs, a,
      [&](const FinMap& s) {
        for (std::size_t k = 0; k < gamma1.src().size(); ++k)
          if (s(gamma1(k)) != s(gamma2(k))) return true;  // not a matching family
        auto it = restrictions.find(std::vector<Index>(s.table().begin(), s.table().end()));
        ok = it != restrictions.end() && it->second == 1;
        return ok;
      },
      bounds.max_matching_candidates);
  return ok;
}

// Matching families are exactly the maps out of the Čech quotient; the
// sheaf condition asks that each extends uniquely along the comparison.
bool sheaf_constructive(const CoveringFamily& family, const FinSet& a) {
  const CechRealization cech = cech_realization(family);
  const MorphismPredicates p = morphism_predicates(cech.comparison);
  if (p.iso) return true;
  if (!p.mono && a.size() >= 2) return false;  // a section separating two classes cannot be defined on Y
  if (!p.epi) {
    if (a.size() >= 2) return false;  // points outside every image take any value
    if (a.empty()) return !cech.quotient.quotient.empty();  // the empty section must extend to nonempty Y
  }
  return true;
}

}  // namespace

bool check_sheaf_condition(const CoveringFamily& family, const FinSet& a, SheafStrategy strategy,
                           const SheafBounds& bounds) {
  switch (strategy) {
    case SheafStrategy::Exhaustive:
      return sheaf_exhaustive(family, a, bounds);
    case SheafStrategy::Constructive:
      return sheaf_constructive(family, a);
    case SheafStrategy::Auto:
      break;
  }
  std::size_t total = 0;
  for (const auto& f : family.legs) total += f.src().size();
  if (count_maps(total, a.size()) <= bounds.max_matching_candidates &&
      count_maps(family.target.size(), a.size()) <= bounds.max_global_sections)
    return sheaf_exhaustive(family, a, bounds);
  return sheaf_constructive(family, a);
}

}  // namespace qstack
