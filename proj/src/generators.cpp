#include "qstack/generators.hpp"

#include <algorithm>
#include <numeric>

#include "qstack/parallel.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace qstack {

int worker_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace qstack

namespace qstack::gen {

Rng case_rng(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return Rng(seq);
}

std::size_t uniform(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

FinSet random_set(Rng& rng, std::size_t lo, std::size_t hi) { return FinSet::range(uniform(rng, lo, hi)); }

FinMap random_map(Rng& rng, const FinSet& src, const FinSet& dst) {
  if (dst.empty() && !src.empty()) throw Error(ErrorKind::InvalidInput, "no maps into the empty set");
  std::vector<Index> t(src.size());
  for (auto& v : t) v = static_cast<Index>(uniform(rng, 0, dst.size() - 1));
  return FinMap(src, dst, std::move(t));
}

FinMap random_bijection(Rng& rng, const FinSet& a) {
  std::vector<Index> t(a.size());
  std::iota(t.begin(), t.end(), Index{0});
  std::shuffle(t.begin(), t.end(), rng);
  return FinMap(a, a, std::move(t));
}

FinGroup random_group(Rng& rng, std::size_t max_order) {
  std::vector<FinGroup> pool;
  for (auto& g : small_groups())
    if (g.order() <= max_order) pool.push_back(g);
  return pool[uniform(rng, 0, pool.size() - 1)];
}

std::vector<std::vector<Index>> subgroups(const FinGroup& group) {
  const std::size_t n = group.order();
  const Index e = group.identity_element();
  std::vector<std::vector<Index>> out;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    if (!(mask >> e & 1u)) continue;
    bool closed = true;
    for (Index a = 0; a < n && closed; ++a)
      for (Index b = 0; b < n && closed; ++b)
        if ((mask >> a & 1u) && (mask >> b & 1u)) closed = mask >> group.multiply(a, b) & 1u;
    if (!closed) continue;
    std::vector<Index> h;
    for (Index a = 0; a < n; ++a)
      if (mask >> a & 1u) h.push_back(a);
    out.push_back(std::move(h));
  }
  return out;
}

GAction coset_action(const FinGroup& group, const std::vector<Index>& subgroup) {
  const std::size_t n = group.order();
  // coset_of[g] = least element of gH
  std::vector<Index> coset_of(n);
  for (Index g = 0; g < n; ++g) {
    Index least = static_cast<Index>(n);
    for (Index h : subgroup) least = std::min(least, group.multiply(g, h));
    coset_of[g] = least;
  }
  std::vector<Index> reps(coset_of);
  std::sort(reps.begin(), reps.end());
  reps.erase(std::unique(reps.begin(), reps.end()), reps.end());
  const FinSet space = FinSet::range(reps.size());
  auto number = [&](Index least) {
    return static_cast<Index>(std::lower_bound(reps.begin(), reps.end(), least) - reps.begin());
  };
  const Product dom = product(group.carrier(), space);
  std::vector<Index> t(dom.apex.size());
  for (Index g = 0; g < n; ++g)
    for (Index c = 0; c < reps.size(); ++c) t[g * reps.size() + c] = number(coset_of[group.multiply(g, reps[c])]);
  return check_action(group, space, FinMap(dom.apex, space, std::move(t))).value();
}

GAction random_action(Rng& rng, const FinGroup& group, std::size_t max_orbits, std::size_t max_size) {
  const auto subs = subgroups(group);
  const std::size_t k = uniform(rng, 0, max_orbits);
  std::vector<GAction> parts;
  std::vector<FinSet> spaces;
  std::size_t total = 0;
  for (std::size_t i = 0; i < k; ++i) {
    GAction a = coset_action(group, subs[uniform(rng, 0, subs.size() - 1)]);
    if (total + a.space().size() > max_size) continue;
    total += a.space().size();
    spaces.push_back(a.space());
    parts.push_back(std::move(a));
  }
  const Coproduct c = coproduct(spaces);
  const GAction sum = coproduct_action(group, c, parts);
  const FinSet plain = FinSet::range(sum.space().size());
  std::vector<Index> t(plain.size());
  std::iota(t.begin(), t.end(), Index{0});
  std::shuffle(t.begin(), t.end(), rng);
  return transport_action(sum, FinMap(sum.space(), plain, std::move(t)));
}

std::optional<FinMap> random_equivariant(Rng& rng, const GAction& a, const GAction& b) {
  const std::size_t n = a.group().order();
  std::vector<Index> t(a.space().size());
  for (const auto& orbit : orbits(a)) {
    const Index r = orbit.front();
    std::vector<Index> admissible;
    for (Index y = 0; y < b.space().size(); ++y) {
      bool ok = true;
      for (Index g = 0; g < n && ok; ++g)
        if (a.apply(g, r) == r) ok = b.apply(g, y) == y;
      if (ok) admissible.push_back(y);
    }
    if (admissible.empty()) return std::nullopt;
    const Index y = admissible[uniform(rng, 0, admissible.size() - 1)];
    for (Index g = 0; g < n; ++g) t[a.apply(g, r)] = b.apply(g, y);
  }
  FinMap f(a.space(), b.space(), std::move(t));
  check_equivariant(f, a, b).value();
  return f;
}

Bundle random_bundle(Rng& rng, const FinGroup& group, const FinSet& base) {
  const Bundle triv = trivial_bundle(group, base);
  const FinMap sigma = random_bijection(rng, triv.total_space());
  const FinMap back = inverse(sigma);
  return is_principal_bundle(transport_action(triv.total(), sigma), compose(triv.proj().map(), back)).value();
}

std::optional<QSObject> random_object(Rng& rng, const QuotientStack& stack, const FinSet& base) {
  if (stack.x_action.space().empty() && !base.empty()) return std::nullopt;
  const Bundle b = random_bundle(rng, stack.group, base);
  auto alpha = random_equivariant(rng, b.total(), stack.x_action);
  if (!alpha) return std::nullopt;
  return check_qs_object(b, *alpha, stack.x_action).value();
}

CoveringFamily random_family(Rng& rng, const FinSet& base, std::size_t max_legs, std::size_t max_leg_size,
                             bool canonical) {
  const std::size_t k = uniform(rng, 1, std::max<std::size_t>(1, max_legs));
  std::vector<std::vector<Index>> tables(k);
  if (!base.empty())
    for (auto& t : tables) {
      t.resize(uniform(rng, 0, max_leg_size));
      for (auto& v : t) v = static_cast<Index>(uniform(rng, 0, base.size() - 1));
    }
  if (canonical) {
    std::vector<char> hit(base.size(), 0);
    for (const auto& t : tables)
      for (Index v : t) hit[v] = 1;
    for (Index y = 0; y < base.size(); ++y)
      if (!hit[y]) tables[uniform(rng, 0, k - 1)].push_back(y);
  }
  std::vector<FinMap> legs;
  for (auto& t : tables) legs.emplace_back(FinSet::range(t.size()), base, std::move(t));
  return make_family(base, std::move(legs));
}

}  // namespace qstack::gen
