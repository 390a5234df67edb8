#include "qstack/finset.hpp"

#include <algorithm>
#include <cassert>
#include <ostream>
#include <sstream>

#include "qstack/disjoint_sets.hpp"

namespace qstack {

namespace {

constexpr std::string_view kTagSep = "\xC2\xB7";  // U+00B7 MIDDLE DOT

enum class AtomKind { Natural = 0, Symbol = 1, Tag = 2, Pair = 3 };

struct ParsedAtom {
  AtomKind kind;
  std::string_view first;
  std::string_view second;
};

bool is_digit(char c) { return c >= '0' && c <= '9'; }

// Digit strings without leading zeros, so numeric order is injective.
bool is_natural(std::string_view s) {
  if (s.empty() || !std::all_of(s.begin(), s.end(), is_digit)) return false;
  return s.size() == 1 || s.front() != '0';
}

ParsedAtom parse_atom(std::string_view s) {
  if (is_natural(s)) return {AtomKind::Natural, s, {}};

  std::size_t d = 0;
  while (d < s.size() && is_digit(s[d])) ++d;
  if (d > 0 && is_natural(s.substr(0, d)) && s.substr(d).starts_with(kTagSep))
    return {AtomKind::Tag, s.substr(0, d), s.substr(d + kTagSep.size())};

  if (s.size() >= 3 && s.front() == '(' && s.back() == ')') {
    int depth = 0;
    for (std::size_t i = 1; i + 1 < s.size(); ++i) {
      const char c = s[i];
      if (c == '(') {
        ++depth;
      } else if (c == ')') {
        if (depth == 0) break;
        --depth;
      } else if (c == ',' && depth == 0) {
        return {AtomKind::Pair, s.substr(1, i - 1), s.substr(i + 1, s.size() - i - 2)};
      }
    }
  }
  return {AtomKind::Symbol, s, {}};
}

std::strong_ordering compare_naturals(std::string_view a, std::string_view b) {
  if (a.size() != b.size()) return a.size() <=> b.size();
  return a.compare(b) <=> 0;
}

}  // namespace

std::strong_ordering compare_atoms(std::string_view a, std::string_view b) {
  if (a == b) return std::strong_ordering::equal;
  const ParsedAtom pa = parse_atom(a);
  const ParsedAtom pb = parse_atom(b);
  if (pa.kind != pb.kind) return static_cast<int>(pa.kind) <=> static_cast<int>(pb.kind);
  switch (pa.kind) {
    case AtomKind::Natural:
      return compare_naturals(pa.first, pb.first);
    case AtomKind::Symbol:
      return pa.first.compare(pb.first) <=> 0;
    case AtomKind::Tag:
      if (auto c = compare_naturals(pa.first, pb.first); c != 0) return c;
      return compare_atoms(pa.second, pb.second);
    case AtomKind::Pair:
      if (auto c = compare_atoms(pa.first, pb.first); c != 0) return c;
      return compare_atoms(pa.second, pb.second);
  }
  return std::strong_ordering::equal;
}

Atom pair_atom(std::string_view a, std::string_view b) {
  Atom out;
  out.reserve(a.size() + b.size() + 3);
  out += '(';
  out += a;
  out += ',';
  out += b;
  out += ')';
  return out;
}

Atom tag_atom(std::size_t tag, std::string_view a) {
  Atom out = std::to_string(tag);
  out += kTagSep;
  out += a;
  return out;
}

// ---------------------------------------------------------------------------
// FinSet

FinSet::FinSet() : atoms_(std::make_shared<const std::vector<Atom>>()) {}

FinSet FinSet::of(std::vector<Atom> atoms) {
  std::sort(atoms.begin(), atoms.end(), [](const Atom& x, const Atom& y) { return atom_less(x, y); });
  auto dup = std::adjacent_find(atoms.begin(), atoms.end());
  if (dup != atoms.end()) throw Error(ErrorKind::InvalidInput, "duplicate atom '" + *dup + "'");
  return FinSet(std::make_shared<const std::vector<Atom>>(std::move(atoms)));
}

FinSet FinSet::range(std::size_t n) {
  std::vector<Atom> atoms;
  atoms.reserve(n);
  for (std::size_t i = 0; i < n; ++i) atoms.push_back(std::to_string(i));
  return FinSet(std::make_shared<const std::vector<Atom>>(std::move(atoms)));
}

FinSet FinSet::from_sorted(std::vector<Atom> atoms) {
  assert(std::adjacent_find(atoms.begin(), atoms.end(), [](const Atom& x, const Atom& y) {
           return !atom_less(x, y);
         }) == atoms.end());
  return FinSet(std::make_shared<const std::vector<Atom>>(std::move(atoms)));
}

std::optional<Index> FinSet::find(std::string_view atom) const {
  auto it = std::lower_bound(atoms_->begin(), atoms_->end(), atom,
                             [](const Atom& x, std::string_view y) { return atom_less(x, y); });
  if (it == atoms_->end() || *it != atom) return std::nullopt;
  return static_cast<Index>(it - atoms_->begin());
}

Index FinSet::index_of(std::string_view atom) const {
  if (auto i = find(atom)) return *i;
  throw Error(ErrorKind::InvalidInput, "atom '" + std::string(atom) + "' not in " + to_string(*this));
}

std::string to_string(const FinSet& s) {
  std::string out = "{";
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) out += ", ";
    out += s[i];
  }
  return out + "}";
}

std::ostream& operator<<(std::ostream& os, const FinSet& s) { return os << to_string(s); }

// ---------------------------------------------------------------------------
// FinMap

FinMap::FinMap(FinSet src, FinSet dst, std::vector<Index> table)
    : src_(std::move(src)), dst_(std::move(dst)), table_(std::move(table)) {
  if (table_.size() != src_.size())
    throw Error(ErrorKind::InvalidInput, "map table has " + std::to_string(table_.size()) +
                                             " entries for a source of size " + std::to_string(src_.size()));
  for (Index v : table_)
    if (v >= dst_.size()) throw Error(ErrorKind::InvalidInput, "map image outside codomain");
}

FinMap FinMap::from_images(FinSet src, FinSet dst, const std::vector<Atom>& images) {
  if (images.size() != src.size()) throw Error(ErrorKind::InvalidInput, "image list length differs from source size");
  std::vector<Index> table;
  table.reserve(images.size());
  for (const auto& a : images) table.push_back(dst.index_of(a));
  return FinMap(std::move(src), std::move(dst), std::move(table));
}

FinMap FinMap::from_pairs(FinSet src, FinSet dst, const std::vector<std::pair<Atom, Atom>>& assignment) {
  constexpr Index kUnset = ~Index{0};
  std::vector<Index> table(src.size(), kUnset);
  for (const auto& [a, b] : assignment) {
    Index i = src.index_of(a);
    if (table[i] != kUnset) throw Error(ErrorKind::InvalidInput, "atom '" + a + "' assigned twice");
    table[i] = dst.index_of(b);
  }
  for (std::size_t i = 0; i < table.size(); ++i)
    if (table[i] == kUnset) throw Error(ErrorKind::InvalidInput, "map undefined on '" + src[i] + "'");
  return FinMap(std::move(src), std::move(dst), std::move(table));
}

std::string to_string(const FinMap& f) {
  std::string out = "{";
  for (std::size_t i = 0; i < f.src().size(); ++i) {
    if (i) out += ", ";
    out += f.src()[i] + " -> " + f.dst()[f(i)];
  }
  return out + "}";
}

std::ostream& operator<<(std::ostream& os, const FinMap& f) { return os << to_string(f); }

// ---------------------------------------------------------------------------
// Basic morphisms

FinMap identity(const FinSet& a) {
  std::vector<Index> t(a.size());
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = static_cast<Index>(i);
  return FinMap(a, a, std::move(t));
}

FinMap compose(const FinMap& g, const FinMap& f) {
  if (!(f.dst() == g.src()))
    throw Error(ErrorKind::SrcDstMismatch, "cannot compose: " + to_string(f.dst()) + " vs " + to_string(g.src()));
  std::vector<Index> t(f.src().size());
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = g(f(i));
  return FinMap(f.src(), g.dst(), std::move(t));
}

FinSet terminal() {
  static const FinSet t = FinSet::of({"*"});
  return t;
}

FinMap bang(const FinSet& a) { return FinMap(a, terminal(), std::vector<Index>(a.size(), 0)); }

FinMap point(const FinSet& a, Index i) {
  if (i >= a.size()) throw Error(ErrorKind::InvalidInput, "point index out of range");
  return FinMap(terminal(), a, {i});
}

FinMap constant(const FinSet& src, const FinSet& dst, Index value) {
  if (value >= dst.size()) throw Error(ErrorKind::InvalidInput, "constant value out of range");
  return FinMap(src, dst, std::vector<Index>(src.size(), value));
}

FinMap inclusion(const FinSet& sub, const FinSet& super) {
  std::vector<Index> t;
  t.reserve(sub.size());
  for (const auto& a : sub) t.push_back(super.index_of(a));
  return FinMap(sub, super, std::move(t));
}

// ---------------------------------------------------------------------------
// Products

Product product(const FinSet& a, const FinSet& b) {
  std::vector<Atom> atoms;
  std::vector<Index> p1, p2;
  atoms.reserve(a.size() * b.size());
  p1.reserve(a.size() * b.size());
  p2.reserve(a.size() * b.size());
  for (Index i = 0; i < a.size(); ++i)
    for (Index j = 0; j < b.size(); ++j) {
      atoms.push_back(pair_atom(a[i], b[j]));
      p1.push_back(i);
      p2.push_back(j);
    }
  FinSet apex = FinSet::from_sorted(std::move(atoms));
  return {apex, FinMap(apex, a, std::move(p1)), FinMap(apex, b, std::move(p2))};
}

FinMap pairing(const Product& p, const FinMap& u, const FinMap& v) {
  if (!(u.src() == v.src())) throw Error(ErrorKind::SrcMismatch, "pairing of maps with different sources");
  if (!(u.dst() == p.proj1.dst()) || !(v.dst() == p.proj2.dst()))
    throw Error(ErrorKind::CodomainMismatch, "pairing legs do not land in the product factors");
  const std::size_t nb = p.proj2.dst().size();
  std::vector<Index> t(u.src().size());
  for (std::size_t c = 0; c < t.size(); ++c) t[c] = static_cast<Index>(u(c) * nb + v(c));
  return FinMap(u.src(), p.apex, std::move(t));
}

FinMap cross(const Product& from, const Product& to, const FinMap& f, const FinMap& g) {
  return pairing(to, compose(f, from.proj1), compose(g, from.proj2));
}

FinMap cross(const FinMap& f, const FinMap& g) {
  return cross(product(f.src(), g.src()), product(f.dst(), g.dst()), f, g);
}

// ---------------------------------------------------------------------------
// Coproducts

Coproduct coproduct(const std::vector<FinSet>& parts) {
  std::vector<Atom> atoms;
  std::size_t total = 0;
  for (const auto& p : parts) total += p.size();
  atoms.reserve(total);
  for (std::size_t i = 0; i < parts.size(); ++i)
    for (const auto& a : parts[i]) atoms.push_back(tag_atom(i, a));
  FinSet apex = FinSet::from_sorted(std::move(atoms));

  std::vector<FinMap> injections;
  injections.reserve(parts.size());
  Index offset = 0;
  for (const auto& p : parts) {
    std::vector<Index> t(p.size());
    for (std::size_t k = 0; k < t.size(); ++k) t[k] = offset + static_cast<Index>(k);
    offset += static_cast<Index>(p.size());
    injections.emplace_back(p, apex, std::move(t));
  }
  return {apex, std::move(injections)};
}

FinMap copair(const Coproduct& c, const std::vector<FinMap>& maps, std::optional<FinSet> target) {
  if (maps.size() != c.injections.size())
    throw Error(ErrorKind::ShapeMismatch, "copair needs one map per summand");
  std::vector<Index> t;
  t.reserve(c.apex.size());
  for (std::size_t i = 0; i < maps.size(); ++i) {
    if (!(maps[i].src() == c.injections[i].src()))
      throw Error(ErrorKind::SrcMismatch, "copair leg " + std::to_string(i) + " has the wrong source");
    if (!target) target = maps[i].dst();
    else if (!(*target == maps[i].dst()))
      throw Error(ErrorKind::CodomainMismatch, "copair legs disagree on codomain");
    for (Index v : maps[i].table()) t.push_back(v);
  }
  if (!target) throw Error(ErrorKind::ShapeMismatch, "copair of the empty coproduct needs an explicit target");
  return FinMap(c.apex, *target, std::move(t));
}

// ---------------------------------------------------------------------------
// Pullbacks

PullbackCert pullback(const FinMap& f, const FinMap& g) {
  if (!(f.dst() == g.dst()))
    throw Error(ErrorKind::CodomainMismatch, "pullback of maps into " + to_string(f.dst()) + " and " +
                                                 to_string(g.dst()));
  // Bucket g's source by image; buckets stay in increasing source order.
  std::vector<std::vector<Index>> over(g.dst().size());
  for (Index b = 0; b < g.src().size(); ++b) over[g(b)].push_back(b);

  std::vector<Atom> atoms;
  std::vector<Index> p1, p2;
  std::vector<Index> block_start(f.src().size() + 1, 0);
  for (Index a = 0; a < f.src().size(); ++a) {
    block_start[a] = static_cast<Index>(atoms.size());
    for (Index b : over[f(a)]) {
      atoms.push_back(pair_atom(f.src()[a], g.src()[b]));
      p1.push_back(a);
      p2.push_back(b);
    }
  }
  block_start[f.src().size()] = static_cast<Index>(atoms.size());
  FinSet apex = FinSet::from_sorted(std::move(atoms));
  return {apex, FinMap(apex, f.src(), std::move(p1)), FinMap(apex, g.src(), std::move(p2)), f, g,
          std::move(block_start)};
}

std::optional<Index> pullback_index(const PullbackCert& cert, Index a, Index b) {
  const auto p2 = cert.proj2.table();
  auto first = p2.begin() + cert.block_start[a];
  auto last = p2.begin() + cert.block_start[a + 1];
  auto it = std::lower_bound(first, last, b);
  if (it == last || *it != b) return std::nullopt;
  return static_cast<Index>(it - p2.begin());
}

FinMap mediate_pullback(const PullbackCert& cert, const FinMap& u, const FinMap& v) {
  if (!(u.src() == v.src())) throw Error(ErrorKind::SrcMismatch, "mediating legs have different sources");
  if (!(u.dst() == cert.f.src()) || !(v.dst() == cert.g.src()))
    throw Error(ErrorKind::SrcDstMismatch, "mediating legs do not land on the cospan");
  std::vector<Index> t(u.src().size());
  for (std::size_t c = 0; c < t.size(); ++c) {
    if (cert.f(u(c)) != cert.g(v(c)))
      throw Error(ErrorKind::SquareNotCommuting, "f∘u and g∘v differ at '" + u.src()[c] + "'");
    t[c] = *pullback_index(cert, u(c), v(c));
  }
  return FinMap(u.src(), cert.apex, std::move(t));
}

// ---------------------------------------------------------------------------
// Coequalizers

CoequalizerCert coequalizer(const FinMap& gamma1, const FinMap& gamma2) {
  if (!(gamma1.src() == gamma2.src()) || !(gamma1.dst() == gamma2.dst()))
    throw Error(ErrorKind::ShapeMismatch, "coequalizer of a non-parallel pair");
  const FinSet& dst = gamma1.dst();
  DisjointSets classes(dst.size());
  for (std::size_t k = 0; k < gamma1.src().size(); ++k) classes.unite(gamma1(k), gamma2(k));

  constexpr Index kNone = ~Index{0};
  std::vector<Index> class_of_root(dst.size(), kNone);
  std::vector<Index> representative;
  std::vector<Atom> atoms;
  std::vector<Index> proj(dst.size());
  for (Index x = 0; x < dst.size(); ++x) {
    Index r = classes.find(x);
    if (class_of_root[r] == kNone) {
      class_of_root[r] = static_cast<Index>(representative.size());
      representative.push_back(x);
      atoms.push_back(dst[x]);
    }
    proj[x] = class_of_root[r];
  }
  FinSet quotient = FinSet::from_sorted(std::move(atoms));
  return {gamma1, gamma2, quotient, FinMap(dst, quotient, std::move(proj)), std::move(representative)};
}

FinMap mediate_coequalizer(const CoequalizerCert& cert, const FinMap& d) {
  if (!(d.src() == cert.gamma1.dst())) throw Error(ErrorKind::SrcMismatch, "map does not start at the coequalized object");
  for (std::size_t k = 0; k < cert.gamma1.src().size(); ++k)
    if (d(cert.gamma1(k)) != d(cert.gamma2(k)))
      throw Error(ErrorKind::NotCoequalized, "map separates '" + d.src()[cert.gamma1(k)] + "' and '" +
                                                 d.src()[cert.gamma2(k)] + "'");
  std::vector<Index> t(cert.quotient.size());
  for (std::size_t c = 0; c < t.size(); ++c) t[c] = d(cert.representative[c]);
  return FinMap(cert.quotient, d.dst(), std::move(t));
}

// ---------------------------------------------------------------------------
// Predicates

bool is_injective(const FinMap& f) {
  std::vector<char> hit(f.dst().size(), 0);
  for (Index v : f.table()) {
    if (hit[v]) return false;
    hit[v] = 1;
  }
  return true;
}

bool is_surjective(const FinMap& f) {
  std::vector<char> hit(f.dst().size(), 0);
  std::size_t count = 0;
  for (Index v : f.table())
    if (!hit[v]) {
      hit[v] = 1;
      ++count;
    }
  return count == f.dst().size();
}

MorphismPredicates morphism_predicates(const FinMap& f) {
  MorphismPredicates p;
  p.mono = is_injective(f);
  p.epi = is_surjective(f);
  p.iso = p.mono && p.epi;
  return p;
}

FinMap inverse(const FinMap& f) {
  if (!morphism_predicates(f).iso) throw Error(ErrorKind::NotIso, "map is not a bijection: " + to_string(f));
  std::vector<Index> t(f.dst().size());
  for (std::size_t i = 0; i < f.src().size(); ++i) t[f(i)] = static_cast<Index>(i);
  return FinMap(f.dst(), f.src(), std::move(t));
}

// ---------------------------------------------------------------------------
// Colimits of finite diagrams

Colimit colimit_of_diagram(const Diagram& d) {
  std::vector<FinSet> sources;
  sources.reserve(d.arrows.size());
  for (std::size_t k = 0; k < d.arrows.size(); ++k) {
    const auto& a = d.arrows[k];
    if (a.from >= d.objects.size() || a.to >= d.objects.size())
      throw Error(ErrorKind::DanglingArrow, "arrow " + std::to_string(k) + " references a missing object");
    if (!(a.map.src() == d.objects[a.from]) || !(a.map.dst() == d.objects[a.to]))
      throw Error(ErrorKind::DanglingArrow, "arrow " + std::to_string(k) + " does not match its endpoints");
    sources.push_back(a.map.src());
  }
  const Coproduct objs = coproduct(d.objects);
  const Coproduct srcs = coproduct(sources);

  // ∐ sources ⇉ ∐ objects: identity-inclusion versus the arrow itself.
  std::vector<Index> t1, t2;
  t1.reserve(srcs.apex.size());
  t2.reserve(srcs.apex.size());
  for (std::size_t k = 0; k < d.arrows.size(); ++k) {
    const auto& a = d.arrows[k];
    for (Index x = 0; x < a.map.src().size(); ++x) {
      t1.push_back(objs.injections[a.from](x));
      t2.push_back(objs.injections[a.to](a.map(x)));
    }
  }
  const CoequalizerCert q =
      coequalizer(FinMap(srcs.apex, objs.apex, std::move(t1)), FinMap(srcs.apex, objs.apex, std::move(t2)));

  std::vector<FinMap> cocone;
  cocone.reserve(d.objects.size());
  for (const auto& inj : objs.injections) cocone.push_back(compose(q.proj, inj));
  return {q.quotient, std::move(cocone)};
}

// ---------------------------------------------------------------------------
// Enumeration

std::uint64_t count_maps(std::size_t src_size, std::size_t dst_size) {
  std::uint64_t n = 1;
  for (std::size_t i = 0; i < src_size; ++i) {
    if (dst_size == 0) return 0;
    if (n > UINT64_MAX / dst_size) return UINT64_MAX;
    n *= dst_size;
  }
  return n;
}

void for_each_map(const FinSet& src, const FinSet& dst, const std::function<bool(const FinMap&)>& fn,
                  std::uint64_t bound) {
  const std::uint64_t total = count_maps(src.size(), dst.size());
  if (total > bound)
    throw Error(ErrorKind::BoundExceeded, std::to_string(dst.size()) + "^" + std::to_string(src.size()) +
                                              " maps exceed the enumeration bound");
  if (total == 0) return;
  std::vector<Index> t(src.size(), 0);
  while (true) {
    if (!fn(FinMap(src, dst, t))) return;
    std::size_t i = t.size();
    while (i > 0) {
      --i;
      if (++t[i] < dst.size()) break;
      t[i] = 0;
      if (i == 0) return;
    }
    if (t.empty()) return;
  }
}

void for_each_map_over(const FinMap& p, const FinMap& q, const std::function<bool(const FinMap&)>& fn,
                       std::uint64_t bound) {
  if (!(p.dst() == q.dst())) throw Error(ErrorKind::TargetMismatch, "maps over different targets");
  std::vector<std::vector<Index>> over(q.dst().size());
  for (Index b = 0; b < q.src().size(); ++b) over[q(b)].push_back(b);
  const std::size_t n = p.src().size();
  std::uint64_t total = 1;
  for (Index a = 0; a < n; ++a) {
    total *= over[p(a)].size();
    if (total > bound) throw Error(ErrorKind::BoundExceeded, "maps over the target exceed the enumeration bound");
  }
  if (total == 0) return;
  std::vector<std::size_t> digit(n, 0);
  std::vector<Index> t(n);
  while (true) {
    for (Index a = 0; a < n; ++a) t[a] = over[p(a)][digit[a]];
    if (!fn(FinMap(p.src(), q.src(), t))) return;
    std::size_t i = n;
    while (i > 0) {
      --i;
      if (++digit[i] < over[p(i)].size()) break;
      digit[i] = 0;
      if (i == 0) return;
    }
    if (n == 0) return;
  }
}

}  // namespace qstack
