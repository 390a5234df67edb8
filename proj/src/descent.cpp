#include "qstack/descent.hpp"

#include "qstack/generators.hpp"
#include "qstack/parallel.hpp"

namespace qstack {

namespace {

QSMorphism eps(const QSObject& obj, const FinMap& f, const FinMap& g) { return epsilon_component(obj, f, g); }
QSMorphism eps_inv(const QSObject& obj, const FinMap& f, const FinMap& g) { return inverse(epsilon_component(obj, f, g)); }

// m: restrict(x, f) -> restrict(y, f) carried to restrict(x, f∘g) -> restrict(y, f∘g).
QSMorphism pull_along(const QSObject& x, const QSObject& y, const FinMap& f, const QSMorphism& m, const FinMap& g) {
  return compose(eps_inv(y, f, g), compose(restrict_morphism(m, g), eps(x, f, g)));
}

// φ: restrict(a, p) -> restrict(b, q) carried along t to
// restrict(a, p∘t) -> restrict(b, q∘t).
QSMorphism transport_overlap(const QSObject& a, const QSObject& b, const FinMap& p, const FinMap& q,
                             const QSMorphism& phi, const FinMap& t) {
  return compose(eps_inv(b, q, t), compose(restrict_morphism(phi, t), eps(a, p, t)));
}

void require_canonical(const CoveringFamily& cover) {
  if (!is_canonical_cover(cover)) throw Error(ErrorKind::CoverNotCanonical, "legs are not jointly surjective");
}

std::optional<Index> first_difference(const FinMap& a, const FinMap& b) {
  for (Index p = 0; p < a.src().size(); ++p)
    if (a(p) != b(p)) return p;
  return std::nullopt;
}

}  // namespace

Overlaps overlaps(const CoveringFamily& cover) {
  Overlaps out;
  out.pairs.resize(cover.legs.size());
  for (std::size_t i = 0; i < cover.legs.size(); ++i)
    for (std::size_t j = 0; j < cover.legs.size(); ++j) out.pairs[i].push_back(pullback(cover.legs[i], cover.legs[j]));
  return out;
}

Outcome<DescentDatum> make_descent_datum(const QuotientStack& stack, const CoveringFamily& cover,
                                         std::vector<QSObject> objects,
                                         const std::vector<std::vector<FinMap>>& overlap_maps) {
  const std::size_t n = cover.legs.size();
  if (objects.size() != n || overlap_maps.size() != n)
    throw Error(ErrorKind::ShapeMismatch, "a datum needs one object per leg and a square table of overlap maps");
  for (std::size_t i = 0; i < n; ++i) {
    if (!(objects[i].base() == cover.legs[i].src()))
      throw Error(ErrorKind::BaseMismatch, "object " + std::to_string(i) + " does not live over its leg");
    if (!(objects[i].x_action() == stack.x_action))
      throw Error(ErrorKind::BaseMismatch, "object " + std::to_string(i) + " belongs to another stack");
    if (overlap_maps[i].size() != n) throw Error(ErrorKind::ShapeMismatch, "overlap table is not square");
  }
  const Overlaps ov = overlaps(cover);
  DescentDatum d{stack, cover, objects, {}};
  d.overlap_isos.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const QSObject src = restrict(objects[i], ov.pairs[i][j].proj1);
      const QSObject dst = restrict(objects[j], ov.pairs[i][j].proj2);
      const FinMap& m = overlap_maps[i][j];
      if (!(m.src() == src.total_space()) || !(m.dst() == dst.total_space()))
        throw Error(ErrorKind::SrcDstMismatch,
                    "overlap map " + std::to_string(i) + "," + std::to_string(j) + " has the wrong endpoints");
      auto phi = check_qs_morphism(src, dst, m);
      if (!phi) {
        Violation v = phi.violation();
        v.detail = "overlap " + std::to_string(i) + "," + std::to_string(j) + ": " + v.detail;
        return v;
      }
      if (!is_iso(*phi))
        return Violation{ViolationKind::NotIso, {std::to_string(i), std::to_string(j)}, "overlap map is not a bijection"};
      d.overlap_isos[i].push_back(std::move(phi).value());
    }
  return d;
}

DescentDatum restrict_to_datum(const QSObject& obj, const CoveringFamily& cover) {
  if (!(cover.target == obj.base())) throw Error(ErrorKind::TargetMismatch, "cover of another base");
  const std::size_t n = cover.legs.size();
  const Overlaps ov = overlaps(cover);
  DescentDatum d{make_quotient_stack(obj.x_action()), cover, {}, {}};
  for (const auto& f : cover.legs) d.objects.push_back(restrict(obj, f));
  d.overlap_isos.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const PullbackCert& c = ov.pairs[i][j];
      // restrict(W_i, pr1) <- restrict(obj, f_i∘pr1) = restrict(obj, f_j∘pr2) -> restrict(W_j, pr2)
      d.overlap_isos[i].push_back(compose(eps(obj, cover.legs[j], c.proj2), eps_inv(obj, cover.legs[i], c.proj1)));
    }
  return d;
}

DescentDatum twist_datum(const DescentDatum& d, const std::vector<FinMap>& sigmas) {
  const std::size_t n = d.cover.legs.size();
  if (sigmas.size() != n) throw Error(ErrorKind::ShapeMismatch, "one bijection per leg");
  const Overlaps ov = overlaps(d.cover);
  DescentDatum out{d.stack, d.cover, {}, {}};
  std::vector<QSMorphism> isos;
  for (std::size_t i = 0; i < n; ++i) {
    Transported t = transport_object(d.objects[i], sigmas[i]);
    isos.push_back(check_qs_morphism(d.objects[i], t.object, t.iso).value());
    out.objects.push_back(std::move(t.object));
  }
  out.overlap_isos.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const PullbackCert& c = ov.pairs[i][j];
      out.overlap_isos[i].push_back(compose(restrict_morphism(isos[j], c.proj2),
                                            compose(d.overlap_isos[i][j], restrict_morphism(inverse(isos[i]), c.proj1))));
    }
  return out;
}

DescentDatum pullback_datum(const DescentDatum& d, const FinMap& t) {
  const std::size_t n = d.cover.legs.size();
  const Overlaps ov = overlaps(d.cover);
  DescentDatum out{d.stack, pullback_family(d.cover, t), {}, {}};
  std::vector<FinMap> to_old;  // U'_i -> U_i
  for (std::size_t i = 0; i < n; ++i) {
    to_old.push_back(pullback(d.cover.legs[i], t).proj1);
    out.objects.push_back(restrict(d.objects[i], to_old[i]));
  }
  const Overlaps ov2 = overlaps(out.cover);
  out.overlap_isos.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const PullbackCert& c = ov.pairs[i][j];
      const PullbackCert& c2 = ov2.pairs[i][j];
      const FinMap m = mediate_pullback(c, compose(to_old[i], c2.proj1), compose(to_old[j], c2.proj2));
      const QSMorphism moved =
          transport_overlap(d.objects[i], d.objects[j], c.proj1, c.proj2, d.overlap_isos[i][j], m);
      out.overlap_isos[i].push_back(
          compose(eps(d.objects[j], to_old[j], c2.proj2), compose(moved, eps_inv(d.objects[i], to_old[i], c2.proj1))));
    }
  return out;
}

Check check_cocycle(const DescentDatum& d) {
  const std::size_t n = d.cover.legs.size();
  const Overlaps ov = overlaps(d.cover);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) {
        const PullbackCert& ij = ov.pairs[i][j];
        const PullbackCert& jk = ov.pairs[j][k];
        const PullbackCert& ik = ov.pairs[i][k];
        const PullbackCert triple = pullback(ij.proj2, jk.proj1);  // U_i ×_Y U_j ×_Y U_k
        if (triple.apex.empty()) continue;
        const FinMap& a = triple.proj1;
        const FinMap& b = triple.proj2;
        const FinMap c = mediate_pullback(ik, compose(ij.proj1, a), compose(jk.proj2, b));
        const QSMorphism phi_ij = transport_overlap(d.objects[i], d.objects[j], ij.proj1, ij.proj2, d.overlap_isos[i][j], a);
        const QSMorphism phi_jk = transport_overlap(d.objects[j], d.objects[k], jk.proj1, jk.proj2, d.overlap_isos[j][k], b);
        const QSMorphism phi_ik = transport_overlap(d.objects[i], d.objects[k], ik.proj1, ik.proj2, d.overlap_isos[i][k], c);
        const QSMorphism around = compose(phi_jk, phi_ij);
        if (auto p = first_difference(around.map(), phi_ik.map())) {
          const QSObject& over = phi_ik.src();
          const Atom point = triple.apex[over.bundle().proj().map()(*p)];
          return Violation{ViolationKind::CocycleFail,
                           {std::to_string(i), std::to_string(j), std::to_string(k), point},
                           "φ_jk ∘ φ_ij != φ_ik at " + over.total_space()[*p]};
        }
      }
  return check_ok();
}

Outcome<QSMorphism> glue_morphisms(const CoveringFamily& cover, const QSObject& x, const QSObject& y,
                                   const std::vector<QSMorphism>& locals) {
  const std::size_t n = cover.legs.size();
  if (!(cover.target == x.base()) || !(cover.target == y.base()))
    throw Error(ErrorKind::TargetMismatch, "cover of another base");
  if (locals.size() != n) throw Error(ErrorKind::ShapeMismatch, "one local morphism per leg");
  require_canonical(cover);
  for (std::size_t i = 0; i < n; ++i)
    if (!(locals[i].src() == restrict(x, cover.legs[i])) || !(locals[i].dst() == restrict(y, cover.legs[i])))
      throw Error(ErrorKind::SrcDstMismatch, "local " + std::to_string(i) + " is not between the restrictions");

  const Overlaps ov = overlaps(cover);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const PullbackCert& c = ov.pairs[i][j];
      const QSMorphism a = pull_along(x, y, cover.legs[i], locals[i], c.proj1);
      const QSMorphism b = pull_along(x, y, cover.legs[j], locals[j], c.proj2);
      if (auto p = first_difference(a.map(), b.map()))
        return Violation{ViolationKind::OverlapMismatch, {std::to_string(i), std::to_string(j)},
                         "locals differ at " + a.src().total_space()[*p]};
    }

  // s = ∐ π_P*f_i, δ = ∐ (π_Q*f_i ∘ φ_i), K the kernel pair of s.
  std::vector<FinSet> parts;
  std::vector<FinMap> to_p, to_q;
  for (std::size_t i = 0; i < n; ++i) {
    const PullbackCert cp = pullback(x.bundle().proj().map(), cover.legs[i]);
    const PullbackCert cq = pullback(y.bundle().proj().map(), cover.legs[i]);
    parts.push_back(cp.apex);
    to_p.push_back(cp.proj1);
    to_q.push_back(compose(cq.proj1, locals[i].map()));
  }
  const Coproduct c = coproduct(parts);
  const FinMap s = copair(c, to_p, x.total_space());
  const FinMap delta = copair(c, to_q, y.total_space());
  const PullbackCert kernel = pullback(s, s);
  if (!(compose(delta, kernel.proj1) == compose(delta, kernel.proj2)))
    throw Error(ErrorKind::NotCoequalized, "δ does not coequalize the kernel pair");
  const CoequalizerCert q = coequalizer(kernel.proj1, kernel.proj2);
  const FinMap eta = compose(mediate_coequalizer(q, delta), inverse(mediate_coequalizer(q, s)));
  QSMorphism glued = check_qs_morphism(x, y, eta).value();
  for (std::size_t i = 0; i < n; ++i)
    if (!(restrict_morphism(glued, cover.legs[i]).map() == locals[i].map()))
      throw Error(ErrorKind::ValidationError, "glued morphism does not restrict to local " + std::to_string(i));
  return glued;
}

UniquenessResult check_uniqueness(const CoveringFamily& cover, const QSMorphism& m1, const QSMorphism& m2) {
  if (!(m1.src() == m2.src()) || !(m1.dst() == m2.dst()))
    throw Error(ErrorKind::SrcDstMismatch, "morphisms with different endpoints");
  if (!(cover.target == m1.src().base())) throw Error(ErrorKind::TargetMismatch, "cover of another base");
  require_canonical(cover);
  UniquenessResult r;
  r.globally_equal = m1.map() == m2.map();
  for (std::size_t i = 0; i < cover.legs.size() && r.restrictions_agree; ++i) {
    const QSMorphism a = restrict_morphism(m1, cover.legs[i]);
    const QSMorphism b = restrict_morphism(m2, cover.legs[i]);
    if (auto p = first_difference(a.map(), b.map())) {
      r.restrictions_agree = false;
      r.leg = i;
      r.point = a.src().total_space()[*p];
    }
  }
  return r;
}

GluingResult glue_object(const DescentDatum& d) {
  require_canonical(d.cover);
  if (auto c = check_cocycle(d); !c) throw Error(ErrorKind::CocycleRequired, c.violation().describe());
  const std::size_t n = d.cover.legs.size();
  const FinGroup& G = d.stack.group;
  const GAction& x_action = d.stack.x_action;
  const FinSet& base = d.cover.target;
  const Overlaps ov = overlaps(d.cover);

  // ∐_{i,j} W_i|U_ij ⇉ ∐_i W_i, the second leg through φ_ij.
  std::vector<FinSet> leg_parts;
  std::vector<GAction> leg_actions;
  for (const auto& w : d.objects) {
    leg_parts.push_back(w.total_space());
    leg_actions.push_back(w.bundle().total());
  }
  const Coproduct legs = coproduct(leg_parts);
  const GAction leg_action = coproduct_action(G, legs, leg_actions);
  std::vector<FinSet> pair_parts;
  std::vector<FinMap> first, second;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const PullbackCert ci = pullback(d.objects[i].bundle().proj().map(), ov.pairs[i][j].proj1);
      const PullbackCert cj = pullback(d.objects[j].bundle().proj().map(), ov.pairs[i][j].proj2);
      pair_parts.push_back(ci.apex);
      first.push_back(compose(legs.injections[i], ci.proj1));
      second.push_back(compose(legs.injections[j], compose(cj.proj1, d.overlap_isos[i][j].map())));
    }
  const Coproduct pairs = coproduct(pair_parts);
  const CoequalizerCert q =
      coequalizer(copair(pairs, first, legs.apex), copair(pairs, second, legs.apex));
  const FinSet& w = q.quotient;
  const FinMap& sigma = q.proj;

  // Action induced on the quotient, checked well defined.
  const Product dom = product(G.carrier(), w);
  std::vector<Index> act(dom.apex.size());
  for (Index g = 0; g < G.order(); ++g) {
    for (Index cls = 0; cls < w.size(); ++cls) act[g * w.size() + cls] = sigma(leg_action.apply(g, q.representative[cls]));
    for (Index l = 0; l < legs.apex.size(); ++l)
      if (sigma(leg_action.apply(g, l)) != act[g * w.size() + sigma(l)])
        throw Error(ErrorKind::NotCoequalized, "action does not descend to the glued object");
  }
  const GAction w_action = check_action(G, w, FinMap(dom.apex, w, std::move(act))).value();

  std::vector<FinMap> alphas, projections;
  for (std::size_t i = 0; i < n; ++i) {
    alphas.push_back(d.objects[i].alpha().map());
    projections.push_back(compose(d.cover.legs[i], d.objects[i].bundle().proj().map()));
  }
  const FinMap alpha = mediate_coequalizer(q, copair(legs, alphas, x_action.space()));
  const FinMap proj = mediate_coequalizer(q, copair(legs, projections, base));
  const Bundle bundle = is_principal_bundle(w_action, proj).value();
  GluingResult out{check_qs_object(bundle, alpha, x_action).value(), {}, 0};

  // ψ_i inverts W_i -> W ×_Y U_i, w ↦ (σ(w), π(w)).
  for (std::size_t i = 0; i < n; ++i) {
    const PullbackCert ci = pullback(proj, d.cover.legs[i]);
    const FinMap into = mediate_pullback(ci, compose(sigma, legs.injections[i]), d.objects[i].bundle().proj().map());
    if (!morphism_predicates(into).iso)
      throw Error(ErrorKind::NotIso, "comparison map for leg " + std::to_string(i) + " is not a bijection");
    out.comparison_isos.push_back(check_qs_morphism(restrict(out.glued, d.cover.legs[i]), d.objects[i], inverse(into)).value());
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const PullbackCert& c = ov.pairs[i][j];
      const QSMorphism a = compose(restrict_morphism(out.comparison_isos[i], c.proj1), eps(out.glued, d.cover.legs[i], c.proj1));
      const QSMorphism b = compose(restrict_morphism(out.comparison_isos[j], c.proj2), eps(out.glued, d.cover.legs[j], c.proj2));
      if (!(compose(d.overlap_isos[i][j], a).map() == b.map()))
        throw Error(ErrorKind::ValidationError,
                    "compatibility square fails on overlap " + std::to_string(i) + "," + std::to_string(j));
      ++out.compatibility_squares;
    }
  return out;
}

// ---------------------------------------------------------------------------
// Verification

CaseResult verify_case(const StackCase& c) {
  CaseResult r;
  gen::Rng rng = gen::case_rng(c.seed, 0);
  const QSObject& obj = c.object;
  auto note = [&](const char* what, const std::string& msg) {
    if (!r.detail.empty()) r.detail += "; ";
    r.detail += std::string(what) + ": " + msg;
  };

  try {
    const DescentDatum plain = restrict_to_datum(obj, c.cover);
    std::vector<FinMap> sigmas;
    for (const auto& w : plain.objects) sigmas.push_back(gen::random_bijection(rng, w.total_space()));
    const DescentDatum twisted = twist_datum(plain, sigmas);
    const GluingResult g = glue_object(twisted);
    r.effective = qs_isomorphism(g.glued, obj).has_value();
    if (!r.effective) note("effectiveness", "glued object is not isomorphic to the original");
  } catch (const std::exception& e) {
    note("effectiveness", e.what());
  }

  std::vector<QSMorphism> endos;
  try {
    endos = enumerate_qs_morphisms(obj, obj);
  } catch (const std::exception& e) {
    note("endomorphisms", e.what());
  }
  if (endos.empty()) return r;

  try {
    const QSMorphism& m = endos[gen::uniform(rng, 0, endos.size() - 1)];
    const Transported moved = transport_object(obj, gen::random_bijection(rng, obj.total_space()));
    const QSMorphism target = compose(check_qs_morphism(obj, moved.object, moved.iso).value(), m);
    std::vector<QSMorphism> locals;
    for (const auto& f : c.cover.legs) locals.push_back(restrict_morphism(target, f));
    auto eta = glue_morphisms(c.cover, obj, moved.object, locals);
    r.glues_morphisms = eta.ok() && eta->map() == target.map();
    if (!r.glues_morphisms) note("morphism gluing", eta.ok() ? "glued map differs" : eta.violation().describe());
  } catch (const std::exception& e) {
    note("morphism gluing", e.what());
  }

  try {
    const QSMorphism& m1 = endos[gen::uniform(rng, 0, endos.size() - 1)];
    const QSMorphism& m2 = endos[gen::uniform(rng, 0, endos.size() - 1)];
    r.unique = check_uniqueness(c.cover, m1, m2).holds() && check_uniqueness(c.cover, m1, m1).holds();
    if (!r.unique) note("uniqueness", "equal restrictions but distinct morphisms");
  } catch (const std::exception& e) {
    note("uniqueness", e.what());
  }
  return r;
}

StackReport verify_stack(const QuotientStack& stack, const std::vector<StackCase>& corpus,
                         const std::vector<DatumCase>& data, const VerifyOptions& options) {
  for (const auto& c : corpus)
    if (!(c.object.x_action() == stack.x_action))
      throw Error(ErrorKind::BaseMismatch, "corpus object belongs to another stack");

  std::vector<CaseResult> results(corpus.size());
  parallel_for(corpus.size(), [&](std::size_t i) { results[i] = verify_case(corpus[i]); }, options.parallel);

  StackReport rep;
  rep.cases = corpus.size();
  auto tally = [](ConditionTally& t, bool ok, std::size_t idx, const std::string& detail) {
    ++t.checked;
    if (ok) ++t.passed;
    else if (t.counterexamples.size() < 16) t.counterexamples.push_back("case " + std::to_string(idx) + ": " + detail);
  };
  for (std::size_t i = 0; i < results.size(); ++i) {
    tally(rep.effectiveness, results[i].effective, i, results[i].detail);
    tally(rep.morphism_gluing, results[i].glues_morphisms, i, results[i].detail);
    tally(rep.uniqueness, results[i].unique, i, results[i].detail);
  }

  for (const auto& dc : data) {
    if (!is_canonical_cover(dc.datum.cover)) {
      ++rep.rejected_inputs;
      rep.rejections.push_back(dc.name + ": cover is not canonical");
      continue;
    }
    if (auto c = check_cocycle(dc.datum); !c) {
      ++rep.rejected_inputs;
      rep.rejections.push_back(dc.name + ": " + c.violation().describe());
      continue;
    }
    bool ok = false;
    std::string detail;
    try {
      const GluingResult g = glue_object(dc.datum);
      const GluingResult again = glue_object(restrict_to_datum(g.glued, dc.datum.cover));
      ok = qs_isomorphism(again.glued, g.glued).has_value();
      if (!ok) detail = "regluing the restrictions changes the object";
    } catch (const std::exception& e) {
      detail = e.what();
    }
    tally(rep.effectiveness, ok, rep.cases + (&dc - data.data()), dc.name + ": " + detail);
  }
  return rep;
}

std::vector<StackCase> exhaustive_corpus(const QuotientStack& stack, std::size_t max_base, std::uint64_t seed) {
  std::vector<StackCase> out;
  for (std::size_t n = 0; n <= max_base; ++n) {
    const FinSet base = FinSet::range(n);
    const CoveringFamily doubled{base, {identity(base), identity(base)}};
    for (const auto& obj : enumerate_qs_objects(stack, base))
      for (const auto& cover : {point_cover(base), identity_cover(base), doubled})
        out.push_back({obj, cover, seed + out.size()});
  }
  return out;
}

std::vector<StackCase> random_corpus(const QuotientStack& stack, std::size_t budget, std::size_t max_base,
                                     std::uint64_t seed) {
  std::vector<StackCase> out;
  for (std::uint64_t k = 0; out.size() < budget; ++k) {
    gen::Rng rng = gen::case_rng(seed, k);
    const FinSet base = gen::random_set(rng, 0, max_base);
    auto obj = gen::random_object(rng, stack, base);
    if (!obj) {
      if (k > 100 * (budget + 1)) throw Error(ErrorKind::InvalidInput, "stack admits no objects over small bases");
      continue;
    }
    out.push_back({std::move(*obj), gen::random_family(rng, base, 3, 3, true), rng()});
  }
  return out;
}

}  // namespace qstack
