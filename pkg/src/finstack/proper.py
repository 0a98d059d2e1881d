"""Proper stacks: left adjoints over presheaves built as colimits, the
canonical comparison arrows, the PRS1-PRS5 sweep, the adjoint-based stack
criterion and a replay of the proper-implies-stack argument.

Every isomorphism claim is decided by building the canonical arrow and
testing it for invertibility.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Any

from .fincat import (
    Colimit,
    FinCategory,
    Functor,
    colimit_in_category,
    diagram_from_objects,
    is_equivalence,
    is_fully_faithful,
    left_adjoint_of,
)
from .prestack import (
    DescentArrow,
    DescentDatum,
    Prestack,
    descent_category,
    element_index,
    pullback_arrow,
    pullback_datum,
    reindex_datum,
    restriction_from_fiber,
)
from .presheaf import PresheafMorphism, fiber_product, yoneda, yoneda_morphism
from .site import Topology
from .verdict import HypothesisFailure, InternalConsistencyError, Verdict

AXIOMS = ("PRS1", "PRS2", "PRS3", "PRS4", "PRS5")


@dataclass(frozen=True)
class DiagramBound:
    """Diagrams checked for colimits: discrete ones up to ``objects`` objects,
    parallel pairs and spans when ``arrows >= 2``."""

    objects: int = 4
    arrows: int = 6


DEFAULT_BOUND = DiagramBound()


# ---------------------------------------------------------------------------
# bounded diagram catalogue


@lru_cache(maxsize=None)
def _discrete_shape(k: int) -> FinCategory:
    return FinCategory.discrete(range(k))


@lru_cache(maxsize=None)
def _parallel_shape() -> FinCategory:
    return FinCategory.free_on_graph([0, 1], [("s", 0, 1), ("t", 0, 1)])


@lru_cache(maxsize=None)
def _span_shape() -> FinCategory:
    return FinCategory.free_on_graph([0, 1, 2], [("l", 2, 0), ("r", 2, 1)])


def bounded_diagrams(c: FinCategory, bound: DiagramBound):
    """Yield ``(description, diagram)``; binary and larger coproducts come
    first, then the empty and one-object diagrams, parallel pairs, spans.

    Initial object, binary coproducts and coequalizers already generate all
    finite colimits; the other shapes are there for sharper witnesses.
    """
    sizes = [k for k in range(2, bound.objects + 1)] + [0, 1]
    for k in sizes:
        if k > bound.objects:
            continue
        shape = _discrete_shape(k)
        for combo in itertools.combinations_with_replacement(c.objects, k):
            yield ({"shape": "discrete", "objects": list(combo)},
                   diagram_from_objects(c, shape, dict(enumerate(combo))))
    if bound.objects >= 2 and bound.arrows >= 2:
        shape = _parallel_shape()
        for x in c.objects:
            for y in c.objects:
                for f, g in itertools.combinations(c.hom(x, y), 2):
                    yield ({"shape": "parallel", "arrows": [f, g]},
                           diagram_from_objects(c, shape, {0: x, 1: y}, {("s",): f, ("t",): g}))
    if bound.objects >= 3 and bound.arrows >= 2:
        shape = _span_shape()
        for z in c.objects:
            out = c.out_of(z)
            for f, g in itertools.combinations_with_replacement(out, 2):
                yield ({"shape": "span", "arrows": [f, g]},
                       diagram_from_objects(c, shape, {0: c.cod(f), 1: c.cod(g), 2: z},
                                            {("l",): f, ("r",): g}))


# ---------------------------------------------------------------------------
# adjoints along base morphisms and over presheaves


@lru_cache(maxsize=256)
def base_adjoints(s: Prestack) -> dict:
    """Left adjoint of every restriction functor, ``None`` where absent."""
    return {h: left_adjoint_of(s.restrictions[h]) for h in s.base.morphisms}


def _adjoint(adjoints: dict, h):
    adj = adjoints.get(h)
    if adj is None:
        raise HypothesisFailure(f"restriction along {h!r} has no left adjoint", {"morphism": h})
    return adj


def check_hypothesis(s: Prestack, bound: DiagramBound = DEFAULT_BOUND) -> Verdict:
    """Fully faithful left adjoints along base morphisms, and bounded
    colimits in every fiber."""
    v = _adjoint_verdict(s)
    if not v:
        return v
    return _colimit_verdict(s, bound)


def _adjoint_verdict(s: Prestack) -> Verdict:
    adjoints = base_adjoints(s)
    for h in s.base.morphisms:
        adj = adjoints[h]
        if adj is None:
            return Verdict.failed(morphism=h, reason="no left adjoint")
        bad = adj.non_invertible_unit()
        if bad:
            return Verdict.failed(morphism=h, reason="unit not invertible", object=bad[0])
    return Verdict.passed()


def _colimit_verdict(s: Prestack, bound: DiagramBound) -> Verdict:
    for u in s.base.objects:
        fib = s.fibers[u]
        for desc, d in bounded_diagrams(fib, bound):
            if colimit_in_category(fib, d) is None:
                return Verdict.failed(fiber=u, diagram=desc)
    return Verdict.passed()


class LeftAdjointOverA:
    """Left adjoint of ``j_(A,V)*`` for ``u: A -> y(V)``: a datum ``F`` goes
    to the colimit over the elements ``e`` of ``A`` of ``L_(u e)(F_e)``."""

    def __init__(self, s: Prestack, u: PresheafMorphism, adjoints: dict | None = None):
        self.prestack = s
        self.u = u
        self.index = element_index(u.source)
        self.adjoints = base_adjoints(s) if adjoints is None else adjoints
        anchors = [v for v in s.base.objects if u.target == yoneda(s.base, v)]
        if not anchors:
            raise ValueError("target is not representable")
        self.anchor = anchors[0]
        self.target = s.fibers[self.anchor]
        self._colimits: dict = {}

    def to_anchor(self, e):
        v, x = e
        return self.u.components[v][x]

    def diagram(self, f: DescentDatum) -> Functor:
        s, idx = self.prestack, self.index
        el = idx.category
        obj_map = {}
        for e in idx.elements:
            obj_map[e] = _adjoint(self.adjoints, self.to_anchor(e)).left.on_obj(idx.obj(f, e))
        mor_map = {}
        for m in idx.arrows:
            e, e2 = el.dom(m), el.cod(m)
            h = m[0]
            g, g2 = self.to_anchor(e), self.to_anchor(e2)
            adj, adj2 = _adjoint(self.adjoints, g), _adjoint(self.adjoints, g2)
            fib = s.fibers[e[0]]
            x2 = idx.obj(f, e2)
            lx2 = obj_map[e2]
            psi_inv = fib.inverse(idx.psi(f, m))
            k = fib.compose(s.lam(h, g2, lx2), s.jm(h, adj2.unit[x2]), psi_inv)
            mor_map[m] = adj.to_left(k, lx2)
        return Functor(el, self.target, obj_map, mor_map)

    def colimit(self, f: DescentDatum) -> Colimit:
        if f not in self._colimits:
            col = colimit_in_category(self.target, self.diagram(f))
            if col is None:
                raise HypothesisFailure(f"no colimit in the fiber over {self.anchor!r}",
                                        {"fiber": self.anchor, "datum": f})
            self._colimits[f] = col
        return self._colimits[f]

    def obj(self, f: DescentDatum):
        return self.colimit(f).apex

    def mor(self, phi: DescentArrow):
        """Induced arrow between colimits for a morphism of data."""
        src, tgt = self.colimit(phi.source), self.colimit(phi.target)
        c = self.target
        legs = []
        for e in self.index.elements:
            adj = _adjoint(self.adjoints, self.to_anchor(e))
            legs.append(c.compose(tgt.leg(e), adj.left.on_mor(self.index.component(phi, e))))
        return src.mediate(tgt.apex, legs)

    def hom_bijection(self, f: DescentDatum, g) -> Verdict:
        """``Hom(L F, G) -> Hom(F, j_* G)``, ``k -> (transpose(k o leg_e))_e``,
        checked to be a bijection onto the compatible families."""
        from .prestack import _arrow_families

        s, idx = self.prestack, self.index
        col = self.colimit(f)
        rg = pullback_datum(s, self.u, g)
        families = set(_arrow_families(s, idx, f, rg))
        images = []
        for k in self.target.hom(col.apex, g):
            fam = []
            for e in idx.elements:
                adj = _adjoint(self.adjoints, self.to_anchor(e))
                fam.append(adj.to_right(self.target.compose(k, col.leg(e)), idx.obj(f, e)))
            fam = tuple(fam)
            if fam not in families:
                return Verdict.failed(reason="image is not a morphism of data", arrow=k, object=g)
            images.append(fam)
        if len(set(images)) != len(images):
            return Verdict.failed(reason="not injective", object=g)
        if len(images) != len(families):
            return Verdict.failed(reason="not surjective", object=g,
                                  left=len(images), right=len(families))
        return Verdict.passed()


def adjoint_over_a(s: Prestack, u: PresheafMorphism, f: DescentDatum,
                   adjoints: dict | None = None) -> Colimit:
    return LeftAdjointOverA(s, u, adjoints).colimit(f)


# ---------------------------------------------------------------------------
# canonical arrows


def check_errou(s: Prestack, h1, h2, adjoints: dict | None = None) -> Verdict:
    """For ``U' -h1-> U -h2-> V`` build, at every ``X`` in ``S(V)``,
    ``theta: j_(h2 h1)(X) -> j_(h2 h1)(L R X)`` from the unit of ``h2``;
    part (ii) asks ``L_(h2 h1)(theta)`` to be invertible, part (i) is
    ``counit o L_(h2 h1)(theta)``, checked natural in ``X``."""
    adjoints = base_adjoints(s) if adjoints is None else adjoints
    base = s.base
    v = base.cod(h2)
    fv, fu1 = s.fibers[v], s.fibers[base.dom(h1)]
    g, gf = h2, base.compose(h2, h1)
    try:
        adj_g, adj_gf = _adjoint(adjoints, g), _adjoint(adjoints, gf)
    except HypothesisFailure as exc:
        return Verdict.failed(reason="missing adjoint", **exc.witness)
    canon = {}
    for x in fv.objects:
        y = adj_g.left.on_obj(s.j(g, x))
        lam_x_inv = fu1.inverse(s.lam(h1, h2, x))
        theta = fu1.compose(s.lam(h1, h2, y), s.jm(h1, adj_g.unit[s.j(g, x)]), lam_x_inv)
        iso = adj_gf.left.on_mor(theta)
        if not fv.is_iso(iso):
            return Verdict.failed(part="ii", object=x, arrow=iso)
        try:
            canon[x] = fv.compose(adj_gf.counit[y], iso)
        except HypothesisFailure as exc:
            return Verdict.failed(part="i", reason="missing counit", **exc.witness)
    for m in fv.morphisms:
        a, b = fv.dom(m), fv.cod(m)
        lhs = fv.compose(canon[b], adj_gf.left.on_mor(s.jm(gf, m)))
        rhs = fv.compose(adj_g.left.on_mor(s.jm(g, m)), canon[a])
        if lhs != rhs:
            return Verdict.failed(part="i", morphism=m)
    return Verdict.passed()


def cospan_pullback(s: Prestack, p, q):
    """``U x_W V`` as a presheaf, for ``p: U -> W`` and ``q: V -> W``."""
    return fiber_product(yoneda_morphism(s.base, p), yoneda_morphism(s.base, q))


def base_change_arrow(s: Prestack, p, q, adjoints: dict | None = None) -> tuple[dict, Verdict]:
    """Components of ``L_(P,V) j_(P,U)* => j_q L_p`` with ``P = U x_W V``.

    The leg at ``e = (a, b)`` of ``P`` is the transpose along ``b`` of
    ``lam(b, q)^-1 o lam(a, p) o j_a(unit_p)``. Returns the components and a
    verdict covering invertibility and naturality.
    """
    adjoints = base_adjoints(s) if adjoints is None else adjoints
    base = s.base
    fu, fv = s.fibers[base.dom(p)], s.fibers[base.dom(q)]
    pres, to_u, to_v = cospan_pullback(s, p, q)
    idx = element_index(pres)
    try:
        adj_p = _adjoint(adjoints, p)
        lad = LeftAdjointOverA(s, to_v, adjoints)
        comps = {}
        for x in fu.objects:
            lpx = adj_p.left.on_obj(x)
            t = s.j(q, lpx)
            col = lad.colimit(pullback_datum(s, to_u, x))
            legs = []
            for e in idx.elements:
                w, (a, b) = e
                adj_b = _adjoint(adjoints, b)
                k = fv_compose(s, w, s.fibers[w].inverse(s.lam(b, q, lpx)),
                               s.lam(a, p, lpx), s.jm(a, adj_p.unit[x]))
                legs.append(adj_b.to_left(k, t))
            arrow = col.mediate(t, legs)
            if arrow is None:
                return comps, Verdict.failed(reason="legs do not form a cocone", object=x)
            comps[x] = arrow
    except HypothesisFailure as exc:
        return {}, Verdict(False, {"reason": "not evaluable", "skipped": True, **exc.witness})
    for x, arrow in comps.items():
        if not fv.is_iso(arrow):
            return comps, Verdict.failed(reason="not invertible", object=x, arrow=arrow)
    for m in fu.morphisms:
        a, b = fu.dom(m), fu.cod(m)
        lhs_m = lad.mor(DescentArrow(pullback_datum(s, to_u, a), pullback_datum(s, to_u, b),
                                     pullback_arrow(s, to_u, m)))
        rhs_m = s.jm(q, adjoints[p].left.on_mor(m))
        if fv.compose(comps[b], lhs_m) != fv.compose(rhs_m, comps[a]):
            return comps, Verdict.failed(reason="not natural", morphism=m)
    return comps, Verdict.passed()


def fv_compose(s: Prestack, w, *ms):
    return s.fibers[w].compose(*ms)


def _base_change_over_a_arrow(s: Prestack, u: PresheafMorphism, p, f: DescentDatum,
                              adjoints: dict, lad: LeftAdjointOverA | None = None):
    """Canonical ``L_(P,U)(j_(P,A)* F) -> j_p(L_(A,V) F)`` with
    ``P = A x_V U``; returns ``(arrow, source, target)``."""
    lad = lad or LeftAdjointOverA(s, u, adjoints)
    base = s.base
    fu = s.fibers[base.dom(p)]
    pres, to_a, to_u = fiber_product(u, yoneda_morphism(base, p))
    top = lad.colimit(f)
    target = s.j(p, top.apex)
    f2 = reindex_datum(to_a, f)
    lad2 = LeftAdjointOverA(s, to_u, adjoints)
    col = lad2.colimit(f2)
    idx2 = element_index(pres)
    legs = []
    for (w, (x, c)) in idx2.elements:
        ux = u.components[w][x]
        adj_ux, adj_c = _adjoint(adjoints, ux), _adjoint(adjoints, c)
        fx = lad.index.obj(f, (w, x))
        k0 = adj_ux.to_right(lad.target.compose(top.leg((w, x))), fx)
        h = s.fibers[w].compose(s.fibers[w].inverse(s.lam(c, p, top.apex)), k0)
        legs.append(adj_c.to_left(h, target))
    return col.mediate(target, legs), col.apex, target, fu


def base_change_over_a(s: Prestack, u: PresheafMorphism, p, adjoints: dict | None = None) -> Verdict:
    """``j_p o L_(A,V)`` against ``L_(AxU,U) o j_(AxU,A)*`` on every datum."""
    adjoints = base_adjoints(s) if adjoints is None else adjoints
    lad = LeftAdjointOverA(s, u, adjoints)
    try:
        for f in descent_category(s, u.source).data:
            arrow, src, tgt, fu = _base_change_over_a_arrow(s, u, p, f, adjoints, lad)
            if arrow is None:
                return Verdict.failed(reason="legs do not form a cocone", datum=f)
            if not fu.is_iso(arrow):
                return Verdict.failed(reason="not invertible", datum=f, source=src, target=tgt)
    except HypothesisFailure as exc:
        return Verdict.failed(reason="not evaluable", **exc.witness)
    return Verdict.passed()


# ---------------------------------------------------------------------------
# separated prestacks and stacks


def _covering_inclusions(t: Topology):
    for u in t.base.objects:
        for sv in t.covering_sieves(u):
            yield u, sv, sv.inclusion()


def is_separated_prestack(s: Prestack, t: Topology) -> Verdict:
    for u, sv, inc in _covering_inclusions(t):
        v = is_fully_faithful(restriction_from_fiber(s, inc))
        if not v:
            return Verdict.failed(object=u, sieve=sv, **v.witness)
    return Verdict.passed()


def is_stack(s: Prestack, t: Topology) -> Verdict:
    for u, sv, inc in _covering_inclusions(t):
        v = is_equivalence(restriction_from_fiber(s, inc))
        if not v:
            return Verdict.failed(object=u, sieve=sv, **v.witness)
    return Verdict.passed()


def stack_via_adjoints(s: Prestack, t: Topology, cross_check: bool = True) -> Verdict:
    """Separated, and each ``j_(A,U)*`` has a left adjoint with invertible
    unit. With ``cross_check`` the verdict is compared against
    :func:`is_stack` and a disagreement raises."""
    verdict = _stack_via_adjoints(s, t)
    if cross_check:
        direct = is_stack(s, t)
        if bool(direct) != bool(verdict):
            raise InternalConsistencyError(
                f"stack verdicts disagree: equivalence={direct}, adjoints={verdict}")
    return verdict


def _stack_via_adjoints(s: Prestack, t: Topology) -> Verdict:
    sep = is_separated_prestack(s, t)
    if not sep:
        detail = {k: v for k, v in sep.witness.items() if k != "reason"}
        return Verdict.failed(reason="not separated", problem=sep.witness.get("reason"), **detail)
    for u, sv, inc in _covering_inclusions(t):
        adj = left_adjoint_of(restriction_from_fiber(s, inc))
        if adj is None:
            return Verdict.failed(reason="no left adjoint", object=u, sieve=sv)
        bad = adj.non_invertible_unit()
        if bad:
            return Verdict.failed(reason="unit not invertible", object=u, sieve=sv, datum=bad[0])
    return Verdict.passed()


# ---------------------------------------------------------------------------
# the PRS sweep and the theorem


@dataclass
class AxiomVerdict:
    status: str  # "pass" | "fail" | "skipped"
    witness: dict | None = None
    checked: int = 0

    @property
    def passed(self) -> bool:
        return self.status == "pass"


@dataclass
class TheoremVerdict:
    stack: Verdict
    replay: Verdict
    per_sieve: list[dict] = field(default_factory=list)

    @property
    def falsified(self) -> bool:
        return not self.stack.ok

    @property
    def agrees(self) -> bool:
        return all(r["equivalence"] == r["replay"] for r in self.per_sieve)

    @property
    def ok(self) -> bool:
        return self.stack.ok and self.replay.ok and self.agrees


@dataclass
class ProperStackReport:
    axioms: dict[str, AxiomVerdict]
    hypothesis: Verdict
    bound: DiagramBound
    theorem: TheoremVerdict | None = None

    @property
    def proper(self) -> bool:
        return all(self.axioms[a].passed for a in AXIOMS)

    def failing(self) -> list[str]:
        return [a for a in AXIOMS if self.axioms[a].status == "fail"]


def _prs1(s, t) -> AxiomVerdict:
    v = is_separated_prestack(s, t)
    n = sum(1 for _ in _covering_inclusions(t))
    return AxiomVerdict("pass" if v else "fail", v.witness, n)


def _prs2(s, bound) -> AxiomVerdict:
    n = 0
    for u in s.base.objects:
        fib = s.fibers[u]
        for desc, d in bounded_diagrams(fib, bound):
            n += 1
            if colimit_in_category(fib, d) is None:
                return AxiomVerdict("fail", {"fiber": u, "diagram": desc}, n)
    return AxiomVerdict("pass", None, n)


def _prs3(s, bound) -> AxiomVerdict:
    base = s.base
    n = 0
    for h in base.morphisms:
        if base.is_identity(h):
            continue
        src, tgt = s.fibers[base.cod(h)], s.fibers[base.dom(h)]
        j = s.restrictions[h]
        for desc, d in bounded_diagrams(src, bound):
            col = colimit_in_category(src, d)
            if col is None:
                continue
            n += 1
            rd = d.then(j)
            rcol = colimit_in_category(tgt, rd)
            witness = {"morphism": h, "diagram": desc}
            if rcol is None:
                return AxiomVerdict("fail", {**witness, "reason": "restricted diagram has no colimit"}, n)
            arrow = rcol.mediate(j.on_obj(col.apex), [j.on_mor(l) for l in col.cocone.legs])
            if arrow is None or not tgt.is_iso(arrow):
                return AxiomVerdict("fail", {**witness, "reason": "canonical arrow not invertible",
                                             "colimit": col.apex, "restricted_colimit": rcol.apex}, n)
    return AxiomVerdict("pass", None, n)


def _prs4(s) -> AxiomVerdict:
    v = _adjoint_verdict(s)
    return AxiomVerdict("pass" if v else "fail", v.witness, len(s.base.morphisms))


def cospans(base: FinCategory):
    for w in base.objects:
        into = base.into(w)
        for p in into:
            for q in into:
                yield p, q


def _prs5(s, adjoints=None) -> AxiomVerdict:
    n = 0
    skipped = None
    for p, q in cospans(s.base):
        _, v = base_change_arrow(s, p, q, adjoints)
        if v.witness and v.witness.get("skipped"):
            skipped = skipped or {"cospan": (p, q), **v.witness}
            continue
        n += 1
        if not v:
            return AxiomVerdict("fail", {"cospan": (p, q), **v.witness}, n)
    if skipped:
        return AxiomVerdict("skipped", skipped, n)
    return AxiomVerdict("pass", None, n)


def check_proper_stack(s: Prestack, t: Topology, bound: DiagramBound = DEFAULT_BOUND) -> ProperStackReport:
    axioms = {
        "PRS1": _prs1(s, t),
        "PRS2": _prs2(s, bound),
        "PRS3": _prs3(s, bound),
        "PRS4": _prs4(s),
        "PRS5": _prs5(s),
    }
    return ProperStackReport(axioms, check_hypothesis(s, bound), bound)


def replay_sieve(s: Prestack, sieve, adjoints: dict | None = None) -> Verdict:
    """For a covering sieve ``A -> V``, every datum ``F`` and every element
    ``g: V0 -> V`` of ``A``, rebuild ``j_g L_(A,V) F ~ F_(V0)`` as the
    composite of the base-change arrow, the gluing isomorphisms of ``F``
    and the counit over ``A x_V V0``; each must be invertible."""
    adjoints = base_adjoints(s) if adjoints is None else adjoints
    base = s.base
    u = sieve.inclusion()
    lad = LeftAdjointOverA(s, u, adjoints)
    idx = lad.index
    try:
        for f in descent_category(s, u.source).data:
            for e0 in idx.elements:
                v0, g = e0
                fib0 = s.fibers[v0]
                arrow1, _, _, _ = _base_change_over_a_arrow(s, u, g, f, adjoints, lad)
                if arrow1 is None or not fib0.is_iso(arrow1):
                    return Verdict.failed(step="base change", datum=f, element=e0)
                pres, to_a, to_0 = fiber_product(u, yoneda_morphism(base, g))
                idx_p = element_index(pres)
                f2 = reindex_datum(to_a, f)
                g0 = pullback_datum(s, to_0, idx.obj(f, e0))
                comps = tuple(idx.psi(f, (c, g)) for (w, (x, c)) in idx_p.elements)
                lad0 = LeftAdjointOverA(s, to_0, adjoints)
                arrow2 = lad0.mor(DescentArrow(g0, f2, comps))
                if arrow2 is None or not fib0.is_iso(arrow2):
                    return Verdict.failed(step="gluing isomorphisms", datum=f, element=e0)
                col = lad0.colimit(g0)
                x0 = idx.obj(f, e0)
                legs = [_adjoint(adjoints, c).counit[x0] for (w, (x, c)) in idx_p.elements]
                arrow3 = col.mediate(x0, legs)
                if arrow3 is None or not fib0.is_iso(arrow3):
                    return Verdict.failed(step="counit", datum=f, element=e0)
    except HypothesisFailure as exc:
        return Verdict.failed(step="hypothesis", **exc.witness)
    return Verdict.passed()


def verify_theorem(s: Prestack, t: Topology, bound: DiagramBound = DEFAULT_BOUND) -> ProperStackReport:
    report = check_proper_stack(s, t, bound)
    if not report.proper:
        return report
    stack = is_stack(s, t)
    per_sieve = []
    replay_all = Verdict.passed()
    for u, sv, inc in _covering_inclusions(t):
        eq = is_equivalence(restriction_from_fiber(s, inc))
        rp = replay_sieve(s, sv)
        per_sieve.append({"object": u, "sieve": sv, "equivalence": eq.ok, "replay": rp.ok,
                          "witness": eq.witness or rp.witness})
        if not rp and replay_all:
            replay_all = Verdict.failed(object=u, sieve=sv, **rp.witness)
    report.theorem = TheoremVerdict(stack, replay_all, per_sieve)
    return report


def report_records(report: ProperStackReport, subject: str) -> list[dict[str, Any]]:
    """Flat ``{check, subject, verdict, witness?}`` records in fixed order."""
    out = []
    for a in AXIOMS:
        av = report.axioms[a]
        rec = {"check": a, "subject": subject, "verdict": av.status}
        if av.witness:
            rec["witness"] = av.witness
        out.append(rec)
    if report.theorem is not None:
        th = report.theorem
        for r in th.per_sieve:
            rec = {"check": "stack", "subject": f"{subject}@{r['object']}",
                   "verdict": "pass" if r["equivalence"] and r["replay"] else "fail",
                   "sieve": r["sieve"]}
            if r["witness"]:
                rec["witness"] = r["witness"]
            out.append(rec)
        rec = {"check": "theorem", "subject": subject, "verdict": "pass" if th.ok else "fail"}
        if th.falsified:
            rec["witness"] = {"falsified": True, **(th.stack.witness or {})}
        out.append(rec)
    return out
