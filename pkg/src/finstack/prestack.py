"""Prestacks with coherence data, descent categories ``S(A)`` over finite
presheaves, and the restriction functors between them.

Conventions: for a base morphism ``h: V -> U`` the restriction
``restrictions[h]`` is a functor ``S(U) -> S(V)``. Composition isomorphisms
are keyed by the path ``(h1, h2)`` of ``U1 -h1-> U2 -h2-> U3`` and have
components ``j_h1(j_h2 X) -> j_(h2 o h1)(X)`` in ``S(U1)``.
"""

from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass
from functools import lru_cache

from .fincat import FinCategory, Functor, NatTransf, check_functor
from .presheaf import FinPresheaf, PresheafMorphism, category_of_elements
from .verdict import InstanceTooLarge, StructuralError, Violation

MAX_CANDIDATES = 10**6


class Prestack:
    """Fibers, restriction functors and composition isomorphisms.

    Restrictions along identities may be omitted (they are identity
    functors). Missing composition isomorphisms default to identities, which
    requires ``j_h1 j_h2 X == j_(h2 h1) X`` on the nose.
    """

    def __init__(self, base: FinCategory, fibers: Mapping, restrictions: Mapping,
                 lambdas: Mapping | None = None, name: str | None = None):
        self.base = base
        self.name = name
        self.fibers = {}
        for u in base.objects:
            if u not in fibers:
                raise StructuralError(f"prestack has no fiber over {u!r}")
            self.fibers[u] = fibers[u]
        self.restrictions = {}
        for h in base.morphisms:
            src, tgt = base.dom(h), base.cod(h)
            j = restrictions.get(h)
            if j is None:
                if not base.is_identity(h):
                    raise StructuralError(f"prestack has no restriction along {h!r}")
                j = Functor.identity(self.fibers[src])
            if j.source is not self.fibers[tgt] or j.target is not self.fibers[src]:
                raise StructuralError(f"restriction along {h!r} has the wrong fibers")
            self.restrictions[h] = j
        lambdas = dict(lambdas or {})
        self.lambdas = {}
        for h2, h1 in base.composable_pairs():
            given = lambdas.get((h1, h2), {})
            comps = {}
            fib1 = self.fibers[base.dom(h1)]
            for x in self.fibers[base.cod(h2)].objects:
                if x in given:
                    comps[x] = given[x]
                    continue
                a = self.j(h1, self.j(h2, x))
                b = self.j(base.compose(h2, h1), x)
                if a != b:
                    raise StructuralError(
                        f"no composition isomorphism given for ({h1!r}, {h2!r}) at {x!r}")
                comps[x] = fib1.identity(a)
            self.lambdas[h1, h2] = comps
        for key in lambdas:
            if key not in self.lambdas:
                raise StructuralError(f"composition isomorphism for non-composable path {key!r}")

    def fiber(self, u) -> FinCategory:
        return self.fibers[u]

    def j(self, h, x):
        return self.restrictions[h].obj_map[x]

    def jm(self, h, m):
        return self.restrictions[h].mor_map[m]

    def lam(self, h1, h2, x):
        return self.lambdas[h1, h2][x]

    def __repr__(self) -> str:
        sizes = ", ".join(f"{u}:{len(c.objects)}" for u, c in self.fibers.items())
        return f"<Prestack {self.name or ''} [{sizes}]>"


def check_prestack(s: Prestack) -> list[Violation]:
    base = s.base
    out = []
    for h in base.morphisms:
        for v in check_functor(s.restrictions[h]):
            out.append(Violation("restriction-functor", {"morphism": h, "problem": str(v)}))
        if base.is_identity(h) and not s.restrictions[h].is_identity():
            out.append(Violation("strict-identity", {"morphism": h}))
    if out:
        return out
    for (h1, h2), comps in s.lambdas.items():
        fib = s.fibers[base.dom(h1)]
        h21 = base.compose(h2, h1)
        src = s.restrictions[h2].then(s.restrictions[h1])
        tgt = s.restrictions[h21]
        for x, m in comps.items():
            if (not fib.has_morphism(m) or fib.dom(m) != src.on_obj(x)
                    or fib.cod(m) != tgt.on_obj(x)):
                out.append(Violation("lambda-type", {"path": (h1, h2), "object": x}))
        if out:
            continue
        t = NatTransf(src, tgt, comps)
        for v in t.naturality_failures():
            out.append(Violation("lambda-naturality", {"path": (h1, h2), **v.detail}))
        for x in t.non_invertible():
            out.append(Violation("lambda-not-iso", {"path": (h1, h2), "object": x}))
        if base.is_identity(h1) or base.is_identity(h2):
            for x, m in comps.items():
                if not fib.is_identity(m):
                    out.append(Violation("lambda-not-normalized", {"path": (h1, h2), "object": x}))
    if out:
        return out
    for h2, h1 in base.composable_pairs():
        for h3 in base.out_of(base.cod(h2)):
            fib = s.fibers[base.dom(h1)]
            h32 = base.compose(h3, h2)
            h21 = base.compose(h2, h1)
            for x in s.fibers[base.cod(h3)].objects:
                lhs = fib.compose(s.lam(h1, h32, x), s.jm(h1, s.lam(h2, h3, x)))
                rhs = fib.compose(s.lam(h21, h3, x), s.lam(h1, h2, s.j(h3, x)))
                if lhs != rhs:
                    out.append(Violation("coherence", {"path": (h1, h2, h3), "object": x}))
    return out


# ---------------------------------------------------------------------------
# descent data


@dataclass(frozen=True)
class DescentDatum:
    """Objects and gluing isomorphisms aligned with the elements (resp.
    element morphisms) of the indexing presheaf, in declaration order."""

    objects: tuple
    psis: tuple


@dataclass(frozen=True)
class DescentArrow:
    source: DescentDatum
    target: DescentDatum
    components: tuple


class ElementIndex:
    """Positional lookups into descent data over ``a``."""

    def __init__(self, a: FinPresheaf):
        self.presheaf = a
        self.category, self.projection = category_of_elements(a)
        self.elements = self.category.objects
        self.arrows = self.category.morphisms
        self.el_pos = {e: i for i, e in enumerate(self.elements)}
        self.ar_pos = {m: i for i, m in enumerate(self.arrows)}

    def obj(self, f: DescentDatum, e):
        return f.objects[self.el_pos[e]]

    def psi(self, f: DescentDatum, m):
        return f.psis[self.ar_pos[m]]

    def component(self, phi: DescentArrow, e):
        return phi.components[self.el_pos[e]]


@lru_cache(maxsize=4096)
def element_index(a: FinPresheaf) -> ElementIndex:
    return ElementIndex(a)


def _isos(fib: FinCategory, a, b) -> list:
    return [m for m in fib.hom(a, b) if fib.is_iso(m)]


def cocycle_failures(s: Prestack, a: FinPresheaf, f: DescentDatum) -> list[Violation]:
    idx = element_index(a)
    el = idx.category
    out = []
    for e in idx.elements:
        x = idx.obj(f, e)
        if not s.fibers[e[0]].has_object(x):
            return [Violation("datum-object", {"element": e})]
    for m in idx.arrows:
        h = m[0]
        fib = s.fibers[el.dom(m)[0]]
        psi = idx.psi(f, m)
        want_src = s.j(h, idx.obj(f, el.cod(m)))
        want_tgt = idx.obj(f, el.dom(m))
        if not fib.has_morphism(psi) or fib.dom(psi) != want_src or fib.cod(psi) != want_tgt:
            out.append(Violation("psi-type", {"arrow": m}))
        elif not fib.is_iso(psi):
            out.append(Violation("psi-not-iso", {"arrow": m}))
        elif el.is_identity(m) and not fib.is_identity(psi):
            out.append(Violation("psi-identity", {"arrow": m}))
    if out:
        return out
    for m2, m1 in el.composable_pairs():
        h1, h2 = m1[0], m2[0]
        fib = s.fibers[el.dom(m1)[0]]
        x3 = idx.obj(f, el.cod(m2))
        lhs = fib.compose(idx.psi(f, el.compose(m2, m1)), s.lam(h1, h2, x3))
        rhs = fib.compose(idx.psi(f, m1), s.jm(h1, idx.psi(f, m2)))
        if lhs != rhs:
            out.append(Violation("cocycle", {"arrows": (m1, m2)}))
    return out


def _enumerate_data(s: Prestack, a: FinPresheaf, bound: int) -> list[DescentDatum]:
    idx = element_index(a)
    el = idx.category
    elements, arrows = idx.elements, idx.arrows
    n = len(elements)
    budget = [bound]

    def spend() -> None:
        budget[0] -= 1
        if budget[0] < 0:
            raise InstanceTooLarge(f"descent enumeration over {a!r} exceeds {bound} candidates")

    # arrows whose endpoints are both among the first k elements
    obj_checks: list[list] = [[] for _ in range(n)]
    for m in arrows:
        if el.is_identity(m):
            continue
        i, k = idx.el_pos[el.dom(m)], idx.el_pos[el.cod(m)]
        obj_checks[max(i, k)].append((i, k, m[0]))

    object_choices: list[tuple] = []
    current: list = []

    def extend_objects(k: int) -> None:
        if k == n:
            object_choices.append(tuple(current))
            return
        fib = s.fibers[elements[k][0]]
        for x in fib.objects:
            spend()
            current.append(x)
            if all(_iso_exists(s, h, current[i], current[j]) for i, j, h in obj_checks[k]):
                extend_objects(k + 1)
            current.pop()

    extend_objects(0)

    arrow_pos = idx.ar_pos
    # cocycle checks fire once all three arrows are assigned
    cocycle_at: list[list] = [[] for _ in arrows]
    for m2, m1 in el.composable_pairs():
        m21 = el.compose(m2, m1)
        last = max(arrow_pos[m1], arrow_pos[m2], arrow_pos[m21])
        cocycle_at[last].append((m1, m2, m21))

    out = []
    for objs in object_choices:
        candidates = []
        for m in arrows:
            fib = s.fibers[el.dom(m)[0]]
            src = s.j(m[0], objs[idx.el_pos[el.cod(m)]])
            tgt = objs[idx.el_pos[el.dom(m)]]
            if el.is_identity(m):
                candidates.append([fib.identity(tgt)] if src == tgt else [])
            else:
                candidates.append(_isos(fib, src, tgt))
        psis: list = []

        def extend_psis(k: int) -> None:
            if k == len(arrows):
                out.append(DescentDatum(objs, tuple(psis)))
                return
            for psi in candidates[k]:
                spend()
                psis.append(psi)
                if all(_cocycle_ok(s, idx, objs, psis, m1, m2, m21) for m1, m2, m21 in cocycle_at[k]):
                    extend_psis(k + 1)
                psis.pop()

        extend_psis(0)
    return out


def _iso_exists(s: Prestack, h, x_dom, x_cod) -> bool:
    """Is ``j_h(x_cod)`` isomorphic to ``x_dom`` in the fiber over ``dom h``?"""
    fib = s.fibers[s.base.dom(h)]
    return fib.find_iso(s.j(h, x_cod), x_dom) is not None


def _cocycle_ok(s, idx, objs, psis, m1, m2, m21) -> bool:
    el = idx.category
    h1, h2 = m1[0], m2[0]
    fib = s.fibers[el.dom(m1)[0]]
    x3 = objs[idx.el_pos[el.cod(m2)]]
    p = idx.ar_pos
    lhs = fib.compose(psis[p[m21]], s.lam(h1, h2, x3))
    rhs = fib.compose(psis[p[m1]], s.jm(h1, psis[p[m2]]))
    return lhs == rhs


def _arrow_families(s: Prestack, idx: ElementIndex, f: DescentDatum, g: DescentDatum) -> list[tuple]:
    """Compatible families ``phi_e: F_e -> G_e`` (the Hom formula)."""
    el = idx.category
    elements = idx.elements
    n = len(elements)
    checks: list[list] = [[] for _ in range(n)]
    for m in idx.arrows:
        if el.is_identity(m):
            continue
        i, k = idx.el_pos[el.dom(m)], idx.el_pos[el.cod(m)]
        checks[max(i, k)].append((i, k, m))
    homs = [s.fibers[e[0]].hom(f.objects[i], g.objects[i]) for i, e in enumerate(elements)]
    out: list[tuple] = []
    current: list = []

    def extend(k: int) -> None:
        if k == n:
            out.append(tuple(current))
            return
        for phi in homs[k]:
            current.append(phi)
            ok = True
            for i, j, m in checks[k]:
                fib = s.fibers[elements[i][0]]
                lhs = fib.compose(current[i], idx.psi(f, m))
                rhs = fib.compose(idx.psi(g, m), s.jm(m[0], current[j]))
                if lhs != rhs:
                    ok = False
                    break
            if ok:
                extend(k + 1)
            current.pop()

    extend(0)
    return out


class DescentCategory:
    """``S(A)``: every descent datum over ``a`` and the compatible families
    of fiber morphisms between them."""

    def __init__(self, s: Prestack, a: FinPresheaf, bound: int = MAX_CANDIDATES):
        if a.base is not s.base:
            raise StructuralError("presheaf and prestack live over different bases")
        self.prestack = s
        self.presheaf = a
        self.index = element_index(a)
        self.data = tuple(_enumerate_data(s, a, bound))
        homs = {}
        for f in self.data:
            for g in self.data:
                fams = _arrow_families(s, self.index, f, g)
                if fams:
                    homs[f, g] = tuple(DescentArrow(f, g, fam) for fam in fams)
        ids = {}
        for f in self.data:
            comps = tuple(s.fibers[e[0]].identity(x) for e, x in zip(self.index.elements, f.objects))
            ids[f] = DescentArrow(f, f, comps)
        fibs = [s.fibers[e[0]] for e in self.index.elements]
        comp = {}
        for (f, g), ms in homs.items():
            for p in ms:
                for h in self.data:
                    for q in homs.get((g, h), ()):
                        comp[q, p] = DescentArrow(f, h, tuple(
                            fib.compose(b, a_) for fib, b, a_ in zip(fibs, q.components, p.components)))
        self.category = FinCategory(self.data, homs, ids, comp, name=f"S({a.name or 'A'})")

    def obj(self, f: DescentDatum, e):
        return self.index.obj(f, e)

    def psi(self, f: DescentDatum, m):
        return self.index.psi(f, m)

    def fiber_projection(self, e) -> Functor:
        i = self.index.el_pos[e]
        fib = self.prestack.fibers[e[0]]
        return Functor(self.category, fib,
                       {f: f.objects[i] for f in self.data},
                       {m: m.components[i] for m in self.category.morphisms})


@lru_cache(maxsize=512)
def descent_category(s: Prestack, a: FinPresheaf) -> DescentCategory:
    return DescentCategory(s, a)


# ---------------------------------------------------------------------------
# restriction functors


def _hom_anchor(u: PresheafMorphism):
    base = u.base
    for v in base.objects:
        if u.target.values == {w: base.hom(w, v) for w in base.objects}:
            return v
    raise StructuralError("morphism does not land in a representable presheaf")


def pullback_datum(s: Prestack, u: PresheafMorphism, x) -> DescentDatum:
    """``j_(A,U)* X`` for ``u: A -> y(U)``: restrict ``X`` along each ``u(e)``
    and glue with the composition isomorphisms."""
    idx = element_index(u.source)
    el = idx.category
    objs = tuple(s.j(u.components[v][a], x) for (v, a) in idx.elements)
    psis = []
    for m in idx.arrows:
        v, a = el.cod(m)
        psis.append(s.lam(m[0], u.components[v][a], x))
    return DescentDatum(objs, tuple(psis))


def pullback_arrow(s: Prestack, u: PresheafMorphism, phi) -> tuple:
    idx = element_index(u.source)
    return tuple(s.jm(u.components[v][a], phi) for (v, a) in idx.elements)


def restriction_from_fiber(s: Prestack, u: PresheafMorphism) -> Functor:
    """``j_(A,U)*: S(U) -> S(A)`` for ``u: A -> y(U)``."""
    anchor = _hom_anchor(u)
    fib = s.fibers[anchor]
    target = descent_category(s, u.source)
    obj_map = {x: pullback_datum(s, u, x) for x in fib.objects}
    mor_map = {m: DescentArrow(obj_map[fib.dom(m)], obj_map[fib.cod(m)], pullback_arrow(s, u, m))
               for m in fib.morphisms}
    return Functor(fib, target.category, obj_map, mor_map)


def reindex_datum(w: PresheafMorphism, f: DescentDatum) -> DescentDatum:
    """Restrict a datum over ``B`` to ``A`` along ``w: A -> B``."""
    ia, ib = element_index(w.source), element_index(w.target)
    objs = tuple(ib.obj(f, (v, w.components[v][x])) for (v, x) in ia.elements)
    psis = tuple(ib.psi(f, (h, w.components[ia.category.cod((h, y))[0]][y])) for (h, y) in ia.arrows)
    return DescentDatum(objs, psis)


def restriction_functor_over_a(s: Prestack, w: PresheafMorphism) -> Functor:
    """``j_(A,B)*: S(B) -> S(A)`` for ``w: A -> B``."""
    da, db = descent_category(s, w.source), descent_category(s, w.target)
    ia, ib = da.index, db.index
    obj_map = {f: reindex_datum(w, f) for f in db.data}
    mor_map = {}
    for m in db.category.morphisms:
        comps = tuple(ib.component(m, (v, w.components[v][x])) for (v, x) in ia.elements)
        mor_map[m] = DescentArrow(obj_map[m.source], obj_map[m.target], comps)
    return Functor(db.category, da.category, obj_map, mor_map)
