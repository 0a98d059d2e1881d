"""Finite-set-valued presheaves on a finite base category, their morphisms,
sieves, categories of elements and the extension ``F(A) = lim F(U)``."""

from __future__ import annotations

import itertools
from collections.abc import Hashable, Iterable, Mapping, Sequence
from functools import lru_cache

from .fincat import FinCategory, FinSetDiagram, Functor, SetCone, limit_of_sets
from .verdict import InstanceTooLarge, StructuralError, Violation

MAX_PRODUCT = 10**6


class FinPresheaf:
    """``values[U]`` is an ordered tuple; for ``f: U -> V``,
    ``restrictions[f]`` maps ``values[V]`` to ``values[U]``.

    Restrictions along identities may be omitted.
    """

    def __init__(self, base: FinCategory, values: Mapping[Hashable, Sequence],
                 restrictions: Mapping[Hashable, Mapping] | None = None, name: str | None = None):
        self.base = base
        self.name = name
        restrictions = dict(restrictions or {})
        self.values = {}
        for u in base.objects:
            if u not in values:
                raise StructuralError(f"presheaf has no value at {u!r}")
            vs = tuple(values[u])
            if len(set(vs)) != len(vs):
                raise StructuralError(f"repeated element in value at {u!r}")
            self.values[u] = vs
        for u in values:
            if not base.has_object(u):
                raise StructuralError(f"presheaf value at unknown object {u!r}")
        self.restrictions = {}
        for f in base.morphisms:
            src, tgt = base.dom(f), base.cod(f)
            r = restrictions.get(f)
            if r is None:
                if not base.is_identity(f):
                    raise StructuralError(f"presheaf has no restriction along {f!r}")
                r = {x: x for x in self.values[src]}
            r = dict(r)
            target_vals = set(self.values[src])
            for y in self.values[tgt]:
                if y not in r:
                    raise StructuralError(f"restriction along {f!r} undefined on {y!r}")
                if r[y] not in target_vals:
                    raise StructuralError(f"restriction along {f!r} sends {y!r} outside the value set")
            self.restrictions[f] = r
        for f in restrictions:
            if not base.has_morphism(f):
                raise StructuralError(f"restriction along unknown morphism {f!r}")
        self._key = None

    def restrict(self, f, y):
        return self.restrictions[f][y]

    def elements(self) -> list[tuple]:
        return [(u, x) for u in self.base.objects for x in self.values[u]]

    def key(self) -> tuple:
        if self._key is None:
            vals = tuple(self.values[u] for u in self.base.objects)
            res = tuple(tuple(self.restrictions[f][y] for y in self.values[self.base.cod(f)])
                        for f in self.base.morphisms)
            self._key = (id(self.base), vals, res)
        return self._key

    def __eq__(self, other) -> bool:
        return isinstance(other, FinPresheaf) and self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())

    def __repr__(self) -> str:
        sizes = ", ".join(f"{u}:{len(self.values[u])}" for u in self.base.objects)
        return f"<FinPresheaf {self.name or ''} [{sizes}]>"


def presheaf_functoriality_failures(a: FinPresheaf) -> list[Violation]:
    c = a.base
    out = []
    for g, f in c.composable_pairs():
        # f: U -> V, g: V -> W, so a(g o f) = a(f) o a(g)
        gf = c.compose(g, f)
        for z in a.values[c.cod(g)]:
            if a.restrict(gf, z) != a.restrict(f, a.restrict(g, z)):
                out.append(Violation("functoriality", {"pair": (g, f), "element": z}))
                break
    return out


class PresheafMorphism:
    def __init__(self, source: FinPresheaf, target: FinPresheaf, components: Mapping):
        if source.base is not target.base:
            raise StructuralError("presheaf morphism between different bases")
        self.source = source
        self.target = target
        self.components = {}
        for u in source.base.objects:
            comp = dict(components[u])
            tv = set(target.values[u])
            for x in source.values[u]:
                if x not in comp or comp[x] not in tv:
                    raise StructuralError(f"component at {u!r} is not a function into the target")
            self.components[u] = comp

    @property
    def base(self) -> FinCategory:
        return self.source.base

    def __call__(self, u, x):
        return self.components[u][x]

    def then(self, other: PresheafMorphism) -> PresheafMorphism:
        """``other o self``."""
        return PresheafMorphism(self.source, other.target, {
            u: {x: other.components[u][y] for x, y in comp.items()}
            for u, comp in self.components.items()})

    def naturality_failures(self) -> list[Violation]:
        c = self.base
        out = []
        for f in c.morphisms:
            u, v = c.dom(f), c.cod(f)
            for y in self.source.values[v]:
                if self.components[u][self.source.restrict(f, y)] != self.target.restrict(f, self.components[v][y]):
                    out.append(Violation("naturality", {"morphism": f, "element": y}))
                    break
        return out

    def is_mono(self) -> bool:
        return all(len(set(comp.values())) == len(comp) for comp in self.components.values())

    def key(self) -> tuple:
        return (self.source.key(), self.target.key(),
                tuple(tuple(self.components[u][x] for x in self.source.values[u])
                      for u in self.base.objects))

    def __eq__(self, other) -> bool:
        return isinstance(other, PresheafMorphism) and self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())

    @classmethod
    def identity(cls, a: FinPresheaf) -> PresheafMorphism:
        return cls(a, a, {u: {x: x for x in a.values[u]} for u in a.base.objects})


# ---------------------------------------------------------------------------
# basic presheaves


@lru_cache(maxsize=None)
def yoneda(base: FinCategory, u) -> FinPresheaf:
    if not base.has_object(u):
        raise StructuralError(f"unknown object {u!r}")
    values = {v: base.hom(v, u) for v in base.objects}
    restrictions = {f: {g: base.compose(g, f) for g in values[base.cod(f)]} for f in base.morphisms}
    return FinPresheaf(base, values, restrictions, name=f"y({u})")


def yoneda_morphism(base: FinCategory, f) -> PresheafMorphism:
    """``y(f): y(U) -> y(V)`` for ``f: U -> V``, by postcomposition."""
    src, tgt = yoneda(base, base.dom(f)), yoneda(base, base.cod(f))
    return PresheafMorphism(src, tgt, {
        w: {g: base.compose(f, g) for g in src.values[w]} for w in base.objects})


def element_morphism(b: FinPresheaf, u, y) -> PresheafMorphism:
    """The morphism ``y(U) -> b`` classifying ``y in b(U)``."""
    base = b.base
    src = yoneda(base, u)
    return PresheafMorphism(src, b, {
        w: {g: b.restrict(g, y) for g in src.values[w]} for w in base.objects})


def empty_presheaf(base: FinCategory) -> FinPresheaf:
    return FinPresheaf(base, {u: () for u in base.objects},
                       {f: {} for f in base.morphisms}, name="0")


def terminal_presheaf(base: FinCategory) -> FinPresheaf:
    return FinPresheaf(base, {u: ("*",) for u in base.objects},
                       {f: {"*": "*"} for f in base.morphisms}, name="1")


def unique_from_empty(b: FinPresheaf) -> PresheafMorphism:
    return PresheafMorphism(empty_presheaf(b.base), b, {u: {} for u in b.base.objects})


def presheaf_homs(a: FinPresheaf, b: FinPresheaf) -> list[PresheafMorphism]:
    """All natural transformations ``a -> b``: product of components,
    filtered by naturality."""
    base = a.base
    objs = base.objects
    per_object = []
    total = 1
    for u in objs:
        funcs = list(itertools.product(b.values[u], repeat=len(a.values[u])))
        total *= len(funcs)
        if total > MAX_PRODUCT:
            raise InstanceTooLarge(f"{total} candidate families between presheaves")
        per_object.append([dict(zip(a.values[u], img)) for img in funcs])
    out = []
    for choice in itertools.product(*per_object):
        comps = dict(zip(objs, choice))
        ok = True
        for f in base.morphisms:
            u, v = base.dom(f), base.cod(f)
            for y in a.values[v]:
                if comps[u][a.restrict(f, y)] != b.restrict(f, comps[v][y]):
                    ok = False
                    break
            if not ok:
                break
        if ok:
            out.append(PresheafMorphism(a, b, comps))
    return out


def fiber_product(u: PresheafMorphism, v: PresheafMorphism):
    """Pointwise pullback of ``u: a -> c`` and ``v: b -> c``.

    Returns ``(p, pa, pb)`` with elements ``(x, y)`` such that ``u(x) == v(y)``.
    """
    if u.target != v.target:
        raise StructuralError("fiber product of morphisms with different targets")
    a, b = u.source, v.source
    base = a.base
    values = {w: tuple((x, y) for x in a.values[w] for y in b.values[w]
                       if u.components[w][x] == v.components[w][y]) for w in base.objects}
    restrictions = {f: {(x, y): (a.restrict(f, x), b.restrict(f, y)) for (x, y) in values[base.cod(f)]}
                    for f in base.morphisms}
    p = FinPresheaf(base, values, restrictions)
    pa = PresheafMorphism(p, a, {w: {xy: xy[0] for xy in values[w]} for w in base.objects})
    pb = PresheafMorphism(p, b, {w: {xy: xy[1] for xy in values[w]} for w in base.objects})
    return p, pa, pb


def diagonal(u: PresheafMorphism):
    """``a -> a x_b a`` for ``u: a -> b``, together with the fiber product."""
    p, p1, p2 = fiber_product(u, u)
    a = u.source
    d = PresheafMorphism(a, p, {w: {x: (x, x) for x in a.values[w]} for w in a.base.objects})
    return d, p


def coproduct(a: FinPresheaf, b: FinPresheaf):
    base = a.base
    values = {w: tuple((0, x) for x in a.values[w]) + tuple((1, y) for y in b.values[w])
              for w in base.objects}
    restrictions = {f: {(i, z): (i, (a if i == 0 else b).restrict(f, z)) for (i, z) in values[base.cod(f)]}
                    for f in base.morphisms}
    s = FinPresheaf(base, values, restrictions)
    i1 = PresheafMorphism(a, s, {w: {x: (0, x) for x in a.values[w]} for w in base.objects})
    i2 = PresheafMorphism(b, s, {w: {y: (1, y) for y in b.values[w]} for w in base.objects})
    return s, i1, i2


def copair(u: PresheafMorphism, v: PresheafMorphism) -> PresheafMorphism:
    s, _, _ = coproduct(u.source, v.source)
    base = s.base
    return PresheafMorphism(s, u.target, {
        w: {(i, z): (u if i == 0 else v).components[w][z] for (i, z) in s.values[w]}
        for w in base.objects})


# ---------------------------------------------------------------------------
# category of elements and the extension formula


@lru_cache(maxsize=4096)
def category_of_elements(a: FinPresheaf) -> tuple[FinCategory, Functor]:
    """Objects ``(U, x)``; ``(f, y): (U, a(f)(y)) -> (V, y)`` for ``f: U -> V``."""
    base = a.base
    objects = a.elements()
    homs: dict = {}
    for f in base.morphisms:
        u, v = base.dom(f), base.cod(f)
        for y in a.values[v]:
            homs.setdefault(((u, a.restrict(f, y)), (v, y)), []).append((f, y))
    ids = {(u, x): (base.identity(u), x) for (u, x) in objects}
    comp = {}
    for ms in homs.values():
        for (f, y) in ms:
            v = base.cod(f)
            for g in base.out_of(v):
                w = base.cod(g)
                for z in a.values[w]:
                    if a.restrict(g, z) == y:
                        comp[(g, z), (f, y)] = (base.compose(g, f), z)
    cat = FinCategory(objects, homs, ids, comp, name=f"El({a.name or ''})")
    proj = Functor(cat, base, {e: e[0] for e in objects},
                   {m: m[0] for m in cat.morphisms})
    return cat, proj


def extend_presheaf(f: FinPresheaf, a: FinPresheaf) -> SetCone:
    """``f(a)``: compatible families over the category of elements of ``a``.

    Apex elements are tuples aligned with the elements of ``a``.
    """
    if f.base is not a.base:
        raise StructuralError("presheaves over different bases")
    cat, _ = category_of_elements(a)
    op = cat.op()
    values = {e: f.values[e[0]] for e in cat.objects}
    arrows = {(h, y): f.restrictions[h] for (h, y) in cat.morphisms}
    return limit_of_sets(FinSetDiagram(op, values, arrows))


# ---------------------------------------------------------------------------
# sieves


class Sieve:
    """A set of morphisms into ``anchor`` closed under precomposition."""

    def __init__(self, base: FinCategory, anchor, members: Iterable):
        self.base = base
        self.anchor = anchor
        ms = frozenset(members)
        for f in ms:
            if not base.has_morphism(f) or base.cod(f) != anchor:
                raise StructuralError(f"{f!r} is not a morphism into {anchor!r}")
        for f in ms:
            for g in base.into(base.dom(f)):
                if base.compose(f, g) not in ms:
                    raise StructuralError(f"sieve on {anchor!r} not closed: {f!r} o {g!r}")
        self.members = ms

    @classmethod
    def generated(cls, base: FinCategory, anchor, family: Iterable) -> Sieve:
        ms = set()
        for f in family:
            for g in base.into(base.dom(f)):
                ms.add(base.compose(f, g))
        return cls(base, anchor, ms)

    @classmethod
    def maximal(cls, base: FinCategory, anchor) -> Sieve:
        return cls(base, anchor, base.into(anchor))

    @classmethod
    def empty(cls, base: FinCategory, anchor) -> Sieve:
        return cls(base, anchor, ())

    def __contains__(self, f) -> bool:
        return f in self.members

    def selected(self, v) -> tuple:
        return tuple(f for f in self.base.hom(v, self.anchor) if f in self.members)

    def sorted_members(self) -> tuple:
        return tuple(f for f in self.base.into(self.anchor) if f in self.members)

    def is_maximal(self) -> bool:
        return self.base.identity(self.anchor) in self.members

    def pullback(self, f) -> Sieve:
        """``f^* S = {g | f o g in S}`` for ``f: V -> anchor``."""
        base = self.base
        if base.cod(f) != self.anchor:
            raise StructuralError(f"{f!r} does not land in {self.anchor!r}")
        v = base.dom(f)
        return Sieve(base, v, (g for g in base.into(v) if base.compose(f, g) in self.members))

    def __and__(self, other: Sieve) -> Sieve:
        return Sieve(self.base, self.anchor, self.members & other.members)

    def __le__(self, other: Sieve) -> bool:
        return self.anchor == other.anchor and self.members <= other.members

    def __eq__(self, other) -> bool:
        return (isinstance(other, Sieve) and self.base is other.base
                and self.anchor == other.anchor and self.members == other.members)

    def __hash__(self) -> int:
        return hash((id(self.base), self.anchor, self.members))

    def __repr__(self) -> str:
        return f"Sieve({self.anchor!r}, {list(self.sorted_members())!r})"

    def presheaf(self) -> FinPresheaf:
        return _sieve_presheaf(self)

    def inclusion(self) -> PresheafMorphism:
        return _sieve_inclusion(self)


@lru_cache(maxsize=None)
def _sieve_presheaf(s: Sieve) -> FinPresheaf:
    base = s.base
    values = {v: s.selected(v) for v in base.objects}
    restrictions = {f: {g: base.compose(g, f) for g in values[base.cod(f)]} for f in base.morphisms}
    return FinPresheaf(base, values, restrictions, name=f"S({s.anchor})")


@lru_cache(maxsize=None)
def _sieve_inclusion(s: Sieve) -> PresheafMorphism:
    a = s.presheaf()
    return PresheafMorphism(a, yoneda(s.base, s.anchor),
                            {v: {g: g for g in a.values[v]} for v in s.base.objects})


def image_sieve(u: PresheafMorphism) -> Sieve:
    """Morphisms ``f: V -> U`` that factor through ``u: a -> y(U)``."""
    target = u.target
    base = target.base
    anchors = [x for x in base.objects if target == yoneda(base, x)]
    if not anchors:
        raise StructuralError("image sieve needs a representable target")
    anchor = anchors[0]
    members = set()
    for v in base.objects:
        members.update(u.components[v].values())
    return Sieve(base, anchor, members)


@lru_cache(maxsize=None)
def all_sieves(base: FinCategory, anchor) -> tuple[Sieve, ...]:
    """Every sieve on ``anchor``, smallest first, ties by member order."""
    into = base.into(anchor)
    found = {frozenset()}
    frontier = [frozenset()]
    while frontier:
        nxt = []
        for ms in frontier:
            for f in into:
                if f in ms:
                    continue
                grown = frozenset(ms | Sieve.generated(base, anchor, [f]).members)
                if grown not in found:
                    found.add(grown)
                    nxt.append(grown)
        frontier = nxt
    order = {f: i for i, f in enumerate(into)}
    ranked = sorted(found, key=lambda ms: (len(ms), sorted(order[f] for f in ms)))
    return tuple(Sieve(base, anchor, ms) for ms in ranked)
