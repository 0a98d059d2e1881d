"""Finite categories, functors, natural transformations and search-based
universal constructions.

Every search walks objects and morphisms in declaration order and returns
the first candidate that qualifies, so results are reproducible.
"""

from __future__ import annotations

import itertools
from collections.abc import Hashable, Iterable, Mapping, Sequence
from dataclasses import dataclass

from .verdict import InstanceTooLarge, StructuralError, Verdict, Violation

MAX_HOM_SIZE = 64


class FinCategory:
    """A finite category given by explicit tables.

    ``composition[(g, f)]`` is ``g o f`` (``f`` first) and must be present for
    every composable pair.
    """

    def __init__(
        self,
        objects: Iterable[Hashable],
        homs: Mapping[tuple, Iterable[Hashable]],
        identities: Mapping[Hashable, Hashable],
        composition: Mapping[tuple, Hashable],
        name: str | None = None,
    ):
        self.name = name
        self.objects = tuple(objects)
        self._obj_index = {x: i for i, x in enumerate(self.objects)}
        if len(self._obj_index) != len(self.objects):
            raise StructuralError("duplicate object identifier")
        self._homs: dict[tuple, tuple] = {}
        self._dom: dict = {}
        self._cod: dict = {}
        for (a, b), ms in homs.items():
            for x in (a, b):
                if x not in self._obj_index:
                    raise StructuralError(f"hom-set refers to unknown object {x!r}")
            ms = tuple(ms)
            if ms:
                self._homs[a, b] = ms
            for m in ms:
                if m in self._dom:
                    raise StructuralError(f"morphism {m!r} appears in two hom-sets")
                self._dom[m], self._cod[m] = a, b
        morphisms = []
        for a in self.objects:
            for b in self.objects:
                morphisms.extend(self._homs.get((a, b), ()))
        self.morphisms = tuple(morphisms)
        self._mor_index = {m: i for i, m in enumerate(self.morphisms)}
        self._out = {a: tuple(itertools.chain.from_iterable(self.hom(a, b) for b in self.objects))
                     for a in self.objects}
        self._into = {b: tuple(itertools.chain.from_iterable(self.hom(a, b) for a in self.objects))
                      for b in self.objects}

        self.identities = dict(identities)
        for x in self.objects:
            if x not in self.identities:
                raise StructuralError(f"object {x!r} has no identity")
            i = self.identities[x]
            if i not in self._dom:
                raise StructuralError(f"identity {i!r} of {x!r} is not a morphism")
            if self._dom[i] != x or self._cod[i] != x:
                raise StructuralError(f"identity {i!r} is not an endomorphism of {x!r}")
        self._id_set = set(self.identities.values())

        self._comp = dict(composition)
        for (g, f), h in self._comp.items():
            for m in (g, f, h):
                if m not in self._dom:
                    raise StructuralError(f"composition table refers to unknown morphism {m!r}")
            if self._cod[f] != self._dom[g]:
                raise StructuralError(f"composite of non-composable pair ({g!r}, {f!r})")
            if self._dom[h] != self._dom[f] or self._cod[h] != self._cod[g]:
                raise StructuralError(f"composite {g!r} o {f!r} = {h!r} has the wrong type")
        for f in self.morphisms:
            for g in self.out_of(self._cod[f]):
                if (g, f) not in self._comp:
                    raise StructuralError(f"composite {g!r} o {f!r} missing from table")

    # -- basic access -----------------------------------------------------

    def hom(self, a, b) -> tuple:
        return self._homs.get((a, b), ())

    def dom(self, m):
        return self._dom[m]

    def cod(self, m):
        return self._cod[m]

    def identity(self, x):
        return self.identities[x]

    def is_identity(self, m) -> bool:
        return m in self._id_set

    def has_object(self, x) -> bool:
        return x in self._obj_index

    def has_morphism(self, m) -> bool:
        return m in self._dom

    def object_index(self, x) -> int:
        return self._obj_index[x]

    def morphism_index(self, m) -> int:
        return self._mor_index[m]

    def out_of(self, a) -> tuple:
        return self._out[a]

    def into(self, b) -> tuple:
        return self._into[b]

    def compose(self, *ms):
        """``compose(h, g, f) == h o g o f``."""
        result = ms[-1]
        for g in reversed(ms[:-1]):
            result = self._comp[g, result]
        return result

    def composable_pairs(self):
        for f in self.morphisms:
            for g in self.out_of(self._cod[f]):
                yield g, f

    def inverse(self, m):
        a, b = self._dom[m], self._cod[m]
        for k in self.hom(b, a):
            if self._comp[k, m] == self.identities[a] and self._comp[m, k] == self.identities[b]:
                return k
        return None

    def is_iso(self, m) -> bool:
        return self.inverse(m) is not None

    def find_iso(self, a, b):
        hom = self.hom(a, b)
        if len(hom) > MAX_HOM_SIZE:
            raise InstanceTooLarge(f"hom({a!r}, {b!r}) has {len(hom)} morphisms")
        for m in hom:
            if self.inverse(m) is not None:
                return m
        return None

    def is_posetal(self) -> bool:
        return all(len(ms) <= 1 for ms in self._homs.values())

    def op(self) -> FinCategory:
        homs = {(b, a): ms for (a, b), ms in self._homs.items()}
        comp = {(f, g): h for (g, f), h in self._comp.items()}
        return FinCategory(self.objects, homs, self.identities, comp,
                           name=f"{self.name}^op" if self.name else None)

    def __repr__(self) -> str:
        label = self.name or "FinCategory"
        return f"<{label}: {len(self.objects)} objects, {len(self.morphisms)} morphisms>"

    # -- constructors -----------------------------------------------------

    @classmethod
    def from_poset(cls, elements: Sequence, leq: Iterable[tuple], name: str | None = None):
        """Poset category on ``elements``; ``leq`` is closed reflexively and
        transitively. String elements get morphisms named ``x<=y``/``id_x``."""
        elements = tuple(elements)
        rel = {(x, x) for x in elements} | set(leq)
        changed = True
        while changed:
            changed = False
            for (x, y), (y2, z) in itertools.product(list(rel), repeat=2):
                if y == y2 and (x, z) not in rel:
                    rel.add((x, z))
                    changed = True
        for x, y in rel:
            if x != y and (y, x) in rel:
                raise StructuralError(f"order relation is not antisymmetric at {x!r}, {y!r}")
        named = all(isinstance(x, str) for x in elements)

        def arrow(x, y):
            if not named:
                return (x, y)
            return f"id_{x}" if x == y else f"{x}<={y}"

        homs = {(x, y): (arrow(x, y),) for (x, y) in rel}
        comp = {}
        for (x, y) in rel:
            for (y2, z) in rel:
                if y == y2:
                    comp[arrow(y, z), arrow(x, y)] = arrow(x, z)
        ids = {x: arrow(x, x) for x in elements}
        return cls(elements, homs, ids, comp, name=name)

    @classmethod
    def discrete(cls, objects: Iterable, name: str | None = None) -> FinCategory:
        objects = tuple(objects)
        named = all(isinstance(x, str) for x in objects)
        ids = {x: (f"id_{x}" if named else ("id", x)) for x in objects}
        homs = {(x, x): (ids[x],) for x in objects}
        comp = {(ids[x], ids[x]): ids[x] for x in objects}
        return cls(objects, homs, ids, comp, name=name)

    @classmethod
    def terminal(cls) -> FinCategory:
        return cls.discrete(["*"], name="1")

    @classmethod
    def monoid(cls, elements: Sequence, unit, table: Mapping[tuple, Hashable],
               obj="*", name: str | None = None) -> FinCategory:
        """One-object category; ``table[(g, f)] == g o f``."""
        return cls([obj], {(obj, obj): tuple(elements)}, {obj: unit}, table, name=name)

    @classmethod
    def free_on_graph(cls, vertices: Sequence, edges: Sequence[tuple], name=None) -> FinCategory:
        """Free category on an acyclic graph. ``edges`` are ``(label, src, tgt)``;
        non-trivial paths are named by tuples of labels, last arrow first."""
        vertices = tuple(vertices)
        ids = {v: ("id", v) for v in vertices}
        paths: dict[tuple, list] = {(v, v): [ids[v]] for v in vertices}
        ends = {ids[v]: (v, v) for v in vertices}
        frontier = [((label,), s, t) for label, s, t in edges]
        seen = 0
        while frontier:
            seen += len(frontier)
            if seen > 10_000:
                raise StructuralError("graph has a cycle or too many paths")
            nxt = []
            for path, s, t in frontier:
                paths.setdefault((s, t), []).append(path)
                ends[path] = (s, t)
                for label, s2, t2 in edges:
                    if s2 == t:
                        nxt.append(((label,) + path, s, t2))
            frontier = nxt
        comp = {}
        for g, (gs, gt) in ends.items():
            for f, (fs, ft) in ends.items():
                if ft != gs:
                    continue
                if g == ids[gs]:
                    comp[g, f] = f
                elif f == ids[fs]:
                    comp[g, f] = g
                else:
                    comp[g, f] = g + f
        return cls(vertices, paths, ids, comp, name=name)


def check_category_axioms(c: FinCategory) -> list[Violation]:
    """Every failing unit law and associativity instance, in table order."""
    out = []
    for m in c.morphisms:
        a, b = c.dom(m), c.cod(m)
        if c.compose(m, c.identity(a)) != m:
            out.append(Violation("right-unit", {"morphism": m}))
        if c.compose(c.identity(b), m) != m:
            out.append(Violation("left-unit", {"morphism": m}))
    for g, f in c.composable_pairs():
        if c.is_identity(g) or c.is_identity(f):
            continue
        gf = c.compose(g, f)
        for h in c.out_of(c.cod(g)):
            if c.is_identity(h):
                continue
            lhs = c.compose(c.compose(h, g), f)
            rhs = c.compose(h, gf)
            if lhs != rhs:
                out.append(Violation("associativity", {"triple": (h, g, f), "left": lhs, "right": rhs}))
    return out


# ---------------------------------------------------------------------------
# functors and natural transformations


class Functor:
    def __init__(self, source: FinCategory, target: FinCategory,
                 obj_map: Mapping, mor_map: Mapping, name: str | None = None):
        self.source = source
        self.target = target
        self.obj_map = dict(obj_map)
        self.mor_map = dict(mor_map)
        self.name = name

    def on_obj(self, x):
        return self.obj_map[x]

    def on_mor(self, m):
        return self.mor_map[m]

    def then(self, other: Functor) -> Functor:
        """``other o self``."""
        return Functor(
            self.source, other.target,
            {x: other.obj_map[y] for x, y in self.obj_map.items()},
            {m: other.mor_map[n] for m, n in self.mor_map.items()},
        )

    @classmethod
    def identity(cls, c: FinCategory) -> Functor:
        return cls(c, c, {x: x for x in c.objects}, {m: m for m in c.morphisms})

    def is_identity(self) -> bool:
        return (self.source is self.target
                and all(k == v for k, v in self.obj_map.items())
                and all(k == v for k, v in self.mor_map.items()))

    def __repr__(self) -> str:
        return f"<Functor {self.name or ''} {self.source!r} -> {self.target!r}>"


def check_functor(f: Functor) -> list[Violation]:
    out = []
    s, t = f.source, f.target
    for x in s.objects:
        if x not in f.obj_map or not t.has_object(f.obj_map[x]):
            out.append(Violation("object-map", {"object": x}))
            return out
    for m in s.morphisms:
        n = f.mor_map.get(m)
        if n is None or not t.has_morphism(n):
            out.append(Violation("morphism-map", {"morphism": m}))
            return out
        if t.dom(n) != f.obj_map[s.dom(m)] or t.cod(n) != f.obj_map[s.cod(m)]:
            out.append(Violation("morphism-type", {"morphism": m, "image": n}))
    if out:
        return out
    for x in s.objects:
        if f.mor_map[s.identity(x)] != t.identity(f.obj_map[x]):
            out.append(Violation("identity", {"object": x}))
    for g, h in s.composable_pairs():
        if f.mor_map[s.compose(g, h)] != t.compose(f.mor_map[g], f.mor_map[h]):
            out.append(Violation("composition", {"pair": (g, h)}))
    return out


class NatTransf:
    """Components ``alpha[x]: F(x) -> G(x)`` for ``F = source``, ``G = target``."""

    def __init__(self, source: Functor, target: Functor, components: Mapping):
        self.source = source
        self.target = target
        self.components = dict(components)

    def __getitem__(self, x):
        return self.components[x]

    def naturality_failures(self) -> list[Violation]:
        c, d = self.source.source, self.source.target
        out = []
        for x in c.objects:
            a = self.components.get(x)
            if a is None or d.dom(a) != self.source.on_obj(x) or d.cod(a) != self.target.on_obj(x):
                out.append(Violation("component-type", {"object": x}))
        if out:
            return out
        for m in c.morphisms:
            x, y = c.dom(m), c.cod(m)
            lhs = d.compose(self.components[y], self.source.on_mor(m))
            rhs = d.compose(self.target.on_mor(m), self.components[x])
            if lhs != rhs:
                out.append(Violation("naturality", {"morphism": m}))
        return out

    def non_invertible(self) -> list:
        d = self.source.target
        return [x for x, a in self.components.items() if not d.is_iso(a)]

    def is_iso(self) -> bool:
        return not self.non_invertible()

    @classmethod
    def identity(cls, f: Functor) -> NatTransf:
        return cls(f, f, {x: f.target.identity(f.on_obj(x)) for x in f.source.objects})


# ---------------------------------------------------------------------------
# limits and colimits of finite sets


@dataclass
class FinSetDiagram:
    """Covariant ``shape -> FinSet``; ``arrows[m]`` is a dict function."""

    shape: FinCategory
    values: Mapping[Hashable, Sequence]
    arrows: Mapping[Hashable, Mapping]

    def functoriality_failures(self) -> list[Violation]:
        c = self.shape
        out = []
        for x in c.objects:
            ident = self.arrows[c.identity(x)]
            if any(ident[v] != v for v in self.values[x]):
                out.append(Violation("identity", {"object": x}))
        for g, f in c.composable_pairs():
            gf = self.arrows[c.compose(g, f)]
            for v in self.values[c.dom(f)]:
                if gf[v] != self.arrows[g][self.arrows[f][v]]:
                    out.append(Violation("composition", {"pair": (g, f), "element": v}))
                    break
        return out


@dataclass
class SetCone:
    """Limit cone: apex elements are tuples aligned with ``shape.objects``."""

    apex: tuple
    legs: dict


@dataclass
class SetCocone:
    apex: tuple
    legs: dict


def limit_of_sets(d: FinSetDiagram) -> SetCone:
    c = d.shape
    objs = c.objects
    # constraints checked once both ends are assigned
    checks: list[list] = [[] for _ in objs]
    for m in c.morphisms:
        if c.is_identity(m):
            continue
        i, j = c.object_index(c.dom(m)), c.object_index(c.cod(m))
        checks[max(i, j)].append((i, j, d.arrows[m]))
    families = []
    current: list = []

    def extend(k: int) -> None:
        if k == len(objs):
            families.append(tuple(current))
            return
        for v in d.values[objs[k]]:
            current.append(v)
            if all(fn[current[i]] == current[j] for i, j, fn in checks[k]):
                extend(k + 1)
            current.pop()

    extend(0)
    apex = tuple(families)
    legs = {x: {fam: fam[i] for fam in apex} for i, x in enumerate(objs)}
    return SetCone(apex, legs)


def colimit_of_sets(d: FinSetDiagram) -> SetCocone:
    """Disjoint union modulo the arrows; each class is named by its first
    element ``(object, value)`` in declaration order."""
    c = d.shape
    parent: dict = {}
    order = []
    for x in c.objects:
        for v in d.values[x]:
            parent[x, v] = (x, v)
            order.append((x, v))

    def find(p):
        while parent[p] != p:
            parent[p] = parent[parent[p]]
            p = parent[p]
        return p

    rank = {p: i for i, p in enumerate(order)}
    for m in c.morphisms:
        x, y = c.dom(m), c.cod(m)
        for v in d.values[x]:
            a, b = find((x, v)), find((y, d.arrows[m][v]))
            if a != b:
                if rank[a] < rank[b]:
                    parent[b] = a
                else:
                    parent[a] = b
    apex = tuple(p for p in order if find(p) == p)
    legs = {x: {v: find((x, v)) for v in d.values[x]} for x in c.objects}
    return SetCocone(apex, legs)


# ---------------------------------------------------------------------------
# colimits inside a finite category


@dataclass(frozen=True)
class Cocone:
    apex: Hashable
    legs: tuple  # aligned with the diagram shape's objects


class Colimit:
    def __init__(self, category: FinCategory, diagram: Functor, cocone: Cocone):
        self.category = category
        self.diagram = diagram
        self.cocone = cocone

    @property
    def apex(self):
        return self.cocone.apex

    def leg(self, j):
        return self.cocone.legs[self.diagram.source.object_index(j)]

    def mediate(self, apex, legs: Sequence):
        """The unique ``u: colim -> apex`` with ``u o leg_j == legs[j]``."""
        c = self.category
        for u in c.hom(self.cocone.apex, apex):
            if all(c.compose(u, l) == m for l, m in zip(self.cocone.legs, legs)):
                return u
        return None


def diagram_from_objects(c: FinCategory, shape: FinCategory, obj_map: Mapping,
                         mor_map: Mapping | None = None) -> Functor:
    """A diagram whose shape has only identities besides ``mor_map`` entries."""
    mm = {shape.identity(j): c.identity(obj_map[j]) for j in shape.objects}
    mm.update(mor_map or {})
    return Functor(shape, c, obj_map, mm)


def cocones(c: FinCategory, d: Functor, apexes: Iterable | None = None) -> list[Cocone]:
    shape = d.source
    objs = shape.objects
    checks: list[list] = [[] for _ in objs]
    for m in shape.morphisms:
        if shape.is_identity(m):
            continue
        i, j = shape.object_index(shape.dom(m)), shape.object_index(shape.cod(m))
        checks[max(i, j)].append((i, j, d.on_mor(m)))
    out = []
    for x in (c.objects if apexes is None else apexes):
        homs = [c.hom(d.on_obj(j), x) for j in objs]
        if any(not h for h in homs):
            continue
        legs: list = []

        def extend(k: int) -> None:
            if k == len(objs):
                out.append(Cocone(x, tuple(legs)))
                return
            for leg in homs[k]:
                legs.append(leg)
                if all(c.compose(legs[j], dm) == legs[i] for i, j, dm in checks[k]):
                    extend(k + 1)
                legs.pop()

        extend(0)
    return out


def colimit_in_category(c: FinCategory, d: Functor) -> Colimit | None:
    """Initial cocone under ``d`` by exhaustive search, or ``None``."""
    all_cocones = cocones(c, d)
    for cand in all_cocones:
        ok = True
        for other in all_cocones:
            n = 0
            for u in c.hom(cand.apex, other.apex):
                if all(c.compose(u, l) == m for l, m in zip(cand.legs, other.legs)):
                    n += 1
                    if n > 1:
                        break
            if n != 1:
                ok = False
                break
        if ok:
            return Colimit(c, d, cand)
    return None


def initial_object(c: FinCategory):
    for x in c.objects:
        if all(len(c.hom(x, y)) == 1 for y in c.objects):
            return x
    return None


def terminal_object(c: FinCategory):
    for x in c.objects:
        if all(len(c.hom(y, x)) == 1 for y in c.objects):
            return x
    return None


# ---------------------------------------------------------------------------
# comma categories and adjoints


def comma_category(f: Functor, anchor) -> FinCategory:
    """``(f | anchor)``: objects ``(x, h: f(x) -> anchor)``, morphisms
    ``(k, h')`` for commuting triangles ``h' o f(k) == h``."""
    s, t = f.source, f.target
    objects = [(x, h) for x in s.objects for h in t.hom(f.on_obj(x), anchor)]
    homs: dict = {}
    for (x, h) in objects:
        for (y, h2) in objects:
            ms = tuple((k, h2) for k in s.hom(x, y) if t.compose(h2, f.on_mor(k)) == h)
            if ms:
                homs[(x, h), (y, h2)] = ms
    ids = {(x, h): (s.identity(x), h) for (x, h) in objects}
    comp = {}
    for (k1, h1) in itertools.chain.from_iterable(homs.values()):
        for (k2, h2) in itertools.chain.from_iterable(homs.values()):
            if s.cod(k1) == s.dom(k2) and t.compose(h2, f.on_mor(k2)) == h1:
                comp[(k2, h2), (k1, h1)] = (s.compose(k2, k1), h2)
    return FinCategory(objects, homs, ids, comp)


def under_category(anchor, g: Functor) -> FinCategory:
    """``(anchor | g)``: objects ``(d, h: anchor -> g(d))``."""
    s, t = g.source, g.target
    objects = [(x, h) for x in s.objects for h in t.hom(anchor, g.on_obj(x))]
    homs: dict = {}
    for (x, h) in objects:
        for (y, h2) in objects:
            ms = tuple((k, h) for k in s.hom(x, y) if t.compose(g.on_mor(k), h) == h2)
            if ms:
                homs[(x, h), (y, h2)] = ms
    ids = {(x, h): (s.identity(x), h) for (x, h) in objects}
    comp = {}
    for (k1, h1) in itertools.chain.from_iterable(homs.values()):
        h1_out = t.compose(g.on_mor(k1), h1)
        for (k2, h2) in itertools.chain.from_iterable(homs.values()):
            if s.cod(k1) == s.dom(k2) and h2 == h1_out:
                comp[(k2, h2), (k1, h1)] = (s.compose(k2, k1), h1)
    return FinCategory(objects, homs, ids, comp)


class Adjunction:
    """``left -| right`` with ``unit: id => right o left`` and
    ``counit: left o right => id``."""

    def __init__(self, left: Functor, right: Functor, unit: Mapping, counit: Mapping):
        self.left = left
        self.right = right
        self.unit = dict(unit)
        self.counit = dict(counit)

    def to_left(self, h, y):
        """Transpose ``h: x -> R y`` to ``L x -> y``."""
        return self.right.source.compose(self.counit[y], self.left.on_mor(h))

    def to_right(self, k, x):
        """Transpose ``k: L x -> y`` to ``x -> R y``."""
        return self.right.target.compose(self.right.on_mor(k), self.unit[x])

    def unit_transf(self) -> NatTransf:
        c = self.right.target
        return NatTransf(Functor.identity(c), self.left.then(self.right), self.unit)

    def counit_transf(self) -> NatTransf:
        d = self.right.source
        return NatTransf(self.right.then(self.left), Functor.identity(d), self.counit)

    def non_invertible_unit(self) -> list:
        c = self.right.target
        return [x for x in c.objects if not c.is_iso(self.unit[x])]

    def triangle_failures(self) -> list[Violation]:
        c, d = self.right.target, self.right.source
        out = []
        for x in c.objects:
            lx = self.left.on_obj(x)
            if d.compose(self.counit[lx], self.left.on_mor(self.unit[x])) != d.identity(lx):
                out.append(Violation("left-triangle", {"object": x}))
        for y in d.objects:
            ry = self.right.on_obj(y)
            if c.compose(self.right.on_mor(self.counit[y]), self.unit[ry]) != c.identity(ry):
                out.append(Violation("right-triangle", {"object": y}))
        return out


def _initial_under(c_obj, g: Functor):
    """First ``(d, h: c -> g d)`` initial in ``(c | g)``; ``None`` if absent."""
    s, t = g.source, g.target
    cands = [(x, h) for x in s.objects for h in t.hom(c_obj, g.on_obj(x))]
    for x, h in cands:
        ok = True
        for y, h2 in cands:
            n = sum(1 for k in s.hom(x, y) if t.compose(g.on_mor(k), h) == h2)
            if n != 1:
                ok = False
                break
        if ok:
            return x, h
    return None


def left_adjoint_of(g: Functor) -> Adjunction | None:
    """Left adjoint of ``g: D -> C`` from initial objects of ``(c | g)``."""
    d, c = g.source, g.target
    obj_map, unit = {}, {}
    for x in c.objects:
        found = _initial_under(x, g)
        if found is None:
            return None
        obj_map[x], unit[x] = found

    mor_map = {}
    for m in c.morphisms:
        x, y = c.dom(m), c.cod(m)
        target = c.compose(unit[y], m)
        for k in d.hom(obj_map[x], obj_map[y]):
            if c.compose(g.on_mor(k), unit[x]) == target:
                mor_map[m] = k
                break
        else:
            return None
    counit = {}
    for y in d.objects:
        gy = g.on_obj(y)
        for k in d.hom(obj_map[gy], y):
            if c.compose(g.on_mor(k), unit[gy]) == c.identity(gy):
                counit[y] = k
                break
        else:
            return None
    left = Functor(c, d, obj_map, mor_map)
    adj = Adjunction(left, g, unit, counit)
    if adj.triangle_failures():
        return None
    return adj


# ---------------------------------------------------------------------------
# fully faithful functors and equivalences


def is_fully_faithful(f: Functor) -> Verdict:
    s, t = f.source, f.target
    for a in s.objects:
        for b in s.objects:
            src = s.hom(a, b)
            tgt = t.hom(f.on_obj(a), f.on_obj(b))
            images = [f.on_mor(m) for m in src]
            if len(set(images)) != len(images):
                return Verdict.failed(reason="not faithful", source=a, target=b,
                                      hom_size=len(src), image_size=len(set(images)))
            if len(images) != len(tgt):
                return Verdict.failed(reason="not full", source=a, target=b,
                                      hom_size=len(src), target_hom_size=len(tgt))
    return Verdict.passed()


def is_essentially_surjective(f: Functor) -> Verdict:
    t = f.target
    images = []
    for x in f.source.objects:
        y = f.on_obj(x)
        if y not in images:
            images.append(y)
    for z in t.objects:
        if not any(t.find_iso(y, z) is not None for y in images):
            return Verdict.failed(reason="not essentially surjective", missed=z)
    return Verdict.passed()


def is_equivalence(f: Functor) -> Verdict:
    ff = is_fully_faithful(f)
    if not ff:
        return ff
    return is_essentially_surjective(f)
