"""Built-in sites and prestacks, curated negatives, and seeded generators."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass

from .fincat import Adjunction, FinCategory, Functor, check_category_axioms
from .prestack import Prestack, check_prestack
from .presheaf import PresheafMorphism, Sieve, all_sieves, copair, yoneda_morphism
from .site import Pretopology, Topology, maximal_topology, saturate, topology_violations
from .verdict import GenerationExhausted, HypothesisFailure, StructuralError

# ---------------------------------------------------------------------------
# small categories


def chain_lattice(n: int) -> FinCategory:
    """Totally ordered lattice ``0 < 1 < ... < n-1`` with string names."""
    names = [str(i) for i in range(n)]
    return FinCategory.from_poset(names, zip(names, names[1:]), name=f"chain{n}")


def diamond_lattice() -> FinCategory:
    """``0 < x, y < 1``."""
    return FinCategory.from_poset(["0", "x", "y", "1"],
                                  [("0", "x"), ("0", "y"), ("x", "1"), ("y", "1")], name="diamond")


def subset_name(members) -> str:
    return "{" + ",".join(members) + "}"


def powerset_lattice(elements) -> tuple[FinCategory, dict]:
    """Subsets of ``elements`` under inclusion; also returns name -> subset."""
    elements = list(elements)
    subsets = [c for k in range(len(elements) + 1) for c in itertools.combinations(elements, k)]
    names = {subset_name(c): frozenset(c) for c in subsets}
    order = [(a, b) for a in names for b in names if a != b and names[a] <= names[b]]
    return FinCategory.from_poset(list(names), order), names


def _lattice_map(src: FinCategory, tgt: FinCategory, obj_map: dict) -> Functor:
    """Monotone map between posetal categories as a functor."""
    mor_map = {}
    for m in src.morphisms:
        a, b = obj_map[src.dom(m)], obj_map[src.cod(m)]
        hom = tgt.hom(a, b)
        if not hom:
            raise StructuralError(f"map is not monotone at {m!r}")
        mor_map[m] = hom[0]
    return Functor(src, tgt, obj_map, mor_map)


# ---------------------------------------------------------------------------
# sites


def point_site(empty_covers: bool = False) -> Topology:
    base = FinCategory.from_poset(["p"], [], name="point")
    if empty_covers:
        return Topology(base, {"p": [Sieve.maximal(base, "p"), Sieve.empty(base, "p")]})
    return maximal_topology(base)


def chain_site(n: int = 3) -> Topology:
    """``c0 < ... < c(n-1)``; the top is covered by everything strictly below."""
    names = [f"c{i}" for i in range(n)]
    base = FinCategory.from_poset(names, zip(names, names[1:]), name=f"chain{n}")
    if n < 2:
        return maximal_topology(base)
    top = names[-1]
    return saturate(Pretopology(base, {top: [[f"{names[-2]}<={top}"]]}))


def vee_site() -> Topology:
    """``a, b < u`` with ``u`` covered by ``{a, b}``; ``a`` and ``b`` share nothing."""
    base = FinCategory.from_poset(["a", "b", "u"], [("a", "u"), ("b", "u")], name="vee")
    return saturate(Pretopology(base, {"u": [["a<=u", "b<=u"]]}))


def diamond_site() -> Topology:
    """``o < a, b < u`` with ``u`` covered by ``{a, b}``."""
    base = FinCategory.from_poset(["o", "a", "b", "u"],
                                  [("o", "a"), ("o", "b"), ("a", "u"), ("b", "u")], name="diamond")
    return saturate(Pretopology(base, {"u": [["a<=u", "b<=u"]]}))


def maximal_vee_site() -> Topology:
    return maximal_topology(vee_site().base)


def gallery_sites() -> dict[str, Topology]:
    return {
        "point": point_site(),
        "chain2": chain_site(2),
        "chain3": chain_site(3),
        "vee": vee_site(),
        "diamond": diamond_site(),
    }


def stability_broken_site() -> Topology:
    """``u`` covered by ``{a}`` alone on the vee poset; the pullback along
    ``b`` (the empty sieve) is not declared covering."""
    base = vee_site().base
    cov = {x: [Sieve.maximal(base, x)] for x in base.objects}
    cov["u"].append(Sieve.generated(base, "u", ["a<=u"]))
    return Topology(base, cov)


# ---------------------------------------------------------------------------
# prestacks


def _require_poset(base: FinCategory) -> None:
    if not base.is_posetal():
        raise StructuralError("base is not a poset category")


def _below(base: FinCategory, u) -> list:
    return [v for v in base.objects if base.hom(v, u)]


def closed_sieves(t: Topology, u) -> list[frozenset]:
    """Down-sets ``D`` of ``u`` containing every ``p`` they cover."""
    base = t.base
    below = _below(base, u)
    out = []
    for k in range(len(below) + 1):
        for combo in itertools.combinations(below, k):
            d = frozenset(combo)
            if any(q not in d for p in d for q in _below(base, p)):
                continue
            closed = True
            for p in below:
                if p in d:
                    continue
                s = Sieve(base, p, [m for m in base.into(p) if base.dom(m) in d])
                if t.is_covering(s):
                    closed = False
                    break
            if closed:
                out.append(d)
    return out


def open_subsets_stack(t: Topology) -> Prestack:
    """Fiber over ``U``: closed down-sets below ``U`` under inclusion;
    restriction intersects with ``down(V)``. For the maximal topology these
    are all down-sets below ``U``."""
    base = t.base
    _require_poset(base)
    order = {x: i for i, x in enumerate(base.objects)}
    fibers, sets = {}, {}
    for u in base.objects:
        ds = sorted(closed_sieves(t, u), key=lambda d: (len(d), sorted(order[x] for x in d)))
        names = {subset_name(sorted(d, key=order.get)): d for d in ds}
        rel = [(a, b) for a in names for b in names if a != b and names[a] <= names[b]]
        fibers[u] = FinCategory.from_poset(list(names), rel, name=f"O({u})")
        sets[u] = names
    back = {u: {d: n for n, d in sets[u].items()} for u in base.objects}
    restrictions = {}
    for h in base.morphisms:
        v, u = base.dom(h), base.cod(h)
        down_v = frozenset(_below(base, v))
        obj_map = {n: back[v][d & down_v] for n, d in sets[u].items()}
        restrictions[h] = _lattice_map(fibers[u], fibers[v], obj_map)
    return Prestack(base, fibers, restrictions, name="opens")


def constant_prestack(base: FinCategory, fiber: FinCategory, name: str | None = None) -> Prestack:
    ident = Functor.identity(fiber)
    return Prestack(base, {u: fiber for u in base.objects}, {h: ident for h in base.morphisms},
                    name=name or f"const({fiber.name or 'C'})")


def _two_object_prestack(fu: FinCategory, fa: FinCategory, obj_map: dict, name: str) -> Prestack:
    base = FinCategory.from_poset(["a", "u"], [("a", "u")], name="chain2")
    r = _lattice_map(fu, fa, obj_map)
    return Prestack(base, {"a": fa, "u": fu}, {"a<=u": r}, name=name)


@dataclass(frozen=True)
class Fixture:
    name: str
    prestack: Prestack
    topology: Topology
    fails: str | None = None  # the single axiom this fixture breaks


def negative_fixtures() -> list[Fixture]:
    """One fixture per PRS axiom, each breaking exactly that axiom."""
    two = chain_lattice(2)
    pt = point_site(empty_covers=True)
    prs1 = constant_prestack(pt.base, two, name="empty-cover")
    prs2_site = point_site()
    prs2 = constant_prestack(prs2_site.base, FinCategory.discrete(["l", "r"], name="pair"),
                             name="discrete-fiber")
    prs3 = _two_object_prestack(diamond_lattice(), two, {"0": "0", "x": "0", "y": "0", "1": "1"},
                                name="join-breaking")
    prs4 = _two_object_prestack(diamond_lattice(), two, {"0": "0", "x": "1", "y": "1", "1": "1"},
                                name="no-left-adjoint")
    vee = vee_site()
    prs5 = constant_prestack(vee.base, two, name="constant-on-vee")
    return [
        Fixture("empty-cover", prs1, pt, "PRS1"),
        Fixture("discrete-fiber", prs2, prs2_site, "PRS2"),
        Fixture("join-breaking", prs3, maximal_topology(prs3.base), "PRS3"),
        Fixture("no-left-adjoint", prs4, maximal_topology(prs4.base), "PRS4"),
        Fixture("constant-on-vee", prs5, vee, "PRS5"),
    ]


def positive_fixtures() -> list[Fixture]:
    out = []
    for name, t in gallery_sites().items():
        out.append(Fixture(f"opens-{name}", open_subsets_stack(t), t))
    vee = vee_site()
    out.append(Fixture("terminal-on-vee", constant_prestack(vee.base, FinCategory.terminal()), vee))
    return out


def extra_fixtures() -> list[Fixture]:
    """Further instances that are not proper: a stack failing base change,
    and a non-stack with a fiber lacking coproducts."""
    mv = maximal_vee_site()
    vee = vee_site()
    pair = FinCategory.discrete(["l", "r"], name="pair")
    return [
        Fixture("constant-on-maximal-vee", constant_prestack(mv.base, chain_lattice(2)), mv, "PRS5"),
        Fixture("discrete-on-vee", constant_prestack(vee.base, pair), vee, None),
    ]


def gallery_fixtures() -> list[Fixture]:
    return positive_fixtures() + negative_fixtures() + extra_fixtures()


def top_constant_adjunction(s: Prestack, h) -> Adjunction:
    """A broken stand-in for the left adjoint along ``h``: every object goes
    to the terminal object of the fiber over ``cod h``. Units are the unique
    arrows into ``j_h(top)``; counits exist only at the top."""
    base = s.base
    src, tgt = s.fibers[base.dom(h)], s.fibers[base.cod(h)]
    top = next(x for x in tgt.objects if all(len(tgt.hom(y, x)) == 1 for y in tgt.objects))
    left = Functor(src, tgt, {x: top for x in src.objects},
                   {m: tgt.identity(top) for m in src.morphisms})
    unit = {x: src.hom(x, s.j(h, top))[0] for x in src.objects}
    adj = Adjunction(left, s.restrictions[h], unit, {top: tgt.identity(top)})
    adj.counit = _PartialCounit(adj.counit, h)
    return adj


class _PartialCounit(dict):
    def __init__(self, data, h):
        super().__init__(data)
        self.h = h

    def __missing__(self, y):
        raise HypothesisFailure(f"no counit at {y!r}", {"morphism": self.h, "object": y})


# ---------------------------------------------------------------------------
# corpora


def canonical_corpus(t: Topology) -> list[PresheafMorphism]:
    """Every sieve inclusion, every representable morphism, and the copair of
    each pair of sieve inclusions into the same representable."""
    base = t.base
    inclusions = [s.inclusion() for u in base.objects for s in all_sieves(base, u)]
    out = list(inclusions)
    out += [yoneda_morphism(base, f) for f in base.morphisms]
    for i, a in enumerate(inclusions):
        for b in inclusions[i:]:
            if a.target == b.target:
                out.append(copair(a, b))
    return out


# ---------------------------------------------------------------------------
# random instances


@dataclass(frozen=True)
class Bounds:
    objects: int = 3
    labels: int = 2
    retries: int = 100
    lattice_fibers: bool = True


DEFAULT_BOUNDS = Bounds()


def _valid_site(t: Topology) -> bool:
    return not check_category_axioms(t.base) and not topology_violations(t)


def random_site(seed: int, bounds: Bounds = DEFAULT_BOUNDS) -> Topology:
    """Random finite poset with a saturated random covering family system."""
    rng = random.Random(seed)
    for _ in range(bounds.retries):
        if bounds.objects < 1:
            break
        n = rng.randint(1, bounds.objects)
        names = [f"p{i}" for i in range(n)]
        rel = [(names[i], names[j]) for i in range(n) for j in range(i + 1, n) if rng.random() < 0.5]
        base = FinCategory.from_poset(names, rel, name=f"random{seed}")
        cov = {}
        for u in names:
            strict = [m for m in base.into(u) if not base.is_identity(m)]
            if strict and rng.random() < 0.5:
                k = rng.randint(1, len(strict))
                cov[u] = [sorted(rng.sample(strict, k), key=base.morphism_index)]
        t = saturate(Pretopology(base, cov))
        if _valid_site(t):
            return t
    raise GenerationExhausted(f"no site within bounds {bounds} for seed {seed}")


def _random_partitions(rng: random.Random, base: FinCategory, labels: list[str],
                       finer_below: bool) -> dict:
    """Partitions of ``labels`` per object, finer below (or coarser below)."""
    order = sorted(base.objects, key=lambda u: len(_below(base, u)), reverse=not finer_below)
    parts: dict = {}
    for u in order:
        related = [v for v in parts if (base.hom(v, u) if finer_below else base.hom(u, v))]
        parent = {x: x for x in labels}

        def find(x):
            while parent[x] != x:
                x = parent[x]
            return x

        def union(x, y):
            rx, ry = find(x), find(y)
            if rx != ry:
                parent[max(rx, ry)] = min(rx, ry)

        for v in related:
            for block in parts[v]:
                for y in block[1:]:
                    union(block[0], y)
        if len(labels) > 1 and rng.random() < 0.4:
            x, y = rng.sample(labels, 2)
            union(x, y)
        blocks: dict = {}
        for x in labels:
            blocks.setdefault(find(x), []).append(x)
        parts[u] = tuple(tuple(b) for b in sorted(blocks.values()))
    return parts


def _block_of(parts: tuple, x) -> str:
    return "".join(next(b for b in parts if x in b))


def _subset_prestack(base: FinCategory, parts: dict, direction: str, name: str) -> Prestack:
    """Subsets of blocks; restriction along ``v <= u`` is preimage (blocks
    finer below) or image (blocks coarser below) under the quotient maps."""
    fibers, names = {}, {}
    for u in base.objects:
        fibers[u], names[u] = powerset_lattice(["".join(b) for b in parts[u]])
    back = {u: {d: n for n, d in names[u].items()} for u in base.objects}
    restrictions = {}
    for h in base.morphisms:
        v, u = base.dom(h), base.cod(h)
        obj_map = {}
        for n, d in names[u].items():
            if direction == "preimage":
                img = frozenset("".join(b) for b in parts[v] if _block_of(parts[u], b[0]) in d)
            else:
                img = frozenset(_block_of(parts[v], b[0]) for b in d)
            obj_map[n] = back[v][img]
        restrictions[h] = _lattice_map(fibers[u], fibers[v], obj_map)
    return Prestack(base, fibers, restrictions, name=name)


KINDS = ("opens", "constant", "preimage", "image")


def random_prestack(seed: int, site: Topology, bounds: Bounds = DEFAULT_BOUNDS) -> Prestack:
    """Seeded prestack over ``site``: open subsets, a constant lattice, or
    subsets of the blocks of a random (co)presheaf of partitions."""
    rng = random.Random(seed)
    base = site.base
    for _ in range(bounds.retries):
        kind = rng.choice(KINDS)
        if kind == "opens":
            s = open_subsets_stack(site)
        elif kind == "constant":
            choices = [chain_lattice(1), chain_lattice(2), chain_lattice(3), diamond_lattice()]
            if not bounds.lattice_fibers:
                choices += [FinCategory.discrete(["l", "r"], name="pair"),
                            FinCategory.from_poset(["l", "r", "t"], [("l", "t"), ("r", "t")], name="cospan")]
            s = constant_prestack(base, rng.choice(choices))
        else:
            labels = [str(i) for i in range(rng.randint(1, max(1, bounds.labels)))]
            parts = _random_partitions(rng, base, labels, finer_below=(kind == "preimage"))
            s = _subset_prestack(base, parts, kind, name=kind)
        if not check_prestack(s):
            return s
    raise GenerationExhausted(f"no prestack within bounds {bounds} for seed {seed}")
