"""Grothendieck topologies as systems of covering sieves, and the local
epimorphism / monomorphism / isomorphism predicates derived from them."""

from __future__ import annotations

from collections.abc import Iterable, Mapping, Sequence

from .fincat import FinCategory
from .presheaf import (
    PresheafMorphism,
    Sieve,
    all_sieves,
    diagonal,
    element_morphism,
    fiber_product,
    image_sieve,
    yoneda,
    yoneda_morphism,
)
from .verdict import StructuralError, Verdict, Violation


class Pretopology:
    """Generating covering families ``{V_i -> U}`` per object."""

    def __init__(self, base: FinCategory, coverings: Mapping[object, Iterable[Sequence]]):
        self.base = base
        self.coverings = {}
        for u, families in coverings.items():
            if not base.has_object(u):
                raise StructuralError(f"covering of unknown object {u!r}")
            fams = []
            for fam in families:
                fam = tuple(fam)
                for f in fam:
                    if not base.has_morphism(f) or base.cod(f) != u:
                        raise StructuralError(f"{f!r} in a covering of {u!r} does not land in {u!r}")
                fams.append(fam)
            self.coverings[u] = fams


class Topology:
    """Covering sieves per object. Not validated on construction, so broken
    systems can be built and examined; see :func:`topology_violations`."""

    def __init__(self, base: FinCategory, covering: Mapping[object, Iterable[Sieve]]):
        self.base = base
        self.covering = {u: frozenset() for u in base.objects}
        for u, sieves in covering.items():
            if not base.has_object(u):
                raise StructuralError(f"covering sieves for unknown object {u!r}")
            ss = frozenset(sieves)
            for s in ss:
                if s.base is not base or s.anchor != u:
                    raise StructuralError(f"sieve {s!r} is not a sieve on {u!r}")
            self.covering[u] = ss

    def is_covering(self, s: Sieve) -> bool:
        return s in self.covering[s.anchor]

    def covering_sieves(self, u) -> list[Sieve]:
        """Covering sieves on ``u`` in the canonical sieve order."""
        return [s for s in all_sieves(self.base, u) if s in self.covering[u]]

    def as_pretopology(self) -> Pretopology:
        return Pretopology(self.base, {u: [s.sorted_members() for s in self.covering_sieves(u)]
                                       for u in self.base.objects})

    def __eq__(self, other) -> bool:
        return isinstance(other, Topology) and self.base is other.base and self.covering == other.covering

    def __hash__(self) -> int:
        return hash((id(self.base), tuple(self.covering[u] for u in self.base.objects)))

    def __repr__(self) -> str:
        n = sum(len(v) for v in self.covering.values())
        return f"<Topology on {self.base!r}: {n} covering sieves>"


def maximal_topology(base: FinCategory) -> Topology:
    """Only maximal sieves cover."""
    return Topology(base, {u: [Sieve.maximal(base, u)] for u in base.objects})


def saturate(p: Pretopology) -> Topology:
    """Smallest topology in which every generated family covers."""
    base = p.base
    cov = {u: {Sieve.maximal(base, u)} for u in base.objects}
    for u, fams in p.coverings.items():
        for fam in fams:
            cov[u].add(Sieve.generated(base, u, fam))
    changed = True
    while changed:
        changed = False
        for f in base.morphisms:
            u, v = base.cod(f), base.dom(f)
            for s in list(cov[u]):
                t = s.pullback(f)
                if t not in cov[v]:
                    cov[v].add(t)
                    changed = True
        for u in base.objects:
            for t in all_sieves(base, u):
                if t in cov[u]:
                    continue
                if any(s <= t for s in cov[u]) or any(
                        all(t.pullback(f) in cov[base.dom(f)] for f in s.members) for s in cov[u]):
                    cov[u].add(t)
                    changed = True
    return Topology(base, cov)


def topology_violations(t: Topology) -> list[Violation]:
    base = t.base
    out = []
    for u in base.objects:
        if Sieve.maximal(base, u) not in t.covering[u]:
            out.append(Violation("maximal", {"object": u}))
    for f in base.morphisms:
        for s in t.covering_sieves(base.cod(f)):
            if not t.is_covering(s.pullback(f)):
                out.append(Violation("stability", {"sieve": s, "morphism": f}))
    for u in base.objects:
        cover = t.covering_sieves(u)
        for r in all_sieves(base, u):
            if t.is_covering(r):
                continue
            if any(s <= r for s in cover):
                out.append(Violation("upward-closure", {"sieve": r}))
            elif any(all(t.is_covering(r.pullback(f)) for f in s.members) for s in cover):
                out.append(Violation("local-character", {"sieve": r}))
    return out


def is_covering(t: Topology, s: Sieve) -> bool:
    return t.is_covering(s)


# ---------------------------------------------------------------------------
# local epimorphisms and friends


def is_local_epi(t: Topology, u: PresheafMorphism) -> Verdict:
    """Pull ``u`` back along every ``y(U) -> b`` and test the image sieve."""
    b = u.target
    base = b.base
    for obj in base.objects:
        for y in b.values[obj]:
            x = element_morphism(b, obj, y)
            _, _, to_u = fiber_product(u, x)
            s = image_sieve(to_u)
            if not t.is_covering(s):
                return Verdict.failed(object=obj, element=y, sieve=s)
    return Verdict.passed()


def is_local_mono(t: Topology, u: PresheafMorphism) -> Verdict:
    d, _ = diagonal(u)
    v = is_local_epi(t, d)
    if v:
        return v
    return Verdict.failed(reason="diagonal is not a local epimorphism", **v.witness)


def is_local_iso(t: Topology, u: PresheafMorphism) -> Verdict:
    epi = is_local_epi(t, u)
    if not epi:
        return Verdict.failed(reason="not a local epimorphism", **epi.witness)
    return is_local_mono(t, u)


def representable_anchor(u: PresheafMorphism):
    base = u.base
    for obj in base.objects:
        if u.target == yoneda(base, obj):
            return obj
    return None


def verify_le(t: Topology, corpus: Sequence[PresheafMorphism]) -> list[Violation]:
    """Check LE1-LE4 on ``corpus``; returns every violated instance."""
    base = t.base
    out = []
    for obj in base.objects:
        if not is_local_epi(t, PresheafMorphism.identity(yoneda(base, obj))):
            out.append(Violation("LE1", {"object": obj}))

    cache: dict = {}

    def epi(m: PresheafMorphism) -> bool:
        k = m.key()
        if k not in cache:
            cache[k] = bool(is_local_epi(t, m))
        return cache[k]

    for i, u in enumerate(corpus):
        for j, v in enumerate(corpus):
            if u.target != v.source:
                continue
            vu = u.then(v)
            if epi(u) and epi(v) and not epi(vu):
                out.append(Violation("LE2", {"first": i, "second": j}))
            if epi(vu) and not epi(v):
                out.append(Violation("LE3", {"first": i, "second": j}))

    for i, u in enumerate(corpus):
        anchor = representable_anchor(u)
        if anchor is None:
            continue
        direct = t.is_covering(image_sieve(u))
        failing = None
        for g in base.into(anchor):
            _, _, to_v = fiber_product(u, yoneda_morphism(base, g))
            if not t.is_covering(image_sieve(to_v)):
                failing = g
                break
        if direct and failing is not None:
            out.append(Violation("LE4", {"morphism": i, "direction": "epi but pullback is not",
                                         "along": failing}))
        elif not direct and failing is None:
            out.append(Violation("LE4", {"morphism": i, "direction": "all pullbacks epi but not epi"}))
    return out
