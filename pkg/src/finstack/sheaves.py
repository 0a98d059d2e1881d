"""Separated presheaves and sheaves, decided on covering-sieve inclusions."""

from __future__ import annotations

from .presheaf import FinPresheaf, PresheafMorphism, category_of_elements, extend_presheaf
from .site import Topology, representable_anchor
from .verdict import StructuralError, Verdict


def restriction_map_of_sets(f: FinPresheaf, u: PresheafMorphism) -> dict:
    """``f(U) -> f(a)`` for ``u: a -> y(U)``: a section goes to the family of
    its restrictions along each ``u(x)``."""
    anchor = representable_anchor(u)
    if anchor is None:
        raise StructuralError("restriction map needs a representable target")
    elements, _ = category_of_elements(u.source)
    return {s: tuple(f.restrict(u.components[v][x], s) for (v, x) in elements.objects)
            for s in f.values[anchor]}


def _sieve_maps(t: Topology, f: FinPresheaf):
    for anchor in t.base.objects:
        for s in t.covering_sieves(anchor):
            u = s.inclusion()
            yield anchor, s, restriction_map_of_sets(f, u), extend_presheaf(f, u.source)


def is_separated_presheaf(t: Topology, f: FinPresheaf) -> Verdict:
    for anchor, s, rmap, _ in _sieve_maps(t, f):
        seen: dict = {}
        for sec, fam in rmap.items():
            if fam in seen:
                return Verdict.failed(object=anchor, sieve=s, sections=(seen[fam], sec))
            seen[fam] = sec
    return Verdict.passed()


def is_sheaf_presheaf(t: Topology, f: FinPresheaf) -> Verdict:
    for anchor, s, rmap, limit in _sieve_maps(t, f):
        preimages: dict = {fam: [] for fam in limit.apex}
        for sec, fam in rmap.items():
            preimages[fam].append(sec)
        for fam, secs in preimages.items():
            if len(secs) != 1:
                return Verdict.failed(object=anchor, sieve=s, family=fam, preimages=tuple(secs))
    return Verdict.passed()
