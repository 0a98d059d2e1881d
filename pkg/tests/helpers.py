"""Generators and brute-force oracles shared by the test modules."""

import itertools
import random

from finstack.fincat import FinCategory
from finstack.presheaf import FinPresheaf


def _upper_colimit(base: FinCategory, f_values, f_restr, v):
    """Union-find colimit of the values strictly above ``v`` (restriction
    maps point down, so every ``F(w)`` with ``u <= w`` feeds ``F(u)``)."""
    above = [u for u in base.objects if u != v and base.hom(v, u)]
    parent = {(u, x): (u, x) for u in above for x in f_values[u]}

    def find(p):
        while parent[p] != p:
            p = parent[p]
        return p

    for u in above:
        for w in above:
            if u != w and base.hom(u, w):
                (h,) = base.hom(u, w)
                for y in f_values[w]:
                    a, b = find((w, y)), find((u, f_restr[h][y]))
                    if a != b:
                        parent[a] = b
    classes = sorted({find(p) for p in parent}, key=repr)
    return above, classes, find


def random_poset_presheaf(base: FinCategory, rng: random.Random, max_size: int = 3, name="F") -> FinPresheaf:
    """Any presheaf on a poset can come out: each value set is chosen with a
    random cocone out of the values above it."""
    order = sorted(base.objects, key=lambda u: sum(1 for w in base.objects if base.hom(u, w)))
    values, restr = {}, {}
    for v in order:
        above, classes, find = _upper_colimit(base, values, restr, v)
        lo = 1 if classes else 0
        size = rng.randint(lo, max(lo, max_size))
        vals = [f"{v}.{i}" for i in range(size)]
        values[v] = vals
        image = {c: rng.choice(vals) for c in classes}
        for u in above:
            (h,) = base.hom(v, u)
            restr[h] = {y: image[find((u, y))] for y in values[u]}
    return FinPresheaf(base, values, restr, name=name)


def matching_families(t, f: FinPresheaf, sieve):
    """Every family ``(s_g)`` over the members of ``sieve`` with
    ``s_(g o k) == F(k)(s_g)``, by brute force over the product."""
    base = t.base
    members = sieve.sorted_members()
    out = []
    for choice in itertools.product(*(f.values[base.dom(g)] for g in members)):
        fam = dict(zip(members, choice))
        if all(fam[base.compose(g, k)] == f.restrict(k, fam[g])
               for g in members for k in base.into(base.dom(g))):
            out.append(fam)
    return out


def amalgamations(f: FinPresheaf, sieve, fam):
    return [x for x in f.values[sieve.anchor] if all(f.restrict(g, x) == s for g, s in fam.items())]


def sheaf_oracle(t, f: FinPresheaf) -> tuple[bool, bool]:
    """``(separated, sheaf)`` from matching families and their amalgamations."""
    separated, sheaf = True, True
    for u in t.base.objects:
        for s in t.covering_sieves(u):
            counts = [len(amalgamations(f, s, fam)) for fam in matching_families(t, f, s)]
            if any(c > 1 for c in counts):
                separated = False
            if any(c != 1 for c in counts):
                sheaf = False
    return separated, sheaf
