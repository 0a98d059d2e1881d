import itertools
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from finstack.fincat import FinCategory, check_category_axioms, terminal_object
from finstack.gallery import gallery_sites, random_site
from finstack.presheaf import (
    FinPresheaf,
    PresheafMorphism,
    Sieve,
    all_sieves,
    category_of_elements,
    coproduct,
    element_morphism,
    empty_presheaf,
    extend_presheaf,
    fiber_product,
    image_sieve,
    presheaf_functoriality_failures,
    presheaf_homs,
    terminal_presheaf,
    unique_from_empty,
    yoneda,
    yoneda_morphism,
)
from finstack.verdict import StructuralError

from helpers import random_poset_presheaf

SITES = gallery_sites()


def three_object_category():
    """a -f-> b with two arrows b -> c, plus their composites."""
    objs = ["a", "b", "c"]
    homs = {("a", "a"): ("ia",), ("b", "b"): ("ib",), ("c", "c"): ("ic",),
            ("a", "b"): ("f",), ("b", "c"): ("g", "h"), ("a", "c"): ("gf", "hf")}
    ids = {"a": "ia", "b": "ib", "c": "ic"}
    comp = {("g", "f"): "gf", ("h", "f"): "hf"}
    for (x, y), ms in homs.items():
        for m in ms:
            comp[ids[y], m] = m
            comp[m, ids[x]] = m
    return FinCategory(objs, homs, ids, comp)


# -- yoneda ---------------------------------------------------------------------


def test_yoneda_examples():
    base = SITES["vee"].base
    top = yoneda(base, "u")
    assert all(len(top.values[v]) == 1 for v in base.objects)
    bottom = yoneda(base, "a")
    assert [len(bottom.values[v]) for v in base.objects] == [1, 0, 0]
    c = three_object_category()
    assert [len(yoneda(c, "c").values[v]) for v in c.objects] == [2, 2, 1]
    with pytest.raises(StructuralError):
        yoneda(base, "nope")


def test_yoneda_lemma_by_enumeration():
    c = three_object_category()
    for u in c.objects:
        for v in c.objects:
            homs = presheaf_homs(yoneda(c, u), yoneda(c, v))
            assert len(homs) == len(c.hom(u, v))
            assert {h.components[u][c.identity(u)] for h in homs} == set(c.hom(u, v))
            assert set(homs) == {yoneda_morphism(c, f) for f in c.hom(u, v)}


@pytest.mark.parametrize("name", list(SITES))
def test_yoneda_lemma_for_random_presheaves(name):
    base = SITES[name].base
    rng = random.Random(7)
    for _ in range(5):
        f = random_poset_presheaf(base, rng, max_size=2)
        for u in base.objects:
            homs = presheaf_homs(yoneda(base, u), f)
            assert sorted(h.components[u][base.identity(u)] for h in homs) == sorted(f.values[u])
            assert set(homs) == {element_morphism(f, u, x) for x in f.values[u]}


def test_homs_from_empty_and_into_terminal():
    base = SITES["diamond"].base
    f = random_poset_presheaf(base, random.Random(1))
    assert len(presheaf_homs(empty_presheaf(base), f)) == 1
    assert presheaf_homs(empty_presheaf(base), f)[0] == unique_from_empty(f)
    assert len(presheaf_homs(f, terminal_presheaf(base))) == 1


# -- fiber products ---------------------------------------------------------------


def test_fiber_product_examples():
    base = SITES["vee"].base
    a, b = yoneda_morphism(base, "a<=u"), yoneda_morphism(base, "b<=u")
    p, _, _ = fiber_product(a, b)
    assert all(not p.values[v] for v in base.objects)
    ident = PresheafMorphism.identity(yoneda(base, "u"))
    p, pa, _ = fiber_product(a, ident)
    assert all(len(p.values[v]) == len(a.source.values[v]) for v in base.objects)
    assert pa.is_mono()


@pytest.mark.parametrize("name", ["vee", "diamond", "chain3"])
def test_fiber_product_of_sieves_is_intersection(name):
    base = SITES[name].base
    for u in base.objects:
        for s1, s2 in itertools.combinations_with_replacement(all_sieves(base, u), 2):
            p, _, _ = fiber_product(s1.inclusion(), s2.inclusion())
            for v in base.objects:
                assert {x for (x, y) in p.values[v]} == set((s1 & s2).selected(v))


@given(st.integers(0, 10_000))
def test_fiber_product_universal_property(seed):
    rng = random.Random(seed)
    base = SITES["vee"].base
    a = random_poset_presheaf(base, rng, 2, "A")
    b = random_poset_presheaf(base, rng, 2, "B")
    c = random_poset_presheaf(base, rng, 2, "C")
    us, vs = presheaf_homs(a, c), presheaf_homs(b, c)
    if not us or not vs:
        return
    u, v = rng.choice(us), rng.choice(vs)
    p, pa, pb = fiber_product(u, v)
    w = random_poset_presheaf(base, rng, 2, "W")
    for x in presheaf_homs(w, a):
        for y in presheaf_homs(w, b):
            if x.then(u) != y.then(v):
                continue
            mediators = [m for m in presheaf_homs(w, p) if m.then(pa) == x and m.then(pb) == y]
            assert len(mediators) == 1


# -- category of elements ------------------------------------------------------------


def test_elements_of_representable_is_slice():
    base = SITES["diamond"].base
    cat, proj = category_of_elements(yoneda(base, "u"))
    assert terminal_object(cat) == ("u", "id_u")
    assert len(cat.objects) == len(base.into("u"))


def test_elements_of_empty_and_constant():
    base = FinCategory.discrete(["x", "y"])
    cat, _ = category_of_elements(empty_presheaf(base))
    assert cat.objects == ()
    two = FinPresheaf(base, {"x": ["0", "1"], "y": ["0", "1"]}, {})
    cat, _ = category_of_elements(two)
    assert len(cat.objects) == 4 and len(cat.morphisms) == 4


@pytest.mark.parametrize("name", list(SITES))
def test_elements_categories_are_categories(name):
    base = SITES[name].base
    rng = random.Random(3)
    for _ in range(5):
        f = random_poset_presheaf(base, rng)
        assert presheaf_functoriality_failures(f) == []
        cat, _ = category_of_elements(f)
        assert check_category_axioms(cat) == []
        assert len(cat.objects) == sum(len(f.values[u]) for u in base.objects)


# -- extension formula -------------------------------------------------------------------


@pytest.mark.parametrize("name", list(SITES))
def test_extension_to_representables_is_the_value(name):
    base = SITES[name].base
    f = random_poset_presheaf(base, random.Random(11))
    cones = {u: extend_presheaf(f, yoneda(base, u)) for u in base.objects}
    index = {u: category_of_elements(yoneda(base, u))[0].objects.index((u, base.identity(u)))
             for u in base.objects}
    for u in base.objects:
        # evaluating at the terminal element (u, id) is a bijection onto f(u)
        assert sorted(fam[index[u]] for fam in cones[u].apex) == sorted(f.values[u])
    for h in base.morphisms:
        v, u = base.dom(h), base.cod(h)
        # naturality: restricting a family along y(h) then evaluating equals f(h)
        els_v = category_of_elements(yoneda(base, v))[0].objects
        els_u = category_of_elements(yoneda(base, u))[0].objects
        for fam in cones[u].apex:
            restricted = tuple(fam[els_u.index((w, base.compose(h, g)))] for (w, g) in els_v)
            assert restricted in cones[v].apex
            assert restricted[index[v]] == f.restrict(h, fam[index[u]])


def test_extension_examples():
    base = SITES["vee"].base
    f = random_poset_presheaf(base, random.Random(5))
    assert len(extend_presheaf(f, empty_presheaf(base)).apex) == 1
    s, _, _ = coproduct(yoneda(base, "a"), yoneda(base, "b"))
    assert len(extend_presheaf(f, s).apex) == len(f.values["a"]) * len(f.values["b"])


# -- sieves -----------------------------------------------------------------------------


def test_image_sieve_examples():
    base = SITES["diamond"].base
    assert image_sieve(PresheafMorphism.identity(yoneda(base, "u"))).is_maximal()
    assert image_sieve(unique_from_empty(yoneda(base, "u"))).members == frozenset()
    s = image_sieve(yoneda_morphism(base, "a<=u"))
    assert s == Sieve.generated(base, "u", ["a<=u"])
    assert set(s.sorted_members()) == {"o<=u", "a<=u"}


def test_sieve_closure_is_enforced():
    base = SITES["diamond"].base
    with pytest.raises(StructuralError, match="not closed"):
        Sieve(base, "u", ["a<=u"])


@given(st.integers(0, 500))
def test_every_enumerated_sieve_is_closed(seed):
    t = random_site(seed)
    base = t.base
    for u in base.objects:
        sieves = all_sieves(base, u)
        assert len(set(sieves)) == len(sieves)
        for s in sieves:
            for f in s.members:
                for g in base.into(base.dom(f)):
                    assert base.compose(f, g) in s.members
