import itertools
from collections import deque

import pytest
from hypothesis import given
from hypothesis import strategies as st

from finstack.fincat import (
    FinCategory,
    FinSetDiagram,
    Functor,
    NatTransf,
    check_category_axioms,
    check_functor,
    colimit_in_category,
    colimit_of_sets,
    comma_category,
    diagram_from_objects,
    initial_object,
    is_equivalence,
    is_fully_faithful,
    left_adjoint_of,
    limit_of_sets,
    terminal_object,
)
from finstack.verdict import StructuralError


def lattice(elements, covers):
    return FinCategory.from_poset(elements, covers)


def chain_with_parallel_composites():
    """0 -f-> 1 -g-> 2 -h-> 3 with hom(0, 3) = {p, q}; every composite 0 -> 3 is p."""
    objs = [0, 1, 2, 3]
    homs = {(x, x): (f"i{x}",) for x in objs}
    homs.update({(0, 1): ("f",), (1, 2): ("g",), (2, 3): ("h",),
                 (0, 2): ("gf",), (1, 3): ("hg",), (0, 3): ("p", "q")})
    ids = {x: f"i{x}" for x in objs}
    comp = {}
    for (a, b), ms in homs.items():
        for m in ms:
            comp[ids[b], m] = m
            comp[m, ids[a]] = m
    comp.update({("g", "f"): "gf", ("h", "g"): "hg", ("h", "gf"): "p", ("hg", "f"): "p"})
    return objs, homs, ids, comp


# -- categories ---------------------------------------------------------------


def test_single_identity_category_is_valid():
    assert check_category_axioms(FinCategory.terminal()) == []


def test_three_element_monoid_is_valid():
    # Z/3 under addition
    els = ["0", "1", "2"]
    table = {(g, f): str((int(g) + int(f)) % 3) for g in els for f in els}
    assert check_category_axioms(FinCategory.monoid(els, "0", table)) == []


def test_one_corrupted_composite_gives_one_violation():
    objs, homs, ids, comp = chain_with_parallel_composites()
    assert check_category_axioms(FinCategory(objs, homs, ids, comp)) == []
    comp[("h", "gf")] = "q"
    bad = check_category_axioms(FinCategory(objs, homs, ids, comp))
    assert len(bad) == 1
    assert bad[0].kind == "associativity"
    assert bad[0].detail["triple"] == ("h", "g", "f")


def test_dangling_identifier_is_structural():
    with pytest.raises(StructuralError, match="zz"):
        FinCategory(["a"], {("a", "a"): ("ia",)}, {"a": "ia"}, {("ia", "ia"): "zz"})
    with pytest.raises(StructuralError, match="missing"):
        FinCategory(["a"], {("a", "a"): ("ia",)}, {"a": "ia"}, {})


def test_op_twice_is_the_same_table():
    c = lattice(["0", "x", "y", "1"], [("0", "x"), ("0", "y"), ("x", "1"), ("y", "1")])
    cc = c.op().op()
    assert cc.objects == c.objects and cc.morphisms == c.morphisms
    assert all(cc.compose(g, f) == c.compose(g, f) for g, f in c.composable_pairs())
    assert check_category_axioms(c.op()) == []


def test_free_category_counts_paths():
    c = FinCategory.free_on_graph([0, 1, 2], [("a", 0, 1), ("b", 1, 2), ("c", 0, 2)])
    assert len(c.hom(0, 2)) == 2
    assert check_category_axioms(c) == []


# -- comma categories ---------------------------------------------------------


def test_comma_of_identity_is_slice():
    c = lattice(["a", "b", "u"], [("a", "u"), ("b", "u")])
    sl = comma_category(Functor.identity(c), "u")
    assert len(sl.objects) == 3
    assert terminal_object(sl) == ("u", "id_u")
    assert check_category_axioms(sl) == []


def test_comma_of_constant_functor_is_product_with_hom_monoid():
    m = FinCategory.monoid(["e", "z"], "e", {("e", "e"): "e", ("e", "z"): "z", ("z", "e"): "z", ("z", "z"): "z"})
    src = lattice(["p", "q"], [("p", "q")])
    const = Functor(src, m, {x: "*" for x in src.objects}, {k: "e" for k in src.morphisms})
    cc = comma_category(const, "*")
    # objects: src objects x hom(*, *); morphisms: (k, h') with h' o e = h
    assert len(cc.objects) == len(src.objects) * 2
    assert len(cc.morphisms) == len(src.morphisms) * 2
    assert check_category_axioms(cc) == []


def test_comma_of_empty_source_is_empty():
    empty = FinCategory([], {}, {}, {})
    c = FinCategory.terminal()
    assert comma_category(Functor(empty, c, {}, {}), "*").objects == ()


# -- sets: limits and colimits --------------------------------------------------


@st.composite
def set_diagrams(draw, max_objects=5, max_size=4):
    n = draw(st.integers(1, max_objects))
    edges = []
    for j in range(n):
        for i in range(j):
            if draw(st.booleans()) and len(edges) < 6:
                edges.append((f"e{i}{j}", i, j))
    shape = FinCategory.free_on_graph(list(range(n)), edges)
    values = {x: list(range(draw(st.integers(0, max_size)))) for x in range(n)}
    gens = {}
    for label, i, j in edges:
        if values[i] and not values[j]:
            values[j] = [0]
        gens[label] = {v: draw(st.sampled_from(values[j])) for v in values[i]}
    arrows = {}
    for m in shape.morphisms:
        a = shape.dom(m)
        if shape.is_identity(m):
            arrows[m] = {v: v for v in values[a]}
        else:
            fn = {v: v for v in values[a]}
            for label in reversed(m):
                fn = {v: gens[label][w] for v, w in fn.items()}
            arrows[m] = fn
    return FinSetDiagram(shape, values, arrows), edges


def components_by_bfs(d: FinSetDiagram, edges):
    adj = {(x, v): set() for x in d.shape.objects for v in d.values[x]}
    for label, i, j in edges:
        for v in d.values[i]:
            w = d.arrows[(label,)][v]
            adj[i, v].add((j, w))
            adj[j, w].add((i, v))
    comp, n = {}, 0
    for start in adj:
        if start in comp:
            continue
        queue = deque([start])
        comp[start] = n
        while queue:
            p = queue.popleft()
            for q in adj[p]:
                if q not in comp:
                    comp[q] = n
                    queue.append(q)
        n += 1
    return comp, n


@given(set_diagrams())
def test_colimit_of_sets_matches_bfs_components(case):
    d, edges = case
    assert d.functoriality_failures() == []
    co = colimit_of_sets(d)
    comp, n = components_by_bfs(d, edges)
    assert len(co.apex) == n
    for p in comp:
        for q in comp:
            same = co.legs[p[0]][p[1]] == co.legs[q[0]][q[1]]
            assert same == (comp[p] == comp[q])


@given(set_diagrams())
def test_limit_of_sets_is_the_filtered_product(case):
    d, _ = case
    objs = d.shape.objects
    brute = [fam for fam in itertools.product(*(d.values[x] for x in objs))
             if all(d.arrows[m][fam[objs.index(d.shape.dom(m))]] == fam[objs.index(d.shape.cod(m))]
                    for m in d.shape.morphisms)]
    lim = limit_of_sets(d)
    assert list(lim.apex) == brute


@given(set_diagrams(max_objects=3, max_size=3), st.integers(0, 2))
def test_limit_is_terminal_among_cones(case, apex_size):
    d, _ = case
    objs = d.shape.objects
    lim = limit_of_sets(d)
    apex = list(range(apex_size))
    for legs in itertools.product(*(list(itertools.product(d.values[x], repeat=apex_size)) for x in objs)):
        cone = [dict(zip(apex, leg)) for leg in legs]
        if not all(d.arrows[m][cone[objs.index(d.shape.dom(m))][a]] == cone[objs.index(d.shape.cod(m))][a]
                   for m in d.shape.morphisms for a in apex):
            continue
        mediators = [fn for fn in itertools.product(lim.apex, repeat=apex_size)
                     if all(lim.legs[x][fn[a]] == cone[i][a] for i, x in enumerate(objs) for a in apex)]
        assert len(mediators) == 1


def test_set_limit_and_colimit_examples():
    empty = FinSetDiagram(FinCategory([], {}, {}, {}), {}, {})
    assert len(limit_of_sets(empty).apex) == 1
    assert len(colimit_of_sets(empty).apex) == 0
    disc = FinCategory.discrete(["A", "B"])
    d = FinSetDiagram(disc, {"A": [0, 1], "B": [0, 1, 2]},
                      {"id_A": {0: 0, 1: 1}, "id_B": {0: 0, 1: 1, 2: 2}})
    assert len(limit_of_sets(d).apex) == 6
    assert len(colimit_of_sets(d).apex) == 5
    pair = FinCategory.free_on_graph(["A", "B"], [("f", "A", "B"), ("g", "A", "B")])
    f, g = {0: 0, 1: 1, 2: 0}, {0: 0, 1: 0, 2: 2}
    d = FinSetDiagram(pair, {"A": [0, 1, 2], "B": [0, 1, 2]},
                      {("id", "A"): {0: 0, 1: 1, 2: 2}, ("id", "B"): {0: 0, 1: 1, 2: 2}, ("f",): f, ("g",): g})
    assert [fam[0] for fam in limit_of_sets(d).apex] == [0]
    # coequalizer: 0 ~ 0, 1 ~ 0, 0 ~ 2 in B; A is absorbed
    assert len(colimit_of_sets(d).apex) == 1


# -- colimits and adjoints in categories --------------------------------------


def test_colimit_examples():
    c = lattice(["0", "a", "b", "1"], [("0", "a"), ("0", "b"), ("a", "1"), ("b", "1")])
    single = diagram_from_objects(c, FinCategory.discrete([0]), {0: "a"})
    col = colimit_in_category(c, single)
    assert col.apex == "a" and col.cocone.legs == ("id_a",)
    pair = diagram_from_objects(c, FinCategory.discrete([0, 1]), {0: "a", 1: "b"})
    assert colimit_in_category(c, pair).apex == "1"
    disc = FinCategory.discrete(["l", "r"])
    assert colimit_in_category(disc, diagram_from_objects(disc, FinCategory.discrete([0, 1]),
                                                          {0: "l", 1: "r"})) is None


def random_lattice(draw):
    """Down-set lattice of a random poset: a distributive lattice."""
    n = draw(st.integers(1, 3))
    rel = {(i, j) for i in range(n) for j in range(i + 1, n) if draw(st.booleans())}
    downs = []
    for k in range(n + 1):
        for combo in itertools.combinations(range(n), k):
            s = set(combo)
            if all(i in s for (i, j) in rel if j in s):
                downs.append(frozenset(s))
    names = {d: "{" + ",".join(map(str, sorted(d))) + "}" for d in downs}
    order = [(names[a], names[b]) for a in downs for b in downs if a < b]
    return FinCategory.from_poset([names[d] for d in downs], order), names


lattices = st.composite(random_lattice)


@given(lattices())
def test_binary_colimit_in_lattice_is_join(lat):
    c, names = lat
    by_name = {v: k for k, v in names.items()}
    for a in c.objects:
        for b in c.objects:
            d = diagram_from_objects(c, FinCategory.discrete([0, 1]), {0: a, 1: b})
            assert colimit_in_category(c, d).apex == names[by_name[a] | by_name[b]]


def test_left_adjoint_examples():
    c = lattice(["0", "m", "1"], [("0", "m"), ("m", "1")])
    two = lattice(["0", "1"], [("0", "1")])
    inc = Functor(two, c, {"0": "0", "1": "1"}, {"id_0": "id_0", "id_1": "id_1", "0<=1": "0<=1"})
    adj = left_adjoint_of(inc)
    assert adj.left.on_obj("m") == "1"
    assert adj.triangle_failures() == []
    ident = left_adjoint_of(Functor.identity(c))
    assert ident.left.is_identity() and all(c.is_identity(m) for m in ident.unit.values())
    disc = FinCategory.discrete(["l", "r"])
    to_point = Functor(disc, FinCategory.terminal(), {"l": "*", "r": "*"}, {"id_l": "id_*", "id_r": "id_*"})
    assert left_adjoint_of(to_point) is None


@st.composite
def monotone_maps(draw):
    src, _ = random_lattice(draw)
    tgt, _ = random_lattice(draw)
    # a monotone map: pick images in topological order, each above the images below it
    obj_map = {}
    for x in src.objects:
        lower = [obj_map[y] for y in src.objects if y in obj_map and src.hom(y, x)]
        options = [z for z in tgt.objects if all(tgt.hom(w, z) for w in lower)]
        obj_map[x] = draw(st.sampled_from(options))
    mor_map = {m: tgt.hom(obj_map[src.dom(m)], obj_map[src.cod(m)])[0] for m in src.morphisms}
    return Functor(src, tgt, obj_map, mor_map)


@given(monotone_maps())
def test_left_adjoint_hom_bijection(g):
    assert check_functor(g) == []
    adj = left_adjoint_of(g)
    d, c = g.source, g.target
    # oracle for posets: L exists iff every x has a least y with x <= g(y)
    exists = all(
        any(c.hom(x, g.on_obj(y)) and all(d.hom(y, z) for z in d.objects if c.hom(x, g.on_obj(z)))
            for y in d.objects)
        for x in c.objects)
    assert (adj is not None) == exists
    if adj is None:
        return
    assert adj.triangle_failures() == []
    assert NatTransf(Functor.identity(c), adj.left.then(g), adj.unit).naturality_failures() == []
    for x in c.objects:
        for y in d.objects:
            left = d.hom(adj.left.on_obj(x), y)
            right = c.hom(x, g.on_obj(y))
            assert sorted(adj.to_right(k, x) for k in left) == sorted(right)


def test_fully_faithful_and_equivalence_examples():
    c = lattice(["0", "1"], [("0", "1")])
    assert is_fully_faithful(Functor.identity(c))
    assert is_equivalence(Functor.identity(c))
    disc = FinCategory.discrete(["l", "r"])
    const = Functor(disc, c, {"l": "0", "r": "0"}, {"id_l": "id_0", "id_r": "id_0"})
    v = is_fully_faithful(const)
    assert not v and v.witness["reason"] == "not full"
    # skeleton inclusion: {x} into two isomorphic objects x ~ y
    big = FinCategory(["x", "y"], {("x", "x"): ("ix",), ("y", "y"): ("iy",), ("x", "y"): ("f",), ("y", "x"): ("g",)},
                      {"x": "ix", "y": "iy"},
                      {("ix", "ix"): "ix", ("iy", "iy"): "iy", ("f", "ix"): "f", ("iy", "f"): "f",
                       ("g", "iy"): "g", ("ix", "g"): "g", ("g", "f"): "ix", ("f", "g"): "iy"})
    assert check_category_axioms(big) == []
    skel = FinCategory.discrete(["x"])
    assert is_equivalence(Functor(skel, big, {"x": "x"}, {"id_x": "ix"}))
    extra = Functor(FinCategory.terminal(), c, {"*": "0"}, {"id_*": "id_0"})
    v = is_equivalence(extra)
    assert not v and v.witness["missed"] == "1"


def test_initial_and_terminal_objects():
    c = lattice(["0", "m", "1"], [("0", "m"), ("m", "1")])
    assert initial_object(c) == "0" and terminal_object(c) == "1"
    assert initial_object(FinCategory.discrete(["l", "r"])) is None
