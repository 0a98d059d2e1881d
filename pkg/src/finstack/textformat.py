"""Line-oriented instance documents.

A document is a sequence of sections introduced by a bracketed header::

    [category]            object <name> <identity>
                          arrow <name> <source> <target>
                          compose <g> <f> <g o f>
    [topology]            sieve <object> <member>...      (covering sieves, verbatim)
    [coverings]           cover <object> <arrow>...       (generating families, saturated)
    [presheaf F]          value <object> <element>...
                          restrict <arrow> <element> <image>
    [prestack S]
    [fiber S U]           same lines as [category]
    [functor S h]         obj <x> <y>  /  mor <m> <n>
    [lambda S h1 h2]      at <x> <morphism>

Tokens are separated by whitespace and ``#`` starts a comment. Composites
with an identity, identity restrictions and identity composition
isomorphisms may be omitted and are never printed. Without a topology
section only maximal sieves cover.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .fincat import FinCategory, Functor, check_category_axioms
from .prestack import Prestack, check_prestack
from .presheaf import FinPresheaf, Sieve, presheaf_functoriality_failures
from .site import Pretopology, Topology, maximal_topology, saturate
from .verdict import StructuralError


class InstanceSyntaxError(StructuralError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class UnresolvedReference(InstanceSyntaxError):
    def __init__(self, name: str, line: int, column: int):
        super().__init__(f"unresolved reference {name!r}", line, column)
        self.name = name


@dataclass
class InstanceDocument:
    category: FinCategory | None = None
    topology: Topology | None = None
    topology_style: str = "maximal"  # "maximal" | "sieves" | "coverings"
    families: dict = field(default_factory=dict)  # generating families when style is "coverings"
    presheaves: dict[str, FinPresheaf] = field(default_factory=dict)
    prestacks: dict[str, Prestack] = field(default_factory=dict)


# ---------------------------------------------------------------------------
# parsing


@dataclass
class _Tok:
    text: str
    line: int
    column: int


@dataclass
class _Line:
    words: list[_Tok]
    number: int


@dataclass
class _CatBuilder:
    objects: list = field(default_factory=list)
    identities: dict = field(default_factory=dict)
    arrows: dict = field(default_factory=dict)  # name -> (src, tgt)
    compose: dict = field(default_factory=dict)
    declared_at: dict = field(default_factory=dict)


def _tokenize(text: str) -> list[tuple[int, list[_Tok]]]:
    out = []
    for n, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0]
        words = []
        col = 0
        for piece in body.split():
            col = body.index(piece, col)
            words.append(_Tok(piece, n, col + 1))
            col += len(piece)
        if words:
            out.append((n, words))
    return out


def _sections(text: str) -> list:
    out = []
    current = None
    for n, words in _tokenize(text):
        first = words[0]
        if first.text.startswith("["):
            joined = " ".join(w.text for w in words)
            if not joined.endswith("]"):
                raise InstanceSyntaxError("unterminated section header", n, first.column)
            header = joined[1:-1].split()
            if not header:
                raise InstanceSyntaxError("empty section header", n, first.column)
            current = (header, first, [])
            out.append(current)
        else:
            if current is None:
                raise InstanceSyntaxError("content before the first section", n, first.column)
            current[2].append(_Line(words, n))
    return out


def _arity(line: _Line, n: int, at_least: bool = False) -> None:
    k = len(line.words) - 1
    if (k < n) if at_least else (k != n):
        w = line.words[-1]
        raise InstanceSyntaxError(f"{line.words[0].text!r} expects {'at least ' if at_least else ''}{n} "
                                  f"argument{'s' if n != 1 else ''}", line.number, w.column + len(w.text))


def _category_line(b: _CatBuilder, line: _Line) -> None:
    kw = line.words[0]
    if kw.text == "object":
        _arity(line, 2)
        name, ident = line.words[1], line.words[2]
        if name.text in b.identities:
            raise InstanceSyntaxError(f"duplicate object {name.text!r}", name.line, name.column)
        b.objects.append(name.text)
        b.identities[name.text] = ident.text
        b.arrows[ident.text] = (name.text, name.text)
    elif kw.text == "arrow":
        _arity(line, 3)
        name, src, tgt = line.words[1:]
        for w in (src, tgt):
            if w.text not in b.identities:
                raise UnresolvedReference(w.text, w.line, w.column)
        if name.text in b.arrows:
            raise InstanceSyntaxError(f"duplicate arrow {name.text!r}", name.line, name.column)
        b.arrows[name.text] = (src.text, tgt.text)
    elif kw.text == "compose":
        _arity(line, 3)
        for w in line.words[1:]:
            if w.text not in b.arrows:
                raise UnresolvedReference(w.text, w.line, w.column)
        g, f, h = (w.text for w in line.words[1:])
        if (g, f) in b.compose:
            raise InstanceSyntaxError(f"composite {g} o {f} given twice", line.number, kw.column)
        b.compose[g, f] = h
        b.declared_at[g, f] = line.number
    else:
        raise InstanceSyntaxError(f"unknown keyword {kw.text!r}", line.number, kw.column)


def _build_category(b: _CatBuilder, name: str | None, line: int) -> FinCategory:
    homs: dict = {}
    for obj in b.objects:
        homs.setdefault((obj, obj), []).append(b.identities[obj])
    for arrow, (src, tgt) in b.arrows.items():
        if arrow not in b.identities.values():
            homs.setdefault((src, tgt), []).append(arrow)
    comp = dict(b.compose)
    ids = set(b.identities.values())
    for arrow, (src, tgt) in b.arrows.items():
        comp.setdefault((b.identities[tgt], arrow), arrow)
        comp.setdefault((arrow, b.identities[src]), arrow)
    for (g, f), h in b.compose.items():
        if (g in ids and h != f) or (f in ids and h != g):
            raise InstanceSyntaxError(f"composite {g} o {f} contradicts the unit law",
                                      b.declared_at[g, f], 1)
    try:
        cat = FinCategory(b.objects, homs, b.identities, comp, name=name)
    except StructuralError as exc:
        raise InstanceSyntaxError(str(exc), line, 1) from None
    bad = check_category_axioms(cat)
    if bad:
        raise InstanceSyntaxError(f"category axioms fail: {bad[0]}", line, 1)
    return cat


def _resolve(table, tok: _Tok):
    if tok.text not in table:
        raise UnresolvedReference(tok.text, tok.line, tok.column)
    return tok.text


def parse_instance(text: str) -> InstanceDocument:
    doc = InstanceDocument()
    base_builder: _CatBuilder | None = None
    base_line = 0
    sieve_lines: list[_Line] = []
    cover_lines: list[_Line] = []
    topo_header = None
    presheaf_sections: list = []
    prestack_names: list = []
    fibers: dict = {}
    functors: dict = {}
    lambdas: dict = {}

    for header, tok, lines in _sections(text):
        kind = header[0]
        args = header[1:]
        if kind == "category":
            if base_builder is not None:
                raise InstanceSyntaxError("second [category] section", tok.line, tok.column)
            base_builder = _CatBuilder()
            base_line = tok.line
            for line in lines:
                _category_line(base_builder, line)
        elif kind in ("topology", "coverings"):
            if topo_header is not None:
                raise InstanceSyntaxError("more than one topology section", tok.line, tok.column)
            topo_header = (kind, tok)
            (sieve_lines if kind == "topology" else cover_lines).extend(lines)
        elif kind == "presheaf" and len(args) == 1:
            presheaf_sections.append((args[0], tok, lines))
        elif kind == "prestack" and len(args) == 1:
            if args[0] in prestack_names:
                raise InstanceSyntaxError(f"duplicate prestack {args[0]!r}", tok.line, tok.column)
            prestack_names.append(args[0])
            if lines:
                raise InstanceSyntaxError("[prestack] sections take no lines", lines[0].number, 1)
        elif kind == "fiber" and len(args) == 2:
            b = _CatBuilder()
            for line in lines:
                _category_line(b, line)
            fibers[tuple(args)] = (b, tok)
        elif kind == "functor" and len(args) == 2:
            functors[tuple(args)] = (tok, lines)
        elif kind == "lambda" and len(args) == 3:
            lambdas[tuple(args)] = (tok, lines)
        else:
            raise InstanceSyntaxError(f"unknown section [{' '.join(header)}]", tok.line, tok.column)

    if base_builder is None:
        if presheaf_sections or prestack_names or topo_header:
            raise InstanceSyntaxError("document has no [category] section", 1, 1)
        return doc
    base = _build_category(base_builder, "base", base_line)
    doc.category = base

    if topo_header is None:
        doc.topology = maximal_topology(base)
    elif topo_header[0] == "topology":
        doc.topology_style = "sieves"
        cov: dict = {u: [] for u in base.objects}
        for line in sieve_lines:
            if line.words[0].text != "sieve":
                w = line.words[0]
                raise InstanceSyntaxError(f"unknown keyword {w.text!r}", w.line, w.column)
            _arity(line, 1, at_least=True)
            u = _resolve(base_builder.identities, line.words[1])
            members = [_resolve(base_builder.arrows, w) for w in line.words[2:]]
            try:
                cov[u].append(Sieve(base, u, members))
            except StructuralError as exc:
                raise InstanceSyntaxError(str(exc), line.number, 1) from None
        doc.topology = Topology(base, cov)
    else:
        doc.topology_style = "coverings"
        fams: dict = {}
        for line in cover_lines:
            if line.words[0].text != "cover":
                w = line.words[0]
                raise InstanceSyntaxError(f"unknown keyword {w.text!r}", w.line, w.column)
            _arity(line, 1, at_least=True)
            u = _resolve(base_builder.identities, line.words[1])
            fam = [_resolve(base_builder.arrows, w) for w in line.words[2:]]
            fams.setdefault(u, []).append(fam)
        try:
            doc.families = fams
            doc.topology = saturate(Pretopology(base, fams))
        except StructuralError as exc:
            raise InstanceSyntaxError(str(exc), cover_lines[0].number, 1) from None

    for name, tok, lines in presheaf_sections:
        if name in doc.presheaves:
            raise InstanceSyntaxError(f"duplicate presheaf {name!r}", tok.line, tok.column)
        doc.presheaves[name] = _parse_presheaf(base, base_builder, name, tok, lines)

    for name in prestack_names:
        doc.prestacks[name] = _parse_prestack(base, base_builder, name, fibers, functors, lambdas)
    for key, (b, tok) in fibers.items():
        if key[0] not in doc.prestacks:
            raise UnresolvedReference(key[0], tok.line, tok.column + len("[fiber "))
    for table in (functors, lambdas):
        for key, (tok, _) in table.items():
            if key[0] not in doc.prestacks:
                raise UnresolvedReference(key[0], tok.line, tok.column)
    return doc


def _parse_presheaf(base, bb: _CatBuilder, name, tok, lines) -> FinPresheaf:
    values: dict = {}
    restr: dict = {}
    for line in lines:
        kw = line.words[0]
        if kw.text == "value":
            _arity(line, 1, at_least=True)
            u = _resolve(bb.identities, line.words[1])
            values[u] = [w.text for w in line.words[2:]]
        elif kw.text == "restrict":
            _arity(line, 3)
            f = _resolve(bb.arrows, line.words[1])
            y, x = line.words[2], line.words[3]
            for w, obj in ((y, base.cod(f)), (x, base.dom(f))):
                if w.text not in values.get(obj, ()):
                    raise UnresolvedReference(w.text, w.line, w.column)
            restr.setdefault(f, {})[y.text] = x.text
        else:
            raise InstanceSyntaxError(f"unknown keyword {kw.text!r}", line.number, kw.column)
    try:
        p = FinPresheaf(base, values, restr, name=name)
    except StructuralError as exc:
        raise InstanceSyntaxError(str(exc), tok.line, tok.column) from None
    bad = presheaf_functoriality_failures(p)
    if bad:
        raise InstanceSyntaxError(f"presheaf {name} is not functorial: {bad[0]}", tok.line, tok.column)
    return p


def _parse_prestack(base, bb: _CatBuilder, name, fibers, functors, lambdas) -> Prestack:
    fibs = {}
    for u in base.objects:
        if (name, u) not in fibers:
            raise InstanceSyntaxError(f"prestack {name} has no fiber over {u!r}", 1, 1)
        b, tok = fibers[name, u]
        fibs[u] = _build_category(b, f"{name}({u})", tok.line)
    restrictions = {}
    for h in base.morphisms:
        src, tgt = fibs[base.cod(h)], fibs[base.dom(h)]
        entry = functors.get((name, h))
        if entry is None:
            if all(tgt.has_object(x) for x in src.objects) and all(tgt.has_morphism(m) for m in src.morphisms):
                restrictions[h] = Functor(src, tgt, {x: x for x in src.objects}, {m: m for m in src.morphisms})
                continue
            raise InstanceSyntaxError(f"prestack {name} has no restriction along {h!r}", 1, 1)
        tok, lines = entry
        obj_map, mor_map = {}, {}
        for line in lines:
            kw = line.words[0]
            _arity(line, 2)
            a, b_ = line.words[1], line.words[2]
            if kw.text == "obj":
                obj_map[_resolve(src.identities, a)] = _resolve(tgt.identities, b_)
            elif kw.text == "mor":
                mor_map[_resolve(src._dom, a)] = _resolve(tgt._dom, b_)
            else:
                raise InstanceSyntaxError(f"unknown keyword {kw.text!r}", line.number, kw.column)
        for x in src.objects:
            if x not in obj_map:
                raise InstanceSyntaxError(f"restriction along {h} undefined on object {x!r}", tok.line, 1)
        for m in src.morphisms:
            if m not in mor_map:
                if not src.is_identity(m):
                    raise InstanceSyntaxError(f"restriction along {h} undefined on arrow {m!r}", tok.line, 1)
                mor_map[m] = tgt.identity(obj_map[src.dom(m)])
        restrictions[h] = Functor(src, tgt, obj_map, mor_map)
    lams: dict = {}
    for (sname, h1, h2), (tok, lines) in lambdas.items():
        if sname != name:
            continue
        for w, text in ((tok, h1), (tok, h2)):
            if text not in bb.arrows:
                raise UnresolvedReference(text, w.line, w.column)
        fib = fibs[base.dom(h1)]
        comps = {}
        for line in lines:
            kw = line.words[0]
            if kw.text != "at":
                raise InstanceSyntaxError(f"unknown keyword {kw.text!r}", line.number, kw.column)
            _arity(line, 2)
            x = _resolve(fibs[base.cod(h2)].identities, line.words[1])
            comps[x] = _resolve(fib._dom, line.words[2])
        lams[h1, h2] = comps
    try:
        s = Prestack(base, fibs, restrictions, lams, name=name)
    except StructuralError as exc:
        raise InstanceSyntaxError(str(exc), 1, 1) from None
    bad = check_prestack(s)
    if bad:
        raise InstanceSyntaxError(f"prestack {name} is malformed: {bad[0]}", 1, 1)
    return s


# ---------------------------------------------------------------------------
# printing


def _names(*xs) -> None:
    for x in xs:
        if not isinstance(x, str) or not x or any(c.isspace() for c in x) or "#" in x or x.startswith("["):
            raise StructuralError(f"identifier {x!r} cannot be written to a document")


def _category_lines(c: FinCategory) -> list[str]:
    out = []
    for x in c.objects:
        _names(x, c.identity(x))
        out.append(f"object {x} {c.identity(x)}")
    for m in c.morphisms:
        if not c.is_identity(m):
            _names(m)
            out.append(f"arrow {m} {c.dom(m)} {c.cod(m)}")
    comps = []
    for g, f in c.composable_pairs():
        if c.is_identity(g) or c.is_identity(f):
            continue
        comps.append(f"compose {g} {f} {c.compose(g, f)}")
    return out + sorted(comps)


def _nominal_identity(j: Functor) -> bool:
    return (all(k == v for k, v in j.obj_map.items()) and all(k == v for k, v in j.mor_map.items()))


def print_instance(doc: InstanceDocument) -> str:
    blocks: list[list[str]] = []
    c = doc.category
    if c is None:
        return ""
    blocks.append(["[category]"] + _category_lines(c))
    if doc.topology_style == "sieves":
        lines = []
        for u in c.objects:
            for s in doc.topology.covering_sieves(u):
                lines.append(" ".join(["sieve", u, *s.sorted_members()]))
        blocks.append(["[topology]"] + lines)
    elif doc.topology_style == "coverings":
        lines = []
        for u in c.objects:
            for fam in doc.families.get(u, []):
                lines.append(" ".join(["cover", u, *fam]))
        blocks.append(["[coverings]"] + lines)
    for name, p in doc.presheaves.items():
        _names(name)
        lines = [f"[presheaf {name}]"]
        for u in c.objects:
            _names(*p.values[u])
            lines.append(" ".join(["value", u, *p.values[u]]))
        rs = []
        for f in c.morphisms:
            if c.is_identity(f):
                continue
            for y, x in p.restrictions[f].items():
                rs.append(f"restrict {f} {y} {x}")
        blocks.append(lines + sorted(rs))
    for name, s in doc.prestacks.items():
        _names(name)
        blocks.append([f"[prestack {name}]"])
        for u in c.objects:
            blocks.append([f"[fiber {name} {u}]"] + _category_lines(s.fibers[u]))
        for h in c.morphisms:
            j = s.restrictions[h]
            if _nominal_identity(j):
                continue
            lines = [f"[functor {name} {h}]"]
            lines += [f"obj {x} {j.on_obj(x)}" for x in j.source.objects]
            lines += [f"mor {m} {j.on_mor(m)}" for m in j.source.morphisms if not j.source.is_identity(m)]
            blocks.append(lines)
        for (h1, h2), comps in s.lambdas.items():
            fib = s.fibers[c.dom(h1)]
            at = [f"at {x} {m}" for x, m in comps.items() if not fib.is_identity(m)]
            if at:
                blocks.append([f"[lambda {name} {h1} {h2}]"] + at)
    return "\n\n".join("\n".join(b) for b in blocks) + "\n"


def fixture_document(s: Prestack | None, t: Topology, name: str = "S") -> InstanceDocument:
    """Document holding a topology (as explicit covering sieves unless it is
    maximal) and optionally one prestack."""
    doc = InstanceDocument(category=t.base, topology=t)
    if t != maximal_topology(t.base):
        doc.topology_style = "sieves"
    if s is not None:
        doc.prestacks[name] = s
    return doc

