"""Command-line front end: ``finstack <command> [options]``.

Exit status 0 means every check passed, 1 that some check failed, 2 a
malformed or unreadable instance.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from pathlib import Path

from . import gallery
from .fincat import check_category_axioms
from .prestack import DescentArrow, DescentDatum, check_prestack
from .presheaf import Sieve
from .proper import DiagramBound, check_proper_stack, report_records, verify_theorem
from .sheaves import is_separated_presheaf, is_sheaf_presheaf
from .site import topology_violations, verify_le
from .textformat import InstanceDocument, fixture_document, parse_instance, print_instance
from .verdict import GenerationExhausted, StructuralError

EXIT_OK, EXIT_FAIL, EXIT_STRUCTURAL = 0, 1, 2


def jsonable(x):
    """Plain JSON form of witnesses: sieves, data, tuples, sets."""
    if isinstance(x, Sieve):
        return {"anchor": jsonable(x.anchor), "members": [jsonable(m) for m in x.sorted_members()]}
    if isinstance(x, (DescentDatum, DescentArrow)):
        return {f.name: jsonable(getattr(x, f.name)) for f in dataclasses.fields(x)
                if f.name not in ("source", "target")}
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    if isinstance(x, (set, frozenset)):
        return sorted((jsonable(v) for v in x), key=repr)
    if x is None or isinstance(x, (bool, int, float, str)):
        return x
    return str(x)


def _record(check: str, subject: str, ok: bool, witness=None) -> dict:
    rec = {"check": check, "subject": subject, "verdict": "pass" if ok else "fail"}
    if witness:
        rec["witness"] = witness
    return rec


# ---------------------------------------------------------------------------
# commands


def _site_records(doc: InstanceDocument) -> list[dict]:
    t = doc.topology
    subject = "site"
    out = [_record("category", subject, not check_category_axioms(t.base))]
    bad = topology_violations(t)
    out.append(_record("topology", subject, not bad,
                       {"violations": [{"kind": v.kind, **v.detail} for v in bad]} if bad else None))
    corpus = gallery.canonical_corpus(t)
    violations = verify_le(t, corpus)
    for law in ("LE1", "LE2", "LE3", "LE4"):
        hits = [v.detail for v in violations if v.kind == law]
        out.append(_record(law, subject, not hits,
                           {"count": len(hits), "first": hits[0]} if hits else None))
    return out


def _sheaf_records(doc: InstanceDocument) -> list[dict]:
    out = []
    for name, p in doc.presheaves.items():
        sep = is_separated_presheaf(doc.topology, p)
        out.append(_record("separated", name, sep.ok, sep.witness))
        sh = is_sheaf_presheaf(doc.topology, p)
        out.append(_record("sheaf", name, sh.ok, sh.witness))
    return out


def _prestack_records(doc: InstanceDocument) -> list[dict]:
    out = []
    for name, s in doc.prestacks.items():
        bad = check_prestack(s)
        out.append(_record("prestack", name, not bad,
                           {"violations": [{"kind": v.kind, **v.detail} for v in bad]} if bad else None))
    return out


def _proper_records(doc: InstanceDocument, bound: DiagramBound, theorem: bool) -> list[dict]:
    out = []
    for name, s in doc.prestacks.items():
        run = verify_theorem if theorem else check_proper_stack
        out.extend(report_records(run(s, doc.topology, bound), name))
    return out


def _emit(records: list[dict], fmt: str, witnesses: bool, stream) -> None:
    for rec in records:
        rec = jsonable(rec)
        if not witnesses:
            rec.pop("witness", None)
        if fmt == "structured":
            stream.write(json.dumps(rec, sort_keys=True) + "\n")
        else:
            extra = "".join(f" {k}={json.dumps(v, sort_keys=True)}" for k, v in sorted(rec.items())
                            if k not in ("check", "subject", "verdict", "witness"))
            stream.write(f"{rec['check']:<10} {rec['subject']:<24} {rec['verdict'].upper()}{extra}\n")
            if "witness" in rec:
                stream.write(f"  witness: {json.dumps(rec['witness'], sort_keys=True)}\n")


def _exit_code(records: list[dict]) -> int:
    # "skipped" means not evaluable because another axiom already failed
    return EXIT_OK if all(r["verdict"] == "pass" for r in records) else EXIT_FAIL


def _load(path: str) -> InstanceDocument:
    text = sys.stdin.read() if path == "-" else Path(path).read_text()
    return parse_instance(text)


def _gallery_docs(seed: int | None) -> dict[str, str]:
    docs = {}
    for fx in gallery.gallery_fixtures():
        docs[fx.name] = print_instance(fixture_document(fx.prestack, fx.topology, fx.name))
    for name, t in gallery.gallery_sites().items():
        docs[f"site-{name}"] = print_instance(fixture_document(None, t))
    docs["site-stability-broken"] = print_instance(fixture_document(None, gallery.stability_broken_site()))
    if seed is not None:
        t = gallery.random_site(seed)
        s = gallery.random_prestack(seed, t)
        docs[f"random-{seed}"] = print_instance(fixture_document(s, t, f"random{seed}"))
    return docs


def _cmd_gallery(args, out) -> int:
    docs = _gallery_docs(args.seed)
    if args.out:
        target = Path(args.out)
        target.mkdir(parents=True, exist_ok=True)
        for name, text in docs.items():
            (target / f"{name}.txt").write_text(text)
        return EXIT_OK
    if args.name is None:
        for name in docs:
            out.write(name + "\n")
        return EXIT_OK
    name = f"random-{args.seed}" if args.name == "random" else args.name
    if name not in docs:
        sys.stderr.write(f"finstack: no gallery instance named {args.name!r}\n")
        return EXIT_STRUCTURAL
    out.write(docs[name])
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--bound", type=int, default=DiagramBound().objects,
                        help="largest diagram (number of objects) checked for colimits")
    common.add_argument("--seed", type=int, default=None)
    common.add_argument("--format", choices=("text", "structured"), default="text")
    common.add_argument("--witnesses", choices=("on", "off"), default="on")

    parser = argparse.ArgumentParser(prog="finstack", description="Checks for sheaves and stacks on finite sites.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_ in (("check-site", "category axioms, topology axioms, LE1-LE4"),
                        ("check-sheaf", "separated presheaf and sheaf conditions"),
                        ("check-prestack", "prestack coherence"),
                        ("check-proper", "PRS1-PRS5"),
                        ("verify-theorem", "PRS1-PRS5, then the stack condition and its replay")):
        p = sub.add_parser(name, parents=[common], help=help_)
        p.add_argument("instance", help="instance file, or - for stdin")
    g = sub.add_parser("gallery", parents=[common], help="list, print or write built-in instances")
    g.add_argument("name", nargs="?", help="instance to print; 'random' uses --seed")
    g.add_argument("--out", help="write every instance into this directory")
    return parser


def main(argv: list[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        if args.command == "gallery":
            if args.name == "random" and args.seed is None:
                args.seed = 0
            return _cmd_gallery(args, out)
        doc = _load(args.instance)
        if doc.category is None:
            records: list[dict] = []
        elif args.command == "check-site":
            records = _site_records(doc)
        elif args.command == "check-sheaf":
            records = _sheaf_records(doc)
        elif args.command == "check-prestack":
            records = _prestack_records(doc)
        else:
            bound = DiagramBound(objects=args.bound)
            records = _proper_records(doc, bound, theorem=args.command == "verify-theorem")
    except (StructuralError, GenerationExhausted, OSError) as exc:
        sys.stderr.write(f"finstack: {exc}\n")
        return EXIT_STRUCTURAL
    _emit(records, args.format, args.witnesses == "on", out)
    return _exit_code(records)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
