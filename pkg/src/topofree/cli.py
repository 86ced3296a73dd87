"""Command-line front end: one command per process.

Exit codes: 0 success, 1 mathematical negative (not open, failed check,
disagreement), 2 input error.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import words as W
from .automaton import CosetAutomaton
from .cover import (
    DEFAULT_MAX_INDEX,
    GraevPresentation,
    IndexTooLargeError,
    InfiniteIndexError,
    NotOpenError,
    SubgroupSpec,
    decide_open,
    lift_automaton,
    schreier_cover,
    subgroup_basis,
    verify_presentation,
)
from .finspace import FinSpace, PointedFinSpace, path_components
from .graev import classify
from .groupoid import stratum_open_check, vertex_group_presentation
from .textio import (
    INPUT_SUBGROUP,
    OUTPUT_POINTED,
    OUTPUT_SPACE,
    Certificate,
    GraphDecl,
    Manifest,
    ManifestError,
    emit_certificate,
    emit_manifest,
    input_manifest,
    parse_certificate,
    parse_manifest,
    sha256,
    space_manifest,
)
from .topgraph import Tree, maximal_tree, pi0_graph, quotient_by_tree, validate_tree

EXIT_OK, EXIT_NEGATIVE, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


# --- loading -------------------------------------------------------------------


def _split_ref(ref: str) -> tuple[Path, str | None]:
    path = Path(ref)
    if path.exists() or ":" not in ref:
        return path, None
    head, name = ref.rsplit(":", 1)
    return Path(head), name or None


def load_manifest(path: Path) -> Manifest:
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    try:
        return parse_manifest(text)
    except ManifestError as exc:
        raise InputError(f"{path}: {exc}") from None


def _only(names, what: str, path: Path) -> str:
    names = sorted(names)
    if len(names) != 1:
        raise InputError(f"{path}: expected exactly one {what}, found {len(names)}; use FILE:NAME")
    return names[0]


def resolve_space(ref: str, basepoint: str | None) -> tuple[PointedFinSpace | None, FinSpace, list[W.Word] | None]:
    """``FILE[:NAME]`` naming a space, pointed space or subgroup."""
    path, name = _split_ref(ref)
    m = load_manifest(path)
    if name is None:
        if m.subgroups:
            name = _only(m.subgroups, "subgroup", path)
        elif m.pointed:
            name = _only(m.pointed, "pointed space", path)
        else:
            name = _only(m.spaces, "space", path)
    kind = m.kind(name)
    gens = None
    if kind == "subgroup":
        pointed_name, gens = m.subgroups[name]
        space_name, bp = m.pointed[pointed_name]
    elif kind == "pointed":
        space_name, bp = m.pointed[name]
    elif kind == "space":
        space_name, bp = name, None
    else:
        raise InputError(f"{path}: no space, pointed space or subgroup named {name!r}")
    space = m.spaces[space_name]
    if basepoint is not None:
        if gens is not None and basepoint != bp:
            raise InputError("--basepoint conflicts with the subgroup's pointed space")
        bp = basepoint
    if bp is not None and bp not in space:
        raise InputError(f"basepoint {bp!r} is not a point of the space")
    pointed = PointedFinSpace(space, bp) if bp is not None else None
    return pointed, space, gens


def resolve_graph(ref: str):
    path, name = _split_ref(ref)
    m = load_manifest(path)
    if name is None:
        name = _only(m.graphs, "graph", path)
    if name not in m.graphs:
        raise InputError(f"{path}: no graph named {name!r}")
    return m.graph(name)


def require_pointed(args) -> tuple[PointedFinSpace, list[W.Word] | None]:
    if not args.space:
        raise InputError("--space is required")
    pointed, _, gens = resolve_space(args.space, args.basepoint)
    if pointed is None:
        raise InputError("a basepoint is required (--basepoint or a pointed entry)")
    return pointed, gens


def require_subgroup(args) -> SubgroupSpec:
    pointed, gens = require_pointed(args)
    if args.generators is not None:
        try:
            gens = W.parse_word_list(args.generators, pointed.points)
        except ValueError as exc:
            raise InputError(f"--generators: {exc}") from None
    if gens is None:
        raise InputError("--generators is required unless --space names a subgroup")
    try:
        return SubgroupSpec(pointed, tuple(gens))
    except ValueError as exc:
        raise InputError(str(exc)) from None


# --- certificates ----------------------------------------------------------------


def build_certificate(spec: SubgroupSpec, pres: GraevPresentation) -> Certificate:
    input_text = emit_manifest(input_manifest(spec.ambient, spec.generators))
    out = space_manifest(pres.space.space, OUTPUT_SPACE)
    out.pointed[OUTPUT_POINTED] = (OUTPUT_SPACE, pres.space.basepoint)
    report = verify_presentation(spec, pres)
    return Certificate(
        input_text=input_text,
        input_sha256=sha256(input_text),
        index=pres.automaton.size,
        automaton_letters=list(pres.automaton.letters),
        transitions=pres.automaton.edges(),
        tree=list(pres.tree.edges),
        transversal=dict(pres.transversal),
        presentation_text=emit_manifest(out),
        generators=dict(pres.generator_words),
        origin=dict(pres.origin),
        checks=report.checks,
    )


def recheck_certificate(cert: Certificate) -> list[tuple[str, bool, str]]:
    """Independent re-verification of every claim in a certificate."""
    results: list[tuple[str, bool, str]] = []
    ok_hash = sha256(cert.input_text) == cert.input_sha256
    results.append(("input-hash", ok_hash, "" if ok_hash else "input block does not match its hash"))
    try:
        m = parse_manifest(cert.input_text)
        ambient, gens = m.subgroup(INPUT_SUBGROUP)
        spec = SubgroupSpec(ambient, tuple(gens))
        q = parse_manifest(cert.presentation_text)
        Q = q.pointed_space(OUTPUT_POINTED)
    except (ManifestError, KeyError, ValueError) as exc:
        raise InputError(f"certificate: {exc}") from None

    decision = decide_open(spec)
    try:
        claimed = CosetAutomaton(cert.automaton_letters, cert.index, cert.transitions)
        same = bool(decision) and decision.projected == claimed and claimed.is_complete()
        detail = "" if same else "automaton is not the projection of H"
    except ValueError as exc:
        same, detail = False, str(exc)
    results.append(("automaton", same, detail))
    if not same:
        return results

    cover = schreier_cover(spec, max_index=max(cert.index, 1))
    tree_ok, detail = True, ""
    try:
        tree = Tree.from_edges(cover.total, [e for e, _, _ in cert.tree])
        if list(tree.edges) != sorted(cert.tree):
            raise ValueError("tree endpoints do not match the cover")
        validate_tree(cover.total, tree)
        if quotient_by_tree(cover.total, tree) != Q:
            raise ValueError("presentation space is not the cover modulo the tree")
    except (KeyError, ValueError) as exc:
        tree_ok, detail = False, str(exc.args[0])
    results.append(("tree", tree_ok, detail))

    lifted = lift_automaton(ambient, decision.projected)
    bad = [s for s, w in cert.transversal.items() if lifted.read(w) != s]
    ok_tv = not bad and sorted(cert.transversal) == list(range(cert.index))
    results.append(("transversal", ok_tv, "" if ok_tv else f"wrong cosets: {bad}"))

    pres = GraevPresentation(
        ambient,
        Q,
        cert.generators,
        cert.origin,
        tree if tree_ok else None,
        cert.transversal,
        decision.projected,
    )
    report = verify_presentation(spec, pres)
    results.extend(report.checks)
    recorded = [(n, p) for n, p, _ in cert.checks]
    recomputed = [(n, p) for n, p, _ in report.checks]
    results.append(("recorded-checks", recorded == recomputed, "" if recorded == recomputed else "recorded results differ"))
    return results


# --- commands -----------------------------------------------------------------------


def cmd_classify(args, out) -> int:
    pointed, _ = require_pointed(args)
    c = classify(pointed)
    if c.connected:
        out.write("connected\n")
        return EXIT_OK
    w = c.witness
    out.write("disconnected\n")
    out.write("A1 " + " ".join(sorted(w.first)) + "\n")
    out.write("A2 " + " ".join(sorted(w.second)) + "\n")
    out.write(f"e1 {w.e1}\ne2 {w.e2}\n")
    m = space_manifest(w.wedge.space, "wedge", w.wedge.basepoint)
    out.write(emit_manifest(m))
    return EXIT_OK


def cmd_pi0(args, out) -> int:
    if args.graph:
        g = resolve_graph(args.graph)
        p, q = pi0_graph(g)
        m = Manifest()
        decl = GraphDecl(vertices=list(p.vertices))
        for x, y in p.pairs():
            name = f"pi0.{x}.{y}"
            m.spaces[name] = p.edge_space(x, y)
            decl.edges.append((x, y, name))
        m.graphs["pi0"] = decl
        out.write(emit_manifest(m))
        for e in sorted(q):
            out.write(f"class {e} {q[e]}\n")
        return EXIT_OK
    if not args.space:
        raise InputError("pi0 needs --space or --graph")
    _, space, _ = resolve_space(args.space, args.basepoint)
    blocks, _ = path_components(space)
    for b in blocks:
        out.write("component " + " ".join(sorted(b)) + "\n")
    out.write(f"components {len(blocks)}\n")
    return EXIT_OK


def cmd_vertex_group(args, out) -> int:
    if not args.graph:
        raise InputError("vertex-group needs --graph")
    g = resolve_graph(args.graph)
    v = args.basepoint or g.vertices[0]
    if v not in g.vertices:
        raise InputError(f"vertex {v!r} is not in the graph")
    try:
        tree = maximal_tree(g)
    except ValueError as exc:
        out.write(f"error {exc}\n")
        return EXIT_NEGATIVE
    Q, basis = vertex_group_presentation(g, tree, v)
    out.write(f"vertex {v}\n")
    for e, x, y in tree.edges:
        out.write(f"tree {e} {x} {y}\n")
    m = space_manifest(Q.space, OUTPUT_SPACE, Q.basepoint)
    out.write(emit_manifest(m))
    for e in sorted(basis):
        out.write(f"generator {e} {W.format_word(basis[e].letters)}\n")
    return EXIT_OK


def cmd_subgroup_basis(args, out) -> int:
    spec = require_subgroup(args)
    try:
        pres = subgroup_basis(spec, args.max_index)
    except (NotOpenError, InfiniteIndexError, IndexTooLargeError) as exc:
        out.write(f"error {type(exc).__name__}: {exc}\n")
        return EXIT_NEGATIVE
    cert = build_certificate(spec, pres)
    text = emit_certificate(cert)
    if args.emit_certificate:
        Path(args.emit_certificate).write_text(text, encoding="utf-8")
    out.write(text)
    return EXIT_OK if all(p for _, p, _ in cert.checks) else EXIT_NEGATIVE


def cmd_verify(args, out) -> int:
    try:
        text = Path(args.certificate).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {args.certificate}: {exc.strerror}") from None
    try:
        cert = parse_certificate(text)
    except ManifestError as exc:
        raise InputError(f"{args.certificate}: {exc}") from None
    results = recheck_certificate(cert)
    for name, passed, detail in results:
        out.write(f"{name} {'pass' if passed else 'fail'}" + (f" {detail}" if detail else "") + "\n")
    ok = all(p for _, p, _ in results)
    out.write("verified\n" if ok else "rejected\n")
    return EXIT_OK if ok else EXIT_NEGATIVE


def cmd_open_check(args, out) -> int:
    spec = require_subgroup(args)
    d = decide_open(spec)
    out.write("open\n" if d else "not-open\n")
    out.write(f"reason {d.reason}\n")
    if d.witness is not None:
        out.write(f"witness {W.format_word(d.witness)}\n")
    agree = True
    if args.strata_depth is not None:
        if args.strata_depth < 1:
            raise InputError("--strata-depth must be at least 1")
        s = stratum_open_check(spec.ambient, d.automaton, args.strata_depth)
        agree = s == d.is_open
        out.write(f"strata {args.strata_depth} {'open' if s else 'not-open'}\n")
        out.write(f"agree {'yes' if agree else 'no'}\n")
    return EXIT_OK if d and agree else EXIT_NEGATIVE


COMMANDS = {
    "classify": cmd_classify,
    "pi0": cmd_pi0,
    "vertex-group": cmd_vertex_group,
    "subgroup-basis": cmd_subgroup_basis,
    "verify": cmd_verify,
    "open-check": cmd_open_check,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="topofree", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        c = sub.add_parser(name)
        if name == "verify":
            c.add_argument("certificate", help="certificate file to re-check")
            continue
        c.add_argument("--space", metavar="FILE[:NAME]")
        c.add_argument("--graph", metavar="FILE[:NAME]")
        c.add_argument("--basepoint")
        c.add_argument("--generators", metavar='"w1; w2"')
        c.add_argument("--max-index", type=int, default=DEFAULT_MAX_INDEX)
        c.add_argument("--strata-depth", type=int, metavar="L")
        c.add_argument("--emit-certificate", metavar="PATH")
    return p


def main(argv: list[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        return COMMANDS[args.command](args, out)
    except (InputError, ManifestError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
