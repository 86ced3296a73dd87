"""Line-oriented text formats: manifests and presentation certificates.

A manifest starts with ``topofree 1`` and declares named objects::

    space S            # followed by ``point <id>`` and ``le <x> <y>`` lines
    graph G            # followed by ``vertex <id>`` and ``edges <x> <y> <space>``
    pointed P S <bp>
    subgroup H P       # followed by ``gen <word>`` lines

Blank lines and ``#`` comments are ignored.  Emission is canonical: objects
are grouped by kind and sorted by name, and each space lists its full
(closed) relation, so ``emit(parse(emit(m))) == emit(m)``.
"""
from __future__ import annotations

import hashlib
from dataclasses import dataclass, field

from . import words as W
from .finspace import FinSpace, PointedFinSpace
from .topgraph import TopGraph

VERSION = "1"
MAGIC = "topofree"
CERT_MAGIC = "topofree-certificate"


class ManifestError(ValueError):
    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.message = message
        self.line = line
        self.column = column
        where = f"line {line}, column {column}: " if line is not None else ""
        super().__init__(where + message)


def check_id(token: str) -> str | None:
    """Reason a token is not a valid id, or ``None`` when it is."""
    if not token:
        return "empty id"
    bad = [c for c in "^;:#" if c in token]
    if bad:
        return f"id {token!r} may not contain {bad[0]!r}"
    return None


@dataclass
class SpaceDecl:
    points: list[str] = field(default_factory=list)
    le: list[tuple[str, str]] = field(default_factory=list)


@dataclass
class GraphDecl:
    vertices: list[str] = field(default_factory=list)
    edges: list[tuple[str, str, str]] = field(default_factory=list)  # (x, y, space name)


@dataclass
class Manifest:
    spaces: dict[str, FinSpace] = field(default_factory=dict)
    graphs: dict[str, GraphDecl] = field(default_factory=dict)
    pointed: dict[str, tuple[str, str]] = field(default_factory=dict)  # name -> (space, bp)
    subgroups: dict[str, tuple[str, list[W.Word]]] = field(default_factory=dict)
    version: str = VERSION

    def names(self) -> set[str]:
        return set(self.spaces) | set(self.graphs) | set(self.pointed) | set(self.subgroups)

    def kind(self, name: str) -> str | None:
        for kind, table in (
            ("space", self.spaces),
            ("graph", self.graphs),
            ("pointed", self.pointed),
            ("subgroup", self.subgroups),
        ):
            if name in table:
                return kind
        return None

    def graph(self, name: str) -> TopGraph:
        decl = self.graphs[name]
        spaces = {}
        for x, y, s in decl.edges:
            if (x, y) in spaces:
                raise ManifestError(f"graph {name}: two edge spaces for pair ({x}, {y})")
            spaces[(x, y)] = self.spaces[s]
        try:
            return TopGraph(decl.vertices, spaces)
        except (ValueError, KeyError) as exc:
            raise ManifestError(f"graph {name}: {exc.args[0]}") from None

    def pointed_space(self, name: str) -> PointedFinSpace:
        space, bp = self.pointed[name]
        return PointedFinSpace(self.spaces[space], bp)

    def subgroup(self, name: str) -> tuple[PointedFinSpace, list[W.Word]]:
        pointed, gens = self.subgroups[name]
        return self.pointed_space(pointed), list(gens)


def parse_manifest(text: str) -> Manifest:
    lines = text.splitlines()
    m = Manifest()
    space_decls: dict[str, SpaceDecl] = {}
    positions: dict[str, tuple[int, int]] = {}
    refs: list[tuple[str, str, int, int]] = []  # (kind wanted, name, line, col)
    current: tuple[str, str] | None = None
    seen_header = False

    for lineno, raw in enumerate(lines, start=1):
        body = raw.split("#", 1)[0]
        tokens = []
        col = 0
        for tok in body.split():
            col = body.index(tok, col)
            tokens.append((tok, col + 1))
            col += len(tok)
        if not tokens:
            continue
        head, hcol = tokens[0]
        args = tokens[1:]

        def fail(msg, c=hcol):
            raise ManifestError(msg, lineno, c)

        def need(n, usage):
            if len(args) != n:
                fail(f"expected '{usage}'")

        def ident(tok, c):
            problem = check_id(tok)
            if problem:
                fail(problem, c)
            return tok

        if not seen_header:
            if head != MAGIC:
                fail(f"expected header '{MAGIC} {VERSION}'")
            need(1, f"{MAGIC} <version>")
            if args[0][0] != VERSION:
                fail(f"unsupported version {args[0][0]!r}", args[0][1])
            seen_header = True
            continue

        if head in ("space", "graph", "subgroup", "pointed"):
            if head == "pointed":
                need(3, "pointed <name> <space> <basepoint>")
            elif head == "subgroup":
                need(2, "subgroup <name> <pointed>")
            else:
                need(1, f"{head} <name>")
            name, ncol = args[0]
            ident(name, ncol)
            if name in positions:
                fail(f"duplicate name {name!r} (first declared on line {positions[name][0]})", ncol)
            positions[name] = (lineno, ncol)
            if head == "space":
                space_decls[name] = SpaceDecl()
                current = ("space", name)
            elif head == "graph":
                m.graphs[name] = GraphDecl()
                current = ("graph", name)
            elif head == "pointed":
                refs.append(("space", args[1][0], lineno, args[1][1]))
                m.pointed[name] = (args[1][0], ident(*args[2]))
                refs.append(("point", (args[1][0], args[2][0]), lineno, args[2][1]))
                current = None
            else:
                refs.append(("pointed", args[1][0], lineno, args[1][1]))
                m.subgroups[name] = (args[1][0], [])
                current = ("subgroup", name)
            continue

        kind = current[0] if current else None
        if head in ("point", "le"):
            if kind != "space":
                fail(f"'{head}' outside a space block")
            decl = space_decls[current[1]]
            if head == "point":
                need(1, "point <id>")
                p = ident(*args[0])
                if p in decl.points:
                    fail(f"duplicate point {p!r}", args[0][1])
                decl.points.append(p)
            else:
                need(2, "le <x> <y>")
                for tok, c in args:
                    if tok not in decl.points:
                        fail(f"unknown point {tok!r}", c)
                decl.le.append((args[0][0], args[1][0]))
        elif head in ("vertex", "edges"):
            if kind != "graph":
                fail(f"'{head}' outside a graph block")
            decl = m.graphs[current[1]]
            if head == "vertex":
                need(1, "vertex <id>")
                v = ident(*args[0])
                if v in decl.vertices:
                    fail(f"duplicate vertex {v!r}", args[0][1])
                decl.vertices.append(v)
            else:
                need(3, "edges <x> <y> <space>")
                for tok, c in args[:2]:
                    if tok not in decl.vertices:
                        fail(f"unknown vertex {tok!r}", c)
                refs.append(("space", args[2][0], lineno, args[2][1]))
                decl.edges.append((args[0][0], args[1][0], args[2][0]))
        elif head == "gen":
            if kind != "subgroup":
                fail("'gen' outside a subgroup block")
            text = body[hcol - 1 + len(head):]
            try:
                word = W.parse_word(text)
            except ValueError as exc:
                fail(str(exc), args[0][1] if args else hcol)
            for x, _ in word:
                problem = check_id(x)
                if problem:
                    fail(problem)
            m.subgroups[current[1]][1].append(W.reduce_word(word))
        else:
            fail(f"unknown directive {head!r}")

    if not seen_header:
        raise ManifestError(f"missing header '{MAGIC} {VERSION}'", 1, 1)

    for name, decl in space_decls.items():
        m.spaces[name] = FinSpace(decl.points, decl.le)
    for kind, target, lineno, col in refs:
        if kind == "point":
            space, p = target
            if space in m.spaces and p not in m.spaces[space]:
                raise ManifestError(f"basepoint {p!r} is not a point of space {space!r}", lineno, col)
            continue
        table = m.spaces if kind == "space" else m.pointed
        if target not in table:
            raise ManifestError(f"dangling reference: no {kind} named {target!r}", lineno, col)
    for name, (pointed, gens) in m.subgroups.items():
        space, bp = m.pointed[pointed]
        allowed = set(m.spaces[space].points) - {bp}
        for g in gens:
            for x, _ in g:
                if x not in allowed:
                    line, col = positions[name]
                    raise ManifestError(
                        f"subgroup {name}: letter {x!r} is not a non-basepoint point of {space!r}",
                        line,
                        col,
                    )
    for name in m.graphs:
        line, col = positions[name]
        try:
            m.graph(name)
        except ManifestError as exc:
            raise ManifestError(exc.message, line, col) from None
    return m


def emit_space(name: str, space: FinSpace) -> list[str]:
    out = [f"space {name}"]
    out += [f"point {p}" for p in space.points]
    out += [f"le {x} {y}" for x, y in space.relation()]
    return out


def emit_manifest(m: Manifest) -> str:
    blocks: list[list[str]] = []
    for name in sorted(m.spaces):
        blocks.append(emit_space(name, m.spaces[name]))
    for name in sorted(m.graphs):
        decl = m.graphs[name]
        blocks.append(
            [f"graph {name}"]
            + [f"vertex {v}" for v in sorted(decl.vertices)]
            + [f"edges {x} {y} {s}" for x, y, s in sorted(decl.edges)]
        )
    for name in sorted(m.pointed):
        space, bp = m.pointed[name]
        blocks.append([f"pointed {name} {space} {bp}"])
    for name in sorted(m.subgroups):
        pointed, gens = m.subgroups[name]
        if any(x == "1" for g in gens for x, _ in g):
            # the token 1 reads back as the identity
            raise ValueError(f"subgroup {name}: letter '1' has no text form")
        blocks.append([f"subgroup {name} {pointed}"] + [f"gen {W.format_word(g)}" for g in gens])
    out = [f"{MAGIC} {m.version}"]
    for b in blocks:
        out.append("")
        out.extend(b)
    return "\n".join(out) + "\n"


def space_manifest(space: FinSpace, name: str = "X", basepoint: str | None = None) -> Manifest:
    m = Manifest(spaces={name: space})
    if basepoint is not None:
        m.pointed[f"{name}.pt"] = (name, basepoint)
    return m


def sha256(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


# --- certificates --------------------------------------------------------------


@dataclass
class Certificate:
    input_text: str
    input_sha256: str
    index: int
    automaton_letters: list[str]
    transitions: list[tuple[int, str, int]]
    tree: list[tuple[str, str, str]]
    transversal: dict[int, W.Word]
    presentation_text: str
    generators: dict[str, W.Word]
    origin: dict[str, str]
    checks: list[tuple[str, bool, str]]


INPUT_SPACE, INPUT_POINTED, INPUT_SUBGROUP = "X", "X.pt", "H"
OUTPUT_SPACE, OUTPUT_POINTED = "Q", "Q.pt"


def input_manifest(ambient: PointedFinSpace, generators) -> Manifest:
    m = space_manifest(ambient.space, INPUT_SPACE, ambient.basepoint)
    m.subgroups[INPUT_SUBGROUP] = (INPUT_POINTED, [W.reduce_word(g) for g in generators])
    return m


def emit_certificate(cert: Certificate) -> str:
    out = [
        f"{CERT_MAGIC} {VERSION}",
        f"input-sha256 {cert.input_sha256}",
        "begin input",
        *cert.input_text.rstrip("\n").split("\n"),
        "end input",
        f"index {cert.index}",
        "automaton-letters " + " ".join(cert.automaton_letters),
    ]
    out += [f"transition {s} {c} {t}" for s, c, t in cert.transitions]
    out += [f"tree {e} {x} {y}" for e, x, y in cert.tree]
    out += [f"transversal {s} {W.format_word(w)}" for s, w in sorted(cert.transversal.items())]
    out += ["begin presentation", *cert.presentation_text.rstrip("\n").split("\n"), "end presentation"]
    out += [f"generator {p} {W.format_word(w)}" for p, w in sorted(cert.generators.items())]
    out += [f"origin {p} {x}" for p, x in sorted(cert.origin.items())]
    for name, passed, detail in cert.checks:
        out.append(f"check {name} {'pass' if passed else 'fail'}" + (f" {detail}" if detail else ""))
    return "\n".join(out) + "\n"


def parse_certificate(text: str) -> Certificate:
    lines = text.splitlines()
    if not lines or lines[0].split() != [CERT_MAGIC, VERSION]:
        raise ManifestError(f"expected header '{CERT_MAGIC} {VERSION}'", 1, 1)
    fields: dict = {
        "transitions": [],
        "tree": [],
        "transversal": {},
        "generators": {},
        "origin": {},
        "checks": [],
    }
    block: list[str] | None = None
    block_name = None
    i = 1
    try:
        while i < len(lines):
            line = lines[i]
            i += 1
            if block is not None:
                if line == f"end {block_name}":
                    fields[f"{block_name}_text"] = "\n".join(block) + "\n"
                    block = None
                else:
                    block.append(line)
                continue
            if not line.strip():
                continue
            head, _, rest = line.partition(" ")
            args = rest.split()
            if head == "begin" and args in (["input"], ["presentation"]):
                block, block_name = [], args[0]
            elif head == "input-sha256":
                fields["input_sha256"] = args[0]
            elif head == "index":
                fields["index"] = int(args[0])
            elif head == "automaton-letters":
                fields["automaton_letters"] = args
            elif head == "transition":
                fields["transitions"].append((int(args[0]), args[1], int(args[2])))
            elif head == "tree":
                e, x, y = args
                fields["tree"].append((e, x, y))
            elif head == "transversal":
                fields["transversal"][int(args[0])] = W.parse_word(" ".join(args[1:]))
            elif head == "generator":
                fields["generators"][args[0]] = W.parse_word(" ".join(args[1:]))
            elif head == "origin":
                fields["origin"][args[0]] = args[1]
            elif head == "check":
                fields["checks"].append((args[0], args[1] == "pass", " ".join(args[2:])))
            else:
                raise ManifestError(f"unknown certificate line {head!r}", i, 1)
    except (IndexError, ValueError) as exc:
        if isinstance(exc, ManifestError):
            raise
        raise ManifestError(f"malformed certificate line: {exc}", i, 1) from None
    if block is not None:
        raise ManifestError(f"unterminated block {block_name!r}", i, 1)
    required = ("input_text", "input_sha256", "index", "automaton_letters", "presentation_text")
    missing = [k for k in required if k not in fields]
    if missing:
        raise ManifestError(f"certificate is missing {', '.join(missing)}")
    return Certificate(**fields)
