"""Finite k-graphs presented by a colored skeleton plus factorization squares.

A path is stored in color-ordered normal form: all color-1 edges first, then
color-2 edges, and so on.  Edges are read left to right, so for a path
``e1 e2 ... en`` we have ``s(e_i) = r(e_{i+1})``, the range of the path is
``r(e1)`` and its source is ``s(en)``.  A square ``first=(a, b)``,
``second=(b', a')`` identifies the two 2-paths ``ab`` and ``b'a'``; every
reordering of a path is a sequence of such adjacent swaps.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import product
from typing import Iterable, Sequence

import jsonschema

from . import degree as deg
from .errors import (
    VIOLATION_CLASSES,
    DegreeOutOfRange,
    GraphFileError,
    NotComposable,
)


@dataclass(frozen=True)
class Edge:
    id: str
    color: int
    src: str
    rng: str


@dataclass(frozen=True)
class Square:
    first: tuple[str, str]
    second: tuple[str, str]


@dataclass(frozen=True)
class Skeleton:
    k: int
    vertices: tuple[str, ...]
    edges: tuple[Edge, ...]
    squares: tuple[Square, ...] = ()


@dataclass(frozen=True)
class Violation:
    kind: str
    detail: str
    items: tuple = ()


@dataclass(frozen=True, order=True)
class Path:
    """A morphism in normal form; a degree-0 path is its range vertex."""

    degree: tuple
    edges: tuple
    rng: str
    src: str

    @property
    def is_vertex(self) -> bool:
        return not self.edges

    def __str__(self):
        return ".".join(self.edges) if self.edges else self.rng

    def to_json(self):
        return list(self.edges) if self.edges else self.rng


class KGraph:
    """A validated finite, row-finite, source-free k-graph.

    Build one with :func:`validate` (or the JSON loaders); the constructor
    assumes the skeleton has already been checked.
    """

    def __init__(self, skeleton: Skeleton, swaps: dict):
        self.skeleton = skeleton
        self.k = skeleton.k
        self.vertices = tuple(sorted(skeleton.vertices))
        self.edges = {e.id: e for e in skeleton.edges}
        self._swap = swaps
        self._in = {}
        for e in sorted(skeleton.edges, key=lambda e: e.id):
            self._in.setdefault((e.rng, e.color), []).append(e)
        self._out = {}
        for e in sorted(skeleton.edges, key=lambda e: e.id):
            self._out.setdefault((e.src, e.color), []).append(e)
        self._paths_from = {}
        self._paths_into = {}
        self._norm = {}
        self._fact = {}
        # per-graph memo space for other modules (cycline tables etc.)
        self.cache: dict = {}
        # set by pullback(): (base 1-graph, f, edge id -> base Path)
        self.pullback = None

    def __repr__(self):
        return f"KGraph(k={self.k}, vertices={len(self.vertices)}, edges={len(self.edges)})"

    # -- construction of paths -------------------------------------------------

    def vertex(self, v: str) -> Path:
        if v not in self.skeleton.vertices:
            raise KeyError(v)
        return Path(deg.zero(self.k), (), v, v)

    def edge(self, e: str) -> Path:
        ed = self.edges[e]
        return Path(deg.unit(self.k, ed.color), (e,), ed.rng, ed.src)

    def path(self, edge_ids: Sequence[str] | str) -> Path:
        """Compose a sequence of edges (any color order); a bare string is a vertex."""
        if isinstance(edge_ids, str):
            return self.vertex(edge_ids)
        edge_ids = list(edge_ids)
        if not edge_ids:
            raise ValueError("empty edge list; pass a vertex id instead")
        p = self.edge(edge_ids[0])
        for e in edge_ids[1:]:
            p = self.compose(p, self.edge(e))
        return p

    def color(self, e: str) -> int:
        return self.edges[e].color

    def _make(self, edges: tuple, rng: str) -> Path:
        if not edges:
            return Path(deg.zero(self.k), (), rng, rng)
        d = [0] * self.k
        for e in edges:
            d[self.edges[e].color - 1] += 1
        return Path(tuple(d), edges, self.edges[edges[0]].rng, self.edges[edges[-1]].src)

    # -- reordering --------------------------------------------------------------

    def _reorder(self, edges: Sequence[str], target: Sequence[int]) -> list[str]:
        """Rewrite a composable edge word into the one with color word ``target``.

        Same-colored edges never pass each other, so each edge's destination is
        fixed by (color, occurrence); a bubble sort on that key then only ever
        swaps edges of different colors, which is exactly what squares allow.
        """
        slots: dict[int, list[int]] = {}
        for pos, c in enumerate(target):
            slots.setdefault(c, []).append(pos)
        seen: dict[int, int] = {}
        keys = []
        for e in edges:
            c = self.edges[e].color
            i = seen.get(c, 0)
            seen[c] = i + 1
            keys.append(slots[c][i])
        word = list(edges)
        n = len(word)
        for end in range(n - 1, 0, -1):
            moved = False
            for i in range(end):
                if keys[i] > keys[i + 1]:
                    word[i], word[i + 1] = self._swap[(word[i], word[i + 1])]
                    keys[i], keys[i + 1] = keys[i + 1], keys[i]
                    moved = True
            if not moved:
                break
        return word

    def normalize(self, edges: Sequence[str]) -> tuple:
        edges = tuple(edges)
        hit = self._norm.get(edges)
        if hit is None:
            colors = sorted(self.edges[e].color for e in edges)
            hit = tuple(self._reorder(edges, colors))
            self._norm[edges] = hit
        return hit

    # -- the category operations --------------------------------------------------

    def compose(self, p: Path, q: Path) -> Path:
        """The path ``pq``; requires ``s(p) = r(q)``."""
        if p.src != q.rng:
            raise NotComposable(f"s({p})={p.src} but r({q})={q.rng}")
        if p.is_vertex:
            return q
        if q.is_vertex:
            return p
        return Path(deg.add(p.degree, q.degree), self.normalize(p.edges + q.edges), p.rng, q.src)

    def compose_all(self, paths: Iterable[Path], rng: str | None = None) -> Path:
        paths = list(paths)
        if not paths:
            if rng is None:
                raise ValueError("need a vertex for an empty composition")
            return self.vertex(rng)
        out = paths[0]
        for p in paths[1:]:
            out = self.compose(out, p)
        return out

    def factorize(self, lam: Path, m: Sequence[int]) -> tuple[Path, Path]:
        """The unique ``(mu, nu)`` with ``lam = mu nu`` and ``d(mu) = m``."""
        m = tuple(m)
        hit = self._fact.get((lam, m))
        if hit is not None:
            return hit
        if len(m) != self.k or not deg.leq(deg.zero(self.k), m) or not deg.leq(m, lam.degree):
            raise DegreeOutOfRange(f"{m} is not between 0 and d({lam})={lam.degree}")
        hit = self._factorize(lam, m)
        self._fact[(lam, m)] = hit
        return hit

    def _factorize(self, lam: Path, m: tuple) -> tuple[Path, Path]:
        rest = deg.sub(lam.degree, m)
        if deg.is_zero(m):
            return self.vertex(lam.rng), lam
        if deg.is_zero(rest):
            return lam, self.vertex(lam.src)
        word = self._reorder(lam.edges, deg.color_word(m) + deg.color_word(rest))
        cut = sum(m)
        mu = Path(m, tuple(word[:cut]), lam.rng, self.edges[word[cut - 1]].src)
        nu = Path(rest, tuple(word[cut:]), mu.src, lam.src)
        return mu, nu

    def segment(self, lam: Path, m: Sequence[int], n: Sequence[int]) -> Path:
        """``lam(m, n)``: the piece of ``lam`` between degrees m and n."""
        m, n = tuple(m), tuple(n)
        if not deg.leq(m, n):
            raise DegreeOutOfRange(f"segment needs m <= n, got {m}, {n}")
        head, _ = self.factorize(lam, n)
        return self.factorize(head, m)[1]

    # -- enumeration -----------------------------------------------------------------

    def paths_from(self, v: str, n: Sequence[int]) -> tuple[Path, ...]:
        """``v Lambda^n``: paths of degree n with range v, sorted by edge ids."""
        n = tuple(n)
        key = (v, n)
        hit = self._paths_from.get(key)
        if hit is not None:
            return hit
        colors = deg.color_word(n)
        out = []

        def walk(at, acc):
            if len(acc) == len(colors):
                out.append(Path(n, tuple(acc), v, at))
                return
            for e in self._in.get((at, colors[len(acc)]), ()):
                acc.append(e.id)
                walk(e.src, acc)
                acc.pop()

        walk(v, [])
        hit = tuple(out)
        self._paths_from[key] = hit
        return hit

    def paths_into(self, v: str, n: Sequence[int]) -> tuple[Path, ...]:
        """``Lambda^n v``: paths of degree n with source v, sorted by edge ids."""
        n = tuple(n)
        key = (v, n)
        hit = self._paths_into.get(key)
        if hit is not None:
            return hit
        colors = deg.color_word(n)
        out = []

        def walk(at, acc):
            if len(acc) == len(colors):
                edges = tuple(reversed(acc))
                out.append(Path(n, edges, at, v))
                return
            for e in self._out.get((at, colors[len(colors) - 1 - len(acc)]), ()):
                acc.append(e.id)
                walk(e.rng, acc)
                acc.pop()

        walk(v, [])
        hit = tuple(sorted(out))
        self._paths_into[key] = hit
        return hit

    def paths_of_degree(self, n: Sequence[int]) -> list[Path]:
        return [p for v in self.vertices for p in self.paths_from(v, n)]

    def paths_upto(self, bound: Sequence[int]) -> list[Path]:
        """All paths with degree <= bound, ordered by (degree length, degree, edges)."""
        out = []
        for n in deg.box(deg.zero(self.k), bound):
            out.extend(sorted(self.paths_of_degree(n)))
        return out

    def cycles_at(self, v: str, n: Sequence[int]) -> list[Path]:
        return [p for p in self.paths_from(v, n) if p.src == v]

    def in_degree(self, v: str, color: int) -> int:
        """``|v Lambda^{e_color}|``."""
        return len(self._in.get((v, color), ()))

    # -- serialization -------------------------------------------------------------

    def to_dict(self) -> dict:
        sk = self.skeleton
        return {
            "k": sk.k,
            "vertices": sorted(sk.vertices),
            "edges": [
                {"id": e.id, "color": e.color, "src": e.src, "rng": e.rng}
                for e in sorted(sk.edges, key=lambda e: e.id)
            ],
            "squares": [
                {"first": list(s.first), "second": list(s.second)}
                for s in sorted(sk.squares, key=lambda s: (s.first, s.second))
            ],
        }


# -- validation ------------------------------------------------------------------------


def _check_fields(sk: Skeleton) -> list[Violation]:
    bad = []
    if not isinstance(sk.k, int) or sk.k < 1:
        return [Violation("Malformed", f"k must be a positive integer, got {sk.k!r}")]
    if len(set(sk.vertices)) != len(sk.vertices):
        bad.append(Violation("Malformed", "duplicate vertex ids"))
    ids = [e.id for e in sk.edges]
    if len(set(ids)) != len(ids):
        bad.append(Violation("Malformed", "duplicate edge ids"))
    verts = set(sk.vertices)
    edges = {e.id: e for e in sk.edges}
    for e in sk.edges:
        if not 1 <= e.color <= sk.k:
            bad.append(Violation("Malformed", f"edge {e.id} has color {e.color} outside 1..{sk.k}", (e.id,)))
        if e.src not in verts or e.rng not in verts:
            bad.append(Violation("Malformed", f"edge {e.id} has an unknown endpoint", (e.id,)))
    for sq in sk.squares:
        names = tuple(sq.first) + tuple(sq.second)
        if len(sq.first) != 2 or len(sq.second) != 2 or any(x not in edges for x in names):
            bad.append(Violation("Malformed", f"square {sq} names unknown edges", names))
            continue
        a, b = (edges[x] for x in sq.first)
        bp, ap = (edges[x] for x in sq.second)
        if not (a.color < b.color and bp.color == b.color and ap.color == a.color):
            bad.append(Violation("Malformed", f"square {sq} has inconsistent colors", names))
        elif a.src != b.rng or bp.src != ap.rng:
            bad.append(Violation("Malformed", f"square {sq} has a non-composable side", names))
        elif a.rng != bp.rng or b.src != ap.src:
            bad.append(Violation("Malformed", f"square {sq} sides have different endpoints", names))
    return bad


def _check_squares(sk: Skeleton) -> tuple[list[Violation], dict]:
    edges = {e.id: e for e in sk.edges}
    firsts: dict = {}
    seconds: dict = {}
    for sq in sk.squares:
        firsts.setdefault(tuple(sq.first), []).append(sq)
        seconds.setdefault(tuple(sq.second), []).append(sq)
    bad = []
    swaps = {}
    for x, y in product(sorted(edges), repeat=2):
        ex, ey = edges[x], edges[y]
        if ex.color == ey.color or ex.src != ey.rng:
            continue
        table = firsts if ex.color < ey.color else seconds
        hits = table.get((x, y), [])
        if not hits:
            bad.append(Violation("IncompleteSquares", f"2-path {x}.{y} lies in no square", (x, y)))
        elif len(hits) > 1:
            bad.append(Violation("AmbiguousSquares", f"2-path {x}.{y} lies in {len(hits)} squares", (x, y)))
        else:
            sq = hits[0]
            swaps[(x, y)] = tuple(sq.second) if ex.color < ey.color else tuple(sq.first)
    return bad, swaps


def _check_sources(sk: Skeleton) -> list[Violation]:
    have = {(e.rng, e.color) for e in sk.edges}
    bad = []
    for v in sorted(sk.vertices):
        for i in range(1, sk.k + 1):
            if (v, i) not in have:
                bad.append(Violation("HasSource", f"vertex {v} receives no edge of color {i}", (v, i)))
    return bad


def _check_hexagons(sk: Skeleton, swaps: dict) -> list[Violation]:
    """For every 3-path with colors i<j<l, both ways of reversing it must agree."""
    edges = {e.id: e for e in sk.edges}
    by_rng_color: dict = {}
    for e in sorted(sk.edges, key=lambda e: e.id):
        by_rng_color.setdefault((e.rng, e.color), []).append(e)

    def sw(word, i):
        w = list(word)
        w[i], w[i + 1] = swaps[(w[i], w[i + 1])]
        return w

    bad = []
    for x in sorted(edges.values(), key=lambda e: e.id):
        for y in [e for c in range(x.color + 1, sk.k + 1) for e in by_rng_color.get((x.src, c), [])]:
            for z in [e for c in range(y.color + 1, sk.k + 1) for e in by_rng_color.get((y.src, c), [])]:
                w = [x.id, y.id, z.id]
                left = sw(sw(sw(w, 0), 1), 0)
                right = sw(sw(sw(w, 1), 0), 1)
                if left != right:
                    bad.append(
                        Violation(
                            "HexagonFailure",
                            f"3-path {'.'.join(w)} normalizes to {'.'.join(left)} and {'.'.join(right)}",
                            tuple(w),
                        )
                    )
    return bad


def check(sk: Skeleton) -> list[Violation]:
    """All violations of the k-graph axioms, in a fixed order (empty when valid)."""
    bad = _check_fields(sk)
    if bad:
        return bad
    sq_bad, swaps = _check_squares(sk)
    bad = sq_bad + _check_sources(sk)
    if not sq_bad and sk.k >= 3:
        bad += _check_hexagons(sk, swaps)
    return bad


def validate(sk: Skeleton) -> KGraph:
    """Validate a skeleton, returning a :class:`KGraph` or raising with every violation."""
    bad = check(sk)
    if bad:
        raise VIOLATION_CLASSES[bad[0].kind](bad)
    _, swaps = _check_squares(sk)
    return KGraph(sk, swaps)


# -- JSON graph-description files ---------------------------------------------------------

_EDGE_SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "required": ["id", "color", "src", "rng"],
    "properties": {
        "id": {"type": "string"},
        "color": {"type": "integer", "minimum": 1},
        "src": {"type": "string"},
        "rng": {"type": "string"},
    },
}

GRAPH_SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "required": ["k", "vertices", "edges"],
    "properties": {
        "k": {"type": "integer", "minimum": 1},
        "vertices": {"type": "array", "items": {"type": "string"}},
        "edges": {"type": "array", "items": _EDGE_SCHEMA},
        "squares": {
            "type": "array",
            "items": {
                "type": "object",
                "additionalProperties": False,
                "required": ["first", "second"],
                "properties": {
                    "first": {"type": "array", "items": {"type": "string"}, "minItems": 2, "maxItems": 2},
                    "second": {"type": "array", "items": {"type": "string"}, "minItems": 2, "maxItems": 2},
                },
            },
        },
    },
}

# A file may instead describe a pullback f*E of a 1-graph E.
PULLBACK_SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "required": ["pullback"],
    "properties": {
        "pullback": {
            "type": "object",
            "additionalProperties": False,
            "required": ["base", "f"],
            "properties": {
                "base": GRAPH_SCHEMA,
                "f": {"type": "array", "items": {"type": "integer", "minimum": 0}, "minItems": 1},
            },
        }
    },
}


def skeleton_from_dict(data: dict) -> Skeleton:
    try:
        jsonschema.validate(data, GRAPH_SCHEMA)
    except jsonschema.ValidationError as exc:
        raise GraphFileError(f"graph description rejected: {exc.message}") from None
    return Skeleton(
        k=data["k"],
        vertices=tuple(data["vertices"]),
        edges=tuple(Edge(e["id"], e["color"], e["src"], e["rng"]) for e in data["edges"]),
        squares=tuple(Square(tuple(s["first"]), tuple(s["second"])) for s in data.get("squares", [])),
    )


def skeleton_from_json(text: str) -> Skeleton:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GraphFileError(f"not valid JSON: {exc}") from None
    return skeleton_from_dict(data)


def load_graph(source) -> KGraph:
    """Load and validate a graph file (path or already-parsed dict).

    Accepts either a plain skeleton description or ``{"pullback": {"base": ..., "f": [...]}}``.
    """
    if isinstance(source, dict):
        data = source
    else:
        try:
            with open(source, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise GraphFileError(str(exc)) from None
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise GraphFileError(f"not valid JSON: {exc}") from None
    if isinstance(data, dict) and "pullback" in data:
        try:
            jsonschema.validate(data, PULLBACK_SCHEMA)
        except jsonschema.ValidationError as exc:
            raise GraphFileError(f"pullback description rejected: {exc.message}") from None
        from .pullback import pullback

        base = validate(skeleton_from_dict(data["pullback"]["base"]))
        return pullback(base, tuple(data["pullback"]["f"]))
    return validate(skeleton_from_dict(data))


@dataclass
class GraphBuilder:
    """Small helper for writing skeletons in code."""

    k: int
    vertices: list = field(default_factory=list)
    edges: list = field(default_factory=list)
    squares: list = field(default_factory=list)

    def add_edge(self, id, color, src, rng):
        for v in (src, rng):
            if v not in self.vertices:
                self.vertices.append(v)
        self.edges.append(Edge(id, color, src, rng))
        return self

    def add_square(self, first, second):
        self.squares.append(Square(tuple(first), tuple(second)))
        return self

    def skeleton(self) -> Skeleton:
        return Skeleton(self.k, tuple(self.vertices), tuple(self.edges), tuple(self.squares))

    def build(self) -> KGraph:
        return validate(self.skeleton())
