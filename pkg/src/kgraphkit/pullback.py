"""Pullback k-graphs f*E of a 1-graph E along a monoid map f: N^k -> N."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import NotAOneGraph, NotAPullbackGraph, ZeroHomomorphism
from .kgraph import Edge, KGraph, Path, Skeleton, Square, validate


@dataclass(frozen=True)
class PullbackInfo:
    base: KGraph
    f: tuple
    edge_paths: dict  # edge id of f*E -> Path in E


def _edge_id(mu: Path, color: int) -> str:
    if mu.is_vertex:
        return f"({mu.rng})_{color}"
    return f"[{'.'.join(mu.edges)}]_{color}"


def pullback(E: KGraph, f) -> KGraph:
    """Build ``f*E``: morphisms ``(mu, m)`` with ``f(m) = |mu|`` and degree ``m``.

    The color-i edges are the E-paths of length ``f_i`` (vertices when
    ``f_i = 0``).  Squares come from re-splitting ``mu nu`` in E.
    """
    if E.k != 1:
        raise NotAOneGraph("pullback needs a 1-graph base")
    f = tuple(int(x) for x in f)
    if not any(f) or min(f) < 0:
        raise ZeroHomomorphism(f"f={f} must be a nonzero map N^k -> N")
    k = len(f)
    edge_paths = {}
    edges = []
    for i, fi in enumerate(f, start=1):
        for mu in E.paths_of_degree((fi,)):
            eid = _edge_id(mu, i)
            edge_paths[eid] = mu
            edges.append(Edge(eid, i, mu.src, mu.rng))
    squares = []
    by_color = {}
    for e in edges:
        by_color.setdefault(e.color, []).append(e)
    for i in range(1, k + 1):
        for j in range(i + 1, k + 1):
            for a in by_color[i]:
                for b in by_color[j]:
                    if a.src != b.rng:
                        continue
                    whole = E.compose(edge_paths[a.id], edge_paths[b.id])
                    nu2, mu2 = E.factorize(whole, (f[j - 1],))
                    squares.append(Square((a.id, b.id), (_edge_id(nu2, j), _edge_id(mu2, i))))
    sk = Skeleton(k, tuple(E.vertices), tuple(edges), tuple(squares))
    g = validate(sk)
    g.pullback = PullbackInfo(E, f, edge_paths)
    return g


def p1_project(g: KGraph, lam: Path) -> Path:
    """First-factor projection of a path of ``f*E`` to a path of E."""
    if g.pullback is None:
        raise NotAPullbackGraph("graph was not built by pullback()")
    E = g.pullback.base
    parts = [g.pullback.edge_paths[e] for e in lam.edges]
    return E.compose_all(parts, rng=lam.rng)


def f_of(g: KGraph, n) -> int:
    if g.pullback is None:
        raise NotAPullbackGraph("graph was not built by pullback()")
    return sum(a * b for a, b in zip(g.pullback.f, n))


def lift(g: KGraph, mu: Path, m) -> Path:
    """Inverse of p1 on paths: the unique path of degree m projecting to ``mu``."""
    if g.pullback is None:
        raise NotAPullbackGraph("graph was not built by pullback()")
    m = tuple(m)
    if f_of(g, m) != len(mu.edges):
        raise ValueError(f"f({m}) != |{mu}|")
    E = g.pullback.base
    pieces = []
    rest = mu
    for i, c in enumerate(m, start=1):
        for _ in range(c):
            head, rest = E.factorize(rest, (g.pullback.f[i - 1],))
            pieces.append(g.edge(_edge_id(head, i)))
    return g.compose_all(pieces, rng=mu.rng)


__all__ = ["pullback", "p1_project", "lift", "f_of", "PullbackInfo"]
