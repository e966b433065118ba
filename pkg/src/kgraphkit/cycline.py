"""Cylinder sets and cycline pairs.

A pair (alpha, beta) with a common source is cycline when ``alpha y = beta y``
for every infinite path y at that source.  :func:`cycline_decide` settles this
exactly with a greatest-fixed-point computation; :func:`cycline_bruteforce` and
:func:`onegraph_cycline_oracle` are independent checks used to validate it.

The unfolding behind the decision procedure: put ``a = (d(beta)-d(alpha))^+``,
``b = (d(alpha)-d(beta))^+`` and ``g = a + b + 1``.  Then ``alpha z = beta z``
for all z iff, for every ``gamma`` in ``s(alpha) Lambda^g``,

* ``alpha . gamma(0, a+1) == beta . gamma(0, b+1)``, and
* ``(gamma(a+1, g), gamma(b+1, g))`` is again such a pair.

The derived pairs all have degrees ``(c^+, c^-)`` where ``c = d(alpha)-d(beta)``,
a finite state space.  The extra ``+1`` makes the checked prefixes cofinal in
every coordinate; without it, coordinates where ``c`` vanishes are never
inspected and the fixed point can accept non-cycline pairs (see TWIST in the
corpus).
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from . import degree as deg
from .errors import DegreeOutOfRange, NotAOneGraph, NotSourceMatched
from .kgraph import KGraph, Path


def ext(g: KGraph, mu: Path, N) -> frozenset:
    """Degree-N refinement of Z(mu): all lam with d(lam)=N and lam(0, d(mu)) = mu."""
    N = tuple(N)
    if not deg.leq(mu.degree, N):
        raise DegreeOutOfRange(f"d({mu})={mu.degree} is not <= {N}")
    rest = deg.sub(N, mu.degree)
    return frozenset(g.compose(mu, gam) for gam in g.paths_from(mu.src, rest))


def cylinder_equal(g: KGraph, mu: Path, nu: Path) -> bool:
    """Z(mu) == Z(nu).  Same-degree cylinders are disjoint or equal, so one refinement decides it."""
    if mu.rng != nu.rng:
        return False
    N = deg.join(mu.degree, nu.degree)
    return ext(g, mu, N) == ext(g, nu, N)


# -- greatest fixed point ----------------------------------------------------------------


@dataclass
class GfpTable:
    difference: tuple
    surviving: frozenset
    rounds: int
    states: int
    removed_per_round: list = field(default_factory=list)

    def __contains__(self, pair):
        return pair in self.surviving


def unfold(g: KGraph, mu: Path, nu: Path) -> list[tuple[Path, bool, tuple[Path, Path]]]:
    """One step of the unfolding: ``(gamma, prefixes_agree, derived_pair)`` for each gamma."""
    c = deg.sub(mu.degree, nu.degree)
    a, b = deg.negpart(c), deg.pos(c)
    one = deg.ones(g.k)
    big = deg.add(deg.add(a, b), one)
    a1, b1 = deg.add(a, one), deg.add(b, one)
    out = []
    for gam in g.paths_from(mu.src, big):
        left = g.compose(mu, g.segment(gam, deg.zero(g.k), a1))
        right = g.compose(nu, g.segment(gam, deg.zero(g.k), b1))
        derived = (g.segment(gam, a1, big), g.segment(gam, b1, big))
        out.append((gam, left == right, derived))
    return out


def gfp_table(g: KGraph, c) -> GfpTable:
    """Greatest fixed point over pairs (mu, nu), d(mu)=c^+, d(nu)=c^-, s(mu)=s(nu)."""
    c = tuple(c)
    cache = g.cache.setdefault("gfp", {})
    if c in cache:
        return cache[c]
    up, down = deg.pos(c), deg.negpart(c)
    states = []
    for mu in g.paths_of_degree(up):
        for nu in g.paths_of_degree(down):
            if mu.src == nu.src:
                states.append((mu, nu))
    succ = {}
    alive = set()
    for st in states:
        steps = unfold(g, *st)
        if all(ok for _, ok, _ in steps):
            alive.add(st)
            succ[st] = [d for _, _, d in steps]
    rounds = 0
    removed = [len(states) - len(alive)]
    while True:
        dead = {st for st in alive if any(d not in alive for d in succ[st])}
        rounds += 1
        if not dead:
            break
        removed.append(len(dead))
        alive -= dead
    table = GfpTable(c, frozenset(alive), rounds, len(states), removed)
    cache[c] = table
    return table


@dataclass
class CyclineDecision:
    alpha: Path
    beta: Path
    decided: bool
    gfp_rounds: int
    witness: Path | None = None  # an extension on which the unfolding fails


def cycline_report(g: KGraph, alpha: Path, beta: Path) -> CyclineDecision:
    if alpha.src != beta.src:
        raise NotSourceMatched(f"s({alpha}) != s({beta})")
    if alpha == beta:
        return CyclineDecision(alpha, beta, True, 0)
    table = gfp_table(g, deg.sub(alpha.degree, beta.degree))
    for gam, ok, derived in unfold(g, alpha, beta):
        if not ok or derived not in table:
            return CyclineDecision(alpha, beta, False, table.rounds, gam)
    return CyclineDecision(alpha, beta, True, table.rounds)


def cycline_decide(g: KGraph, alpha: Path, beta: Path) -> bool:
    """Exact test of ``alpha y = beta y`` for all infinite y at s(alpha)."""
    return cycline_report(g, alpha, beta).decided


# -- independent oracles ------------------------------------------------------------------


def cycline_bruteforce(g: KGraph, alpha: Path, beta: Path, depth=None) -> bool:
    """Check Z(alpha gamma) == Z(beta gamma) for every gamma of degree <= depth.

    A False answer is a proof; True only means no counterexample up to depth.
    """
    if alpha.src != beta.src:
        raise NotSourceMatched(f"s({alpha}) != s({beta})")
    depth = deg.const(g.k, 6) if depth is None else tuple(depth)
    for m in deg.box(deg.zero(g.k), depth):
        for gam in g.paths_from(alpha.src, m):
            if not cylinder_equal(g, g.compose(alpha, gam), g.compose(beta, gam)):
                return False
    return True


def has_entry(g: KGraph, cycle: Path) -> bool:
    """A return path in a 1-graph has an entry if some r(e_i) receives a second edge."""
    return any(g.in_degree(g.edges[e].rng, 1) != 1 for e in cycle.edges)


def onegraph_cycline_oracle(g: KGraph, alpha: Path, beta: Path) -> bool:
    """alpha = beta, or one is the other followed by a return path without entry."""
    if g.k != 1:
        raise NotAOneGraph("oracle applies to 1-graphs only")
    if alpha.src != beta.src:
        raise NotSourceMatched(f"s({alpha}) != s({beta})")
    if alpha == beta:
        return True
    short, long = sorted((alpha, beta), key=lambda p: len(p.edges))
    if short.rng != long.rng or long.edges[: len(short.edges)] != short.edges:
        return False
    c = long.edges[len(short.edges):]
    if not c:
        return False
    first, last = g.edges[c[0]], g.edges[c[-1]]
    if first.rng != short.src or last.src != short.src:
        return False
    return all(g.in_degree(g.edges[e].rng, 1) == 1 for e in c)


# -- enumeration --------------------------------------------------------------------------


def _workers() -> int:
    try:
        return max(1, int(os.environ.get("KGK_THREADS", "1")))
    except ValueError:
        return 1


def source_matched_pairs(g: KGraph, bound) -> list[tuple[Path, Path]]:
    paths = g.paths_upto(tuple(bound))
    by_src: dict = {}
    for p in paths:
        by_src.setdefault(p.src, []).append(p)
    pairs = [(a, b) for a in paths for b in by_src[a.src]]
    pairs.sort(key=lambda ab: (ab[0].degree, ab[1].degree, ab[0].edges, ab[1].edges, ab[0].rng, ab[1].rng))
    return pairs


def enumerate_cycline(g: KGraph, bound) -> list[tuple[Path, Path]]:
    """All cycline pairs with both degrees <= bound, in (d(alpha), d(beta), edge ids) order."""
    pairs = source_matched_pairs(g, bound)
    n = _workers()
    if n > 1:
        with ThreadPoolExecutor(max_workers=n) as pool:
            flags = list(pool.map(lambda ab: cycline_decide(g, *ab), pairs))
    else:
        flags = [cycline_decide(g, a, b) for a, b in pairs]
    return [ab for ab, ok in zip(pairs, flags) if ok]


@dataclass
class PeriodicityGroup:
    elements: frozenset
    bound: tuple
    witnesses: dict
    connected: bool
    closure_violations: list


def connectivity_hypothesis(g: KGraph) -> bool:
    """Every two vertices are ranges of two paths with a common source."""
    reach = {}
    for v in g.vertices:
        seen, todo = {v}, [v]
        while todo:
            u = todo.pop()
            for e in g.edges.values():
                if e.rng == u and e.src not in seen:
                    seen.add(e.src)
                    todo.append(e.src)
        reach[v] = seen
    return all(reach[v] & reach[w] for v in g.vertices for w in g.vertices)


def per_group(g: KGraph, bound) -> PeriodicityGroup:
    """Degree differences of cycline pairs within bound."""
    bound = tuple(bound)
    witnesses = {}
    for a, b in enumerate_cycline(g, bound):
        witnesses.setdefault(deg.sub(a.degree, b.degree), (a, b))
    elements = frozenset(witnesses)
    connected = connectivity_hypothesis(g)
    violations = []
    if connected:
        for c1 in sorted(elements):
            for c2 in sorted(elements):
                s = deg.add(c1, c2)
                if all(abs(x) <= b for x, b in zip(s, bound)) and s not in elements:
                    violations.append((c1, c2))
    return PeriodicityGroup(elements, bound, witnesses, connected, violations)
