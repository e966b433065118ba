"""Small named graphs used throughout the tests, demos and the CLI.

G1    one vertex v, one loop e
G1e   loop c at v with an entry f coming from a second vertex w, which
      carries its own loop g
G2    one vertex v, two loops a, b (aperiodic)
T2    one vertex, one edge per color (b color 1, r color 2), one square
C2    the 2-cycle u <-> w
P1_*  pullbacks f*E for E in {G1, C2} and f in {(1,1), (1,2)}
TWIST one vertex, color-1 loop e, color-2 loops f, g with ef = ge, eg = fe
"""

from __future__ import annotations

from functools import lru_cache

from .kgraph import GraphBuilder, KGraph
from .pullback import pullback


def G1() -> KGraph:
    return GraphBuilder(1).add_edge("e", 1, "v", "v").build()


def G1e() -> KGraph:
    b = GraphBuilder(1, vertices=["v", "w"])
    b.add_edge("c", 1, "v", "v").add_edge("f", 1, "w", "v").add_edge("g", 1, "w", "w")
    return b.build()


def G2() -> KGraph:
    return GraphBuilder(1).add_edge("a", 1, "v", "v").add_edge("b", 1, "v", "v").build()


def T2() -> KGraph:
    b = GraphBuilder(2).add_edge("b", 1, "v", "v").add_edge("r", 2, "v", "v")
    return b.add_square(("b", "r"), ("r", "b")).build()


def C2() -> KGraph:
    b = GraphBuilder(1, vertices=["u", "w"])
    return b.add_edge("p", 1, "w", "u").add_edge("q", 1, "u", "w").build()


def TWIST() -> KGraph:
    b = GraphBuilder(2).add_edge("e", 1, "v", "v").add_edge("f", 2, "v", "v").add_edge("g", 2, "v", "v")
    b.add_square(("e", "f"), ("g", "e")).add_square(("e", "g"), ("f", "e"))
    return b.build()


PULLBACKS = {
    "P1_G1_11": ("G1", (1, 1)),
    "P1_G1_12": ("G1", (1, 2)),
    "P1_C2_11": ("C2", (1, 1)),
    "P1_C2_12": ("C2", (1, 2)),
}

_BASE = {"G1": G1, "G1e": G1e, "G2": G2, "T2": T2, "C2": C2, "TWIST": TWIST}


@lru_cache(maxsize=None)
def get(name: str) -> KGraph:
    """Corpus graph by name; instances are shared so their caches warm up."""
    if name in _BASE:
        return _BASE[name]()
    if name in PULLBACKS:
        base, f = PULLBACKS[name]
        return pullback(get(base), f)
    raise KeyError(name)


ACCEPTANCE = ("G1", "G1e", "G2", "T2", "C2", *PULLBACKS)
ONE_GRAPHS = ("G1", "G1e", "G2", "C2")
