"""Computable infinite paths and regular-path classification.

Two kinds of infinite path are representable:

:class:`EPPath`
    eventually periodic ``head . cycle . cycle ...`` with every coordinate of
    ``d(cycle)`` positive.  Paths are kept canonical: along the diagonal
    ``(1,...,1)`` an eventually periodic x reads as an ultimately periodic word
    of degree-(1,...,1) letters, and the canonical form is the minimal
    preperiod with a primitive period of that word.  So the canonical head has
    degree ``t(1,...,1)`` and the cycle ``p(1,...,1)``; equality of paths is
    equality of canonical forms.

:class:`ThueMorsePath`
    (1-graphs only) ``lead`` followed by the tail, from position ``offset``,
    of ``c_{t0} c_{t1} c_{t2} ...`` where ``t`` is the Thue-Morse sequence and
    ``c0 != c1`` are return paths of equal length at one vertex.  These
    are never eventually periodic, which gives aperiodic (hence regular) points
    in graphs such as G2 where no eventually periodic path is regular.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

from . import degree as deg
from .cycline import cycline_decide, gfp_table, has_entry, unfold
from .errors import NotAOneGraph, NotComposable, PreconditionViolated
from .kgraph import KGraph, Path


@dataclass(frozen=True, order=True)
class EPPath:
    head: Path
    cycle: Path

    @property
    def rng(self):
        return self.head.rng

    def __str__(self):
        h = "" if self.head.is_vertex else f"{self.head}."
        return f"{h}({self.cycle})^inf"

    def to_json(self):
        return {"head": list(self.head.edges), "cycle": list(self.cycle.edges)}


@dataclass(frozen=True, order=True)
class ThueMorsePath:
    lead: Path
    offset: int
    code: tuple  # (c0, c1)

    @property
    def rng(self):
        return self.lead.rng

    def __str__(self):
        c0, c1 = self.code
        h = "" if self.lead.is_vertex else f"{self.lead}."
        return f"{h}TM[{c0}|{c1}]@{self.offset}"

    def to_json(self):
        return {"lead": list(self.lead.edges), "offset": self.offset, "code": [list(c.edges) for c in self.code]}


InfinitePath = Union[EPPath, ThueMorsePath]


def sort_key(x: InfinitePath):
    if isinstance(x, EPPath):
        return (0, x.head.degree, x.head.edges, x.head.rng, x.cycle.edges)
    return (1, x.lead.degree, x.lead.edges, x.lead.rng, x.offset, x.code[0].edges, x.code[1].edges)


# -- eventually periodic paths ----------------------------------------------------------


def _primitive_root(word: list) -> list:
    n = len(word)
    for d in range(1, n + 1):
        if n % d == 0 and word[:d] * (n // d) == word:
            return word[:d]
    return word


def _power(g: KGraph, cycle: Path, t: int) -> Path:
    out = g.vertex(cycle.rng)
    for _ in range(t):
        out = g.compose(out, cycle)
    return out


def _long_word(g: KGraph, head: Path, cycle: Path, need) -> Path:
    """``head . cycle^J`` with J minimal such that its degree is >= need."""
    J = 0
    for h, c, n in zip(head.degree, cycle.degree, need):
        if n > h:
            J = max(J, -(-(n - h) // c))
    return g.compose(head, _power(g, cycle, J))


def ep_path(g: KGraph, head: Path | None, cycle: Path) -> EPPath:
    """Canonical eventually periodic path ``head . cycle^inf``."""
    if head is None:
        head = g.vertex(cycle.rng)
    if cycle.rng != cycle.src or cycle.rng != head.src:
        raise NotComposable(f"cycle {cycle} is not a return path at s({head})={head.src}")
    if min(cycle.degree) < 1:
        raise ValueError(f"cycle degree {cycle.degree} must be positive in every coordinate")
    memo = g.cache.setdefault("ep", {})
    hit = memo.get((head, cycle))
    if hit is None:
        hit = memo[(head, cycle)] = _canonical(g, head, cycle)
    return hit


def _canonical(g: KGraph, head: Path, cycle: Path) -> EPPath:
    k = g.k
    one = deg.ones(k)
    L = cycle.degree
    t0 = max(head.degree) if not head.is_vertex else 0
    start = deg.scale(t0, one)
    w = _long_word(g, head, cycle, deg.add(deg.add(start, L), one))
    letters = [g.segment(w, deg.scale(t, one), deg.scale(t + 1, one)) for t in range(t0)]
    key = g.segment(w, start, deg.add(start, L))
    seen = {}
    tail = []
    # sigma^{t(1..1)} x is d(cycle)-periodic for t >= t0, so it is key^inf
    while key not in seen:
        seen[key] = len(tail)
        zz = g.compose(key, key)
        tail.append(g.segment(zz, deg.zero(k), one))
        key = g.segment(zz, one, deg.add(one, L))
    i = seen[key]
    H = letters + tail[:i]
    C = _primitive_root(tail[i:])
    while H and H[-1] == C[-1]:
        H.pop()
        C = [C[-1]] + C[:-1]
    new_head = g.compose_all(H, rng=head.rng)
    new_cycle = g.compose_all(C)
    return EPPath(new_head, new_cycle)


# -- Thue-Morse coded paths -------------------------------------------------------------


def _tm(n: int) -> int:
    return bin(n).count("1") & 1


def _tm_edge(code: tuple, j: int) -> str:
    L = len(code[0].edges)
    return code[_tm(j // L)].edges[j % L]


def tm_path(g: KGraph, c0: Path, c1: Path, lead: Path | None = None, offset: int = 0) -> ThueMorsePath:
    """``lead`` followed by the Thue-Morse coding by c0/c1, starting at ``offset``."""
    if g.k != 1:
        raise NotAOneGraph("Thue-Morse paths are only provided for 1-graphs")
    w = c0.rng
    if c0 == c1 or len(c0.edges) != len(c1.edges) or not c0.edges:
        raise ValueError("need two distinct return paths of equal positive length")
    if not (c0.src == c1.src == c1.rng == w == c0.src):
        raise ValueError("code paths must be return paths at one vertex")
    start = g.edges[_tm_edge((c0, c1), offset)].rng
    if lead is None:
        lead = g.vertex(start)
    if lead.src != start:
        raise NotComposable(f"s({lead}) != start of the coded tail")
    return _tm_canonical(g, ThueMorsePath(lead, offset, (c0, c1)))


def _tm_canonical(g: KGraph, x: ThueMorsePath) -> ThueMorsePath:
    edges = list(x.lead.edges)
    off = x.offset
    while edges and off > 0 and edges[-1] == _tm_edge(x.code, off - 1):
        edges.pop()
        off -= 1
    lead = g.path(edges) if edges else g.vertex(g.edges[_tm_edge(x.code, off)].rng)
    return ThueMorsePath(lead, off, x.code)


def _tm_edges(x: ThueMorsePath, n: int) -> list:
    out = list(x.lead.edges[:n])
    j = x.offset
    while len(out) < n:
        out.append(_tm_edge(x.code, j))
        j += 1
    return out


# -- generic operations ----------------------------------------------------------------------


def range_of(x: InfinitePath) -> str:
    return x.rng


def prefix(g: KGraph, x: InfinitePath, n) -> Path:
    """``x(0, n)``."""
    n = tuple(n)
    if isinstance(x, ThueMorsePath):
        if n[0] == 0:
            return g.vertex(x.rng)
        return g.path(_tm_edges(x, n[0]))
    if deg.leq(n, x.head.degree):
        return g.factorize(x.head, n)[0]
    w = _long_word(g, x.head, x.cycle, n)
    return g.factorize(w, n)[0]


def shift(g: KGraph, x: InfinitePath, p) -> InfinitePath:
    """``sigma^p(x)``."""
    p = tuple(p)
    if deg.is_zero(p):
        return x
    if isinstance(x, ThueMorsePath):
        m = p[0]
        lead = x.lead.edges
        if m <= len(lead):
            rest = lead[m:]
            off = x.offset
        else:
            rest = ()
            off = x.offset + m - len(lead)
        start = g.edges[_tm_edge(x.code, off)].rng
        new_lead = g.path(rest) if rest else g.vertex(start)
        return _tm_canonical(g, ThueMorsePath(new_lead, off, x.code))
    w = _long_word(g, x.head, x.cycle, p)
    rest = g.factorize(w, p)[1]
    return ep_path(g, rest, x.cycle)


def prepend(g: KGraph, nu: Path, x: InfinitePath) -> InfinitePath:
    """``nu x``; requires ``s(nu) = r(x)``."""
    if nu.src != x.rng:
        raise NotComposable(f"s({nu})={nu.src} but r(x)={x.rng}")
    if nu.is_vertex:
        return x
    if isinstance(x, ThueMorsePath):
        return _tm_canonical(g, ThueMorsePath(g.compose(nu, x.lead), x.offset, x.code))
    return ep_path(g, g.compose(nu, x.head), x.cycle)


def ep_equal(g: KGraph, x: InfinitePath, y: InfinitePath) -> bool:
    return x == y


def default_bound(g: KGraph, x: InfinitePath):
    """``d(head) + 2 d(cycle)``; for coded aperiodic paths, lead length plus two code blocks."""
    if isinstance(x, EPPath):
        return deg.add(x.head.degree, deg.scale(2, x.cycle.degree))
    return (len(x.lead.edges) + 2 * len(x.code[0].edges),)


def prefixes_agree(g: KGraph, x: InfinitePath, y: InfinitePath, bound) -> bool:
    """Brute comparison of x(0,n) and y(0,n) for every n <= bound."""
    if x.rng != y.rng:
        return False
    return all(prefix(g, x, n) == prefix(g, y, n) for n in deg.box(deg.zero(g.k), bound))


def in_cylinder(g: KGraph, x: InfinitePath, mu: Path) -> bool:
    return prefix(g, x, mu.degree) == mu


# -- F sets and regularity ---------------------------------------------------------------------


def in_F(g: KGraph, x: InfinitePath, alpha: Path, beta: Path) -> bool:
    """x extends alpha and beta and sigma^{d(alpha)} x = sigma^{d(beta)} x."""
    if alpha == beta:
        raise PreconditionViolated("F is only defined for alpha != beta")
    if not (in_cylinder(g, x, alpha) and in_cylinder(g, x, beta)):
        return False
    return shift(g, x, alpha.degree) == shift(g, x, beta.degree)


@dataclass(frozen=True)
class InteriorResult:
    found: bool
    n: tuple | None = None


def cylinder_inside_F(g: KGraph, mu: Path, alpha: Path, beta: Path) -> bool:
    """Z(mu) is contained in F_{alpha,beta}."""
    if not (deg.leq(alpha.degree, mu.degree) and deg.leq(beta.degree, mu.degree)):
        return False
    if g.factorize(mu, alpha.degree)[0] != alpha or g.factorize(mu, beta.degree)[0] != beta:
        return False
    n = mu.degree
    return cycline_decide(g, g.segment(mu, alpha.degree, n), g.segment(mu, beta.degree, n))


def in_interior_F(g: KGraph, x: InfinitePath, alpha: Path, beta: Path, bound) -> InteriorResult:
    """Search n in [d(alpha) v d(beta), that v bound] for Z(x(0,n)) inside F_{alpha,beta}.

    The smallest witness in (total degree, lexicographic) order is returned.
    """
    if not in_F(g, x, alpha, beta):
        raise PreconditionViolated(f"x={x} is not in F_({alpha},{beta})")
    J = deg.join(alpha.degree, beta.degree)
    top = deg.join(J, tuple(bound))
    if not cylinder_inside_F(g, prefix(g, x, top), alpha, beta):
        return InteriorResult(False)
    for n in deg.box(J, top):
        if cylinder_inside_F(g, prefix(g, x, n), alpha, beta):
            return InteriorResult(True, n)
    return InteriorResult(True, top)  # pragma: no cover - monotonicity guarantees an earlier hit


@dataclass
class InteriorDecision:
    interior: bool
    n: tuple | None = None
    refutation: dict | None = None


def interior_decide(g: KGraph, x: EPPath, p, q, limit: int = 10_000, minimal: bool = False) -> InteriorDecision:
    """Exact decision of x in int(F_{x(0,p), x(0,q)}) for an agreement pair (p, q).

    Along ``n_t = d(head) + t d(cycle)`` the pair ``(x(p,n_t), x(q,n_t))``
    grows by appending the cycle on both sides.  Its set of bad tails is
    fixed by the one-step unfolding signature, so once a signature repeats
    without the pair becoming cycline, no later n works either and x lies on
    the boundary of F.  With ``minimal`` the reported n is the smallest
    cylinder witness instead of the first n_t that works.
    """
    p, q = tuple(p), tuple(q)
    J = deg.join(p, q)
    head, cyc = x.head, x.cycle
    t = 0
    for j, h, c in zip(J, head.degree, cyc.degree):
        if j > h:
            t = max(t, -(-(j - h) // c))
    n = deg.add(head.degree, deg.scale(t, cyc.degree))
    full = prefix(g, x, n)
    A = g.segment(full, p, n)
    B = g.segment(full, q, n)
    table = gfp_table(g, deg.sub(A.degree, B.degree))
    seen = set()
    for _ in range(limit):
        steps = unfold(g, A, B)
        sig = tuple((ok, d if ok else None) for _, ok, d in steps)
        bad = [(gam, ok, d) for gam, ok, d in steps if not ok or d not in table]
        if not bad:
            if minimal:
                n = in_interior_F(g, x, prefix(g, x, p), prefix(g, x, q), n).n
            return InteriorDecision(True, n)
        if sig in seen:
            gam, ok, _ = bad[0]
            return InteriorDecision(
                False,
                refutation={"n": n, "extension": str(gam), "reason": "prefix" if not ok else "derived pair not cycline"},
            )
        seen.add(sig)
        A, B = g.compose(A, cyc), g.compose(B, cyc)
        n = deg.add(n, cyc.degree)
    return InteriorDecision(False, refutation=None)


@dataclass
class RegularityVerdict:
    status: str  # "Regular" | "NotRegular" | "Unknown"
    witnesses: list = field(default_factory=list)  # (p, q, interior)
    details: list = field(default_factory=list)


def agreement_pairs(g: KGraph, x: InfinitePath, bound) -> list[tuple]:
    """All p < q (lexicographically) within bound with sigma^p x = sigma^q x."""
    pts = list(deg.box(deg.zero(g.k), tuple(bound)))
    shifts = {n: shift(g, x, n) for n in pts}
    out = []
    for p in pts:
        for q in pts:
            if p < q and shifts[p] == shifts[q]:
                out.append((p, q))
    return out


def is_regular(g: KGraph, x: InfinitePath, bound=None) -> RegularityVerdict:
    """Classify x against every F_{alpha,beta} it meets with prefixes inside ``bound``."""
    bound = default_bound(g, x) if bound is None else tuple(bound)
    memo = g.cache.setdefault("regular", {})
    if (x, bound) in memo:
        return memo[(x, bound)]
    witnesses, details = [], []
    status = "Regular"
    for p, q in agreement_pairs(g, x, bound):
        dec = interior_decide(g, x, p, q)
        witnesses.append((p, q, dec.interior))
        if not dec.interior:
            if dec.refutation is None:
                status = "Unknown" if status == "Regular" else status
            else:
                status = "NotRegular"
                details.append({"p": p, "q": q, **dec.refutation})
    memo[(x, bound)] = RegularityVerdict(status, witnesses, details)
    return memo[(x, bound)]


def onegraph_regular_oracle(g: KGraph, x: InfinitePath) -> bool:
    """1-graph characterization: aperiodic, or the periodic tail is a return path without entry."""
    if g.k != 1:
        raise NotAOneGraph("oracle applies to 1-graphs only")
    if isinstance(x, ThueMorsePath):
        return True
    return not has_entry(g, x.cycle)


# -- constructing regular points ---------------------------------------------------------------


def diagonal_cycles(g: KGraph, v: str, max_power: int = 2) -> list[Path]:
    out = []
    for t in range(1, max_power + 1):
        out.extend(g.cycles_at(v, deg.const(g.k, t)))
    return out


def regular_point_in(g: KGraph, mu: Path, reach=None, max_power: int = 2) -> InfinitePath | None:
    """A regular infinite path in Z(mu), or None if the bounded search finds none.

    Tries ``mu gamma c^inf`` over short extensions gamma and diagonal cycles c,
    then (1-graphs) a Thue-Morse coded tail behind mu gamma.
    """
    reach = deg.const(g.k, 2) if reach is None else tuple(reach)
    exts = [g.compose(mu, gam) for n in deg.box(deg.zero(g.k), reach) for gam in g.paths_from(mu.src, n)]
    for lam in exts:
        for c in diagonal_cycles(g, lam.src, max_power):
            x = ep_path(g, lam, c)
            if is_regular(g, x).status == "Regular":
                return x
    if g.k == 1:
        for lam in exts:
            for L in range(1, max_power + 2):
                cyc = g.cycles_at(lam.src, (L,))
                if len(cyc) >= 2:
                    return tm_path(g, cyc[0], cyc[1], lead=lam)
    return None


def parse_infinite(g: KGraph, data: dict) -> InfinitePath:
    """Literal ``{"head": [...], "cycle": [...]}`` or ``{"lead": [...], "offset": n, "code": [[...], [...]]}``."""
    if "cycle" in data:
        extra = set(data) - {"head", "cycle"}
        if extra:
            raise ValueError(f"unknown fields {sorted(extra)}")
        cycle = g.path(data["cycle"])
        head = g.path(data["head"]) if data.get("head") else None
        return ep_path(g, head, cycle)
    if "code" in data:
        extra = set(data) - {"lead", "offset", "code"}
        if extra:
            raise ValueError(f"unknown fields {sorted(extra)}")
        c0, c1 = (g.path(c) for c in data["code"])
        lead = g.path(data["lead"]) if data.get("lead") else None
        return tm_path(g, c0, c1, lead=lead, offset=int(data.get("offset", 0)))
    raise ValueError("infinite path literal needs 'cycle' or 'code'")
