"""Finite sparse models of the aperiodic and twisted representations.

Basis vectors are regular infinite paths.  Generators act symbolically,
``S_a S_b^* delta_x = delta_{a sigma^{d(b)} x}`` when x extends b and 0
otherwise, and the result is written into a matrix over a finite
:class:`BasisSet`.  A column whose image would leave the basis is recorded in
``overflow`` instead of being silently truncated, so every identity is checked
only where the truncation is exact.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from . import degree as deg
from .combos import GeneratorCombo, character
from .cycline import cycline_decide, enumerate_cycline
from .errors import NotCycline, SeedNotRegular, UnsafeDomain
from .infinite import InfinitePath, ThueMorsePath, in_cylinder, is_regular, prepend, shift, sort_key
from .kgraph import KGraph, Path


# -- basis -------------------------------------------------------------------------------------


@dataclass
class BasisSet:
    g: KGraph
    members: list
    index: dict
    safe: frozenset
    prepend_bound: tuple
    shift_bound: tuple | None
    rejected: list = field(default_factory=list)

    def __len__(self):
        return len(self.members)

    def __contains__(self, x):
        return x in self.index

    def __iter__(self):
        return iter(self.members)


def shift_orbit(g: KGraph, x: InfinitePath, limit=None) -> list:
    """Closure of {x} under the shifts sigma^{e_i}; ``limit`` caps the total shift for coded paths."""
    if limit is None and isinstance(x, ThueMorsePath):
        limit = (2 * len(x.code[0].edges),)
    seen = {x: deg.zero(g.k)}
    todo = [x]
    while todo:
        y = todo.pop()
        for i in range(1, g.k + 1):
            step = deg.add(seen[y], deg.unit(g.k, i))
            if limit is not None and not deg.leq(step, limit):
                continue
            z = shift(g, y, deg.unit(g.k, i))
            if z not in seen:
                seen[z] = step
                todo.append(z)
    return sorted(seen, key=sort_key)


def build_basis(g: KGraph, seeds, prepend_bound=None, shift_bound=None, check: bool = True) -> BasisSet:
    """Shift closure of the seeds, then every prepend by paths of degree <= prepend_bound.

    With ``check`` each candidate is classified by :func:`is_regular`; anything
    not verified Regular is dropped and listed in ``rejected``.
    """
    prepend_bound = deg.const(g.k, 2) if prepend_bound is None else deg.fit(prepend_bound, g.k)
    shift_bound = None if shift_bound is None else deg.fit(shift_bound, g.k)
    verdicts = {}

    def regular(x):
        if x not in verdicts:
            verdicts[x] = is_regular(g, x).status if check else "Regular"
        return verdicts[x]

    for s in seeds:
        if regular(s) != "Regular":
            raise SeedNotRegular(f"seed {s} has verdict {verdicts[s]}")
    core = set()
    for s in seeds:
        core.update(shift_orbit(g, s, shift_bound))
    cands = set(core)
    nus = g.paths_upto(prepend_bound)
    for y in core:
        for nu in nus:
            if nu.src == y.rng:
                cands.add(prepend(g, nu, y))
    members, rejected = [], []
    for x in sorted(cands, key=sort_key):
        v = regular(x)
        if v == "Regular":
            members.append(x)
        else:
            rejected.append({"path": str(x), "verdict": v})
    index = {x: i for i, x in enumerate(members)}
    safe = frozenset(
        i for i, x in enumerate(members)
        if all(prepend(g, nu, x) in index for nu in nus if nu.src == x.rng)
    )
    return BasisSet(g, members, index, safe, prepend_bound, shift_bound, rejected)


# -- sparse operators ------------------------------------------------------------------------------


@dataclass
class SparseOp:
    """Complex sparse matrix over a basis; ``overflow`` columns are not modeled exactly."""

    matrix: sp.csr_matrix
    overflow: frozenset = frozenset()

    @property
    def shape(self):
        return self.matrix.shape

    @property
    def exact_columns(self) -> list[int]:
        return [j for j in range(self.shape[1]) if j not in self.overflow]

    def __matmul__(self, other: "SparseOp") -> "SparseOp":
        m = (self.matrix @ other.matrix).tocsr()
        bad = set(other.overflow)
        if self.overflow:
            rows = sorted(self.overflow)
            hit = other.matrix[rows, :].tocsc()
            bad.update(int(j) for j in np.unique(hit.nonzero()[1]))
        return SparseOp(m, frozenset(bad))

    def __add__(self, other: "SparseOp") -> "SparseOp":
        return SparseOp((self.matrix + other.matrix).tocsr(), self.overflow | other.overflow)

    def __sub__(self, other: "SparseOp") -> "SparseOp":
        return SparseOp((self.matrix - other.matrix).tocsr(), self.overflow | other.overflow)

    def scale(self, s) -> "SparseOp":
        return SparseOp((self.matrix * s).tocsr(), self.overflow)

    def toarray(self) -> np.ndarray:
        return self.matrix.toarray()

    def restricted(self, cols=None) -> np.ndarray:
        cols = self.exact_columns if cols is None else list(cols)
        return self.matrix[:, cols].toarray()

    def max_abs(self, cols=None) -> float:
        a = self.restricted(cols)
        return float(np.abs(a).max()) if a.size else 0.0

    def is_zero(self, tol: float = 0.0, cols=None) -> bool:
        return self.max_abs(cols) <= tol

    def equal_on(self, other: "SparseOp", cols, tol: float = 0.0) -> bool:
        return (self - other).max_abs(cols) <= tol

    def coo_text(self) -> str:
        """One ``row col re im`` line per stored entry, sorted."""
        m = self.matrix.tocoo()
        rows = sorted(zip(m.row.tolist(), m.col.tolist(), m.data.tolist()))
        return "".join(f"{r} {c} {v.real:.17g} {v.imag:.17g}\n" for r, c, v in rows if v != 0)


def _empty(n: int):
    return sp.lil_matrix((n, n), dtype=complex)


def act(g: KGraph, alpha: Path, beta: Path, x: InfinitePath):
    """``S_alpha S_beta^* delta_x`` as a path (or None for 0)."""
    if x.rng != beta.rng or not in_cylinder(g, x, beta):
        return None
    return prepend(g, alpha, shift(g, x, beta.degree))


def act_combo(g: KGraph, c: GeneratorCombo, x: InfinitePath) -> dict:
    """``c delta_x`` as {path: coefficient}; independent of any basis."""
    out: dict = {}
    for (a, b), coef in c.terms.items():
        y = act(g, a, b, x)
        if y is not None:
            out[y] = out.get(y, 0) + coef
    return {y: v for y, v in out.items() if v != 0}


def _term_op(B: BasisSet, alpha: Path, beta: Path, coef=1) -> tuple:
    m = _empty(len(B))
    bad = set()
    for j, x in enumerate(B.members):
        y = act(B.g, alpha, beta, x)
        if y is None:
            continue
        i = B.index.get(y)
        if i is None:
            bad.add(j)
        else:
            m[i, j] += coef
    return m, bad


def op_T(alpha: Path, B: BasisSet) -> SparseOp:
    """``T_alpha``: delta_x -> delta_{alpha x} for r(x) = s(alpha)."""
    m, bad = _term_op(B, alpha, B.g.vertex(alpha.src))
    return SparseOp(m.tocsr(), frozenset(bad))


def op_Tstar(alpha: Path, B: BasisSet) -> SparseOp:
    """``T_alpha^*``: delta_x -> delta_{sigma^{d(alpha)} x} for x in Z(alpha)."""
    m, bad = _term_op(B, B.g.vertex(alpha.src), alpha)
    return SparseOp(m.tocsr(), frozenset(bad))


def op_Q(alpha: Path, B: BasisSet) -> SparseOp:
    """Diagonal projection onto the basis vectors in Z(alpha)."""
    diag = [1.0 + 0j if x.rng == alpha.rng and in_cylinder(B.g, x, alpha) else 0j for x in B.members]
    return SparseOp(sp.diags(diag, format="csr", dtype=complex))


def eval_upsilon(c: GeneratorCombo, B: BasisSet, strict: bool = False) -> SparseOp:
    """``upsilon(c) = sum coeff T_alpha T_beta^*`` over the basis."""
    m = _empty(len(B))
    bad = set()
    for (a, b), coef in c.terms.items():
        mm, bb = _term_op(B, a, b, coef)
        m += mm
        bad |= bb
    if strict and bad:
        raise UnsafeDomain(f"{len(bad)} column(s) leave the basis, e.g. {B.members[min(bad)]}")
    return SparseOp(m.tocsr(), frozenset(bad))


@dataclass
class GradedOp:
    """``sum_n h_n (x) A_n`` with exact Laurent components."""

    components: dict  # degree difference -> SparseOp

    @property
    def overflow(self) -> frozenset:
        out = frozenset()
        for op in self.components.values():
            out |= op.overflow
        return out

    def nonzero_components(self, tol: float = 0.0) -> list:
        cols = None
        bad = self.overflow
        out = []
        for n in sorted(self.components):
            op = self.components[n]
            cols = [j for j in range(op.shape[1]) if j not in bad]
            if not op.is_zero(tol, cols):
                out.append(n)
        return out

    def evaluate(self, z) -> SparseOp:
        """The operator at a point z of the torus: ``sum h_n(z) A_n``."""
        out = None
        for n in sorted(self.components):
            term = self.components[n].scale(character(n, z))
            out = term if out is None else out + term
        return out

    def scaled(self, z) -> "GradedOp":
        return GradedOp({n: op.scale(character(n, z)) for n, op in self.components.items()})

    def equal_on(self, other: "GradedOp", tol: float = 1e-9) -> bool:
        keys = set(self.components) | set(other.components)
        bad = self.overflow | other.overflow
        for n in keys:
            a, b = self.components.get(n), other.components.get(n)
            ref = a if a is not None else b
            cols = [j for j in range(ref.shape[1]) if j not in bad]
            if a is None or b is None:
                if not ref.is_zero(tol, cols):
                    return False
            elif not a.equal_on(b, cols, tol):
                return False
        return True


def eval_Upsilon(c: GeneratorCombo, B: BasisSet, strict: bool = False) -> GradedOp:
    groups: dict = {}
    for (a, b), coef in c.terms.items():
        groups.setdefault(deg.sub(a.degree, b.degree), {})[(a, b)] = coef
    comps = {n: eval_upsilon(GeneratorCombo(c.g, t), B, strict) for n, t in groups.items()}
    return GradedOp(comps)


# -- Cuntz-Krieger relations -------------------------------------------------------------------


def verify_CK(B: BasisSet, n, tol: float = 0.0) -> dict:
    """(CK1) on the exactly modeled columns and (CK2) on the whole basis, at degree n.

    (CK2) is taken in the form ``T_v = sum_{lam in v Lambda^n} T_lam T_lam^*``.
    """
    g = B.g
    n = deg.fit(n, g.k)
    paths = g.paths_of_degree(n)
    ck1, ck2 = [], []
    ck1_checked = 0
    Ts = {p: op_T(p, B) for p in paths}
    Tss = {p: op_Tstar(p, B) for p in paths}
    Qs = {p: op_Q(p, B) for p in paths}
    for mu in paths:
        for nu in paths:
            lhs = Tss[mu] @ Ts[nu]
            rhs = op_Q(g.vertex(mu.src), B) if mu == nu else None
            cols = lhs.exact_columns
            ck1_checked += len(cols)
            diff = lhs if rhs is None else lhs - rhs
            a = diff.restricted(cols)
            for jj in np.nonzero(np.abs(a).max(axis=0) > tol)[0] if a.size else []:
                ck1.append({"mu": str(mu), "nu": str(nu), "n": n, "column": str(B.members[cols[jj]])})
    for v in g.vertices:
        total = None
        for lam in g.paths_from(v, n):
            total = Qs[lam] if total is None else total + Qs[lam]
        diff = total - op_Q(g.vertex(v), B)
        a = diff.toarray()
        for j in np.nonzero(np.abs(a).max(axis=0) > tol)[0] if a.size else []:
            ck2.append({"vertex": v, "n": n, "column": str(B.members[j])})
    return {
        "n": n,
        "ck1_violations": ck1,
        "ck2_violations": ck2,
        "ck1_checked_columns": ck1_checked,
        "ck2_checked_columns": len(B) * len(g.vertices),
    }


def partial_isometry_defect(alpha: Path, B: BasisSet) -> float:
    """max |T T^* T - T| on exactly modeled columns."""
    T, Ts = op_T(alpha, B), op_Tstar(alpha, B)
    return (T @ Ts @ T - T).max_abs()


# -- probes ---------------------------------------------------------------------------------------


def is_special(g: KGraph, alpha: Path, beta: Path, B: BasisSet) -> bool:
    """``T_alpha = T_beta`` on the basis, compared symbolically (no truncation)."""
    return all(prepend(g, alpha, y) == prepend(g, beta, y) for y in B.members if y.rng == alpha.src)


def kernel_probe(g: KGraph, alpha: Path, beta: Path, B: BasisSet, tol: float = 0.0) -> dict:
    """For a nontrivial cycline pair, ``S_a S_b^* - P_a`` dies under upsilon but not under Upsilon."""
    if alpha == beta or not cycline_decide(g, alpha, beta):
        raise NotCycline(f"({alpha}, {beta}) is not a nontrivial cycline pair")
    c = GeneratorCombo.gen(g, alpha, beta) - GeneratorCombo.P(g, alpha)
    up = eval_upsilon(c, B)
    cols = up.exact_columns
    big = eval_Upsilon(c, B)
    nz = big.nonzero_components(tol)
    support = [j for j in cols if in_cylinder(g, B.members[j], alpha) and B.members[j].rng == alpha.rng]
    return {
        "pair": [str(alpha), str(beta)],
        "combo": c.to_json(),
        "upsilon_norm": float(np.linalg.norm(up.restricted(cols))) if cols else 0.0,
        "upsilon_zero": up.is_zero(tol, cols),
        "Upsilon_components": {",".join(map(str, n)): float(np.abs(big.components[n].restricted(
            [j for j in cols if j not in big.overflow])).max()) for n in nz},
        "separated": len(nz) >= 2,
        "checked_columns": len(cols),
        "support_columns": len(support),
    }


def find_kernel_pair(g: KGraph, bound) -> tuple | None:
    """Smallest nontrivial cycline pair within bound, or None (e.g. for aperiodic graphs)."""
    for a, b in enumerate_cycline(g, deg.fit(bound, g.k)):
        if a != b:
            return a, b
    return None


def commutant_check(B: BasisSet, bound, numeric_limit: int = 24) -> dict:
    """Is every matrix commuting with all ``op_Q(alpha)``, d(alpha) <= bound, diagonal?

    Combinatorial route: columns split into classes with equal cylinder
    signatures; the commutant is diagonal iff every class is a singleton.
    Numeric route (small bases): the nullspace of the stacked maps
    ``X -> Q X - X Q`` has dimension ``sum |class|^2``.
    """
    g = B.g
    alphas = g.paths_upto(deg.fit(bound, g.k))
    sig = {}
    for j, x in enumerate(B.members):
        key = tuple(a for a in alphas if a.rng == x.rng and in_cylinder(g, x, a))
        sig.setdefault(key, []).append(j)
    classes = sorted(sig.values())
    expected = sum(len(c) ** 2 for c in classes)
    N = len(B)
    nullity = None
    if N <= numeric_limit:
        eye = np.eye(N)
        blocks = []
        for a in alphas:
            Q = op_Q(a, B).toarray().real
            blocks.append(np.kron(eye, Q) - np.kron(Q.T, eye))
        M = np.vstack(blocks) if blocks else np.zeros((1, N * N))
        nullity = int(N * N - np.linalg.matrix_rank(M))
    return {
        "size": N,
        "classes": [[str(B.members[j]) for j in c] for c in classes],
        "diagonal": all(len(c) == 1 for c in classes),
        "commutant_dim": expected,
        "numeric_dim": nullity,
        "routes_agree": nullity is None or nullity == expected,
    }


def default_seeds(g: KGraph, count: int = 2, reach=None) -> list:
    """Up to ``count`` distinct regular points, one per vertex first, then in short cylinders."""
    from .infinite import regular_point_in

    reach = deg.ones(g.k) if reach is None else reach
    out = []
    candidates = [g.vertex(v) for v in g.vertices] + [p for p in g.paths_upto(reach) if not p.is_vertex]
    for mu in candidates:
        x = regular_point_in(g, mu)
        if x is not None and x not in out:
            out.append(x)
        if len(out) >= count and all(any(y.rng == v for y in out) for v in g.vertices):
            break
    return sorted(out, key=sort_key)
