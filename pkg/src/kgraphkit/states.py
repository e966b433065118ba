"""The states phi_x, psi_{z,x} and e_{z,x} on generator combinations, and the sets H_x."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import degree as deg
from .combos import GeneratorCombo, character, character_exact, random_combo
from .cycline import cycline_decide
from .errors import NonCyclineTerm, UnsafeDomain
from .infinite import InfinitePath, agreement_pairs, in_cylinder, in_F, prefix
from .kgraph import KGraph
from .model import BasisSet, act_combo, build_basis, eval_upsilon, is_special

TOL = 1e-9


def _term_weight(g: KGraph, x: InfinitePath, a, b) -> bool:
    if a == b:
        return a.rng == x.rng and in_cylinder(g, x, a)
    return in_F(g, x, a, b)


def phi_eval(g: KGraph, x: InfinitePath, c: GeneratorCombo) -> complex:
    """``phi_x``: P_a -> [x in Z(a)], S_a S_b^* -> [x in F_{a,b}], extended linearly."""
    return complex(sum(coef for (a, b), coef in c.terms.items() if _term_weight(g, x, a, b)))


def psi_eval(g: KGraph, z, x: InfinitePath, c: GeneratorCombo) -> complex:
    """``psi_{z,x}``: like phi_x but off-diagonal terms pick up ``h_{d(a)-d(b)}(z)``."""
    out = 0j
    for (a, b), coef in c.terms.items():
        if _term_weight(g, x, a, b):
            out += coef * (1 if a == b else character(deg.sub(a.degree, b.degree), z))
    return out


def psi_exact(g: KGraph, turns, x: InfinitePath, c: GeneratorCombo) -> dict:
    """psi at ``z_i = exp(2 pi i turns_i)`` as an exact {turn: coefficient} expansion."""
    out: dict = {}
    for (a, b), coef in c.terms.items():
        if _term_weight(g, x, a, b):
            t = character_exact(deg.sub(a.degree, b.degree), turns) if a != b else Fraction(0)
            out[t] = out.get(t, 0) + coef
    return {t: v for t, v in sorted(out.items()) if v != 0}


def e_eval(g: KGraph, z, x: InfinitePath, c: GeneratorCombo) -> complex:
    """``e_{z,x}``: psi restricted to combinations of cycline generators."""
    for a, b in c.terms:
        if a != b and not cycline_decide(g, a, b):
            raise NonCyclineTerm(f"term ({a}, {b}) is not cycline")
    return psi_eval(g, z, x, c)


# -- H_x ---------------------------------------------------------------------------------------


@dataclass
class HxSet:
    diffs: frozenset
    bound: tuple
    variant: str
    witnesses: dict


def compute_Hx(g: KGraph, x: InfinitePath, bound, variant: str = "H", basis: BasisSet | None = None) -> HxSet:
    """Degree differences d(a)-d(b) over pairs a != b with x in F_{a,b}, d(a), d(b) <= bound.

    ``Hc`` keeps only cycline pairs, ``Hs`` only pairs with T_a = T_b on
    ``basis`` (by default the basis generated by x itself).
    """
    if variant not in ("H", "Hc", "Hs"):
        raise ValueError(f"unknown variant {variant!r}")
    bound = deg.fit(bound, g.k)
    if variant == "Hs" and basis is None:
        basis = build_basis(g, [x], check=False)
    witnesses = {deg.zero(g.k): None}
    # x in F_{a,b} forces a = x(0,p), b = x(0,q) with sigma^p x = sigma^q x
    for p, q in agreement_pairs(g, x, bound):
        for pp, qq in ((p, q), (q, p)):
            a, b = prefix(g, x, pp), prefix(g, x, qq)
            c = deg.sub(pp, qq)
            if c in witnesses:
                continue
            if variant != "H" and not cycline_decide(g, a, b):
                continue
            if variant == "Hs" and not is_special(g, a, b, basis):
                continue
            witnesses[c] = (str(a), str(b))
    return HxSet(frozenset(witnesses), bound, variant, witnesses)


# -- equivalence and positivity -------------------------------------------------------------------


def panel(g: KGraph, x: InfinitePath, bound, seed: int = 0, extra: int = 20) -> list[GeneratorCombo]:
    """Generators S_a S_b^* for the agreement pairs of x, plus seeded random combos."""
    bound = deg.fit(bound, g.k)
    out = []
    for p, q in agreement_pairs(g, x, bound):
        out.append(GeneratorCombo.gen(g, prefix(g, x, p), prefix(g, x, q)))
        out.append(GeneratorCombo.gen(g, prefix(g, x, q), prefix(g, x, p)))
    rng = np.random.default_rng(seed)
    out.extend(random_combo(g, rng, bound) for _ in range(extra))
    return out


@dataclass
class EquivReport:
    equivalent: bool
    panel_agrees: bool
    cycline_panel_agrees: bool
    hx: list

    @property
    def consistent(self) -> bool:
        return self.equivalent == self.panel_agrees == self.cycline_panel_agrees


def states_equiv_report(g: KGraph, z1, z2, x: InfinitePath, bound, tol: float = TOL, seed: int = 0) -> EquivReport:
    H = compute_Hx(g, x, bound, "H")
    eq = all(abs(character(c, z1) - character(c, z2)) <= tol for c in H.diffs)
    combos = panel(g, x, bound, seed)
    same = all(abs(psi_eval(g, z1, x, c) - psi_eval(g, z2, x, c)) <= tol for c in combos)
    cyc = []
    for c in combos:
        keep = {ab: v for ab, v in c.terms.items() if ab[0] == ab[1] or cycline_decide(g, *ab)}
        cyc.append(GeneratorCombo(g, keep))
    same_e = all(abs(e_eval(g, z1, x, c) - e_eval(g, z2, x, c)) <= tol for c in cyc)
    return EquivReport(eq, same, same_e, sorted(H.diffs))


def states_equiv(g: KGraph, z1, z2, x: InfinitePath, bound, tol: float = TOL) -> bool:
    """``psi_{z1,x} = psi_{z2,x}``, decided by ``h(z1) = h(z2)`` for every h in H_x."""
    return states_equiv_report(g, z1, z2, x, bound, tol).equivalent


def positivity_check(g: KGraph, x: InfinitePath, c: GeneratorCombo, B: BasisSet, tol: float = TOL) -> dict:
    """``phi_x(c^* c)`` three ways: the state formula, the matrix entry of upsilon(c^* c), and ``|c delta_x|^2``."""
    if x not in B:
        raise UnsafeDomain(f"{x} is not a basis member")
    cc = c.adjoint() * c
    formula = phi_eval(g, x, cc)
    up = eval_upsilon(cc, B)
    j = B.index[x]
    if j in up.overflow:
        raise UnsafeDomain(f"c^*c moves {x} outside the basis")
    entry = complex(up.matrix[j, j])
    vec = act_combo(g, c, x)
    norm2 = float(sum(abs(v) ** 2 for v in vec.values()))
    ok = abs(formula - entry) <= tol and abs(formula - norm2) <= tol and formula.real >= -tol and abs(formula.imag) <= tol
    return {"phi": formula, "matrix": entry, "norm2": norm2, "ok": ok}


def collision_classes(g: KGraph, x: InfinitePath, grid, bound, tol: float = TOL) -> list[list[int]]:
    """Group grid indices whose points give the same psi_{z,x}, i.e. agree on every h in H_x."""
    diffs = sorted(compute_Hx(g, x, bound, "H").diffs)
    classes: list[list[int]] = []
    reps: list[list[complex]] = []
    for i, z in enumerate(grid):
        sig = [character(c, z) for c in diffs]
        for cls, r in zip(classes, reps):
            if all(abs(s - t) <= tol for s, t in zip(sig, r)):
                cls.append(i)
                break
        else:
            classes.append([i])
            reps.append(sig)
    return classes
