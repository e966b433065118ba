"""Finite linear combinations of standard generators ``S_alpha S_beta^*``."""

from __future__ import annotations

import cmath
from fractions import Fraction

from . import degree as deg
from .cycline import cycline_decide, ext
from .errors import NotComposable
from .kgraph import KGraph, Path


def character(n, z) -> complex:
    """``h_n(z) = prod z_i^{n_i}`` for integer n (negative powers allowed)."""
    out = 1 + 0j
    for ni, zi in zip(n, z):
        out *= complex(zi) ** ni
    return out


def character_exact(n, turns) -> Fraction:
    """Exact h_n at ``z_i = exp(2 pi i t_i)``; returns the total turn in [0, 1)."""
    return sum((Fraction(t) * ni for ni, t in zip(n, turns)), Fraction(0)) % 1


def from_turns(turns) -> tuple:
    return tuple(cmath.exp(2j * cmath.pi * float(t)) for t in turns)


class GeneratorCombo:
    """``sum coeff * S_alpha S_beta^*``; zero coefficients are never stored."""

    __slots__ = ("g", "terms")

    def __init__(self, g: KGraph, terms=None):
        self.g = g
        self.terms: dict = {}
        for (a, b), c in (terms or {}).items():
            self._add(a, b, c)

    def _add(self, a: Path, b: Path, c):
        if a.src != b.src:
            raise NotComposable(f"s({a}) != s({b})")
        val = self.terms.get((a, b), 0) + c
        if val == 0:
            self.terms.pop((a, b), None)
        else:
            self.terms[(a, b)] = val

    # -- constructors ---------------------------------------------------------------

    @classmethod
    def gen(cls, g: KGraph, alpha: Path, beta: Path, coeff=1):
        return cls(g, {(alpha, beta): coeff})

    @classmethod
    def P(cls, g: KGraph, alpha: Path, coeff=1):
        return cls.gen(g, alpha, alpha, coeff)

    @classmethod
    def S(cls, g: KGraph, alpha: Path, coeff=1):
        return cls.gen(g, alpha, g.vertex(alpha.src), coeff)

    @classmethod
    def zero(cls, g: KGraph):
        return cls(g)

    # -- algebra ------------------------------------------------------------------------

    def __add__(self, other):
        out = GeneratorCombo(self.g, self.terms)
        for (a, b), c in other.terms.items():
            out._add(a, b, c)
        return out

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, s):
        return GeneratorCombo(self.g, {ab: c * s for ab, c in self.terms.items()})

    def __rmul__(self, s):
        return self.scale(s)

    def __mul__(self, other):
        if not isinstance(other, GeneratorCombo):
            return self.scale(other)
        out = GeneratorCombo(self.g)
        for (a, b), c1 in self.terms.items():
            for (m, n), c2 in other.terms.items():
                for (x, y), c3 in product_terms(self.g, a, b, m, n).items():
                    out._add(x, y, c1 * c2 * c3)
        return out

    def adjoint(self):
        return GeneratorCombo(self.g, {(b, a): complex(c).conjugate() if isinstance(c, complex) else c
                                       for (a, b), c in self.terms.items()})

    def __eq__(self, other):
        return isinstance(other, GeneratorCombo) and self.terms == other.terms

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = [f"{c}*S[{a}]S[{b}]^*" for (a, b), c in sorted(self.terms.items())]
        return " + ".join(parts)

    # -- classification -------------------------------------------------------------------

    def is_diagonal(self) -> bool:
        """All terms are projections P_alpha (the algebra D)."""
        return all(a == b for a, b in self.terms)

    def is_cycline(self) -> bool:
        """All terms come from cycline pairs (the algebra M)."""
        return all(cycline_decide(self.g, a, b) for a, b in self.terms)

    def to_json(self):
        return [{"alpha": list(a.edges) or a.rng, "beta": list(b.edges) or b.rng,
                 "re": complex(c).real, "im": complex(c).imag} for (a, b), c in sorted(self.terms.items())]


def product_terms(g: KGraph, a: Path, b: Path, m: Path, n: Path) -> dict:
    """``S_a S_b^* S_m S_n^* = sum S_{a gam} S_{n eta}^*`` over ``b gam = m eta`` of degree ``d(b) v d(m)``."""
    if b.src != a.src or m.src != n.src:
        raise NotComposable("standard generators need s(alpha) = s(beta)")
    if b.rng != m.rng:
        return {}
    J = deg.join(b.degree, m.degree)
    common = ext(g, b, J) & ext(g, m, J)
    out = {}
    for lam in sorted(common):
        gam = g.factorize(lam, b.degree)[1]
        eta = g.factorize(lam, m.degree)[1]
        key = (g.compose(a, gam), g.compose(n, eta))
        out[key] = out.get(key, 0) + 1
    return out


def gauge_rotate(c: GeneratorCombo, z) -> GeneratorCombo:
    """Multiply the coefficient of S_a S_b^* by ``h_{d(a)-d(b)}(z)``."""
    return GeneratorCombo(c.g, {(a, b): v * character(deg.sub(a.degree, b.degree), z)
                                for (a, b), v in c.terms.items()})


def combo_from_json(g: KGraph, data: list) -> GeneratorCombo:
    """``[{"alpha": [...] or vertex, "beta": ..., "re": x, "im": y}, ...]``."""
    out = GeneratorCombo(g)
    for t in data:
        a, b = g.path(t["alpha"]), g.path(t["beta"])
        out._add(a, b, complex(t.get("re", 1), t.get("im", 0)))
    return out


def random_combo(g: KGraph, rng, bound, terms: int = 3) -> GeneratorCombo:
    """Seeded random combo of ``terms`` standard generators with degrees <= bound.

    Coefficients are small Gaussian integers so that products stay exact.
    """
    paths = g.paths_upto(bound)
    by_src: dict = {}
    for p in paths:
        by_src.setdefault(p.src, []).append(p)
    out = GeneratorCombo(g)
    while len(out) < terms:
        a = paths[rng.integers(len(paths))]
        pool = by_src[a.src]
        b = pool[rng.integers(len(pool))]
        c = complex(int(rng.integers(-2, 3)), int(rng.integers(-2, 3)))
        if c != 0 and (a, b) not in out.terms:
            out._add(a, b, c)
    return out
