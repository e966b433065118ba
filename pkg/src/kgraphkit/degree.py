"""Degrees are plain integer tuples; elements of N^k (or Z^k for differences)."""

from __future__ import annotations

import itertools
from typing import Iterator, Sequence

Degree = tuple


def zero(k: int) -> Degree:
    return (0,) * k


def ones(k: int) -> Degree:
    return (1,) * k


def unit(k: int, i: int) -> Degree:
    """The generator epsilon_i, with colors numbered from 1."""
    return tuple(1 if j == i - 1 else 0 for j in range(k))


def const(k: int, c: int) -> Degree:
    return (c,) * k


def add(m: Sequence[int], n: Sequence[int]) -> Degree:
    return tuple(a + b for a, b in zip(m, n))


def sub(m: Sequence[int], n: Sequence[int]) -> Degree:
    return tuple(a - b for a, b in zip(m, n))


def scale(t: int, m: Sequence[int]) -> Degree:
    return tuple(t * a for a in m)


def neg(m: Sequence[int]) -> Degree:
    return tuple(-a for a in m)


def leq(m: Sequence[int], n: Sequence[int]) -> bool:
    return all(a <= b for a, b in zip(m, n))


def join(m: Sequence[int], n: Sequence[int]) -> Degree:
    return tuple(max(a, b) for a, b in zip(m, n))


def meet(m: Sequence[int], n: Sequence[int]) -> Degree:
    return tuple(min(a, b) for a, b in zip(m, n))


def pos(c: Sequence[int]) -> Degree:
    return tuple(max(a, 0) for a in c)


def negpart(c: Sequence[int]) -> Degree:
    return tuple(max(-a, 0) for a in c)


def total(m: Sequence[int]) -> int:
    return sum(m)


def is_zero(m: Sequence[int]) -> bool:
    return not any(m)


def box(lo: Sequence[int], hi: Sequence[int]) -> Iterator[Degree]:
    """All n with lo <= n <= hi, ordered by total length then lexicographically."""
    if not leq(lo, hi):
        return iter(())
    pts = itertools.product(*(range(a, b + 1) for a, b in zip(lo, hi)))
    return iter(sorted(pts, key=lambda n: (sum(n), n)))


def color_word(n: Sequence[int]) -> list[int]:
    """Colors of a normal-form path of degree n: n_1 ones, then n_2 twos, ..."""
    word = []
    for i, c in enumerate(n, start=1):
        word.extend([i] * c)
    return word


def parse(text: str) -> Degree:
    """Parse ``"1,2"`` or ``"3"`` into a tuple."""
    parts = [p for p in text.replace(" ", "").split(",") if p]
    return tuple(int(p) for p in parts)


def fit(text_or_deg, k: int) -> Degree:
    """Broadcast a scalar-like degree to length k; pass tuples of length k through."""
    d = parse(text_or_deg) if isinstance(text_or_deg, str) else tuple(text_or_deg)
    if len(d) == 1 and k != 1:
        d = d * k
    if len(d) != k:
        raise ValueError(f"degree {d} does not have {k} coordinates")
    return d
