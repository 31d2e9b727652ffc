"""Exact rational matrices (lists of lists of Fraction / int) and
fraction-free integer rank."""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import List, Sequence

import numpy as np

Number = Fraction | int
FMatrix = List[List[Fraction]]


class InexactError(ArithmeticError):
    pass


def frac_matrix(rows: Sequence[Sequence[Number]]) -> FMatrix:
    return [[Fraction(v) for v in r] for r in rows]


def identity(n: int) -> FMatrix:
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def matmul(a: Sequence[Sequence[Number]], b: Sequence[Sequence[Number]]) -> FMatrix:
    if len(a[0]) != len(b):
        raise ValueError("shape mismatch")
    bt = list(zip(*b))
    return [[Fraction(sum(x * y for x, y in zip(row, col))) for col in bt] for row in a]


def transpose(a: Sequence[Sequence[Number]]) -> FMatrix:
    return [list(col) for col in zip(*a)]


def inverse(a: Sequence[Sequence[Number]]) -> FMatrix:
    """Gauss-Jordan over the rationals."""
    n = len(a)
    m = [[Fraction(v) for v in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(a)]
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        m[col], m[piv] = m[piv], m[col]
        p = m[col][col]
        m[col] = [v / p for v in m[col]]
        for r in range(n):
            f = m[r][col]
            if r != col and f != 0:
                m[r] = [x - f * y for x, y in zip(m[r], m[col])]
    return [row[n:] for row in m]


def det(a: Sequence[Sequence[Number]]) -> Fraction:
    n = len(a)
    m = [[Fraction(v) for v in row] for row in a]
    out = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            out = -out
        p = m[col][col]
        out *= p
        for r in range(col + 1, n):
            f = m[r][col] / p
            if f:
                m[r] = [x - f * y for x, y in zip(m[r], m[col])]
    return out


def rank(rows: Sequence[Sequence[Number]]) -> int:
    """Rank over Q.  Rational input is cleared to integers, then reduced
    fraction-free with content removal after every step."""
    ints = [_clear_denominators(r) for r in rows]
    basis: List[tuple] = []  # (pivot column, primitive integer row)
    for v in ints:
        v = list(v)
        for col, row in basis:
            c = v[col]
            if c:
                p = row[col]
                g = gcd(p, c)
                a, b = p // g, c // g
                v = [a * x - b * y for x, y in zip(v, row)]
                v = _primitive(v)
        lead = next((j for j, x in enumerate(v) if x), None)
        if lead is not None:
            basis.append((lead, v))
            if len(basis) == len(v):
                break
    return len(basis)


def _clear_denominators(row: Sequence[Number]) -> List[int]:
    den = 1
    for v in row:
        if isinstance(v, Fraction):
            den = den * v.denominator // gcd(den, v.denominator)
    return [int(v * den) for v in row]


def _primitive(v: List[int]) -> List[int]:
    g = 0
    for x in v:
        if x:
            g = gcd(g, x)
            if g == 1:
                return v
    return [x // g for x in v] if g > 1 else v


def is_identity(m: Sequence[Sequence[Number]]) -> bool:
    return all(m[i][j] == (1 if i == j else 0) for i in range(len(m)) for j in range(len(m)))


def to_pairs(m: Sequence[Sequence[Number]]) -> List[List[List[int]]]:
    """[[num, den], ...] rows for JSON emission."""
    return [[[Fraction(v).numerator, Fraction(v).denominator] for v in row] for row in m]


def fmt(v: Number) -> str:
    v = Fraction(v)
    return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


MOD_PRIME = 2_147_483_647


def rank_mod_p(rows, p: int = MOD_PRIME) -> int:
    """Rank over F_p; a lower bound for the rational rank of an integer matrix."""
    m = np.array(rows, dtype=np.int64) % p
    if m.ndim != 2:
        return 0
    r = 0
    nrows, ncols = m.shape
    for col in range(ncols):
        if r == nrows:
            break
        nz = np.flatnonzero(m[r:, col])
        if not len(nz):
            continue
        piv = r + nz[0]
        if piv != r:
            m[[r, piv]] = m[[piv, r]]
        m[r] = m[r] * pow(int(m[r, col]), -1, p) % p
        below = np.flatnonzero(m[r + 1:, col]) + r + 1
        if len(below):
            f = m[below, col][:, None]
            m[below] = (m[below] - f * m[r]) % p
        r += 1
    return r
