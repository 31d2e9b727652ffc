"""The Euclidean representation u -> û of the subspace lattice.

Concrete model: E sits inside Z^[n] (coordinates indexed by point ids).  A
point s is stored as [n]·e_s - 1 (all-ones), so a subspace u is stored as

    coords[s] = [n]·[s ⊆ u] - |Omega(u)|,

and the bilinear form is dot(a, b) / [n].  This reproduces the Gram matrix of
the point vectors exactly (norm [n]-1, pairwise -1, sum zero) with integers.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, List, Mapping, Sequence, Tuple

import numpy as np

from . import exact
from .exact import InexactError, Number
from .graph import neighbors
from .qarith import QParams, qint
from .subspace import Subspace, omega_list

_SAFE = 1 << 62


@dataclass(frozen=True, eq=False)
class RepVector:
    """Integer coordinates of a vector of E in the scaled lift (see module doc)."""

    q: int
    n: int
    coords: np.ndarray

    @property
    def scale(self) -> int:
        return qint(self.n, self.q)

    def _same(self, other: "RepVector") -> None:
        if (self.q, self.n) != (other.q, other.n):
            raise ValueError("vectors live in different spaces")

    def __add__(self, other: "RepVector") -> "RepVector":
        self._same(other)
        return RepVector(self.q, self.n, self.coords + other.coords)

    def __sub__(self, other: "RepVector") -> "RepVector":
        self._same(other)
        return RepVector(self.q, self.n, self.coords - other.coords)

    def __neg__(self) -> "RepVector":
        return RepVector(self.q, self.n, -self.coords)

    def __rmul__(self, c: int) -> "RepVector":
        if not isinstance(c, (int, np.integer)):
            return NotImplemented
        return RepVector(self.q, self.n, int(c) * self.coords)

    def __eq__(self, other) -> bool:
        if not isinstance(other, RepVector):
            return NotImplemented
        return (self.q, self.n) == (other.q, other.n) and bool(np.array_equal(self.coords, other.coords))

    __hash__ = None  # type: ignore[assignment]

    def is_zero(self) -> bool:
        return not np.any(self.coords)

    def to_json(self) -> dict:
        return {
            "coords": [int(v) for v in self.coords],
            "scale": self.scale,
            "note": "coords are the lift with point vectors [n]e_s - 1; <a,b> = dot(a,b)/scale",
        }


def zero_vector(q: int, n: int) -> RepVector:
    return RepVector(q, n, np.zeros(qint(n, q), dtype=np.int64))


@lru_cache(maxsize=1 << 15)
def _hat_cached(u: Subspace) -> np.ndarray:
    size = qint(u.n, u.q)
    pts = omega_list(u)
    coords = np.full(size, -len(pts), dtype=np.int64)
    coords[pts] += size
    coords.setflags(write=False)
    return coords


def hat(u: Subspace) -> RepVector:
    return RepVector(u.q, u.n, _hat_cached(u))


def hat_sum(us: Iterable[Subspace], q: int, n: int) -> RepVector:
    total = np.zeros(qint(n, q), dtype=np.int64)
    for u in us:
        total += _hat_cached(u)
    return RepVector(q, n, total)


def _dot(a: np.ndarray, b: np.ndarray) -> int:
    bound = int(np.abs(a).max(initial=0)) * int(np.abs(b).max(initial=0)) * len(a)
    if bound < _SAFE:
        return int(np.dot(a, b))
    return sum(int(x) * int(y) for x, y in zip(a, b))


def inner(a: RepVector, b: RepVector) -> int:
    a._same(b)
    raw = _dot(a.coords, b.coords)
    val, rem = divmod(raw, a.scale)
    if rem:
        raise InexactError(f"inner product {raw}/{a.scale} is not an integer")
    return val


def norm2(a: RepVector) -> int:
    return inner(a, a)


def combination(coeffs: Sequence[Number], vectors: Sequence[RepVector]) -> RepVector:
    """Sum c_j v_j for rational c_j; the result must have integer coordinates."""
    fr = [Fraction(c) for c in coeffs]
    den = 1
    for c in fr:
        den = den * c.denominator // np.gcd(den, c.denominator)
    q, n = vectors[0].q, vectors[0].n
    acc = [0] * len(vectors[0].coords)
    for c, v in zip(fr, vectors):
        m = int(c * den)
        if m:
            acc = [x + m * int(y) for x, y in zip(acc, v.coords)]
    out = []
    for x in acc:
        val, rem = divmod(x, den)
        if rem:
            raise InexactError("rational combination leaves the integer lattice")
        out.append(val)
    return RepVector(q, n, np.array(out, dtype=np.int64))


def predicted_inner(dim_u: int, dim_v: int, dim_meet: int, params: QParams) -> int:
    """[n][h] - [i][j] for dims i, j and h = dim(u ∩ v)."""
    n = params.n
    if not max(0, dim_u + dim_v - n) <= dim_meet <= min(dim_u, dim_v) or max(dim_u, dim_v) > n:
        raise ValueError(f"inconsistent dimensions ({dim_u}, {dim_v}, {dim_meet}) in F^{n}")
    qi = params.qi
    return qi(n) * qi(dim_meet) - qi(dim_u) * qi(dim_v)


def theta1_sum_check(x: Subspace, params: QParams) -> RepVector:
    """Residual sum_{z ~ x} ẑ - theta_1 x̂; zero when the eigen-sum identity holds."""
    total = hat_sum(neighbors(x, params), params.q, params.n)
    return total - params.theta[1] * hat(x)


def rep_rank(vectors: Sequence[RepVector]) -> int:
    return exact.rank([[int(v) for v in vec.coords] for vec in vectors])


def point_hat(s: int, q: int, n: int) -> RepVector:
    size = qint(n, q)
    coords = np.full(size, -1, dtype=np.int64)
    coords[s] += size
    return RepVector(q, n, coords)


def _point_combination_exact(coeffs: Mapping[int, Number], size: int) -> List[Fraction]:
    alpha = [Fraction(0)] * size
    for s, a in coeffs.items():
        alpha[s] = Fraction(a)
    total = sum(alpha)
    # (sum_s alpha_s ([n]e_s - 1))_t = [n] alpha_t - sum(alpha)
    return [size * a - total for a in alpha]


def point_combination(coeffs: Mapping[int, Number], q: int, n: int) -> RepVector:
    """sum_s alpha_s ŝ over the given point ids (missing ids have alpha = 0)."""
    vals = _point_combination_exact(coeffs, qint(n, q))
    if any(v.denominator != 1 for v in vals):
        raise InexactError("coefficients give a vector off the integer lattice")
    return RepVector(q, n, np.array([int(v) for v in vals], dtype=np.int64))


def kernel_constant_check(coeffs: Mapping[int, Number], q: int, n: int) -> bool:
    """True when 'sum alpha_s ŝ = 0' and 'alpha constant' agree for these coefficients."""
    size = qint(n, q)
    vec_zero = not any(_point_combination_exact(coeffs, size))
    alpha = [Fraction(coeffs.get(s, 0)) for s in range(size)]
    constant = all(a == alpha[0] for a in alpha)
    return vec_zero == constant


def act(perm: Sequence[int], v: RepVector) -> RepVector:
    """sigma(v) where sigma permutes point ids by perm (s -> perm[s])."""
    out = np.empty_like(v.coords)
    out[np.asarray(perm)] = v.coords
    return RepVector(v.q, v.n, out)


def gram(vectors: Sequence[RepVector]) -> List[List[int]]:
    return [[inner(a, b) for b in vectors] for a in vectors]


def point_gram_check(q: int, n: int) -> Tuple[bool, bool, bool]:
    """(diagonal = [n]-1, off-diagonal = -1, sum = 0) over all point vectors,
    computed from the stored coordinates."""
    size = qint(n, q)
    M = np.stack([point_hat(s, q, n).coords for s in range(size)])
    G = M @ M.T
    if np.any(G % size):
        raise InexactError("point Gram matrix not divisible by the scale")
    G //= size
    diag_ok = bool(np.all(np.diag(G) == size - 1))
    off = G[~np.eye(size, dtype=bool)]
    off_ok = bool(np.all(off == -1))
    sum_ok = not np.any(M.sum(axis=0))
    return diag_ok, off_ok, sum_ok


def rep_dict(vectors: Dict[str, RepVector]) -> Dict[str, dict]:
    return {k: v.to_json() for k, v in vectors.items()}
