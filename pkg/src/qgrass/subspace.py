"""Subspaces of F_q^n in reduced row-echelon form, the lattice operations,
enumeration, the point sets Omega(u), and the GL(V) action.

Subspaces are row spans.  The canonical form is the RREF basis with leading
ones, so two Subspace objects are equal exactly when they span the same space.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, product
from typing import Dict, FrozenSet, Iterable, Iterator, List, Sequence, Tuple

from .field import GF, field
from .qarith import QParams

Row = Tuple[int, ...]
Matrix = Tuple[Row, ...]


class DimensionError(ValueError):
    pass


@dataclass(frozen=True)
class Subspace:
    q: int
    n: int
    rows: Matrix

    @property
    def dim(self) -> int:
        return len(self.rows)

    @property
    def pivots(self) -> Tuple[int, ...]:
        return tuple(next(j for j, v in enumerate(r) if v) for r in self.rows)

    def serialize(self) -> str:
        return ";".join(" ".join(str(v) for v in r) for r in self.rows)

    def __repr__(self):
        return f"Subspace(q={self.q}, n={self.n}, dim={self.dim}, rows='{self.serialize()}')"


def parse_subspace(text: str, q: int, n: int) -> Subspace:
    text = text.strip()
    if not text:
        return zero_space(q, n)
    vecs = []
    for part in text.split(";"):
        vec = [int(t) for t in part.replace(",", " ").split()]
        if len(vec) != n:
            raise DimensionError(f"row {part!r} has length {len(vec)}, expected {n}")
        if any(not 0 <= v < q for v in vec):
            raise ValueError(f"row {part!r} has entries outside F_{q}")
        vecs.append(vec)
    return rref_canonical(vecs, q, n)


# ---------------------------------------------------------------------------
# row reduction

def _rref_rows(rows: Iterable[Sequence[int]], F: GF, n: int) -> Matrix:
    if F.q == 2:
        return _rref_rows_gf2(rows, n)
    mul, sub, inv = F.mul, F.sub, F.inv
    m = [list(r) for r in rows if any(r)]
    if not m:
        return ()
    prow_idx = 0
    for col in range(n):
        for r in range(prow_idx, len(m)):
            if m[r][col]:
                break
        else:
            continue
        m[prow_idx], m[r] = m[r], m[prow_idx]
        lead = m[prow_idx][col]
        if lead != 1:
            scale = mul[inv[lead]]
            m[prow_idx] = [scale[v] for v in m[prow_idx]]
        prow = m[prow_idx]
        for r in range(len(m)):
            f = m[r][col]
            if r != prow_idx and f:
                mf = mul[f]
                m[r] = [sub[a][mf[b]] for a, b in zip(m[r], prow)]
        prow_idx += 1
        if prow_idx == len(m):
            break
    return tuple(tuple(r) for r in m[:prow_idx])


def _to_bits(row: Sequence[int], n: int) -> int:
    out = 0
    for v in row:
        out = (out << 1) | (v & 1)
    return out


@lru_cache(maxsize=1 << 16)
def _from_bits(x: int, n: int) -> Row:
    return tuple((x >> (n - 1 - j)) & 1 for j in range(n))


def _rref_bits(vals: Iterable[int]) -> List[int]:
    """Fully reduced echelon basis of bitmask vectors, highest leading bit first."""
    basis: Dict[int, int] = {}  # leading bit -> vector
    for v in vals:
        for lb in sorted(basis, reverse=True):
            if v >> lb & 1:
                v ^= basis[lb]
        if v:
            lb = v.bit_length() - 1
            for other in basis:
                if basis[other] >> lb & 1:
                    basis[other] ^= v
            basis[lb] = v
    return [basis[lb] for lb in sorted(basis, reverse=True)]


def _rref_rows_gf2(rows: Iterable[Sequence[int]], n: int) -> Matrix:
    return tuple(_from_bits(v, n) for v in _rref_bits(_to_bits(r, n) for r in rows))


def rref_canonical(vectors: Iterable[Sequence[int]], q: int, n: int) -> Subspace:
    vectors = list(vectors)
    for v in vectors:
        if len(v) != n:
            raise DimensionError(f"vector of length {len(v)} in ambient dimension {n}")
    return Subspace(q, n, _rref_rows(vectors, field(q), n))


def zero_space(q: int, n: int) -> Subspace:
    return Subspace(q, n, ())


def full_space(q: int, n: int) -> Subspace:
    return Subspace(q, n, tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))


def _same_ambient(u: Subspace, v: Subspace) -> None:
    if (u.q, u.n) != (v.q, v.n):
        raise DimensionError(f"ambient mismatch: F_{u.q}^{u.n} vs F_{v.q}^{v.n}")


def join(u: Subspace, v: Subspace) -> Subspace:
    _same_ambient(u, v)
    return Subspace(u.q, u.n, _rref_rows(u.rows + v.rows, field(u.q), u.n))


def _null_space(rows: Matrix, F: GF, n: int) -> List[Row]:
    """Basis of {w : r . w = 0 for every row r}; rows must be in RREF."""
    pivots = [next(j for j, v in enumerate(r) if v) for r in rows]
    free = [j for j in range(n) if j not in pivots]
    basis = []
    for f in free:
        w = [0] * n
        w[f] = 1
        for r, p in zip(rows, pivots):
            w[p] = F.neg[r[f]]
        basis.append(tuple(w))
    return basis


def meet(u: Subspace, v: Subspace) -> Subspace:
    """u ∩ v as the annihilator of ann(u) + ann(v)."""
    _same_ambient(u, v)
    F, n = field(u.q), u.n
    ann = _rref_rows(_null_space(u.rows, F, n) + _null_space(v.rows, F, n), F, n)
    return Subspace(u.q, n, _rref_rows(_null_space(ann, F, n), F, n))


def contains(u: Subspace, v: Subspace) -> bool:
    """v ⊆ u."""
    return join(u, v) == u


def dot(a: Sequence[int], b: Sequence[int], F: GF) -> int:
    s = 0
    add, mul = F.add, F.mul
    for x, y in zip(a, b):
        if x and y:
            s = add[s][mul[x][y]]
    return s


def combine(coeffs: Sequence[int], rows: Sequence[Sequence[int]], F: GF, n: int) -> Row:
    out = [0] * n
    add, mul = F.add, F.mul
    for c, r in zip(coeffs, rows):
        if c:
            mc = mul[c]
            out = [add[a][mc[b]] for a, b in zip(out, r)]
    return tuple(out)


# ---------------------------------------------------------------------------
# enumeration

def _rref_shapes(ell: int, n: int, q: int) -> Iterator[Matrix]:
    for pivots in combinations(range(n), ell):
        pset = set(pivots)
        slots = [(r, j) for r, p in enumerate(pivots) for j in range(p + 1, n) if j not in pset]
        for vals in product(range(q), repeat=len(slots)):
            m = [[0] * n for _ in range(ell)]
            for r, p in enumerate(pivots):
                m[r][p] = 1
            for (r, j), v in zip(slots, vals):
                m[r][j] = v
            yield tuple(tuple(r) for r in m)


def enumerate_subspaces(ell: int, q: int, n: int) -> Iterator[Subspace]:
    """Every ell-dimensional subspace of F_q^n exactly once, in pivot-then-entry
    lexicographic order."""
    if not 0 <= ell <= n:
        raise DimensionError(f"ell={ell} outside 0..{n}")
    field(q)
    for m in _rref_shapes(ell, n, q):
        yield Subspace(q, n, m)


def subspaces_of(u: Subspace, ell: int) -> Iterator[Subspace]:
    """ell-dimensional subspaces contained in u."""
    F = field(u.q)
    for coeffs in _rref_shapes(ell, u.dim, u.q):
        vecs = [combine(c, u.rows, F, u.n) for c in coeffs]
        yield Subspace(u.q, u.n, _rref_rows(vecs, F, u.n))


# ---------------------------------------------------------------------------
# points

class PointSpace:
    """The points P_1 of F_q^n: normalized vectors (first nonzero entry 1),
    indexed in lexicographic order."""

    def __init__(self, q: int, n: int):
        self.q, self.n = q, n
        self.F = field(q)
        pts = []
        for lead in range(n):
            for tail in product(range(q), repeat=n - lead - 1):
                pts.append((0,) * lead + (1,) + tail)
        pts.sort()
        self.points: List[Row] = pts
        self.index: Dict[Row, int] = {p: i for i, p in enumerate(pts)}
        if q == 2:
            self.bit_index: Dict[int, int] = {_to_bits(p, n): i for i, p in enumerate(pts)}

    def __len__(self):
        return len(self.points)

    def normalize(self, vec: Sequence[int]) -> Row:
        lead = next((v for v in vec if v), 0)
        if not lead:
            raise ValueError("zero vector has no projective point")
        s = self.F.mul[self.F.inv[lead]]
        return tuple(s[v] for v in vec)

    def point_index(self, vec: Sequence[int]) -> int:
        return self.index[self.normalize(vec)]

    def subspace(self, idx: int) -> Subspace:
        return Subspace(self.q, self.n, (self.points[idx],))


@lru_cache(maxsize=None)
def point_space(q: int, n: int) -> PointSpace:
    return PointSpace(q, n)


def omega_list(u: Subspace) -> List[int]:
    """Point ids of the 1-dim subspaces inside u (unsorted, no repeats)."""
    ps = point_space(u.q, u.n)
    if u.dim == 0:
        return []
    if u.q == 2:
        bits = [_to_bits(r, u.n) for r in u.rows]
        span = [0]
        out = []
        for b in reversed(bits):
            out.extend(ps.bit_index[b ^ s] for s in span)
            span = span + [b ^ s for s in span]
        return out
    F = ps.F
    add, mul = F.add, F.mul
    span: List[Row] = [(0,) * u.n]
    out = []
    for row in reversed(u.rows):
        out.extend(ps.index[tuple(add[a][b] for a, b in zip(row, s))] for s in span)
        span = [tuple(add[mul[c][a]][b] for a, b in zip(row, s)) for c in range(u.q) for s in span]
    return out


def omega(u: Subspace) -> FrozenSet[int]:
    return frozenset(omega_list(u))


# ---------------------------------------------------------------------------
# GL(V)

def mat_rank(m: Sequence[Sequence[int]], q: int) -> int:
    n = len(m[0]) if m else 0
    return len(_rref_rows(m, field(q), n))


def mat_mul(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]], q: int) -> Matrix:
    F = field(q)
    n = len(b[0])
    return tuple(combine(row, b, F, n) for row in a)


def identity(n: int) -> Matrix:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def mat_inverse(m: Sequence[Sequence[int]], q: int) -> Matrix:
    F = field(q)
    n = len(m)
    aug = [tuple(m[i]) + identity(n)[i] for i in range(n)]
    red = _rref_rows(aug, F, 2 * n)
    if len(red) != n or any(red[i][:n] != identity(n)[i] for i in range(n)):
        raise ValueError("matrix is not invertible")
    return tuple(r[n:] for r in red)


def gl_random(params_or_qn, seed: int) -> Matrix:
    """Random invertible n x n matrix by rejection sampling; deterministic per seed."""
    q, n = _qn(params_or_qn)
    rng = random.Random(seed)
    while True:
        m = tuple(tuple(rng.randrange(q) for _ in range(n)) for _ in range(n))
        if mat_rank(m, q) == n:
            return m


def _qn(obj) -> Tuple[int, int]:
    if isinstance(obj, QParams):
        return obj.q, obj.n
    return tuple(obj)  # type: ignore[return-value]


def gl_apply(sigma: Sequence[Sequence[int]], u: Subspace, check: bool = True) -> Subspace:
    """Image of u under v -> v·sigma."""
    if len(sigma) != u.n or any(len(r) != u.n for r in sigma):
        raise DimensionError("sigma must be n x n")
    if check and mat_rank(sigma, u.q) != u.n:
        raise ValueError("sigma is not invertible")
    F = field(u.q)
    return Subspace(u.q, u.n, _rref_rows([combine(r, sigma, F, u.n) for r in u.rows], F, u.n))


def point_permutation(sigma: Sequence[Sequence[int]], q: int, n: int) -> List[int]:
    """perm[s] = index of sigma(s) for every point id s."""
    ps = point_space(q, n)
    F = ps.F
    return [ps.point_index(combine(p, sigma, F, n)) for p in ps.points]


def random_subspace(rng: random.Random, dim: int, q: int, n: int) -> Subspace:
    while True:
        vecs = [[rng.randrange(q) for _ in range(n)] for _ in range(dim)]
        u = rref_canonical(vecs, q, n)
        if u.dim == dim:
            return u


def random_vertex(rng: random.Random, params: QParams) -> Subspace:
    return random_subspace(rng, params.k, params.q, params.n)


def random_basis(rng: random.Random, q: int, n: int) -> Matrix:
    return gl_random((q, n), rng.randrange(1 << 62))


def span_rows(rows: Sequence[Sequence[int]], q: int, n: int) -> Subspace:
    return rref_canonical(rows, q, n)

