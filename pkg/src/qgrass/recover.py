"""Fix(x,y): geometric and combinatorial bases, their Gram tables and
transition matrices, and recovery of (x ∩ y)^ and (x + y)^ from x̂, ŷ and the
neighbor sums B_xy, C_xy (plus the swap-symmetric "bar" and "check" variants).

Transition matrices follow the column convention: column j holds the
coordinates of the j-th new basis vector in the old basis.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Sequence, Tuple

from . import exact
from .euclid import RepVector, combination, hat, hat_sum, inner
from .exact import FMatrix
from .graph import DistanceError, bc_sets, distance
from .qarith import ParameterError, QParams
from .subspace import Subspace, join, meet

VARIANTS = ("full", "bar", "check")
KINDS = ("geometric", "mixed", "combinatorial")

LABELS = {
    "geometric": ["x", "y", "x∩y", "x+y"],
    "combinatorial": ["x", "y", "B_xy", "C_xy"],
}
GEO_LABELS = {
    "full": ["x", "y", "x∩y", "x+y"],
    "bar": ["x+y_hats", "x∩y", "x+y"],
    "check": ["x∩y", "x+y"],
}
COMB_LABELS = {
    "full": ["x", "y", "B_xy", "C_xy"],
    "bar": ["x+y_hats", "Bbar_xy", "Cbar_xy"],
    "check": ["Bcheck_xy", "Ccheck_xy"],
}


def _check_i(params: QParams, i: int) -> None:
    if not 1 < i < params.k:
        raise ParameterError(f"need 1 < i < k={params.k}, got i={i}")


def _check_variant(variant: str) -> None:
    if variant not in VARIANTS:
        raise ValueError(f"unknown variant {variant!r}; expected one of {VARIANTS}")


# ---------------------------------------------------------------------------
# scalars

def zeta(params: QParams, i: int) -> int:
    q, n, k, b = params.q, params.n, params.k, params.qi
    return q ** (2 * i) * b(k - i) * b(n - k - i)


def xi(params: QParams, i: int) -> int:
    return params.q * params.qi(i) * params.qi(i - 2)


def transition_det(params: QParams, i: int) -> int:
    """-q^{k+i}[i-1][n-2k], shared by the full, bar and check transitions."""
    q, n, k, b = params.q, params.n, params.k, params.qi
    return -(q ** (k + i)) * b(i - 1) * b(n - 2 * k)


# ---------------------------------------------------------------------------
# closed-form Gram tables

def geometric_table(params: QParams, i: int) -> List[List[int]]:
    _check_i(params, i)
    q, n, k, b = params.q, params.n, params.k, params.qi
    xx = q**k * b(k) * b(n - k)
    xy = b(n) * b(k - i) - b(k) ** 2
    xc = q**k * b(k - i) * b(n - k)
    xs = q ** (k + i) * b(k) * b(n - k - i)
    cc = q ** (k - i) * b(k - i) * b(n - k + i)
    cs = q ** (k + i) * b(k - i) * b(n - k - i)
    ss = q ** (k + i) * b(k + i) * b(n - k - i)
    return [
        [xx, xy, xc, xs],
        [xy, xx, xc, xs],
        [xc, xc, cc, cs],
        [xs, xs, cs, ss],
    ]


def _bc_rows(params: QParams, i: int) -> Tuple[List[int], List[int]]:
    """<B, .> and <C, .> against x̂, ŷ, (x∩y)^, (x+y)^."""
    q, n, k, b = params.q, params.n, params.k, params.qi
    bi = q ** (2 * i + 1) * b(k - i) * b(n - k - i)
    ci = b(i) ** 2
    B = [
        bi * (b(n) * b(k - 1) - b(k) ** 2),
        bi * (b(n) * b(k - i - 1) - b(k) ** 2),
        bi * (b(n) * b(k - i - 1) - b(k - i) * b(k)),
        bi * (b(n) * b(k - 1) - b(k) * b(k + i)),
    ]
    C = [
        ci * (b(n) * b(k - 1) - b(k) ** 2),
        ci * (b(n) * b(k - i + 1) - b(k) ** 2),
        q**k * ci * b(k - i) * b(n - k),
        q ** (k + i) * ci * b(k) * b(n - k - i),
    ]
    return B, C


def mixed_table(params: QParams, i: int) -> List[List[int]]:
    """Rows x̂, ŷ, B, C against columns x̂, ŷ, (x∩y)^, (x+y)^."""
    geo = geometric_table(params, i)
    B, C = _bc_rows(params, i)
    return [geo[0], geo[1], B, C]


def combinatorial_table(params: QParams, i: int) -> List[List[int]]:
    _check_i(params, i)
    q, n, k, b = params.q, params.n, params.k, params.qi
    geo = geometric_table(params, i)
    B, C = _bc_rows(params, i)
    bi = q ** (2 * i + 1) * b(k - i) * b(n - k - i)
    ci = b(i) ** 2
    tail = b(n) * b(k - 2) - b(k) ** 2
    # q^{k-i-2} has a negative exponent when i = k-1
    BB = Fraction(q) ** (4 * i + 2) * b(k - i) * b(n - k - i) * (
        Fraction(q) ** (k - i - 2) * b(n) * (b(k - i) + b(n - k - i)) + b(k - i) * b(n - k - i) * tail
    )
    assert BB.denominator == 1
    BB = int(BB)
    BC = bi * ci * tail
    CC = ci * (q ** (k - 2) * b(n) * (2 * q * b(i - 1) + q + 1) + ci * tail)
    return [
        [geo[0][0], geo[0][1], B[0], C[0]],
        [geo[1][0], geo[1][1], B[1], C[1]],
        [B[0], B[1], BB, BC],
        [C[0], C[1], BC, CC],
    ]


@dataclass(frozen=True)
class GramTable:
    kind: str
    params: QParams
    i: int
    row_labels: Tuple[str, ...]
    col_labels: Tuple[str, ...]
    entries: Tuple[Tuple[int, ...], ...]

    @property
    def labels(self) -> Tuple[str, ...]:
        return self.row_labels

    def to_json(self) -> dict:
        out = {
            "params": self.params.as_dict(),
            "i": self.i,
            "kind": self.kind,
            "labels": list(self.row_labels),
            "entries": exact.to_pairs(self.entries),
        }
        if self.col_labels != self.row_labels:
            out["col_labels"] = list(self.col_labels)
        return out


def gram_table(kind: str, params: QParams, i: int) -> GramTable:
    if kind == "geometric":
        rows, cols, m = LABELS["geometric"], LABELS["geometric"], geometric_table(params, i)
    elif kind == "mixed":
        rows, cols, m = LABELS["combinatorial"], LABELS["geometric"], mixed_table(params, i)
    elif kind == "combinatorial":
        rows, cols, m = LABELS["combinatorial"], LABELS["combinatorial"], combinatorial_table(params, i)
    else:
        raise ValueError(f"unknown table kind {kind!r}; expected one of {KINDS}")
    return GramTable(kind, params, i, tuple(rows), tuple(cols), tuple(tuple(r) for r in m))


# ---------------------------------------------------------------------------
# M_i^{-1}, coefficient and transition matrices

def m_inverse(params: QParams, i: int) -> FMatrix:
    _check_i(params, i)
    q, n, k, b = params.q, params.n, params.k, params.qi
    pre = Fraction(1, q ** (k - i) * (q - 1) * b(i) ** 2 * b(n))
    qi_ = q**i
    d3 = Fraction(qi_ * b(k) - b(i), b(k - i))
    d4 = Fraction(qi_ * b(n - k) - b(i), q ** (2 * i) * b(n - k - i))
    raw = [
        [qi_, 1, -qi_, -1],
        [1, qi_, -qi_, -1],
        [-qi_, -qi_, d3, 1],
        [-1, -1, 1, d4],
    ]
    return [[pre * Fraction(v) for v in row] for row in raw]


def coeffs_in_geometric(variant: str, params: QParams, i: int) -> FMatrix:
    """Columns: the combinatorial-side vectors (B, C or their bar/check forms)
    in the geometric basis of the variant."""
    _check_variant(variant)
    _check_i(params, i)
    q, n, k, b = params.q, params.n, params.k, params.qi
    if variant == "full":
        m = [
            [q ** (2 * i) * b(k - i) * b(n - k - i), q * b(i - 1) ** 2],
            [0, q ** (i - 1)],
            [-(q ** (2 * i)) * b(n - k - i), q**i * b(i - 1)],
            [-(q**i) * b(k - i), b(i - 1)],
        ]
    elif variant == "bar":
        m = [
            [0, q ** (i - 1)],
            [-(q ** (2 * i)) * b(n - k - i), q**i * b(i - 1)],
            [-(q**i) * b(k - i), b(i - 1)],
        ]
    else:
        m = [
            [-(q ** (2 * i)) * b(n - k - i), q**i * b(i - 1)],
            [-(q**i) * b(k - i), b(i - 1)],
        ]
    return exact.frac_matrix(m)


@dataclass(frozen=True)
class TransitionMatrix:
    direction: str  # "geo->comb" or "comb->geo"
    variant: str
    params: QParams
    i: int
    entries: Tuple[Tuple[Fraction, ...], ...]

    @property
    def det(self) -> Fraction:
        return exact.det(self.entries)

    def to_json(self) -> dict:
        src, dst = self.direction.split("->")
        labels = {"geo": GEO_LABELS, "comb": COMB_LABELS}
        return {
            "params": self.params.as_dict(),
            "i": self.i,
            "kind": f"transition {self.direction} ({self.variant})",
            "labels": labels[src][self.variant],
            "col_labels": labels[dst][self.variant],
            "entries": exact.to_pairs(self.entries),
            "det": exact.to_pairs([[self.det]])[0][0],
        }


def _geo_to_comb(variant: str, params: QParams, i: int) -> FMatrix:
    cols = coeffs_in_geometric(variant, params, i)
    if variant == "full":
        # x̂ and ŷ are shared by both bases
        return [[Fraction(int(r == 0)), Fraction(int(r == 1))] + cols[r] for r in range(4)]
    if variant == "bar":
        return [[Fraction(int(r == 0))] + cols[r] for r in range(3)]
    return cols


def _comb_to_geo(variant: str, params: QParams, i: int) -> FMatrix:
    q, n, k, b = params.q, params.n, params.k, params.qi
    F = Fraction
    d = b(n - 2 * k)
    col_cap = [
        F(b(k - i) * b(n - k - 1), q ** (k - 1) * d),
        F(b(k - i), q ** (k - i + 1) * b(i - 1) * d),
        F(-1, q ** (k + i) * d),
        F(-b(k - i), q**k * b(i - 1) * d),
    ]
    col_sum = [
        F(-b(k - 1) * b(n - k - i), 1) / (F(q) ** (k - i - 1) * d),
        F(-b(n - k - i), 1) / (F(q) ** (k - 2 * i + 1) * b(i - 1) * d),
        F(1, q**k * d),
        F(b(n - k - i), q ** (k - i) * b(i - 1) * d),
    ]
    if variant == "full":
        rows = [
            [F(1), F(0), col_cap[0], col_sum[0]],
            [F(0), F(1), col_cap[1], col_sum[1]],
            [F(0), F(0), col_cap[2], col_sum[2]],
            [F(0), F(0), col_cap[3], col_sum[3]],
        ]
    elif variant == "bar":
        rows = [
            [F(1), col_cap[1], col_sum[1]],
            [F(0), col_cap[2], col_sum[2]],
            [F(0), col_cap[3], col_sum[3]],
        ]
    else:
        rows = [
            [col_cap[2], col_sum[2]],
            [col_cap[3], col_sum[3]],
        ]
    return rows


def transition(direction: str, variant: str, params: QParams, i: int) -> TransitionMatrix:
    _check_variant(variant)
    _check_i(params, i)
    if direction == "geo->comb":
        m = _geo_to_comb(variant, params, i)
    elif direction == "comb->geo":
        m = _comb_to_geo(variant, params, i)
    else:
        raise ValueError(f"unknown direction {direction!r}; expected 'geo->comb' or 'comb->geo'")
    return TransitionMatrix(direction, variant, params, i, tuple(tuple(r) for r in m))


def recovery_coeffs(variant: str, params: QParams, i: int) -> Tuple[List[Fraction], List[Fraction]]:
    """Coefficients of (x∩y)^ and (x+y)^ over the variant's combinatorial basis."""
    m = transition("comb->geo", variant, params, i).entries
    ncol = len(m[0])
    cap = [row[ncol - 2] for row in m]
    plus = [row[ncol - 1] for row in m]
    return cap, plus


# ---------------------------------------------------------------------------
# vectors from a concrete pair

def _interior_distance(x: Subspace, y: Subspace, params: QParams) -> int:
    i = distance(x, y)
    if x.dim != params.k or not 1 < i < params.k:
        raise DistanceError(f"need 1 < d(x,y) < k={params.k}, got {i}")
    return i


def bc_vectors(x: Subspace, y: Subspace, params: QParams) -> Tuple[RepVector, RepVector]:
    _interior_distance(x, y, params)
    Bs, Cs = bc_sets(x, y, params)
    return hat_sum(Bs, params.q, params.n), hat_sum(Cs, params.q, params.n)


@dataclass
class PairVectors:
    """x̂, ŷ, B_xy, C_xy (from distances only) for a pair at interior distance."""

    params: QParams
    i: int
    x: RepVector
    y: RepVector
    B: RepVector
    C: RepVector

    @classmethod
    def of(cls, x: Subspace, y: Subspace, params: QParams) -> "PairVectors":
        i = _interior_distance(x, y, params)
        B, C = bc_vectors(x, y, params)
        return cls(params, i, hat(x), hat(y), B, C)

    def combinatorial_basis(self, variant: str) -> List[RepVector]:
        _check_variant(variant)
        s = self.x + self.y
        Bbar = self.B - zeta(self.params, self.i) * self.x
        Cbar = self.C - xi(self.params, self.i) * self.x
        if variant == "full":
            return [self.x, self.y, self.B, self.C]
        if variant == "bar":
            return [s, Bbar, Cbar]
        return [Bbar, Cbar - self.params.q ** (self.i - 1) * s]


def recover_from_vectors(pv: PairVectors, variant: str) -> Tuple[RepVector, RepVector]:
    cap, plus = recovery_coeffs(variant, pv.params, pv.i)
    basis = pv.combinatorial_basis(variant)
    return combination(cap, basis), combination(plus, basis)


def recover_meet_join(x: Subspace, y: Subspace, variant: str, params: QParams) -> Tuple[RepVector, RepVector]:
    """(x∩y)^ and (x+y)^ computed only from x̂, ŷ and the neighbor sums."""
    _check_variant(variant)
    return recover_from_vectors(PairVectors.of(x, y, params), variant)


def geometric_basis(x: Subspace, y: Subspace, variant: str = "full") -> List[RepVector]:
    hx, hy, hc, hs = hat(x), hat(y), hat(meet(x, y)), hat(join(x, y))
    if variant == "full":
        return [hx, hy, hc, hs]
    if variant == "bar":
        return [hx + hy, hc, hs]
    return [hc, hs]


def perp_vector(x: Subspace, y: Subspace, params: QParams) -> RepVector:
    """(q^i+1)(x̂+ŷ) - 2q^i (x∩y)^ - 2 (x+y)^."""
    i = _interior_distance(x, y, params)
    q = params.q
    hx, hy, hc, hs = geometric_basis(x, y)
    return (q**i + 1) * (hx + hy) - (2 * q**i) * hc - 2 * hs


def perp_from_combinatorial(pv: PairVectors) -> RepVector:
    """((q^{i-1}+1)[i](x̂+ŷ) - 2 C̄) / [i-1]."""
    q, i, b = pv.params.q, pv.i, pv.params.qi
    s, _, Cbar = pv.combinatorial_basis("bar")
    return combination([Fraction((q ** (i - 1) + 1) * b(i), b(i - 1)), Fraction(-2, b(i - 1))], [s, Cbar])


def empirical_gram(rows: Sequence[RepVector], cols: Sequence[RepVector]) -> List[List[int]]:
    return [[inner(a, c) for c in cols] for a in rows]


def empirical_table(kind: str, x: Subspace, y: Subspace, params: QParams,
                    pv: PairVectors | None = None) -> List[List[int]]:
    pv = pv or PairVectors.of(x, y, params)
    geo = geometric_basis(x, y)
    comb = [pv.x, pv.y, pv.B, pv.C]
    if kind == "geometric":
        return empirical_gram(geo, geo)
    if kind == "mixed":
        return empirical_gram(comb, geo)
    if kind == "combinatorial":
        return empirical_gram(comb, comb)
    raise ValueError(f"unknown table kind {kind!r}")


def grid_summary(params: QParams, i: int) -> Dict[str, object]:
    cap, plus = recovery_coeffs("full", params, i)
    return {
        "params": params.as_dict(),
        "i": i,
        "meet_coeffs": [exact.fmt(c) for c in cap],
        "join_coeffs": [exact.fmt(c) for c in plus],
        "det_geo_to_comb": transition_det(params, i),
    }
