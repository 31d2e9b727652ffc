"""q-integers, Gaussian binomials and the closed-form parameters of J_q(n,k)."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import List, Tuple


class ParameterError(ValueError):
    pass


def is_prime_power(q: int) -> bool:
    if q < 2:
        return False
    p = 2
    while p * p <= q:
        if q % p == 0:
            while q % p == 0:
                q //= p
            return q == 1
        p += 1
    return True


def _check_q(q: int) -> None:
    if not isinstance(q, int) or not is_prime_power(q):
        raise ParameterError(f"q={q!r} is not a prime power")


@lru_cache(maxsize=None)
def qint(m: int, q: int) -> int:
    """[m] = (q^m - 1)/(q - 1); [0] = 0."""
    _check_q(q)
    if m < 0:
        raise ParameterError(f"q-integer at negative m={m} is not supported")
    return (q**m - 1) // (q - 1)


@lru_cache(maxsize=None)
def qfactorial(m: int, q: int) -> int:
    out = 1
    for j in range(1, m + 1):
        out *= qint(j, q)
    return out


@lru_cache(maxsize=None)
def gauss_binom(m: int, r: int, q: int) -> int:
    """Number of r-dimensional subspaces of an m-dimensional space over F_q."""
    _check_q(q)
    if m < 0 or r < 0 or r > m:
        raise ParameterError(f"gauss_binom needs 0 <= r <= m, got m={m}, r={r}")
    num, den = qfactorial(m, q), qfactorial(r, q) * qfactorial(m - r, q)
    val, rem = divmod(num, den)
    assert rem == 0
    return val


@dataclass(frozen=True)
class QParams:
    """Validated (q, n, k) with n > 2k >= 6, plus derived graph parameters."""

    q: int
    n: int
    k: int
    kappa: int = field(init=False, repr=False, compare=False)
    b: Tuple[int, ...] = field(init=False, repr=False, compare=False)
    a: Tuple[int, ...] = field(init=False, repr=False, compare=False)
    c: Tuple[int, ...] = field(init=False, repr=False, compare=False)
    theta: Tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        _check_q(self.q)
        if not (isinstance(self.n, int) and isinstance(self.k, int)):
            raise ParameterError("n and k must be integers")
        if not (self.n > 2 * self.k >= 6):
            raise ParameterError(
                f"need n > 2k >= 6, got n={self.n}, k={self.k}"
            )
        b, a, c = intersection_numbers(self)
        set_ = object.__setattr__
        set_(self, "kappa", b[0])
        set_(self, "b", tuple(b))
        set_(self, "a", tuple(a))
        set_(self, "c", tuple(c))
        set_(self, "theta", tuple(eigenvalue(i, self) for i in range(self.k + 1)))

    def qi(self, m: int) -> int:
        return qint(m, self.q)

    @property
    def num_points(self) -> int:
        return self.qi(self.n)

    @property
    def num_vertices(self) -> int:
        return gauss_binom(self.n, self.k, self.q)

    def sphere_sizes(self) -> List[int]:
        """k_0, ..., k_k from k_{i+1} = k_i b_i / c_{i+1}."""
        sizes = [1]
        for i in range(self.k):
            num = sizes[-1] * self.b[i]
            assert num % self.c[i + 1] == 0
            sizes.append(num // self.c[i + 1])
        return sizes

    def as_dict(self) -> dict:
        return {"q": self.q, "n": self.n, "k": self.k}


def intersection_numbers(params: QParams) -> Tuple[List[int], List[int], List[int]]:
    q, n, k = params.q, params.n, params.k
    kappa = q * qint(k, q) * qint(n - k, q)
    b = [q ** (2 * i + 1) * qint(k - i, q) * qint(n - k - i, q) for i in range(k + 1)]
    c = [qint(i, q) ** 2 for i in range(k + 1)]
    a = [kappa - b[i] - c[i] for i in range(k + 1)]
    return b, a, c


def eigenvalue(i: int, params: QParams) -> int:
    q, n, k = params.q, params.n, params.k
    if not 0 <= i <= k:
        raise ParameterError(f"eigenvalue index {i} outside 0..{k}")
    return q ** (i + 1) * qint(k - i, q) * qint(n - k - i, q) - qint(i, q)
