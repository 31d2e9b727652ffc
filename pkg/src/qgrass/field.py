"""Small finite fields F_q, q <= 9, as precomputed lookup tables.

Elements are the integers 0..q-1.  For q = p^e with e > 1 an element's
base-p digits are the coefficients of a polynomial in the generator,
lowest degree first.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import product
from typing import Dict, List, Tuple

# lowest-degree-first coefficients of the monic modulus, leading 1 omitted
_MODULI: Dict[int, Tuple[int, int, Tuple[int, ...]]] = {
    4: (2, 2, (1, 1)),      # x^2 + x + 1
    8: (2, 3, (1, 1, 0)),   # x^3 + x + 1
    9: (3, 2, (1, 0)),      # x^2 + 1
}
_PRIMES = (2, 3, 5, 7)


class FieldError(ValueError):
    pass


class GF:
    def __init__(self, q: int):
        if q in _PRIMES:
            self.p, self.e = q, 1
            add = [[(a + b) % q for b in range(q)] for a in range(q)]
            mul = [[(a * b) % q for b in range(q)] for a in range(q)]
        elif q in _MODULI:
            self.p, self.e, _ = _MODULI[q]
            add, mul = _extension_tables(q)
        else:
            raise FieldError(f"F_{q} is not supported (q must be one of 2,3,4,5,7,8,9)")
        self.q = q
        self.add: List[List[int]] = add
        self.mul: List[List[int]] = mul
        self.neg: List[int] = [add[a].index(0) for a in range(q)]
        self.sub: List[List[int]] = [[add[a][self.neg[b]] for b in range(q)] for a in range(q)]
        self.inv: List[int] = [0] + [mul[a].index(1) for a in range(1, q)]

    def __repr__(self):
        return f"GF({self.q})"

    def check_axioms(self) -> bool:
        """Exhaustive field-axiom check over the tables."""
        q, add, mul = self.q, self.add, self.mul
        els = range(q)
        for a, b, c in product(els, repeat=3):
            if add[add[a][b]][c] != add[a][add[b][c]]:
                return False
            if mul[mul[a][b]][c] != mul[a][mul[b][c]]:
                return False
            if mul[a][add[b][c]] != add[mul[a][b]][mul[a][c]]:
                return False
        for a, b in product(els, repeat=2):
            if add[a][b] != add[b][a] or mul[a][b] != mul[b][a]:
                return False
        for a in els:
            if add[a][0] != a or mul[a][1] != a or add[a][self.neg[a]] != 0:
                return False
            if a and mul[a][self.inv[a]] != 1:
                return False
        return True


def _extension_tables(q: int):
    p, e, low = _MODULI[q]

    def digits(a):
        return [(a // p**j) % p for j in range(e)]

    def undigits(ds):
        return sum(d * p**j for j, d in enumerate(ds))

    def polymul(a, b):
        prod_ = [0] * (2 * e - 1)
        for i, x in enumerate(digits(a)):
            for j, y in enumerate(digits(b)):
                prod_[i + j] = (prod_[i + j] + x * y) % p
        # x^e = -(low)
        for deg in range(2 * e - 2, e - 1, -1):
            coef = prod_[deg]
            if coef:
                prod_[deg] = 0
                for j, m in enumerate(low):
                    prod_[deg - e + j] = (prod_[deg - e + j] - coef * m) % p
        return undigits(prod_[:e])

    add = [[undigits([(x + y) % p for x, y in zip(digits(a), digits(b))]) for b in range(q)]
           for a in range(q)]
    mul = [[polymul(a, b) for b in range(q)] for a in range(q)]
    return add, mul


@lru_cache(maxsize=None)
def field(q: int) -> GF:
    return GF(q)
