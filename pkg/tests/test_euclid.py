import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qgrass.euclid import (
    InexactError,
    act,
    combination,
    hat,
    hat_sum,
    inner,
    kernel_constant_check,
    norm2,
    point_combination,
    point_gram_check,
    point_hat,
    predicted_inner,
    rep_rank,
    theta1_sum_check,
)
from qgrass.graph import swap_matrix, witness_pair
from qgrass.qarith import QParams
from qgrass.subspace import full_space, meet, omega_list, point_permutation, random_subspace, random_vertex, zero_space


def brute_inner(u, v):
    """<û, v̂> from the point Gram matrix: ([n]-1) on shared points, -1 elsewhere."""
    size = (u.q**u.n - 1) // (u.q - 1)
    a, b = set(omega_list(u)), set(omega_list(v))
    shared = len(a & b)
    return shared * (size - 1) - (len(a) * len(b) - shared)


def test_point_axioms():
    for q, n in [(2, 7), (3, 4), (4, 3)]:
        assert point_gram_check(q, n) == (True, True, True)


def test_point_rank(p273):
    assert rep_rank([point_hat(s, 2, 7) for s in range(127)]) == 126


def test_kernel_is_constants():
    rng = random.Random(0)
    assert kernel_constant_check({s: 5 for s in range(127)}, 2, 7)
    assert not point_combination({s: 5 for s in range(127)}, 2, 7).coords.any()
    for _ in range(20):
        alpha = {s: rng.randint(-2, 2) for s in range(127)}
        assert kernel_constant_check(alpha, 2, 7)
        assert point_combination(alpha, 2, 7).coords.any()


def test_hat_is_point_sum(rng):
    for _ in range(20):
        u = random_subspace(rng, rng.randint(0, 7), 2, 7)
        total = sum((point_hat(s, 2, 7) for s in omega_list(u)), hat(zero_space(2, 7)))
        assert total == hat(u)
    assert hat(full_space(2, 7)).is_zero()


@settings(max_examples=80, deadline=None)
@given(st.sampled_from([(2, 7), (3, 5), (4, 4)]), st.integers(0, 2**32))
def test_inner_product_law(qn, seed):
    q, n = qn
    rng = random.Random(seed)
    u = random_subspace(rng, rng.randint(0, n), q, n)
    v = random_subspace(rng, rng.randint(0, n), q, n)
    p = QParams(q, 7, 3) if q == 2 else None
    got = inner(hat(u), hat(v))
    assert got == brute_inner(u, v)
    if p:
        assert got == predicted_inner(u.dim, v.dim, meet(u, v).dim, p)


def test_vertex_cosines(p273, rng):
    # <x̂, ŷ> = [n][k-i] - [k]^2 by distance
    want = [840, 332, 78, -49]
    for i in range(4):
        x, y, _ = witness_pair(p273, i, rng)
        assert inner(hat(x), hat(y)) == want[i]
    assert norm2(hat(random_vertex(rng, p273))) == 840


@pytest.mark.parametrize("q,n,k,theta1", [(2, 7, 3, 83), (3, 7, 3, 467)])
def test_theta1_sum(q, n, k, theta1, rng):
    p = QParams(q, n, k)
    assert p.theta[1] == theta1
    for _ in range(3 if q == 2 else 1):
        assert theta1_sum_check(random_vertex(rng, p), p).is_zero()


def test_combination_exactness(p273, rng):
    x = hat(random_vertex(rng, p273))
    half = combination([Fraction(1, 2), Fraction(1, 2)], [x, x])
    assert half == x
    with pytest.raises(InexactError):
        combination([Fraction(1, 3)], [point_hat(0, 2, 7)])


def test_swap_acts_on_hats(p273, rng):
    x, y, basis = witness_pair(p273, 2, rng)
    perm = point_permutation(swap_matrix(p273, 2, basis), 2, 7)
    assert act(perm, hat(x)) == hat(y)
    d = hat(x) - hat(y)
    assert act(perm, d) == -d


def test_hat_sum_matches_loop(p273, rng):
    us = [random_vertex(rng, p273) for _ in range(10)]
    total = hat_sum(us, 2, 7)
    assert np.array_equal(total.coords, sum(hat(u).coords for u in us))
