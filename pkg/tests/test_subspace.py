import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from qgrass.field import field
from qgrass.qarith import gauss_binom, qint
from qgrass.subspace import (
    DimensionError,
    contains,
    enumerate_subspaces,
    gl_apply,
    gl_random,
    join,
    meet,
    omega,
    parse_subspace,
    point_permutation,
    point_space,
    random_subspace,
    rref_canonical,
    subspaces_of,
)


def vector_set(u):
    """All vectors of u by brute expansion (prime q only)."""
    out = set()
    for cs in itertools.product(range(u.q), repeat=u.dim):
        out.add(tuple(sum(c * r[t] for c, r in zip(cs, u.rows)) % u.q for t in range(u.n)))
    return frozenset(out)


@pytest.mark.parametrize("q,n", [(2, 4), (3, 3), (2, 5)])
def test_meet_join_against_vector_sets(q, n):
    rng = random.Random(q * 10 + n)
    for _ in range(60):
        u = random_subspace(rng, rng.randint(0, n), q, n)
        v = random_subspace(rng, rng.randint(0, n), q, n)
        U, V = vector_set(u), vector_set(v)
        assert vector_set(meet(u, v)) == U & V
        J = vector_set(join(u, v))
        assert U | V <= J
        assert len(J) == q ** join(u, v).dim
        assert len(J) * len(U & V) == len(U) * len(V)


@pytest.mark.parametrize("q", [2, 3, 4, 5])
def test_rref_is_canonical(q):
    rng = random.Random(q)
    n = 5
    for _ in range(30):
        u = random_subspace(rng, 3, q, n)
        # random invertible recombination of the rows
        g = gl_random((q, 3), rng.randrange(10**6))
        rows = [[0] * n for _ in range(3)]
        F = field(q)
        for a in range(3):
            for b in range(3):
                for t in range(n):
                    rows[a][t] = F.add[rows[a][t]][F.mul[g[a][b]][u.rows[b][t]]]
        assert rref_canonical(rows + [[0] * n], q, n) == u


@pytest.mark.parametrize("q,n", [(2, 7), (3, 4), (4, 4), (5, 3)])
def test_enumeration_counts(q, n):
    for ell in range(n + 1):
        subs = list(enumerate_subspaces(ell, q, n))
        assert len(subs) == len(set(subs)) == gauss_binom(n, ell, q)
        assert all(s.dim == ell for s in subs)


def test_points_and_omega(p273):
    ps = point_space(2, 7)
    assert len(ps) == 127
    for u in enumerate_subspaces(3, 2, 7):
        assert len(omega(u)) == 7
    rng = random.Random(0)
    for _ in range(100):
        d = rng.randint(0, 7)
        u = random_subspace(rng, d, 2, 7)
        assert len(omega(u)) == qint(d, 2)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([2, 3, 4]), st.integers(0, 2**32), st.integers(0, 5), st.integers(0, 5))
def test_modularity_and_omega_laws(q, seed, du, dv):
    n = 5
    rng = random.Random(seed)
    u, v = random_subspace(rng, du, q, n), random_subspace(rng, dv, q, n)
    m, j = meet(u, v), join(u, v)
    assert u.dim + v.dim == m.dim + j.dim
    assert omega(m) == omega(u) & omega(v)
    assert omega(u) | omega(v) <= omega(j)
    assert contains(j, u) and contains(u, m)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([2, 3]), st.integers(0, 2**32))
def test_gl_action(q, seed):
    n = 5
    rng = random.Random(seed)
    sigma = gl_random((q, n), seed)
    u, v = random_subspace(rng, 2, q, n), random_subspace(rng, 2, q, n)
    su, sv = gl_apply(sigma, u), gl_apply(sigma, v)
    assert su.dim == 2
    assert meet(su, sv) == gl_apply(sigma, meet(u, v))
    perm = point_permutation(sigma, q, n)
    assert sorted(perm) == list(range(len(perm)))
    assert frozenset(perm[s] for s in omega(u)) == omega(su)


def test_subspaces_of():
    u = random_subspace(random.Random(1), 4, 3, 6)
    subs = list(subspaces_of(u, 2))
    assert len(set(subs)) == gauss_binom(4, 2, 3)
    assert all(contains(u, w) for w in subs)


def test_parse_roundtrip():
    u = random_subspace(random.Random(2), 3, 5, 6)
    assert parse_subspace(u.serialize(), 5, 6) == u
    assert parse_subspace("", 2, 3).dim == 0
    with pytest.raises(DimensionError):
        parse_subspace("1 0", 2, 3)
    with pytest.raises(ValueError):
        parse_subspace("1 0 2", 2, 3)
