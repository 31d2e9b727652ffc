import itertools

import pytest
from hypothesis import given, strategies as st

from qgrass.qarith import ParameterError, QParams, eigenvalue, gauss_binom, intersection_numbers, is_prime_power, qint


def brute_count(m, r, q):
    """Count r-dim subspaces of F_q^m (q prime) as distinct sets of vectors."""
    vecs = list(itertools.product(range(q), repeat=m))
    spans = set()
    for gens in itertools.combinations(vecs[1:], r):
        span = set()
        for cs in itertools.product(range(q), repeat=r):
            span.add(tuple(sum(c * g[t] for c, g in zip(cs, gens)) % q for t in range(m)))
        if len(span) == q**r:
            spans.add(frozenset(span))
    return len(spans)


@pytest.mark.parametrize("q,m", [(2, 1), (2, 2), (2, 3), (2, 4), (3, 2), (3, 3)])
def test_gauss_binom_matches_brute_force(q, m):
    for r in range(m + 1):
        assert gauss_binom(m, r, q) == brute_count(m, r, q)


def test_qint_values():
    assert [qint(m, 2) for m in range(8)] == [0, 1, 3, 7, 15, 31, 63, 127]
    assert qint(3, 3) == 13
    with pytest.raises(ParameterError):
        qint(-1, 2)


@given(st.sampled_from([2, 3, 4, 5]), st.integers(1, 12), st.data())
def test_q_pascal_and_symmetry(q, m, data):
    r = data.draw(st.integers(1, m))
    assert gauss_binom(m, r, q) == gauss_binom(m, m - r, q)
    if r < m:
        assert gauss_binom(m, r, q) == gauss_binom(m - 1, r - 1, q) + q**r * gauss_binom(m - 1, r, q)


def test_product_formula_for_m_up_to_12():
    for q in (2, 3):
        for m in range(13):
            for r in range(m + 1):
                num = den = 1
                for t in range(r):
                    num *= q**m - q**t
                    den *= q**r - q**t
                assert gauss_binom(m, r, q) == num // den


def test_params_273(p273):
    assert p273.kappa == 210
    assert list(p273.b) == [210, 168, 96, 0]
    assert list(p273.c) == [0, 1, 9, 49]
    assert list(p273.theta) == [210, 83, 21, -7]
    assert p273.num_points == 127 and p273.num_vertices == 11811
    assert p273.sphere_sizes() == [1, 210, 3920, 7680]
    assert sum(p273.sphere_sizes()) == 11811


def test_functional_forms(p273):
    b, a, c = intersection_numbers(p273)
    assert all(x + y + z == 210 for x, y, z in zip(b, a, c))
    assert [eigenvalue(i, p273) for i in range(4)] == [210, 83, 21, -7]


@pytest.mark.parametrize("q,n,k", [(2, 6, 3), (2, 5, 2), (6, 7, 3), (1, 7, 3), (2, 7, 2)])
def test_bad_params_rejected(q, n, k):
    with pytest.raises(ParameterError):
        QParams(q, n, k)


def test_prime_powers():
    assert [q for q in range(2, 30) if is_prime_power(q)] == [2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 17, 19, 23, 25, 27, 29]
