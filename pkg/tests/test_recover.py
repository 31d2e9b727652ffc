import random
from fractions import Fraction as F

import pytest

from qgrass import exact
from qgrass.euclid import act, hat, inner
from qgrass.graph import DistanceError, swap_matrix, witness_pair
from qgrass.qarith import ParameterError, QParams
from qgrass.recover import (
    KINDS,
    VARIANTS,
    PairVectors,
    empirical_table,
    geometric_basis,
    gram_table,
    m_inverse,
    perp_from_combinatorial,
    perp_vector,
    recover_from_vectors,
    recover_meet_join,
    recovery_coeffs,
    transition,
    transition_det,
    xi,
    zeta,
)
from qgrass.subspace import join, meet, point_permutation

from conftest import GRID

GEO_273 = [[840, 78, 120, 672], [78, 840, 120, 672], [120, 120, 126, 96], [672, 672, 96, 2976]]


@pytest.fixture(scope="module")
def pair273():
    p = QParams(2, 7, 3)
    x, y, basis = witness_pair(p, 2, random.Random(7))
    return p, x, y, basis, PairVectors.of(x, y, p)


def test_geometric_table_values(p273):
    assert [list(r) for r in gram_table("geometric", p273, 2).entries] == GEO_273


def test_mixed_table_values(pair273):
    p, x, y, _, pv = pair273
    assert inner(pv.B, pv.x) == 31872
    assert inner(pv.B, hat(meet(x, y))) == -672
    # [i]^2([n][k-i+1] - [k]^2) = 9 * (127*3 - 49)
    assert inner(pv.C, pv.y) == 2988
    mixed = gram_table("mixed", p, 2).entries
    assert mixed[2][0] == 31872 and mixed[2][2] == -672 and mixed[3][1] == 2988


def test_m_inverse_values(p273):
    Minv = m_inverse(p273, 2)
    pre = F(1, 2286)
    assert [Minv[0][0], Minv[0][1], Minv[0][2], Minv[0][3]] == [4 * pre, pre, -4 * pre, -pre]
    assert Minv[2][2] == 25 * pre and Minv[3][3] == F(19, 16) * pre


@pytest.mark.parametrize("q,n,k,i", GRID)
def test_m_inverse_grid(q, n, k, i):
    p = QParams(q, n, k)
    assert exact.is_identity(exact.matmul(gram_table("geometric", p, i).entries, m_inverse(p, i)))
    # independent route: Gauss-Jordan on the closed-form table
    assert exact.inverse(gram_table("geometric", p, i).entries) == m_inverse(p, i)


def test_recovery_coefficients(p273):
    cap, plus = recovery_coeffs("full", p273, 2)
    assert cap == [F(7, 4), F(1, 4), F(-1, 32), F(-1, 8)]
    assert plus == [-9, -3, F(1, 8), F(3, 2)]
    check = transition("comb->geo", "check", p273, 2).entries
    assert [list(r) for r in check] == [[F(-1, 32), F(1, 8)], [F(-1, 8), F(3, 2)]]


@pytest.mark.parametrize("q,n,k,i", GRID)
def test_transitions_are_inverse(q, n, k, i):
    p = QParams(q, n, k)
    for v in VARIANTS:
        fwd = transition("geo->comb", v, p, i)
        back = transition("comb->geo", v, p, i)
        assert exact.is_identity(exact.matmul(fwd.entries, back.entries))
        assert fwd.det == transition_det(p, i)
        # closed-form inverse vs Gauss-Jordan
        assert exact.inverse(fwd.entries) == [list(r) for r in back.entries]


def test_det_value(p273):
    assert transition_det(p273, 2) == -32
    assert all(transition("geo->comb", v, p273, 2).det == -32 for v in VARIANTS)


@pytest.mark.parametrize("q,n,k,i", GRID)
def test_tables_closed_vs_empirical(q, n, k, i):
    p = QParams(q, n, k)
    x, y, _ = witness_pair(p, i, random.Random(q * 100 + n * 10 + i))
    pv = PairVectors.of(x, y, p)
    for kind in KINDS:
        assert [list(r) for r in gram_table(kind, p, i).entries] == empirical_table(kind, x, y, p, pv)


@pytest.mark.parametrize("q,n,k,i", GRID)
def test_recovery_grid(q, n, k, i):
    p = QParams(q, n, k)
    rng = random.Random(i)
    for _ in range(3):
        x, y, _ = witness_pair(p, i, rng)
        pv = PairVectors.of(x, y, p)
        for v in VARIANTS:
            cap, plus = recover_from_vectors(pv, v)
            assert cap == hat(meet(x, y)) and plus == hat(join(x, y))


def test_recover_rejects_bad_distance(p273):
    x, y, _ = witness_pair(p273, 1, random.Random(0))
    with pytest.raises(DistanceError):
        recover_meet_join(x, y, "full", p273)
    with pytest.raises(ParameterError):
        recovery_coeffs("full", p273, 3)
    with pytest.raises(ValueError):
        recovery_coeffs("diagonal", p273, 2)


def test_balanced_sets(pair273):
    p, x, y, _, pv = pair273
    rev = PairVectors.of(y, x, p)
    assert zeta(p, 2) == 48 and xi(p, 2) == 0
    d = pv.x - pv.y
    assert pv.B - rev.B == 48 * d
    assert pv.C - rev.C == 0 * d
    # bar forms are symmetric in x and y
    assert pv.combinatorial_basis("bar")[1] == rev.combinatorial_basis("bar")[1]
    assert pv.combinatorial_basis("bar")[2] == rev.combinatorial_basis("bar")[2]


@pytest.mark.parametrize("q,n,k,i", [(2, 9, 4, 3), (3, 7, 3, 2)])
def test_balanced_sets_grid(q, n, k, i):
    p = QParams(q, n, k)
    x, y, _ = witness_pair(p, i, random.Random(5))
    a, b = PairVectors.of(x, y, p), PairVectors.of(y, x, p)
    assert a.B - b.B == zeta(p, i) * (a.x - a.y)
    assert a.C - b.C == xi(p, i) * (a.x - a.y)


def test_perp(pair273):
    p, x, y, _, pv = pair273
    v = perp_vector(x, y, p)
    hx, hy, hc, hs = geometric_basis(x, y)
    assert v == 5 * (hx + hy) - 8 * hc - 2 * hs
    assert inner(v, hc) == 0 and inner(v, hs) == 0
    assert not v.is_zero()
    assert perp_from_combinatorial(pv) == v


def test_basis_ranks(pair273):
    p, x, y, _, pv = pair273
    def gram_rank(vs):
        return exact.rank([[inner(a, b) for b in vs] for a in vs])
    assert gram_rank(geometric_basis(x, y)) == 4
    assert gram_rank(pv.combinatorial_basis("full")) == 4
    assert gram_rank(pv.combinatorial_basis("bar")) == 3
    assert gram_rank(pv.combinatorial_basis("check")) == 2


def test_swap_eigenspaces(pair273):
    p, x, y, basis, pv = pair273
    perm = point_permutation(swap_matrix(p, 2, basis), 2, 7)
    d = pv.x - pv.y
    assert act(perm, d) == -d
    for w in geometric_basis(x, y, "bar"):
        assert act(perm, w) == w
    for w in pv.combinatorial_basis("bar"):
        assert act(perm, w) == w


def test_json_layout(p273):
    js = gram_table("geometric", p273, 2).to_json()
    assert js["labels"] == ["x", "y", "x∩y", "x+y"]
    assert js["entries"][0][0] == [840, 1]
    tj = transition("geo->comb", "full", p273, 2).to_json()
    assert tj["det"] == [-32, 1]
