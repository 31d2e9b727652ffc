import random

import pytest

from qgrass.graph import (
    CapExceeded,
    DistanceError,
    GrassmannGraph,
    bc_sets,
    bfs_oracle,
    distance,
    grassmann_graph,
    neighbor_profile,
    neighbors,
    stab_partition_p1,
    swap_matrix,
    witness_pair,
)
from qgrass.qarith import QParams
from qgrass.subspace import contains, gl_apply, join, meet, random_basis, random_vertex, rref_canonical


def test_neighbors_count_and_adjacency(p273, rng):
    for _ in range(5):
        x = random_vertex(rng, p273)
        nb = neighbors(x, p273)
        assert len(nb) == len(set(nb)) == 210
        assert all(distance(x, z) == 1 for z in nb)


def test_bfs_agrees_with_meet_dimension(p273, rng):
    x = random_vertex(rng, p273)
    d = bfs_oracle(x, p273)
    assert len(d) == 11811
    for y in rng.sample(list(d), 300):
        assert d[y] == distance(x, y)
    counts = [0] * 4
    for v in d.values():
        counts[v] += 1
    assert counts == p273.sphere_sizes()


def test_graph_is_regular(p273):
    g = grassmann_graph(p273)
    assert {len(a) for a in g.adj} == {210}
    indptr, indices = g.csr()
    assert indptr[-1] == 11811 * 210


def test_cap():
    with pytest.raises(CapExceeded):
        GrassmannGraph(QParams(2, 9, 4), cap=50_000)


@pytest.mark.parametrize("q,n,k", [(2, 7, 3), (2, 9, 4), (3, 7, 3)])
def test_witness_pairs(q, n, k, rng):
    p = QParams(q, n, k)
    for i in range(k + 1):
        x, y, basis = witness_pair(p, i, rng)
        assert distance(x, y) == i
        assert join(x, y).dim == k + i
        sigma = swap_matrix(p, i, basis)
        assert gl_apply(sigma, x) == y and gl_apply(sigma, y) == x


def test_bc_sets_sizes_and_containment(p273, rng):
    x, y, _ = witness_pair(p273, 2, rng)
    B, C = bc_sets(x, y, p273)
    assert (len(B), len(C)) == (96, 9)
    m, j = meet(x, y), join(x, y)
    assert all(contains(z, m) and contains(j, z) for z in C)
    assert neighbor_profile(x, y, p273) == {1: 9, 2: 105, 3: 96}


def test_bc_sets_reject_boundary_distances(p273, rng):
    for i in (0, 1, 3):
        x, y, _ = witness_pair(p273, i, rng)
        with pytest.raises(DistanceError):
            bc_sets(x, y, p273)


def test_stab_partition_case1(p273, rng):
    x, y, _ = witness_pair(p273, 2, rng)
    part = stab_partition_p1(x, y)
    assert part.case_id == 1
    assert part.sizes == (1, 6, 6, 18, 96)


def test_stab_partition_other_cases():
    rng = random.Random(3)
    e = random_basis(rng, 2, 7)
    span = lambda idx: rref_canonical([e[t] for t in idx], 2, 7)
    cases = {
        3: (span([0, 1, 2]), span([3, 4, 5])),
        4: (span([0, 1, 2]), span([3, 4, 5, 6])),
        2: (span([0, 1, 2, 3]), span([0, 4, 5, 6])),
        1: (span([0, 1, 2]), span([0, 3, 4])),
        5: (span([0, 1]), span([0, 1, 2])),
        6: (span([0, 1, 2]), span([0, 1])),
    }
    for case, (u, v) in cases.items():
        part = stab_partition_p1(u, v)
        assert part.case_id == case
        assert sum(part.sizes) == 127
    with pytest.raises(ValueError):
        stab_partition_p1(span([0]), span([0]))
