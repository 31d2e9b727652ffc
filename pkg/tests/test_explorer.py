from collections import Counter

import numpy as np
import pytest

from qgrass.euclid import hat, inner
from qgrass.explorer import (
    ExternalGraph,
    GraphFormatError,
    GraphValidationError,
    closed_form_cosines,
    cosine_table,
    equitable_check,
    find_pair,
    load_graph,
    parse_graph,
    problem1_spectrum,
    problem2_partner_partition,
    problem3_geodesic_closure,
    rho_meet_join_coeffs,
    write_graph,
)
from qgrass.graph import grassmann_graph
from qgrass.qarith import QParams, gauss_binom
from qgrass.subspace import meet


def test_cosines(p273):
    assert cosine_table(p273).w == (840, 332, 78, -49)
    for q, n, k in [(2, 9, 4), (3, 7, 3), (4, 8, 3)]:
        p = QParams(q, n, k)
        assert list(cosine_table(p).w) == closed_form_cosines(p)


def test_rho_coeffs(p273):
    cap, plus = rho_meet_join_coeffs(p273, 2)
    assert [str(c) for c in cap] == ["7/4", "1/4", "-1/32", "-1/8"]


def test_parse_errors():
    with pytest.raises(GraphFormatError):
        parse_graph("")
    with pytest.raises(GraphFormatError):
        parse_graph("graph 2 7 3\nvertices 1\n0:\n")
    with pytest.raises(GraphFormatError):
        parse_graph("drg 2 6 3\nvertices 1\n0:\n")   # n > 2k violated
    with pytest.raises(GraphFormatError):
        parse_graph("drg 2 7 3\nvertices 2\n0: 1\n")   # vertex 1 missing
    with pytest.raises(GraphFormatError):
        parse_graph("drg 2 7 3\nvertices 3\n0: 2 1\n1: 0\n2: 0\n")   # unsorted
    with pytest.raises(GraphFormatError):
        parse_graph("drg 2 7 3\nvertices 2\n0: 5\n1: 0\n")


def test_parse_comments_and_blanks():
    params, adj = parse_graph("# header\ndrg 2 7 3\n\nvertices 2  # two\n1: 0\n0: 1\n")
    assert params == QParams(2, 7, 3)
    assert adj == [[1], [0]]


def test_validation_rejects_wrong_count(tmp_path):
    path = tmp_path / "tiny.txt"
    write_graph(path, QParams(2, 7, 3), [[1], [0]])
    with pytest.raises(GraphValidationError, match="vertex count"):
        load_graph(path)


def _tampered(adj):
    """Swap two edges a-b, c-d into a-d, c-b; degrees are unchanged."""
    adj = [list(a) for a in adj]
    a = 0
    b = adj[a][0]
    c = next(v for v in range(len(adj)) if v not in adj[a] and v != a and b not in adj[v]
             and any(d not in adj[a] and d != a for d in adj[v]))
    d = next(d for d in adj[c] if d not in adj[a] and d != a and d != b)
    for u, old, new in ((a, b, d), (b, a, c), (c, d, b), (d, c, a)):
        adj[u].remove(old)
        adj[u].append(new)
        adj[u].sort()
    return adj


def test_tampered_graph_rejected(tmp_path, p273):
    g = grassmann_graph(p273)
    path = tmp_path / "bad.txt"
    write_graph(path, p273, _tampered(g.adj))
    with pytest.raises(GraphValidationError, match="intersection numbers"):
        load_graph(path)


def test_asymmetric_graph_rejected(tmp_path, p273):
    g = grassmann_graph(p273)
    adj = [list(a) for a in g.adj]
    adj[0][0] = next(v for v in range(1, 11811) if v not in adj[0] and v > adj[0][0])
    adj[0].sort()
    path = tmp_path / "asym.txt"
    write_graph(path, p273, adj)
    with pytest.raises(GraphValidationError, match="one side"):
        load_graph(path)


def test_small_geodesic_cases():
    # 6-cycle, claimed parameters are irrelevant for problem 3
    adj = [[1, 5], [0, 2], [1, 3], [2, 4], [3, 5], [0, 4]]
    G = ExternalGraph(QParams(2, 7, 3), adj)
    assert problem3_geodesic_closure(G, [2], 0).flag
    r = problem3_geodesic_closure(G, [0, 1], 1)
    assert r.closed and r.diameter == 1 and r.flag
    r = problem3_geodesic_closure(G, [0, 2], 2)
    assert not r.closed and r.witness == (0, 1)
    # antipodal vertices: both 3-paths are geodesics
    assert not problem3_geodesic_closure(G, [0, 1, 2, 3], 3).closed
    assert problem3_geodesic_closure(G, range(6), 3).flag
    with pytest.raises(ValueError):
        problem3_geodesic_closure(G, [], 0)


def test_native_roundtrip(native_graph, p273):
    G = native_graph
    assert G.vertex_count == 11811
    x, y = find_pair(G, 2)
    p1 = problem1_spectrum(G, x, y)
    assert p1.allowed == [120, -7]
    assert p1.flag
    assert Counter(p1.values) == {120: 651, -7: 11160}
    assert p1.values[x] == 120
    assert len(p1.pair.B) == 96 and len(p1.pair.C) == 9
    p2 = problem2_partner_partition(G, x, y, p1)
    assert p2.equitable
    assert len(p2.classes[120]) == gauss_binom(6, 2, 2) == 651
    p3 = problem3_geodesic_closure(G, p2.classes[120], 2)
    assert p3.closed and p3.diameter == 2 and p3.flag


def test_rho_values_match_hat_values(native_graph, p273):
    # full-pipeline cross-oracle: graph distances only vs subspace lattice
    g = grassmann_graph(p273)
    G = native_graph
    x, y = find_pair(G, 2, x=17)
    p1 = problem1_spectrum(G, x, y)
    hc = hat(meet(g.vertices[x], g.vertices[y]))
    direct = [inner(hc, hat(z)) for z in g.vertices]
    assert p1.values == direct


def test_non_equitable_partition_detected(native_graph):
    labels = np.zeros(native_graph.vertex_count, dtype=np.int64)
    labels[:5] = 1
    ok, _ = equitable_check(native_graph, labels)
    assert not ok
