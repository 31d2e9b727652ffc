"""Diagnostics for graphs that merely claim the intersection numbers of J_q(n,k).

Nothing here assumes the input is a Grassmann graph: distances come from BFS
only, and B_x'y', C_x'y' are read off those distances.

Graph file format (text)::

    drg q n k
    vertices N
    0: 3 17 42 ...
    1: ...

0-based ids, neighbors ascending, blank lines and '#' comments ignored.
"""

from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import shortest_path

from .graph import GrassmannGraph, grassmann_graph
from .qarith import ParameterError, QParams
from .recover import recovery_coeffs


class GraphFormatError(ValueError):
    pass


class GraphValidationError(ValueError):
    pass


# ---------------------------------------------------------------------------
# file IO

def write_graph(path, params: QParams, adj: Sequence[Sequence[int]]) -> None:
    with open(path, "w") as fh:
        fh.write(f"drg {params.q} {params.n} {params.k}\n")
        fh.write(f"vertices {len(adj)}\n")
        for v, nbrs in enumerate(adj):
            fh.write(f"{v}: {' '.join(map(str, sorted(nbrs)))}\n")


def export_native(path, params: QParams, cap: int) -> GrassmannGraph:
    g = grassmann_graph(params, cap)
    write_graph(path, params, g.adj)
    return g


def _lines(text: str) -> Iterable[Tuple[int, str]]:
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield no, line


def parse_graph(text: str) -> Tuple[QParams, List[List[int]]]:
    it = iter(_lines(text))
    try:
        no, header = next(it)
        parts = header.split()
        if len(parts) != 4 or parts[0] != "drg":
            raise GraphFormatError(f"line {no}: expected 'drg q n k', got {header!r}")
        q, n, k = (int(p) for p in parts[1:])
        no, count = next(it)
        parts = count.split()
        if len(parts) != 2 or parts[0] != "vertices":
            raise GraphFormatError(f"line {no}: expected 'vertices N', got {count!r}")
        N = int(parts[1])
    except StopIteration:
        raise GraphFormatError("missing header lines") from None
    except ValueError as exc:
        if isinstance(exc, GraphFormatError):
            raise
        raise GraphFormatError(f"bad header: {exc}") from None
    try:
        params = QParams(q, n, k)
    except ParameterError as exc:
        raise GraphFormatError(f"claimed parameters rejected: {exc}") from None

    adj: List[Optional[List[int]]] = [None] * N
    for no, line in it:
        head, sep, rest = line.partition(":")
        if not sep:
            raise GraphFormatError(f"line {no}: expected 'v: n1 n2 ...'")
        try:
            v = int(head)
            nbrs = [int(t) for t in rest.split()]
        except ValueError:
            raise GraphFormatError(f"line {no}: non-integer id") from None
        if not 0 <= v < N:
            raise GraphFormatError(f"line {no}: vertex {v} outside 0..{N - 1}")
        if adj[v] is not None:
            raise GraphFormatError(f"line {no}: vertex {v} listed twice")
        if any(not 0 <= w < N for w in nbrs):
            raise GraphFormatError(f"line {no}: neighbor id outside 0..{N - 1}")
        if any(a >= b for a, b in zip(nbrs, nbrs[1:])):
            raise GraphFormatError(f"line {no}: neighbors of {v} not strictly ascending")
        adj[v] = nbrs
    missing = [v for v, a in enumerate(adj) if a is None]
    if missing:
        raise GraphFormatError(f"{len(missing)} vertices have no adjacency line (first: {missing[0]})")
    return params, adj  # type: ignore[return-value]


# ---------------------------------------------------------------------------
# the graph

@dataclass
class ExternalGraph:
    params: QParams
    adjacency: List[List[int]]
    _bfs: Dict[int, np.ndarray] = field(default_factory=dict, repr=False)

    def __post_init__(self):
        deg = np.array([len(a) for a in self.adjacency], dtype=np.int64)
        self.indptr = np.concatenate([[0], np.cumsum(deg)])
        self.indices = np.fromiter((b for a in self.adjacency for b in a), dtype=np.int64,
                                   count=int(self.indptr[-1]))
        self.src = np.repeat(np.arange(len(self.adjacency)), deg)
        data = np.ones(len(self.indices), dtype=np.int32)
        self.matrix = csr_matrix((data, self.indices, self.indptr),
                                 shape=(len(self.adjacency), len(self.adjacency)))

    def _bfs_row(self, s: int) -> np.ndarray:
        # level-synchronous BFS, one sparse mat-vec per layer
        dist = np.full(self.vertex_count, -1, dtype=np.int64)
        dist[s] = 0
        front = np.zeros(self.vertex_count, dtype=np.int32)
        front[s] = 1
        level = 0
        while True:
            nxt = (self.matrix @ front > 0) & (dist < 0)
            if not nxt.any():
                return dist
            level += 1
            dist[nxt] = level
            front = nxt.astype(np.int32)

    @property
    def vertex_count(self) -> int:
        return len(self.adjacency)

    def distances(self, sources: Sequence[int]) -> np.ndarray:
        """BFS distance rows for the sources (cached per source); -1 = unreachable."""
        for s in sources:
            if s not in self._bfs:
                self._bfs[s] = self._bfs_row(s)
        return np.stack([self._bfs[s] for s in sources])

    def dist(self, a: int, b: int) -> int:
        return int(self.distances([a])[0, b])

    def neighbors(self, v: int) -> List[int]:
        return self.adjacency[v]


def _check_simple(G: "ExternalGraph") -> None:
    loops = np.flatnonzero(G.src == G.indices)
    if len(loops):
        raise GraphValidationError(f"loop at vertex {int(G.src[loops[0]])}")
    asym = (G.matrix != G.matrix.T).tocoo()
    if asym.nnz:
        v, w = int(asym.row[0]), int(asym.col[0])
        raise GraphValidationError(f"edge between {v} and {w} is listed on one side only (graph must be undirected)")


def intersection_profile(G: ExternalGraph, x: int) -> Dict[int, Tuple[set, set, set]]:
    """For every distance i from x, the sets of observed (c, a, b) values over
    vertices y at distance i."""
    D = G.distances([x])[0]
    dsrc, ddst = D[G.src], D[G.indices]
    N = G.vertex_count
    diff = ddst - dsrc
    c = np.bincount(G.src[diff == -1], minlength=N)
    a = np.bincount(G.src[diff == 0], minlength=N)
    b = np.bincount(G.src[diff == 1], minlength=N)
    out = {}
    for i in range(int(D.max()) + 1):
        mask = D == i
        out[i] = (set(c[mask].tolist()), set(a[mask].tolist()), set(b[mask].tolist()))
    return out


def validate_graph(G: ExternalGraph, sources: Sequence[int]) -> None:
    p = G.params
    if G.vertex_count != p.num_vertices:
        raise GraphValidationError(
            f"vertex count {G.vertex_count} differs from gauss_binom({p.n},{p.k},{p.q}) = {p.num_vertices}"
        )
    _check_simple(G)
    degs = {len(a) for a in G.adjacency}
    if degs != {p.kappa}:
        bad = next(v for v, a in enumerate(G.adjacency) if len(a) != p.kappa)
        raise GraphValidationError(
            f"not regular of degree kappa={p.kappa}: vertex {bad} has degree {len(G.adjacency[bad])}"
        )
    unreached = np.flatnonzero(G.distances([sources[0]])[0] < 0)
    if len(unreached):
        raise GraphValidationError(f"graph is disconnected (vertex {int(unreached[0])} unreachable)")
    for x in sources:
        prof = intersection_profile(G, x)
        if max(prof) != p.k:
            raise GraphValidationError(f"eccentricity of vertex {x} is {max(prof)}, expected {p.k}")
        for i, (cs, as_, bs) in prof.items():
            want = ({p.c[i]}, {p.a[i]}, {p.b[i]})
            if (cs, as_, bs) != want:
                raise GraphValidationError(
                    f"intersection numbers at distance {i} from vertex {x}: "
                    f"c in {sorted(cs)}, a in {sorted(as_)}, b in {sorted(bs)}; "
                    f"expected c={p.c[i]}, a={p.a[i]}, b={p.b[i]}"
                )


def load_graph(path, validate: bool = True, n_sources: int = 8, seed: int = 0) -> ExternalGraph:
    params, adj = parse_graph(Path(path).read_text())
    G = ExternalGraph(params, adj)
    if validate:
        rng = random.Random(seed)
        sources = [0] + [rng.randrange(G.vertex_count) for _ in range(max(0, n_sources - 1))]
        validate_graph(G, sources)
    return G


# ---------------------------------------------------------------------------
# cosines and the rho vectors

@dataclass(frozen=True)
class CosineTable:
    params: QParams
    w: Tuple[int, ...]
    residuals: Tuple[Fraction, ...]


def closed_form_cosines(params: QParams) -> List[int]:
    b, n, k = params.qi, params.n, params.k
    return [b(n) * b(k - i) - b(k) ** 2 for i in range(k + 1)]


def cosine_table(params: QParams) -> CosineTable:
    """w_i from c_i w_{i-1} + a_i w_i + b_i w_{i+1} = theta_1 w_i, w_0 = q^k[k][n-k]."""
    q, n, k = params.q, params.n, params.k
    th = params.theta[1]
    w = [Fraction(q**k * params.qi(k) * params.qi(n - k))]
    for i in range(k):
        prev = w[i - 1] if i else Fraction(0)
        w.append(((th - params.a[i]) * w[i] - params.c[i] * prev) / params.b[i])
    res = []
    for i in range(k + 1):
        prev = w[i - 1] if i else Fraction(0)
        nxt = w[i + 1] if i < k else Fraction(0)
        res.append(params.c[i] * prev + params.a[i] * w[i] + params.b[i] * nxt - th * w[i])
    if any(v.denominator != 1 for v in w):
        raise ArithmeticError(f"non-integral cosine table {w}")
    ints = tuple(int(v) for v in w)
    if list(ints) != closed_form_cosines(params):
        raise ArithmeticError(f"cosine table {ints} differs from [n][k-i]-[k]^2")
    if any(res):
        raise ArithmeticError(f"recurrence residuals {res}")
    return CosineTable(params, ints, tuple(res))


def rho_meet_join_coeffs(params: QParams, i: int) -> Tuple[List[Fraction], List[Fraction]]:
    """Coefficients over (rho(x'), rho(y'), B_x'y', C_x'y') of the meet and join mimics."""
    return recovery_coeffs("full", params, i)


def allowed_values(params: QParams, i: int) -> List[int]:
    b, n, k = params.qi, params.n, params.k
    return [b(n) * b(k - i - l) - b(k - i) * b(k) for l in range(k - i + 1)]


# ---------------------------------------------------------------------------
# problems 1-3

@dataclass
class PairData:
    x: int
    y: int
    i: int
    B: List[int]
    C: List[int]


def pair_data(G: ExternalGraph, x: int, y: int) -> PairData:
    k = G.params.k
    Dx, Dy = G.distances([x, y])
    i = int(Dx[y])
    if i < 0:
        raise GraphValidationError(f"vertices {x} and {y} are disconnected")
    if not 1 < i < k:
        raise ParameterError(f"need 1 < d(x',y') < k={k}, got {i}")
    nbrs = np.asarray(G.neighbors(x))
    B = nbrs[Dy[nbrs] == i + 1].tolist()
    C = nbrs[Dy[nbrs] == i - 1].tolist()
    return PairData(x, y, i, B, C)


def find_pair(G: ExternalGraph, i: int, x: int = 0) -> Tuple[int, int]:
    D = G.distances([x])[0]
    hits = np.flatnonzero(D == i)
    if not len(hits):
        raise ParameterError(f"no vertex at distance {i} from {x}")
    return x, int(hits[0])


@dataclass
class Problem1Result:
    pair: PairData
    values: List[Fraction]
    allowed: List[int]
    flag: bool

    @property
    def spectrum(self) -> Counter:
        return Counter(self.values)


def problem1_spectrum(G: ExternalGraph, x: int, y: int) -> Problem1Result:
    """<rho(x'∩y'), rho(z')> for every z', from BFS distances and the cosines."""
    p = G.params
    pd = pair_data(G, x, y)
    cap, _ = rho_meet_join_coeffs(p, pd.i)
    L = lcm(*(c.denominator for c in cap))
    scaled = [int(c * L) for c in cap]
    wt = cosine_table(p).w
    bound = max(map(abs, wt)) * max(map(abs, scaled)) * (len(pd.B) + len(pd.C) + 2)
    w = np.array(wt, dtype=np.int64 if bound < 1 << 62 else object)
    Dx, Dy = G.distances([x, y])
    sB = w[G.distances(pd.B)].sum(axis=0)
    sC = w[G.distances(pd.C)].sum(axis=0)
    num = scaled[0] * w[Dx] + scaled[1] * w[Dy] + scaled[2] * sB + scaled[3] * sC
    values = [Fraction(int(v), L) for v in num]
    allowed = allowed_values(p, pd.i)
    allowed_set = set(allowed)
    flag = all(v in allowed_set for v in values)
    return Problem1Result(pd, values, allowed, flag)


@dataclass
class Problem2Result:
    classes: Dict[Fraction, List[int]]
    equitable: bool
    quotient: Optional[List[List[int]]]


def equitable_check(G: ExternalGraph, labels: np.ndarray) -> Tuple[bool, Optional[List[List[int]]]]:
    """Exhaustive: every vertex of a class has the same number of neighbors in each class."""
    ncls = int(labels.max()) + 1
    counts = np.zeros((G.vertex_count, ncls), dtype=np.int64)
    np.add.at(counts, (G.src, labels[G.indices]), 1)
    quotient = []
    for c in range(ncls):
        rows = counts[labels == c]
        if not np.all(rows == rows[0]):
            return False, None
        quotient.append(rows[0].tolist())
    return True, quotient


def problem2_partner_partition(G: ExternalGraph, x: int, y: int,
                               p1: Optional[Problem1Result] = None) -> Problem2Result:
    p1 = p1 or problem1_spectrum(G, x, y)
    keys = sorted(set(p1.values), reverse=True)
    index = {v: j for j, v in enumerate(keys)}
    labels = np.array([index[v] for v in p1.values], dtype=np.int64)
    classes = {v: np.flatnonzero(labels == j).tolist() for v, j in index.items()}
    ok, quotient = equitable_check(G, labels)
    return Problem2Result(classes, ok, quotient)


@dataclass
class Problem3Result:
    closed: bool
    diameter: int
    flag: bool
    witness: Optional[Tuple[int, int]] = None  # (a, v) with v outside the set on an a-geodesic


def problem3_geodesic_closure(G: ExternalGraph, vertex_set: Iterable[int],
                              expected_diameter: int) -> Problem3Result:
    S = sorted(set(vertex_set))
    if not S:
        raise ValueError("vertex set is empty")
    inS = np.zeros(G.vertex_count, dtype=bool)
    inS[S] = True
    closed, witness = True, None
    for a in S:
        D = G.distances([a])[0]
        top = int(D[S].max())
        # on[v]: v lies on a shortest path from a to some member of S
        on = inS.copy()
        for layer in range(top - 1, -1, -1):
            feed = (on & (D == layer + 1)).astype(np.int32)
            on |= (G.matrix @ feed > 0) & (D == layer)
        bad = np.flatnonzero(on & ~inS)
        if len(bad):
            closed, witness = False, (a, int(bad[0]))
            break
    sub = G.matrix[S][:, S]
    Dsub = shortest_path(sub, method="D", unweighted=True, directed=False)
    diameter = -1 if np.isinf(Dsub).any() else int(Dsub.max())
    return Problem3Result(closed, diameter, closed and diameter == expected_diameter, witness)


def explore(G: ExternalGraph, x: int, y: int) -> dict:
    """Problems 1-3 for the pair (x', y'), as a JSON-ready report."""
    p1 = problem1_spectrum(G, x, y)
    p2 = problem2_partner_partition(G, x, y, p1)
    top = Fraction(p1.allowed[0])
    p3 = problem3_geodesic_closure(G, p2.classes.get(top, []), p1.pair.i) if top in p2.classes else None
    observed = sorted(p1.spectrum.items(), reverse=True)
    return {
        "params": G.params.as_dict(),
        "pair": {"x": x, "y": y, "i": p1.pair.i, "|B|": len(p1.pair.B), "|C|": len(p1.pair.C)},
        "allowed_values": p1.allowed,
        "spectrum": [{"value": _num(v), "count": c} for v, c in observed],
        "problem1_flag": p1.flag,
        "partner_class_sizes": {_num(v): len(m) for v, m in sorted(p2.classes.items(), reverse=True)},
        "problem2_equitable": p2.equitable,
        "quotient_matrix": p2.quotient,
        "problem3": None if p3 is None else {
            "set_value": _num(top),
            "set_size": len(p2.classes[top]),
            "closed": p3.closed,
            "diameter": p3.diameter,
            "expected_diameter": p1.pair.i,
            "flag": p3.flag,
        },
    }


def _num(v: Fraction):
    return int(v) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"
