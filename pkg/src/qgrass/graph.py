"""The Grassmann graph J_q(n,k): distances, local neighbor generation, the
neighbor sets B_xy / C_xy, a BFS distance oracle, and the Stab(u,v) cells of P_1."""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, FrozenSet, List, Tuple

import numpy as np

from .qarith import ParameterError, QParams
from .subspace import (
    Matrix,
    Subspace,
    enumerate_subspaces,
    full_space,
    join,
    mat_inverse,
    mat_mul,
    meet,
    omega,
    point_space,
    random_basis,
    random_vertex,
    rref_canonical,
    subspaces_of,
    zero_space,
)

DEFAULT_CAP = 50_000


class CapExceeded(RuntimeError):
    pass


class DistanceError(ValueError):
    pass


@dataclass(frozen=True)
class VertexPairContext:
    x: Subspace
    y: Subspace
    i: int
    meet_xy: Subspace
    join_xy: Subspace

    @classmethod
    def of(cls, x: Subspace, y: Subspace) -> "VertexPairContext":
        m, j = meet(x, y), join(x, y)
        i = x.dim - m.dim
        assert j.dim == x.dim + i
        return cls(x, y, i, m, j)


def _check_vertex(x: Subspace, k: int) -> None:
    if x.dim != k:
        raise DistanceError(f"expected a {k}-dimensional subspace, got dim {x.dim}")


def distance(x: Subspace, y: Subspace) -> int:
    if x.dim != y.dim:
        raise DistanceError(f"vertices of different dimension ({x.dim}, {y.dim})")
    return x.dim - meet(x, y).dim


def neighbors(x: Subspace, params: QParams) -> List[Subspace]:
    """Gamma(x), generated as {w + s : w a hyperplane of x, s a point outside x}."""
    _check_vertex(x, params.k)
    ps = point_space(params.q, params.n)
    inside = omega(x)
    outside = [ps.subspace(s) for s in range(len(ps)) if s not in inside]
    seen = set()
    out = []
    for w in subspaces_of(x, params.k - 1):
        for s in outside:
            z = join(w, s)
            if z not in seen:
                seen.add(z)
                out.append(z)
    return out


def _check_interior(i: int, params: QParams) -> None:
    if not 1 < i < params.k:
        raise DistanceError(
            f"need 1 < distance < k={params.k}, got {i} (the cases 1 and k are not covered)"
        )


def bc_sets(x: Subspace, y: Subspace, params: QParams) -> Tuple[List[Subspace], List[Subspace]]:
    i = distance(x, y)
    _check_interior(i, params)
    B, C = [], []
    for z in neighbors(x, params):
        d = distance(y, z)
        if d == i + 1:
            B.append(z)
        elif d == i - 1:
            C.append(z)
    return B, C


def neighbor_profile(x: Subspace, y: Subspace, params: QParams) -> Dict[int, int]:
    """|{z in Gamma(x) : d(y,z) = h}| for each h."""
    prof: Dict[int, int] = {}
    for z in neighbors(x, params):
        d = distance(y, z)
        prof[d] = prof.get(d, 0) + 1
    return prof


# ---------------------------------------------------------------------------
# the whole graph (small parameters only)

class GrassmannGraph:
    """Explicit J_q(n,k); adjacency built by bucketing vertices on shared
    (k-1)-subspaces, i.e. dim(x ∩ z) = k-1."""

    def __init__(self, params: QParams, cap: int = DEFAULT_CAP):
        if params.num_vertices > cap:
            raise CapExceeded(
                f"{params.num_vertices} vertices exceeds the cap of {cap}"
            )
        self.params = params
        self.vertices: List[Subspace] = list(enumerate_subspaces(params.k, params.q, params.n))
        self.index: Dict[Subspace, int] = {v: i for i, v in enumerate(self.vertices)}
        buckets: Dict[Subspace, List[int]] = {}
        for i, v in enumerate(self.vertices):
            for w in subspaces_of(v, params.k - 1):
                buckets.setdefault(w, []).append(i)
        adj: List[List[int]] = [[] for _ in self.vertices]
        for members in buckets.values():
            for a in members:
                adj[a].extend(b for b in members if b != a)
        for lst in adj:
            lst.sort()
        self.adj = adj

    def __len__(self):
        return len(self.vertices)

    def csr(self) -> Tuple[np.ndarray, np.ndarray]:
        indptr = np.zeros(len(self.adj) + 1, dtype=np.int64)
        indptr[1:] = np.cumsum([len(a) for a in self.adj])
        indices = np.fromiter((b for a in self.adj for b in a), dtype=np.int64, count=int(indptr[-1]))
        return indptr, indices

    def bfs(self, src: int) -> List[int]:
        dist = [-1] * len(self.adj)
        dist[src] = 0
        queue = deque([src])
        adj = self.adj
        while queue:
            a = queue.popleft()
            da = dist[a] + 1
            for b in adj[a]:
                if dist[b] < 0:
                    dist[b] = da
                    queue.append(b)
        return dist


@lru_cache(maxsize=4)
def grassmann_graph(params: QParams, cap: int = DEFAULT_CAP) -> GrassmannGraph:
    return GrassmannGraph(params, cap)


def bfs_oracle(x: Subspace, params: QParams, cap: int = DEFAULT_CAP) -> Dict[Subspace, int]:
    _check_vertex(x, params.k)
    g = grassmann_graph(params, cap)
    dist = g.bfs(g.index[x])
    return {v: d for v, d in zip(g.vertices, dist)}


# ---------------------------------------------------------------------------
# witness pairs

def witness_pair(params: QParams, i: int, rng: random.Random) -> Tuple[Subspace, Subspace, Matrix]:
    """Random x, y at distance i.  Returns (x, y, basis) where the rows e_0..e_{n-1}
    of basis satisfy x = <e_0..e_{k-1}>, y = <e_0..e_{k-i-1}, e_k..e_{k+i-1}>."""
    q, n, k = params.q, params.n, params.k
    if not 0 <= i <= k:
        raise ParameterError(f"distance {i} outside 0..{k}")
    basis = random_basis(rng, q, n)
    x = rref_canonical(basis[:k], q, n)
    y = rref_canonical(basis[: k - i] + basis[k : k + i], q, n)
    return x, y, basis


def swap_matrix(params: QParams, i: int, basis: Matrix) -> Matrix:
    """sigma in GL(V) exchanging x and y of witness_pair: e_{k-i+t} <-> e_{k+t}."""
    q, n, k = params.q, params.n, params.k
    perm = list(range(n))
    for t in range(i):
        a, b = k - i + t, k + t
        perm[a], perm[b] = b, a
    P = tuple(tuple(int(perm[r] == c) for c in range(n)) for r in range(n))
    return mat_mul(mat_mul(mat_inverse(basis, q), P, q), basis, q)


# ---------------------------------------------------------------------------
# Stab(u,v) cells on P_1

@dataclass(frozen=True)
class OrbitPartition:
    case_id: int
    cells: Tuple[FrozenSet[int], ...]

    @property
    def sizes(self) -> Tuple[int, ...]:
        return tuple(len(c) for c in self.cells)


def stab_case(u: Subspace, v: Subspace) -> int:
    uv, upv = meet(u, v), join(u, v)
    V = full_space(u.q, u.n)
    if uv == u:
        return 5
    if uv == v:
        return 6
    if uv.dim > 0:
        return 2 if upv == V else 1
    return 4 if upv == V else 3


def stab_partition_p1(u: Subspace, v: Subspace) -> OrbitPartition:
    q, n = u.q, u.n
    for w in (u, v):
        if w == zero_space(q, n) or w == full_space(q, n):
            raise ValueError("u and v must be proper nonzero subspaces")
    if u == v:
        raise ValueError("u and v must be distinct")
    case = stab_case(u, v)
    all_pts = frozenset(range(len(point_space(q, n))))
    Ou, Ov = omega(u), omega(v)
    Ocap, Osum = omega(meet(u, v)), omega(join(u, v))
    if case == 1:
        cells = [Ocap, Ou - Ocap, Ov - Ocap, Osum - (Ou | Ov), all_pts - Osum]
    elif case == 2:
        cells = [Ocap, Ou - Ocap, Ov - Ocap, all_pts - (Ou | Ov)]
    elif case == 3:
        cells = [Ou, Ov, Osum - (Ou | Ov), all_pts - Osum]
    elif case == 4:
        cells = [Ou, Ov, all_pts - (Ou | Ov)]
    elif case == 5:
        cells = [Ou, Ov - Ou, all_pts - Ov]
    else:
        cells = [Ov, Ou - Ov, all_pts - Ou]
    return OrbitPartition(case, tuple(cells))


def sample_vertices(params: QParams, count: int, rng: random.Random) -> List[Subspace]:
    return [random_vertex(rng, params) for _ in range(count)]

