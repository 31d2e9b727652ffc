"""The verification suite driven by `qgrass verify`.

Each check names the identities it exercises (anchor labels) and returns a
pass/fail/skip record.  Failures carry counterexample data.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional

import numpy as np

from . import exact
from .euclid import (
    RepVector,
    act,
    combination,
    hat,
    inner,
    kernel_constant_check,
    point_gram_check,
    point_hat,
    predicted_inner,
    rep_rank,
    theta1_sum_check,
)
from .explorer import ExternalGraph, cosine_table, explore, find_pair
from .graph import (
    DEFAULT_CAP,
    bc_sets,
    distance,
    grassmann_graph,
    neighbor_profile,
    stab_partition_p1,
    swap_matrix,
    witness_pair,
)
from .qarith import QParams, gauss_binom, qint
from .recover import (
    KINDS,
    VARIANTS,
    PairVectors,
    coeffs_in_geometric,
    empirical_table,
    geometric_basis,
    gram_table,
    m_inverse,
    perp_from_combinatorial,
    perp_vector,
    recover_from_vectors,
    transition,
    transition_det,
    xi,
    zeta,
)
from .subspace import (
    contains,
    enumerate_subspaces,
    gl_apply,
    gl_random,
    join,
    meet,
    omega,
    omega_list,
    point_permutation,
    random_subspace,
    random_vertex,
)

RANK_LIMIT = 400  # largest [n] for which exact rank checks run


class Failed(Exception):
    def __init__(self, message: str, **data):
        super().__init__(message)
        self.data = data


def expect(cond: bool, message: str, **data) -> None:
    if not cond:
        raise Failed(message, **data)


class Skipped(Exception):
    pass


@dataclass
class Context:
    params: QParams
    seed: int = 0
    sample: int = 20
    cap: int = DEFAULT_CAP

    @property
    def full(self) -> bool:
        """Global enumeration allowed (otherwise sampled-pair mode)."""
        return self.params.num_vertices <= self.cap

    def rng(self, salt: str) -> random.Random:
        return random.Random(f"{self.seed}:{salt}")

    @property
    def distances(self) -> List[int]:
        return list(range(2, self.params.k))


@dataclass
class CheckResult:
    name: str
    anchors: List[str]
    status: str
    seconds: float
    detail: Dict[str, object] = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "anchors": self.anchors,
            "status": self.status,
            "seconds": round(self.seconds, 3),
            "detail": self.detail,
        }


@dataclass
class Check:
    name: str
    anchors: List[str]
    fn: Callable[[Context], Optional[dict]]

    def run(self, ctx: Context) -> CheckResult:
        t = time.perf_counter()
        try:
            detail = self.fn(ctx) or {}
            status = "pass"
        except Failed as exc:
            status, detail = "fail", {"message": str(exc), **exc.data}
        except Skipped as exc:
            status, detail = "skip", {"reason": str(exc)}
        return CheckResult(self.name, self.anchors, status, time.perf_counter() - t, detail)


CHECKS: List[Check] = []


def check(name: str, *anchors: str):
    def deco(fn):
        CHECKS.append(Check(name, list(anchors), fn))
        return fn
    return deco


def _pairs(ctx: Context, salt: str, count: Optional[int] = None):
    rng = ctx.rng(salt)
    for i in ctx.distances:
        for _ in range(count or ctx.sample):
            x, y, basis = witness_pair(ctx.params, i, rng)
            yield i, x, y, basis


# ---------------------------------------------------------------------------
# parameters

@check("closed-form parameters", "Eq. notation", "Eq. kappa", "Eq. sizebc", "Eq. valency")
def _params(ctx: Context):
    p = ctx.params
    expect(p.kappa == p.b[0], "kappa differs from b_0")
    for i in range(p.k + 1):
        expect(p.b[i] + p.a[i] + p.c[i] == p.kappa, "b_i + a_i + c_i != kappa", i=i)
    expect(p.c[1] == 1 and p.b[p.k] == 0, "boundary intersection numbers wrong")
    return {"kappa": p.kappa, "b": list(p.b), "a": list(p.a), "c": list(p.c)}


@check("eigenvalues are roots of the tridiagonal intersection matrix", "Eq. eigenvalues")
def _eigen(ctx: Context):
    p = ctx.params
    k = p.k
    L = [[0] * (k + 1) for _ in range(k + 1)]
    for i in range(k + 1):
        L[i][i] = p.a[i]
        if i < k:
            L[i][i + 1] = p.b[i]
        if i > 0:
            L[i][i - 1] = p.c[i]
    for i, th in enumerate(p.theta):
        M = [[L[r][c] - (th if r == c else 0) for c in range(k + 1)] for r in range(k + 1)]
        expect(exact.det(M) == 0, "theta_i is not an eigenvalue", i=i, theta=th)
    expect(len(set(p.theta)) == k + 1, "eigenvalues not distinct")
    return {"theta": list(p.theta)}


@check("subspace counts", "Lemma subspacesize", "Eq. orbitsize")
def _counts(ctx: Context):
    p = ctx.params
    if not ctx.full:
        # q-Pascal recursion as an independent cross-check
        for m in range(1, p.n + 1):
            for r in range(1, m):
                lhs = gauss_binom(m, r, p.q)
                rhs = gauss_binom(m - 1, r - 1, p.q) + p.q**r * gauss_binom(m - 1, r, p.q)
                expect(lhs == rhs, "q-Pascal identity fails", m=m, r=r)
        return {"mode": "sampled (q-Pascal recursion)"}
    counts = {}
    for ell in (1, p.k):
        subs = list(enumerate_subspaces(ell, p.q, p.n))
        expect(len(subs) == gauss_binom(p.n, ell, p.q), "enumeration count differs", dim=ell, got=len(subs))
        expect(len(set(subs)) == len(subs), "duplicate subspaces in enumeration", dim=ell)
        bad = next((u for u in subs if len(omega(u)) != qint(ell, p.q)), None)
        expect(bad is None, "|Omega(u)| != [dim u]", u=bad and bad.serialize())
        counts[ell] = len(subs)
    return {"mode": "enumeration", "counts": counts}


# ---------------------------------------------------------------------------
# the subspace lattice and the graph

@check("modularity and point-set laws", "Lemma modularity", "Definition defs", "Eq. scap", "Lemma linin")
def _modular(ctx: Context):
    p = ctx.params
    rng = ctx.rng("modular")
    for _ in range(10 * ctx.sample):
        u = random_subspace(rng, rng.randint(0, p.n), p.q, p.n)
        v = random_subspace(rng, rng.randint(0, p.n), p.q, p.n)
        m, j = meet(u, v), join(u, v)
        data = dict(u=u.serialize(), v=v.serialize())
        expect(u.dim + v.dim == m.dim + j.dim, "dim u + dim v != dim(u∩v) + dim(u+v)", **data)
        expect(omega(m) == omega(u) & omega(v), "Omega(u∩v) != Omega(u) ∩ Omega(v)", **data)
        expect(contains(j, u) and contains(j, v) and contains(u, m) and contains(v, m), "lattice order broken", **data)
    return {"pairs": 10 * ctx.sample}


@check("distance from the meet dimension", "Lemma introlem0", "Lemma sumdim")
def _distance(ctx: Context):
    p = ctx.params
    rng = ctx.rng("distance")
    if ctx.full:
        g = grassmann_graph(p, ctx.cap)
        for _ in range(3):
            s = rng.randrange(len(g))
            dist = g.bfs(s)
            x = g.vertices[s]
            sample = rng.sample(range(len(g)), min(len(g), 50 * ctx.sample))
            for t in sample:
                expect(dist[t] == distance(x, g.vertices[t]), "BFS distance != k - dim(x∩y)",
                       x=x.serialize(), y=g.vertices[t].serialize(), bfs=dist[t])
            sizes = np.bincount(np.asarray(dist)).tolist()
            expect(sizes == p.sphere_sizes(), "sphere sizes differ", got=sizes, want=p.sphere_sizes())
        return {"mode": "BFS on the full graph", "sphere_sizes": p.sphere_sizes()}
    for i in range(p.k + 1):
        for _ in range(ctx.sample):
            x, y, _ = witness_pair(p, i, rng)
            expect(distance(x, y) == i and join(x, y).dim == p.k + i, "meet/join dimensions wrong", i=i)
    return {"mode": "witness pairs"}


@check("intersection numbers around a vertex", "Eq. sizebc", "Eq. valency")
def _local(ctx: Context):
    p = ctx.params
    rng = ctx.rng("local")
    for i in range(1, p.k + 1):
        for _ in range(max(1, ctx.sample // 10)):
            x, y, _ = witness_pair(p, i, rng)
            prof = neighbor_profile(x, y, p)
            want = {h: v for h, v in ((i - 1, p.c[i]), (i, p.a[i]), (i + 1, p.b[i])) if v}
            expect(prof == want, "neighbor profile differs", i=i, got=prof, want=want)
    return {}


@check("GL action preserves dimension and distance", "Lemma presdist")
def _gl(ctx: Context):
    p = ctx.params
    rng = ctx.rng("gl")
    for t in range(ctx.sample):
        sigma = gl_random(p, ctx.seed * 1000 + t)
        x, y = random_vertex(rng, p), random_vertex(rng, p)
        sx, sy = gl_apply(sigma, x), gl_apply(sigma, y)
        expect(sx.dim == p.k and distance(sx, sy) == distance(x, y), "distance not preserved",
               x=x.serialize(), y=y.serialize())
        perm = point_permutation(sigma, p.q, p.n)
        expect(sorted(perm[s] for s in omega_list(x)) == omega_list(sx), "point action incompatible",
               x=x.serialize())
    return {}


@check("Stab(x,y) cells on points", "Lemma main1", "Corollary staborbitP1")
def _cells(ctx: Context):
    p = ctx.params
    b = p.qi
    npts = b(p.n)
    for i, x, y, basis in _pairs(ctx, "cells", max(1, ctx.sample // 5)):
        part = stab_partition_p1(x, y)
        cells = part.cells
        expect(sum(map(len, cells)) == npts and len(frozenset().union(*cells)) == npts,
               "cells do not partition the points", i=i)
        k = p.k
        want = (b(k - i), b(k) - b(k - i), b(k) - b(k - i), b(k + i) - 2 * b(k) + b(k - i), b(p.n) - b(k + i))
        expect(part.case_id == 1 and part.sizes == want, "unexpected case or cell sizes",
               i=i, got=list(part.sizes), want=list(want))
        perm = point_permutation(swap_matrix(p, i, basis), p.q, p.n)
        moved = tuple(frozenset(perm[s] for s in c) for c in cells)
        expect(moved == (cells[0], cells[2], cells[1], cells[3], cells[4]), "swap does not permute cells", i=i)
    return {}


# ---------------------------------------------------------------------------
# the Euclidean representation

@check("point vectors (C1)-(C4)", "Definition Euclidean", "Lemma sum0basis", "Lemma sum0converse")
def _points(ctx: Context):
    p = ctx.params
    diag_ok, off_ok, sum_ok = point_gram_check(p.q, p.n)
    expect(diag_ok and off_ok and sum_ok, "point Gram matrix wrong", diag=diag_ok, off=off_ok, sum=sum_ok)
    rng = ctx.rng("points")
    npts = p.num_points
    trials = [{s: 3 for s in range(npts)}]
    trials += [{s: rng.randint(-3, 3) for s in range(npts)} for _ in range(ctx.sample)]
    for alpha in trials:
        expect(kernel_constant_check(alpha, p.q, p.n), "kernel is not the constants")
    pts = [point_hat(s, p.q, p.n) for s in range(npts)]
    r = rep_rank(pts) if npts <= RANK_LIMIT else exact.rank_mod_p([v.coords for v in pts])
    expect(r == npts - 1, "point vectors do not span a space of dimension [n]-1", rank=r)
    return {"rank": r}


@check("hat vectors are sums of point vectors", "Eq. hardhatsum")
def _hatsum(ctx: Context):
    p = ctx.params
    rng = ctx.rng("hatsum")
    for _ in range(ctx.sample):
        u = random_subspace(rng, rng.randint(0, p.n), p.q, p.n)
        total = sum((point_hat(s, p.q, p.n).coords for s in omega_list(u)), np.zeros(p.num_points, dtype=np.int64))
        expect(np.array_equal(total, hat(u).coords), "hat(u) != sum of its point vectors", u=u.serialize())
    return {}


@check("inner product law", "Lemma introlem1", "Corollary introcor", "Corollary cor2", "Lemma cor1")
def _inner(ctx: Context):
    p = ctx.params
    rng = ctx.rng("inner")
    for _ in range(10 * ctx.sample):
        u = random_subspace(rng, rng.randint(0, p.n), p.q, p.n)
        v = random_subspace(rng, rng.randint(0, p.n), p.q, p.n)
        got = inner(hat(u), hat(v))
        want = predicted_inner(u.dim, v.dim, meet(u, v).dim, p)
        expect(got == want, "inner product law fails", u=u.serialize(), v=v.serialize(), got=got, want=want)
    w = cosine_table(p).w
    for i in range(p.k + 1):
        x, y, _ = witness_pair(p, i, rng)
        expect(inner(hat(x), hat(y)) == w[i], "vertex inner product differs from the cosine table", i=i)
    return {"pairs": 10 * ctx.sample, "vertex_inner": list(w)}


@check("neighbor sum is theta_1 times the vertex", "Lemma introlem2", "Lemma fixspan")
def _eigensum(ctx: Context):
    p = ctx.params
    rng = ctx.rng("eigensum")
    count = max(2, ctx.sample // 5)
    for _ in range(count):
        x = random_vertex(rng, p)
        expect(theta1_sum_check(x, p).is_zero(), "sum over neighbors != theta_1 x̂", x=x.serialize())
    return {"vertices": count, "theta_1": p.theta[1]}


@check("vertex vectors span E", "Lemma cor3")
def _span(ctx: Context):
    p = ctx.params
    rng = ctx.rng("span")
    vs = [hat(random_vertex(rng, p)).coords for _ in range(2 * p.num_points)]
    # all hats sum to zero coordinatewise, so rank <= [n]-1; a mod-p rank of
    # [n]-1 certifies equality over Q
    r = exact.rank_mod_p(vs)
    expect(r == p.num_points - 1, "vertex vectors do not span", rank_mod_p=r)
    out = {"rank": r, "method": "mod-p lower bound"}
    if p.num_points <= RANK_LIMIT:
        out["rank_exact"] = rep_rank([RepVector(p.q, p.n, v) for v in vs[: 2 * p.num_points]])
        expect(out["rank_exact"] == r, "exact and mod-p ranks disagree", **out)
    return out


@check("cosine sequence from the recurrence", "Lemma cor1")
def _cosines(ctx: Context):
    try:
        t = cosine_table(ctx.params)
    except ArithmeticError as exc:
        raise Failed(str(exc))
    return {"w": list(t.w)}


# ---------------------------------------------------------------------------
# Fix(x,y)

@check("Gram tables: closed form vs point arithmetic",
       "Theorem innprodmat21", "Theorem innprodmat22", "Theorem innprodmat23",
       "Lemma 5inner1", "Lemma innbc", "Lemma innbb", "Lemma bintsum", "Eq. binnercap",
       "Eq. cinnery", "Lemma bcx", "Lemma bcy")
def _gram(ctx: Context):
    p = ctx.params
    for i, x, y, _ in _pairs(ctx, "gram", max(1, ctx.sample // 10)):
        pv = PairVectors.of(x, y, p)
        for kind in KINDS:
            want = [list(r) for r in gram_table(kind, p, i).entries]
            got = empirical_table(kind, x, y, p, pv)
            expect(got == want, "Gram table differs", kind=kind, i=i, got=got, want=want,
                   x=x.serialize(), y=y.serialize())
    return {}


@check("M_i times its closed-form inverse", "Lemma inverse", "Eq. invmat")
def _minv(ctx: Context):
    p = ctx.params
    for i in ctx.distances:
        M = gram_table("geometric", p, i).entries
        expect(exact.is_identity(exact.matmul(M, m_inverse(p, i))), "M_i M_i^{-1} != I", i=i)
    return {}


@check("basis ranks", "Theorem 1basis", "Theorem 2basis", "Eq. barbasis1", "Theorem 2barbasis",
       "Theorem 1checkbasis", "Theorem 2checkbasis")
def _ranks(ctx: Context):
    p = ctx.params
    out = {}
    for i, x, y, _ in _pairs(ctx, "ranks", 1):
        pv = PairVectors.of(x, y, p)
        sets = {
            "geometric": geometric_basis(x, y),
            "combinatorial": pv.combinatorial_basis("full"),
            "bar": pv.combinatorial_basis("bar"),
            "check": pv.combinatorial_basis("check"),
        }
        want = {"geometric": 4, "combinatorial": 4, "bar": 3, "check": 2}
        got = {name: exact.rank(exact.frac_matrix([[inner(a, b) for b in vs] for a in vs]))
               for name, vs in sets.items()}
        expect(got == want, "Gram rank differs", i=i, got=got, want=want)
        out[i] = got
    return {"ranks": out}


@check("transition matrices and determinant",
       "Theorem trans2", "Theorem bartrans2", "Theorem checktrans2",
       "Eq. inversetran2", "Eq. inversebartran2", "Eq. inversechecktran2")
def _trans(ctx: Context):
    p = ctx.params
    dets = {}
    for i in ctx.distances:
        for v in VARIANTS:
            fwd = transition("geo->comb", v, p, i)
            back = transition("comb->geo", v, p, i)
            expect(exact.is_identity(exact.matmul(fwd.entries, back.entries)), "transitions not inverse", i=i, variant=v)
            expect(fwd.det == transition_det(p, i), "determinant differs", i=i, variant=v,
                   got=exact.fmt(fwd.det), want=transition_det(p, i))
        dets[i] = transition_det(p, i)
    return {"det": dets}


@check("B and C expanded in the geometric basis", "Lemma bc", "Eq. blin", "Eq. coeff",
       "Lemma barbc", "Lemma checkbc", "Eq. barbca")
def _blin(ctx: Context):
    p = ctx.params
    for i, x, y, _ in _pairs(ctx, "blin", max(1, ctx.sample // 10)):
        pv = PairVectors.of(x, y, p)
        for v in VARIANTS:
            geo = geometric_basis(x, y, v)
            comb = pv.combinatorial_basis(v)
            cols = exact.transpose(coeffs_in_geometric(v, p, i))
            for c, target in zip(cols, comb[-2:]):
                expect(combination(c, geo) == target, "expansion differs", i=i, variant=v,
                       x=x.serialize(), y=y.serialize())
    return {}


@check("recovery of meet and join", "Theorem maintheorem", "Theorem barmaintheorem",
       "Theorem checkmaintheorem", "Eq. rhoplus")
def _recover(ctx: Context):
    p = ctx.params
    n = 0
    for i, x, y, _ in _pairs(ctx, "recover"):
        pv = PairVectors.of(x, y, p)
        hc, hs = hat(meet(x, y)), hat(join(x, y))
        for v in VARIANTS:
            cap, plus = recover_from_vectors(pv, v)
            expect(cap == hc and plus == hs, "recovered vectors differ", i=i, variant=v,
                   x=x.serialize(), y=y.serialize())
        n += 1
    return {"pairs": n}


@check("balanced neighbor sets", "Lemma balancebc", "Definition bcdef", "Definition calbcdef", "Lemma contain")
def _balanced(ctx: Context):
    p = ctx.params
    for i, x, y, _ in _pairs(ctx, "balanced", max(1, ctx.sample // 5)):
        a, b = PairVectors.of(x, y, p), PairVectors.of(y, x, p)
        d = a.x - a.y
        expect(a.B - b.B == zeta(p, i) * d, "B_xy - B_yx != zeta(x̂ - ŷ)", i=i, x=x.serialize(), y=y.serialize())
        expect(a.C - b.C == xi(p, i) * d, "C_xy - C_yx != xi(x̂ - ŷ)", i=i, x=x.serialize(), y=y.serialize())
        _, Cs = bc_sets(x, y, p)
        m, j = meet(x, y), join(x, y)
        expect(all(contains(z, m) and contains(j, z) for z in Cs), "C member outside [x∩y, x+y]", i=i)
    return {}


@check("orthogonal complement vector", "Lemma orth", "Eq. perp", "Lemma orthcom", "Lemma dim1")
def _perp(ctx: Context):
    p = ctx.params
    for i, x, y, _ in _pairs(ctx, "perp", max(1, ctx.sample // 5)):
        v = perp_vector(x, y, p)
        expect(not v.is_zero(), "perp vector is zero", i=i)
        expect(inner(v, hat(meet(x, y))) == 0 and inner(v, hat(join(x, y))) == 0, "not orthogonal", i=i)
        expect(perp_from_combinatorial(PairVectors.of(x, y, p)) == v, "combinatorial form differs", i=i)
    return {}


@check("swap eigenspaces", "Lemma sigmalem", "Lemma main2")
def _swap(ctx: Context):
    p = ctx.params
    for i, x, y, basis in _pairs(ctx, "swap", max(1, ctx.sample // 5)):
        sigma = swap_matrix(p, i, basis)
        expect(gl_apply(sigma, x) == y and gl_apply(sigma, y) == x, "sigma does not swap x and y", i=i)
        perm = point_permutation(sigma, p.q, p.n)
        d = hat(x) - hat(y)
        expect(act(perm, d) == -d, "sigma(x̂ - ŷ) != -(x̂ - ŷ)", i=i)
        for w in geometric_basis(x, y, "bar"):
            expect(act(perm, w) == w, "sigma moves a bar basis vector", i=i)
    return {}


# ---------------------------------------------------------------------------
# graphs with the same parameters

@check("explorer on the native graph", "Problem problem1", "Problem 2", "Problem 3",
       "Eq. innxyz", "Eq. kil", "Eq. rhocap", "Definition calbcdef")
def _explorer(ctx: Context):
    p = ctx.params
    if not ctx.full:
        raise Skipped("needs the full graph; run without sampling")
    g = grassmann_graph(p, ctx.cap)
    G = ExternalGraph(p, g.adj)
    out = {}
    for i in ctx.distances:
        x, y = find_pair(G, i)
        rep = explore(G, x, y)
        allowed = set(rep["allowed_values"])
        observed = {s["value"] for s in rep["spectrum"]}
        p3 = rep["problem3"]
        expect(rep["problem1_flag"] and observed <= allowed, "spectrum outside the allowed set", i=i,
               observed=sorted(observed, key=str))
        expect(rep["problem2_equitable"], "partner partition is not equitable", i=i)
        expect(p3 is not None and p3["flag"], "top class not geodesically closed of diameter i", i=i, problem3=p3)
        # cross-oracle: the same values straight from the subspace lattice
        hc = hat(meet(g.vertices[x], g.vertices[y]))
        direct = sorted((inner(hc, hat(z)) for z in g.vertices), reverse=True)
        via_graph = sorted((v for s in rep["spectrum"] for v in [s["value"]] * s["count"]), reverse=True)
        expect(direct == via_graph, "graph-only values differ from the hat values", i=i)
        out[i] = {"spectrum": rep["spectrum"], "class_sizes": rep["partner_class_sizes"]}
    return out


def run_suite(ctx: Context, only: Optional[List[str]] = None) -> List[CheckResult]:
    chosen = [c for c in CHECKS if not only or c.name in only]
    return [c.run(ctx) for c in chosen]


def anchors_covered() -> List[str]:
    return sorted({a for c in CHECKS for a in c.anchors})
