"""Shard covectors, the forcing digraph on shards, and congruence-normality classification.

Everything per base region is derived from the chirotope of the arrangement:
reorienting by a tope B multiplies chi[i,j,k] by s_i s_j s_k with s = -B, so
no number-field arithmetic happens after the chirotope is built.
"""
from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .omcore import (
    STAR,
    Arrangement,
    InvalidTopeError,
    check_tope,
    reorient,
    restricted_intersection,
    sign_eval,
    sign_string,
)


@dataclass(frozen=True, order=True)
class ShardCovector:
    hyperplane: int
    vector: tuple

    def __str__(self) -> str:
        return sign_string(self.vector)

    @property
    def label(self) -> str:
        return f"{self.hyperplane + 1}:{sign_string(self.vector)}"


@dataclass
class ShardDigraph:
    nodes: list
    edges: set

    def successors(self) -> list:
        index = {n: k for k, n in enumerate(self.nodes)}
        adj = [[] for _ in self.nodes]
        for a, b in self.edges:
            adj[index[a]].append(index[b])
        for row in adj:
            row.sort()
        return adj


@dataclass
class BaseRegionReport:
    base: tuple
    shard_count: int
    acyclic: bool
    witness_cycle: Optional[list] = None

    def to_json(self) -> dict:
        return {
            "base": sign_string(self.base),
            "shards": self.shard_count,
            "acyclic": self.acyclic,
            "witness_cycle": None if self.witness_cycle is None else [n.label for n in self.witness_cycle],
        }


@dataclass
class Classification:
    verdict: str
    cn_count: int
    ncn_count: int
    per_region: list = field(default_factory=list)


class ShardEngine:
    """Base-independent data for one arrangement."""

    def __init__(self, arr: Arrangement):
        self.m = arr.m
        self.name = arr.name
        self.chi = np.ascontiguousarray(arr.chirotope)
        self.flat_index = arr.flat_index
        self.flats = [f.members for f in arr.flats]
        m = self.m
        self.outside = []
        self.cocircuits = np.zeros((len(self.flats), m), dtype=np.int8)
        for t, members in enumerate(self.flats):
            self.outside.append(next(k for k in range(m) if k not in members))
            self.cocircuits[t] = self.chi[members[0], members[1]]
        self.big_flats = [t for t, f in enumerate(self.flats) if len(f) >= 3]

    def analyze(self, B: Sequence[int]) -> "BaseAnalysis":
        return BaseAnalysis(self, B)


class BaseAnalysis:
    def __init__(self, eng: ShardEngine, B: Sequence[int]):
        self.eng = eng
        self.base = tuple(int(x) for x in B)
        m = eng.m
        s = -np.array(self.base, dtype=np.int8)
        self.s = s
        chi = eng.chi
        # basic pairs of flats of size >= 3
        self.basics = {}
        pre = [set() for _ in range(m)]
        cuts = [[] for _ in range(m)]  # (flat, basic a, basic b) with i non-basic
        for t in eng.big_flats:
            members = eng.flats[t]
            w = eng.outside[t]
            mem = np.array(members)
            sub = chi[np.ix_(mem, mem)][:, :, w] * (s[mem][:, None] * s[mem][None, :])
            wins = (sub > 0).sum(axis=1)
            n = len(members)
            a = members[int(np.flatnonzero(wins == n - 1)[0])]
            b = members[int(np.flatnonzero(wins == 0)[0])]
            a, b = min(a, b), max(a, b)
            self.basics[t] = (a, b)
            for i in members:
                if i != a and i != b:
                    pre[i].update((a, b))
                    cuts[i].append((t, a, b))
        self.pre = [tuple(sorted(p)) for p in pre]
        self._cuts = cuts
        self.shards = [self._shards_of(i) for i in range(m)]

    # chirotope of the reoriented arrangement
    def chi_r(self, a: int, b: int, k) -> np.ndarray:
        s = self.s
        return self.eng.chi[a, b, k] * (s[a] * s[b] * s[k])

    def _shards_of(self, i: int) -> list:
        m = self.eng.m
        pre = self.pre[i]
        cuts = self._cuts[i]
        base_vec = np.full(m, STAR, dtype=np.int8)
        base_vec[i] = 0
        if not cuts:
            return [tuple(int(x) for x in base_vec)]
        pre_arr = np.array(pre)
        if len(cuts) == 1:
            _, a, b = cuts[0]
            out = []
            for eps in (1, -1):
                v = base_vec.copy()
                v[a], v[b] = eps, -eps
                out.append(tuple(int(x) for x in v))
            return sorted(out)
        # rays r = eps * (n_i x n_a) in the hyperplane H_i, one line per cut
        reps = [a for _, a, _ in cuts]
        s = self.s
        chi = self.eng.chi
        row = chi[i]  # row[a, k] = chi(i, a, k)

        def orient(eu, au, ev, av):
            return eu * ev * int(row[au, av]) * int(s[i] * s[au] * s[av])

        u0 = reps[0]
        upper = []
        for a in reps[1:]:
            e = 1 if orient(1, u0, 1, a) > 0 else -1
            upper.append((e, a))
        # insertion sort by angle within the open upper half-plane
        ordered = []
        for e, a in upper:
            pos = len(ordered)
            for k, (e2, a2) in enumerate(ordered):
                if orient(e, a, e2, a2) > 0:
                    pos = k
                    break
            ordered.insert(pos, (e, a))
        rays = [(1, u0)] + ordered + [(-1, u0)] + [(-e, a) for e, a in ordered]
        sp = s[pre_arr]
        signs = [e * row[a, pre_arr] * (s[i] * s[a]) * sp for e, a in rays]
        out = []
        n = len(rays)
        for k in range(n):
            su, sv = signs[k], signs[(k + 1) % n]
            sec = np.where(su != 0, su, sv)
            v = base_vec.copy()
            v[pre_arr] = sec
            out.append(tuple(int(x) for x in v))
        return sorted(out)

    @property
    def shard_count(self) -> int:
        return sum(len(x) for x in self.shards)

    def nodes(self) -> list:
        return [ShardCovector(i, v) for i in range(self.eng.m) for v in self.shards[i]]

    def line_covector(self, i: int, j: int) -> np.ndarray:
        t = self.eng.flat_index[i, j]
        return self.eng.cocircuits[t] * self.s

    def edge_index(self) -> tuple:
        """Node list and adjacency list (sorted) of the forcing digraph."""
        m = self.eng.m
        offsets = [0] * (m + 1)
        for i in range(m):
            offsets[i + 1] = offsets[i] + len(self.shards[i])
        mats = [np.array(self.shards[i], dtype=np.int8) for i in range(m)]
        adj = [[] for _ in range(offsets[m])]
        for j in range(m):
            if not self.pre[j]:
                continue
            pj = np.array(self.pre[j])
            Tj = mats[j][:, pj]
            for i in self.pre[j]:
                h = self.line_covector(i, j)
                Si = mats[i]
                if self.pre[i]:
                    pi_ = np.array(self.pre[i])
                    hs = h[pi_]
                    Sp = Si[:, pi_]
                    si_plus = ((hs == 0) | (Sp == hs)).all(axis=1)
                    si_minus = ((hs == 0) | (Sp == -hs)).all(axis=1)
                else:
                    si_plus = si_minus = np.ones(len(Si), dtype=bool)
                hj = h[pj]
                tj_plus = ((hj == 0) | (Tj == hj)).all(axis=1)
                tj_minus = ((hj == 0) | (Tj == -hj)).all(axis=1)
                ok = np.outer(si_plus, tj_plus) | np.outer(si_minus, tj_minus)
                for a, b in zip(*np.nonzero(ok)):
                    adj[offsets[i] + int(a)].append(offsets[j] + int(b))
        for row in adj:
            row.sort()
        return offsets, adj

    def digraph(self) -> ShardDigraph:
        nodes = self.nodes()
        _, adj = self.edge_index()
        edges = {(nodes[a], nodes[b]) for a, row in enumerate(adj) for b in row}
        return ShardDigraph(nodes, edges)

    def report(self) -> BaseRegionReport:
        _, adj = self.edge_index()
        cyc = find_cycle(adj)
        witness = None
        if cyc is not None:
            nodes = self.nodes()
            witness = [nodes[k] for k in cyc]
        return BaseRegionReport(self.base, self.shard_count, cyc is None, witness)


def find_cycle(adj: list) -> Optional[list]:
    """First cycle closed by an iterative depth-first search in node order, or None."""
    n = len(adj)
    color = [0] * n  # 0 new, 1 on stack, 2 done
    for root in range(n):
        if color[root]:
            continue
        stack = [(root, 0)]
        path = [root]
        color[root] = 1
        while stack:
            v, k = stack[-1]
            if k < len(adj[v]):
                stack[-1] = (v, k + 1)
                w = adj[v][k]
                if color[w] == 1:
                    return path[path.index(w):]
                if color[w] == 0:
                    color[w] = 1
                    stack.append((w, 0))
                    path.append(w)
            else:
                color[v] = 2
                stack.pop()
                path.pop()
    return None


# public API -----------------------------------------------------------------

_ENGINES: dict = {}


def engine(arr: Arrangement) -> ShardEngine:
    eng = arr.__dict__.get("_shard_engine")
    if eng is None:
        eng = ShardEngine(arr)
        arr.__dict__["_shard_engine"] = eng
    return eng


def resolve_base(arr: Arrangement, B) -> tuple:
    return check_tope(arr, B)


def base_from_point(arr: Arrangement, x: Sequence) -> tuple:
    B = sign_eval(arr, x)
    if 0 in B:
        raise NonGenericBaseError(f"point lies on hyperplane(s) {[k + 1 for k, v in enumerate(B) if v == 0]}")
    return B


class NonGenericBaseError(InvalidTopeError):
    pass


def analyze(arr: Arrangement, B) -> BaseAnalysis:
    return engine(arr).analyze(resolve_base(arr, B))


def pre_sets(arr: Arrangement, B) -> tuple:
    return tuple(analyze(arr, B).pre)


def shard_covectors(arr: Arrangement, B, i: int) -> list:
    return [ShardCovector(i, v) for v in analyze(arr, B).shards[i]]


def shard_count(arr: Arrangement, B) -> int:
    return analyze(arr, B).shard_count


def _conforms(c: tuple, h: Sequence[int]) -> bool:
    return restricted_intersection(h, c) == tuple(h)


def forcing_edge(sigma: ShardCovector, theta: ShardCovector, flat_line_covectors) -> bool:
    i, j = sigma.hyperplane, theta.hyperplane
    if i == j:
        raise ValueError("forcing edge needs distinct hyperplanes")
    if theta.vector[i] not in (1, -1):
        return False
    for h in flat_line_covectors:
        h = tuple(int(x) for x in h)
        if restricted_intersection(restricted_intersection(h, sigma.vector), theta.vector) == h:
            return True
    return False


def line_covectors_for(arr: Arrangement, B, i: int, j: int) -> tuple:
    """Both line covectors of flat {i, j} in the arrangement reoriented by B."""
    h = analyze(arr, B).line_covector(i, j)
    h = tuple(int(x) for x in h)
    return h, tuple(-x for x in h)


def shard_digraph(arr: Arrangement, B) -> ShardDigraph:
    return analyze(arr, B).digraph()


def is_congruence_normal(arr: Arrangement, B) -> BaseRegionReport:
    return analyze(arr, B).report()


def hyperplane_digraph(arr: Arrangement, B) -> set:
    pre = pre_sets(arr, B)
    return {(i, j) for j in range(arr.m) for i in pre[j]}


def _worker_init(eng):
    global _WORKER_ENGINE
    _WORKER_ENGINE = eng


def _worker_run(B):
    return _WORKER_ENGINE.analyze(B).report()


def classify(arr: Arrangement, parallel_hint: Optional[int] = None) -> Classification:
    topes = arr.topes
    eng = engine(arr)
    jobs = parallel_hint if parallel_hint is not None else (os.cpu_count() or 1)
    if jobs > 1 and len(topes) > 1:
        with ProcessPoolExecutor(max_workers=jobs, initializer=_worker_init, initargs=(eng,)) as ex:
            reports = list(ex.map(_worker_run, topes, chunksize=max(1, len(topes) // (4 * jobs))))
    else:
        reports = [eng.analyze(B).report() for B in topes]
    reports.sort(key=lambda r: r.base)
    cn = sum(1 for r in reports if r.acyclic)
    ncn = len(reports) - cn
    verdict = "always" if ncn == 0 else ("never" if cn == 0 else "sometimes")
    return Classification(verdict, cn, ncn, reports)


def extreme_rays(arr_reoriented: Arrangement) -> set:
    """Indices of normals spanning extreme rays of their (pointed) cone."""
    m = arr_reoriented.m
    chi = arr_reoriented.chirotope
    out = set()
    for f in arr_reoriented.flats:
        a, b = f.members[0], f.members[1]
        row = chi[a, b]
        mask = np.ones(m, dtype=bool)
        mask[list(f.members)] = False
        vals = row[mask]
        if (vals >= 0).all() or (vals <= 0).all():
            if len(f.members) == 2:
                out.update(f.members)
            else:
                w = next(k for k in range(m) if k not in f.members)
                from .omcore import _basic_from_chi

                out.update(_basic_from_chi(chi, f.members, w))
    return out


def is_additive(arr: Arrangement, B) -> bool:
    ar = reorient(arr, B)
    delta = extreme_rays(ar)
    normals = ar.normals
    lookup = {n: k for k, n in enumerate(normals)}
    sums = set()
    m = ar.m
    for a in range(m):
        for b in range(a + 1, m):
            v = tuple(x + y for x, y in zip(normals[a], normals[b]))
            if v in lookup:
                sums.add(lookup[v])
    return all(k in delta or k in sums for k in range(m))
