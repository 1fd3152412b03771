"""Brute-force verifiers working directly with the poset of regions.

Nothing here uses shard covectors or the forcing digraph except
cross_validate, which compares against them.
"""
from __future__ import annotations

from typing import Optional, Sequence

import numpy as np

from .exactnum import cross
from .omcore import Arrangement, reorient, sign_eval
from .shards import ShardCovector, analyze

REGION_CAP = 200


class NotALatticeError(ValueError):
    pass


class OracleCapError(ValueError):
    pass


class OracleDisagreementError(AssertionError):
    pass


class Lattice:
    """Finite lattice given by its order matrix leq[a, b] = (a <= b)."""

    def __init__(self, leq: np.ndarray, labels: Optional[Sequence] = None):
        self.leq = np.asarray(leq, dtype=bool)
        n = self.leq.shape[0]
        self.n = n
        self.labels = list(labels) if labels is not None else list(range(n))
        self.meet = self._bound_table(self.leq, self.leq.sum(axis=0))
        self.join = self._bound_table(self.leq.T, self.leq.sum(axis=1))
        lt = self.leq & ~np.eye(n, dtype=bool)
        two_step = (lt.astype(np.int32) @ lt.astype(np.int32)) > 0
        self.cover = lt & ~two_step  # cover[a, b]: a is covered by b
        self._cong_cache: dict = {}

    @staticmethod
    def _bound_table(leq: np.ndarray, size: np.ndarray) -> np.ndarray:
        # greatest lower bounds w.r.t. leq; size orders candidates (down-set size)
        n = leq.shape[0]
        table = np.empty((n, n), dtype=np.int32)
        for x in range(n):
            low = leq[:, x][:, None] & leq  # low[z, y]: z <= x and z <= y
            score = np.where(low, size[:, None], -1)
            g = score.argmax(axis=0)
            if (score.max(axis=0) < 0).any():
                raise NotALatticeError("missing common bound")
            bad = (low & ~leq[:, g]).any(axis=0)
            if bad.any():
                raise NotALatticeError("bound is not unique")
            table[x] = g
        return table

    @classmethod
    def from_covers(cls, labels: Sequence, covers: Sequence[tuple]) -> "Lattice":
        idx = {l: k for k, l in enumerate(labels)}
        n = len(labels)
        leq = np.eye(n, dtype=bool)
        for a, b in covers:
            leq[idx[a], idx[b]] = True
        # transitive closure
        for k in range(n):
            leq |= leq[:, k][:, None] & leq[k][None, :]
        return cls(leq, labels)

    def index(self, label) -> int:
        return self.labels.index(label)

    def lower_covers(self, x: int) -> list:
        return list(np.flatnonzero(self.cover[:, x]))

    def upper_covers(self, x: int) -> list:
        return list(np.flatnonzero(self.cover[x, :]))

    def join_irreducibles(self) -> list:
        return [x for x in range(self.n) if len(self.lower_covers(x)) == 1]

    def meet_irreducibles(self) -> list:
        return [x for x in range(self.n) if len(self.upper_covers(x)) == 1]


class RegionLattice(Lattice):
    def __init__(self, topes: Sequence[tuple], base: Sequence[int]):
        base = tuple(base)
        others = [t for t in topes if tuple(t) != base]
        self.topes = [base] + [tuple(t) for t in others]
        b = np.array(base, dtype=np.int8)
        T = np.array(self.topes, dtype=np.int8)
        self.sep = T != b
        leq = ~(self.sep[:, None, :] & ~self.sep[None, :, :]).any(axis=2)
        super().__init__(leq, self.topes)

    def height(self) -> int:
        return int(self.sep.sum(axis=1).max())


def build_region_lattice(arr: Arrangement, B: Sequence[int]) -> RegionLattice:
    topes = arr.topes
    if len(topes) > REGION_CAP:
        raise OracleCapError(f"{arr.name} has {len(topes)} regions (cap {REGION_CAP})")
    return RegionLattice(topes, B)


def is_semidistributive(L: Lattice) -> bool:
    meet, join = L.meet, L.join
    for x in range(L.n):
        J = join[x]
        same = J[:, None] == J[None, :]
        lhs = join[x][meet]
        if (same & (lhs != J[:, None])).any():
            return False
        M = meet[x]
        same = M[:, None] == M[None, :]
        lhs = meet[x][join]
        if (same & (lhs != M[:, None])).any():
            return False
    return True


def _union_pairs(lab: np.ndarray, pairs: np.ndarray) -> np.ndarray:
    parent = {}

    def find(a):
        while parent.get(a, a) != a:
            parent[a] = parent.get(parent[a], parent[a])
            a = parent[a]
        return a

    for a, b in pairs:
        ra, rb = find(int(a)), find(int(b))
        if ra != rb:
            if ra < rb:
                parent[rb] = ra
            else:
                parent[ra] = rb
    mapping = np.array([find(int(v)) for v in range(lab.max() + 1)])
    return mapping[lab]


def _canonical_labels(lab: np.ndarray) -> np.ndarray:
    _, first, inv = np.unique(lab, return_index=True, return_inverse=True)
    order = np.argsort(np.argsort(first))
    return order[inv]


def principal_congruence(L: Lattice, a: int, b: int) -> tuple:
    """Block id per element of the smallest congruence identifying a and b."""
    key = (min(a, b), max(a, b))
    cached = L._cong_cache.get(key)
    if cached is not None:
        return cached
    lab = np.arange(L.n)
    if a != b:
        lab = _union_pairs(lab, np.array([[a, b]]))
    while True:
        # representative per class: smallest element id
        smallest = np.full(L.n, L.n, dtype=np.int64)
        np.minimum.at(smallest, lab, np.arange(L.n))
        rep = smallest[lab]
        pairs = []
        for table in (L.meet, L.join):
            A = lab[table]
            R = A[rep]
            bad = A != R
            if bad.any():
                pairs.append(np.stack([A[bad], R[bad]], axis=1))
        if not pairs:
            break
        pairs = np.unique(np.vstack(pairs), axis=0)
        lab = _union_pairs(lab, pairs)
    out = tuple(int(x) for x in _canonical_labels(lab))
    _check_congruence(L, out)
    L._cong_cache[key] = out
    return out


def _check_congruence(L: Lattice, blocks: tuple) -> None:
    lab = np.array(blocks)
    down = np.empty(L.n, dtype=np.int64)
    up = np.empty(L.n, dtype=np.int64)
    for c in np.unique(lab):
        mem = np.flatnonzero(lab == c)
        lo, hi = mem[0], mem[0]
        for x in mem[1:]:
            lo = L.meet[lo, x]
            hi = L.join[hi, x]
        interval = np.flatnonzero(L.leq[lo, :] & L.leq[:, hi])
        if set(interval) != set(mem):
            raise AssertionError("congruence block is not an interval")
        down[mem] = lo
        up[mem] = hi
    for proj in (down, up):
        if (L.leq & ~L.leq[proj[:, None], proj[None, :]]).any():
            raise AssertionError("block projection is not order-preserving")


def con_join(L: Lattice, j: int) -> tuple:
    (lower,) = L.lower_covers(j)
    return principal_congruence(L, lower, j)


def con_meet(L: Lattice, m: int) -> tuple:
    (upper,) = L.upper_covers(m)
    return principal_congruence(L, m, upper)


def is_congruence_normal_lattice(L: Lattice) -> bool:
    J = L.join_irreducibles()
    M = L.meet_irreducibles()
    cj = {j: con_join(L, j) for j in J}
    cm = {m: con_meet(L, m) for m in M}
    for j in J:
        for m in M:
            if L.leq[j, m] and cj[j] == cm[m]:
                return False
    return True


def _pre_and_ar(arr: Arrangement, B):
    return analyze(arr, B), reorient(arr, B)


def polyhedral_edge(arr: Arrangement, B, sigma: ShardCovector, theta: ShardCovector, _ctx=None) -> bool:
    i, j = sigma.hyperplane, theta.hyperplane
    an, ar = _ctx if _ctx is not None else _pre_and_ar(arr, B)
    if i == j or i not in an.pre[j]:
        return False
    cache = an.__dict__.setdefault("_poly_cache", {})
    key = (i, j)
    if key not in cache:
        g = cross(ar.normals[i], ar.normals[j])
        sv = sign_eval(ar, g)
        cache[key] = (sv, tuple(-x for x in sv))
    flat = ar.flats[ar.flat_index[i, j]].members
    for sv in cache[key]:
        if any(sv[k] != 0 for k in flat):
            continue
        if all(sv[k] == 0 or sv[k] == sigma.vector[k] for k in an.pre[i]) and all(
            sv[k] == 0 or sv[k] == theta.vector[k] for k in an.pre[j]
        ):
            return True
    return False


def polyhedral_edges(arr: Arrangement, B) -> set:
    ctx = _pre_and_ar(arr, B)
    an = ctx[0]
    edges = set()
    for j in range(arr.m):
        for i in an.pre[j]:
            for s in an.shards[i]:
                for t in an.shards[j]:
                    sig, th = ShardCovector(i, s), ShardCovector(j, t)
                    if polyhedral_edge(arr, B, sig, th, ctx):
                        edges.add((sig, th))
    return edges


def cross_validate(arr: Arrangement, B) -> dict:
    B = tuple(B)
    L = build_region_lattice(arr, B)
    an = analyze(arr, B)
    cov_edges = an.digraph().edges
    poly = polyhedral_edges(arr, B)
    if cov_edges != poly:
        diff = sorted(cov_edges ^ poly)[:1]
        raise OracleDisagreementError(f"{arr.name}: edge sets differ at {diff}")
    report = an.report()
    cn = is_congruence_normal_lattice(L)
    if report.acyclic != cn:
        raise OracleDisagreementError(f"{arr.name}: acyclic={report.acyclic} but lattice CN={cn}")
    sd = is_semidistributive(L)
    if not sd:
        raise OracleDisagreementError(f"{arr.name}: region lattice is not semidistributive")
    return {
        "base": B,
        "regions": L.n,
        "edges": len(poly),
        "acyclic": report.acyclic,
        "lattice_cn": cn,
        "semidistributive": sd,
    }
