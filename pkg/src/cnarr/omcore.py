"""Oriented-matroid layer for rank-3 central arrangements.

Sign vectors are tuples over {-1, 0, 1}; restricted covectors additionally
use STAR (= 2) for forgotten positions. Hyperplanes are indexed from 0.
"""
from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Optional, Sequence

import numpy as np

from .exactnum import QQ, AlgebraicElement, NumberField, cross, dot

STAR = 2
_SYMBOL = {-1: "-", 0: "0", 1: "+", STAR: "*"}
_FROM_SYMBOL = {"-": -1, "0": 0, "+": 1, "*": STAR}

SignVector = tuple
RestrictedCovector = tuple


class ArrangementError(ValueError):
    pass


class GenericityError(ArithmeticError):
    """No generic seed point could be produced."""


class InvalidTopeError(ValueError):
    pass


def sign_string(v: Sequence[int]) -> str:
    return "".join(_SYMBOL[int(x)] for x in v)


def parse_signs(s: str) -> tuple:
    s = s.strip().replace(",", "").replace(" ", "")
    try:
        return tuple(_FROM_SYMBOL[ch] for ch in s)
    except KeyError as exc:
        raise ValueError(f"bad sign character {exc.args[0]!r}") from None


# entrywise intersection table; STAR is neutral
def _meet(a: int, b: int) -> int:
    if a == STAR:
        return b
    if b == STAR:
        return a
    if a == b:
        return a
    return 0


def restricted_intersection(c: Sequence[int], d: Sequence[int]) -> tuple:
    if len(c) != len(d):
        raise ValueError("restricted covectors of different lengths")
    return tuple(_meet(a, b) for a, b in zip(c, d))


@dataclass(frozen=True)
class Flat2:
    members: tuple
    generator: tuple

    def __contains__(self, k: int) -> bool:
        return k in self.members

    def __len__(self) -> int:
        return len(self.members)


@dataclass(frozen=True, eq=False)
class Arrangement:
    name: str
    field: NumberField
    normals: tuple
    expected_regions: Optional[int] = None

    def __post_init__(self):
        normals = tuple(tuple(self.field(c) for c in n) for n in self.normals)
        object.__setattr__(self, "normals", normals)
        for k, n in enumerate(normals):
            if len(n) != 3:
                raise ArrangementError(f"normal {k} is not a 3-vector")
            if all(c.is_zero() for c in n):
                raise ArrangementError(f"normal {k} is zero")
        chi = self.chirotope
        m = self.m
        for i in range(m):
            for j in range(i + 1, m):
                if not chi[i, j].any():
                    raise ArrangementError(f"normals {i} and {j} are parallel")
        if m < 3 or not chi.any():
            raise ArrangementError("normals do not have rank 3")

    @property
    def m(self) -> int:
        return len(self.normals)

    def __repr__(self) -> str:
        return f"Arrangement({self.name!r}, m={self.m}, field={self.field.name})"

    def __getstate__(self):
        return dict(self.__dict__)

    def __setstate__(self, state):
        self.__dict__.update(state)

    @cached_property
    def chirotope(self) -> np.ndarray:
        """chi[i,j,k] = sign det(n_i, n_j, n_k)."""
        m = self.m
        chi = np.zeros((m, m, m), dtype=np.int8)
        ns = self.normals
        for j in range(m):
            for k in range(j + 1, m):
                c = cross(ns[j], ns[k])
                if all(x.is_zero() for x in c):
                    continue
                for i in range(m):
                    if i == j or i == k:
                        continue
                    s = dot(ns[i], c).sign()
                    if s:
                        # alternating: fill all six permutations
                        chi[i, j, k] = chi[j, k, i] = chi[k, i, j] = s
                        chi[j, i, k] = chi[i, k, j] = chi[k, j, i] = -s
        return chi

    @cached_property
    def flats(self) -> tuple:
        return _compute_flats(self)

    @cached_property
    def flat_index(self) -> np.ndarray:
        """flat_index[i, j] = index into flats of the flat containing i and j (-1 on the diagonal)."""
        m = self.m
        out = -np.ones((m, m), dtype=np.int32)
        for t, f in enumerate(self.flats):
            for a in f.members:
                for b in f.members:
                    if a != b:
                        out[a, b] = t
        return out

    @cached_property
    def circuit_matrix(self) -> np.ndarray:
        return _compute_circuits(self)

    @cached_property
    def topes(self) -> tuple:
        return enumerate_topes(self)


def _compute_flats(arr: Arrangement) -> tuple:
    m = arr.m
    chi = arr.chirotope
    seen = np.zeros((m, m), dtype=bool)
    flats = []
    for a in range(m):
        for b in range(a + 1, m):
            if seen[a, b]:
                continue
            members = [k for k in range(m) if k == a or k == b or chi[a, b, k] == 0]
            for x in members:
                for y in members:
                    seen[x, y] = True
            gen = cross(arr.normals[a], arr.normals[b])
            flats.append(Flat2(tuple(members), gen))
    flats.sort(key=lambda f: f.members)
    return tuple(flats)


def rank2_flats(arr: Arrangement) -> tuple:
    return arr.flats


def sign_eval(arr: Arrangement, x: Sequence) -> tuple:
    x = tuple(arr.field(c) for c in x)
    return tuple(dot(n, x).sign() for n in arr.normals)


def line_covectors(arr: Arrangement, f: Flat2) -> tuple:
    h = sign_eval(arr, f.generator)
    return h, tuple(-v for v in h)


def cocircuit(arr: Arrangement, f: Flat2) -> np.ndarray:
    """Chirotope form of the line covector at +generator (n_k . (n_a x n_b) = chi(a,b,k))."""
    a, b = f.members[0], f.members[1]
    return arr.chirotope[a, b].copy()


def _canonical(v: np.ndarray) -> np.ndarray:
    nz = np.flatnonzero(v)
    if nz.size and v[nz[0]] < 0:
        return -v
    return v


def _compute_circuits(arr: Arrangement) -> np.ndarray:
    m = arr.m
    chi = arr.chirotope
    rows = []
    # dependent triples: members of a common flat
    for f in arr.flats:
        if len(f.members) < 3:
            continue
        w = next(k for k in range(m) if k not in f.members)
        for a, b, c in itertools.combinations(f.members, 3):
            v = np.zeros(m, dtype=np.int8)
            v[a], v[b], v[c] = chi[b, c, w], -chi[a, c, w], chi[a, b, w]
            rows.append(_canonical(v))
    # independent 4-sets spanning R^3 generically
    if m >= 4:
        quads = np.array(list(itertools.combinations(range(m), 4)), dtype=np.int32)
        a, b, c, d = quads.T
        s = np.stack([chi[b, c, d], -chi[a, c, d], chi[a, b, d], -chi[a, b, c]], axis=1)
        ok = (s != 0).all(axis=1)
        quads, s = quads[ok], s[ok]
        flip = s[:, 0] < 0
        s[flip] = -s[flip]
        mat = np.zeros((len(quads), m), dtype=np.int8)
        idx = np.arange(len(quads))[:, None]
        mat[idx, quads] = s
        if rows:
            mat = np.vstack([np.array(rows, dtype=np.int8), mat])
        return mat
    return np.array(rows, dtype=np.int8).reshape(-1, m)


def circuits(arr: Arrangement) -> list:
    return [tuple(int(x) for x in row) for row in arr.circuit_matrix]


def is_tope(arr: Arrangement, circ, T: Sequence[int]) -> bool:
    t = np.asarray(T, dtype=np.int8)
    if t.shape != (arr.m,):
        raise InvalidTopeError("tope candidate has wrong length")
    if (t == 0).any() or (np.abs(t) > 1).any():
        raise InvalidTopeError("tope candidate must be zero-free")
    mat = circ if isinstance(circ, np.ndarray) else np.array(circ, dtype=np.int8).reshape(-1, arr.m)
    return _orthogonal(mat, t)


def _orthogonal(mat: np.ndarray, t: np.ndarray) -> bool:
    if mat.shape[0] == 0:
        return True
    p = mat * t
    return bool(((p > 0).any(axis=1) & (p < 0).any(axis=1)).all())


SEED_START = 10**6
SEED_RETRIES = 5


def generic_point(arr: Arrangement) -> tuple:
    big = Fraction(SEED_START)
    for _ in range(SEED_RETRIES):
        v = [arr.field.zero] * 3
        scale = Fraction(1)
        for n in arr.normals:
            scale /= big
            v = [v[c] - n[c] * scale for c in range(3)]
        if all(sign_eval(arr, v)):
            return tuple(v)
        big = big * big
    raise GenericityError(f"no generic seed for {arr.name}")


def enumerate_topes(arr: Arrangement) -> tuple:
    m = arr.m
    seed = sign_eval(arr, generic_point(arr))
    mat = arr.circuit_matrix
    by_index = [mat[mat[:, e] != 0] for e in range(m)]
    start = np.array(seed, dtype=np.int8)
    seen = {start.tobytes()}
    out = [start]
    queue = deque([start])
    while queue:
        t = queue.popleft()
        for e in range(m):
            u = t.copy()
            u[e] = -u[e]
            key = u.tobytes()
            if key in seen:
                continue
            if _orthogonal(by_index[e], u):
                seen.add(key)
                out.append(u)
                queue.append(u)
    return tuple(sorted(tuple(int(x) for x in t) for t in out))


def tope_neighbours(arr: Arrangement, T: Sequence[int]) -> list:
    """Indices e whose flip of T is again a tope (walls of the region)."""
    mat = arr.circuit_matrix
    t = np.array(T, dtype=np.int8)
    walls = []
    for e in range(arr.m):
        u = t.copy()
        u[e] = -u[e]
        if _orthogonal(mat[mat[:, e] != 0], u):
            walls.append(e)
    return walls


def check_tope(arr: Arrangement, B: Sequence[int]) -> tuple:
    B = tuple(int(x) for x in B)
    if len(B) != arr.m:
        raise InvalidTopeError("base has wrong length")
    if "topes" in arr.__dict__:
        if B not in set(arr.topes):
            raise InvalidTopeError(f"{sign_string(B)} is not a tope")
    elif not is_tope(arr, arr.circuit_matrix, B):
        raise InvalidTopeError(f"{sign_string(B)} is not a tope")
    return B


def reorient(arr: Arrangement, B: Sequence[int]) -> Arrangement:
    B = check_tope(arr, B)
    s = np.array([-b for b in B], dtype=np.int8)
    normals = tuple(tuple(-c for c in n) if b > 0 else n for n, b in zip(arr.normals, B))
    new = Arrangement.__new__(Arrangement)
    object.__setattr__(new, "name", arr.name)
    object.__setattr__(new, "field", arr.field)
    object.__setattr__(new, "normals", normals)
    object.__setattr__(new, "expected_regions", arr.expected_regions)
    chi = arr.chirotope * s[:, None, None] * s[None, :, None] * s[None, None, :]
    new.__dict__["chirotope"] = chi.astype(np.int8)
    new.__dict__["flats"] = tuple(
        Flat2(f.members, cross(normals[f.members[0]], normals[f.members[1]])) for f in arr.flats
    )
    return new


def basic_pair(arr_reoriented: Arrangement, f: Flat2) -> tuple:
    """Extreme members of the flat's 2-D cone, from orientations relative to an outside normal."""
    members = f.members
    if len(members) == 2:
        return members
    chi = arr_reoriented.chirotope
    w = next(k for k in range(arr_reoriented.m) if k not in members)
    return _basic_from_chi(chi, members, w)


def _basic_from_chi(chi: np.ndarray, members: Sequence[int], w: int) -> tuple:
    # in the reoriented cone all members lie in an open half-plane, so
    # "a before b" (chi(a,b,w) > 0) is a strict total order whose ends are basic
    sub = chi[np.ix_(members, members, [w])][:, :, 0]
    wins = (sub > 0).sum(axis=1)
    n = len(members)
    first = members[int(np.flatnonzero(wins == n - 1)[0])]
    last = members[int(np.flatnonzero(wins == 0)[0])]
    return tuple(sorted((first, last)))


def make_arrangement(name: str, normals: Iterable, field: NumberField = QQ,
                     expected_regions: Optional[int] = None) -> Arrangement:
    return Arrangement(name, field, tuple(tuple(n) for n in normals), expected_regions)


def delete(arr: Arrangement, k: int) -> Arrangement:
    normals = arr.normals[:k] + arr.normals[k + 1:]
    return Arrangement(f"{arr.name}\\H{k + 1}", arr.field, normals)
