"""Combinatorial invariants of rank-3 arrangements."""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from math import comb
from typing import Optional

from .omcore import Arrangement


@dataclass
class InvariantReport:
    m: int
    t_vector: dict
    r_vector: dict
    f_vector: tuple  # projective (f0, f1, f2)
    chambers: int
    char_poly: tuple  # coefficients of t^3, t^2, t, 1
    exponents: Optional[tuple]

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "t_vector": {str(k): v for k, v in sorted(self.t_vector.items())},
            "r_vector": {str(k): v for k, v in sorted(self.r_vector.items())},
            "f_vector": list(self.f_vector),
            "chambers": self.chambers,
            "char_poly": list(self.char_poly),
            "exponents": None if self.exponents is None else list(self.exponents),
        }


def char_poly_from_flats(m: int, flat_sizes) -> tuple:
    a = sum(s - 1 for s in flat_sizes)
    b = 1 - m + a
    return (1, -m, a, -b)


def _eval(poly: tuple, t: int) -> int:
    acc = 0
    for c in poly:
        acc = acc * t + c
    return acc


def integer_roots(poly: tuple) -> Optional[tuple]:
    """All three roots of a monic integer cubic if they are integers, else None."""
    coeffs = list(poly)
    roots = []
    while len(coeffs) > 1:
        const = coeffs[-1]
        if const == 0:
            cands = [0]
        else:
            n = abs(const)
            divs = [d for d in range(1, int(n ** 0.5) + 1) if n % d == 0]
            divs = sorted(set(divs + [n // d for d in divs]))
            cands = [s * d for d in divs for s in (1, -1)]
        root = next((r for r in cands if _eval(tuple(coeffs), r) == 0), None)
        if root is None:
            return None
        roots.append(root)
        # synthetic division
        out = [coeffs[0]]
        for c in coeffs[1:-1]:
            out.append(c + out[-1] * root)
        coeffs = out
    return tuple(sorted(roots))


def compute_invariants(arr: Arrangement, regions: Optional[int] = None) -> InvariantReport:
    flats = arr.flats
    sizes = [len(f.members) for f in flats]
    t_vector = dict(sorted(Counter(sizes).items()))
    on = Counter()
    for f in flats:
        for k in f.members:
            on[k] += 1
    r_vector = dict(sorted(Counter(on[k] for k in range(arr.m)).items()))
    poly = char_poly_from_flats(arr.m, sizes)
    if regions is None:
        # Zaslavsky: region count = |chi(-1)|
        regions = abs(_eval(poly, -1))
    f0 = len(flats)
    f2 = regions // 2
    f1 = f0 + f2 - 1
    return InvariantReport(arr.m, t_vector, r_vector, (f0, f1, f2), regions, poly, integer_roots(poly))


def pair_count_identity(arr: Arrangement) -> bool:
    return sum(comb(len(f.members), 2) for f in arr.flats) == comb(arr.m, 2)


def mobius_char_poly(arr: Arrangement) -> tuple:
    """Characteristic polynomial from the Moebius function of the intersection poset.

    Subspaces are encoded by the set of hyperplanes containing them; the poset is
    built by closing intersections, independently of the flat bookkeeping.
    """
    m = arr.m
    chi = arr.chirotope
    full = frozenset(range(m))

    def closure(sub: frozenset) -> frozenset:
        idx = sorted(sub)
        if len(idx) <= 1:
            return sub
        a, b = idx[0], idx[1]
        if any(chi[a, b, k] != 0 for k in idx[2:]):
            return full
        return frozenset(k for k in range(m) if k in sub or chi[a, b, k] == 0)

    elements = {frozenset(): 3}
    frontier = [frozenset()]
    while frontier:
        nxt = []
        for X in frontier:
            for k in range(m):
                if k in X:
                    continue
                Y = closure(X | {k})
                if Y not in elements:
                    elements[Y] = 3 - (0 if not Y else (1 if len(Y) == 1 else (3 if Y == full else 2)))
                    nxt.append(Y)
        frontier = nxt
    order = sorted(elements, key=len)
    mu = {}
    for X in order:
        if not X:
            mu[X] = 1
            continue
        mu[X] = -sum(mu[Y] for Y in order if len(Y) < len(X) and Y <= X)
    coeffs = [0, 0, 0, 0]
    for X, dim in elements.items():
        coeffs[3 - dim] += mu[X]
    return tuple(coeffs)
