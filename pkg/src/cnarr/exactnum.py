"""Exact arithmetic in real number fields Q(theta).

An element is stored as an integer numerator vector over the power basis
1, theta, ..., theta^(d-1) together with a positive common denominator.
Signs are decided by interval evaluation on a rational isolating interval
for theta, refined by bisection until the enclosure excludes zero.
"""
from __future__ import annotations

import threading
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

Rational = Fraction


class FieldMismatchError(ValueError):
    """Raised when elements of different fields are combined."""


# ---------------------------------------------------------------------------
# dense polynomial helpers over Q (low degree first)


def _trim(p: list) -> list:
    while p and p[-1] == 0:
        p.pop()
    return p


def _poly_divmod(a: Sequence[Fraction], b: Sequence[Fraction]):
    a = _trim([Fraction(c) for c in a])
    b = _trim([Fraction(c) for c in b])
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 1)
    lead = b[-1]
    while len(a) >= len(b) and a:
        shift = len(a) - len(b)
        c = a[-1] / lead
        q[shift] = c
        for i, bc in enumerate(b):
            a[i + shift] -= c * bc
        _trim(a)
    return _trim(q), a


def _poly_derivative(p: Sequence[Fraction]) -> list:
    return [Fraction(i) * p[i] for i in range(1, len(p))]


def _poly_eval(p: Sequence[Fraction], x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(p):
        acc = acc * x + c
    return acc


def sturm_sequence(p: Sequence[Fraction]) -> list[list[Fraction]]:
    seq = [_trim([Fraction(c) for c in p])]
    seq.append(_poly_derivative(seq[0]))
    while seq[-1]:
        _, r = _poly_divmod(seq[-2], seq[-1])
        seq.append([-c for c in r])
    seq.pop()
    return seq


def _sign_changes(seq, x: Fraction) -> int:
    vals = [_poly_eval(p, x) for p in seq]
    vals = [v for v in vals if v != 0]
    return sum(1 for u, v in zip(vals, vals[1:]) if (u > 0) != (v > 0))


def count_real_roots(p: Sequence[Fraction], lo: Fraction, hi: Fraction) -> int:
    """Number of distinct real roots of p in the half-open interval (lo, hi]."""
    seq = sturm_sequence(p)
    return _sign_changes(seq, lo) - _sign_changes(seq, hi)


# ---------------------------------------------------------------------------


def _as_fraction(v) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, (int, str)):
        return Fraction(v)
    raise TypeError(f"cannot convert {type(v).__name__} to a rational")


class NumberField:
    """Q(theta) for a monic irreducible minimal polynomial and an isolating interval.

    ``minpoly`` lists coefficients from the constant term up to the leading 1.
    """

    def __init__(self, name: str, minpoly: Sequence, root_interval: tuple, check: bool = True):
        mp = [_as_fraction(c) for c in minpoly]
        _trim(mp)
        if len(mp) < 2:
            raise ValueError("minimal polynomial must have degree >= 1")
        if mp[-1] != 1:
            lead = mp[-1]
            mp = [c / lead for c in mp]
        self.name = name
        self.minpoly = tuple(mp)
        self.degree = len(mp) - 1
        lo, hi = (_as_fraction(root_interval[0]), _as_fraction(root_interval[1]))
        if not lo < hi:
            raise ValueError("root interval must satisfy lo < hi")
        if check:
            self._certify(lo, hi)
        self.root_interval = (lo, hi)
        self._intervals = [(lo, hi)]
        self._lock = threading.Lock()
        self._build_reduction()
        self.zero = AlgebraicElement._raw(self, (0,) * self.degree, 1)
        self.one = self.element([1])
        self.generator = self.element([0, 1]) if self.degree > 1 else None

    def _certify(self, lo: Fraction, hi: Fraction) -> None:
        p = self.minpoly
        dp = _poly_derivative(p)
        # squarefree check: gcd(p, p') is constant
        a, b = list(p), list(dp)
        while _trim(b):
            _, r = _poly_divmod(a, b)
            a, b = b, r
        if len(_trim(a)) > 1:
            raise ValueError(f"minimal polynomial of {self.name} is not squarefree")
        if _poly_eval(p, lo) == 0 or _poly_eval(p, hi) == 0:
            raise ValueError("root interval endpoints must not be roots")
        if count_real_roots(p, lo, hi) != 1:
            raise ValueError(f"root interval of {self.name} does not isolate exactly one root")

    def _build_reduction(self) -> None:
        d = self.degree
        # rows[e] = theta^(d+e) in the power basis, for e = 0 .. d-2
        rows = []
        cur = [-c for c in self.minpoly[:d]]
        for _ in range(max(d - 1, 0)):
            rows.append(cur)
            nxt = [Fraction(0)] + cur[:-1]
            top = cur[-1]
            nxt = [nxt[k] - top * self.minpoly[k] for k in range(d)]
            cur = nxt
        den = 1
        for row in rows:
            for c in row:
                den = den * c.denominator // gcd(den, c.denominator)
        self._red_den = den
        self._red_rows = [tuple(int(c * den) for c in row) for row in rows]

    def __getstate__(self):
        state = dict(self.__dict__)
        state.pop("_lock", None)
        return state

    def __setstate__(self, state):
        self.__dict__.update(state)
        self._lock = threading.Lock()

    def __repr__(self) -> str:
        return f"NumberField({self.name!r}, degree={self.degree})"

    def __eq__(self, other) -> bool:
        if self is other:
            return True
        if not isinstance(other, NumberField):
            return NotImplemented
        return self.minpoly == other.minpoly and self._same_root(other)

    def _same_root(self, other: "NumberField") -> bool:
        lo = max(self.root_interval[0], other.root_interval[0])
        hi = min(self.root_interval[1], other.root_interval[1])
        return lo < hi

    def __hash__(self) -> int:
        return hash(self.minpoly)

    # construction ----------------------------------------------------------

    def element(self, coeffs: Iterable) -> "AlgebraicElement":
        cs = [_as_fraction(c) for c in coeffs]
        if len(cs) > self.degree:
            # reduce a longer polynomial modulo the minimal polynomial
            _, cs = _poly_divmod(cs, self.minpoly)
        cs = cs + [Fraction(0)] * (self.degree - len(cs))
        den = 1
        for c in cs:
            den = den * c.denominator // gcd(den, c.denominator)
        return AlgebraicElement._make(self, tuple(int(c * den) for c in cs), den)

    def __call__(self, value) -> "AlgebraicElement":
        if isinstance(value, AlgebraicElement):
            if value.field is not self and value.field != self:
                raise FieldMismatchError(f"{value.field.name} vs {self.name}")
            return value
        if isinstance(value, (int, Fraction, str)):
            return self.element([value])
        return self.element(value)

    # root enclosures -------------------------------------------------------

    def interval(self, level: int) -> tuple[Fraction, Fraction]:
        """Isolating interval after ``level`` bisections."""
        if level < len(self._intervals):
            return self._intervals[level]
        with self._lock:
            while len(self._intervals) <= level:
                lo, hi = self._intervals[-1]
                mid = (lo + hi) / 2
                fm = _poly_eval(self.minpoly, mid)
                if fm == 0:
                    # rational root; only possible for degree one
                    self._intervals.append((mid, mid))
                    continue
                flo = _poly_eval(self.minpoly, lo)
                if (flo > 0) != (fm > 0):
                    self._intervals.append((lo, mid))
                else:
                    self._intervals.append((mid, hi))
        return self._intervals[level]

    def approx(self) -> float:
        lo, hi = self.interval(8)
        return float((lo + hi) / 2)


class AlgebraicElement:
    """Immutable element of a NumberField."""

    __slots__ = ("field", "num", "den", "_sign")

    @classmethod
    def _raw(cls, field: NumberField, num: tuple, den: int) -> "AlgebraicElement":
        obj = object.__new__(cls)
        obj.field = field
        obj.num = num
        obj.den = den
        obj._sign = None
        return obj

    @classmethod
    def _make(cls, field: NumberField, num: tuple, den: int) -> "AlgebraicElement":
        if den < 0:
            num = tuple(-c for c in num)
            den = -den
        g = den
        for c in num:
            if g == 1:
                break
            g = gcd(g, c)
        if g > 1:
            num = tuple(c // g for c in num)
            den //= g
        if not any(num):
            den = 1
        return cls._raw(field, num, den)

    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(c, self.den) for c in self.num)

    def is_zero(self) -> bool:
        return not any(self.num)

    def is_rational(self) -> bool:
        return not any(self.num[1:])

    def __repr__(self) -> str:
        return f"AlgebraicElement({self.field.name}, {self})"

    def __str__(self) -> str:
        terms = []
        for k, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if k == 0:
                terms.append(str(c))
            else:
                power = "t" if k == 1 else f"t^{k}"
                terms.append(f"{c}*{power}")
        return " + ".join(terms) if terms else "0"

    def __float__(self) -> float:
        lo, hi = self.field.interval(8)
        t = (lo + hi) / 2
        return float(_poly_eval(self.coeffs, t))

    # coercion ---------------------------------------------------------------

    def _coerce(self, other) -> "AlgebraicElement":
        if isinstance(other, AlgebraicElement):
            if other.field is not self.field and other.field != self.field:
                raise FieldMismatchError(f"{self.field.name} vs {other.field.name}")
            return other
        if isinstance(other, (int, Fraction)):
            return self.field.element([other])
        return NotImplemented

    # arithmetic -------------------------------------------------------------

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        da, db = self.den, other.den
        if da == db:
            return AlgebraicElement._make(self.field, tuple(x + y for x, y in zip(self.num, other.num)), da)
        return AlgebraicElement._make(
            self.field, tuple(x * db + y * da for x, y in zip(self.num, other.num)), da * db
        )

    __radd__ = __add__

    def __neg__(self):
        return AlgebraicElement._raw(self.field, tuple(-x for x in self.num), self.den)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        f = self.field
        d = f.degree
        a, b = self.num, other.num
        if d == 1:
            return AlgebraicElement._make(f, (a[0] * b[0],), self.den * other.den)
        prod = [0] * (2 * d - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        prod[i + j] += x * y
        rd = f._red_den
        res = [c * rd for c in prod[:d]]
        for e, row in enumerate(f._red_rows):
            c = prod[d + e]
            if c:
                for k in range(d):
                    res[k] += c * row[k]
        return AlgebraicElement._make(f, tuple(res), self.den * other.den * rd)

    __rmul__ = __mul__

    def inverse(self) -> "AlgebraicElement":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        f = self.field
        if f.degree == 1:
            return AlgebraicElement._make(f, (self.den,), self.num[0])
        # extended Euclid on (a, minpoly) over Q
        r0, r1 = list(f.minpoly), list(self.coeffs)
        _trim(r1)
        s0, s1 = [Fraction(0)], [Fraction(1)]
        while len(r1) > 1:
            q, r = _poly_divmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, _poly_sub(s0, _poly_mul(q, s1))
        c = r1[0]
        return f.element([x / c for x in s1])

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other * self.inverse()

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result = self.field.one
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # comparison -------------------------------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and Fraction(self.num[0], self.den) == other
        if not isinstance(other, AlgebraicElement):
            return NotImplemented
        if other.field is not self.field and other.field != self.field:
            return False
        return self.num == other.num and self.den == other.den

    def __hash__(self) -> int:
        if self.is_rational():
            return hash(Fraction(self.num[0], self.den))
        return hash((self.num, self.den))

    def sign(self) -> int:
        s = self._sign
        if s is None:
            s = _sign(self)
            self._sign = s
        return s

    def __lt__(self, other):
        return (self - other).sign() < 0

    def __le__(self, other):
        return (self - other).sign() <= 0

    def __gt__(self, other):
        return (self - other).sign() > 0

    def __ge__(self, other):
        return (self - other).sign() >= 0


def _poly_mul(a, b):
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def _poly_sub(a, b):
    n = max(len(a), len(b))
    a = list(a) + [Fraction(0)] * (n - len(a))
    b = list(b) + [Fraction(0)] * (n - len(b))
    return _trim([x - y for x, y in zip(a, b)])


def _interval_horner(num: tuple, lo: Fraction, hi: Fraction) -> tuple[Fraction, Fraction]:
    # theta enclosure [lo, hi]; integer coefficients
    a = b = Fraction(num[-1])
    for c in reversed(num[:-1]):
        p = (a * lo, a * hi, b * lo, b * hi)
        a = min(p) + c
        b = max(p) + c
    return a, b


MAX_REFINEMENT = 4000


def _sign(x: AlgebraicElement) -> int:
    num = x.num
    if not any(num):
        return 0
    if not any(num[1:]):
        return 1 if num[0] > 0 else -1
    f = x.field
    level = 0
    step = 1
    while level <= MAX_REFINEMENT:
        lo, hi = f.interval(level)
        a, b = _interval_horner(num, lo, hi)
        if a > 0:
            return 1
        if b < 0:
            return -1
        level += step
        step = min(step * 2, 64)
    raise ArithmeticError("sign determination did not terminate")


# functional interface -------------------------------------------------------


def nf_add(a: AlgebraicElement, b: AlgebraicElement) -> AlgebraicElement:
    return a + b


def nf_mul(a: AlgebraicElement, b: AlgebraicElement) -> AlgebraicElement:
    return a * b


def nf_inverse(a: AlgebraicElement) -> AlgebraicElement:
    return a.inverse()


def nf_sign(a: AlgebraicElement) -> int:
    return a.sign()


QQ = NumberField("QQ", [0, 1], (-1, 1))


def dot(u: Sequence[AlgebraicElement], v: Sequence[AlgebraicElement]) -> AlgebraicElement:
    return u[0] * v[0] + u[1] * v[1] + u[2] * v[2]


def cross(u: Sequence[AlgebraicElement], v: Sequence[AlgebraicElement]) -> tuple:
    return (
        u[1] * v[2] - u[2] * v[1],
        u[2] * v[0] - u[0] * v[2],
        u[0] * v[1] - u[1] * v[0],
    )


def det3(u, v, w) -> AlgebraicElement:
    return dot(u, cross(v, w))
