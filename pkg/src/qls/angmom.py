"""Exact Wigner 3j, 6j and 9j symbols.

All arguments are angular momenta stored as twice their value, so half
integers are exact. Racah sums are evaluated in exact rational arithmetic
on integer factorials; the only floating-point operation is the final
square root at the return boundary. Every symbol can be written as
``r * sqrt(q)`` with rational ``r`` and ``q``, which is kept in
:attr:`SymbolValue.exact_form`.

>>> float(wigner3j(1, 1, 0, 0, 0, 0))
-0.5773502691896257
>>> wigner6j(1, 1, 0, 1, 1, 0).value
0.3333333333333333
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from numbers import Real

__all__ = [
    "AngularMomentumError",
    "HalfInt",
    "SymbolValue",
    "wigner3j",
    "wigner6j",
    "wigner9j",
    "J_MAX",
]

#: Largest angular momentum accepted (sizes the factorial table).
J_MAX = 16

_FACT = [math.factorial(n) for n in range(4 * J_MAX + 2)]


class AngularMomentumError(ValueError):
    """Malformed angular-momentum argument."""


@dataclass(frozen=True, order=True)
class HalfInt:
    """Non-negative or signed half-integer stored as ``2 * value``."""

    twice_value: int

    @classmethod
    def of(cls, x) -> "HalfInt":
        return cls(_twice(x))

    @property
    def value(self) -> float:
        return self.twice_value / 2

    @property
    def is_integer(self) -> bool:
        return self.twice_value % 2 == 0

    def __float__(self) -> float:
        return self.value

    def __add__(self, other):
        return HalfInt(self.twice_value + _twice(other))

    def __sub__(self, other):
        return HalfInt(self.twice_value - _twice(other))

    def __neg__(self):
        return HalfInt(-self.twice_value)

    def __str__(self) -> str:
        if self.twice_value % 2 == 0:
            return str(self.twice_value // 2)
        return f"{self.twice_value}/2"


@dataclass(frozen=True)
class SymbolValue:
    """Value of a coupling symbol, ``value == r * sqrt(q)`` exactly."""

    value: float
    exact_form: tuple[Fraction, Fraction] | None = None

    def __float__(self) -> float:
        return self.value

    @property
    def is_zero(self) -> bool:
        return self.value == 0.0


_ZERO = SymbolValue(0.0, (Fraction(0), Fraction(1)))


def _twice(x) -> int:
    """Convert an int, half-integer float, Fraction or HalfInt to 2*x."""
    if isinstance(x, HalfInt):
        return x.twice_value
    if isinstance(x, bool):
        raise AngularMomentumError(f"not an angular momentum: {x!r}")
    if isinstance(x, int):
        return 2 * x
    if isinstance(x, Fraction):
        t = 2 * x
        if t.denominator != 1:
            raise AngularMomentumError(f"{x} is not a multiple of 1/2")
        return int(t)
    if isinstance(x, Real):
        t = 2.0 * float(x)
        if not math.isfinite(t) or t != round(t):
            raise AngularMomentumError(f"{x} is not a multiple of 1/2")
        return int(round(t))
    raise AngularMomentumError(f"not an angular momentum: {x!r}")


def _check_j(*tj: int) -> None:
    for t in tj:
        if t < 0:
            raise AngularMomentumError(f"negative angular momentum {t}/2")
        if t > 2 * J_MAX:
            raise AngularMomentumError(f"j = {t}/2 exceeds J_MAX = {J_MAX}")


def _triangle_ok(ta: int, tb: int, tc: int) -> bool:
    return abs(ta - tb) <= tc <= ta + tb and (ta + tb + tc) % 2 == 0


def _delta(ta: int, tb: int, tc: int) -> Fraction:
    """Triangle coefficient (a+b-c)!(a-b+c)!(-a+b+c)!/(a+b+c+1)! (args doubled)."""
    return Fraction(
        _FACT[(ta + tb - tc) // 2] * _FACT[(ta - tb + tc) // 2] * _FACT[(-ta + tb + tc) // 2],
        _FACT[(ta + tb + tc) // 2 + 1],
    )


def _to_float(r: Fraction, q: Fraction) -> float:
    if r == 0:
        return 0.0
    sq = r * r * q
    # integer square root carried to ~128 bits before the single rounding
    shift = max(0, 128 - (sq.numerator.bit_length() - sq.denominator.bit_length()))
    shift += shift % 2
    root = math.isqrt((sq.numerator << shift) // sq.denominator)
    mag = root / (1 << (shift // 2))
    return mag if r > 0 else -mag


# -- 3j ---------------------------------------------------------------------


@lru_cache(maxsize=None)
def _threej_exact(t1, t2, t3, u1, u2, u3) -> tuple[Fraction, Fraction]:
    if u1 + u2 + u3 != 0:
        return Fraction(0), Fraction(1)
    if not _triangle_ok(t1, t2, t3):
        return Fraction(0), Fraction(1)
    if abs(u1) > t1 or abs(u2) > t2 or abs(u3) > t3:
        return Fraction(0), Fraction(1)

    # all quantities below are integers (twice-values halved)
    j1p, j1m = (t1 + u1) // 2, (t1 - u1) // 2
    j2p, j2m = (t2 + u2) // 2, (t2 - u2) // 2
    j3p, j3m = (t3 + u3) // 2, (t3 - u3) // 2
    a = (t3 - t2 + u1) // 2
    b = (t3 - t1 - u2) // 2
    c = (t1 + t2 - t3) // 2
    kmin = max(0, -a, -b)
    kmax = min(c, j1m, j2p)
    s = Fraction(0)
    for k in range(kmin, kmax + 1):
        den = _FACT[k] * _FACT[a + k] * _FACT[b + k] * _FACT[c - k] * _FACT[j1m - k] * _FACT[j2p - k]
        s += Fraction(-1 if k % 2 else 1, den)
    if s == 0:
        return Fraction(0), Fraction(1)
    phase_twice = t1 - t2 - u3
    if (phase_twice // 2) % 2:
        s = -s
    q = _delta(t1, t2, t3) * (
        _FACT[j1p] * _FACT[j1m] * _FACT[j2p] * _FACT[j2m] * _FACT[j3p] * _FACT[j3m]
    )
    return s, q


def wigner3j(j1, j2, j3, m1, m2, m3) -> SymbolValue:
    """Wigner 3j symbol ``(j1 j2 j3; m1 m2 m3)``.

    Returns an exact zero when ``m1 + m2 + m3 != 0``, the triangle rule
    fails, or some ``|m| > j``. A projection whose parity differs from its
    ``j`` raises :class:`AngularMomentumError`.
    """
    t = tuple(_twice(x) for x in (j1, j2, j3))
    u = tuple(_twice(x) for x in (m1, m2, m3))
    _check_j(*t)
    for tj, um in zip(t, u):
        if (tj - um) % 2:
            raise AngularMomentumError(f"m = {um}/2 has the wrong parity for j = {tj}/2")
    r, q = _threej_exact(*t, *u)
    if r == 0:
        return _ZERO
    return SymbolValue(_to_float(r, q), (r, q))


# -- 6j ---------------------------------------------------------------------


def _sixj_triads(t):
    a, b, c, d, e, f = t
    return ((a, b, c), (a, e, f), (d, b, f), (d, e, c))


@lru_cache(maxsize=None)
def _racah_w(a, b, c, d, e, f) -> Fraction:
    """Racah sum of the 6j symbol without its triangle prefactor."""
    a1 = (a + b + c) // 2
    a2 = (a + e + f) // 2
    a3 = (d + b + f) // 2
    a4 = (d + e + c) // 2
    b1 = (a + b + d + e) // 2
    b2 = (b + c + e + f) // 2
    b3 = (c + a + f + d) // 2
    s = Fraction(0)
    for t in range(max(a1, a2, a3, a4), min(b1, b2, b3) + 1):
        den = (
            _FACT[t - a1] * _FACT[t - a2] * _FACT[t - a3] * _FACT[t - a4]
            * _FACT[b1 - t] * _FACT[b2 - t] * _FACT[b3 - t]
        )
        s += Fraction((-1) ** t * _FACT[t + 1], den)
    return s


def _sixj_valid(t) -> bool:
    return all(_triangle_ok(*tri) for tri in _sixj_triads(t))


@lru_cache(maxsize=None)
def _sixj_exact(*t) -> tuple[Fraction, Fraction]:
    if not _sixj_valid(t):
        return Fraction(0), Fraction(1)
    w = _racah_w(*t)
    if w == 0:
        return Fraction(0), Fraction(1)
    q = Fraction(1)
    for tri in _sixj_triads(t):
        q *= _delta(*tri)
    return w, q


def wigner6j(j1, j2, j3, j4, j5, j6) -> SymbolValue:
    """Wigner 6j symbol ``{j1 j2 j3; j4 j5 j6}``; exact zero on a failed triad."""
    t = tuple(_twice(x) for x in (j1, j2, j3, j4, j5, j6))
    _check_j(*t)
    r, q = _sixj_exact(*t)
    if r == 0:
        return _ZERO
    return SymbolValue(_to_float(r, q), (r, q))


# -- 9j ---------------------------------------------------------------------


@lru_cache(maxsize=None)
def _ninej_exact(*t) -> tuple[Fraction, Fraction]:
    a, b, c, d, e, f, g, h, i = t
    rows_cols = ((a, b, c), (d, e, f), (g, h, i), (a, d, g), (b, e, h), (c, f, i))
    if not all(_triangle_ok(*tri) for tri in rows_cols):
        return Fraction(0), Fraction(1)
    # 9j = sum_x (-1)^{2x} (2x+1) {a b c; f i x}{d e f; b x h}{g h i; x a d};
    # the x-dependent triads appear squared, so all terms share one radicand.
    lo = max(abs(a - i), abs(d - h), abs(b - f))
    hi = min(a + i, d + h, b + f)
    total = Fraction(0)
    for x in range(lo, hi + 1, 2):
        s1 = (a, b, c, f, i, x)
        s2 = (d, e, f, b, x, h)
        s3 = (g, h, i, x, a, d)
        if not (_sixj_valid(s1) and _sixj_valid(s2) and _sixj_valid(s3)):
            continue
        w = _racah_w(*s1) * _racah_w(*s2) * _racah_w(*s3)
        if w == 0:
            continue
        w *= _delta(a, i, x) * _delta(f, b, x) * _delta(d, x, h)
        total += (-1 if x % 2 else 1) * (x + 1) * w
    if total == 0:
        return Fraction(0), Fraction(1)
    q = Fraction(1)
    for tri in rows_cols:
        q *= _delta(*tri)
    return total, q


def wigner9j(j1, j2, j3, j4, j5, j6, j7, j8, j9) -> SymbolValue:
    """Wigner 9j symbol, arguments in row order; zero on any failed row/column triad."""
    t = tuple(_twice(x) for x in (j1, j2, j3, j4, j5, j6, j7, j8, j9))
    _check_j(*t)
    r, q = _ninej_exact(*t)
    if r == 0:
        return _ZERO
    return SymbolValue(_to_float(r, q), (r, q))
