"""Exact arithmetic in the golden integers Z[tau] and in the planar coordinate field.

A :class:`GoldenInt` is ``a + b*tau`` with integer ``a, b`` and ``tau**2 == tau + 1``.
A :class:`GoldenCoord` is a planar point whose coordinates are
``(p + q*s) / 2`` with ``p, q`` golden integers and ``s = sin(72 deg)``,
``s**2 = (tau + 2) / 4``.  Every point of the decagonal module lands in this
carrier, so orientation and distance predicates can be decided exactly.

Components are held to the signed 64-bit range; anything larger raises
:class:`OverflowError` instead of wrapping.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import IntEnum

import numpy as np

TAU = (1.0 + math.sqrt(5.0)) / 2.0
SIN72 = math.sin(2.0 * math.pi / 5.0)

_INT64_MAX = 2**63 - 1


def _checked(v: int) -> int:
    if not -_INT64_MAX - 1 <= v <= _INT64_MAX:
        raise OverflowError(f"golden integer component {v} exceeds the 64-bit range")
    return v


class Sign(IntEnum):
    NEGATIVE = -1
    ZERO = 0
    POSITIVE = 1


@dataclass(frozen=True, slots=True)
class GoldenInt:
    """The real number ``a + b*tau``."""

    a: int = 0
    b: int = 0

    def __post_init__(self) -> None:
        _checked(self.a)
        _checked(self.b)

    @classmethod
    def coerce(cls, x: GoldenInt | int) -> GoldenInt:
        if isinstance(x, GoldenInt):
            return x
        if isinstance(x, (int, np.integer)):
            return cls(int(x), 0)
        raise TypeError(f"cannot interpret {x!r} as a golden integer")

    def __add__(self, other: GoldenInt | int) -> GoldenInt:
        o = GoldenInt.coerce(other)
        return GoldenInt(self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __neg__(self) -> GoldenInt:
        return GoldenInt(-self.a, -self.b)

    def __sub__(self, other: GoldenInt | int) -> GoldenInt:
        return self + (-GoldenInt.coerce(other))

    def __rsub__(self, other: GoldenInt | int) -> GoldenInt:
        return GoldenInt.coerce(other) - self

    def __mul__(self, other: GoldenInt | int) -> GoldenInt:
        return gold_mul(self, GoldenInt.coerce(other))

    __rmul__ = __mul__

    def __pow__(self, n: int) -> GoldenInt:
        if n < 0:
            raise ValueError("negative powers are only defined for units; use inverse()")
        out, base = ONE, self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def conj(self) -> GoldenInt:
        return gold_conj(self)

    def norm(self) -> int:
        """Field norm ``x * conj(x)``, an ordinary integer."""
        return self.a * self.a + self.a * self.b - self.b * self.b

    def inverse(self) -> GoldenInt:
        n = self.norm()
        if n not in (1, -1):
            raise ZeroDivisionError(f"{self} is not a unit of Z[tau]")
        c = self.conj()
        return GoldenInt(c.a * n, c.b * n)

    def sign(self) -> Sign:
        return gold_sign(self)

    def __float__(self) -> float:
        return self.a + self.b * TAU

    def __bool__(self) -> bool:
        return bool(self.a or self.b)

    def __lt__(self, other: GoldenInt | int) -> bool:
        return gold_sign(self - other) is Sign.NEGATIVE

    def __le__(self, other: GoldenInt | int) -> bool:
        return gold_sign(self - other) is not Sign.POSITIVE

    def __gt__(self, other: GoldenInt | int) -> bool:
        return gold_sign(self - other) is Sign.POSITIVE

    def __ge__(self, other: GoldenInt | int) -> bool:
        return gold_sign(self - other) is not Sign.NEGATIVE

    def __str__(self) -> str:
        return f"{self.a}{self.b:+d}τ"


ZERO = GoldenInt(0, 0)
ONE = GoldenInt(1, 0)
GOLDEN = GoldenInt(0, 1)  # tau
INFLATION = GoldenInt(1, 1)  # tau**2, the GPSP scaling ratio


def gold_mul(x: GoldenInt, y: GoldenInt) -> GoldenInt:
    # (a + b t)(c + d t) = ac + bd + (ad + bc + bd) t
    bd = x.b * y.b
    return GoldenInt(_checked(x.a * y.a + bd), _checked(x.a * y.b + x.b * y.a + bd))


def gold_conj(x: GoldenInt) -> GoldenInt:
    """Galois conjugate: tau -> 1 - tau."""
    return GoldenInt(x.a + x.b, -x.b)


def gold_sign(x: GoldenInt) -> Sign:
    # 2(a + b t) = (2a + b) + b*sqrt5
    p, q = 2 * x.a + x.b, x.b
    if p >= 0 and q >= 0:
        return Sign.POSITIVE if (p or q) else Sign.ZERO
    if p <= 0 and q <= 0:
        return Sign.NEGATIVE
    # opposite signs: the larger magnitude wins
    lhs, rhs = p * p, 5 * q * q
    if q > 0:
        return Sign.POSITIVE if rhs > lhs else Sign.NEGATIVE
    return Sign.POSITIVE if lhs > rhs else Sign.NEGATIVE


def sign_array(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Vectorised exact sign of ``a + b*tau`` for integer arrays."""
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    p = 2 * a + b
    q = b
    sp, sq = np.sign(p), np.sign(q)
    out = np.where(sp == 0, sq, sp)
    mixed = (sp * sq) < 0
    if mixed.any():
        lhs = p[mixed] * p[mixed]
        rhs = 5 * q[mixed] * q[mixed]
        out[mixed] = np.where(q[mixed] > 0, np.sign(rhs - lhs), np.sign(lhs - rhs))
    return out.astype(np.int8)


def mul_arrays(a1, b1, a2, b2):
    """Vectorised product of ``a1 + b1 tau`` and ``a2 + b2 tau``."""
    bd = b1 * b2
    return a1 * a2 + bd, a1 * b2 + b1 * a2 + bd


@dataclass(frozen=True, slots=True)
class GoldenCoord:
    """Exact planar point ``((xp + xq s)/2, (yp + yq s)/2)``, ``s = sin 72°``.

    The fixed denominator 2 absorbs ``cos 72° = (tau - 1)/2``; it is part of the
    representation, not a free parameter.
    """

    xp: GoldenInt = ZERO
    xq: GoldenInt = ZERO
    yp: GoldenInt = ZERO
    yq: GoldenInt = ZERO

    def __add__(self, other: GoldenCoord) -> GoldenCoord:
        return GoldenCoord(self.xp + other.xp, self.xq + other.xq,
                           self.yp + other.yp, self.yq + other.yq)

    def __neg__(self) -> GoldenCoord:
        return GoldenCoord(-self.xp, -self.xq, -self.yp, -self.yq)

    def __sub__(self, other: GoldenCoord) -> GoldenCoord:
        return self + (-other)

    def scale(self, k: GoldenInt | int) -> GoldenCoord:
        k = GoldenInt.coerce(k)
        return GoldenCoord(self.xp * k, self.xq * k, self.yp * k, self.yq * k)

    def to_float(self) -> tuple[float, float]:
        return ((float(self.xp) + float(self.xq) * SIN72) / 2.0,
                (float(self.yp) + float(self.yq) * SIN72) / 2.0)

    def norm2_x16(self) -> GoldenInt:
        """Sixteen times the squared length, exactly.

        Only defined when the ``s``-linear part of the square cancels, which is
        always the case for points of the decagonal module.
        """
        cross = self.xp * self.xq + self.yp * self.yq
        if cross:
            raise ValueError("squared length does not lie in Q(tau) for this point")
        s2x4 = GoldenInt(2, 1)  # 4 s^2 = tau + 2
        return 4 * (self.xp * self.xp + self.yp * self.yp) + s2x4 * (self.xq * self.xq + self.yq * self.yq)

    def norm2(self) -> float:
        return float(self.norm2_x16()) / 16.0

    def has_norm2(self, value: GoldenInt | int) -> bool:
        """Exact test ``|self|^2 == value`` for a golden integer ``value``."""
        return self.norm2_x16() == 16 * GoldenInt.coerce(value)
