"""Exact scalars: rationals and elements of a quadratic field Q(sqrt(d)).

Rationals are plain :class:`fractions.Fraction` values.  :class:`QuadExt`
carries its own ``d`` so that values from different fields can never be
mixed silently.
"""

from __future__ import annotations

from decimal import Decimal, localcontext
from fractions import Fraction
from math import isqrt
from numbers import Rational as _RationalABC

from sympy import factorint

Rational = Fraction


class FieldMismatchError(ValueError):
    """Raised when two QuadExt values with different ``d`` are combined."""


def rational_to_str(q) -> str:
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def rational_from_str(s: str) -> Fraction:
    return Fraction(s)


def squarefree_decomposition(n: int) -> tuple[int, int]:
    """Return ``(s, f)`` with ``n == s * f**2`` and ``s`` squarefree (sign kept on ``s``)."""
    if n == 0:
        raise ValueError("0 has no squarefree part")
    sign = -1 if n < 0 else 1
    s, f = 1, 1
    for p, e in factorint(abs(n)).items():
        f *= p ** (e // 2)
        if e % 2:
            s *= p
    return sign * s, f


def is_squarefree(d: int) -> bool:
    return d != 0 and squarefree_decomposition(d)[0] == d


def _check_d(d: int) -> int:
    d = int(d)
    if d == 1 or not is_squarefree(d):
        raise ValueError(f"d must be a squarefree integer other than 0 and 1, got {d}")
    return d


class QuadExt:
    """``base + surd * sqrt(d)`` with rational ``base`` and ``surd``."""

    __slots__ = ("base", "surd", "d")

    def __init__(self, base=0, surd=0, d: int = -1, *, _checked: bool = False):
        self.base = Fraction(base)
        self.surd = Fraction(surd)
        self.d = d if _checked else _check_d(d)

    @classmethod
    def sqrt(cls, d: int) -> "QuadExt":
        return cls(0, 1, d)

    def _new(self, base, surd) -> "QuadExt":
        return QuadExt(base, surd, self.d, _checked=True)

    def _coerce(self, other):
        if isinstance(other, QuadExt):
            if other.d != self.d:
                raise FieldMismatchError(f"cannot combine sqrt({self.d}) with sqrt({other.d})")
            return other
        if isinstance(other, (int, _RationalABC)):
            return self._new(other, 0)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self._new(self.base + o.base, self.surd + o.surd)

    __radd__ = __add__

    def __neg__(self):
        return self._new(-self.base, -self.surd)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self._new(self.base - o.base, self.surd - o.surd)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self._new(
            self.base * o.base + self.d * self.surd * o.surd,
            self.base * o.surd + self.surd * o.base,
        )

    __rmul__ = __mul__

    def conj(self) -> "QuadExt":
        return self._new(self.base, -self.surd)

    def norm(self) -> Fraction:
        return self.base * self.base - self.d * self.surd * self.surd

    def inverse(self) -> "QuadExt":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero in quadratic field")
        return self._new(self.base / n, -self.surd / n)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o * self.inverse()

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result = self._new(1, 0)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, QuadExt):
            return self.d == other.d and self.base == other.base and self.surd == other.surd
        if isinstance(other, (int, _RationalABC)):
            return self.surd == 0 and self.base == other
        return NotImplemented

    def __hash__(self):
        if self.surd == 0:
            return hash(self.base)
        return hash((self.base, self.surd, self.d))

    def __bool__(self):
        return bool(self.base) or bool(self.surd)

    def is_rational(self) -> bool:
        return self.surd == 0

    def sign(self) -> int:
        """Exact sign of a real quadratic number (``d > 0`` only)."""
        if self.d < 0:
            raise ValueError("sign is only defined in a real quadratic field")
        sb = (self.base > 0) - (self.base < 0)
        ss = (self.surd > 0) - (self.surd < 0)
        if sb == ss or ss == 0:
            return sb
        if sb == 0:
            return ss
        # opposite signs: compare base^2 with d*surd^2
        cmp = self.base * self.base - self.d * self.surd * self.surd
        if cmp == 0:
            return 0
        return sb if cmp > 0 else ss

    def to_decimal(self, digits: int = 60) -> Decimal:
        """Display helper for real fields."""
        if self.d < 0:
            raise ValueError("to_decimal needs a real quadratic field")
        with localcontext() as ctx:
            ctx.prec = digits + 10
            b = Decimal(self.base.numerator) / Decimal(self.base.denominator)
            s = Decimal(self.surd.numerator) / Decimal(self.surd.denominator)
            return +(b + s * Decimal(self.d).sqrt())

    def __repr__(self):
        return f"QuadExt({self.base}, {self.surd}, d={self.d})"

    def __str__(self):
        if self.surd == 0:
            return str(self.base)
        return f"{self.base} + {self.surd}*sqrt({self.d})"

    def to_json(self) -> dict:
        return {"base": rational_to_str(self.base), "surd": rational_to_str(self.surd), "d": self.d}

    @classmethod
    def from_json(cls, obj: dict) -> "QuadExt":
        return cls(rational_from_str(obj["base"]), rational_from_str(obj["surd"]), int(obj["d"]))


def quad_arith(lhs: QuadExt, rhs: QuadExt, kind: str) -> QuadExt:
    if kind == "add":
        return lhs + rhs
    if kind == "mul":
        return lhs * rhs
    if kind == "div":
        return lhs / rhs
    raise ValueError(f"unknown operation {kind!r}")


def scalar_to_json(x):
    if isinstance(x, QuadExt):
        return x.to_json()
    return rational_to_str(x)


def scalar_from_json(obj):
    if isinstance(obj, dict):
        return QuadExt.from_json(obj)
    return rational_from_str(obj)


def real_part(x) -> Fraction:
    return x.base if isinstance(x, QuadExt) else Fraction(x)


def surd_part(x) -> Fraction:
    return x.surd if isinstance(x, QuadExt) else Fraction(0)


def field_of(values) -> int | None:
    """The common ``d`` of a collection of scalars, or None if all are rational."""
    d = None
    for v in values:
        if isinstance(v, QuadExt):
            if d is None:
                d = v.d
            elif v.d != d:
                raise FieldMismatchError(f"mixed fields sqrt({d}) and sqrt({v.d})")
    return d


def rational_sqrt(q: Fraction) -> Fraction | None:
    """Exact square root of a nonnegative rational, or None if irrational."""
    q = Fraction(q)
    if q < 0:
        return None
    n, m = isqrt(q.numerator), isqrt(q.denominator)
    if n * n == q.numerator and m * m == q.denominator:
        return Fraction(n, m)
    return None
