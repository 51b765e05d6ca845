"""The unramified local zeta factor, summed over the torus and in closed form.

All values live in Q(sqrt(p)); half-integral powers of p are written as
p^(-k/2) = p^(-(k+1)/2) * sqrt(p) for odd k.
"""

from __future__ import annotations

from dataclasses import dataclass
from decimal import Decimal
from fractions import Fraction

from sympy import isprime

from .arith import QuadExt


class ConvergenceError(ValueError):
    pass


@dataclass(frozen=True)
class SatakeParam:
    alpha: Fraction
    p: int

    def __post_init__(self):
        object.__setattr__(self, "alpha", Fraction(self.alpha))
        if self.alpha == 0:
            raise ValueError("alpha must be nonzero")
        if not isprime(self.p):
            raise ValueError(f"{self.p} is not prime")
        if not (self.alpha * self.alpha < Fraction(self.p) ** 5 and self.alpha ** -2 < Fraction(self.p) ** 5):
            raise ConvergenceError("need |alpha|^(+-1) < p^(5/2) for convergence")


def _q(p: int, x) -> QuadExt:
    return QuadExt(x, 0, p)


def half_power(p: int, k: int) -> QuadExt:
    """p^(k/2) in Q(sqrt(p))."""
    if k % 2 == 0:
        return _q(p, Fraction(p) ** (k // 2))
    return QuadExt(0, Fraction(p) ** ((k - 1) // 2), p)


def inner_integral(n: int, p: int) -> Fraction:
    """I_n(p) = (1-p^-4)(1-p^(-3n-3))/(1-p^-3), cross-checked against its additive form."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    P = Fraction(p)
    closed = (1 - P ** -4) * (1 - P ** (-3 * n - 3)) / (1 - P ** -3)
    additive = 1 + sum((P ** (-3 * m) * (1 - 1 / P) for m in range(1, n + 1)), Fraction(0)) - P ** (-3 * (n + 1) - 1)
    if closed != additive:
        raise AssertionError(f"inner integral forms disagree at n={n}, p={p}: {closed} != {additive}")
    return closed


def bracket(alpha: Fraction, n: int) -> Fraction:
    """(alpha^(n+1) - alpha^(-n-1)) / (alpha - alpha^-1), with its limits at alpha = +-1."""
    alpha = Fraction(alpha)
    if alpha == 1:
        return Fraction(n + 1)
    if alpha == -1:
        return Fraction((-1) ** n * (n + 1))
    return (alpha ** (n + 1) - alpha ** (-n - 1)) / (alpha - 1 / alpha)


def zeta_truncated(s: SatakeParam, N: int) -> QuadExt:
    """sum_{n=0}^{N} p^(-5n/2) * bracket(alpha, n) * I_n(p)."""
    if N < 0:
        raise ValueError("N must be nonnegative")
    total = _q(s.p, 0)
    for n in range(N + 1):
        total = total + half_power(s.p, -5 * n) * (bracket(s.alpha, n) * inner_integral(n, s.p))
    return total


def zeta_closed(s: SatakeParam) -> QuadExt:
    """(1-p^-4)(1-p^-8) / prod over (1 - p^(-5/2) a^(+-1))(1 - p^(-11/2) a^(+-1))."""
    P = Fraction(s.p)
    num = _q(s.p, (1 - P ** -4) * (1 - P ** -8))
    den = _q(s.p, 1)
    for k in (-5, -11):
        for a in (s.alpha, 1 / s.alpha):
            den = den * (1 - half_power(s.p, k) * a)
    if den == 0:
        raise ZeroDivisionError("pole of the local factor")
    return num / den


def tail_bound(s: SatakeParam, N: int) -> QuadExt:
    """p^(-5N/2) * max(|alpha|, 1/|alpha|)^N * 10."""
    m = max(abs(s.alpha), 1 / abs(s.alpha))
    return half_power(s.p, -5 * N) * (m ** N * 10)


def abs_q(x: QuadExt) -> QuadExt:
    return -x if x.sign() < 0 else x


@dataclass(frozen=True)
class ZetaRow:
    alpha: Fraction
    p: int
    N: int
    truncated: QuadExt
    closed: QuadExt
    difference: QuadExt
    bound: QuadExt

    @property
    def within_bound(self) -> bool:
        return (self.bound - self.difference).sign() >= 0

    def as_dict(self, digits: int = 30) -> dict:
        def dec(x: QuadExt) -> str:
            return f"{x.to_decimal(digits):.{digits}E}"

        return {
            "alpha": str(self.alpha),
            "p": self.p,
            "N": self.N,
            "truncated": dec(self.truncated),
            "closed": dec(self.closed),
            "abs_difference": dec(self.difference),
            "tail_bound": dec(self.bound),
            "within_bound": self.within_bound,
            "ratio": f"{(self.difference.to_decimal(digits) / self.bound.to_decimal(digits)):.6f}",
        }


def zeta_row(alpha, p: int, N: int) -> ZetaRow:
    s = SatakeParam(Fraction(alpha), p)
    t = zeta_truncated(s, N)
    c = zeta_closed(s)
    return ZetaRow(s.alpha, p, N, t, c, abs_q(t - c), tail_bound(s, N))


def zeta_table(alphas, primes, N: int) -> list[ZetaRow]:
    return [zeta_row(a, p, N) for a in alphas for p in primes]


def as_decimal(x: QuadExt, digits: int = 30) -> Decimal:
    return x.to_decimal(digits)
