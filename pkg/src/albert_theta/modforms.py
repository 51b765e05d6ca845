"""Exact q-expansions of level-one modular forms.

Everything is generated from E4, E6 and Delta; no tabulated coefficients.
A :class:`QSeries` of precision N carries the coefficients c_0..c_N.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from fractions import Fraction

from sympy import bernoulli, divisor_sigma, isprime

from .arith import rational_from_str, rational_to_str


class InsufficientPrecisionError(ValueError):
    pass


class NotModularError(ValueError):
    """The series does not lie in the requested space at the available precision."""


@dataclass(frozen=True)
class QSeries:
    weight: int
    prec: int
    coeffs: tuple

    def __post_init__(self):
        if len(self.coeffs) != self.prec + 1:
            raise ValueError("a series of precision N has N+1 coefficients")
        object.__setattr__(self, "coeffs", tuple(Fraction(c) for c in self.coeffs))

    @classmethod
    def zero(cls, weight: int, prec: int) -> "QSeries":
        return cls(weight, prec, (Fraction(0),) * (prec + 1))

    def __getitem__(self, n: int) -> Fraction:
        return self.coeffs[n]

    def truncate(self, prec: int) -> "QSeries":
        if prec > self.prec:
            raise InsufficientPrecisionError(f"series known to q^{self.prec}, asked for q^{prec}")
        return QSeries(self.weight, prec, self.coeffs[: prec + 1])

    def _check_weight(self, other: "QSeries"):
        if self.weight != other.weight:
            raise ValueError(f"cannot add weights {self.weight} and {other.weight}")

    def __add__(self, other: "QSeries") -> "QSeries":
        self._check_weight(other)
        n = min(self.prec, other.prec)
        return QSeries(self.weight, n, tuple(a + b for a, b in zip(self.coeffs[: n + 1], other.coeffs)))

    def __sub__(self, other: "QSeries") -> "QSeries":
        return self + other.scale(-1)

    def __neg__(self) -> "QSeries":
        return self.scale(-1)

    def scale(self, c) -> "QSeries":
        c = Fraction(c)
        return QSeries(self.weight, self.prec, tuple(c * a for a in self.coeffs))

    def __rmul__(self, c) -> "QSeries":
        return self.scale(c)

    def __mul__(self, other):
        if not isinstance(other, QSeries):
            return self.scale(other)
        n = min(self.prec, other.prec)
        a, b = self.coeffs, other.coeffs
        out = [sum((a[i] * b[m - i] for i in range(m + 1)), Fraction(0)) for m in range(n + 1)]
        return QSeries(self.weight + other.weight, n, tuple(out))

    def __pow__(self, e: int) -> "QSeries":
        out = QSeries(0, self.prec, (Fraction(1),) + (Fraction(0),) * self.prec)
        for _ in range(e):
            out = out * self
        return out

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def to_json(self) -> dict:
        return {"weight": self.weight, "prec": self.prec, "coeffs": [rational_to_str(c) for c in self.coeffs]}

    @classmethod
    def from_json(cls, obj: dict) -> "QSeries":
        return cls(int(obj["weight"]), int(obj["prec"]), tuple(rational_from_str(c) for c in obj["coeffs"]))

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "coeff"])
        for i, c in enumerate(self.coeffs):
            w.writerow([i, rational_to_str(c)])
        return buf.getvalue()

    def __str__(self):
        terms = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            mon = "" if i == 0 else ("q" if i == 1 else f"q^{i}")
            terms.append(f"{c}{'*' + mon if mon else ''}")
        return (" + ".join(terms) if terms else "0") + f" + O(q^{self.prec + 1})"


def eisenstein(k: int, prec: int) -> QSeries:
    """E_k = 1 - (2k/B_k) sum sigma_{k-1}(n) q^n for k in {4, 6, 12}."""
    if k not in (4, 6, 12):
        raise ValueError(f"unsupported Eisenstein weight {k}")
    Bk = Fraction(str(bernoulli(k)))
    c = -Fraction(2 * k) / Bk
    coeffs = [Fraction(1)] + [c * int(divisor_sigma(n, k - 1)) for n in range(1, prec + 1)]
    return QSeries(k, prec, tuple(coeffs))


def delta(prec: int) -> QSeries:
    """q * prod_{n>=1} (1 - q^n)^24 expanded to q^prec."""
    m = prec  # enough for the product up to q^(prec-1)
    eta = [0] * (m + 1)
    eta[0] = 1
    for n in range(1, m + 1):
        # multiply by (1 - q^n)
        for i in range(m, n - 1, -1):
            eta[i] -= eta[i - n]
    p = [1] + [0] * m
    for _ in range(24):
        p = [sum(p[i] * eta[j - i] for i in range(j + 1)) for j in range(m + 1)]
    coeffs = [0] + p[:prec]
    return QSeries(12, prec, tuple(coeffs[: prec + 1]))


# --- exact row reduction --------------------------------------------------------


def rref(rows: list[list[Fraction]]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over Q; returns (nonzero rows, pivot columns)."""
    M = [[Fraction(v) for v in r] for r in rows]
    pivots = []
    r = 0
    ncols = len(M[0]) if M else 0
    for col in range(ncols):
        piv = next((i for i in range(r, len(M)) if M[i][col] != 0), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        inv = 1 / M[r][col]
        M[r] = [v * inv for v in M[r]]
        for i in range(len(M)):
            if i != r and M[i][col] != 0:
                f = M[i][col]
                M[i] = [a - f * b for a, b in zip(M[i], M[r])]
        pivots.append(col)
        r += 1
        if r == len(M):
            break
    return M[:r], pivots


def _monomials(k: int, prec: int) -> list[QSeries]:
    E4, E6 = eisenstein(4, prec), eisenstein(6, prec)
    out = []
    for b in range(k // 6, -1, -1):
        rest = k - 6 * b
        if rest % 4 == 0:
            out.append((E4 ** (rest // 4)) * (E6 ** b))
    return out


def dim_space(k: int, space: str) -> int:
    if k < 0 or k % 2:
        return 0
    if space == "S":
        return dim_space(k - 12, "M") if k >= 12 else 0
    if k == 2:
        return 0
    return k // 12 + (0 if k % 12 == 2 else 1)


def graded_basis(k: int, space: str, prec: int) -> list[QSeries]:
    """Echelon basis of M_k or S_k (pivots at q^0, q^1, ... for M; q^1, q^2, ... for S)."""
    if space not in ("M", "S"):
        raise ValueError("space must be 'M' or 'S'")
    if k % 2 or k < 0:
        raise ValueError("weight must be even and nonnegative")
    if space == "S":
        if k < 12:
            return []
        D = delta(prec)
        mons = [D * m for m in _monomials(k - 12, prec)] if k > 12 else [D]
        if k - 12 == 2:
            mons = []
    else:
        mons = _monomials(k, prec) if k >= 4 else ([QSeries(0, prec, (1,) + (0,) * prec)] if k == 0 else [])
    if prec < len(mons) + 1:
        raise InsufficientPrecisionError(f"precision {prec} too small for weight {k}")
    rows, _ = rref([list(m.coeffs) for m in mons])
    if len(rows) != len(mons):
        raise InsufficientPrecisionError(f"precision {prec} does not separate the weight-{k} monomials")
    return [QSeries(k, prec, tuple(r)) for r in rows]


def solve_in_span(f: QSeries, basis: list[QSeries]) -> list[Fraction]:
    """Exact coordinates of f in the span of ``basis``; every available coefficient must match."""
    n = f.prec
    if any(b.prec < n for b in basis):
        raise InsufficientPrecisionError("basis known to lower precision than the series")
    if basis:
        cols = len(basis)
        aug = [[basis[j][i] for j in range(cols)] + [f[i]] for i in range(n + 1)]
        R, piv = rref(aug)
        if cols in piv:
            raise NotModularError("series is not in the span at this precision")
        if len(piv) < cols:
            raise ValueError("basis series are linearly dependent at this precision")
        coords = [R[i][cols] for i in range(cols)]
    else:
        coords = []
    for i in range(n + 1):
        v = sum((c * b[i] for c, b in zip(coords, basis)), Fraction(0))
        if v != f[i]:
            raise NotModularError(f"coefficient of q^{i} does not match ({f[i]} vs {v})")
    return coords


def identify(f: QSeries, space: str) -> list[Fraction]:
    """Coordinates of f in graded_basis(f.weight, space); surplus coefficients must agree exactly."""
    if space in ("M_k", "S_k"):
        space = space[0]
    d = dim_space(f.weight, space)
    if f.prec < d + 2:
        raise InsufficientPrecisionError(f"need precision >= {d + 2} to identify in {space}_{f.weight}")
    basis = graded_basis(f.weight, space, f.prec)
    return solve_in_span(f, basis)


def hecke(p: int, f: QSeries, out_prec: int | None = None) -> QSeries:
    """T_p on a level-one form: a(n) -> a(pn) + p^(k-1) a(n/p)."""
    if not isprime(p):
        raise ValueError(f"{p} is not prime")
    m = f.prec // p if out_prec is None else out_prec
    if m < 0 or p * m > f.prec:
        raise InsufficientPrecisionError(f"T_{p} to q^{m} needs precision {p * m}, have {f.prec}")
    pk = Fraction(p) ** (f.weight - 1)
    out = []
    for n in range(m + 1):
        v = f[p * n]
        if n % p == 0:
            v += pk * f[n // p]
        out.append(v)
    return QSeries(f.weight, m, tuple(out))


def span_rank(fs: list[QSeries], k: int, prec: int) -> int:
    """Rank over Q of the coefficient matrix restricted to q^1..q^prec."""
    for f in fs:
        if f.weight != k:
            raise ValueError(f"mixed weights: expected {k}, got {f.weight}")
        if f.prec < prec:
            raise InsufficientPrecisionError(f"series known to q^{f.prec}, need q^{prec}")
    if prec < dim_space(k, "S"):
        raise InsufficientPrecisionError(f"{prec} coefficients cannot detect rank {dim_space(k, 'S')}")
    if not fs:
        return 0
    rows, _ = rref([[f[i] for i in range(1, prec + 1)] for f in fs])
    return len(rows)


def format_combination(coords, names) -> str:
    """e.g. ``E12 + 432000/691 * Delta``."""
    parts = []
    for c, name in zip(coords, names):
        c = Fraction(c)
        if c == 0:
            continue
        mag = abs(c)
        body = name if mag == 1 else f"{mag} * {name}"
        if not parts:
            parts.append(body if c > 0 else f"-{body}")
        else:
            parts.append(("+ " if c > 0 else "- ") + body)
    return " ".join(parts) if parts else "0"
