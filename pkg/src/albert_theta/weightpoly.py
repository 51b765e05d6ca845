"""Weight polynomials P(X) = ((X, A)_L)^n and the weighted theta series they define.

A is a rank-1, trace-0 element over an imaginary quadratic field Q(sqrt(-d)).
Such elements come from the built-in B (over Q(sqrt(-2))) or from
``solve_collinear``: three rank-1 points on a common line span a pencil whose
rank-1 trace-0 members are the roots of a quadratic.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache, reduce
from math import comb, gcd

import numpy as np

from .albert import AlbertElement, jordan_product
from .arith import QuadExt, squarefree_decomposition
from .enumerate import ExplicitBlock, FactoredBlock, get_shell, shell_blocks, sigma3
from .lattice import (
    OCT_SLICES,
    AlbertLattice,
    coords_from_r2,
    content_coords,
    form_functional,
    lattice_adjoint,
    lattice_cross,
    lattice_form,
    lattice_trace,
    make_lattice,
    standard_adjoint4_r2,
)
from .modforms import QSeries
from .octonion import CONJ_SIGN, MUL_TENSOR, Octonion

log = logging.getLogger(__name__)


class NotCollinearError(ValueError):
    pass


class DegenerateSolutionError(ValueError):
    pass


class BudgetExceededError(RuntimeError):
    pass


def _is_zero(T: AlbertElement) -> bool:
    return T.is_zero()


@dataclass(frozen=True, eq=False)
class XElement:
    A: AlbertElement
    lattice_name: str
    d: int  # the field is Q(sqrt(-d)), d > 0 squarefree
    provenance: str = field(default="", compare=False)

    def __post_init__(self):
        verify_xelement(self.A, make_lattice(self.lattice_name))
        if self.d <= 0:
            raise ValueError("XElements live over imaginary quadratic fields (d > 0)")

    def to_json(self) -> dict:
        return {"lattice": self.lattice_name, "d": self.d, "A": self.A.to_json(), "provenance": self.provenance}

    @classmethod
    def from_json(cls, obj: dict) -> "XElement":
        return cls(AlbertElement.from_json(obj["A"]), obj["lattice"], int(obj["d"]), obj.get("provenance", ""))


def verify_xelement(A: AlbertElement, L: AlbertLattice) -> None:
    if A.is_zero():
        raise ValueError("X element must be nonzero")
    if not lattice_adjoint(L, A).is_zero():
        raise ValueError("X element is not rank 1")
    if lattice_trace(L, A) != 0:
        raise ValueError("X element does not have trace 0")


@dataclass(frozen=True, eq=False)
class WeightPolynomial:
    degree: int
    generator: XElement | None  # None encodes the constant polynomial 1

    def __post_init__(self):
        if self.generator is None and self.degree != 0:
            raise ValueError("the constant polynomial has degree 0")
        if self.generator is not None and self.degree < 1:
            raise ValueError("degree must be >= 1")

    @classmethod
    def constant(cls) -> "WeightPolynomial":
        return cls(0, None)

    @property
    def d(self) -> int | None:
        return None if self.generator is None else self.generator.d

    @property
    def lattice_name(self) -> str | None:
        return None if self.generator is None else self.generator.lattice_name

    def to_json(self) -> dict:
        if self.generator is None:
            return {"lattice": None, "n": 0, "d": None, "A": None}
        g = self.generator
        return {"lattice": g.lattice_name, "n": self.degree, "d": g.d, "A": g.A.to_json()}

    @classmethod
    def from_json(cls, obj: dict) -> "WeightPolynomial":
        if obj.get("A") is None:
            return cls.constant()
        x = XElement(AlbertElement.from_json(obj["A"]), obj["lattice"], int(obj["d"]), "json")
        return cls(int(obj["n"]), x)


# --- constructors -----------------------------------------------------------------


def builtin_B() -> XElement:
    """[2,-1,-1; x0, w y0, w z0] over Q(sqrt(-2)), with x0 = e1, y0 = e2, z0 = x0 y0."""
    w = QuadExt.sqrt(-2)
    one = QuadExt(1, 0, -2)
    x0 = Octonion.unit(1, one)
    y0 = Octonion.unit(2, one)
    z0 = x0 * y0
    if not ((y0 * x0) == -z0):
        raise RuntimeError("x0, y0 do not anticommute")
    A = AlbertElement(2 * one, -one, -one, x0, y0 * w, z0 * w)
    return XElement(A, "JZ", 2, provenance="builtin B")


def third_point_on_line(L: AlbertLattice, T1, T2, U1, U2) -> AlbertElement:
    """(T1 x T2) x (U1 x U2): the meet of the lines T1T2 and U1U2."""
    P0 = lattice_cross(L, lattice_cross(L, T1, T2), lattice_cross(L, U1, U2))
    if P0.is_zero():
        raise DegenerateSolutionError("auxiliary line is degenerate (zero intersection)")
    return P0


def _ratio(X: AlbertElement, Y: AlbertElement) -> Fraction | None:
    """c with X == c*Y, or None."""
    xs, ys = X.ref(), Y.ref()
    c = None
    for a, b in zip(xs, ys):
        if b == 0:
            if a != 0:
                return None
            continue
        r = Fraction(a) / Fraction(b)
        if c is None:
            c = r
        elif r != c:
            return None
    return c if c is not None else Fraction(0)


def solve_collinear(L: AlbertLattice, T1, T2, T3, provenance: str = "collinear triple") -> XElement:
    """Rank-1 trace-0 combination alpha*T1 + beta*T2 + T3 of three collinear rank-1 points."""
    crosses = [lattice_cross(L, T1, T2), lattice_cross(L, T2, T3), lattice_cross(L, T3, T1)]
    ref = next((X for X in crosses if not X.is_zero()), None)
    if ref is None:
        raise NotCollinearError("all pairwise crosses vanish (points are proportional)")
    c = [_ratio(X, ref) for X in crosses]
    if any(v is None for v in c):
        raise NotCollinearError("pairwise crosses are not proportional")
    c12, c23, c31 = c
    if sum(1 for v in c if v != 0) < 2:
        raise NotCollinearError("need at least two nonzero crosses")
    t1, t2, t3 = (Fraction(lattice_trace(L, T)) for T in (T1, T2, T3))
    if t2 == 0:
        raise DegenerateSolutionError("second point has trace 0")
    # gamma = 1, beta = -(alpha t1 + t3)/t2
    qa = c12 * t1
    qb = c12 * t3 + c23 * t1 - c31 * t2
    qc = c23 * t3
    if qa == 0:
        raise DegenerateSolutionError("the pencil equation is not quadratic")
    disc = qb * qb - 4 * qa * qc
    if disc >= 0:
        raise DegenerateSolutionError(f"nonnegative discriminant {disc}: no non-real solution")
    den = disc.denominator
    num = disc.numerator * den  # disc = num / den^2
    s, f = squarefree_decomposition(num)
    root = QuadExt(0, Fraction(f, den), s)  # sqrt(disc)
    alpha = (root - qb) / (2 * qa)
    beta = -(alpha * t1 + t3) / t2
    A = T1.scale(alpha) + T2.scale(beta) + T3.scale(QuadExt(1, 0, s))
    verify_xelement(A, L)
    log.info("X element from %s over Q(sqrt(%d))", provenance, s)
    return XElement(A, L.name, -s, provenance=provenance)


# --- evaluation ------------------------------------------------------------------


def evaluate(P: WeightPolynomial, T: AlbertElement):
    if P.generator is None:
        return Fraction(1)
    L = make_lattice(P.generator.lattice_name)
    return lattice_form(L, T, P.generator.A) ** P.degree


def _split(v) -> tuple[Fraction, Fraction]:
    if isinstance(v, QuadExt):
        return v.base, v.surd
    return Fraction(v), Fraction(0)


def integral_functionals(P: WeightPolynomial, L: AlbertLattice) -> tuple[np.ndarray, np.ndarray, int]:
    """(g, h, D) with (T, A)_L = (g.r2 + (h.r2) sqrt(-d)) / D for doubled coordinates r2."""
    phi = form_functional(L, P.generator.A)
    parts = [_split(v) for v in phi]
    vals = [b / 2 for b, _ in parts] + [s / 2 for _, s in parts]
    D = reduce(lambda m, q: m * q.denominator // gcd(m, q.denominator), vals, 1)
    g = np.array([int(b / 2 * D) for b, _ in parts], dtype=np.int64)
    h = np.array([int(s / 2 * D) for _, s in parts], dtype=np.int64)
    return g, h, D


class _PowerSum:
    """Accumulates sum w * (R + S sqrt(-d))^n over integer pairs (R, S)."""

    def __init__(self, n: int, d: int):
        self.n, self.d = n, d
        self.base = 0
        self.surd = 0

    def add_pairs(self, R: np.ndarray, S: np.ndarray, w: np.ndarray | None = None):
        R = R.ravel()
        S = S.ravel()
        if len(R) == 0:
            return
        rmin, smin = int(R.min()), int(S.min())
        span = int(S.max()) - smin + 1
        key = (R - rmin) * span + (S - smin)
        if w is None:
            uk, cnt = np.unique(key, return_counts=True)
        else:
            uk, inv = np.unique(key, return_inverse=True)
            cnt = np.zeros(len(uk), dtype=np.int64)
            np.add.at(cnt, inv, w)
        n, md = self.n, -self.d
        for k, c in zip(uk.tolist(), cnt.tolist()):
            r = k // span + rmin
            s = k % span + smin
            b = sf = 0
            for j in range(n + 1):
                t = comb(n, j) * r ** (n - j) * s ** j * md ** (j // 2)
                if j % 2:
                    sf += t
                else:
                    b += t
            self.base += c * b
            self.surd += c * sf


def _factored_values(block: FactoredBlock, g: np.ndarray) -> np.ndarray:
    """Integer matrix of g.r2 over all (u, v) pairs of a unit-pivot block."""
    p, s1, s2 = block.slots
    const = int(2 * np.dot(np.array(block.diag), g[:3]))
    Ru = block.U2 @ g[OCT_SLICES[s1]]
    Rv = block.V2 @ g[OCT_SLICES[s2]]
    M = np.einsum("ijk,k->ij", MUL_TENSOR, CONJ_SIGN * g[OCT_SLICES[p]])
    W = block.U2 @ M @ block.V2.T
    if np.any(W % 2):
        raise AssertionError("non-integral octonion slot in a unit-pivot block")
    return const + Ru[:, None] + Rv[None, :] + W // 2


def _shell_value_sums(name: str, n: int, P: WeightPolynomial, cache, allow_expensive: bool):
    """(weighted count, sum of sigma3*P split into (base, surd)) over the trace-n shell."""
    L = make_lattice(name)
    const = P.generator is None
    if not const:
        g, h, D = integral_functionals(P, L)
        acc = _PowerSum(P.degree, P.d)
    count = 0

    def rows(r2, contents):
        nonlocal count
        w = np.array([sigma3(int(c)) for c in contents], dtype=np.int64) if len(contents) else np.zeros(0, np.int64)
        count += int(w.sum())
        if not const and len(r2):
            acc.add_pairs(r2 @ g, r2 @ h, w)

    if name == "JZ":
        for block in shell_blocks(n):
            if isinstance(block, FactoredBlock) and block.dp == 1:
                count += block.size_if_unit_pivot()
                if not const:
                    acc.add_pairs(_factored_values(block, g), _factored_values(block, h))
                continue
            chunks = [block.r2] if isinstance(block, ExplicitBlock) else block.iter_rows()
            for r2 in chunks:
                if len(r2):
                    rows(r2, content_coords(coords_from_r2(r2)))
    else:
        if n >= 3 and not allow_expensive:
            raise BudgetExceededError(f"{name} trace {n} enumeration needs --force")
        shell = get_shell(name, n, cache)
        if len(shell):
            rows(shell.r2(), shell.contents())
    if const:
        return count, (Fraction(count), Fraction(0))
    Dn = Fraction(D) ** P.degree
    return count, (acc.base / Dn, acc.surd / Dn)


def theta_series(L: AlbertLattice, P: WeightPolynomial, prec: int, normalization: str = "plain",
                 cache=None, allow_expensive: bool = False) -> tuple[QSeries, QSeries]:
    """Components (rational part, sqrt(-d) part) of sum sigma3(c(T)) P(T) q^Tr(T)."""
    if prec < 1:
        raise ValueError("precision must be >= 1")
    if normalization not in ("plain", "elkies_gross"):
        raise ValueError("normalization must be 'plain' or 'elkies_gross'")
    if P.generator is not None and P.generator.lattice_name != L.name:
        raise ValueError(f"polynomial built for {P.generator.lattice_name}, lattice is {L.name}")
    k = 12 + 2 * P.degree
    base = [Fraction(0)] * (prec + 1)
    surd = [Fraction(0)] * (prec + 1)
    for n in range(1, prec + 1):
        _, (b, s) = _shell_value_sums(L.name, n, P, cache, allow_expensive)
        base[n], surd[n] = b, s
    if normalization == "elkies_gross":
        base = [240 * v for v in base]
        surd = [240 * v for v in surd]
        if P.generator is None:
            base[0] = Fraction(1)
    return QSeries(k, prec, tuple(base)), QSeries(k, prec, tuple(surd))


def theta_from_shells(shells, P: WeightPolynomial, prec: int) -> tuple[QSeries, QSeries]:
    """Plain theta series summed element by element over materialized shells (slow oracle)."""
    k = 12 + 2 * P.degree
    base = [Fraction(0)] * (prec + 1)
    surd = [Fraction(0)] * (prec + 1)
    for shell in shells:
        if shell.trace > prec:
            continue
        L = make_lattice(shell.lattice_name)
        for row, c in zip(shell.coords, shell.contents()):
            b, s = _split(evaluate(P, L.element(row)))
            base[shell.trace] += sigma3(int(c)) * b
            surd[shell.trace] += sigma3(int(c)) * s
    return QSeries(k, prec, tuple(base)), QSeries(k, prec, tuple(surd))


# --- X-element search ------------------------------------------------------------


def _cross_classes(L: AlbertLattice, R2: np.ndarray):
    """Projective classes of T_i x T_j for all pairs i < j (rows of r2)."""
    n = len(R2)
    I, J = np.triu_indices(n, 1)
    S_i = standard_adjoint4_r2(R2)
    out = []
    step = 1 << 16
    for start in range(0, len(I), step):
        a, b = I[start:start + step], J[start:start + step]
        X = standard_adjoint4_r2(R2[a] + R2[b]) - S_i[a] - S_i[b]
        if L.adjoint_map is not None:
            X = X @ L.adjoint_map.T
        gg = np.gcd.reduce(np.abs(X), axis=1)
        gg[gg == 0] = 1
        X = X // gg[:, None]
        first = np.argmax(X != 0, axis=1)
        sign = np.sign(X[np.arange(len(X)), first])
        sign[sign == 0] = 1
        out.append(X * sign[:, None])
    return I, J, np.concatenate(out)


def collinear_triples(L: AlbertLattice, R2: np.ndarray, limit: int = 64) -> list[tuple[int, int, int]]:
    """Index triples of pairwise distinct points sharing a line, bucketed by cross class."""
    I, J, X = _cross_classes(L, R2)
    nonzero = np.any(X != 0, axis=1)  # proportional pairs have zero cross
    I, J, X = I[nonzero], J[nonzero], X[nonzero]
    if len(X) == 0:
        return []
    _, inv, counts = np.unique(X, axis=0, return_inverse=True, return_counts=True)
    inv = inv.ravel()
    triples = []
    for cls in np.flatnonzero(counts >= 3):
        idx = np.flatnonzero(inv == cls)
        pairs = set(zip(I[idx].tolist(), J[idx].tolist()))
        nbr: dict[int, set] = {}
        for i, j in pairs:
            nbr.setdefault(i, set()).add(j)
            nbr.setdefault(j, set()).add(i)
        # a triangle of pairwise non-proportional points on this line
        for i, j in sorted(pairs):
            common = sorted(nbr[i] & nbr[j])
            if common:
                triples.append(tuple(sorted((i, j, common[0]))))
                break
        if len(triples) >= limit:
            break
    return sorted(set(triples))


def search_xelements(L: AlbertLattice, points: list[AlbertElement], want: int = 4,
                     max_aux: int = 200) -> list[XElement]:
    """Deterministic XElement search over rank-1 points.

    First tries integral collinear triples; if fewer than ``want`` are found it
    completes lines with third_point_on_line.
    """
    R2 = np.array([T.doubled_ref() for T in points], dtype=np.int64)
    found: list[XElement] = []
    keys = set()

    def add(x: XElement):
        key = tuple(x.A.ref())
        if key in keys:
            return
        keys.add(key)
        found.append(x)

    for i, j, k in collinear_triples(L, R2):
        try:
            add(solve_collinear(L, points[i], points[j], points[k],
                                provenance=f"integral collinear triple ({i},{j},{k})"))
        except (NotCollinearError, DegenerateSolutionError) as exc:
            log.debug("triple (%d,%d,%d) rejected: %s", i, j, k, exc)
        if len(found) >= want:
            return found
    n = len(points)
    tried = 0
    for i in range(n):
        for j in range(i + 1, n):
            for u in range(n):
                for v in range(u + 1, n):
                    if {u, v} & {i, j}:
                        continue
                    tried += 1
                    if tried > max_aux:
                        return found
                    T1, T2 = points[i], points[j]
                    try:
                        P0 = third_point_on_line(L, T1, T2, points[u], points[v])
                        if not lattice_adjoint(L, P0).is_zero():
                            continue
                        if _ratio(P0, T1) is not None or _ratio(P0, T2) is not None:
                            continue
                        add(solve_collinear(L, T1, T2, P0,
                                            provenance=f"third point on line ({i},{j}) via ({u},{v})"))
                    except (NotCollinearError, DegenerateSolutionError) as exc:
                        log.debug("auxiliary (%d,%d;%d,%d) rejected: %s", i, j, u, v, exc)
                    if len(found) >= want:
                        return found
    return found


# --- symmetric tensors and the recursion P_k ------------------------------------


class SymTensor:
    """Sparse formal sum of tensors of reference-basis elements.

    Keys are tuples of reference-coordinate indices (the empty tuple is the
    scalar 1); values are scalar coefficients.  Mixed degrees are allowed so
    that the inhomogeneous output of :func:`scriptP` fits.
    """

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {k: v for k, v in (terms or {}).items() if v != 0}

    @classmethod
    def scalar(cls, c=1) -> "SymTensor":
        return cls({(): c})

    @classmethod
    def elementary(cls, elements, coeff=1) -> "SymTensor":
        out = {(): coeff}
        for A in elements:
            nxt = {}
            r = A.ref()
            for key, c in out.items():
                for idx, a in enumerate(r):
                    if a != 0:
                        nk = key + (idx,)
                        nxt[nk] = nxt[nk] + c * a if nk in nxt else c * a
            out = nxt
        return cls(out)

    def __add__(self, o: "SymTensor") -> "SymTensor":
        out = dict(self.terms)
        for k, v in o.terms.items():
            out[k] = out[k] + v if k in out else v
        return SymTensor(out)

    def __sub__(self, o: "SymTensor") -> "SymTensor":
        return self + o.scale(-1)

    def scale(self, c) -> "SymTensor":
        return SymTensor({k: c * v for k, v in self.terms.items()})

    def component(self, k: int) -> "SymTensor":
        return SymTensor({key: v for key, v in self.terms.items() if len(key) == k})

    def degrees(self) -> set[int]:
        return {len(k) for k in self.terms}

    @property
    def degree(self) -> int:
        ds = self.degrees()
        if len(ds) > 1:
            raise ValueError(f"tensor is inhomogeneous (degrees {sorted(ds)})")
        return ds.pop() if ds else 0

    def symmetrize(self) -> "SymTensor":
        out = {}
        for k, v in self.terms.items():
            sk = tuple(sorted(k))
            out[sk] = out[sk] + v if sk in out else v
        return SymTensor(out)

    def __eq__(self, o):
        if not isinstance(o, SymTensor):
            return NotImplemented
        return (self - o).terms == {}

    def __repr__(self):
        return f"SymTensor({len(self.terms)} terms, degrees {sorted(self.degrees())})"


def _unit_ref(k: int) -> AlbertElement:
    return AlbertElement.from_ref([Fraction(int(i == k)) for i in range(27)])


@lru_cache(maxsize=None)
def _jordan_table() -> tuple:
    """J[i][j] = ((k, coeff), ...) with u_i o u_j = sum coeff u_k."""
    units = [_unit_ref(k) for k in range(27)]
    table = []
    for i in range(27):
        row = []
        for j in range(27):
            r = jordan_product(units[i], units[j]).ref()
            row.append(tuple((k, Fraction(v)) for k, v in enumerate(r) if v != 0))
        table.append(tuple(row))
    return tuple(table)


def _unit_trace(i: int) -> int:
    return 1 if i < 3 else 0


def _circ(i: int, t: SymTensor) -> SymTensor:
    """u_i o t = sum over positions of t with u_i o (that factor); zero on scalars."""
    J = _jordan_table()
    out = {}
    for key, c in t.terms.items():
        for pos, j in enumerate(key):
            for k, coeff in J[i][j]:
                nk = key[:pos] + (k,) + key[pos + 1:]
                v = c * coeff
                out[nk] = out[nk] + v if nk in out else v
    return SymTensor(out)


def _tensor_right(t: SymTensor, i: int) -> SymTensor:
    return SymTensor({k + (i,): v for k, v in t.terms.items()})


@lru_cache(maxsize=None)
def _P_basis(key: tuple) -> SymTensor:
    """P_k on the basis tensor u_{key[0]} x ... x u_{key[-1]}."""
    if not key:
        return SymTensor.scalar(1)
    head, i = key[:-1], key[-1]
    Pk = _P_basis(head)
    out = _tensor_right(Pk, i)
    if _unit_trace(i):
        out = out + Pk.scale(4 * _unit_trace(i))
    out = out + _circ(i, Pk)
    out = out + _apply_P(_circ(i, SymTensor({head: Fraction(1)})))
    return out


def _apply_P(t: SymTensor) -> SymTensor:
    out = SymTensor()
    for key, c in t.terms.items():
        out = out + _P_basis(key).scale(c)
    return out


def scriptP(k: int, elements) -> SymTensor:
    """P_k(A_1 x ... x A_k), extended multilinearly from the reference basis."""
    elements = list(elements)
    if len(elements) != k:
        raise ValueError(f"expected {k} tensor factors, got {len(elements)}")
    return _apply_P(SymTensor.elementary(elements))


def sym_pairing(t: SymTensor, P: WeightPolynomial):
    """{t, P} for P = (., A)^n: product of the pairings of the factors with A."""
    n = P.degree
    if t.terms and t.degree != n:
        raise ValueError(f"degree mismatch: tensor of degree {t.degree}, polynomial of degree {n}")
    if P.generator is None:
        return t.terms.get((), 0)
    L = make_lattice(P.generator.lattice_name)
    phi = form_functional(L, P.generator.A)
    total = 0
    for key, c in t.terms.items():
        v = c
        for idx in key:
            v = v * phi[idx]
        total = total + v
    return total


def dual_contraction(n: int, A: AlbertElement, fn) -> SymTensor:
    """sum_I fn(e_I) * prod_j (f_{i_j}, A) for the reference basis e and its trace-form dual f."""
    r = A.ref()
    coeffs = {i: r[i] for i in range(27) if r[i] != 0}  # (f_i, A) = A's i-th reference coordinate
    out = SymTensor()
    keys = [()]
    for _ in range(n):
        keys = [k + (i,) for k in keys for i in coeffs]
    for key in keys:
        w = 1
        for i in key:
            w = w * coeffs[i]
        out = out + fn(key).scale(w)
    return out


def leading_term_identity(n: int, A: AlbertElement) -> tuple[SymTensor, SymTensor]:
    """(contraction of P_n(e_I), contraction of e_I); equal when Tr(A) = 0 and A o A = 0."""
    lhs = dual_contraction(n, A, _P_basis)
    rhs = dual_contraction(n, A, lambda key: SymTensor({key: Fraction(1)}))
    return lhs, rhs
