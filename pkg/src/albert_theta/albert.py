"""The exceptional Jordan algebra Her_3(O) of 3x3 Hermitian octonion matrices.

An element [a,b,c;x,y,z] stands for the matrix

    [[ a,     z,     conj(y) ],
     [ conj(z), b,   x       ],
     [ y,     conj(x), c     ]]

with scalar diagonal.  Scalars are generic (int, Fraction, QuadExt, ...).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .arith import QuadExt, scalar_from_json, scalar_to_json
from .octonion import Octonion

SLOTS = ("a", "b", "c", "x", "y", "z")


@dataclass(frozen=True)
class AlbertElement:
    a: object
    b: object
    c: object
    x: Octonion
    y: Octonion
    z: Octonion

    # constructors

    @classmethod
    def zero(cls, one=0) -> "AlbertElement":
        z = one * 0
        o = Octonion.zero(one)
        return cls(z, z, z, o, o, o)

    @classmethod
    def identity(cls) -> "AlbertElement":
        o = Octonion.zero()
        return cls(1, 1, 1, o, o, o)

    @classmethod
    def diag(cls, a, b, c) -> "AlbertElement":
        o = Octonion.zero(a * 0)
        return cls(a, b, c, o, o, o)

    @classmethod
    def idempotent(cls, i: int) -> "AlbertElement":
        """E_1, E_2, E_3 for i = 1, 2, 3."""
        d = [0, 0, 0]
        d[i - 1] = 1
        return cls.diag(*d)

    @classmethod
    def from_ref(cls, r) -> "AlbertElement":
        """From 27 reference coordinates (a, b, c, x0..x7, y0..y7, z0..z7)."""
        r = list(r)
        if len(r) != 27:
            raise ValueError("expected 27 reference coordinates")
        return cls(r[0], r[1], r[2], Octonion(tuple(r[3:11])), Octonion(tuple(r[11:19])), Octonion(tuple(r[19:27])))

    @classmethod
    def from_doubled_ref(cls, r2) -> "AlbertElement":
        return cls.from_ref([Fraction(int(t), 2) for t in r2])

    def ref(self) -> tuple:
        return (self.a, self.b, self.c) + self.x.coords + self.y.coords + self.z.coords

    def doubled_ref(self) -> tuple[int, ...] | None:
        out = []
        for t in self.ref():
            v = Fraction(t) * 2
            if v.denominator != 1:
                return None
            out.append(v.numerator)
        return tuple(out)

    # vector space structure

    def __add__(self, o: "AlbertElement") -> "AlbertElement":
        return AlbertElement(self.a + o.a, self.b + o.b, self.c + o.c, self.x + o.x, self.y + o.y, self.z + o.z)

    def __sub__(self, o: "AlbertElement") -> "AlbertElement":
        return AlbertElement(self.a - o.a, self.b - o.b, self.c - o.c, self.x - o.x, self.y - o.y, self.z - o.z)

    def __neg__(self) -> "AlbertElement":
        return AlbertElement(-self.a, -self.b, -self.c, -self.x, -self.y, -self.z)

    def scale(self, s) -> "AlbertElement":
        return AlbertElement(s * self.a, s * self.b, s * self.c, s * self.x, s * self.y, s * self.z)

    def __rmul__(self, s) -> "AlbertElement":
        return self.scale(s)

    def is_zero(self) -> bool:
        return all(t == 0 for t in self.ref())

    def __eq__(self, other):
        if not isinstance(other, AlbertElement):
            return NotImplemented
        return all(s == t for s, t in zip(self.ref(), other.ref()))

    def __hash__(self):
        return hash(self.ref())

    # structure maps

    def adjoint(self) -> "AlbertElement":
        return adjoint(self)

    def det(self):
        return det(self)

    def trace(self):
        return self.a + self.b + self.c

    def to_json(self) -> dict:
        return {
            "a": scalar_to_json(self.a),
            "b": scalar_to_json(self.b),
            "c": scalar_to_json(self.c),
            "x": self.x.to_json(),
            "y": self.y.to_json(),
            "z": self.z.to_json(),
        }

    @classmethod
    def from_json(cls, obj: dict) -> "AlbertElement":
        return cls(
            scalar_from_json(obj["a"]),
            scalar_from_json(obj["b"]),
            scalar_from_json(obj["c"]),
            Octonion.from_json(obj["x"]),
            Octonion.from_json(obj["y"]),
            Octonion.from_json(obj["z"]),
        )

    def __repr__(self):
        return f"[{self.a},{self.b},{self.c};{self.x},{self.y},{self.z}]"


def adjoint(A: AlbertElement) -> AlbertElement:
    a, b, c, x, y, z = A.a, A.b, A.c, A.x, A.y, A.z
    return AlbertElement(
        b * c - x.norm(),
        c * a - y.norm(),
        a * b - z.norm(),
        (y * z).conj() - a * x,
        (z * x).conj() - b * y,
        (x * y).conj() - c * z,
    )


def det(A: AlbertElement):
    a, b, c, x, y, z = A.a, A.b, A.c, A.x, A.y, A.z
    return a * b * c + ((x * y) * z).trace() - a * x.norm() - b * y.norm() - c * z.norm()


def form(A: AlbertElement, B: AlbertElement):
    """(A,B) = aa' + bb' + cc' + <x,x'> + <y,y'> + <z,z'>."""
    return A.a * B.a + A.b * B.b + A.c * B.c + A.x.inner(B.x) + A.y.inner(B.y) + A.z.inner(B.z)


def trace(A: AlbertElement):
    return A.trace()


def cross(A: AlbertElement, B: AlbertElement) -> AlbertElement:
    """A x B = (A+B)^# - A^# - B^#."""
    return adjoint(A + B) - adjoint(A) - adjoint(B)


def bilinear_trace_cross(A: AlbertElement, B: AlbertElement):
    return form(A, B), trace(A), cross(A, B)


def _as_matrix(A: AlbertElement):
    z0 = A.a * 0
    s = lambda t: Octonion((t,) + (z0,) * 7)  # noqa: E731
    return [
        [s(A.a), A.z, A.y.conj()],
        [A.z.conj(), s(A.b), A.x],
        [A.y, A.x.conj(), s(A.c)],
    ]


def _matmul(M, N):
    out = []
    for i in range(3):
        row = []
        for j in range(3):
            acc = M[i][0] * N[0][j]
            for k in (1, 2):
                acc = acc + M[i][k] * N[k][j]
            row.append(acc)
        out.append(row)
    return out


def jordan_product(A: AlbertElement, B: AlbertElement) -> AlbertElement:
    """A o B = (AB + BA)/2 as octonion matrices."""
    M, N = _as_matrix(A), _as_matrix(B)
    P, Q = _matmul(M, N), _matmul(N, M)
    S = [[(P[i][j] + Q[i][j]) * Fraction(1, 2) for j in range(3)] for i in range(3)]
    return AlbertElement(S[0][0].coords[0], S[1][1].coords[0], S[2][2].coords[0], S[1][2], S[2][0], S[0][1])


def rank(A: AlbertElement) -> int:
    if A.is_zero():
        return 0
    if adjoint(A).is_zero():
        return 1
    if det(A) == 0:
        return 2
    return 3


def is_psd(A: AlbertElement) -> bool:
    """All seven principal minors nonnegative."""
    if any(isinstance(t, QuadExt) for t in A.ref()):
        raise ValueError("is_psd needs rational coefficients")
    S = adjoint(A)
    return all(t >= 0 for t in (A.a, A.b, A.c, S.a, S.b, S.c, det(A)))


# --- polarization of det by formal expansion ------------------------------------


class Poly2:
    """Polynomial in two formal parameters s, t with generic scalar coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {k: v for k, v in (terms or {}).items() if v != 0}

    @classmethod
    def const(cls, c) -> "Poly2":
        return cls({(0, 0): c})

    def _lift(self, o):
        return o if isinstance(o, Poly2) else Poly2.const(o)

    def __add__(self, o):
        o = self._lift(o)
        out = dict(self.terms)
        for k, v in o.terms.items():
            out[k] = out[k] + v if k in out else v
        return Poly2(out)

    __radd__ = __add__

    def __neg__(self):
        return Poly2({k: -v for k, v in self.terms.items()})

    def __sub__(self, o):
        return self + (-self._lift(o))

    def __rsub__(self, o):
        return self._lift(o) - self

    def __mul__(self, o):
        o = self._lift(o)
        out = {}
        for (i, j), v in self.terms.items():
            for (k, m), w in o.terms.items():
                key = (i + k, j + m)
                out[key] = out[key] + v * w if key in out else v * w
        return Poly2(out)

    __rmul__ = __mul__

    def __eq__(self, o):
        o = self._lift(o)
        return self.terms == o.terms

    def __hash__(self):
        return hash(tuple(sorted(self.terms.items())))

    def coeff(self, i: int, j: int = 0):
        return self.terms.get((i, j), 0)


def _poly_element(P: AlbertElement, A: AlbertElement, B: AlbertElement | None) -> AlbertElement:
    def lift(p, a, b):
        terms = {(0, 0): p, (1, 0): a}
        if B is not None:
            terms[(0, 1)] = b
        return Poly2(terms)

    rb = B.ref() if B is not None else (0,) * 27
    r = [lift(p, a, b) for p, a, b in zip(P.ref(), A.ref(), rb)]
    return AlbertElement.from_ref(r)


def det_polarize(A: AlbertElement, B: AlbertElement, P: AlbertElement):
    """(coefficient of t in det(P + tA), coefficient of st in det(P + sA + tB))."""
    d1 = det(_poly_element(P, A, None)).coeff(1, 0)
    d2 = det(_poly_element(P, A, B)).coeff(1, 1)
    return d1, d2


def det_expansion(A: AlbertElement, B: AlbertElement) -> list:
    """Coefficients of det(A + tB) as a polynomial in t (degree <= 3)."""
    p = det(_poly_element(A, B, None))
    return [p.coeff(k, 0) for k in range(4)]
