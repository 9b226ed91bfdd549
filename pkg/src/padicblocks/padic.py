"""Exact p-adic scalars, 2x2 matrices and lattice canonical forms.

Scalars are plain ``fractions.Fraction`` values; the prime is passed
explicitly.  Valuations are exact (no truncated p-adics anywhere), and the
only lossy operation is the explicit reduction ``reduce_mod`` to Z/p^m.
The valuation of 0 is the sentinel ``INF`` (``math.inf``), never a large
integer.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

INF = math.inf

Scalar = Fraction | int


class SingularBasis(ValueError):
    """Raised when a lattice basis has determinant zero."""


class NegativeValuation(ValueError):
    """Raised when reducing a matrix with a non-integral entry."""


def _int_valuation(n: int, p: int) -> int:
    if n == 0:
        raise ValueError("valuation of 0 is infinite")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def valuation(x: Scalar, p: int):
    """p-adic valuation of an exact rational; ``INF`` for x = 0."""
    x = Fraction(x)
    if x == 0:
        return INF
    return _int_valuation(x.numerator, p) - _int_valuation(x.denominator, p)


def unit_part(x: Scalar, p: int) -> Fraction:
    """u with x = p^v * u and valuation(u) = 0."""
    x = Fraction(x)
    if x == 0:
        raise ValueError("0 has no unit part")
    return x / Fraction(p) ** valuation(x, p)


def reduce_scalar(x: Scalar, p: int, m: int) -> int:
    """Canonical representative in [0, p^m) of an x with valuation >= 0."""
    x = Fraction(x)
    q = p**m
    den = x.denominator
    if den % p == 0:
        raise NegativeValuation(f"{x} is not p-integral for p={p}")
    return x.numerator * pow(den, -1, q) % q


def residue_representative(x: Scalar, p: int, a: int) -> Fraction:
    """Canonical representative of x modulo p^a Z_p.

    The representative is m / p^k with k = max(0, -valuation(x)) and
    0 <= m < p^(a+k); it lies in [0, p^a).
    """
    x = Fraction(x)
    v = valuation(x, p)
    if v >= a:
        return Fraction(0)
    k = max(0, -int(v))
    scaled = x * p**k  # p-integral now
    num = reduce_scalar(scaled, p, a + k)
    return Fraction(num, p**k)


@dataclass(frozen=True)
class Mat2:
    """Exact 2x2 matrix over the rationals."""

    a: Fraction
    b: Fraction
    c: Fraction
    d: Fraction

    @staticmethod
    def of(a, b, c, d) -> "Mat2":
        return Mat2(Fraction(a), Fraction(b), Fraction(c), Fraction(d))

    @staticmethod
    def identity() -> "Mat2":
        return Mat2.of(1, 0, 0, 1)

    @staticmethod
    def diag(x, y) -> "Mat2":
        return Mat2.of(x, 0, 0, y)

    def __matmul__(self, other: "Mat2") -> "Mat2":
        return Mat2(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def det(self) -> Fraction:
        return self.a * self.d - self.b * self.c

    def adjugate(self) -> "Mat2":
        return Mat2(self.d, -self.b, -self.c, self.a)

    def inv(self) -> "Mat2":
        det = self.det()
        if det == 0:
            raise SingularBasis("matrix is singular")
        adj = self.adjugate()
        return Mat2(adj.a / det, adj.b / det, adj.c / det, adj.d / det)

    def scale(self, s: Scalar) -> "Mat2":
        s = Fraction(s)
        return Mat2(self.a * s, self.b * s, self.c * s, self.d * s)

    def entries(self) -> tuple[Fraction, Fraction, Fraction, Fraction]:
        return (self.a, self.b, self.c, self.d)

    def conjugate_by(self, g: "Mat2") -> "Mat2":
        """g^-1 @ self @ g."""
        return g.inv() @ self @ g

    def is_integral(self, p: int) -> bool:
        return all(valuation(e, p) >= 0 for e in self.entries())

    def min_valuation(self, p: int):
        return min(valuation(e, p) for e in self.entries())

    def is_monomial(self) -> bool:
        """Diagonal or antidiagonal with nonzero entries."""
        return (self.b == 0 and self.c == 0 and self.a != 0 and self.d != 0) or (
            self.a == 0 and self.d == 0 and self.b != 0 and self.c != 0
        )

    def __repr__(self) -> str:
        return f"[[{self.a}, {self.b}], [{self.c}, {self.d}]]"


def reduce_mod(g: Mat2, p: int, m: int) -> tuple[int, int, int, int]:
    """Entrywise reduction of a p-integral matrix to Z/p^m."""
    return (
        reduce_scalar(g.a, p, m),
        reduce_scalar(g.b, p, m),
        reduce_scalar(g.c, p, m),
        reduce_scalar(g.d, p, m),
    )


@dataclass(frozen=True, order=True)
class LatticeForm:
    """Canonical form of a homothety class of rank-2 Z_p-lattices.

    The class is spanned by the columns of [[p^a, u], [0, p^b]] with
    min(a, b) = 0 and u the canonical representative mod p^a Z_p.
    """

    a: int
    b: int
    u: Fraction

    def basis(self, p: int) -> Mat2:
        return Mat2.of(Fraction(p) ** self.a, self.u, 0, Fraction(p) ** self.b)

    def orbit_type(self) -> int:
        """Parity of the relative position to the standard lattice; constant
        on SL2-orbits."""
        return (self.a + self.b) % 2

    def label(self) -> str:
        return f"({self.a},{self.b},{self.u})"


def lattice_canonical(basis: Mat2, p: int) -> LatticeForm:
    """Hermite-style canonical form of the column span, homothety-normalized.

    Raises SingularBasis if the columns are dependent.
    """
    if basis.det() == 0:
        raise SingularBasis(f"{basis} does not span a lattice")
    # Column-reduce so the second row is (0, y): use the column whose second
    # entry has the smaller valuation as the pivot.
    c0 = (basis.a, basis.c)
    c1 = (basis.b, basis.d)
    v0 = valuation(c0[1], p)
    v1 = valuation(c1[1], p)
    if v1 > v0:
        c0, c1 = c1, c0
        v0, v1 = v1, v0
    # now val(c1[1]) <= val(c0[1]); clear the second entry of c0
    if c0[1] != 0:
        t = c0[1] / c1[1]  # in Z_p
        c0 = (c0[0] - t * c1[0], Fraction(0))
    x, y = c0[0], c1[1]
    if x == 0:
        raise SingularBasis(f"{basis} does not span a lattice")
    a = int(valuation(x, p))
    b = int(valuation(y, p))
    # scale columns by units so the diagonal is exactly (p^a, p^b)
    u = c1[0] / unit_part(y, p)
    # homothety normalization
    t = min(a, b)
    a, b, u = a - t, b - t, u / Fraction(p) ** t
    u = residue_representative(u, p, a)
    return LatticeForm(a, b, u)


def elementary_divisor_exponents(
    l1: LatticeForm, l2: LatticeForm, p: int
) -> tuple[int, int]:
    """Homothety-normalized exponents (a >= b = 0) of the relative
    elementary divisors; the tree distance is a - b."""
    rel = l1.basis(p).inv() @ l2.basis(p)
    vmin = rel.min_valuation(p)
    vdet = valuation(rel.det(), p)
    return (int(vdet - 2 * vmin), 0)


def smith_exponents(g: Mat2, p: int) -> tuple[int, int]:
    """Exponents (e1 <= e2) of the Smith normal form of g over Z_p."""
    vmin = int(g.min_valuation(p))
    vdet = int(valuation(g.det(), p))
    return (vmin, vdet - vmin)


def cartan_decomposition(g: Mat2, p: int) -> tuple[Mat2, Mat2, Mat2]:
    """g = k1 @ diag(p^e1, p^e2) @ k2 with k1, k2 in GL2(Z_p).

    Exact Smith reduction over Z_p; the invariant g == k1 @ r @ k2 is kept
    through every row/column operation and asserted at the end.
    """
    if g.det() == 0:
        raise SingularBasis("cannot decompose a singular matrix")
    swap = Mat2.of(0, 1, 1, 0)
    k1, r, k2 = Mat2.identity(), g, Mat2.identity()

    def val(x):
        return valuation(x, p)

    # move an entry of minimal valuation to position (0, 0)
    pos = min(
        ((i, j) for i in range(2) for j in range(2)),
        key=lambda ij: val(r.entries()[2 * ij[0] + ij[1]]),
    )
    if pos[0] == 1:
        r, k1 = swap @ r, k1 @ swap
    if pos[1] == 1:
        r, k2 = r @ swap, swap @ k2
    # clear (1,0) by a row operation, then (0,1) by a column operation
    t = r.c / r.a
    r = Mat2.of(1, 0, -t, 1) @ r
    k1 = k1 @ Mat2.of(1, 0, t, 1)
    s = r.b / r.a
    r = r @ Mat2.of(1, -s, 0, 1)
    k2 = Mat2.of(1, s, 0, 1) @ k2
    # pull the units of the diagonal into k1
    u0, u1 = unit_part(r.a, p), unit_part(r.d, p)
    d = Mat2.diag(Fraction(p) ** int(val(r.a)), Fraction(p) ** int(val(r.d)))
    k1 = k1 @ Mat2.diag(u0, u1)
    assert k1.is_integral(p) and valuation(k1.det(), p) == 0
    assert k2.is_integral(p) and valuation(k2.det(), p) == 0
    assert k1 @ d @ k2 == g
    return k1, d, k2
