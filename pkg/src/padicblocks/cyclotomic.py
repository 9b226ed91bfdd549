"""Exact arithmetic in cyclotomic fields Q(zeta_N).

Elements are polynomials in zeta_N with Fraction coefficients, reduced mod
the N-th cyclotomic polynomial, so equality and rationality tests are
exact.  Complex conjugation is exponent negation.  Elements of different
orders are promoted to the lcm before combining.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache


class NonIntegral(ArithmeticError):
    """A quantity that must be a rational integer is not."""


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Integer coefficients of Phi_n, low degree first."""
    # Phi_n = (x^n - 1) / prod_{d | n, d < n} Phi_d, by exact division
    num = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            num = _poly_divide_exact(num, list(cyclotomic_polynomial(d)))
    return tuple(num)


def _poly_divide_exact(num: list[int], den: list[int]) -> list[int]:
    num = list(num)
    out = [0] * (len(num) - len(den) + 1)
    for i in range(len(out) - 1, -1, -1):
        coeff = num[i + len(den) - 1] // den[-1]
        out[i] = coeff
        for j, d in enumerate(den):
            num[i + j] -= coeff * d
    assert all(c == 0 for c in num), "non-exact polynomial division"
    return out


def _phi(n: int) -> int:
    return sum(1 for k in range(1, n + 1) if math.gcd(k, n) == 1)


@dataclass(frozen=True)
class Cyclotomic:
    """An element of Q(zeta_order), reduced mod the cyclotomic polynomial."""

    order: int
    coeffs: tuple[Fraction, ...]  # length phi(order)

    # -- constructors -----------------------------------------------------

    @staticmethod
    def zero(order: int = 1) -> "Cyclotomic":
        return Cyclotomic(order, tuple([Fraction(0)] * _phi(order)))

    @staticmethod
    def rational(x, order: int = 1) -> "Cyclotomic":
        c = [Fraction(0)] * _phi(order)
        c[0] = Fraction(x)
        return Cyclotomic(order, tuple(c))

    @staticmethod
    def root(order: int, exponent: int) -> "Cyclotomic":
        """zeta_order ** exponent."""
        vec = [Fraction(0)] * (exponent % order if order > 1 else 0)
        return Cyclotomic(order, _reduce(vec + [Fraction(1)], order))

    # -- promotion ---------------------------------------------------------

    def promote(self, order: int) -> "Cyclotomic":
        if order == self.order:
            return self
        assert order % self.order == 0
        k = order // self.order
        vec = [Fraction(0)] * (len(self.coeffs) * k)
        for i, c in enumerate(self.coeffs):
            vec[i * k] = c
        return Cyclotomic(order, _reduce(vec, order))

    def _pair(self, other: "Cyclotomic"):
        n = math.lcm(self.order, other.order)
        return self.promote(n), other.promote(n)

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other) -> "Cyclotomic":
        if not isinstance(other, Cyclotomic):
            other = Cyclotomic.rational(other)
        a, b = self._pair(other)
        return Cyclotomic(a.order, tuple(x + y for x, y in zip(a.coeffs, b.coeffs)))

    def __sub__(self, other) -> "Cyclotomic":
        return self + (-other if isinstance(other, Cyclotomic) else Cyclotomic.rational(-Fraction(other)))

    def __neg__(self) -> "Cyclotomic":
        return Cyclotomic(self.order, tuple(-c for c in self.coeffs))

    def __mul__(self, other) -> "Cyclotomic":
        if not isinstance(other, Cyclotomic):
            other = Cyclotomic.rational(other)
        a, b = self._pair(other)
        prod = [Fraction(0)] * (2 * len(a.coeffs))
        for i, x in enumerate(a.coeffs):
            if x == 0:
                continue
            for j, y in enumerate(b.coeffs):
                if y:
                    prod[i + j] += x * y
        return Cyclotomic(a.order, _reduce(prod, a.order))

    __radd__ = __add__
    __rmul__ = __mul__

    def scale(self, x) -> "Cyclotomic":
        x = Fraction(x)
        return Cyclotomic(self.order, tuple(c * x for c in self.coeffs))

    def conj(self) -> "Cyclotomic":
        """Complex conjugation: zeta -> zeta^-1."""
        n = self.order
        vec = [Fraction(0)] * (n if n > 1 else 1)
        for i, c in enumerate(self.coeffs):
            vec[(-i) % max(n, 1)] += c
        return Cyclotomic(n, _reduce(vec, n))

    def galois(self, k: int) -> "Cyclotomic":
        """zeta -> zeta^k for gcd(k, order) = 1."""
        n = self.order
        assert math.gcd(k, max(n, 1)) == 1
        vec = [Fraction(0)] * max(n, 1)
        for i, c in enumerate(self.coeffs):
            vec[(i * k) % max(n, 1)] += c
        return Cyclotomic(n, _reduce(vec, n))

    # -- predicates ----------------------------------------------------------

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def is_rational(self) -> bool:
        return all(c == 0 for c in self.coeffs[1:])

    def as_fraction(self) -> Fraction:
        if not self.is_rational():
            raise NonIntegral(f"{self} is not rational")
        return self.coeffs[0]

    def as_integer(self) -> int:
        x = self.as_fraction()
        if x.denominator != 1:
            raise NonIntegral(f"{x} is not a rational integer")
        return x.numerator

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Cyclotomic.rational(other)
        if not isinstance(other, Cyclotomic):
            return NotImplemented
        a, b = self._pair(other)
        return a.coeffs == b.coeffs

    def __hash__(self):
        return hash((self.order, self.coeffs))

    def __repr__(self) -> str:
        if self.is_rational():
            return str(self.coeffs[0])
        terms = [
            (f"{c}*" if c != 1 else "") + (f"z^{i}" if i > 1 else "z")
            for i, c in enumerate(self.coeffs)
            if i and c
        ]
        if self.coeffs[0]:
            terms.insert(0, str(self.coeffs[0]))
        return "(" + " + ".join(terms) + f" : z=zeta_{self.order})"


def _reduce(vec: list[Fraction], order: int) -> tuple[Fraction, ...]:
    """Reduce a zeta-polynomial mod Phi_order to the power basis."""
    order = max(order, 1)
    phi = cyclotomic_polynomial(order)
    deg = len(phi) - 1
    vec = [Fraction(c) for c in vec]
    # first reduce exponents mod order (zeta^order = 1)
    if len(vec) > order:
        folded = [Fraction(0)] * order
        for i, c in enumerate(vec):
            folded[i % order] += c
        vec = folded
    while len(vec) > deg:
        top = vec.pop()
        if top:
            # x^(deg + t) = -sum_j phi[j] x^(j + t), with t = len(vec) - deg
            t = len(vec) - deg
            for j in range(deg):
                vec[t + j] -= top * phi[j]
    vec += [Fraction(0)] * (deg - len(vec))
    return tuple(vec)


def root_sum(order: int, exponents) -> Cyclotomic:
    """Sum of zeta_order^e over a multiset of exponents, reduced once."""
    order = max(order, 1)
    vec = [Fraction(0)] * order
    for e in exponents:
        vec[e % order] += 1
    return Cyclotomic(order, _reduce(vec, order))
