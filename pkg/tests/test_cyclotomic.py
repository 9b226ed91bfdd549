from fractions import Fraction

import pytest

from padicblocks.cyclotomic import (
    Cyclotomic,
    NonIntegral,
    cyclotomic_polynomial,
    root_sum,
)


def test_cyclotomic_polynomials():
    assert cyclotomic_polynomial(1) == (-1, 1)
    assert cyclotomic_polynomial(2) == (1, 1)
    assert cyclotomic_polynomial(3) == (1, 1, 1)
    assert cyclotomic_polynomial(4) == (1, 0, 1)
    assert cyclotomic_polynomial(6) == (1, -1, 1)
    assert cyclotomic_polynomial(12) == (1, 0, -1, 0, 1)


def test_root_powers_and_order():
    for n in (2, 3, 4, 5, 6, 12, 20):
        z = Cyclotomic.root(n, 1)
        power = Cyclotomic.rational(1)
        for _ in range(n):
            power = power * z
        assert power == 1
        if n > 1:
            assert z != 1


def test_full_root_sum_vanishes():
    for n in (2, 3, 5, 12):
        assert root_sum(n, range(n)).is_zero()


def test_conjugation():
    z = Cyclotomic.root(5, 2)
    assert z.conj() == Cyclotomic.root(5, 3)
    assert (z * z.conj()) == 1
    x = z + z.conj()
    assert x.conj() == x


def test_mixed_orders():
    z2 = Cyclotomic.root(2, 1)
    z3 = Cyclotomic.root(3, 1)
    assert z2 * z3 == Cyclotomic.root(6, 5)
    assert (z3 + z3.conj()).as_fraction() == -1


def test_rationality_and_integrality():
    z4 = Cyclotomic.root(4, 1)
    assert (z4 * z4).as_fraction() == -1
    with pytest.raises(NonIntegral):
        z4.as_fraction()
    assert Cyclotomic.rational(Fraction(3, 2)).as_fraction() == Fraction(3, 2)
    with pytest.raises(NonIntegral):
        Cyclotomic.rational(Fraction(3, 2)).as_integer()


def test_galois_action():
    z = Cyclotomic.root(5, 1)
    assert z.galois(2) == Cyclotomic.root(5, 2)
    assert z.galois(4) == z.conj()


def test_scale_and_arithmetic():
    z = Cyclotomic.root(3, 1)
    s = (z + 1).scale(Fraction(1, 2))
    assert s + s == z + 1
    assert (z - z).is_zero()
