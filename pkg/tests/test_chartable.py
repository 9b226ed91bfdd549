from fractions import Fraction

import pytest

from padicblocks.cyclotomic import Cyclotomic
from padicblocks.patterns import iwahori, quotient
from padicblocks.chartable import character_table


def _inner(table, i, j):
    quot = table.quot
    total = Cyclotomic.zero()
    for k, cls in enumerate(quot.classes):
        total = total + (table.values[i][k] * table.values[j][k].conj()).scale(len(cls))
    return total.scale(Fraction(1, len(quot)))


def test_s3_table():
    t = character_table(quotient(2, 1))
    assert sorted(t.degrees) == [1, 1, 2]
    for i in range(3):
        for j in range(3):
            assert _inner(t, i, j) == (1 if i == j else 0)


def test_sl2_f3_table():
    t = character_table(quotient(3, 1))
    assert sorted(t.degrees) == [1, 1, 1, 2, 2, 2, 3]
    assert sum(d * d for d in t.degrees) == 24
    for i in range(7):
        for j in range(7):
            assert _inner(t, i, j) == (1 if i == j else 0)


def test_sl2_f5_table():
    t = character_table(quotient(5, 1))
    assert sum(d * d for d in t.degrees) == 120
    assert sorted(t.degrees) == [1, 2, 2, 3, 3, 4, 4, 5, 6]
    for i in range(len(t.degrees)):
        for j in range(i, len(t.degrees)):
            assert _inner(t, i, j) == (1 if i == j else 0)


def test_borel_tables():
    t = character_table(quotient(2, 1, iwahori(2).key()))
    assert sorted(t.degrees) == [1, 1]
    t3 = character_table(quotient(3, 1, iwahori(3).key()))
    # Borel of SL2(F3) has order 6, abelian? it is Z/3 : Z/2 nonabelian?
    assert sum(d * d for d in t3.degrees) == len(t3.quot)


def test_size_budget():
    with pytest.raises(ValueError):
        character_table(quotient(5, 2))
