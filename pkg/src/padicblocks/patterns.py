"""Compact open subgroups of SL2(Qp) as entrywise valuation patterns.

A pattern is four lower bounds on entry valuations, two diagonal unit
flags, and an optional conjugator c: an element g belongs to the group when
h = c^-1 g c meets the bounds and flagged diagonal entries of h are units.
Monomial conjugators are folded into the bounds, so the stabilizers of
apartment simplices and all their translates stay in plain form.

Subgroups are kept symbolic until reduced to a finite congruence quotient;
the reduction is the only place a level enters, and callers cross-check
counts between consecutive levels (UnstableLevel) instead of relying on an
a-priori sufficient level.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .padic import INF, Mat2, reduce_mod, unit_part, valuation
from .tree import TreeEdge, TreeVertex, act, standard_edge, standard_vertex

Bound = float | int  # int or INF


class PatternError(ValueError):
    """Pattern is not representable or not enumerable as requested."""


class UnstableLevel(RuntimeError):
    """A finite-level computation changed between levels m and m+1."""


class NotFactorizable(ValueError):
    """Element admits no upper/diagonal/lower factorization."""


def _add(x: Bound, y: Bound) -> Bound:
    return x + y


@dataclass(frozen=True)
class ValuationPattern:
    p: int
    bounds: tuple[Bound, Bound, Bound, Bound]  # (b11, b12, b21, b22)
    diag_units: tuple[bool, bool] = (False, False)
    conjugator: Mat2 | None = None

    def __post_init__(self):
        b11, b12, b21, b22 = self.bounds
        if b11 != 0 or b22 != 0:
            raise PatternError("diagonal bounds must be 0")
        if b12 + b21 < 0:
            raise PatternError("off-diagonal bounds violate closure: b12 + b21 < 0")

    # -- membership -----------------------------------------------------

    def _plain_member(self, h: Mat2) -> bool:
        b11, b12, b21, b22 = self.bounds
        if not (
            valuation(h.a, self.p) >= b11
            and valuation(h.b, self.p) >= b12
            and valuation(h.c, self.p) >= b21
            and valuation(h.d, self.p) >= b22
        ):
            return False
        if self.diag_units[0] and valuation(h.a, self.p) != 0:
            return False
        if self.diag_units[1] and valuation(h.d, self.p) != 0:
            return False
        return True

    def member(self, g: Mat2) -> bool:
        h = g if self.conjugator is None else g.conjugate_by(self.conjugator)
        return self._plain_member(h)

    # -- symbolic operations --------------------------------------------

    def is_plain(self) -> bool:
        return self.conjugator is None

    def fold_monomial(self, c: Mat2) -> "ValuationPattern":
        """Pattern with membership(g) <=> self.member(c^-1 g c), for monomial c."""
        if not c.is_monomial():
            raise PatternError("can only fold monomial conjugators")
        if not self.is_plain():
            raise PatternError("base pattern must be plain")
        b11, b12, b21, b22 = self.bounds
        if c.b == 0:  # diagonal c = diag(x, y)
            s = valuation(c.a, self.p) - valuation(c.d, self.p)
            bounds = (b11, _add(b12, s), _add(b21, -s), b22)
            units = self.diag_units
        else:  # antidiagonal c = [[0, x], [y, 0]]: slots swap
            s = valuation(c.b, self.p) - valuation(c.c, self.p)
            # c^-1 h c = [[h22, h21*x/y], [h12*y/x, h11]]
            bounds = (b22, _add(b21, s), _add(b12, -s), b11)
            units = (self.diag_units[1], self.diag_units[0])
        return ValuationPattern(self.p, bounds, units)

    def conjugate(self, g: Mat2) -> "ValuationPattern":
        """Pattern for g P g^-1: membership(h) <=> self.member(g^-1 h g)."""
        if self.is_plain() and g.is_monomial():
            return self.fold_monomial(g)
        c = g if self.conjugator is None else g @ self.conjugator
        if c.is_monomial():
            return ValuationPattern(self.p, self.bounds, self.diag_units).fold_monomial(c)
        return ValuationPattern(self.p, self.bounds, self.diag_units, c)

    def intersect(self, other: "ValuationPattern") -> "ValuationPattern":
        if self.p != other.p:
            raise PatternError("prime mismatch")
        if self.conjugator != other.conjugator:
            raise PatternError("cannot intersect patterns with different conjugators")
        bounds = tuple(max(a, b) for a, b in zip(self.bounds, other.bounds))
        units = tuple(a or b for a, b in zip(self.diag_units, other.diag_units))
        return ValuationPattern(self.p, bounds, units, self.conjugator)

    def same_plain_form(self, other: "ValuationPattern") -> bool:
        """Exact equality of membership predicates for plain patterns.

        Unit flags are compared after discarding the redundant ones (a flag
        is implied when the off-diagonal bounds sum to >= 1, by det = 1).
        """
        if not (self.is_plain() and other.is_plain()):
            raise PatternError("only plain patterns compare structurally")
        implied = self.bounds[1] + self.bounds[2] >= 1
        mine = self.diag_units if not implied else (True, True)
        implied_o = other.bounds[1] + other.bounds[2] >= 1
        theirs = other.diag_units if not implied_o else (True, True)
        return self.bounds == other.bounds and mine == theirs

    # -- enumeration support ---------------------------------------------

    def is_factorizable(self) -> bool:
        """True when every element factors as upper * diagonal * lower
        (diagonal entries are then automatically units since det = 1)."""
        return self.is_plain() and self.bounds[1] + self.bounds[2] >= 1

    def is_integral(self) -> bool:
        return self.is_plain() and self.bounds[1] >= 0 and self.bounds[2] >= 0

    def residue_member(self, x: tuple[int, int, int, int], m: int) -> bool:
        """Membership test on a residue mod p^m.

        Exact for plain integral patterns with bounds <= m; for an integral
        unit-determinant conjugator the residue is transported first.  Other
        conjugators require exact lifts (see lift_det1) and level checks.
        """
        p, q = self.p, self.p**m
        if self.conjugator is not None:
            c = self.conjugator
            if c.is_integral(p) and valuation(c.det(), p) == 0:
                cr = reduce_mod(c, p, m)
                ci = _residue_inv_gl(cr, p, m)
                x = _residue_mul(_residue_mul(ci, x, q), cr, q)
            else:
                return self.member(lift_det1(x, p, m))
        b11, b12, b21, b22 = self.bounds

        def ok(entry: int, bound: Bound) -> bool:
            if bound <= 0:
                return True
            need = min(bound, m)
            return entry % p ** int(need) == 0

        if not (ok(x[0], b11) and ok(x[1], b12) and ok(x[2], b21) and ok(x[3], b22)):
            return False
        if self.diag_units[0] and x[0] % p == 0:
            return False
        if self.diag_units[1] and x[3] % p == 0:
            return False
        return True

    def key(self) -> tuple:
        return (self.p, self.bounds, self.diag_units, self.conjugator)


# ---------------------------------------------------------------------------
# standard patterns


def sl2_zp(p: int) -> ValuationPattern:
    return ValuationPattern(p, (0, 0, 0, 0))


def iwahori(p: int) -> ValuationPattern:
    """Upper Iwahori: integral, lower-left divisible by p (diag units follow)."""
    return ValuationPattern(p, (0, 0, 1, 0), (True, True))


def diagonal_torus_units(p: int) -> ValuationPattern:
    return ValuationPattern(p, (0, INF, INF, 0), (True, True))


def stabilizer(s: TreeVertex | TreeEdge) -> ValuationPattern:
    """Pointwise stabilizer in SL2(Qp) as a conjugated pattern."""
    if isinstance(s, TreeVertex):
        return sl2_zp(s.p).conjugate(s.basis())
    return iwahori(s.p).conjugate(edge_chart(s))


def edge_chart(e: TreeEdge) -> Mat2:
    """Element of GL2(Qp) with unit-determinant integral part moving the
    standard edge to e; the standard edge maps via the identity."""
    p = e.p
    base = e.v0.basis()
    target = act(base.inv(), e.v1)
    std1 = standard_edge(p).v1
    candidates = [Mat2.identity()] + [Mat2.of(u, 1, 1, 0) for u in range(p)]
    for k in candidates:
        if act(k, std1) == target:
            chart = base @ k
            assert act(chart, standard_edge(p)) == e
            return chart
    raise PatternError(f"no chart found for edge {e}")


def vertex_chart(v: TreeVertex) -> Mat2:
    return v.basis()


# ---------------------------------------------------------------------------
# Iwahori factorization


def iwahori_factor(g: Mat2, j: ValuationPattern) -> tuple[Mat2, Mat2, Mat2]:
    """g = u * t * ubar with u upper-unipotent, t diagonal, ubar
    lower-unipotent, each in the corresponding sub-pattern of j.

    Exact and unique; raises NotFactorizable when g is not in j or its
    corner entries are not units.
    """
    if not j.member(g):
        raise NotFactorizable("element is not in the pattern group")
    h = g if j.conjugator is None else g.conjugate_by(j.conjugator)
    if valuation(h.a, j.p) != 0 or valuation(h.d, j.p) != 0:
        raise NotFactorizable("diagonal entries must be units")
    a = 1 / h.d
    x = h.b / h.d
    y = h.c / h.d
    u = Mat2.of(1, x, 0, 1)
    t = Mat2.diag(a, 1 / a)
    ubar = Mat2.of(1, 0, y, 1)
    assert u @ t @ ubar == h
    if j.conjugator is not None:
        c = j.conjugator
        u, t, ubar = (c @ u @ c.inv(), c @ t @ c.inv(), c @ ubar @ c.inv())
    return u, t, ubar


# ---------------------------------------------------------------------------
# residue arithmetic mod p^m


def _residue_mul(x, y, q):
    return (
        (x[0] * y[0] + x[1] * y[2]) % q,
        (x[0] * y[1] + x[1] * y[3]) % q,
        (x[2] * y[0] + x[3] * y[2]) % q,
        (x[2] * y[1] + x[3] * y[3]) % q,
    )


def _residue_inv(x, q):
    # adjugate; valid for det = 1
    return (x[3] % q, -x[1] % q, -x[2] % q, x[0] % q)


def _residue_inv_gl(x, p, m):
    q = p**m
    det = (x[0] * x[3] - x[1] * x[2]) % q
    di = pow(det, -1, q)
    return (x[3] * di % q, -x[1] * di % q, -x[2] * di % q, x[0] * di % q)


def lift_det1(x: tuple[int, int, int, int], p: int, m: int) -> Mat2:
    """Exact determinant-1 lift of a residue with det = 1 mod p^m.

    The canonical integer lift is corrected by a unit column scaling, so
    entry valuations up to level m are preserved.
    """
    g = Mat2.of(x[0], x[1], x[2], x[3])
    det = g.det()
    if det == 0:
        # perturb within the residue class to make the determinant nonzero
        g = Mat2.of(x[0] + p**m, x[1], x[2], x[3])
        det = g.det()
    if valuation(det, p) != 0:
        raise PatternError(f"residue {x} has non-unit determinant")
    return Mat2(g.a, g.b / det, g.c, g.d / det)


# ---------------------------------------------------------------------------
# box (Iwahori-coordinate) enumeration of pattern subgroups


def _unit_residues(p: int, level: int) -> list[int]:
    q = p**level
    return [a for a in range(1, q) if a % p != 0]


def pattern_boxes(
    pattern: ValuationPattern,
    upper_level: int,
    torus_level: int,
    lower_level: int,
):
    """Exact coset representatives u(b) t(a) ubar(c) of a factorizable
    pattern, one per coordinate box at the given levels.

    The factorization U * T * Ubar is an exact bijection onto the group, so
    the boxes partition it into cells of equal measure; sums of functions
    that are constant on the cells are computed exactly as box averages.
    """
    if not pattern.is_factorizable():
        raise PatternError("pattern is not upper/diagonal/lower factorizable")
    p = pattern.p
    b12, b21 = pattern.bounds[1], pattern.bounds[2]
    ups = [
        Fraction(p) ** int(b12) * j for j in range(p ** max(0, upper_level - int(b12)))
    ]
    los = [
        Fraction(p) ** int(b21) * j for j in range(p ** max(0, lower_level - int(b21)))
    ]
    units = _unit_residues(p, max(1, torus_level))
    for b in ups:
        ub = Mat2.of(1, b, 0, 1)
        for a in units:
            t = Mat2.diag(a, Fraction(1, a))
            ut = ub @ t
            for c in los:
                yield ut @ Mat2.of(1, 0, c, 1)


def pattern_box_count(
    pattern: ValuationPattern, upper_level: int, torus_level: int, lower_level: int
) -> int:
    p = pattern.p
    b12, b21 = pattern.bounds[1], pattern.bounds[2]
    tl = max(1, torus_level)
    return (
        p ** max(0, upper_level - int(b12))
        * (p**tl - p ** (tl - 1))
        * p ** max(0, lower_level - int(b21))
    )


def pattern_index(sub: ValuationPattern, sup: ValuationPattern) -> int:
    """[sup : sub] for factorizable plain patterns with full unit torus."""
    if not (sub.is_factorizable() and sup.is_factorizable()):
        raise PatternError("index formula needs factorizable patterns")
    d12 = int(sub.bounds[1]) - int(sup.bounds[1])
    d21 = int(sub.bounds[2]) - int(sup.bounds[2])
    if d12 < 0 or d21 < 0:
        raise PatternError("sub is not contained in sup")
    return sub.p ** (d12 + d21)


def sample_element(pattern: ValuationPattern, rng, spread: int = 2) -> Mat2:
    """Seeded exact random element of the pattern group."""
    p = pattern.p
    if pattern.conjugator is not None:
        base = ValuationPattern(p, pattern.bounds, pattern.diag_units)
        h = sample_element(base, rng, spread)
        c = pattern.conjugator
        return c @ h @ c.inv()
    if pattern.is_factorizable():
        b = c = Fraction(0)
        if pattern.bounds[1] < INF:
            b = Fraction(p) ** int(pattern.bounds[1]) * rng.randint(0, p**spread - 1)
        if pattern.bounds[2] < INF:
            c = Fraction(p) ** int(pattern.bounds[2]) * rng.randint(0, p**spread - 1)
        a = rng.choice(_unit_residues(p, spread))
        return Mat2.of(1, b, 0, 1) @ Mat2.diag(a, Fraction(1, a)) @ Mat2.of(1, 0, c, 1)
    # full SL2(Zp)-style group: random word in elementary generators
    g = Mat2.identity()
    for _ in range(6):
        kind = rng.randrange(3)
        if kind == 0:
            g = g @ Mat2.of(1, rng.randint(-p**spread, p**spread), 0, 1)
        elif kind == 1:
            g = g @ Mat2.of(1, 0, rng.randint(-p**spread, p**spread), 1)
        else:
            a = rng.choice(_unit_residues(p, spread))
            g = g @ Mat2.diag(a, Fraction(1, a))
    return g


# ---------------------------------------------------------------------------
# finite congruence quotients


def _torus_generator_units(p: int, m: int) -> list[int]:
    if p == 2:
        if m == 1:
            return []
        return [2**m - 1, 5 % 2**m]
    from .characters import least_primitive_root

    return [least_primitive_root(p, m)]


def pattern_generators(pattern: ValuationPattern, m: int) -> list[tuple]:
    """Residues generating the level-m image of the pattern group."""
    p, q = pattern.p, pattern.p**m
    if pattern.is_plain() and pattern.bounds == (0, 0, 0, 0) and not any(
        pattern.diag_units
    ):
        return [(1, 1, 0, 1), (1, 0, 1, 1)]
    if pattern.is_plain() and pattern.is_integral():
        gens = []
        b12, b21 = int(pattern.bounds[1]), int(pattern.bounds[2])
        if pattern.bounds[1] < INF and b12 < m:
            gens.append((1, p**b12 % q, 0, 1))
        if pattern.bounds[2] < INF and b21 < m:
            gens.append((1, 0, p**b21 % q, 1))
        for u in _torus_generator_units(p, m):
            gens.append((u % q, 0, 0, pow(u, -1, q)))
        return gens
    if pattern.conjugator is not None:
        c = pattern.conjugator
        if c.is_integral(p) and valuation(c.det(), p) == 0:
            base = ValuationPattern(p, pattern.bounds, pattern.diag_units)
            cr = reduce_mod(c, p, m)
            ci = _residue_inv_gl(cr, p, m)
            return [
                _residue_mul(_residue_mul(cr, g, q), ci, q)
                for g in pattern_generators(base, m)
            ]
    raise PatternError("no generator recipe for this pattern")


class FiniteQuotient:
    """The level-m image of an ambient pattern group, fully enumerated.

    For the full SL2(Z_p) pattern this is SL2(Z/p^m), whose order
    p^(3m) (1 - p^-2) is verified at construction.
    """

    def __init__(self, p: int, m: int, ambient: ValuationPattern | None = None):
        self.p, self.m, self.q = p, m, p**m
        self.ambient = ambient if ambient is not None else sl2_zp(p)
        if not self.ambient.is_plain():
            raise PatternError("ambient pattern must be plain (chart first)")
        self.elements = self._enumerate()
        self._index = {x: i for i, x in enumerate(self.elements)}
        if self.ambient.bounds == (0, 0, 0, 0) and not any(self.ambient.diag_units):
            expected = self.q**3 - self.q**3 // (p * p)
            assert len(self.elements) == expected
        self._classes = None

    # -- construction ----------------------------------------------------

    def _enumerate(self) -> tuple:
        p, m, q = self.p, self.m, self.q
        amb = self.ambient
        if amb.is_factorizable():
            if int(amb.bounds[1]) >= 0 and int(amb.bounds[2]) >= 0:
                out = set()
                for g in pattern_boxes(amb, m, m, m):
                    out.add(reduce_mod(g, p, m))
                return tuple(sorted(out))
            raise PatternError("cannot enumerate a non-integral pattern")
        if amb.bounds != (0, 0, 0, 0) or any(amb.diag_units):
            raise PatternError("unsupported ambient pattern")
        if q**3 > 4_000_000:
            raise PatternError(f"quotient at p={p}, m={m} exceeds the size budget")
        out = []
        for a in range(q):
            for b in range(q):
                for c in range(q):
                    r = (1 + b * c) % q
                    if a == 0:
                        if r % q == 0:
                            out.extend((a, b, c, d) for d in range(q))
                        continue
                    va = 0
                    aa = a
                    while aa % p == 0:
                        aa //= p
                        va += 1
                    if va == 0:
                        out.append((a, b, c, r * pow(a, -1, q) % q))
                        continue
                    if r % p**va != 0:
                        continue
                    qq = q // p**va
                    d0 = (r // p**va) * pow(aa, -1, qq) % qq
                    out.extend((a, b, c, d0 + t * qq) for t in range(p**va))
        return tuple(sorted((a, b, c, d) for (a, b, c, d) in out))

    # -- group operations -------------------------------------------------

    def mul(self, x, y):
        return _residue_mul(x, y, self.q)

    def inv(self, x):
        return _residue_inv(x, self.q)

    def index_of(self, x) -> int:
        return self._index[x]

    def __contains__(self, x) -> bool:
        return x in self._index

    def __len__(self) -> int:
        return len(self.elements)

    def reduce(self, g: Mat2):
        return reduce_mod(g, self.p, self.m)

    def generators(self) -> list[tuple]:
        return pattern_generators(self.ambient, self.m)

    # -- conjugacy classes -------------------------------------------------

    @property
    def classes(self) -> list[tuple]:
        """Conjugacy classes as sorted tuples, canonically ordered."""
        if self._classes is None:
            gens = self.generators()
            gens = gens + [self.inv(g) for g in gens]
            seen = set()
            classes = []
            for x in self.elements:
                if x in seen:
                    continue
                orbit = {x}
                frontier = [x]
                while frontier:
                    y = frontier.pop()
                    for g in gens:
                        z = self.mul(self.mul(g, y), self.inv(g))
                        if z not in orbit:
                            orbit.add(z)
                            frontier.append(z)
                seen |= orbit
                classes.append(tuple(sorted(orbit)))
            classes.sort(key=lambda c: (len(c), c[0]))
            self._classes = classes
            self._class_of = {x: i for i, c in enumerate(classes) for x in c}
        return self._classes

    def class_of(self, x) -> int:
        self.classes
        return self._class_of[x]

    def subgroup_image(self, pattern: ValuationPattern) -> frozenset:
        """Level-m image of a pattern subgroup, by residue membership."""
        return frozenset(x for x in self.elements if pattern.residue_member(x, self.m))


@lru_cache(maxsize=None)
def quotient(p: int, m: int, ambient_key=None) -> FiniteQuotient:
    if ambient_key is None:
        return FiniteQuotient(p, m)
    pp, bounds, units, conj = ambient_key
    return FiniteQuotient(p, m, ValuationPattern(pp, bounds, units, conj))


# ---------------------------------------------------------------------------
# cosets and double cosets (generator BFS over residues; no enumeration of
# the ambient group, so level-stability checks at m+1 stay cheap)


def coset_reps(
    ambient: ValuationPattern, sub: ValuationPattern, m: int
) -> list[tuple]:
    """Representatives of (ambient / sub) at level m."""
    p, q = ambient.p, ambient.p**m
    gens = pattern_generators(ambient, m)
    gens = gens + [_residue_inv(g, q) for g in gens]
    reps: list[tuple] = [(1, 0, 0, 1)]

    def known(x):
        return any(
            sub.residue_member(_residue_mul(_residue_inv(r, q), x, q), m)
            for r in reps
        )

    frontier = list(reps)
    while frontier:
        x = frontier.pop()
        for g in gens:
            y = _residue_mul(g, x, q)
            if not known(y):
                reps.append(y)
                frontier.append(y)
    return sorted(reps)


def double_coset_orbits(
    h1: ValuationPattern,
    ambient: ValuationPattern,
    h2: ValuationPattern,
    m: int,
) -> list[tuple]:
    """Representatives of H1 \\ ambient / H2 at level m, one per H1-orbit
    on the coset space ambient / H2."""
    p, q = ambient.p, ambient.p**m
    cosets = coset_reps(ambient, h2, m)

    def find(x):
        for i, r in enumerate(cosets):
            if h2.residue_member(_residue_mul(_residue_inv(r, q), x, q), m):
                return i
        raise AssertionError("coset not found")

    gens1 = pattern_generators(h1, m)
    gens1 = gens1 + [_residue_inv(g, q) for g in gens1]
    seen = set()
    reps = []
    for i, r in enumerate(cosets):
        if i in seen:
            continue
        orbit = {i}
        frontier = [r]
        while frontier:
            x = frontier.pop()
            for g in gens1:
                j = find(_residue_mul(g, x, q))
                if j not in orbit:
                    orbit.add(j)
                    frontier.append(cosets[j])
        seen |= orbit
        reps.append(r)
    return sorted(reps)


def double_cosets(
    h1: ValuationPattern,
    ambient: ValuationPattern,
    h2: ValuationPattern,
    m: int,
) -> list[tuple]:
    """Exact H1 \\ ambient / H2 representatives at level m.

    The count is recomputed at level m+1; a mismatch raises UnstableLevel.
    """
    reps = double_coset_orbits(h1, ambient, h2, m)
    check = double_coset_orbits(h1, ambient, h2, m + 1)
    if len(reps) != len(check):
        raise UnstableLevel(
            f"double coset count changed between level {m} ({len(reps)}) "
            f"and level {m + 1} ({len(check)})"
        )
    return reps
