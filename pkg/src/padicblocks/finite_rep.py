"""Exact complex character theory on finite congruence quotients.

Every multiplicity the block pipeline needs reduces to inner products of
induced characters, plus one extra linear functional (a Hecke-twisted trace)
when the induced generator has two constituents; no character tables are
computed here.  Values are exact cyclotomics.

Haar sums over pattern subgroups are evaluated as box averages in Iwahori
coordinates (see pattern_boxes); conjugated factors request finer coordinate
resolutions, so sums stay exact without enumerating deep quotients.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .cyclotomic import Cyclotomic, NonIntegral, root_sum
from .padic import Mat2, valuation
from .patterns import (
    FiniteQuotient,
    UnstableLevel,
    ValuationPattern,
    coset_reps,
    double_coset_orbits,
    iwahori,
    lift_det1,
    pattern_boxes,
    quotient,
)
from .characters import PrincipalSeriesType, SmoothCharacter, build_type


@dataclass(frozen=True)
class ClassFunction:
    quot: FiniteQuotient
    values: tuple[Cyclotomic, ...]

    def value_at_class(self, i: int) -> Cyclotomic:
        return self.values[i]

    def value(self, x: tuple) -> Cyclotomic:
        return self.values[self.quot.class_of(x)]

    def value_exact(self, g: Mat2) -> Cyclotomic:
        return self.value(self.quot.reduce(g))

    def degree(self) -> Cyclotomic:
        return self.value((1, 0, 0, 1))

    def __add__(self, other: "ClassFunction") -> "ClassFunction":
        assert self.quot is other.quot
        return ClassFunction(
            self.quot, tuple(a + b for a, b in zip(self.values, other.values))
        )

    def __sub__(self, other: "ClassFunction") -> "ClassFunction":
        assert self.quot is other.quot
        return ClassFunction(
            self.quot, tuple(a - b for a, b in zip(self.values, other.values))
        )

    def scale(self, x) -> "ClassFunction":
        return ClassFunction(self.quot, tuple(v.scale(x) for v in self.values))

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, ClassFunction)
            and self.quot is other.quot
            and all(a == b for a, b in zip(self.values, other.values))
        )

    def __hash__(self):
        return hash((id(self.quot), self.values))


def conjugacy_classes(quot: FiniteQuotient) -> list[tuple]:
    """Partition of the quotient into conjugacy classes (canonical order)."""
    return quot.classes


def trivial_character(quot: FiniteQuotient) -> ClassFunction:
    one = Cyclotomic.rational(1)
    return ClassFunction(quot, tuple(one for _ in quot.classes))


def induced_character(
    quot: FiniteQuotient,
    sub: ValuationPattern,
    exp_of: "callable | None" = None,
    order: int = 1,
) -> ClassFunction:
    """Character of the induction to the quotient of a linear character of
    the image of ``sub``.

    exp_of maps a residue to the exponent of its value as a power of
    zeta_order (None = trivial character).  The value on a class C is
    (|Q| / (|H| |C|)) * sum over C intersect H of the character.
    """
    image = quot.subgroup_image(sub)
    values = []
    for cls in quot.classes:
        exps = [0 if exp_of is None else exp_of(y) for y in cls if y in image]
        val = root_sum(order, exps).scale(Fraction(len(quot), len(image) * len(cls)))
        values.append(val)
    cf = ClassFunction(quot, tuple(values))
    assert cf.degree().as_fraction() == Fraction(len(quot), len(image))
    return cf


def induced_type_character(quot: FiniteQuotient, t: PrincipalSeriesType) -> ClassFunction:
    return induced_character(
        quot,
        t.pattern,
        lambda y: t.rho_exp_residue(y, quot.m),
        t.chi.order,
    )


def inner_product(f1: ClassFunction, f2: ClassFunction) -> int:
    """(1/|Q|) sum |C| f1(C) conj(f2(C)); must be a rational integer."""
    if f1.quot is not f2.quot:
        raise ValueError("class functions live on different quotients")
    quot = f1.quot
    total = Cyclotomic.zero()
    for i, cls in enumerate(quot.classes):
        total = total + (f1.values[i] * f2.values[i].conj()).scale(len(cls))
    val = total.scale(Fraction(1, len(quot)))
    if not val.is_rational():
        raise NonIntegral(f"inner product {val} is not rational")
    x = val.as_fraction()
    if x.denominator != 1 or x < 0:
        raise NonIntegral(f"inner product {x} is not a nonnegative integer")
    return int(x)


def pairing(f1: ClassFunction, f2: ClassFunction) -> Cyclotomic:
    """Like inner_product but without the integrality requirement."""
    quot = f1.quot
    total = Cyclotomic.zero()
    for i, cls in enumerate(quot.classes):
        total = total + (f1.values[i] * f2.values[i].conj()).scale(len(cls))
    return total.scale(Fraction(1, len(quot)))


# ---------------------------------------------------------------------------
# Hecke-twisted trace: the second functional on a two-constituent induction


def twisted_trace(
    quot: FiniteQuotient, t: PrincipalSeriesType, w: Mat2
) -> ClassFunction:
    """Trace of (intertwining operator for the double coset JwJ) composed
    with the action, as a class function: tau = mu_A chi_A + mu_B chi_B on
    the two constituents A, B of the induced character, with distinct
    Hecke eigenvalues mu; tau vanishes on every other irreducible.

    Computed as tau(g) = sum over right cosets Jx of theta(x g x^-1) where
    theta(awb) = rho(a) rho(b) on JwJ and 0 elsewhere.
    """
    m, q = quot.m, quot.q
    image = quot.subgroup_image(t.pattern)
    wr = quot.reduce(w)
    order = max(t.chi.order, 1)
    theta: dict[tuple, int] = {}
    for a in image:
        ea = t.rho_exp_residue(a, m)
        awr = quot.mul(a, wr)
        for b in image:
            u = quot.mul(awr, b)
            e = (ea + t.rho_exp_residue(b, m)) % order
            if theta.setdefault(u, e) != e:
                raise UnstableLevel(
                    f"inconsistent double-coset weights at level {m}"
                )
    rights = [quot.inv(r) for r in coset_reps(quot.ambient, t.pattern, m)]
    values = []
    for cls in quot.classes:
        g = cls[0]
        exps = []
        for x in rights:
            u = quot.mul(quot.mul(x, g), quot.inv(x))
            e = theta.get(u)
            if e is not None:
                exps.append(e)
        values.append(root_sum(order, exps))
    return ClassFunction(quot, tuple(values))


# ---------------------------------------------------------------------------
# Mackey dimension counts


def _types_agree_on_residues(
    t1: PrincipalSeriesType, t2g: PrincipalSeriesType, residues, m: int
) -> bool:
    import math

    n1, n2 = t1.chi.order, t2g.chi.order
    lcm = math.lcm(max(n1, 1), max(n2, 1))
    for x in residues:
        e1 = t1.rho_exp_residue(x, m) * (lcm // n1) % lcm
        e2 = t2g.rho_exp_residue(x, m) * (lcm // n2) % lcm
        if e1 != e2:
            return False
    return True


def mackey_dim_hom(
    t1: PrincipalSeriesType,
    t2: PrincipalSeriesType,
    ambient: ValuationPattern,
    m: int,
) -> int:
    """dim Hom of the two induced characters, by the double-coset sum of
    0/1 intertwining terms; equals the inner product of the induced
    characters (the acceptance suite asserts that equality).

    The double-coset count is verified stable from level m to m+1; the
    character agreements are evaluated at level m, which is exact for the
    integral coset representatives once m reaches the conductors.
    """
    if len(double_coset_orbits(t1.pattern, ambient, t2.pattern, m)) != len(
        double_coset_orbits(t1.pattern, ambient, t2.pattern, m + 1)
    ):
        raise UnstableLevel(
            f"double coset count changed between levels {m} and {m + 1}"
        )
    reps = double_coset_orbits(t1.pattern, ambient, t2.pattern, m)
    count = 0
    image = _pattern_image_residues(t1.pattern, m)
    for g in reps:
        glift = lift_det1(g, ambient.p, m)
        t2g = t2.conjugate(glift)
        inter = [x for x in image if t2g.pattern.residue_member(x, m)]
        if _types_agree_on_residues(t1, t2g, inter, m):
            count += 1
    return count


def _pattern_image_residues(pattern: ValuationPattern, m: int) -> set:
    from .padic import reduce_mod

    if pattern.is_factorizable():
        out = set()
        for g in pattern_boxes(pattern, m, m, m):
            out.add(reduce_mod(g, pattern.p, m))
        return out
    return set(quotient(pattern.p, m).subgroup_image(pattern))


# ---------------------------------------------------------------------------
# charts at the two vertices and the edge


def transported_type(t: PrincipalSeriesType, which: str) -> PrincipalSeriesType:
    """The type viewed in the standard chart of the chosen vertex."""
    p = t.chi.p
    if which == "v0":
        return t
    if which == "v1":
        sigma = Mat2.diag(1, p)
        return t.conjugate(sigma.inv())
    if which == "edge":
        return t
    raise ValueError(f"unknown simplex {which}")


def vertex_reflection(p: int, which: str) -> Mat2:
    """Integral lift of the Weyl reflection inside the vertex stabilizer,
    written in that vertex's standard chart."""
    from .tree import reflection0, reflection1

    if which == "v0":
        return reflection0(p)
    if which == "v1":
        sigma = Mat2.diag(1, p)
        return sigma.inv() @ reflection1(p) @ sigma
    raise ValueError(f"unknown vertex {which}")


def simplex_quotient(p: int, m: int, which: str) -> FiniteQuotient:
    """Level-m quotient of the simplex stabilizer in its standard chart."""
    if which in ("v0", "v1"):
        return quotient(p, m)
    if which == "edge":
        return quotient(p, m, iwahori(p).key())
    raise ValueError(f"unknown simplex {which}")


# ---------------------------------------------------------------------------
# block generators and constituent counting


def block_generators(
    which: str, chi: SmoothCharacter, m: int
) -> list[tuple[str, ClassFunction]]:
    """The distinct induced characters generating the block at the simplex.

    At the edge there are two (the type and its Weyl conjugate) when
    chi^2 != 1 and one otherwise; at a vertex the two coincide and there is
    always exactly one.
    """
    p = p_of(chi)
    quot = simplex_quotient(p, m, which)
    t = build_type(chi)
    tt = transported_type(t, which)
    main = induced_type_character(quot, tt)
    if which in ("v0", "v1"):
        return [(chi.label(), main)]
    tw = transported_type(build_type(chi.inverse()), which)
    other = induced_type_character(quot, tw)
    if main == other:
        return [(chi.label(), main)]
    return [(chi.label(), main), (chi.inverse().label(), other)]


def p_of(chi: SmoothCharacter) -> int:
    return chi.p


def constituent_count(which: str, chi: SmoothCharacter, m: int) -> int:
    """Number of irreducible constituents of the induced block generator at
    a vertex: the self inner product, which is 1 or 2 with multiplicity-one
    constituents in both cases."""
    p = chi.p
    quot = simplex_quotient(p, m, which)
    tt = transported_type(build_type(chi), which)
    f = induced_type_character(quot, tt)
    n = inner_product(f, f)
    if n not in (1, 2):
        raise NonIntegral(f"unexpected self inner product {n}")
    return n


@dataclass(frozen=True)
class BlockFunctionals:
    """Linear functionals spanning the dual of the block constituents at a
    vertex: the induced character, plus the twisted trace when there are two
    constituents (their Gram matrix is checked invertible)."""

    which: str
    quot: FiniteQuotient
    generator: ClassFunction
    functionals: tuple[ClassFunction, ...]

    def vector(self, f: ClassFunction) -> tuple[Cyclotomic, ...]:
        return tuple(pairing(f, func) for func in self.functionals)


def block_functionals(which: str, chi: SmoothCharacter, m: int) -> BlockFunctionals:
    p = chi.p
    quot = simplex_quotient(p, m, which)
    tt = transported_type(build_type(chi), which)
    gen = induced_type_character(quot, tt)
    n = inner_product(gen, gen)
    if n == 1:
        return BlockFunctionals(which, quot, gen, (gen,))
    tau = twisted_trace(quot, tt, vertex_reflection(p, which))
    gram = (
        pairing(gen, gen),
        pairing(gen, tau),
        pairing(tau, gen),
        pairing(tau, tau),
    )
    det = gram[0] * gram[3] - gram[1] * gram[2]
    if det.is_zero():
        raise UnstableLevel("twisted trace does not separate the constituents")
    return BlockFunctionals(which, quot, gen, (gen, tau))


# ---------------------------------------------------------------------------
# exact Haar sums over pattern subgroups (box averages)


def box_average(
    pattern: ValuationPattern,
    levels: tuple[int, int, int],
    f1,
    f2,
) -> Cyclotomic:
    """(1/|H|) sum over H of f1(x) * conj(f2(x)) for functions constant on
    the coordinate boxes at the given (upper, torus, lower) levels."""
    total = Cyclotomic.zero()
    count = 0
    for x in pattern_boxes(pattern, *levels):
        total = total + f1(x) * f2(x).conj()
        count += 1
    return total.scale(Fraction(1, count))


def conjugation_levels(g: Mat2, p: int, depth: int, plain_depth: int) -> tuple[int, int, int]:
    """Coordinate levels so that both x mod p^plain_depth and
    (g^-1 x g) mod p^depth are constant on boxes, for monomial g."""
    if not g.is_monomial():
        raise ValueError("levels formula requires a monomial conjugator")
    if g.b == 0:
        s = int(valuation(g.a, p) - valuation(g.d, p))
    else:
        s = int(valuation(g.b, p) - valuation(g.c, p))
    return (
        max(depth + s, plain_depth),
        max(depth, plain_depth),
        max(depth - s, plain_depth),
    )


def restricted_class_value(cf: ClassFunction):
    """Class function on a quotient as an exact-matrix evaluator."""

    def f(x: Mat2) -> Cyclotomic:
        return cf.value(cf.quot.reduce(x))

    return f


def conjugated_class_value(cf: ClassFunction, g: Mat2):
    """x -> cf(g^-1 x g), evaluated exactly."""
    gi = g.inv()

    def f(x: Mat2) -> Cyclotomic:
        return cf.value(cf.quot.reduce(gi @ x @ g))

    return f
