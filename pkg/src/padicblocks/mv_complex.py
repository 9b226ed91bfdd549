"""Two-term complexes of induced modules on finite subtrees.

The module attached to an edge e' = u.e (u a determinant-1 chart) is the
induction of the type character from J^u to the edge stabilizer; at a
vertex it is the further induction to the vertex stabilizer.  A global
basis indexes both: pairs (edge, coset of L/J) transported by the charts.
In that basis the differential (face 0 minus face 1) is a signed inclusion
of slots, while group elements act by monomial matrices twisted by exact
character cocycles.

Homology is computed by exact integer rank; block-multiplicity statements
are delegated to inner products and box averages from finite_rep.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .cyclotomic import Cyclotomic
from .padic import Mat2, valuation
from .patterns import (
    PatternError,
    ValuationPattern,
    edge_chart,
    iwahori,
    sl2_zp,
)
from .characters import PrincipalSeriesType, SmoothCharacter, build_type
from .finite_rep import (
    BlockFunctionals,
    block_functionals,
    box_average,
    conjugated_class_value,
    conjugation_levels,
    induced_type_character,
    pairing,
    restricted_class_value,
    simplex_quotient,
    transported_type,
)
from .tree import (
    SubtreeRegion,
    TreeEdge,
    TreeVertex,
    act,
    apartment_chart,
    make_edge,
    neighbors,
    standard_edge,
)


class IncompatibleAssignment(ValueError):
    """Module data fails the equivariance spot checks on the region."""


def sl2_edge_chart(e: TreeEdge) -> Mat2:
    """Determinant-1 element moving the standard edge to e."""
    c = edge_chart(e)
    d = c.det()
    v = valuation(d, e.p)
    assert v == int(v) and int(v) % 2 == 0
    c = c @ Mat2.diag(1, Fraction(e.p) ** int(v) / d)
    c = c.scale(Fraction(1, e.p) ** (int(v) // 2))
    assert c.det() == 1 and act(c, standard_edge(e.p)) == e
    return c


def type_coset_reps(t: PrincipalSeriesType) -> list[Mat2]:
    """Coset representatives of (edge stabilizer) / J for the type's level:
    u(b) ubar(p c) over b mod p^floor(n/2), c mod p^(ceil(n/2)-1)."""
    p = t.chi.p
    n = t.chi.conductor
    fplus, fminus = n // 2, (n + 1) // 2
    reps = []
    for b in range(p**fplus):
        for c in range(p ** (fminus - 1)):
            reps.append(Mat2.of(1, b, 0, 1) @ Mat2.of(1, 0, p * c, 1))
    return reps


@dataclass(frozen=True)
class LanSummand:
    """One slice of the evaluation of the extended module at a simplex."""

    conjugator: Mat2
    inducing: ValuationPattern
    dimension: int


def lan_evaluate(
    chi: SmoothCharacter, source: str, target: str
) -> list[LanSummand]:
    """Direct-sum description of the extension of the type from the
    standard edge, evaluated at the standard edge or one of its vertices.

    In SL2 mode the two vertices lie in different orbits, so every
    evaluation is a single summand.
    """
    if source != "edge":
        raise ValueError("modules are induced from the standard edge")
    t = build_type(chi)
    p = t.chi.p
    n = t.chi.conductor
    if target == "edge":
        return [LanSummand(Mat2.identity(), t.pattern, p ** (n - 1))]
    if target in ("v0", "v1"):
        tt = transported_type(t, target)
        return [LanSummand(Mat2.identity(), tt.pattern, (p + 1) * p ** (n - 1))]
    raise ValueError(f"unknown target {target}")


# ---------------------------------------------------------------------------
# region complexes


@dataclass
class TwoTermComplex:
    """Degree-1 (edges) to degree-0 (vertices) complex with global basis."""

    region: SubtreeRegion
    t: PrincipalSeriesType
    charts: dict[TreeEdge, Mat2]
    reps: list[Mat2]
    deg1: list[tuple[TreeEdge, int]]
    deg0: list[tuple[TreeVertex, TreeEdge, int]]
    deg1_index: dict
    deg0_index: dict

    def differential(self) -> list[list[int]]:
        """Rows deg0, columns deg1, entries in {0, +1, -1} (face 0 minus
        face 1; face 0 is the type-0 endpoint)."""
        rows = [[0] * len(self.deg1) for _ in self.deg0]
        for j, (e, r) in enumerate(self.deg1):
            rows[self.deg0_index[(e.v0, e, r)]][j] += 1
            rows[self.deg0_index[(e.v1, e, r)]][j] -= 1
        return rows

    def homology_dims(self) -> tuple[int, int]:
        """(dim H1, dim H0) by exact rank."""
        rank = integer_rank(self.differential())
        return (len(self.deg1) - rank, len(self.deg0) - rank)

    def action_matrices(self, g: Mat2):
        """Monomial action of g on both degrees: lists of
        (target_index, Cyclotomic) per basis column.

        Raises IncompatibleAssignment if g moves a slot out of the basis.
        """
        order = max(self.t.chi.order, 1)

        def image_of(e: TreeEdge, r: int):
            e2 = act(g, e)
            if e2 not in self.charts:
                raise IncompatibleAssignment(f"{g} moves an edge off the region")
            y = g @ self.charts[e] @ self.reps[r]
            for r2 in range(len(self.reps)):
                j = (self.charts[e2] @ self.reps[r2]).inv() @ y
                if self.t.pattern.member(j):
                    return e2, r2, Cyclotomic.root(order, self.t.rho_exp(j))
            raise IncompatibleAssignment("coset alignment failed")

        a1 = []
        for e, r in self.deg1:
            e2, r2, coeff = image_of(e, r)
            a1.append((self.deg1_index[(e2, r2)], coeff))
        a0 = []
        for v, e, r in self.deg0:
            e2, r2, coeff = image_of(e, r)
            a0.append((self.deg0_index[(act(g, v), e2, r2)], coeff))
        return a1, a0

    def check_equivariance(self, g: Mat2) -> bool:
        """action . differential == differential . action, exactly."""
        d = self.differential()
        a1, a0 = self.action_matrices(g)
        n1, n0 = len(self.deg1), len(self.deg0)
        for j in range(n1):
            jj, coeff = a1[j]
            lhs = {}
            for i in range(n0):
                if d[i][jj]:
                    lhs[i] = coeff.scale(d[i][jj])
            rhs = {}
            for i in range(n0):
                if d[i][j]:
                    ii, c0 = a0[i]
                    rhs[ii] = c0.scale(d[i][j])
            if set(lhs) != set(rhs) or any(lhs[i] != rhs[i] for i in lhs):
                return False
        return True


def integer_rank(rows: list[list[int]]) -> int:
    """Exact rank by fraction-free Gaussian elimination."""
    mat = [[Fraction(x) for x in row] for row in rows]
    rank, col = 0, 0
    nrows = len(mat)
    ncols = len(mat[0]) if mat else 0
    for col in range(ncols):
        piv = next((i for i in range(rank, nrows) if mat[i][col]), None)
        if piv is None:
            continue
        mat[rank], mat[piv] = mat[piv], mat[rank]
        inv = 1 / mat[rank][col]
        mat[rank] = [x * inv for x in mat[rank]]
        for i in range(nrows):
            if i != rank and mat[i][col]:
                f = mat[i][col]
                mat[i] = [a - f * b for a, b in zip(mat[i], mat[rank])]
        rank += 1
    return rank


def assemble_complex(
    chi: SmoothCharacter, region: SubtreeRegion, spot_checks: list[Mat2] = ()
) -> TwoTermComplex:
    """The two-term complex of the type module extended over the region.

    Vertex slots cover all edges at the region's vertices (the vertex
    module does not depend on the region); spot_checks are group elements
    preserving the region on which differential equivariance is enforced.
    """
    t = build_type(chi)
    universe = set(region.edges)
    for v in region.vertices:
        for w in neighbors(v):
            universe.add(make_edge(v, w))
    charts = {e: sl2_edge_chart(e) for e in universe}
    reps = type_coset_reps(t)
    deg1 = [(e, r) for e in sorted(region.edges) for r in range(len(reps))]
    deg0 = [
        (v, e, r)
        for v in sorted(region.vertices)
        for e in sorted(u for u in universe if v in u.faces())
        for r in range(len(reps))
    ]
    cx = TwoTermComplex(
        region,
        t,
        charts,
        reps,
        deg1,
        deg0,
        {er: i for i, er in enumerate(deg1)},
        {ver: i for i, ver in enumerate(deg0)},
    )
    for g in spot_checks:
        if not cx.check_equivariance(g):
            raise IncompatibleAssignment(f"differential not equivariant under {g}")
    return cx


def subcomplex_inclusion_report(
    chi: SmoothCharacter, outer: SubtreeRegion, inner: SubtreeRegion
) -> dict:
    """Degreewise-injective inclusion of the inner region's complex with
    quotient supported exactly off the inner region."""
    big = assemble_complex(chi, outer)
    small = assemble_complex(chi, inner)
    deg1_in = set(small.deg1) <= set(big.deg1)
    quotient_support = {e for (e, _) in set(big.deg1) - set(small.deg1)}
    off_inner = all(e not in inner.edges for e in quotient_support)
    return {
        "inclusion_injective": deg1_in,
        "quotient_supported_off_inner": off_inner,
        "status": "pass" if deg1_in and off_inner else "fail",
    }


# ---------------------------------------------------------------------------
# shell quotients of the edge filtration


def shell_conjugators(p: int, n: int) -> tuple[Mat2, Mat2]:
    """(g0, g1): apartment translates with g_i e at edge distance n+1 from
    e, paired so that e lies on the geodesic from vertex i to g_i e."""
    return apartment_chart(p, n + 1), apartment_chart(p, -(n + 1))


def filtration_quotient_report(chi: SmoothCharacter, n: int, m: int | None = None) -> dict:
    """The level-(n+1) shell of the edge filtration: for each vertex, the
    inducing subgroups of the degree-1 and degree-0 pieces agree as
    patterns, and the block multiplicity vectors of the two pieces agree,
    so the quotient complex is acyclic at multiplicity level."""
    p = chi.p
    g0, g1 = shell_conjugators(p, n)
    L = iwahori(p)
    out = {"chi": chi.label(), "shell": n, "sides": []}
    ok = True
    for which, g in (("v0", g0), ("v1", g1)):
        K = sl2_zp(p)
        sigma_inv = Mat2.identity() if which == "v0" else Mat2.diag(1, p).inv()
        Lc = L.conjugate(sigma_inv)
        gc = sigma_inv @ g @ sigma_inv.inv()
        lg = Lc.conjugate(gc)
        h_edge = Lc.intersect(lg)
        h_vertex = K.intersect(lg)
        identity_holds = h_edge.same_plain_form(h_vertex)
        proj = induce_project_vectors(chi, which, n + 1, m)
        ok = ok and identity_holds and proj["equal"]
        out["sides"].append(
            {
                "vertex": which,
                "pattern_identity": identity_holds,
                "inducing_bounds": [str(b) for b in h_edge.bounds],
                "multiplicity_vectors_equal": proj["equal"],
                "block_multiplicities": proj["edge_multiplicities"],
            }
        )
    out["status"] = "pass" if ok else "fail"
    return out


# ---------------------------------------------------------------------------
# project-then-induce versus induce-then-project


def induce_project_vectors(
    chi: SmoothCharacter, which: str, dist: int, m: int | None = None
) -> dict:
    """Block multiplicity vectors of (a) inducing the edge-block projection
    of the shell module to the vertex, and (b) projecting the vertex
    induction of the shell module; computed by exact pairings against the
    spanning block functionals and compared componentwise.
    """
    p = chi.p
    n = chi.conductor
    m_edge = max(n, 1)
    m_fun = max(n, 1) if m is None else m
    t = build_type(chi)
    g = apartment_chart(p, dist if which == "v0" else -dist)
    sigma_inv = Mat2.identity() if which == "v0" else Mat2.diag(1, p).inv()
    gc = sigma_inv @ g @ sigma_inv.inv()
    K = sl2_zp(p)
    Lc = iwahori(p).conjugate(sigma_inv)
    lg = Lc.conjugate(gc)
    h_b = K.intersect(lg)
    h_a = Lc.intersect(lg)

    # edge data in the vertex chart
    from .patterns import quotient as _quotient

    tt = transported_type(t, which)
    q_edge = _quotient(p, m_edge, Lc.key())
    chi_v = induced_type_character(q_edge, tt)
    gens = [(chi.label(), chi_v)]
    inv = chi.inverse()
    if inv != chi:
        tw = transported_type(build_type(inv), which)
        other = induced_type_character(q_edge, tw)
        if other != chi_v:
            gens.append((inv.label(), other))

    funcs = block_functionals(which, chi, m_fun)

    # (a) edge-block multiplicities of the shell module, then induce
    lv_a = conjugation_levels(gc, p, m_edge, m_edge)
    m_edge_mults = []
    for label, v_i in gens:
        val = box_average(
            h_a,
            lv_a,
            conjugated_class_value(chi_v, gc),
            restricted_class_value(v_i),
        )
        m_edge_mults.append((label, val.as_integer()))
    side_a = []
    for f in funcs.functionals:
        total = Cyclotomic.zero()
        for (label, mult), (_, v_i) in zip(m_edge_mults, gens):
            term = box_average(
                Lc,
                (max(m_edge, m_fun),) * 3,
                restricted_class_value(v_i),
                restricted_class_value(f),
            )
            total = total + term.scale(mult)
        side_a.append(total)

    # (b) induce the shell module to the vertex, then project
    lv_b = conjugation_levels(gc, p, m_edge, m_fun)
    side_b = []
    for f in funcs.functionals:
        val = box_average(
            h_b,
            lv_b,
            conjugated_class_value(chi_v, gc),
            restricted_class_value(f),
        )
        side_b.append(val)

    equal = all(a == b for a, b in zip(side_a, side_b))
    return {
        "chi": chi.label(),
        "vertex": which,
        "distance": dist,
        "edge_multiplicities": dict(m_edge_mults),
        "side_a": [repr(x) for x in side_a],
        "side_b": [repr(x) for x in side_b],
        "equal": equal,
        "status": "pass" if equal else "fail",
    }
