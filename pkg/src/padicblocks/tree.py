"""The Bruhat-Tits tree of SL2(Qp): vertices, edges, action, regions.

Vertices are canonical lattice forms, so the group action needs no tree
search and equality is O(1).  The standard apartment is the diagonal-torus
line; its k-th vertex is the class of diag(1, p^k), the distinguished edge
joins k = 0 and k = 1, and its pointwise stabilizer is the upper Iwahori
subgroup (integral above the diagonal, divisible by p below).

Face-map convention: d0 of an edge is its endpoint of orbit type 0 (even
relative position to the standard lattice), d1 the type-1 endpoint.  In SL2
mode the two types are distinct G-orbits, so the labels are G-equivariant.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .padic import (
    LatticeForm,
    Mat2,
    elementary_divisor_exponents,
    lattice_canonical,
    valuation,
)


@dataclass(frozen=True, order=True)
class TreeVertex:
    p: int
    lattice: LatticeForm

    def orbit_type(self) -> int:
        return self.lattice.orbit_type()

    def basis(self) -> Mat2:
        return self.lattice.basis(self.p)

    def label(self) -> str:
        return self.lattice.label()


@dataclass(frozen=True, order=True)
class TreeEdge:
    """Unordered adjacent pair, stored with the type-0 vertex first."""

    v0: TreeVertex
    v1: TreeVertex

    def __post_init__(self):
        if self.v0.orbit_type() != 0 or self.v1.orbit_type() != 1:
            raise ValueError("edge endpoints must have orbit types (0, 1)")
        if distance(self.v0, self.v1) != 1:
            raise ValueError("edge endpoints must be adjacent")

    @property
    def p(self) -> int:
        return self.v0.p

    def faces(self) -> tuple[TreeVertex, TreeVertex]:
        return (self.v0, self.v1)

    def vertex_set(self) -> frozenset[TreeVertex]:
        return frozenset((self.v0, self.v1))


def make_edge(v: TreeVertex, w: TreeVertex) -> TreeEdge:
    if v.orbit_type() == 0:
        return TreeEdge(v, w)
    return TreeEdge(w, v)


def vertex_from_basis(basis: Mat2, p: int) -> TreeVertex:
    return TreeVertex(p, lattice_canonical(basis, p))


def standard_vertex(p: int) -> TreeVertex:
    return vertex_from_basis(Mat2.identity(), p)


def apartment_vertex(p: int, k: int) -> TreeVertex:
    """k-th vertex of the standard apartment, the class of diag(1, p^k)."""
    return vertex_from_basis(Mat2.diag(1, Fraction(p) ** k), p)


def apartment_edge(p: int, k: int) -> TreeEdge:
    """Edge joining apartment vertices k and k+1."""
    return make_edge(apartment_vertex(p, k), apartment_vertex(p, k + 1))


def standard_edge(p: int) -> TreeEdge:
    return apartment_edge(p, 0)


def distance(v: TreeVertex, w: TreeVertex) -> int:
    return elementary_divisor_exponents(v.lattice, w.lattice, v.p)[0]


def neighbors(v: TreeVertex) -> list[TreeVertex]:
    """The p+1 adjacent vertices, in canonical (a, b, u) order.

    Adjacent classes correspond to the lines of L/pL: the index-p
    sublattices spanned by (p, 0), (u, 1) for u mod p together with the one
    spanned by (1, 0), (0, p), all transported by a basis of L.
    """
    p = v.p
    basis = v.basis()
    out = []
    for u in range(p):
        out.append(vertex_from_basis(basis @ Mat2.of(p, u, 0, 1), p))
    out.append(vertex_from_basis(basis @ Mat2.diag(1, p), p))
    return sorted(out)


def act(g: Mat2, s: TreeVertex | TreeEdge):
    """Canonical form of g.s; isometric, preserves orbit types in SL2 mode."""
    if isinstance(s, TreeVertex):
        return vertex_from_basis(g @ s.basis(), s.p)
    return make_edge(act(g, s.v0), act(g, s.v1))


def edge_distance(e: TreeEdge, f: TreeEdge) -> int:
    """0 iff equal; otherwise 1 + min vertex distance between endpoints."""
    if e == f:
        return 0
    return 1 + min(distance(v, w) for v in e.faces() for w in f.faces())


def vertex_edge_reach(v: TreeVertex, f: TreeEdge) -> int:
    """Min endpoint distance; f touches the ball B_n(v) iff reach <= n."""
    return min(distance(v, w) for w in f.faces())


# ---------------------------------------------------------------------------
# regions


@dataclass(frozen=True)
class SubtreeRegion:
    """Finite region of the tree: explicit vertex and edge sets, closed
    under taking faces of the edges."""

    vertices: frozenset[TreeVertex]
    edges: frozenset[TreeEdge]

    def __post_init__(self):
        for e in self.edges:
            if not e.vertex_set() <= self.vertices:
                raise ValueError("region is not closed under faces")


def _edges_within(vertices: set[TreeVertex]) -> frozenset[TreeEdge]:
    out = set()
    for v in vertices:
        for w in neighbors(v):
            if w in vertices:
                out.add(make_edge(v, w))
    return frozenset(out)


def ball(v: TreeVertex, n: int) -> SubtreeRegion:
    """B_n(v) with all edges between its vertices."""
    layer = {v}
    seen = {v}
    for _ in range(n):
        layer = {w for u in layer for w in neighbors(u)} - seen
        seen |= layer
    return SubtreeRegion(frozenset(seen), _edges_within(seen))


def ball_vertex_count(p: int, n: int) -> int:
    """Closed formula 1 + (p+1)(p^n - 1)/(p - 1)."""
    return 1 + (p + 1) * (p**n - 1) // (p - 1)


def half_tree(x: TreeVertex, e: TreeEdge, n: int) -> SubtreeRegion:
    """The component of x in X minus e, intersected with B_n(x)."""
    if x not in e.faces():
        raise ValueError("x must be a vertex of e")
    other = e.v1 if x == e.v0 else e.v0
    layer = {x}
    seen = {x}
    for _ in range(n):
        layer = {w for u in layer for w in neighbors(u) if w != other} - seen
        seen |= layer
    edges = {f for f in _edges_within(seen) if f != e}
    return SubtreeRegion(frozenset(seen), frozenset(edges))


def edge_neighborhood(x: TreeVertex | TreeEdge, n: int) -> SubtreeRegion:
    """Edges near x, with their faces.

    For an edge x: all edges at edge distance <= n (so n = 0 gives {x}).
    For a vertex x: all edges meeting B_n(x) (so n = 0 gives the p+1 edges
    at x); this is the K_x-stable shell family whose increments are single
    K_x-orbits.
    """
    if isinstance(x, TreeEdge):
        center = ball(x.v0, n + 1).vertices | ball(x.v1, n + 1).vertices
        edges = {f for f in _edges_within(set(center)) if edge_distance(x, f) <= n}
    else:
        center = ball(x, n + 1).vertices
        edges = {f for f in _edges_within(set(center)) if vertex_edge_reach(x, f) <= n}
    verts = frozenset(v for f in edges for v in f.faces())
    return SubtreeRegion(verts, frozenset(edges))


def single_edge_region(e: TreeEdge) -> SubtreeRegion:
    return SubtreeRegion(e.vertex_set(), frozenset((e,)))


# ---------------------------------------------------------------------------
# apartment charts and Weyl reflections


def reflection0(p: int) -> Mat2:
    """Reflection of the apartment at vertex 0: [[0, 1], [-1, 0]]."""
    return Mat2.of(0, 1, -1, 0)


def reflection1(p: int) -> Mat2:
    """Reflection of the apartment at vertex 1: [[0, -1/p], [p, 0]]."""
    return Mat2.of(0, Fraction(-1, p), p, 0)


def translation(p: int, k: int) -> Mat2:
    """diag(p^-k, p^k), translating the apartment index by 2k."""
    return Mat2.diag(Fraction(p) ** (-k), Fraction(p) ** k)


def apartment_chart(p: int, k: int) -> Mat2:
    """A monomial det-1 element moving the standard edge to apartment edge k."""
    if k % 2 == 0:
        return translation(p, k // 2)
    return translation(p, (k - 1) // 2) @ reflection1(p)


def orbit_reps_at_distance(p: int, n: int) -> tuple[Mat2, Mat2]:
    """(g0, g1) with g0.e, g1.e the apartment edges at edge distance n from
    the standard edge e, on the v1 side and the v0 side respectively.

    The two images represent the two G_e-orbits of edges at that distance;
    g0 pairs with the stabilizer of v0 (the geodesic from v0 to g0.e runs
    through e) and g1 with the stabilizer of v1.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    return apartment_chart(p, n), apartment_chart(p, -n)


def apartment_position(e: TreeEdge) -> int | None:
    """Index k with e = apartment_edge(k), or None if e is off the line."""
    i0 = _apartment_index(e.v0)
    i1 = _apartment_index(e.v1)
    if i0 is None or i1 is None:
        return None
    return min(i0, i1)


def _apartment_index(v: TreeVertex):
    for k in range(-64, 64):
        if apartment_vertex(v.p, k) == v:
            return k
    return None


def signed_edge_position(e: TreeEdge, f: TreeEdge) -> tuple[int, int]:
    """G_e-orbit invariant of f: (edge distance, side).

    side is +1 if f lies in the component of v1, -1 for v0, 0 for f = e.
    Elements fixing e pointwise preserve both components, so the pair is
    constant on G_e-orbits.
    """
    d = edge_distance(e, f)
    if d == 0:
        return (0, 0)
    d0 = min(distance(e.v0, w) for w in f.faces())
    d1 = min(distance(e.v1, w) for w in f.faces())
    return (d, 1 if d1 < d0 else -1)


def vertex_edge_profile(v: TreeVertex, f: TreeEdge) -> tuple[int, int]:
    """G_v-orbit invariant of f: the sorted pair of endpoint distances."""
    ds = sorted(distance(v, w) for w in f.faces())
    return (ds[0], ds[1])


# ---------------------------------------------------------------------------
# inversion behaviour (SL2 vs PGL2) and barycentric subdivision


def sl2_inversion_check(p: int) -> bool:
    """False: no determinant-1 element can swap the endpoints of an edge,
    since they lie in different orbit types and types are SL2-invariant."""
    e = standard_edge(p)
    return e.v0.orbit_type() == e.v1.orbit_type()


def pgl2_inversion_witness(p: int) -> Mat2:
    """[[0, 1], [p, 0]] swaps the endpoints of the standard edge in PGL2."""
    return Mat2.of(0, 1, p, 0)


def pgl2_inversion_check(p: int) -> bool:
    w = pgl2_inversion_witness(p)
    e = standard_edge(p)
    return (act(w, e.v0), act(w, e.v1)) == (e.v1, e.v0)


@dataclass(frozen=True)
class BarycentricEdge:
    """Half-edge of the subdivision: an original vertex and the barycentre
    of an original edge, encoded by the edge's unordered vertex pair."""

    vertex: TreeVertex
    barycentre: frozenset[TreeVertex]

    def __post_init__(self):
        if self.vertex not in self.barycentre:
            raise ValueError("vertex must be an endpoint of the subdivided edge")


def subdivide(e: TreeEdge) -> tuple[BarycentricEdge, BarycentricEdge]:
    b = e.vertex_set()
    return (BarycentricEdge(e.v0, b), BarycentricEdge(e.v1, b))


def act_barycentric(g: Mat2, h: BarycentricEdge) -> BarycentricEdge:
    return BarycentricEdge(
        act(g, h.vertex), frozenset(act(g, v) for v in h.barycentre)
    )


def subdivided_inversion_check(p: int, elements: list[Mat2]) -> bool:
    """True iff some element inverts a subdivided half-edge.

    The endpoints of a half-edge are one original vertex and one barycentre,
    so an inversion would have to exchange the two kinds; the check verifies
    on the sample that every element either fixes a half-edge pointwise or
    moves it to a different half-edge (in particular an element that swaps
    the endpoints of e maps one half of e to the other, inverting neither).
    """
    e = standard_edge(p)
    h0, h1 = subdivide(e)
    for g in elements:
        for h in (h0, h1):
            gh = act_barycentric(g, h)
            if gh.barycentre == h.barycentre:
                # same barycentre: either the same half-edge (pointwise fix
                # of both faces) or the opposite half; an inversion of h
                # would need g.vertex == barycentre, a kind mismatch.
                if gh.vertex == h.vertex and gh != h:
                    return True
    return False


# ---------------------------------------------------------------------------
# DOT emission


def region_to_dot(region: SubtreeRegion, highlight: SubtreeRegion | None = None) -> str:
    """Graphviz rendering; vertex labels carry (a,b,u) and the orbit type."""
    hi_v = highlight.vertices if highlight else frozenset()
    hi_e = highlight.edges if highlight else frozenset()
    lines = ["graph tree {", "  node [shape=circle];"]
    names = {}
    for i, v in enumerate(sorted(region.vertices)):
        names[v] = f"n{i}"
        style = ' style=filled fillcolor="lightblue"' if v in hi_v else ""
        lines.append(f'  n{i} [label="{v.label()}|{v.orbit_type()}"{style}];')
    for e in sorted(region.edges):
        style = ' [color="blue" penwidth=2]' if e in hi_e else ""
        lines.append(f"  {names[e.v0]} -- {names[e.v1]}{style};")
    lines.append("}")
    return "\n".join(lines) + "\n"
