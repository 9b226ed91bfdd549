import random
from fractions import Fraction

from padicblocks.padic import Mat2
from padicblocks.tree import (
    act,
    apartment_chart,
    apartment_edge,
    apartment_position,
    apartment_vertex,
    ball,
    ball_vertex_count,
    edge_distance,
    edge_neighborhood,
    distance,
    half_tree,
    make_edge,
    neighbors,
    orbit_reps_at_distance,
    pgl2_inversion_check,
    pgl2_inversion_witness,
    reflection0,
    reflection1,
    region_to_dot,
    signed_edge_position,
    single_edge_region,
    sl2_inversion_check,
    standard_edge,
    standard_vertex,
    subdivided_inversion_check,
    translation,
)

PRIMES = (2, 3, 5, 7)


def _lines_oracle_neighbors(v, p):
    # neighbors correspond to the p+1 lines of F_p^2, enumerated brute force
    basis = v.basis()
    lines = set()
    for x in range(p):
        for y in range(p):
            if (x, y) == (0, 0):
                continue
            line = frozenset(((a * x) % p, (a * y) % p) for a in range(1, p))
            lines.add(line)
    out = set()
    for line in lines:
        x, y = sorted(line)[-1]
        # sublattice spanned by pL and the vector x*e1 + y*e2
        if y % p:
            g = Mat2.of(p, x * pow(y, -1, p) % p, 0, 1)
        else:
            g = Mat2.diag(1, p)
        from padicblocks.tree import vertex_from_basis

        out.add(vertex_from_basis(basis @ g, p))
    return out


def test_regularity_against_line_enumeration():
    for p in PRIMES:
        v = standard_vertex(p)
        ns = neighbors(v)
        assert len(ns) == p + 1
        assert len(set(ns)) == p + 1
        assert set(ns) == _lines_oracle_neighbors(v, p)
        for w in ns:
            assert distance(v, w) == 1
            assert v in neighbors(w)


def test_two_orbit_types():
    for p in (2, 3):
        region = ball(standard_vertex(p), 3)
        for e in region.edges:
            assert {e.v0.orbit_type(), e.v1.orbit_type()} == {0, 1}


def test_ball_sizes_match_closed_formula():
    for p in PRIMES:
        nmax = 4 if p <= 3 else 3
        for n in range(nmax + 1):
            region = ball(standard_vertex(p), n)
            assert len(region.vertices) == ball_vertex_count(p, n)


def test_distance_bfs_oracle_and_midpoint():
    p = 3
    v = standard_vertex(p)
    w = apartment_vertex(p, 2)
    assert distance(v, w) == 2
    # geodesic midpoint is the apartment vertex 1
    mid = [u for u in neighbors(v) if distance(u, w) == 1]
    assert mid == [apartment_vertex(p, 1)]
    # BFS distances agree with elementary divisors on a ball
    region = ball(v, 3)
    dist = {v: 0}
    frontier = [v]
    while frontier:
        nxt = []
        for u in frontier:
            for x in neighbors(u):
                if x in region.vertices and x not in dist:
                    dist[x] = dist[u] + 1
                    nxt.append(x)
        frontier = nxt
    for u, d in dist.items():
        assert distance(v, u) == d


def test_action_is_isometric_and_fixes_as_expected():
    rng = random.Random(4)
    for p in (2, 5):
        v = standard_vertex(p)
        # integral unimodular elements fix the standard vertex
        for _ in range(20):
            g = Mat2.of(1, rng.randint(-9, 9), 0, 1) @ Mat2.of(
                1, 0, p * rng.randint(-9, 9), 1
            )
            assert act(g, v) == v
        # diag(p^-1, p) translates the apartment by 2
        t = translation(p, 1)
        for k in (-2, 0, 1, 3):
            assert act(t, apartment_vertex(p, k)) == apartment_vertex(p, k + 2)
        # isometry on random pairs
        pts = sorted(ball(v, 2).vertices)
        for _ in range(30):
            x, y = rng.choice(pts), rng.choice(pts)
            g = Mat2.of(1, rng.randint(-5, 5), 0, 1) @ Mat2.diag(
                Fraction(1, p), p
            )
            assert distance(act(g, x), act(g, y)) == distance(x, y)


def test_reflections_act_on_apartment():
    for p in (2, 5):
        s0, s1 = reflection0(p), reflection1(p)
        for k in range(-3, 4):
            assert act(s0, apartment_vertex(p, k)) == apartment_vertex(p, -k)
            assert act(s1, apartment_vertex(p, k)) == apartment_vertex(p, 2 - k)


def test_apartment_charts_hit_their_edges():
    for p in (2, 3):
        e = standard_edge(p)
        for k in range(-4, 5):
            g = apartment_chart(p, k)
            assert g.det() == 1
            assert act(g, e) == apartment_edge(p, k)
            assert apartment_position(apartment_edge(p, k)) == k


def test_orbit_reps_at_distance():
    for p in (2, 3):
        e = standard_edge(p)
        for n in range(1, 5):
            g0, g1 = orbit_reps_at_distance(p, n)
            e0, e1 = act(g0, e), act(g1, e)
            assert e0 != e1
            assert edge_distance(e, e0) == n
            assert edge_distance(e, e1) == n
            assert signed_edge_position(e, e0) == (n, 1)
            assert signed_edge_position(e, e1) == (n, -1)


def test_region_base_cases():
    for p in (2, 5):
        e = standard_edge(p)
        g0 = half_tree(e.v0, e, 0)
        assert g0.vertices == frozenset((e.v0,)) and not g0.edges
        n0 = edge_neighborhood(e, 0)
        assert n0.edges == frozenset((e,))


def test_edge_neighborhood_counts():
    p = 2
    e = standard_edge(p)
    assert len(edge_neighborhood(e, 1).edges) == 1 + 2 * p
    assert len(edge_neighborhood(e, 2).edges) == 1 + 2 * p + 2 * p * p
    v = standard_vertex(p)
    assert len(edge_neighborhood(v, 0).edges) == p + 1


def test_half_trees_are_disjoint_and_cover_neighborhood():
    for p in (2, 3):
        e = standard_edge(p)
        for n in (1, 2):
            h0 = half_tree(e.v0, e, n)
            h1 = half_tree(e.v1, e, n)
            assert not (h0.vertices & h1.vertices)
            assert not (h0.edges & h1.edges)
            shell = edge_neighborhood(e, n)
            assert shell.edges == h0.edges | h1.edges | {e}


def test_face_maps_equivariant():
    rng = random.Random(5)
    p = 3
    e = standard_edge(p)
    for _ in range(30):
        g = (
            Mat2.of(1, rng.randint(-5, 5), 0, 1)
            @ Mat2.of(1, 0, p * rng.randint(-5, 5), 1)
            @ translation(p, rng.randint(-1, 1))
        )
        ge = act(g, e)
        assert ge.faces() == (act(g, e.v0), act(g, e.v1))


def test_fig1_regions_for_p2():
    # the half-tree at radius 1 and balls of radius 1 and 2 for p = 2
    p = 2
    e = standard_edge(p)
    assert len(ball(e.v0, 1).vertices) == 4
    assert len(ball(e.v1, 2).vertices) == 10
    g = half_tree(e.v0, e, 1)
    assert len(g.vertices) == 3  # v0 and its two other neighbors
    assert len(g.edges) == 2


def test_sl2_has_no_inversion_pgl2_does():
    for p in PRIMES:
        assert sl2_inversion_check(p) is False
        assert pgl2_inversion_check(p) is True
        w = pgl2_inversion_witness(p)
        e = standard_edge(p)
        assert act(w, e.v0) == e.v1 and act(w, e.v1) == e.v0


def test_subdivision_removes_inversion():
    rng = random.Random(6)
    for p in (2, 3):
        elements = [pgl2_inversion_witness(p)]
        for _ in range(50):
            g = Mat2.of(1, rng.randint(-5, 5), 0, 1) @ Mat2.of(
                1, 0, rng.randint(-5, 5), 1
            )
            elements.append(g @ pgl2_inversion_witness(p))
            elements.append(g)
        assert subdivided_inversion_check(p, elements) is False


def test_dot_output_mentions_labels():
    p = 2
    region = ball(standard_vertex(p), 1)
    dot = region_to_dot(region, highlight=single_edge_region(standard_edge(p)))
    assert dot.startswith("graph tree {")
    assert "(0,0,0)|0" in dot
    assert "--" in dot
