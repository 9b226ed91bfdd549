import random

import pytest

from padicblocks.padic import Mat2
from padicblocks.patterns import iwahori, sample_element, sl2_zp
from padicblocks.characters import SmoothCharacter
from padicblocks.mv_complex import (
    IncompatibleAssignment,
    assemble_complex,
    filtration_quotient_report,
    induce_project_vectors,
    integer_rank,
    lan_evaluate,
    sl2_edge_chart,
    subcomplex_inclusion_report,
    type_coset_reps,
)
from padicblocks.tree import (
    act,
    ball,
    edge_neighborhood,
    single_edge_region,
    standard_edge,
    standard_vertex,
)


def test_integer_rank():
    assert integer_rank([[1, 1], [-1, -1]]) == 1
    assert integer_rank([[1, 0], [0, 1]]) == 2
    assert integer_rank([[0, 0]]) == 0


def test_sl2_edge_charts_on_sampled_edges():
    rng = random.Random(30)
    p = 3
    e = standard_edge(p)
    for _ in range(8):
        g = sample_element(sl2_zp(p), rng, spread=2)
        f = act(g, e)
        c = sl2_edge_chart(f)
        assert c.det() == 1
        assert act(c, e) == f


def test_type_coset_reps_count_and_distinctness():
    from padicblocks.characters import build_type

    p = 3
    t = build_type(SmoothCharacter(p, 2, (1,)))
    reps = type_coset_reps(t)
    assert len(reps) == p  # [I : J] = p^(n-1)
    for i, r1 in enumerate(reps):
        for r2 in reps[i + 1 :]:
            assert not t.pattern.member(r1.inv() @ r2)


def test_lan_evaluate_dimensions():
    chi = SmoothCharacter(5, 2, (1,))
    (edge,) = lan_evaluate(chi, "edge", "edge")
    assert edge.dimension == 5
    (v,) = lan_evaluate(chi, "edge", "v0")
    assert v.dimension == 6 * 5
    (v1,) = lan_evaluate(chi, "edge", "v1")
    assert v1.dimension == 6 * 5
    with pytest.raises(ValueError):
        lan_evaluate(chi, "v0", "edge")


def test_single_edge_complex_dims():
    for p in (2, 3):
        chi = SmoothCharacter.trivial(p)
        cx = assemble_complex(chi, single_edge_region(standard_edge(p)))
        assert len(cx.deg1) == 1
        assert len(cx.deg0) == 2 * (p + 1)
        h1, h0 = cx.homology_dims()
        assert h1 == 0
        assert h0 == 2 * p + 1


def test_shell_and_ball_complexes_acyclic_in_degree_one():
    for p in (2, 3):
        chi = SmoothCharacter.trivial(p)
        e = standard_edge(p)
        for n in (0, 1, 2):
            cx = assemble_complex(chi, edge_neighborhood(e, n))
            assert cx.homology_dims()[0] == 0
        for n in (0, 1, 2):
            cx = assemble_complex(chi, edge_neighborhood(e.v0, n))
            assert cx.homology_dims()[0] == 0
        cx = assemble_complex(chi, ball(standard_vertex(p), 1))
        assert cx.homology_dims()[0] == 0


def test_conductor_one_character_complexes():
    p = 3
    chi = SmoothCharacter(p, 1, (1,))
    cx = assemble_complex(chi, edge_neighborhood(standard_edge(p), 1))
    assert cx.homology_dims()[0] == 0


def test_equivariance_spot_checks():
    rng = random.Random(31)
    p = 3
    chi = SmoothCharacter(p, 2, (1,))
    e = standard_edge(p)
    checks = [sample_element(iwahori(p), rng, spread=3) for _ in range(4)]
    cx = assemble_complex(chi, edge_neighborhood(e, 1), spot_checks=checks)
    assert cx.homology_dims()[0] == 0
    # a ball around v0 is preserved by vertex-stabilizer elements
    checks_v = [sample_element(sl2_zp(p), rng, spread=2) for _ in range(3)]
    assemble_complex(chi, ball(standard_vertex(p), 1), spot_checks=checks_v)


def test_equivariance_rejects_region_movers():
    p = 3
    chi = SmoothCharacter.trivial(p)
    # a translation moves the single-edge region off itself
    mover = Mat2.diag(p, 1).scale(1)
    from padicblocks.tree import translation

    with pytest.raises(IncompatibleAssignment):
        assemble_complex(
            chi, single_edge_region(standard_edge(p)), spot_checks=[translation(p, 1)]
        )


def test_opposite_sign_convention_same_homology():
    p = 2
    chi = SmoothCharacter.trivial(p)
    cx = assemble_complex(chi, edge_neighborhood(standard_edge(p), 1))
    d = cx.differential()
    flipped = [[-x for x in row] for row in d]
    assert integer_rank(d) == integer_rank(flipped)


def test_subcomplex_inclusion():
    p = 2
    chi = SmoothCharacter.trivial(p)
    e = standard_edge(p)
    rep = subcomplex_inclusion_report(chi, edge_neighborhood(e, 2), edge_neighborhood(e, 1))
    assert rep["status"] == "pass"


def test_filtration_quotient_report_trivial():
    for p in (2, 3):
        rep = filtration_quotient_report(SmoothCharacter.trivial(p), 0)
        assert rep["status"] == "pass"
        assert all(side["pattern_identity"] for side in rep["sides"])


def test_filtration_quotient_report_conductor_one():
    rep = filtration_quotient_report(SmoothCharacter(3, 1, (1,)), 1)
    assert rep["status"] == "pass"


def test_induce_project_all_cases_p3():
    for chi in (
        SmoothCharacter.trivial(3),
        SmoothCharacter(3, 1, (1,)),
        SmoothCharacter(3, 2, (1,)),
    ):
        for which in ("v0", "v1"):
            for dist in (1, 2):
                r = induce_project_vectors(chi, which, dist)
                assert r["equal"], r


def test_induce_project_order_four_p5():
    r = induce_project_vectors(SmoothCharacter(5, 1, (1,)), "v0", 1)
    assert r["equal"]
    # single-constituent target in the non-fixed case
    assert len(r["side_b"]) == 1
