"""Acceptance criteria, one test per criterion.

Every check is exact (integer or cyclotomic equality; the only tolerances
are the stated runtime budgets).  Each test prints a single pass/fail line;
run with ``pytest tests/test_acceptance.py -v -s`` to see them.
"""

import random
import time

import pytest

from padicblocks.characters import SmoothCharacter
from padicblocks.mv_complex import assemble_complex
from padicblocks.patterns import iwahori, sample_element
from padicblocks.tree import edge_neighborhood, standard_edge, single_edge_region
from padicblocks.verify import (
    run_suite,
    suite_diagram,
    suite_filtquot,
    suite_intertwiner,
    suite_k0,
    suite_mackey,
    suite_numbirred,
    suite_projind,
    suite_stabilizers,
    suite_tree,
    suite_types,
)


def _report(name: str, budget: float, checks: list[dict], started: float) -> None:
    elapsed = time.time() - started
    failed = [c for c in checks if c["status"] != "pass"]
    status = "PASS" if not failed and elapsed < budget else "FAIL"
    print(
        f"{status} {name}: {len(checks) - len(failed)}/{len(checks)} checks, "
        f"{elapsed:.1f}s (budget {budget:.0f}s)"
    )
    for c in failed:
        print("    failed:", c["id"], c["config"], c.get("detail"))
    assert not failed
    assert elapsed < budget, f"{name} exceeded budget: {elapsed:.1f}s"


def test_criterion_01_tree_suite():
    t0 = time.time()
    checks = suite_tree(seed=0, primes=(2, 3, 5, 7))
    _report("criterion-01 tree suite", 5.0, checks, t0)


def test_criterion_02_stabilizer_suite():
    t0 = time.time()
    checks = suite_stabilizers(seed=0, primes=(2, 3, 5), samples=1000)
    _report("criterion-02 stabilizer/pattern suite", 30.0, checks, t0)


def test_criterion_03_type_suite():
    t0 = time.time()
    checks = suite_types(seed=0, primes=(2, 3, 5))
    _report("criterion-03 type suite", 60.0, checks, t0)


def test_criterion_04_intertwiner_law():
    t0 = time.time()
    checks = suite_intertwiner(seed=0, primes=(3, 5), decorations=200)
    for c in checks:
        if c["id"] == "intertwiner.jwj-positive":
            assert c["config"]["tested"] >= 200
    _report("criterion-04 intertwiner law", 120.0, checks, t0)


def test_criterion_05_double_coset_diagram():
    t0 = time.time()
    checks = suite_diagram(seed=0, primes=(2, 3, 5), length=3)
    _report("criterion-05 double-coset diagram", 60.0, checks, t0)


def test_criterion_06_mackey_oracle_equivalence():
    t0 = time.time()
    checks = suite_mackey(seed=0, primes=(2, 3, 5))
    configs = [c for c in checks if c["id"] == "mackey.oracle-equality"]
    assert len(configs) >= 20
    _report("criterion-06 Mackey oracle equivalence", 300.0, checks, t0)


def test_criterion_07_constituent_dichotomy():
    t0 = time.time()
    checks = suite_numbirred(seed=0, primes=(3, 5))
    _report("criterion-07 constituent dichotomy", 120.0, checks, t0)


def test_criterion_08_filtration_subgroup_identity():
    t0 = time.time()
    checks = suite_filtquot(seed=0, primes=(2, 3, 5), max_distance=4)
    _report("criterion-08 filtration subgroup identity", 60.0, checks, t0)


def test_criterion_09_induce_project_equality():
    t0 = time.time()
    checks = suite_projind(seed=0, primes=(3, 5), max_distance=3)
    _report("criterion-09 induce/project multiplicities", 600.0, checks, t0)


def test_criterion_10_complex_suite():
    t0 = time.time()
    checks = []
    rng = random.Random(0)
    for p in (2, 3):
        for chi in (SmoothCharacter.trivial(p), SmoothCharacter(p, 1, (1,))):
            if chi.conductor == 1 and chi.order > 1 and p == 2:
                continue  # (Z/2)^* is trivial: no nontrivial conductor-1 character
            e = standard_edge(p)
            for n in (0, 1, 2):
                h1, _ = assemble_complex(chi, edge_neighborhood(e, n)).homology_dims()
                checks.append(
                    {
                        "id": "complex.shell-acyclic",
                        "config": {"p": p, "chi": chi.label(), "n": n},
                        "status": "pass" if h1 == 0 else "fail",
                    }
                )
                h1v, _ = assemble_complex(chi, edge_neighborhood(e.v0, n)).homology_dims()
                checks.append(
                    {
                        "id": "complex.vertex-shell-acyclic",
                        "config": {"p": p, "chi": chi.label(), "n": n},
                        "status": "pass" if h1v == 0 else "fail",
                    }
                )
        chi0 = SmoothCharacter.trivial(p)
        cx = assemble_complex(chi0, single_edge_region(standard_edge(p)))
        h1, h0 = cx.homology_dims()
        checks.append(
            {
                "id": "complex.single-edge-h0",
                "config": {"p": p},
                "status": "pass" if (h1, h0) == (0, 2 * p + 1) else "fail",
            }
        )
        spot = [sample_element(iwahori(p), rng, spread=2) for _ in range(3)]
        try:
            assemble_complex(chi0, edge_neighborhood(standard_edge(p), 1), spot_checks=spot)
            ok = True
        except Exception:
            ok = False
        checks.append(
            {
                "id": "complex.differential-equivariance",
                "config": {"p": p},
                "status": "pass" if ok else "fail",
            }
        )
    _report("criterion-10 complex suite", 300.0, checks, t0)


def test_criterion_11_k0_outputs():
    t0 = time.time()
    checks = suite_k0(seed=0)
    _report("criterion-11 K0 outputs", 60.0, checks, t0)
