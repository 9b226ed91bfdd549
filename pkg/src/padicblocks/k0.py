"""K0 pushout reports: induction matrices and Smith normal form.

The square for a block (and its depth-m whole-group approximation) has the
edge lattice mapping into the two vertex lattices with signs (+, -); its
cokernel is the K0 of the group or block and the kernel rank is reported as
degree-one bookkeeping.  All matrices are exact integer matrices and the
normal form is computed by integer elimination.
"""

from __future__ import annotations

from dataclasses import dataclass

from .chartable import CharacterTable, character_table
from .characters import SmoothCharacter, build_type
from .cyclotomic import Cyclotomic
from .finite_rep import (
    box_average,
    conjugated_class_value,
    conjugation_levels,
    induced_type_character,
    inner_product,
    mackey_dim_hom,
    restricted_class_value,
    simplex_quotient,
    transported_type,
)
from .padic import Mat2
from .patterns import iwahori, quotient, sl2_zp


# ---------------------------------------------------------------------------
# Smith normal form


def smith_normal_form(rows: list[list[int]]) -> tuple[list[int], int]:
    """(invariant factors with d1 | d2 | ..., kernel rank) of an integer
    matrix, by exact elimination with pivot-size control."""
    mat = [list(map(int, r)) for r in rows]
    nr = len(mat)
    nc = len(mat[0]) if nr else 0
    factors = []
    top = 0
    while True:
        pivot = None
        best = None
        for i in range(top, nr):
            for j in range(top, nc):
                if mat[i][j] and (best is None or abs(mat[i][j]) < best):
                    best = abs(mat[i][j])
                    pivot = (i, j)
        if pivot is None:
            break
        i0, j0 = pivot
        mat[top], mat[i0] = mat[i0], mat[top]
        for r in mat:
            r[top], r[j0] = r[j0], r[top]
        # clear row and column; restart if a remainder shrinks the pivot
        while True:
            done = True
            for i in range(top + 1, nr):
                if mat[i][top]:
                    q = mat[i][top] // mat[top][top]
                    for j in range(top, nc):
                        mat[i][j] -= q * mat[top][j]
                    if mat[i][top]:
                        mat[top], mat[i] = mat[i], mat[top]
                        done = False
            for j in range(top + 1, nc):
                if mat[top][j]:
                    q = mat[top][j] // mat[top][top]
                    for i in range(top, nr):
                        mat[i][j] -= q * mat[i][top]
                    if mat[top][j]:
                        for r in mat:
                            r[top], r[j] = r[j], r[top]
                        done = False
            if done:
                break
        factors.append(abs(mat[top][top]))
        top += 1
        if top >= min(nr, nc):
            break
    # enforce divisibility d1 | d2 | ... via gcd/lcm passes
    import math

    changed = True
    while changed:
        changed = False
        for i in range(len(factors) - 1):
            a, b = factors[i], factors[i + 1]
            if b % a:
                g = math.gcd(a, b)
                factors[i], factors[i + 1] = g, a * b // g
                changed = True
    rank = len([f for f in factors if f])
    factors = [f for f in factors if f]
    return factors, nc - rank


@dataclass(frozen=True)
class K0Report:
    p: int
    label: str
    edge_basis: list[str]
    vertex_basis: list[str]
    matrix: list[list[int]]
    invariant_factors: list[int]
    kernel_rank: int
    coker_rank: int
    torsion: list[int]

    def interpretation(self) -> str:
        tors = "".join(f" + Z/{d}" for d in self.torsion)
        return (
            f"K0 = Z^{self.coker_rank}{tors}; kernel rank "
            f"{self.kernel_rank} (degree-one bookkeeping)"
        )

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "label": self.label,
            "lattices": {
                "edge": self.edge_basis,
                "vertices": self.vertex_basis,
            },
            "matrix": self.matrix,
            "invariant_factors": self.invariant_factors,
            "kernel_rank": self.kernel_rank,
            "coker": f"Z^{self.coker_rank}"
            + "".join(f"+Z/{d}" for d in self.torsion),
            "interpretation": self.interpretation(),
        }


def _report(p: int, label: str, edge_basis, vertex_basis, matrix) -> K0Report:
    factors, kernel_rank = smith_normal_form(matrix)
    rank = len(factors)
    coker_rank = len(vertex_basis) - rank
    torsion = [f for f in factors if f > 1]
    # rank bookkeeping of the square: edge + coker = vertices + kernel
    assert len(edge_basis) + coker_rank == len(vertex_basis) + kernel_rank
    return K0Report(
        p,
        label,
        list(edge_basis),
        list(vertex_basis),
        [list(r) for r in matrix],
        factors,
        kernel_rank,
        coker_rank,
        torsion,
    )


# ---------------------------------------------------------------------------
# block reports


def block_k0(chi: SmoothCharacter, m: int | None = None) -> K0Report:
    """The block's pushout square at the level of K0 lattices.

    Edge basis: the distinct induced generators at the edge (one or two).
    Vertex bases: the constituents of the vertex generator (two when
    chi^2 = 1, else one), with multiplicity-one splits certified by the
    self inner product.  Entries are induction multiplicities computed from
    inner products, with signs + at vertex 0 and - at vertex 1.
    """
    p = chi.p
    n = chi.conductor
    mm = max(n, 1) if m is None else m
    t = build_type(chi)
    inv = chi.inverse()

    edge_labels = [chi.label()]
    edge_types = [t]
    if inv != chi:
        edge_labels.append(inv.label())
        edge_types.append(build_type(inv))
        # distinct irreducible generators at the edge (checked)
        q_edge = simplex_quotient(p, mm, "edge")
        f1 = induced_type_character(q_edge, t)
        f2 = induced_type_character(q_edge, edge_types[1])
        assert inner_product(f1, f1) == 1 and inner_product(f2, f2) == 1
        assert inner_product(f1, f2) == 0

    vertex_basis = []
    rows = []
    for which, sign in (("v0", 1), ("v1", -1)):
        quot = simplex_quotient(p, mm, which)
        gen = induced_type_character(quot, transported_type(t, which))
        selfmult = inner_product(gen, gen)
        cols = []
        for te in edge_types:
            ind = induced_type_character(quot, transported_type(te, which))
            total = inner_product(ind, gen)
            cross = inner_product(ind, ind)
            cols.append((total, cross))
        if selfmult == 1:
            vertex_basis.append(f"{which}:{chi.label()}")
            rows.append([sign * total for total, _ in cols])
        elif selfmult == 2:
            # two multiplicity-one constituents; an induction with total 2
            # and self product 2 meets both exactly once
            for total, cross in cols:
                assert total == 2 and cross == 2
            vertex_basis.append(f"{which}:{chi.label()}.a")
            vertex_basis.append(f"{which}:{chi.label()}.b")
            rows.append([sign * 1 for _ in cols])
            rows.append([sign * 1 for _ in cols])
        else:
            raise AssertionError(f"unexpected constituent count {selfmult}")
    matrix = rows
    return _report(p, f"block:{chi.label()}", edge_labels, vertex_basis, matrix)


def block_matrix_mackey_check(chi: SmoothCharacter, m: int | None = None) -> bool:
    """Column sums of the block matrix equal the Mackey dimension counts."""
    p = chi.p
    mm = max(chi.conductor, 1) if m is None else m
    rep = block_k0(chi, mm)
    t = build_type(chi)
    for j, te in enumerate([t] + ([build_type(chi.inverse())] if chi.inverse() != chi else [])):
        for which, sign in (("v0", 1), ("v1", -1)):
            tt = transported_type(te, which)
            tc = transported_type(t, which)
            md = mackey_dim_hom(tt, tc, sl2_zp(p), mm)
            col = sum(
                abs(rep.matrix[i][j])
                for i, lab in enumerate(rep.vertex_basis)
                if lab.startswith(which)
            )
            if md != col:
                return False
    return True


# ---------------------------------------------------------------------------
# depth-m whole-group report


def group_k0_truncated(p: int, m: int) -> K0Report:
    """Depth-m approximation of the whole-group pushout: lattices are the
    irreducibles of the level-m vertex quotients, the edge lattice is the
    irreducibles of the level-m edge quotient, and entries are restriction
    multiplicities (Frobenius-dual to induction).

    The v1 column entries are computed by exact box averages against the
    chart transport, so no residue-level conjugation is needed.
    """
    table_v = character_table(quotient(p, m))
    table_e = character_table(quotient(p, m, iwahori(p).key()))
    edge_basis = [f"e:{i}(deg {d})" for i, d in enumerate(table_e.degrees)]
    vertex_basis = []
    rows: list[list[int]] = []
    # v0 rows: direct restriction to the Iwahori image
    for i, d in enumerate(table_v.degrees):
        vertex_basis.append(f"v0:{i}(deg {d})")
        rows.append(
            [table_v.restrict_multiplicity(i, table_e, j) for j in range(len(table_e.degrees))]
        )
    # v1 rows: restriction of the chart-transported characters, as exact
    # Haar box averages over the edge group
    sigma = Mat2.diag(1, p)
    iw = iwahori(p)
    levels = conjugation_levels(sigma, p, m, m)
    for i, d in enumerate(table_v.degrees):
        vertex_basis.append(f"v1:{i}(deg {d})")
        row = []
        cf_v = _table_class_function(table_v, i)
        for j in range(len(table_e.degrees)):
            cf_e = _table_class_function(table_e, j)
            val = box_average(
                iw,
                levels,
                lambda x: cf_v(sigma.inv() @ x @ sigma),
                cf_e,
            )
            x = val.as_fraction()
            assert x.denominator == 1 and x >= 0
            row.append(-int(x))
        rows.append(row)
    report = _report(p, f"group:depth-{m}", edge_basis, vertex_basis, rows)
    return report


def _table_class_function(table: CharacterTable, i: int):
    quot = table.quot

    def f(x: Mat2):
        return table.values[i][quot.class_of(quot.reduce(x))]

    return f


# ---------------------------------------------------------------------------
# torus (line tree) telescoping report


def torus_line_k0(rank: int, length: int) -> K0Report:
    """Finite truncation of the line tree with a constant stabilizer: the
    matrix stacks identity blocks with signs, and the cokernel has the rank
    of a single vertex lattice."""
    edges = length
    vertices = length + 1
    edge_basis = [f"e{k}:{i}" for k in range(edges) for i in range(rank)]
    vertex_basis = [f"v{k}:{i}" for k in range(vertices) for i in range(rank)]
    matrix = [[0] * (edges * rank) for _ in range(vertices * rank)]
    for k in range(edges):
        for i in range(rank):
            col = k * rank + i
            matrix[k * rank + i][col] += 1
            matrix[(k + 1) * rank + i][col] -= 1
    return _report(0, f"torus-line:rank{rank}", edge_basis, vertex_basis, matrix)
