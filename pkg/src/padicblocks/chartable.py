"""Exact character tables of small finite quotients (Dixon's method).

Used only by the depth-truncated whole-group K0 reports, which need the
full constituent lattice of a small congruence quotient; the block pipeline
never calls this.  Eigenvector computations run over a prime field F_l with
l = 1 mod exponent and l > |G|, and the values are lifted exactly to
cyclotomics through root-of-unity multiplicity counts, so the output table
is exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .cyclotomic import Cyclotomic, root_sum
from .patterns import FiniteQuotient

SIZE_BUDGET = 400


@dataclass(frozen=True)
class CharacterTable:
    quot: FiniteQuotient
    degrees: tuple[int, ...]
    values: tuple[tuple[Cyclotomic, ...], ...]  # [irrep][class]

    def restrict_multiplicity(self, irrep: int, sub: "CharacterTable", sub_irrep: int) -> int:
        """Multiplicity of a subgroup irreducible in the restriction, where
        sub's quotient elements form a subgroup of this quotient."""
        total = Cyclotomic.zero()
        for cls in sub.quot.classes:
            value = self.values[irrep][self.quot.class_of(cls[0])]
            total = total + (value * sub.values[sub_irrep][sub.quot.class_of(cls[0])].conj()).scale(len(cls))
        x = total.scale(Fraction(1, len(sub.quot))).as_fraction()
        assert x.denominator == 1 and x >= 0
        return int(x)


def _element_order(quot: FiniteQuotient, x) -> int:
    e = (1, 0, 0, 1)
    y, n = x, 1
    while y != e:
        y = quot.mul(y, x)
        n += 1
    return n


def _exponent(quot: FiniteQuotient) -> int:
    import math

    n = 1
    for cls in quot.classes:
        n = math.lcm(n, _element_order(quot, cls[0]))
    return n


def _find_modulus(exponent: int, size: int) -> int:
    l = exponent + 1
    while True:
        if l > size and _is_prime(l) and (l - 1) % exponent == 0:
            return l
        l += 1


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def _kernel_mod(rows: list[list[int]], l: int) -> list[list[int]]:
    """Basis of the kernel of the matrix over F_l."""
    nrows, ncols = len(rows), len(rows[0])
    mat = [row[:] for row in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, nrows) if mat[i][c] % l), None)
        if piv is None:
            continue
        mat[r], mat[piv] = mat[piv], mat[r]
        inv = pow(mat[r][c], -1, l)
        mat[r] = [x * inv % l for x in mat[r]]
        for i in range(nrows):
            if i != r and mat[i][c] % l:
                f = mat[i][c]
                mat[i] = [(a - f * b) % l for a, b in zip(mat[i], mat[r])]
        pivots.append(c)
        r += 1
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [0] * ncols
        v[fc] = 1
        for i, pc in enumerate(pivots):
            v[pc] = (-mat[i][fc]) % l
        basis.append(v)
    return basis


def character_table(quot: FiniteQuotient) -> CharacterTable:
    if len(quot) > SIZE_BUDGET:
        raise ValueError(
            f"group of order {len(quot)} exceeds the character-table budget"
        )
    classes = quot.classes
    k = len(classes)
    reps = [c[0] for c in classes]
    class_index = {x: i for i, c in enumerate(classes) for x in c}
    inverse_class = [class_index[quot.inv(r)] for r in reps]
    exponent = _exponent(quot)
    l = _find_modulus(exponent, len(quot))
    # class multiplication coefficients a[i][j][t]: c_i c_j = sum a_t c_t
    mats = []
    for i in range(k):
        m = [[0] * k for _ in range(k)]
        for j in range(k):
            for x in classes[i]:
                # x * y = rep_t  =>  y = x^-1 rep_t
                for t in range(k):
                    y = quot.mul(quot.inv(x), reps[t])
                    if class_index[y] == j:
                        m[j][t] += 1
        # column eigenvector convention: (M_i v)_j = sum_t a[i][j][t] v_t
        mats.append(m)
    # split the space of class vectors into common eigenspaces over F_l
    spaces = [[_unit_vector(k, i) for i in range(k)]]
    for mi in mats:
        new_spaces = []
        for basis in spaces:
            if len(basis) == 1:
                new_spaces.append(basis)
                continue
            new_spaces.extend(_split_space(basis, mi, l))
        spaces = new_spaces
        if all(len(b) == 1 for b in spaces):
            break
    if not all(len(b) == 1 for b in spaces):
        raise AssertionError("class matrices failed to separate characters")
    # recover exact character values
    degrees = []
    values = []
    z = _primitive_root(l)
    power_class = _power_map(quot, reps, class_index)
    for basis in spaces:
        omega = basis[0]
        omega = [x * pow(omega[0], -1, l) % l for x in omega]  # identity class = 1
        # 1/d^2 = (1/|G|) sum_j omega_j omega_{j*} / |C_j|
        s = 0
        for j in range(k):
            s = (s + omega[j] * omega[inverse_class[j]] * pow(len(classes[j]), -1, l)) % l
        d2 = len(quot) * pow(s, -1, l) % l
        d = _int_sqrt_exact(d2)
        degrees.append(d)
        chi_mod = [d * omega[j] * pow(len(classes[j]), -1, l) % l for j in range(k)]
        row = []
        for j in range(k):
            o = _element_order(quot, reps[j])
            zeta = pow(z, (l - 1) // o, l)
            exps = []
            for t in range(o):
                mt = 0
                for s_ in range(o):
                    mt += chi_mod[power_class[j][s_]] * pow(zeta, (-s_ * t) % o, l)
                mt = mt * pow(o, -1, l) % l
                if mt > l // 2:
                    raise AssertionError("modulus too small for exact lifting")
                exps.extend([t] * mt)
            row.append(root_sum(o, exps))
        values.append(tuple(row))
    order = sorted(range(len(degrees)), key=lambda i: (degrees[i], [repr(v) for v in values[i]]))
    table = CharacterTable(
        quot,
        tuple(degrees[i] for i in order),
        tuple(values[i] for i in order),
    )
    assert sum(d * d for d in table.degrees) == len(quot)
    return table


def _power_map(quot, reps, class_index):
    out = []
    for r in reps:
        o = _element_order(quot, r)
        row = []
        y = (1, 0, 0, 1)
        for _ in range(o):
            row.append(class_index[y])
            y = quot.mul(y, r)
        out.append(row)
    return out


def _unit_vector(k, i):
    v = [0] * k
    v[i] = 1
    return v


def _split_space(basis, m, l):
    """Split span(basis) into eigenspaces of the class matrix m over F_l."""
    k = len(m)
    out = []
    remaining = len(basis)
    for lam in range(l):
        # solve (m - lam) (B^T c) = 0 for c
        rows = []
        for j in range(k):
            row = []
            for b in basis:
                s = sum(m[j][t] * b[t] for t in range(k)) - lam * b[j]
                row.append(s % l)
            rows.append(row)
        ker = _kernel_mod(rows, l)
        if ker:
            vecs = []
            for c in ker:
                v = [sum(c[i] * basis[i][t] for i in range(len(basis))) % l for t in range(k)]
                vecs.append(v)
            out.append(vecs)
            remaining -= len(vecs)
            if remaining == 0:
                break
    assert remaining == 0, "eigenspaces do not fill the space"
    return out


def _primitive_root(l: int) -> int:
    for z in range(2, l):
        x, order = z, 1
        while x != 1:
            x = x * z % l
            order += 1
        if order == l - 1:
            return z
    raise AssertionError


def _int_sqrt_exact(d2: int) -> int:
    import math

    d = math.isqrt(d2)
    assert d * d == d2, "degree squared is not a perfect square"
    return d
