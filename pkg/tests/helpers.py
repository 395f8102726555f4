"""Shared builders for the test suite: catalog algebras, random instances."""

from __future__ import annotations

import random

from convdef import (
    AlgebraMC,
    Comodule,
    ConvMorphism,
    Matrix,
    MultiMap,
    conv_compose,
    conv_tensor,
    divided_power_t,
    epsilon_embed,
    takeuchi_invert,
)
from convdef.fields import PrimeField

F2 = PrimeField(2)
F3 = PrimeField(3)
F5 = PrimeField(5)


def mult_from_table(field, table) -> MultiMap:
    """table[i][j] = coordinates of e_i * e_j."""
    dim = len(table)
    rows = [[field.zero] * (dim * dim) for _ in range(dim)]
    for i in range(dim):
        for j in range(dim):
            for r, c in enumerate(table[i][j]):
                rows[r][dim * i + j] = field.coerce(c)
    return MultiMap(dim, 2, 1, Matrix.from_rows(field, rows))


def table_from_mult(m: MultiMap):
    """Inverse of mult_from_table, for handing data to the oracle."""
    dim = m.a_dim
    return [
        [[m.mat.data[r][dim * i + j] for r in range(dim)] for j in range(dim)]
        for i in range(dim)
    ]


def dual_numbers(field) -> MultiMap:
    # basis {1, x}, x^2 = 0
    return mult_from_table(field, [[(1, 0), (0, 1)], [(0, 1), (0, 0)]])


def split_pair(field) -> MultiMap:
    # k x k in the idempotent basis
    return mult_from_table(field, [[(1, 0), (0, 0)], [(0, 0), (0, 1)]])


def zero_mult(field, dim=2) -> MultiMap:
    return MultiMap.zero(field, dim, 2, 1)


def rank_one_square(field) -> MultiMap:
    # m(a, b) = psi(a) psi(b) v with psi(v) = 0: always associative, nonunital
    return mult_from_table(field, [[(0, 0), (0, 0)], [(0, 0), (1, 0)]])


def square_zero_3(field) -> MultiMap:
    # k[x,y]/(x^2, xy, y^2): unital, radical squared zero
    return mult_from_table(
        field,
        [
            [(1, 0, 0), (0, 1, 0), (0, 0, 1)],
            [(0, 1, 0), (0, 0, 0), (0, 0, 0)],
            [(0, 0, 1), (0, 0, 0), (0, 0, 0)],
        ],
    )


def truncated_poly_3(field) -> MultiMap:
    # k[x]/(x^3)
    return mult_from_table(
        field,
        [
            [(1, 0, 0), (0, 1, 0), (0, 0, 1)],
            [(0, 1, 0), (0, 0, 1), (0, 0, 0)],
            [(0, 0, 1), (0, 0, 0), (0, 0, 0)],
        ],
    )


def mat2_mult(field) -> MultiMap:
    # 2x2 matrix units, basis index (i, j) -> 2 i + j
    dim = 4
    table = [[[0] * dim for _ in range(dim)] for _ in range(dim)]
    for a in range(dim):
        for b in range(dim):
            i, j = divmod(a, 2)
            k, l = divmod(b, 2)
            if j == k:
                table[a][b][2 * i + l] = 1
    return mult_from_table(field, table)


CATALOG_2 = (dual_numbers, split_pair, zero_mult, rank_one_square)
CATALOG_3 = (square_zero_3, truncated_poly_3)


def random_invertible(field, dim, rng: random.Random) -> Matrix:
    while True:
        rows = [[field.random_element(rng) for _ in range(dim)] for _ in range(dim)]
        m = Matrix.from_rows(field, rows)
        from convdef import rref

        if rref(m)[2] == dim:
            return m


def conjugate_mult(m: MultiMap, p: Matrix) -> MultiMap:
    """Transport of structure: m'(a, b) = p^{-1} m(p a, p b)."""
    from convdef import solve

    f = m.field
    dim = m.a_dim
    cols = []
    eye = Matrix.identity(f, dim)
    inv_cols = []
    for j in range(dim):
        res = solve(p, eye.col(j))
        inv_cols.append(res[0])
    p_inv = Matrix(f, dim, dim, tuple(zip(*inv_cols)))
    return MultiMap(dim, 2, 1, p_inv @ m.mat @ p.kron(p))


def random_algebra(field, dim, rng: random.Random) -> MultiMap:
    base = rng.choice(CATALOG_2 if dim == 2 else CATALOG_3)(field)
    return conjugate_mult(base, random_invertible(field, dim, rng))


def random_grouplike_comodule(cg, dim_x, rng: random.Random) -> Comodule:
    """Comodule over a group-like coalgebra: conjugated coordinate projections."""
    f = cg.field
    p = random_invertible(f, dim_x, rng)
    from convdef import solve

    eye = Matrix.identity(f, dim_x)
    inv_cols = [solve(p, eye.col(j))[0] for j in range(dim_x)]
    p_inv = Matrix(f, dim_x, dim_x, tuple(zip(*inv_cols)))
    assignment = [rng.randrange(cg.dim) for _ in range(dim_x)]
    coaction = [[] for _ in range(dim_x)]
    for g in range(cg.dim):
        data = [
            [f.one if (i == j and assignment[i] == g) else f.zero for j in range(dim_x)]
            for i in range(dim_x)
        ]
        t_g = p @ Matrix(f, dim_x, dim_x, tuple(tuple(r) for r in data)) @ p_inv
        for s in range(dim_x):
            for t in range(dim_x):
                if not f.is_zero(t_g.data[t][s]):
                    coaction[s].append((t, g, t_g.data[t][s]))
    return Comodule(cg, dim_x, coaction)


def random_nilpotent_comodule(c_graded, dim_x, rng: random.Random) -> Comodule:
    """Comodule over k[t]_{<=N}: rho(x) = sum rho_1^j(x) (x) t^j.

    The truncation forces rho_1^(N+1) = 0 exactly, so rho_1 is built from
    chains of length at most N+1 and then conjugated.
    """
    f = c_graded.field
    n_max = c_graded.max_degree()
    strict = [[f.zero] * dim_x for _ in range(dim_x)]
    pos = 0
    while pos < dim_x:
        length = rng.randint(1, min(n_max + 1, dim_x - pos))
        for i in range(pos, pos + length - 1):
            strict[i][i + 1] = f.random_element(rng)
        pos += length
    p = random_invertible(f, dim_x, rng)
    from convdef import solve

    eye = Matrix.identity(f, dim_x)
    inv_cols = [solve(p, eye.col(j))[0] for j in range(dim_x)]
    p_inv = Matrix(f, dim_x, dim_x, tuple(zip(*inv_cols)))
    rho1 = p @ Matrix(f, dim_x, dim_x, tuple(tuple(r) for r in strict)) @ p_inv
    coaction = [[] for _ in range(dim_x)]
    power = eye
    for j in range(n_max + 1):
        if j > 0:
            power = rho1 @ power
        if power.is_zero():
            break
        for s in range(dim_x):
            for t in range(dim_x):
                if not f.is_zero(power.data[t][s]):
                    coaction[s].append((t, j, power.data[t][s]))
    return Comodule(c_graded, dim_x, coaction)


def random_gauge_transported_mult(c_graded, m0: MultiMap, rng: random.Random) -> ConvMorphism:
    """An associative multiplication over a graded coalgebra with mixed components."""
    f = c_graded.field
    a = m0.a_dim
    comps = [MultiMap.identity(f, a, 1)]
    for _ in range(1, c_graded.dim):
        rows = [[f.random_element(rng) for _ in range(a)] for _ in range(a)]
        comps.append(MultiMap(a, 1, 1, Matrix.from_rows(f, rows)))
    gauge = ConvMorphism(c_graded, tuple(comps))
    filt = c_graded.grading_filtration()
    inv = takeuchi_invert(gauge, filt)
    m = epsilon_embed(m0, c_graded)
    return conv_compose(conv_compose(inv, m), conv_tensor(gauge, gauge))


def xsq_deformation_algebra(field):
    """The x^2 = t family over k[t]_{<=1}: m(1) = dual numbers, m(t) = gamma (x) gamma."""
    c = divided_power_t(1, field)
    m0 = dual_numbers(field)
    m1 = mult_from_table(field, [[(0, 0), (0, 0)], [(0, 0), (1, 0)]])
    return AlgebraMC(m=ConvMorphism(c, (m0, m1)))


def unit_column(field, dim, index=0) -> MultiMap:
    rows = [[field.one if r == index else field.zero] for r in range(dim)]
    return MultiMap(dim, 0, 1, Matrix.from_rows(field, rows))
