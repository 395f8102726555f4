"""The deformation cochain complex of an algebra in the convolution category.

Cochains of degree n are linear maps from the comodule X into
Hom(A^(x)n, A).  The coface maps weave the multiplication through the
coaction; their alternating sum is the differential.  Flattened cochain
coordinates are X-index major, then row-major over the map matrix, i.e.
flat[s * a^(n+1) + r * a^n + c] = maps[s].mat[r][c].
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .coalgebra import trivial_k
from .convolution import ConvMorphism, MultiMap, conv_compose, conv_tensor, epsilon_embed, identity_conv
from .errors import NotCompletelyReducible, NotRankOne, ShapeError
from .extension import Comodule
from .fields import Field
from .linalg import Matrix, Subspace, Vector, image, kernel_basis, unit_vec


@dataclass(frozen=True)
class Cochain:
    """Degree-n element of the complex: one map A^(x)n -> A per X basis vector."""

    degree: int
    maps: tuple[MultiMap, ...]

    def __post_init__(self):
        for m in self.maps:
            if m.src_arity != self.degree or m.tgt_arity != 1:
                raise ShapeError(f"cochain maps must be A^(x){self.degree} -> A")

    @classmethod
    def zero(cls, field: Field, a_dim: int, x_dim: int, degree: int) -> Cochain:
        z = MultiMap.zero(field, a_dim, degree, 1)
        return cls(degree, (z,) * x_dim)

    @property
    def x_dim(self) -> int:
        return len(self.maps)

    @property
    def a_dim(self) -> int:
        return self.maps[0].a_dim

    @property
    def field(self) -> Field:
        return self.maps[0].field

    def __add__(self, other: Cochain) -> Cochain:
        return Cochain(self.degree, tuple(a + b for a, b in zip(self.maps, other.maps)))

    def __sub__(self, other: Cochain) -> Cochain:
        return Cochain(self.degree, tuple(a - b for a, b in zip(self.maps, other.maps)))

    def __neg__(self) -> Cochain:
        return Cochain(self.degree, tuple(-a for a in self.maps))

    def scale(self, c) -> Cochain:
        return Cochain(self.degree, tuple(m.scale(c) for m in self.maps))

    def is_zero(self) -> bool:
        return all(m.is_zero() for m in self.maps)

    def flatten(self) -> Vector:
        out: list = []
        for m in self.maps:
            out.extend(m.mat.flatten())
        return tuple(out)

    @classmethod
    def from_flat(cls, field: Field, a_dim: int, x_dim: int, degree: int, flat: Sequence) -> Cochain:
        rows, cols = a_dim, a_dim**degree
        block = rows * cols
        if len(flat) != x_dim * block:
            raise ShapeError("flat cochain length mismatch")
        maps = []
        for s in range(x_dim):
            maps.append(
                MultiMap(a_dim, degree, 1, Matrix.from_flat(field, rows, cols, flat[s * block : (s + 1) * block]))
            )
        return cls(degree, tuple(maps))


def cochain_act(nu: Cochain, alpha: Sequence, comodule: Comodule) -> Cochain:
    """Right action of a functional on C: (nu <- alpha)(x) = nu(alpha -> x)."""
    f = comodule.base.field
    a = tuple(f.coerce(v) for v in alpha)
    maps = []
    for s in range(comodule.dim):
        acc = MultiMap.zero(f, nu.a_dim, nu.degree, 1)
        for t, u, c in comodule.coaction[s]:
            acc = acc + nu.maps[t].scale(f.mul(c, a[u]))
        maps.append(acc)
    return Cochain(nu.degree, tuple(maps))


@dataclass(frozen=True)
class CohomologyResult:
    degree: int
    dim_z: int
    dim_b: int
    dim_h: int
    representatives: tuple[Cochain, ...]
    d_matrix: Matrix
    d_prev_matrix: Optional[Matrix]


class ComplexSpec:
    """The cochain complex of an associative multiplication m and a comodule X."""

    def __init__(self, m: ConvMorphism, comodule: Comodule, check: bool = True):
        if m.coalgebra != comodule.base:
            raise ShapeError("multiplication and comodule live over different coalgebras")
        if m.src_arity != 2 or m.tgt_arity != 1:
            raise ShapeError("multiplication must be a map C -> Hom(A(x)A, A)")
        if check:
            comodule.require_valid()
            if not is_associative(m):
                raise ShapeError("multiplication is not associative in the convolution category")
        self.m = m
        self.comodule = comodule
        self.a_dim = m.a_dim
        self.x_dim = comodule.dim
        self.field = m.field
        self._dmat_cache: dict[int, Matrix] = {}

    def cochain_dim(self, n: int) -> int:
        return self.x_dim * self.a_dim ** (n + 1)

    def zero_cochain(self, n: int) -> Cochain:
        return Cochain.zero(self.field, self.a_dim, self.x_dim, n)

    def coface(self, i: int, n: int, nu: Cochain) -> Cochain:
        """The i-th coface C^n -> C^(n+1), 0 <= i <= n+1."""
        if nu.degree != n or nu.x_dim != self.x_dim:
            raise ShapeError("cochain does not match the complex")
        if not 0 <= i <= n + 1:
            raise ShapeError(f"coface index {i} out of range for degree {n}")
        f, a = self.field, self.a_dim
        ident = MultiMap.identity(f, a, 1)
        maps = []
        for s in range(self.x_dim):
            acc = MultiMap.zero(f, a, n + 1, 1)
            for t, u, coeff in self.comodule.coaction[s]:
                m_u = self.m.components[u]
                nu_t = nu.maps[t]
                if i == 0:
                    term = m_u.compose(ident.tensor(nu_t))
                elif i == n + 1:
                    term = m_u.compose(nu_t.tensor(ident))
                else:
                    mid = MultiMap.identity(f, a, i - 1).tensor(m_u).tensor(
                        MultiMap.identity(f, a, n - i)
                    )
                    term = nu_t.compose(mid)
                acc = acc + term.scale(coeff)
            maps.append(acc)
        return Cochain(n + 1, tuple(maps))

    def differential(self, nu: Cochain) -> Cochain:
        """d^n = sum of (-1)^i cofaces."""
        n = nu.degree
        acc = self.coface(0, n, nu)
        for i in range(1, n + 2):
            term = self.coface(i, n, nu)
            acc = acc - term if i % 2 else acc + term
        return acc

    def differential_matrix(self, n: int) -> Matrix:
        if n in self._dmat_cache:
            return self._dmat_cache[n]
        f = self.field
        dim_in = self.cochain_dim(n)
        cols = []
        for j in range(dim_in):
            basis = Cochain.from_flat(f, self.a_dim, self.x_dim, n, unit_vec(f, dim_in, j))
            cols.append(self.differential(basis).flatten())
        out = Matrix(f, self.cochain_dim(n + 1), dim_in, tuple(zip(*cols)))
        self._dmat_cache[n] = out
        return out

    def cohomology(self, n: int) -> CohomologyResult:
        """Z^n = ker d^n, B^n = im d^(n-1), with RREF-canonical H^n representatives."""
        f = self.field
        dn = self.differential_matrix(n)
        z_space = Subspace.span(f, self.cochain_dim(n), kernel_basis(dn))
        if n == 0:
            d_prev = None
            b_space = Subspace.zero(f, self.cochain_dim(n))
        else:
            d_prev = self.differential_matrix(n - 1)
            b_space = image(d_prev)
        if not z_space.contains_space(b_space):
            raise ShapeError("differential does not square to zero; complex is inconsistent")
        reps = []
        span = b_space
        for row in z_space.basis.data:
            if not span.contains_vector(row):
                reps.append(Cochain.from_flat(f, self.a_dim, self.x_dim, n, row))
                span = span.sum(Subspace.span(f, span.ambient, [row]))
        return CohomologyResult(
            degree=n,
            dim_z=z_space.dim,
            dim_b=b_space.dim,
            dim_h=z_space.dim - b_space.dim,
            representatives=tuple(reps),
            d_matrix=dn,
            d_prev_matrix=d_prev,
        )


def is_associative(m: ConvMorphism) -> bool:
    """m * (m (x) id) = m * (id (x) m) in the convolution category, exactly."""
    ida = identity_conv(m.coalgebra, m.a_dim, 1)
    left = conv_compose(m, conv_tensor(m, ida))
    right = conv_compose(m, conv_tensor(ida, m))
    return left == right


def hochschild_spec(m0: MultiMap) -> ComplexSpec:
    """The complex computing Hochschild cohomology of a plain algebra (A, m0).

    This is the C = k, X = k case of the general construction.
    """
    c = trivial_k(m0.field)
    m = epsilon_embed(m0, c)
    com = Comodule(c, 1, [[(0, 0, 1)]])
    return ComplexSpec(m, com)


def hochschild_dims(m0: MultiMap, degrees: Sequence[int]) -> dict[int, int]:
    spec = hochschild_spec(m0)
    return {n: spec.cohomology(n).dim_h for n in degrees}


@dataclass(frozen=True)
class Rank1Reduction:
    """Factorization of the differential through the Hochschild complex of m0."""

    m0: MultiMap
    chi: Vector
    chi_is_counit: bool
    act_matrix: Matrix  # matrix of x |-> chi -> x on X
    hochschild: ComplexSpec

    def partial_matrix(self, n: int) -> Matrix:
        return self.hochschild.differential_matrix(n)

    def factored_differential_matrix(self, n: int) -> Matrix:
        return self.act_matrix.transpose().kron(self.partial_matrix(n))


def rank1_reduce(spec: ComplexSpec, degrees: Sequence[int] = (2,)) -> Rank1Reduction:
    """Factor d^n as Hom(X, partial^n) after the chi action, for rank-1 m.

    Requires m(c) = chi(c) * m0 for every basis element c; verifies the
    factored matrix against the directly assembled differential for each
    requested degree.
    """
    m = spec.m
    f = spec.field
    base = None
    for comp in m.components:
        if not comp.is_zero():
            base = comp
            break
    if base is None:
        raise NotRankOne("multiplication is zero (rank 0)")
    ref = None
    for r in range(base.mat.rows):
        for c in range(base.mat.cols):
            if not f.is_zero(base.mat.data[r][c]):
                ref = (r, c)
                break
        if ref:
            break
    chi = []
    for comp in m.components:
        coeff = f.div(comp.mat.data[ref[0]][ref[1]], base.mat.data[ref[0]][ref[1]])
        if comp != base.scale(coeff):
            raise NotRankOne("multiplication components are not proportional")
        chi.append(coeff)
    dx = spec.x_dim
    act = [[f.zero] * dx for _ in range(dx)]
    for s in range(dx):
        for t, u, c in spec.comodule.coaction[s]:
            act[t][s] = f.add(act[t][s], f.mul(c, chi[u]))
    red = Rank1Reduction(
        m0=base,
        chi=tuple(chi),
        chi_is_counit=tuple(chi) == m.coalgebra.counit,
        act_matrix=Matrix(f, dx, dx, tuple(tuple(row) for row in act)),
        hochschild=hochschild_spec(base),
    )
    for n in degrees:
        if red.factored_differential_matrix(n) != spec.differential_matrix(n):
            raise NotRankOne("factored differential disagrees with the direct assembly")
    return red


@dataclass(frozen=True)
class ProductDecomposition:
    """Per-line Hochschild cohomology of a completely reducible instance."""

    lines: tuple[tuple[Vector, Vector], ...]
    per_line: tuple[dict[int, CohomologyResult], ...]
    totals: dict[int, int]


def product_decompose(
    spec: ComplexSpec,
    lines: Optional[Sequence[tuple[Vector, Vector]]],
    degrees: Sequence[int] = (2,),
) -> ProductDecomposition:
    """Split H^n through a complete reduction of X into lines x_i (x) g_i.

    Asserts dim H^n of the full complex equals the sum of the per-line
    Hochschild dimensions of (A, m(g_i)).
    """
    if lines is None:
        raise NotCompletelyReducible("no decomposition available")
    per_line = []
    totals = {n: 0 for n in degrees}
    for _x, g in lines:
        m_i = spec.m.evaluate(g)
        hs = hochschild_spec(m_i)
        results = {n: hs.cohomology(n) for n in degrees}
        per_line.append(results)
        for n in degrees:
            totals[n] += results[n].dim_h
    for n in degrees:
        if spec.cohomology(n).dim_h != totals[n]:
            raise NotCompletelyReducible(
                f"H^{n} dimension does not match the product of line cohomologies"
            )
    return ProductDecomposition(
        lines=tuple((tuple(x), tuple(g)) for x, g in lines),
        per_line=tuple(per_line),
        totals=totals,
    )
