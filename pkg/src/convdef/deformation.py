"""Deformations of associative algebras over coalgebra extensions.

A deformation of (A, m) along an extension C -> Ctilde is an associative
multiplication over Ctilde restricting to m on C.  It is determined by
its restriction to X, and associativity is exactly the generalized
Maurer-Cartan equation d^2(m_X) + zeta = 0, where zeta is the
obstruction 3-cocycle built from m and the extension's 2-cocycle.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional

from .coalgebra import Coalgebra, find_grouplikes
from .cohomology import Cochain, ComplexSpec, is_associative
from .convolution import (
    ConvMorphism,
    MultiMap,
    conv_compose,
    conv_tensor,
    epsilon_embed,
    identity_conv,
    pullback,
    takeuchi_invert,
)
from .errors import (
    ConvDefError,
    NotUnital,
    ShapeError,
    SpecMismatch,
    UnsupportedSearch,
)
from .extension import Extension, graded_extension
from .fields import Field
from .linalg import Matrix, Subspace, Vector, image, kernel_basis, solve


@dataclass(frozen=True)
class AlgebraMC:
    """An algebra (A, m) in the convolution category over C, optionally unital."""

    m: ConvMorphism
    unit: Optional[ConvMorphism] = None

    def __post_init__(self):
        if self.m.src_arity != 2 or self.m.tgt_arity != 1:
            raise ShapeError("multiplication must be a map C -> Hom(A(x)A, A)")
        if self.unit is not None:
            if self.unit.coalgebra != self.m.coalgebra:
                raise ShapeError("unit must live over the same coalgebra")
            if self.unit.src_arity != 0 or self.unit.tgt_arity != 1:
                raise ShapeError("unit must be a map C -> Hom(k, A)")

    @property
    def coalgebra(self) -> Coalgebra:
        return self.m.coalgebra

    @property
    def a_dim(self) -> int:
        return self.m.a_dim

    @property
    def field(self) -> Field:
        return self.m.field

    def require_valid(self) -> None:
        if not is_associative(self.m):
            raise ShapeError("multiplication is not associative in the convolution category")
        if self.unit is not None and not is_unit_of(self.m, self.unit):
            raise NotUnital("the supplied unit fails a unit axiom")


def check_associative(obj) -> bool:
    """Exact associativity test for a ConvMorphism or a Deformation."""
    if isinstance(obj, Deformation):
        return is_associative(obj.mtilde)
    return is_associative(obj)


def is_unit_of(m: ConvMorphism, u: ConvMorphism) -> bool:
    """Both unit axioms of u against m, exactly (strict Vect constraints)."""
    ida = identity_conv(m.coalgebra, m.a_dim, 1)
    return (
        conv_compose(m, conv_tensor(u, ida)) == ida
        and conv_compose(m, conv_tensor(ida, u)) == ida
    )


@dataclass(frozen=True)
class Deformation:
    """A multiplication over Ctilde in the fiber over (A, m)."""

    base: AlgebraMC
    extension: Extension
    mtilde: ConvMorphism

    def __post_init__(self):
        if self.mtilde.coalgebra != self.extension.ctilde:
            raise ShapeError("deformation multiplication must live over Ctilde")
        if self.base.coalgebra != self.extension.base:
            raise SpecMismatch("base algebra and extension base coalgebra differ")

    @property
    def m_x(self) -> Cochain:
        dc = self.extension.base.dim
        return Cochain(2, tuple(self.mtilde.components[dc:]))

    def fiber_condition_holds(self) -> bool:
        return pullback(self.mtilde, self.extension.iota, self.extension.base) == self.base.m

    def require_valid(self) -> None:
        if not self.fiber_condition_holds():
            raise SpecMismatch("multiplication does not restrict to the base algebra")
        if not is_associative(self.mtilde):
            raise ShapeError("deformed multiplication is not associative")


def make_deformation(base: AlgebraMC, ext: Extension, nu: Cochain, verify: bool = True) -> Deformation:
    """Assemble mtilde with mtilde(c, x) = m(c) + nu(x) and verify associativity."""
    if nu.degree != 2 or nu.x_dim != ext.comodule.dim:
        raise ShapeError("solution cochain must be a degree-2 cochain on X")
    comps = tuple(base.m.components) + tuple(nu.maps)
    mtilde = ConvMorphism(ext.ctilde, comps)
    d = Deformation(base=base, extension=ext, mtilde=mtilde)
    if verify:
        d.require_valid()
    return d


def complex_of(alg: AlgebraMC, ext: Extension, check: bool = False) -> ComplexSpec:
    if alg.coalgebra != ext.base:
        raise SpecMismatch("algebra and extension live over different coalgebras")
    return ComplexSpec(alg.m, ext.comodule, check=check)


def obstruction_zeta(alg: AlgebraMC, ext: Extension) -> Cochain:
    """The obstruction 3-cocycle zeta(x) = sum m(w1) o (A (x) m(w2) - m(w2) (x) A)."""
    if alg.coalgebra != ext.base:
        raise SpecMismatch("algebra and extension live over different coalgebras")
    f, a = alg.field, alg.a_dim
    ident = MultiMap.identity(f, a, 1)
    maps = []
    for s in range(ext.comodule.dim):
        acc = MultiMap.zero(f, a, 3, 1)
        for j, k, c in ext.cocycle.omega[s]:
            m_j = alg.m.components[j]
            m_k = alg.m.components[k]
            term = m_j.compose(ident.tensor(m_k)) - m_j.compose(m_k.tensor(ident))
            acc = acc + term.scale(c)
        maps.append(acc)
    zeta = Cochain(3, tuple(maps))
    if not complex_of(alg, ext).differential(zeta).is_zero():
        raise ConvDefError("obstruction is not a 3-cocycle; inputs are inconsistent")
    return zeta


@dataclass(frozen=True)
class DeformationReport:
    """Obstruction data, Maurer-Cartan solution set, and its cohomology classes."""

    zeta: Cochain
    obstruction_vanishes: bool
    nu0: Optional[Cochain]            # witness with d^2(nu0) = zeta
    base_solution: Optional[Cochain]  # -nu0, the canonical MC solution
    z2_basis: tuple[Cochain, ...]
    b2_basis: tuple[Cochain, ...]
    h2_reps: tuple[Cochain, ...]
    dim_z2: int
    dim_b2: int
    dim_h2: int
    coset_count: Optional[int]        # |F|^dim_h2 over finite fields
    zeta_class_rep: Optional[Cochain] # canonical representative of [zeta] when nonzero


def mc_solve(alg: AlgebraMC, ext: Extension) -> DeformationReport:
    """Solve d^2(nu) = -zeta; on success the solution set is base + Z^2."""
    spec = complex_of(alg, ext, check=True)
    zeta = obstruction_zeta(alg, ext)
    f = spec.field
    d2 = spec.differential_matrix(2)
    res = solve(d2, zeta.flatten())
    h2 = spec.cohomology(2)
    z2 = tuple(
        Cochain.from_flat(f, spec.a_dim, spec.x_dim, 2, row)
        for row in Subspace.span(f, spec.cochain_dim(2), kernel_basis(d2)).basis.data
    )
    b2_space = image(spec.differential_matrix(1))
    b2 = tuple(Cochain.from_flat(f, spec.a_dim, spec.x_dim, 2, row) for row in b2_space.basis.data)
    coset_count = f.char ** h2.dim_h if f.char else None
    if res is None:
        # canonical representative of [zeta] inside H^3
        b3 = image(d2)
        rep_flat = _reduce_mod(f, zeta.flatten(), b3)
        return DeformationReport(
            zeta=zeta,
            obstruction_vanishes=False,
            nu0=None,
            base_solution=None,
            z2_basis=z2,
            b2_basis=b2,
            h2_reps=h2.representatives,
            dim_z2=h2.dim_z,
            dim_b2=h2.dim_b,
            dim_h2=h2.dim_h,
            coset_count=coset_count,
            zeta_class_rep=Cochain.from_flat(f, spec.a_dim, spec.x_dim, 3, rep_flat),
        )
    nu0 = Cochain.from_flat(f, spec.a_dim, spec.x_dim, 2, res[0])
    base_solution = -nu0
    # end-to-end re-verification: the materialized multiplication must be associative
    make_deformation(alg, ext, base_solution, verify=True)
    return DeformationReport(
        zeta=zeta,
        obstruction_vanishes=True,
        nu0=nu0,
        base_solution=base_solution,
        z2_basis=z2,
        b2_basis=b2,
        h2_reps=h2.representatives,
        dim_z2=h2.dim_z,
        dim_b2=h2.dim_b,
        dim_h2=h2.dim_h,
        coset_count=coset_count,
        zeta_class_rep=None,
    )


def _reduce_mod(f: Field, vec: Vector, space: Subspace) -> Vector:
    """Canonical coset representative: reduce against the RREF basis rows."""
    v = list(f.coerce(x) for x in vec)
    for row in space.basis.data:
        piv = next(j for j, x in enumerate(row) if not f.is_zero(x))
        factor = v[piv]
        if not f.is_zero(factor):
            v = [f.sub(x, f.mul(factor, y)) for x, y in zip(v, row)]
    return tuple(v)


@dataclass(frozen=True)
class ClassifyResult:
    report: DeformationReport
    representatives: tuple[Deformation, ...]  # one per enumerated H^2 coset


def classify(alg: AlgebraMC, ext: Extension, coset_cap: int = 64) -> ClassifyResult:
    """One deformation per gauge-equivalence class of the solution set.

    Over a finite field all |F|^dim H^2 classes are materialized while the
    count stays within `coset_cap`; otherwise the base solution shifted by
    each H^2 representative direction is returned.
    """
    report = mc_solve(alg, ext)
    if not report.obstruction_vanishes:
        return ClassifyResult(report=report, representatives=())
    f = alg.field
    reps: list[Deformation] = []
    base = report.base_solution
    if f.char and report.coset_count is not None and report.coset_count <= coset_cap:
        for coeffs in itertools.product(range(f.char), repeat=report.dim_h2):
            nu = base
            for c, h in zip(coeffs, report.h2_reps):
                nu = nu + h.scale(c)
            reps.append(make_deformation(alg, ext, nu, verify=True))
    else:
        reps.append(make_deformation(alg, ext, base, verify=True))
        for h in report.h2_reps:
            reps.append(make_deformation(alg, ext, base + h, verify=True))
    return ClassifyResult(report=report, representatives=tuple(reps))


def equiv_check(d1: Deformation, d2: Deformation) -> Optional[ConvMorphism]:
    """Find a gauge f with d2 = transport of d1 by f, or None.

    Solves the linear equation d^1(f_X) = m''_X - m'_X, then builds
    f(c, x) = eps(c) I + f_X(x) and verifies the transported
    multiplication equals d2 exactly (f is invertible since it restricts
    to the identity along iota).
    """
    if d1.extension != d2.extension or d1.base != d2.base:
        raise SpecMismatch("deformations must share the extension and the base algebra")
    ext = d1.extension
    spec = complex_of(d1.base, ext)
    f = spec.field
    rhs = (d2.m_x - d1.m_x).flatten()
    res = solve(spec.differential_matrix(1), rhs)
    if res is None:
        return None
    f_x = Cochain.from_flat(f, spec.a_dim, spec.x_dim, 1, res[0])
    gauge = _gauge_from_cochain(ext, f_x)
    transported = gauge_transport(d1, gauge)
    if transported.mtilde != d2.mtilde:
        raise ConvDefError("gauge solution failed exact verification")
    return gauge


def _gauge_from_cochain(ext: Extension, f_x: Cochain) -> ConvMorphism:
    f = ext.base.field
    a = f_x.a_dim
    ident = MultiMap.identity(f, a, 1)
    comps = [ident.scale(e) for e in ext.base.counit] + list(f_x.maps)
    return ConvMorphism(ext.ctilde, tuple(comps))


def gauge_transport(d: Deformation, gauge: ConvMorphism) -> Deformation:
    """Transport the multiplication: m_f = f^{-1} * m * (f (x) f).

    When the gauge restricts to the identity along iota the result is a
    deformation of the same base; otherwise the base is transported too.
    """
    ext = d.extension
    if gauge.coalgebra != ext.ctilde:
        raise ShapeError("gauge must live over Ctilde")
    filt = ext.extension_filtration()
    inv = takeuchi_invert(gauge, filt)
    m_f = conv_compose(conv_compose(inv, d.mtilde), conv_tensor(gauge, gauge))
    restricted = pullback(m_f, ext.iota, ext.base)
    if restricted == d.base.m:
        new_base = d.base
    else:
        new_base = AlgebraMC(m=restricted, unit=None)
    out = Deformation(base=new_base, extension=ext, mtilde=m_f)
    out.require_valid()
    return out


# -- order-by-order series deformation -------------------------------------


@dataclass(frozen=True)
class SeriesStep:
    degree: int
    report: DeformationReport
    chosen: Optional[Cochain]


@dataclass(frozen=True)
class SeriesBranch:
    steps: tuple[SeriesStep, ...]
    final: AlgebraMC
    stopped_at: Optional[int]  # degree with non-vanishing obstruction class


@dataclass(frozen=True)
class SeriesResult:
    branches: tuple[SeriesBranch, ...]

    @property
    def primary(self) -> SeriesBranch:
        return self.branches[0]


def series_deform(
    m0: MultiMap,
    d_coalg: Coalgebra,
    max_degree: int,
    strategy: str = "first",
    user_cochains: Optional[dict[int, Cochain]] = None,
    branch_budget: int = 16,
) -> SeriesResult:
    """Deform (A, m0) degree by degree along the graded coalgebra D.

    Starting from the counit embedding of m0 over the degree-0 part,
    each step builds the one-layer extension D_{<n} -> D_{<=n}, solves
    the Maurer-Cartan equation there, extends the multiplication by a
    chosen solution, and continues.  Stops early when an obstruction
    class is nonzero.

    strategy: "first" takes the canonical solution, "user" takes
    `user_cochains[n]` (verified to solve the equation), "all" explores
    every solution over a finite field, capped at `branch_budget`.
    """
    if d_coalg.grading is None:
        raise ShapeError("series deformation needs a graded coalgebra")
    if not d_coalg.is_cocommutative:
        raise ShapeError("series deformation needs a cocommutative coalgebra")
    if any(a > b for a, b in zip(d_coalg.grading, d_coalg.grading[1:])):
        raise ShapeError("basis must be ordered by degree")
    if d_coalg.max_degree() < max_degree:
        raise ShapeError(
            f"coalgebra carries degrees up to {d_coalg.max_degree()} < {max_degree}"
        )
    if strategy == "all" and not d_coalg.field.char:
        raise UnsupportedSearch("enumerating all solutions needs a finite field")
    if strategy == "user" and not user_cochains:
        raise ShapeError("user strategy needs a cochain per degree")
    c0 = d_coalg.sub_on_indices(d_coalg.degree_indices(0))
    if not find_grouplikes(c0).elements:
        raise ShapeError("degree-0 part has no basis group-like")
    start = AlgebraMC(m=epsilon_embed(m0, c0))
    start.require_valid()
    branches: list[tuple[list[SeriesStep], AlgebraMC, Optional[int]]] = [([], start, None)]
    for n in range(1, max_degree + 1):
        ext = graded_extension(d_coalg, n)
        new_branches = []
        for steps, alg, stopped in branches:
            if stopped is not None:
                new_branches.append((steps, alg, stopped))
                continue
            report = mc_solve(alg, ext)
            if not report.obstruction_vanishes:
                new_branches.append(
                    (steps + [SeriesStep(n, report, None)], alg, n)
                )
                continue
            choices = _solution_choices(report, strategy, user_cochains, n, ext, alg)
            for nu in choices:
                deform = make_deformation(alg, ext, nu, verify=True)
                nxt = AlgebraMC(m=deform.mtilde)
                new_branches.append(
                    (steps + [SeriesStep(n, report, nu)], nxt, None)
                )
        if len(new_branches) > branch_budget:
            new_branches = new_branches[:branch_budget]
        branches = new_branches
    return SeriesResult(
        branches=tuple(
            SeriesBranch(steps=tuple(steps), final=alg, stopped_at=stopped)
            for steps, alg, stopped in branches
        )
    )


def _solution_choices(
    report: DeformationReport,
    strategy: str,
    user_cochains: Optional[dict[int, Cochain]],
    degree: int,
    ext: Extension,
    alg: AlgebraMC,
) -> list[Cochain]:
    base = report.base_solution
    if strategy == "first":
        return [base]
    if strategy == "user":
        if degree not in user_cochains:
            return [base]
        nu = user_cochains[degree]
        spec = complex_of(alg, ext)
        if spec.differential(nu) != -report.zeta:
            raise ShapeError(f"supplied degree-{degree} cochain does not solve the equation")
        return [nu]
    if strategy == "all":
        f = alg.field
        out = []
        for coeffs in itertools.product(range(f.char), repeat=len(report.z2_basis)):
            nu = base
            for c, z in zip(coeffs, report.z2_basis):
                nu = nu + z.scale(c)
            out.append(nu)
        return out
    raise ShapeError(f"unknown strategy {strategy!r}")


# -- unit normalization -----------------------------------------------------


@dataclass(frozen=True)
class UnitGaugeResult:
    gauge: ConvMorphism       # f, restricting to the identity on degree 0
    m_f: ConvMorphism         # transported multiplication with unit u o lambda
    u_lambda: ConvMorphism    # the unit of m_f
    u_tilde: ConvMorphism     # f * (u o lambda), a unit of the original mtilde


def unit_gauge(mtilde: ConvMorphism, u: ConvMorphism) -> UnitGaugeResult:
    """Normalize the unit of a deformation over a graded coalgebra.

    mtilde is an associative multiplication over the graded cocommutative
    Ctilde = D_{<=N} restricting on D^0 to a multiplication with unit u.
    Degree by degree a correction g is read off the unit defect and folded
    into the gauge, following f' = f * (id + g); the result satisfies both
    unit axioms for u o lambda exactly, and f * (u o lambda) is a unit of
    the original multiplication.
    """
    ct = mtilde.coalgebra
    if ct.grading is None:
        raise ShapeError("unit normalization needs a graded coalgebra")
    if not ct.is_cocommutative:
        raise ShapeError("unit normalization needs a cocommutative coalgebra")
    f = ct.field
    a = mtilde.a_dim
    zero_idx = list(ct.degree_indices(0))
    c0 = ct.sub_on_indices(zero_idx)
    if u.coalgebra != c0:
        raise ShapeError("unit must live over the degree-0 part of the coalgebra")
    iota0 = Matrix(
        f,
        ct.dim,
        len(zero_idx),
        tuple(
            tuple(f.one if i == zero_idx[j] else f.zero for j in range(len(zero_idx)))
            for i in range(ct.dim)
        ),
    )
    m0 = pullback(mtilde, iota0, c0)
    if not is_associative(mtilde):
        raise ShapeError("multiplication is not associative")
    if not is_unit_of(m0, u):
        raise NotUnital("u is not a unit of the degree-0 multiplication")
    # u o lambda: degree projection kills positive degrees
    pos = {orig: new for new, orig in enumerate(zero_idx)}
    zero_map = MultiMap.zero(f, a, 0, 1)
    u_lam = ConvMorphism(
        ct,
        tuple(
            u.components[pos[i]] if i in pos else zero_map for i in range(ct.dim)
        ),
    )
    ida = identity_conv(ct, a, 1)
    filt = ct.grading_filtration()
    gauge = ida
    for n in range(1, ct.max_degree() + 1):
        inv = takeuchi_invert(gauge, filt)
        m_f = conv_compose(conv_compose(inv, mtilde), conv_tensor(gauge, gauge))
        defect = conv_compose(m_f, conv_tensor(ida, u_lam))
        comps = []
        for i in range(ct.dim):
            if ct.grading[i] == n:
                comps.append(-defect.components[i])
            else:
                comps.append(MultiMap.zero(f, a, 1, 1))
        g = ConvMorphism(ct, tuple(comps))
        gauge = conv_compose(gauge, ida + g)
    inv = takeuchi_invert(gauge, filt)
    m_f = conv_compose(conv_compose(inv, mtilde), conv_tensor(gauge, gauge))
    if not is_unit_of(m_f, u_lam):
        raise ConvDefError("unit normalization failed exact verification")
    u_tilde = conv_compose(gauge, u_lam)
    if not is_unit_of(mtilde, u_tilde):
        raise ConvDefError("f * (u o lambda) failed to be a unit of the original multiplication")
    return UnitGaugeResult(gauge=gauge, m_f=m_f, u_lambda=u_lam, u_tilde=u_tilde)
