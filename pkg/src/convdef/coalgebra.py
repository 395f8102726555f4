"""Finite-dimensional coalgebras given by structure constants.

A coalgebra stores sparse comultiplication triples: Delta(e_i) is the sum
of coeff * e_j (x) e_k over the triples (j, k, coeff) attached to basis
index i.  Tensor powers C^(x)p are flattened row-major with the leftmost
factor most significant, so index(t_1, ..., t_p) = sum t_a * dim^(p-1-a).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Optional, Sequence

from .errors import (
    DegreeMismatch,
    NoFiltration,
    NotExhaustive,
    ShapeError,
    UnsupportedSearch,
)
from .fields import Field, require_same_field
from .linalg import Matrix, Subspace, Vector, preimage, unit_vec

Triples = tuple[tuple[int, int, object], ...]


def _normalize_triples(field: Field, dim: int, raw, what: str) -> tuple[Triples, ...]:
    """Merge duplicates, drop zeros, sort; one tuple of triples per basis index."""
    out = []
    for i in range(dim):
        acc: dict[tuple[int, int], object] = {}
        for j, k, c in raw[i]:
            if not (0 <= j < dim and 0 <= k < dim):
                raise ShapeError(f"{what} triple ({j},{k}) out of range for index {i}")
            c = field.coerce(c)
            key = (j, k)
            acc[key] = field.add(acc[key], c) if key in acc else c
        out.append(
            tuple((j, k, c) for (j, k), c in sorted(acc.items()) if not field.is_zero(c))
        )
    return tuple(out)


@dataclass(frozen=True)
class CoalgebraReport:
    coassociative: bool
    counit_left: bool
    counit_right: bool
    cocommutative: bool
    grading_compatible: Optional[bool] = None
    filtration_compatible: Optional[bool] = None

    @property
    def ok(self) -> bool:
        checks = [self.coassociative, self.counit_left, self.counit_right]
        if self.grading_compatible is not None:
            checks.append(self.grading_compatible)
        if self.filtration_compatible is not None:
            checks.append(self.filtration_compatible)
        return all(checks)

    def failures(self) -> list[str]:
        out = []
        if not self.coassociative:
            out.append("coassociativity")
        if not self.counit_left:
            out.append("left counit axiom")
        if not self.counit_right:
            out.append("right counit axiom")
        if self.grading_compatible is False:
            out.append("grading compatibility")
        if self.filtration_compatible is False:
            out.append("filtration compatibility")
        return out


@dataclass(frozen=True)
class GroupLikeSet:
    elements: tuple[Vector, ...]


class Coalgebra:
    __slots__ = ("field", "dim", "names", "delta", "counit", "grading", "filtration", "__dict__")

    def __init__(
        self,
        field: Field,
        names: Sequence[str],
        delta,
        counit: Sequence,
        grading: Optional[Sequence[int]] = None,
        filtration: Optional[Sequence[Subspace]] = None,
    ):
        self.field = field
        self.names = tuple(names)
        self.dim = len(self.names)
        if self.dim == 0:
            raise ShapeError("coalgebras here are nonzero")
        if len(delta) != self.dim or len(counit) != self.dim:
            raise ShapeError("delta/counit length must equal dim")
        self.delta = _normalize_triples(field, self.dim, delta, "delta")
        self.counit = tuple(field.coerce(x) for x in counit)
        self.grading = tuple(int(g) for g in grading) if grading is not None else None
        if self.grading is not None and len(self.grading) != self.dim:
            raise ShapeError("grading length must equal dim")
        self.filtration = tuple(filtration) if filtration is not None else None

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Coalgebra)
            and self.field == other.field
            and self.names == other.names
            and self.delta == other.delta
            and self.counit == other.counit
            and self.grading == other.grading
            and self.filtration == other.filtration
        )

    def __hash__(self) -> int:
        return hash((self.field, self.names, self.delta, self.counit, self.grading))

    def __repr__(self) -> str:
        return f"Coalgebra(dim {self.dim} over {self.field.name}, basis {list(self.names)})"

    # -- matrices -------------------------------------------------------

    @cached_property
    def delta_matrix(self) -> Matrix:
        """Delta as a dim^2 x dim matrix, rows indexed j*dim + k."""
        f, d = self.field, self.dim
        cols = []
        for i in range(d):
            col = [f.zero] * (d * d)
            for j, k, c in self.delta[i]:
                col[j * d + k] = f.add(col[j * d + k], c)
            cols.append(col)
        return Matrix(f, d * d, d, tuple(zip(*cols)))

    @cached_property
    def counit_matrix(self) -> Matrix:
        return Matrix.row_vector(self.field, self.counit)

    def eps(self, v: Sequence) -> object:
        f = self.field
        return f.normalize(sum(e * x for e, x in zip(self.counit, v)))

    # -- tensor calculus ------------------------------------------------

    def expand_slot(self, tensor: Sequence, arity: int, slot: int) -> Vector:
        """Apply Delta to one tensor factor: C^(x)arity -> C^(x)(arity+1)."""
        if not 0 <= slot < arity:
            raise ShapeError(f"slot {slot} out of range for arity {arity}")
        f, d = self.field, self.dim
        left = d ** (arity - 1 - slot)  # weight of digits right of the slot
        out = [f.zero] * (d ** (arity + 1))
        for idx, coeff in enumerate(tensor):
            if f.is_zero(coeff):
                continue
            tail = idx % left
            rest = idx // left
            i = rest % d
            head = rest // d
            base = head * (d * d * left)
            for j, k, c in self.delta[i]:
                pos = base + (j * d + k) * left + tail
                out[pos] = f.add(out[pos], f.mul(coeff, c))
        return tuple(out)

    def iterated_delta(self, c: Sequence, p: int) -> Vector:
        """Delta^(p-1)(c) in C^(x)p; p = 1 returns c itself."""
        if p < 1:
            raise ShapeError("p must be >= 1")
        cur = tuple(self.field.coerce(x) for x in c)
        for arity in range(1, p):
            cur = self.expand_slot(cur, arity, 0)
        return cur

    def delta_component(self, c: Sequence, index: Sequence[int]) -> Vector:
        """Homogeneous component of Delta^(p-1)(c) in C^I for a degree multi-index I."""
        if self.grading is None:
            raise NoFiltration("delta_component needs a graded coalgebra")
        f, d = self.field, self.dim
        c = tuple(f.coerce(x) for x in c)
        degs = {self.grading[i] for i, x in enumerate(c) if not f.is_zero(x)}
        if len(degs) > 1:
            raise DegreeMismatch(f"element is not homogeneous: degrees {sorted(degs)}")
        index = tuple(int(n) for n in index)
        if degs and sum(index) != next(iter(degs)):
            raise DegreeMismatch(f"|I| = {sum(index)} but element has degree {next(iter(degs))}")
        p = len(index)
        full = self.iterated_delta(c, p)
        out = [f.zero] * len(full)
        for idx, coeff in enumerate(full):
            if f.is_zero(coeff):
                continue
            digits = []
            rest = idx
            for _ in range(p):
                digits.append(rest % d)
                rest //= d
            digits.reverse()
            if all(self.grading[t] == n for t, n in zip(digits, index)):
                out[idx] = coeff
        return tuple(out)

    # -- validation ------------------------------------------------------

    def validate(self) -> CoalgebraReport:
        f, d = self.field, self.dim
        coassoc = True
        counit_l = True
        counit_r = True
        for i in range(d):
            e_i = unit_vec(f, d, i)
            two = self.expand_slot(e_i, 1, 0)
            if self.expand_slot(two, 2, 0) != self.expand_slot(two, 2, 1):
                coassoc = False
            left = [f.zero] * d
            right = [f.zero] * d
            for j, k, c in self.delta[i]:
                left[k] = f.add(left[k], f.mul(c, self.counit[j]))
                right[j] = f.add(right[j], f.mul(c, self.counit[k]))
            if tuple(left) != e_i:
                counit_l = False
            if tuple(right) != e_i:
                counit_r = False
        grading_ok = None
        if self.grading is not None:
            grading_ok = all(
                self.grading[j] + self.grading[k] == self.grading[i]
                for i in range(d)
                for j, k, _c in self.delta[i]
            ) and all(
                f.is_zero(self.counit[i]) for i in range(d) if self.grading[i] > 0
            )
        filt_ok = None
        if self.filtration is not None:
            filt_ok = is_coalgebra_filtration(self, list(self.filtration))
        return CoalgebraReport(
            coassociative=coassoc,
            counit_left=counit_l,
            counit_right=counit_r,
            cocommutative=self.is_cocommutative,
            grading_compatible=grading_ok,
            filtration_compatible=filt_ok,
        )

    def require_valid(self) -> None:
        report = self.validate()
        if not report.ok:
            raise ShapeError(f"invalid coalgebra: {', '.join(report.failures())} failed")

    @cached_property
    def is_cocommutative(self) -> bool:
        for triples in self.delta:
            coeffs = {(j, k): c for j, k, c in triples}
            for (j, k), c in coeffs.items():
                if coeffs.get((k, j), self.field.zero) != c:
                    return False
        return True

    # -- gradings and filtrations -----------------------------------------

    def max_degree(self) -> int:
        if self.grading is None:
            raise NoFiltration("coalgebra is not graded")
        return max(self.grading)

    def degree_indices(self, n: int) -> tuple[int, ...]:
        if self.grading is None:
            raise NoFiltration("coalgebra is not graded")
        return tuple(i for i, g in enumerate(self.grading) if g == n)

    def grading_filtration(self) -> list[Subspace]:
        """The canonical filtration C_{<=n} of a graded coalgebra."""
        if self.grading is None:
            raise NoFiltration("coalgebra is not graded")
        f, d = self.field, self.dim
        layers = []
        for n in range(self.max_degree() + 1):
            vecs = [unit_vec(f, d, i) for i, g in enumerate(self.grading) if g <= n]
            layers.append(Subspace.span(f, d, vecs))
        return layers

    def sub_on_indices(self, indices: Sequence[int], names: Optional[Sequence[str]] = None) -> Coalgebra:
        """Subcoalgebra spanned by the given basis vectors (must be closed)."""
        idx = list(indices)
        pos = {orig: new for new, orig in enumerate(idx)}
        delta = []
        for orig in idx:
            triples = []
            for j, k, c in self.delta[orig]:
                if j not in pos or k not in pos:
                    raise ShapeError("chosen basis vectors do not span a subcoalgebra")
                triples.append((pos[j], pos[k], c))
            delta.append(triples)
        return Coalgebra(
            self.field,
            names if names is not None else [self.names[i] for i in idx],
            delta,
            [self.counit[i] for i in idx],
            grading=[self.grading[i] for i in idx] if self.grading is not None else None,
        )


def is_coalgebra_filtration(c: Coalgebra, layers: Sequence[Subspace]) -> bool:
    """Check increasing, exhaustive, and Delta(C_n) inside sum C_i (x) C_{n-i}."""
    f, d = c.field, c.dim
    if not layers or layers[-1].dim != d:
        return False
    for lo, hi in zip(layers, layers[1:]):
        if not hi.contains_space(lo):
            return False
    for n, layer in enumerate(layers):
        vecs = []
        for i in range(n + 1):
            a, b = layers[i], layers[n - i]
            for u in a.basis.data:
                for v in b.basis.data:
                    vecs.append(tuple(f.mul(x, y) for x in u for y in v))
        target = Subspace.span(f, d * d, vecs)
        for row in layer.basis.data:
            if not target.contains_vector(c.delta_matrix.mul_vec(row)):
                return False
    return True


def coradical_filtration(c: Coalgebra, c0: Subspace) -> list[Subspace]:
    """Iterate C_{n+1} = Delta^{-1}(C (x) C_n + C_0 (x) C) until it reaches C.

    The bottom layer C_0 must be a subcoalgebra; raises NotExhaustive when
    the chain stabilizes strictly below the whole coalgebra.
    """
    f, d = c.field, c.dim
    if c0.ambient != d:
        raise ShapeError("ambient dimension mismatch")
    c0c0 = Subspace.span(
        f,
        d * d,
        [
            tuple(f.mul(x, y) for x in u for y in v)
            for u in c0.basis.data
            for v in c0.basis.data
        ],
    )
    for row in c0.basis.data:
        if not c0c0.contains_vector(c.delta_matrix.mul_vec(row)):
            raise ShapeError("C0 is not a subcoalgebra")
    eye = Subspace.full(f, d)
    chain = [c0]
    while True:
        cur = chain[-1]
        if cur.dim == d:
            return chain
        vecs = []
        for i in range(d):
            e_i = unit_vec(f, d, i)
            for v in cur.basis.data:
                vecs.append(tuple(f.mul(x, y) for x in e_i for y in v))
            for u in c0.basis.data:
                vecs.append(tuple(f.mul(x, y) for x in u for y in e_i))
        target = Subspace.span(f, d * d, vecs)
        nxt = preimage(c.delta_matrix, target)
        nxt = nxt.sum(cur)
        if nxt == cur:
            raise NotExhaustive(
                f"filtration stabilized at dimension {cur.dim} < {d}; C0 is not the coradical"
            )
        chain.append(nxt)
    return chain  # pragma: no cover


def find_grouplikes(c: Coalgebra, mode: str = "basis") -> GroupLikeSet:
    """Group-like elements: Delta(g) = g (x) g and eps(g) = 1.

    mode "basis" scans basis vectors only; "exhaustive" enumerates all of
    F_p^dim for small prime fields.
    """
    f, d = c.field, c.dim
    found = []
    if mode == "basis":
        for i in range(d):
            if c.delta[i] == ((i, i, f.one),) and c.counit[i] == f.one:
                found.append(unit_vec(f, d, i))
    elif mode == "exhaustive":
        if not f.char:
            raise UnsupportedSearch("exhaustive group-like search needs a finite field")
        if f.char**d > 10**6:
            raise UnsupportedSearch(f"{f.char}^{d} points is beyond the search bound")
        dm = c.delta_matrix
        for coords in itertools.product(range(f.char), repeat=d):
            v = tuple(coords)
            if c.eps(v) != f.one:
                continue
            vv = tuple(f.mul(x, y) for x in v for y in v)
            if dm.mul_vec(v) == vv:
                found.append(v)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    return GroupLikeSet(tuple(found))


# -- builtin constructors -------------------------------------------------


def trivial_k(field: Field) -> Coalgebra:
    return Coalgebra(field, ["1"], [[(0, 0, 1)]], [1], grading=[0])


def divided_power_t(n_max: int, field: Field) -> Coalgebra:
    """The subcoalgebra k[t]_{<= N} of k[t] with Delta(t^n) = sum t^i (x) t^(n-i)."""
    if n_max < 0:
        raise ShapeError("N must be >= 0")
    names = ["1"] + [f"t^{n}" if n > 1 else "t" for n in range(1, n_max + 1)]
    delta = [[(i, n - i, 1) for i in range(n + 1)] for n in range(n_max + 1)]
    counit = [1] + [0] * n_max
    return Coalgebra(field, names, delta, counit, grading=list(range(n_max + 1)))


def _monomial_name(expts: tuple[int, ...]) -> str:
    parts = []
    for v, e in enumerate(expts):
        if e == 1:
            parts.append(f"t{v + 1}")
        elif e > 1:
            parts.append(f"t{v + 1}^{e}")
    return "*".join(parts) if parts else "1"


def polynomial_multi(r: int, n_max: int, field: Field) -> Coalgebra:
    """Monomials of total degree <= N in r variables, Delta(t^P) = sum_{Q+R=P} t^Q (x) t^R."""
    if r < 1:
        raise ShapeError("need at least one variable")
    monos = sorted(
        (e for e in itertools.product(range(n_max + 1), repeat=r) if sum(e) <= n_max),
        key=lambda e: (sum(e), e),
    )
    index = {e: i for i, e in enumerate(monos)}
    delta = []
    for e in monos:
        triples = []
        for q in itertools.product(*(range(x + 1) for x in e)):
            rrest = tuple(a - b for a, b in zip(e, q))
            triples.append((index[q], index[rrest], 1))
        delta.append(triples)
    counit = [1 if sum(e) == 0 else 0 for e in monos]
    grading = [sum(e) for e in monos]
    return Coalgebra(field, [_monomial_name(e) for e in monos], delta, counit, grading=grading)


def direct_sum(parts: Sequence[Coalgebra]) -> Coalgebra:
    if not parts:
        raise ShapeError("direct sum of no coalgebras")
    field = parts[0].field
    for p in parts[1:]:
        require_same_field(field, p.field)
    all_names = [name for p in parts for name in p.names]
    unique = len(set(all_names)) == len(all_names)
    names, delta, counit, grading = [], [], [], []
    graded = all(p.grading is not None for p in parts)
    offset = 0
    for b, p in enumerate(parts):
        for i in range(p.dim):
            names.append(p.names[i] if unique else f"s{b}.{p.names[i]}")
            delta.append([(j + offset, k + offset, c) for j, k, c in p.delta[i]])
            counit.append(p.counit[i])
            if graded:
                grading.append(p.grading[i])
        offset += p.dim
    return Coalgebra(field, names, delta, counit, grading=grading if graded else None)


def grouplike_coalgebra(k: int, field: Field) -> Coalgebra:
    """The coalgebra of the group algebra on k group-like basis vectors."""
    if k < 1:
        raise ShapeError("need at least one group-like")
    return Coalgebra(
        field,
        [f"g{i}" for i in range(k)],
        [[(i, i, 1)] for i in range(k)],
        [1] * k,
        grading=[0] * k,
    )
