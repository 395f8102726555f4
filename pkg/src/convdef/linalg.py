"""Dense exact linear algebra over Q and F_p.

Everything here is immutable after construction.  Matrices are dense
tuple-of-tuples in row-major order; vectors are plain tuples.  Subspaces
are kept in reduced row-echelon form so that equal subspaces compare
equal as values.  Target sizes are tiny (ambient dimension well under a
hundred), so no sparse formats and no fraction-free tricks.
"""

from __future__ import annotations

from typing import Iterable, Sequence

from .errors import NotASubspace, ShapeError
from .fields import Field, require_same_field

Vector = tuple


class Matrix:
    __slots__ = ("field", "rows", "cols", "data")

    def __init__(self, field: Field, rows: int, cols: int, data: tuple):
        # Trusted constructor: `data` must already be normalized entries.
        self.field = field
        self.rows = rows
        self.cols = cols
        self.data = data

    @classmethod
    def from_rows(cls, field: Field, rows: Iterable[Sequence]) -> Matrix:
        data = tuple(tuple(field.coerce(x) for x in row) for row in rows)
        nr = len(data)
        nc = len(data[0]) if nr else 0
        if any(len(r) != nc for r in data):
            raise ShapeError("ragged rows")
        return cls(field, nr, nc, data)

    @classmethod
    def zeros(cls, field: Field, rows: int, cols: int) -> Matrix:
        z = field.zero
        return cls(field, rows, cols, tuple((z,) * cols for _ in range(rows)))

    @classmethod
    def identity(cls, field: Field, n: int) -> Matrix:
        z, o = field.zero, field.one
        return cls(field, n, n, tuple(tuple(o if i == j else z for j in range(n)) for i in range(n)))

    @classmethod
    def column(cls, field: Field, vec: Sequence) -> Matrix:
        return cls(field, len(vec), 1, tuple((field.coerce(x),) for x in vec))

    @classmethod
    def row_vector(cls, field: Field, vec: Sequence) -> Matrix:
        return cls(field, 1, len(vec), (tuple(field.coerce(x) for x in vec),))

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Matrix)
            and self.field == other.field
            and self.rows == other.rows
            and self.cols == other.cols
            and self.data == other.data
        )

    def __hash__(self) -> int:
        return hash((self.field, self.rows, self.cols, self.data))

    def __repr__(self) -> str:
        f = self.field
        body = "; ".join(" ".join(f.fmt(x) for x in row) for row in self.data)
        return f"Matrix({self.rows}x{self.cols} over {f.name}: {body})"

    def _same_shape(self, other: Matrix) -> Field:
        f = require_same_field(self.field, other.field)
        if self.rows != other.rows or self.cols != other.cols:
            raise ShapeError(f"shape mismatch {self.rows}x{self.cols} vs {other.rows}x{other.cols}")
        return f

    def __add__(self, other: Matrix) -> Matrix:
        f = self._same_shape(other)
        data = tuple(
            tuple(f.add(a, b) for a, b in zip(ra, rb)) for ra, rb in zip(self.data, other.data)
        )
        return Matrix(f, self.rows, self.cols, data)

    def __sub__(self, other: Matrix) -> Matrix:
        f = self._same_shape(other)
        data = tuple(
            tuple(f.sub(a, b) for a, b in zip(ra, rb)) for ra, rb in zip(self.data, other.data)
        )
        return Matrix(f, self.rows, self.cols, data)

    def __neg__(self) -> Matrix:
        f = self.field
        return Matrix(f, self.rows, self.cols, tuple(tuple(f.neg(a) for a in r) for r in self.data))

    def scale(self, c) -> Matrix:
        f = self.field
        c = f.coerce(c)
        return Matrix(f, self.rows, self.cols, tuple(tuple(f.mul(c, a) for a in r) for r in self.data))

    def __matmul__(self, other: Matrix) -> Matrix:
        f = require_same_field(self.field, other.field)
        if self.cols != other.rows:
            raise ShapeError(f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        bt = tuple(zip(*other.data)) if other.data else ()
        p = f.char
        if p:
            data = tuple(
                tuple(sum(a * b for a, b in zip(row, col)) % p for col in bt) for row in self.data
            )
        else:
            norm = f.normalize
            data = tuple(
                tuple(norm(sum(a * b for a, b in zip(row, col))) for col in bt) for row in self.data
            )
        return Matrix(f, self.rows, other.cols, data)

    def mul_vec(self, vec: Sequence) -> Vector:
        if len(vec) != self.cols:
            raise ShapeError(f"vector length {len(vec)} vs {self.cols} columns")
        f = self.field
        p = f.char
        if p:
            return tuple(sum(a * b for a, b in zip(row, vec)) % p for row in self.data)
        norm = f.normalize
        return tuple(norm(sum(a * b for a, b in zip(row, vec))) for row in self.data)

    def transpose(self) -> Matrix:
        return Matrix(self.field, self.cols, self.rows, tuple(zip(*self.data)) if self.data else ())

    def kron(self, other: Matrix) -> Matrix:
        f = require_same_field(self.field, other.field)
        mul = f.mul
        data = tuple(
            tuple(mul(a, b) for a in arow for b in brow)
            for arow in self.data
            for brow in other.data
        )
        return Matrix(f, self.rows * other.rows, self.cols * other.cols, data)

    def hstack(self, other: Matrix) -> Matrix:
        f = require_same_field(self.field, other.field)
        if self.rows != other.rows:
            raise ShapeError("row count mismatch in hstack")
        data = tuple(ra + rb for ra, rb in zip(self.data, other.data))
        return Matrix(f, self.rows, self.cols + other.cols, data)

    def vstack(self, other: Matrix) -> Matrix:
        f = require_same_field(self.field, other.field)
        if self.cols != other.cols:
            raise ShapeError("column count mismatch in vstack")
        return Matrix(f, self.rows + other.rows, self.cols, self.data + other.data)

    def col(self, j: int) -> Vector:
        return tuple(row[j] for row in self.data)

    def row(self, i: int) -> Vector:
        return self.data[i]

    def is_zero(self) -> bool:
        z = self.field.is_zero
        return all(z(x) for row in self.data for x in row)

    def flatten(self) -> Vector:
        return tuple(x for row in self.data for x in row)

    @classmethod
    def from_flat(cls, field: Field, rows: int, cols: int, flat: Sequence) -> Matrix:
        if len(flat) != rows * cols:
            raise ShapeError("flat data length mismatch")
        data = tuple(
            tuple(field.coerce(flat[i * cols + j]) for j in range(cols)) for i in range(rows)
        )
        return cls(field, rows, cols, data)


def vec_add(field: Field, u: Sequence, v: Sequence) -> Vector:
    return tuple(field.add(a, b) for a, b in zip(u, v))

def vec_sub(field: Field, u: Sequence, v: Sequence) -> Vector:
    return tuple(field.sub(a, b) for a, b in zip(u, v))

def vec_scale(field: Field, c, v: Sequence) -> Vector:
    return tuple(field.mul(c, a) for a in v)

def vec_is_zero(field: Field, v: Sequence) -> bool:
    return all(field.is_zero(a) for a in v)

def unit_vec(field: Field, n: int, i: int) -> Vector:
    return tuple(field.one if j == i else field.zero for j in range(n))


def rref(m: Matrix) -> tuple[Matrix, tuple[int, ...], int]:
    """Reduced row-echelon form: (R, pivot columns, rank)."""
    f = m.field
    rows = [list(r) for r in m.data]
    nr, nc = m.rows, m.cols
    pivots: list[int] = []
    r = 0
    for c in range(nc):
        pivot_row = None
        for i in range(r, nr):
            if not f.is_zero(rows[i][c]):
                pivot_row = i
                break
        if pivot_row is None:
            continue
        rows[r], rows[pivot_row] = rows[pivot_row], rows[r]
        inv = f.inv(rows[r][c])
        rows[r] = [f.mul(inv, x) for x in rows[r]]
        lead = rows[r]
        for i in range(nr):
            if i != r:
                factor = rows[i][c]
                if not f.is_zero(factor):
                    rows[i] = [f.sub(x, f.mul(factor, y)) for x, y in zip(rows[i], lead)]
        pivots.append(c)
        r += 1
        if r == nr:
            break
    out = Matrix(f, nr, nc, tuple(tuple(row) for row in rows))
    return out, tuple(pivots), r


def kernel_basis(m: Matrix) -> list[Vector]:
    """Canonical basis of ker(m): one vector per free column, free entry 1."""
    f = m.field
    red, pivots, _rank = rref(m)
    piv_set = set(pivots)
    basis = []
    for free in range(m.cols):
        if free in piv_set:
            continue
        v = [f.zero] * m.cols
        v[free] = f.one
        for r_i, c in enumerate(pivots):
            v[c] = f.neg(red.data[r_i][free])
        basis.append(tuple(v))
    return basis


def solve(m: Matrix, b: Sequence) -> tuple[Vector, list[Vector]] | None:
    """Solve m x = b exactly.

    Returns None when b is not in the image, otherwise the canonical
    particular solution (free variables set to zero) and the canonical
    kernel basis.
    """
    if len(b) != m.rows:
        raise ShapeError(f"rhs length {len(b)} vs {m.rows} rows")
    f = m.field
    aug = m.hstack(Matrix.column(f, b))
    red, pivots, _rank = rref(aug)
    if m.cols in pivots:
        return None
    m_pivots = [c for c in pivots if c < m.cols]
    x = [f.zero] * m.cols
    for r_i, c in enumerate(m_pivots):
        x[c] = red.data[r_i][m.cols]
    piv_set = set(m_pivots)
    kernel = []
    for free in range(m.cols):
        if free in piv_set:
            continue
        v = [f.zero] * m.cols
        v[free] = f.one
        for r_i, c in enumerate(m_pivots):
            v[c] = f.neg(red.data[r_i][free])
        kernel.append(tuple(v))
    return tuple(x), kernel


class Subspace:
    """Subspace of F^n held as an RREF row basis (canonical form)."""

    __slots__ = ("ambient", "basis")

    def __init__(self, ambient: int, basis: Matrix):
        # Trusted constructor: basis must be RREF with no zero rows.
        self.ambient = ambient
        self.basis = basis

    @classmethod
    def span(cls, field: Field, ambient: int, vectors: Iterable[Sequence]) -> Subspace:
        vecs = [tuple(field.coerce(x) for x in v) for v in vectors]
        for v in vecs:
            if len(v) != ambient:
                raise ShapeError(f"vector length {len(v)} vs ambient {ambient}")
        if not vecs:
            return cls(ambient, Matrix(field, 0, ambient, ()))
        red, _piv, rank = rref(Matrix(field, len(vecs), ambient, tuple(vecs)))
        return cls(ambient, Matrix(field, rank, ambient, red.data[:rank]))

    @classmethod
    def zero(cls, field: Field, ambient: int) -> Subspace:
        return cls(ambient, Matrix(field, 0, ambient, ()))

    @classmethod
    def full(cls, field: Field, ambient: int) -> Subspace:
        return cls(ambient, Matrix.identity(field, ambient))

    @property
    def field(self) -> Field:
        return self.basis.field

    @property
    def dim(self) -> int:
        return self.basis.rows

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Subspace)
            and self.ambient == other.ambient
            and self.basis == other.basis
        )

    def __hash__(self) -> int:
        return hash((self.ambient, self.basis))

    def __repr__(self) -> str:
        return f"Subspace(dim {self.dim} of F^{self.ambient})"

    def contains_vector(self, v: Sequence) -> bool:
        f = self.field
        if len(v) != self.ambient:
            raise ShapeError(f"vector length {len(v)} vs ambient {self.ambient}")
        v = list(f.coerce(x) for x in v)
        piv = [next(j for j, x in enumerate(row) if not f.is_zero(x)) for row in self.basis.data]
        for row, c in zip(self.basis.data, piv):
            factor = v[c]
            if not f.is_zero(factor):
                v = [f.sub(x, f.mul(factor, y)) for x, y in zip(v, row)]
        return all(f.is_zero(x) for x in v)

    def contains_space(self, other: Subspace) -> bool:
        return all(self.contains_vector(row) for row in other.basis.data)

    def sum(self, other: Subspace) -> Subspace:
        self._check_compatible(other)
        return Subspace.span(self.field, self.ambient, self.basis.data + other.basis.data)

    def intersect(self, other: Subspace) -> Subspace:
        # Zassenhaus: echelonize [A A; B 0]; rows with zero left half carry
        # the intersection in their right half.
        self._check_compatible(other)
        f, n = self.field, self.ambient
        z = (f.zero,) * n
        block = [row + row for row in self.basis.data] + [row + z for row in other.basis.data]
        if not block:
            return Subspace.zero(f, n)
        red, _piv, rank = rref(Matrix(f, len(block), 2 * n, tuple(block)))
        inter = [
            row[n:]
            for row in red.data[:rank]
            if all(f.is_zero(x) for x in row[:n])
        ]
        return Subspace.span(f, n, inter)

    def equation_matrix(self) -> Matrix:
        """Rows z with z . x = 0 exactly cutting out this subspace."""
        f = self.field
        if self.dim == 0:
            return Matrix.identity(f, self.ambient)
        eqs = kernel_basis(self.basis)
        return Matrix(f, len(eqs), self.ambient, tuple(eqs))

    def _check_compatible(self, other: Subspace) -> None:
        require_same_field(self.field, other.field)
        if self.ambient != other.ambient:
            raise ShapeError(f"ambient mismatch {self.ambient} vs {other.ambient}")


def image(m: Matrix) -> Subspace:
    """Column space of m as a subspace of F^rows."""
    return Subspace.span(m.field, m.rows, m.transpose().data)


def kernel_space(m: Matrix) -> Subspace:
    return Subspace.span(m.field, m.cols, kernel_basis(m))


def preimage(m: Matrix, target: Subspace) -> Subspace:
    """{x : m x in target} as a subspace of the domain."""
    require_same_field(m.field, target.field)
    if m.rows != target.ambient:
        raise ShapeError(f"map lands in F^{m.rows}, subspace of F^{target.ambient}")
    eqs = target.equation_matrix()
    return kernel_space(eqs @ m)


def quotient_dim(sub: Subspace, total: Subspace) -> int:
    """dim(total / sub); requires sub to be contained in total."""
    if not total.contains_space(sub):
        raise NotASubspace("first argument is not contained in the second")
    return total.dim - sub.dim
