"""Exact dense linear algebra over the library's fields.

Matrices are immutable tuples of tuples of :class:`FieldElement`; vectors
are plain tuples.  Everything is computed by fraction-free Gaussian
elimination in the exact field, so ranks, kernels and solutions are exact.
"""

from __future__ import annotations

from .errors import DimensionMismatch, SingularMatrix
from .fields import Field, FieldElement

Vector = tuple[FieldElement, ...]


class Matrix:
    __slots__ = ("field", "rows", "_ncols", "_rref")

    def __init__(self, field: Field, rows, ncols: int | None = None):
        rows = tuple(tuple(r) for r in rows)
        width = len(rows[0]) if rows else (ncols or 0)
        if any(len(r) != width for r in rows):
            raise DimensionMismatch("ragged rows")
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "_ncols", width)
        object.__setattr__(self, "_rref", None)

    def __setattr__(self, name, value):
        if name == "_rref" and getattr(self, name, None) is None:
            object.__setattr__(self, name, value)
            return
        raise AttributeError("Matrix is immutable")

    # -- construction -------------------------------------------------------

    @classmethod
    def identity(cls, field: Field, n: int) -> "Matrix":
        z, o = field.zero, field.one
        return cls(field, [[o if i == j else z for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, field: Field, m: int, n: int) -> "Matrix":
        z = field.zero
        return cls(field, [[z] * n for _ in range(m)])

    @classmethod
    def from_ints(cls, field: Field, rows) -> "Matrix":
        return cls(field, [[field.from_int(v) for v in r] for r in rows])

    @classmethod
    def diagonal(cls, field: Field, entries) -> "Matrix":
        entries = list(entries)
        z = field.zero
        n = len(entries)
        return cls(field, [[entries[i] if i == j else z for j in range(n)] for i in range(n)])

    # -- shape / access -----------------------------------------------------

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def ncols(self) -> int:
        return self._ncols

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def row(self, i: int) -> Vector:
        return self.rows[i]

    def col(self, j: int) -> Vector:
        return tuple(r[j] for r in self.rows)

    def is_square(self) -> bool:
        return self.nrows == self.ncols

    def is_zero(self) -> bool:
        return all(not e for r in self.rows for e in r)

    # -- arithmetic ----------------------------------------------------------

    def _check_same_field(self, other: "Matrix"):
        if self.field != other.field:
            raise DimensionMismatch("matrices over different fields")

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check_same_field(other)
        if self.shape != other.shape:
            raise DimensionMismatch(f"{self.shape} + {other.shape}")
        return Matrix(self.field, [
            [a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self.rows, other.rows)
        ], ncols=self.ncols)

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._check_same_field(other)
        if self.shape != other.shape:
            raise DimensionMismatch(f"{self.shape} - {other.shape}")
        return Matrix(self.field, [
            [a - b for a, b in zip(r1, r2)] for r1, r2 in zip(self.rows, other.rows)
        ], ncols=self.ncols)

    def __neg__(self) -> "Matrix":
        return Matrix(self.field, [[-a for a in r] for r in self.rows], ncols=self.ncols)

    def __mul__(self, other: "Matrix") -> "Matrix":
        if not isinstance(other, Matrix):
            return NotImplemented
        self._check_same_field(other)
        if self.ncols != other.nrows:
            raise DimensionMismatch(f"{self.shape} * {other.shape}")
        cols = [other.col(j) for j in range(other.ncols)]
        out = []
        for r in self.rows:
            out.append([_dot(r, c, self.field) for c in cols])
        return Matrix(self.field, out, ncols=other.ncols)

    def scale(self, c: FieldElement) -> "Matrix":
        return Matrix(self.field, [[c * a for a in r] for r in self.rows], ncols=self.ncols)

    def transpose(self) -> "Matrix":
        if not self.rows:
            return Matrix(self.field, [() for _ in range(self._ncols)], ncols=0)
        return Matrix(self.field, zip(*self.rows), ncols=self.nrows)

    def power(self, k: int) -> "Matrix":
        out = Matrix.identity(self.field, self.nrows)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return (self.field == other.field and self.rows == other.rows
                and self._ncols == other._ncols)

    def __hash__(self):
        return hash((self.field, self.rows, self._ncols))

    def __repr__(self):
        body = "; ".join(" ".join(str(e) for e in r) for r in self.rows)
        return f"Matrix[{body}]"

    # -- elimination ----------------------------------------------------------

    def rref(self) -> tuple["Matrix", tuple[int, ...]]:
        """Reduced row-echelon form and its pivot columns (cached)."""
        if self._rref is not None:
            return self._rref
        rows = [list(r) for r in self.rows]
        m, n = self.nrows, self.ncols
        pivots = []
        lead = 0
        for col in range(n):
            pivot = next((r for r in range(lead, m) if rows[r][col]), None)
            if pivot is None:
                continue
            rows[lead], rows[pivot] = rows[pivot], rows[lead]
            inv = self.field.one / rows[lead][col]
            rows[lead] = [inv * a for a in rows[lead]]
            for r in range(m):
                if r != lead and rows[r][col]:
                    c = rows[r][col]
                    rows[r] = [a - c * b for a, b in zip(rows[r], rows[lead])]
            pivots.append(col)
            lead += 1
            if lead == m:
                break
        result = (Matrix(self.field, rows, ncols=n), tuple(pivots))
        self._rref = result
        return result

    def rank(self) -> int:
        return len(self.rref()[1])

    def row_space(self) -> "Matrix":
        """RREF basis of the row space, zero rows dropped."""
        red, pivots = self.rref()
        return Matrix(self.field, red.rows[: len(pivots)], ncols=self.ncols)

    def kernel_basis(self) -> tuple[Vector, ...]:
        """Canonical basis of the right null space {x : Ax = 0}."""
        red, pivots = self.rref()
        n = self.ncols
        z, o = self.field.zero, self.field.one
        pivot_set = set(pivots)
        free = [j for j in range(n) if j not in pivot_set]
        basis = []
        for f in free:
            v = [z] * n
            v[f] = o
            for r, pc in enumerate(pivots):
                v[pc] = -red.rows[r][f]
            basis.append(tuple(v))
        return tuple(basis)

    def solve(self, b: Vector) -> Vector | None:
        """A particular solution of Ax = b (free variables zero), or None."""
        if len(b) != self.nrows:
            raise DimensionMismatch("rhs length mismatch")
        aug = Matrix(self.field, [list(r) + [bv] for r, bv in zip(self.rows, b)])
        red, pivots = aug.rref()
        n = self.ncols
        if n in pivots:
            return None
        z = self.field.zero
        x = [z] * n
        for r, pc in enumerate(pivots):
            x[pc] = red.rows[r][n]
        return tuple(x)

    def inverse(self) -> "Matrix":
        if not self.is_square():
            raise DimensionMismatch("inverse of a non-square matrix")
        n = self.nrows
        ident = Matrix.identity(self.field, n)
        aug = Matrix(self.field, [
            list(r) + list(i) for r, i in zip(self.rows, ident.rows)
        ])
        red, pivots = aug.rref()
        if tuple(pivots) != tuple(range(n)):
            raise SingularMatrix("matrix is singular")
        return Matrix(self.field, [r[n:] for r in red.rows])

    def det(self) -> FieldElement:
        if not self.is_square():
            raise DimensionMismatch("determinant of a non-square matrix")
        rows = [list(r) for r in self.rows]
        n = self.nrows
        det = self.field.one
        for col in range(n):
            pivot = next((r for r in range(col, n) if rows[r][col]), None)
            if pivot is None:
                return self.field.zero
            if pivot != col:
                rows[col], rows[pivot] = rows[pivot], rows[col]
                det = -det
            det = det * rows[col][col]
            inv = self.field.one / rows[col][col]
            for r in range(col + 1, n):
                if rows[r][col]:
                    c = inv * rows[r][col]
                    rows[r] = [a - c * b for a, b in zip(rows[r], rows[col])]
        return det

    def is_symmetric(self) -> bool:
        return self == self.transpose()

    def is_antisymmetric(self) -> bool:
        return self == -self.transpose()

    def is_alternating(self) -> bool:
        """Antisymmetric with zero diagonal (f(v, v) = 0 for all v)."""
        return self == -self.transpose() and all(
            not self.rows[i][i] for i in range(min(self.nrows, self.ncols))
        )


# ---------------------------------------------------------------------------
# vector helpers
# ---------------------------------------------------------------------------

def _dot(u: Vector, v: Vector, field: Field) -> FieldElement:
    acc = field.zero
    for a, b in zip(u, v):
        if a and b:
            acc = acc + a * b
    return acc


def vadd(u: Vector, v: Vector) -> Vector:
    return tuple(a + b for a, b in zip(u, v))


def vsub(u: Vector, v: Vector) -> Vector:
    return tuple(a - b for a, b in zip(u, v))


def vneg(u: Vector) -> Vector:
    return tuple(-a for a in u)


def vscale(c: FieldElement, u: Vector) -> Vector:
    return tuple(c * a for a in u)


def vzero(field: Field, n: int) -> Vector:
    return (field.zero,) * n


def is_zero_vector(u: Vector) -> bool:
    return all(not a for a in u)


def unit_vector(field: Field, n: int, i: int) -> Vector:
    return tuple(field.one if j == i else field.zero for j in range(n))


def mat_vec(m: Matrix, v: Vector) -> Vector:
    if m.ncols != len(v):
        raise DimensionMismatch("matrix/vector shape mismatch")
    return tuple(_dot(r, v, m.field) for r in m.rows)


def vec_mat(v: Vector, m: Matrix) -> Vector:
    if m.nrows != len(v):
        raise DimensionMismatch("vector/matrix shape mismatch")
    return tuple(_dot(v, m.col(j), m.field) for j in range(m.ncols))


def bilinear(u: Vector, g: Matrix, v: Vector) -> FieldElement:
    """u^T g v."""
    return _dot(vec_mat(u, g), v, g.field)


def stack_rows(field: Field, blocks) -> Matrix:
    rows = []
    width = None
    for b in blocks:
        if isinstance(b, Matrix):
            width = b.ncols if width is None else width
            rows.extend(b.rows)
        else:
            rows.extend(b)
    return Matrix(field, rows, ncols=width)


def from_columns(field: Field, cols) -> Matrix:
    return Matrix(field, cols).transpose()


def kron(a: Matrix, b: Matrix) -> Matrix:
    """Kronecker product."""
    rows = []
    for ra in a.rows:
        for rb in b.rows:
            rows.append([x * y for x in ra for y in rb])
    return Matrix(a.field, rows)


def block_diag(field: Field, blocks) -> Matrix:
    n = sum(b.nrows for b in blocks)
    z = field.zero
    rows = [[z] * n for _ in range(n)]
    off = 0
    for b in blocks:
        for i in range(b.nrows):
            for j in range(b.ncols):
                rows[off + i][off + j] = b[i, j]
        off += b.nrows
    return Matrix(field, rows)
