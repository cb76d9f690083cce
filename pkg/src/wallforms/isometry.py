"""Elements of the orthogonal group O(V, q).

An :class:`Isometry` wraps an invertible matrix M (columns are the images
of the basis vectors) and is validated at construction: M preserves q
exactly iff N = M^T Q M - Q satisfies N + N^T = 0 and diag(N) = 0.

Constructions: reflections along anisotropic vectors and Eichler
transformations from an isotropic vector and an orthogonal partner.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import (
    DimensionMismatch,
    IsotropicVector,
    NotAnIsometry,
    NotInvariant,
    NotRegular,
    PreconditionError,
)
from .fields import Field, FieldElement
from .linalg import Matrix, Vector, from_columns, mat_vec, vadd, vsub, vscale
from .quadspace import QuadraticSpace, Subspace


def _isometry_defect_witness(space: QuadraticSpace, mat: Matrix) -> Vector | None:
    """A vector x with q(Mx) != q(x), or None if M preserves q."""
    n = space.dim
    defect = mat.transpose() * space.qmat * mat - space.qmat
    for i in range(n):
        if defect[i, i]:
            return space.basis_vector(i)
    sym = defect + defect.transpose()
    for i in range(n):
        for j in range(i + 1, n):
            if sym[i, j]:
                return vadd(space.basis_vector(i), space.basis_vector(j))
    return None


@dataclass(frozen=True)
class Isometry:
    space: QuadraticSpace
    mat: Matrix

    def __post_init__(self):
        if self.mat.shape != (self.space.dim, self.space.dim):
            raise DimensionMismatch("matrix shape does not match the space")
        witness = _isometry_defect_witness(self.space, self.mat)
        if witness is not None:
            raise NotAnIsometry(
                "matrix does not preserve the quadratic form", witness=witness
            )

    def apply(self, v: Vector) -> Vector:
        return mat_vec(self.mat, v)

    def __mul__(self, other: "Isometry") -> "Isometry":
        if not isinstance(other, Isometry):
            return NotImplemented
        if other.space != self.space:
            raise DimensionMismatch("isometries of different spaces")
        return Isometry(self.space, self.mat * other.mat)

    def inverse(self) -> "Isometry":
        return Isometry(self.space, self.mat.inverse())

    def is_identity(self) -> bool:
        return self.mat == Matrix.identity(self.space.field, self.space.dim)

    def is_involution(self) -> bool:
        return (self.mat * self.mat) == Matrix.identity(self.space.field, self.space.dim)

    def displacement(self) -> Matrix:
        """M - I; its kernel is the fixed space, its image the residual space."""
        return self.mat - Matrix.identity(self.space.field, self.space.dim)

    def fixed_space(self) -> Subspace:
        return Subspace.from_vectors(self.space, self.displacement().kernel_basis())

    def residual_space(self) -> Subspace:
        return Subspace.from_vectors(self.space, self.displacement().transpose().rows)

    def unipotency_index(self) -> int | None:
        """Least k with (M - I)^k = 0, or None if M - I is not nilpotent.
        The identity gets index 0 by convention."""
        n = self.space.dim
        delta = self.displacement()
        power = delta
        if power.is_zero():
            return 0
        for k in range(1, n + 1):
            if power.is_zero():
                return k
            power = power * delta
        return None

    def is_unipotent2(self) -> bool:
        """(M - I)^2 = 0; includes the identity."""
        delta = self.displacement()
        return (delta * delta).is_zero()

    def is_interchange(self) -> bool:
        """4-dimensional with a 2-dimensional totally isotropic fixed space."""
        if self.space.dim != 4:
            return False
        k = self.fixed_space()
        return k.dim == 2 and k.is_totally_isotropic()

    def restrict(self, sub: Subspace) -> "Isometry":
        """Restriction to an invariant regular subspace, as an isometry of the
        subspace with the form written in the coordinates of its RREF basis."""
        if sub.space != self.space:
            raise DimensionMismatch("subspace of a different space")
        if not sub.is_regular():
            raise NotRegular("restriction requires a regular subspace")
        basis = sub.basis
        images = []
        for v in basis.rows:
            coords = sub.coordinates(self.apply(v))
            if coords is None:
                raise NotInvariant("subspace is not invariant under the isometry")
            images.append(coords)
        sub_q = basis * self.space.qmat * basis.transpose()
        sub_space = QuadraticSpace.from_q_upper(self.space.field, sub_q)
        return Isometry(sub_space, from_columns(self.space.field, images))

    def __repr__(self):
        return f"Isometry({self.mat!r})"


def identity_isometry(space: QuadraticSpace) -> Isometry:
    return Isometry(space, Matrix.identity(space.field, space.dim))


def make_isometry(space: QuadraticSpace, rows) -> Isometry:
    """Validate and wrap a matrix given as rows of field elements or ints."""
    if rows and rows[0] and isinstance(rows[0][0], FieldElement):
        mat = Matrix(space.field, rows)
    else:
        mat = Matrix.from_ints(space.field, rows)
    return Isometry(space, mat)


def reflection(space: QuadraticSpace, u: Vector) -> Isometry:
    """The orthogonal reflection along u: x -> x - (b(u, x) / q(u)) u."""
    qu = space.eval_q(u)
    if not qu:
        raise IsotropicVector("reflection requires q(u) != 0")
    cols = []
    for j in range(space.dim):
        e = space.basis_vector(j)
        cols.append(vsub(e, vscale(space.eval_b(u, e) / qu, u)))
    return Isometry(space, from_columns(space.field, cols))


def eichler(space: QuadraticSpace, x: Vector, w: Vector) -> Isometry:
    """The Eichler transformation for isotropic x and w orthogonal to x:
    v -> v + b(v, x) w - b(v, w) x - q(w) b(v, x) x."""
    if space.eval_q(x):
        raise PreconditionError("Eichler transformation requires q(x) = 0")
    if space.eval_b(x, w):
        raise PreconditionError("Eichler transformation requires b(x, w) = 0")
    qw = space.eval_q(w)
    cols = []
    for j in range(space.dim):
        v = space.basis_vector(j)
        bvx = space.eval_b(v, x)
        bvw = space.eval_b(v, w)
        img = vadd(v, vscale(bvx, w))
        img = vsub(img, vscale(bvw, x))
        img = vsub(img, vscale(qw * bvx, x))
        cols.append(img)
    return Isometry(space, from_columns(space.field, cols))


# ---------------------------------------------------------------------------
# spinor norms of reflection words
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SquareClass:
    """A nonzero field element up to multiplication by nonzero squares."""

    field: Field
    rep: FieldElement

    def __post_init__(self):
        if not self.rep:
            raise PreconditionError("square classes live in F^x")

    def is_trivial(self) -> bool:
        return self.field.is_square(self.rep)

    def __eq__(self, other):
        if not isinstance(other, SquareClass):
            return NotImplemented
        if self.field != other.field:
            return False
        return self.field.is_square(self.rep / other.rep)

    def __hash__(self):
        # classes over these fields cannot be hashed canonically in general
        return hash(self.field)

    def __repr__(self):
        return f"SquareClass({self.rep})"


@dataclass(frozen=True)
class ReflectionWord:
    """A product of reflections, recorded by its anisotropic factor vectors."""

    space: QuadraticSpace
    factors: tuple[Vector, ...]

    def __post_init__(self):
        for u in self.factors:
            if not self.space.eval_q(u):
                raise IsotropicVector("reflection word factors must be anisotropic")

    def isometry(self) -> Isometry:
        out = identity_isometry(self.space)
        for u in self.factors:
            out = out * reflection(self.space, u)
        return out

    def spinor_norm(self) -> SquareClass:
        """The class of the product of the q-values of the factors."""
        acc = self.space.field.one
        for u in self.factors:
            acc = acc * self.space.eval_q(u)
        return SquareClass(self.space.field, acc)


def spinor_norm_word(word: ReflectionWord) -> SquareClass:
    return word.spinor_norm()
