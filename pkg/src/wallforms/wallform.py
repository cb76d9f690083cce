"""The nondegenerate bilinear form an isometry induces on its residual space.

For an isometry t of (V, q), the residual space r(t) = im(t - id) carries
the form

    w(t(x) - x, t(y) - y) = b(t(x) - x, y),

which is nondegenerate and satisfies w(u, u) = -q(u).  It is symmetric
exactly when t^2 = id and antisymmetric exactly when (t - id)^2 = 0.

The residual basis is canonical: the nonzero rows of the reduced
row-echelon form of (M - I)^T, i.e. the column-echelon basis of
im(M - I).  Preimages are the deterministic solutions (free variables
zero) of (M - I) y = u.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InvariantViolation, NotSymmetric
from .fields import FieldElement
from .linalg import Matrix, Vector, bilinear
from .quadspace import SymBilinearForm, Subspace
from .isometry import Isometry


@dataclass(frozen=True)
class WallForm:
    tau: Isometry
    basis: tuple[Vector, ...]      # canonical basis of r(tau)
    preimages: tuple[Vector, ...]  # y_j with tau(y_j) - y_j = basis[j]
    gram: Matrix                   # gram[i][j] = b(basis[i], preimages[j])

    @property
    def s(self) -> int:
        return len(self.basis)

    def form(self) -> SymBilinearForm:
        return SymBilinearForm(
            self.tau.space.field, self.basis, self.gram, self.tau.space
        )

    def carrier(self) -> Subspace:
        return Subspace.from_vectors(self.tau.space, self.basis)

    def coords(self, u: Vector) -> Vector:
        c = Matrix(self.tau.space.field, self.basis).transpose().solve(u)
        if c is None:
            raise InvariantViolation("vector is not in the residual space")
        return c

    def evaluate(self, u: Vector, v: Vector) -> FieldElement:
        """w(u, v) for arbitrary u, v in r(tau)."""
        return bilinear(self.coords(u), self.gram, self.coords(v))

    def is_symmetric(self) -> bool:
        return self.gram.is_symmetric()

    def is_antisymmetric(self) -> bool:
        return self.gram.is_antisymmetric()

    def is_alternating(self) -> bool:
        return self.gram.is_alternating()


def wall_form(tau: Isometry) -> WallForm:
    space = tau.space
    n_mat = tau.displacement()
    basis = n_mat.transpose().row_space().rows
    preimages = []
    for u in basis:
        y = n_mat.solve(u)
        if y is None:
            raise InvariantViolation("residual vector has no preimage")
        preimages.append(y)
    gram = Matrix(space.field, [
        [space.eval_b(u, y) for y in preimages] for u in basis
    ])
    # two theorems, checked eagerly: nondegeneracy and the diagonal law
    if basis and not gram.det():
        raise InvariantViolation("residual form is degenerate")
    for i, u in enumerate(basis):
        if gram[i, i] != -space.eval_q(u):
            raise InvariantViolation("diagonal law w(u, u) = -q(u) failed")
    return WallForm(tau, tuple(basis), tuple(preimages), gram)


@dataclass(frozen=True)
class WallClassification:
    symmetric: bool
    antisymmetric: bool
    alternating: bool


def classify(w: WallForm) -> WallClassification:
    """All three flags are reported independently: in characteristic 2,
    symmetric and antisymmetric coincide."""
    return WallClassification(
        symmetric=w.is_symmetric(),
        antisymmetric=w.is_antisymmetric(),
        alternating=w.is_alternating(),
    )


@dataclass(frozen=True)
class AssocQuadratic:
    """The quadratic form v -> w(v, v) of a symmetric form w, written as an
    upper-triangular matrix over the residual basis."""

    basis: tuple[Vector, ...]
    qmat: Matrix

    def value_coords(self, coords: Vector) -> FieldElement:
        return bilinear(coords, self.qmat, coords)

    def diagonal(self) -> tuple[FieldElement, ...]:
        return tuple(self.qmat[i, i] for i in range(self.qmat.nrows))

    def is_totally_singular(self) -> bool:
        polar = self.qmat + self.qmat.transpose()
        return polar.is_zero()


def assoc_quadratic(w: WallForm) -> AssocQuadratic:
    if not w.is_symmetric():
        raise NotSymmetric("associated quadratic form needs a symmetric input")
    field = w.tau.space.field
    s = w.s
    z = field.zero
    rows = [[z] * s for _ in range(s)]
    for i in range(s):
        rows[i][i] = w.gram[i, i]
        for j in range(i + 1, s):
            rows[i][j] = w.gram[i, j] + w.gram[j, i]
    return AssocQuadratic(w.basis, Matrix(field, rows))
