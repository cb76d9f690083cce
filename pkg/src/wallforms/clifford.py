"""Clifford algebras of characteristic-2 quadratic spaces with involution.

The algebra C(q) of an n-dimensional space has dimension 2^n with basis
indexed by subsets of the generators e_1..e_n (products in increasing
index order, encoded as bitmasks).  The generator relations are

    e_i^2 = q(e_i),        e_j e_i = e_i e_j + b(e_i, e_j)   (i < j),

with no signs because the characteristic is 2.  An orthogonal involution
t of the space induces an algebra involution J with J(v) = t(v) on
vectors, extended anti-multiplicatively to products.

On top of the algebra this module computes the invariants of (C(q), J):
the involution type via 1 in Alt = im(id + J), the commutative subalgebra
generated by a residual basis, alternating-generator witnesses, the
multiset of diagonal residual-form values (a bilinear Pfister form datum),
an explicit isomorphism to matrices with the transpose involution over
finite fields, conjugating elements for interchange isometries, and a
tensor-factorization witness.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .errors import (
    AlgebraMismatch,
    AlternatingForm,
    CharacteristicNot2,
    CriterionFails,
    InvariantViolation,
    NotInterchange,
    NotInvolution,
    NotOrthogonalBasis,
    NotScalarSquare,
    NotSymmetric,
    ResidualNotFixed,
    SingularMatrix,
    UnsupportedField,
    ZeroSquare,
)
from .fields import Field, FieldElement, Galois2Field
from .linalg import (
    Matrix,
    Vector,
    from_columns,
    kron,
    stack_rows,
    unit_vector,
    vadd,
)
from .quadspace import (
    QuadraticSpace,
    Subspace,
    SymBilinearForm,
    hyperbolic_basis_alternating,
    orthogonal_basis,
)
from .isometry import Isometry
from .wallform import WallForm, wall_form
from .decompose import Decomposition, decompose, interchange_normal_basis


class CliffordAlgebra:
    """Structure data and multiplication table of C(q) in characteristic 2.

    Blade-product tables are memoized lazily; entries are recomputed
    idempotently, so shared instances are safe for concurrent readers.
    """

    def __init__(self, field: Field, qvals, bmat: Matrix, space: QuadraticSpace | None = None):
        if field.characteristic() != 2:
            raise CharacteristicNot2("Clifford algebras are built in characteristic 2 only")
        self.field = field
        self.qvals = tuple(qvals)
        self.n = len(self.qvals)
        self.bmat = bmat
        self.space = space
        self.dim = 1 << self.n
        self._push_memo: dict[tuple[int, int], dict[int, FieldElement]] = {}
        self._pair_memo: dict[tuple[int, int], dict[int, FieldElement]] = {}

    @classmethod
    def from_space(cls, space: QuadraticSpace) -> "CliffordAlgebra":
        qvals = [space.eval_q(space.basis_vector(i)) for i in range(space.dim)]
        return cls(space.field, qvals, space.gram, space)

    # -- blade multiplication -------------------------------------------------

    def _push(self, blade: int, i: int) -> dict[int, FieldElement]:
        """Expansion of e_blade * e_i as a combination of blades."""
        key = (blade, i)
        cached = self._push_memo.get(key)
        if cached is not None:
            return cached
        bit = 1 << i
        if blade == 0 or blade.bit_length() - 1 < i:
            out = {blade | bit: self.field.one}
        else:
            j = blade.bit_length() - 1
            rest = blade ^ (1 << j)
            if j == i:
                out = {rest: self.qvals[i]}
            else:
                out: dict[int, FieldElement] = {}
                bij = self.bmat[i, j]
                if bij:
                    out[rest] = bij
                # bits of products of e_rest * e_i stay below j
                for b2, c2 in self._push(rest, i).items():
                    target = b2 | (1 << j)
                    prev = out.get(target)
                    val = c2 if prev is None else prev + c2
                    if val:
                        out[target] = val
                    elif prev is not None:
                        del out[target]
        self._push_memo[key] = out
        return out

    def blade_mul(self, s: int, t: int) -> dict[int, FieldElement]:
        key = (s, t)
        cached = self._pair_memo.get(key)
        if cached is not None:
            return cached
        terms = {s: self.field.one}
        rest = t
        while rest:
            i = (rest & -rest).bit_length() - 1
            rest ^= 1 << i
            new: dict[int, FieldElement] = {}
            for blade, c in terms.items():
                for b2, c2 in self._push(blade, i).items():
                    val = c * c2
                    prev = new.get(b2)
                    total = val if prev is None else prev + val
                    if total:
                        new[b2] = total
                    elif prev is not None:
                        del new[b2]
            terms = new
        self._pair_memo[key] = terms
        return terms

    # -- element constructors -------------------------------------------------

    def element(self, coeffs: dict[int, FieldElement]) -> "CliffordElement":
        clean = {b: c for b, c in coeffs.items() if c}
        return CliffordElement(self, clean)

    def zero(self) -> "CliffordElement":
        return CliffordElement(self, {})

    def scalar(self, c: FieldElement) -> "CliffordElement":
        return self.element({0: c})

    def one(self) -> "CliffordElement":
        return self.scalar(self.field.one)

    def basis_blade(self, s: int) -> "CliffordElement":
        return self.element({s: self.field.one})

    def vector(self, v: Vector) -> "CliffordElement":
        return self.element({1 << i: c for i, c in enumerate(v)})

    # -- arithmetic ------------------------------------------------------------

    def mul(self, a: "CliffordElement", b: "CliffordElement") -> "CliffordElement":
        if a.algebra is not self or b.algebra is not self:
            raise AlgebraMismatch("elements of different algebras")
        out: dict[int, FieldElement] = {}
        for s, ca in a.coeffs.items():
            for t, cb in b.coeffs.items():
                c = ca * cb
                for blade, coef in self.blade_mul(s, t).items():
                    val = coef * c
                    prev = out.get(blade)
                    total = val if prev is None else prev + val
                    if total:
                        out[blade] = total
                    elif prev is not None:
                        del out[blade]
        return CliffordElement(self, out)

    def coeff_vector(self, a: "CliffordElement") -> Vector:
        z = self.field.zero
        return tuple(a.coeffs.get(b, z) for b in range(self.dim))

    def from_coeff_vector(self, v: Vector) -> "CliffordElement":
        return self.element({b: c for b, c in enumerate(v)})

    def lmul_matrix(self, a: "CliffordElement") -> Matrix:
        cols = [self.coeff_vector(self.mul(a, self.basis_blade(t))) for t in range(self.dim)]
        return from_columns(self.field, cols)

    def rmul_matrix(self, a: "CliffordElement") -> Matrix:
        cols = [self.coeff_vector(self.mul(self.basis_blade(t), a)) for t in range(self.dim)]
        return from_columns(self.field, cols)

    def inverse(self, a: "CliffordElement") -> "CliffordElement":
        sol = self.lmul_matrix(a).solve(self.coeff_vector(self.one()))
        if sol is None:
            raise SingularMatrix("element is not invertible")
        return self.from_coeff_vector(sol)

    def center_dimension(self) -> int:
        """Dimension of the center; 1 means the algebra is central."""
        blocks = []
        for i in range(self.n):
            e = self.basis_blade(1 << i)
            blocks.append(self.lmul_matrix(e) - self.rmul_matrix(e))
        if not blocks:
            return self.dim
        return len(stack_rows(self.field, blocks).kernel_basis())

    def __repr__(self):
        return f"CliffordAlgebra(n={self.n}, {self.field.literal()})"


@lru_cache(maxsize=None)
def algebra_for_space(space: QuadraticSpace) -> CliffordAlgebra:
    """One shared (and table-memoized) algebra per quadratic space."""
    return CliffordAlgebra.from_space(space)


class CliffordElement:
    """A map from blade bitmasks to nonzero field coefficients."""

    __slots__ = ("algebra", "coeffs")

    def __init__(self, algebra: CliffordAlgebra, coeffs: dict[int, FieldElement]):
        self.algebra = algebra
        self.coeffs = coeffs

    def __add__(self, other: "CliffordElement") -> "CliffordElement":
        if other.algebra is not self.algebra:
            raise AlgebraMismatch("elements of different algebras")
        out = dict(self.coeffs)
        for b, c in other.coeffs.items():
            prev = out.get(b)
            total = c if prev is None else prev + c
            if total:
                out[b] = total
            elif prev is not None:
                del out[b]
        return CliffordElement(self.algebra, out)

    def __sub__(self, other: "CliffordElement") -> "CliffordElement":
        return self + other  # characteristic 2

    def __mul__(self, other: "CliffordElement") -> "CliffordElement":
        return self.algebra.mul(self, other)

    def scale(self, c: FieldElement) -> "CliffordElement":
        return self.algebra.element({b: c * v for b, v in self.coeffs.items()})

    def scalar_part(self) -> FieldElement:
        return self.coeffs.get(0, self.algebra.field.zero)

    def is_scalar(self) -> bool:
        return all(b == 0 for b in self.coeffs)

    def is_zero(self) -> bool:
        return not self.coeffs

    def __eq__(self, other):
        if not isinstance(other, CliffordElement):
            return NotImplemented
        return self.algebra is other.algebra and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((id(self.algebra), frozenset(self.coeffs.items())))

    def __repr__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for b in sorted(self.coeffs):
            name = "1" if b == 0 else "".join(
                f"e{i + 1}" for i in range(self.algebra.n) if b >> i & 1
            )
            c = self.coeffs[b]
            parts.append(name if (c == self.algebra.field.one and b) else
                         (str(c) if b == 0 else f"({c}){name}"))
        return "+".join(parts)


# ---------------------------------------------------------------------------
# the induced involution
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AlgebraInvolution:
    algebra: CliffordAlgebra
    tau: Isometry
    images: tuple[CliffordElement, ...]  # image of each basis blade
    matrix: Matrix                       # columns are the blade images

    def apply(self, a: CliffordElement) -> CliffordElement:
        out = self.algebra.zero()
        for b, c in a.coeffs.items():
            out = out + self.images[b].scale(c)
        return out


def natural_involution(tau: Isometry, algebra: CliffordAlgebra | None = None) -> AlgebraInvolution:
    """The involution J with J(v) = tau(v) on vectors, extended to products
    anti-multiplicatively: J(e_{i1} ... e_{il}) = tau(e_{il}) ... tau(e_{i1})."""
    space = tau.space
    if space.field.characteristic() != 2:
        raise CharacteristicNot2("the induced involution is built in characteristic 2")
    if not tau.is_involution():
        raise NotInvolution("tau^2 != id")
    alg = algebra if algebra is not None else algebra_for_space(space)
    tau_vectors = [alg.vector(tau.apply(space.basis_vector(i))) for i in range(alg.n)]
    images = []
    for blade in range(alg.dim):
        acc = alg.one()
        rest = blade
        while rest:
            i = rest.bit_length() - 1  # descending index order
            rest ^= 1 << i
            acc = acc * tau_vectors[i]
        images.append(acc)
    mat = from_columns(alg.field, [alg.coeff_vector(img) for img in images])
    if mat * mat != Matrix.identity(alg.field, alg.dim):
        raise InvariantViolation("involution does not square to the identity")
    return AlgebraInvolution(alg, tau, tuple(images), mat)


def alt_membership(inv: AlgebraInvolution, a: CliffordElement) -> CliffordElement | None:
    """A witness x with a = x + J(x), or None if a is not in Alt."""
    alg = inv.algebra
    operator = Matrix.identity(alg.field, alg.dim) + inv.matrix
    sol = operator.solve(alg.coeff_vector(a))
    return None if sol is None else alg.from_coeff_vector(sol)


def involution_type(inv: AlgebraInvolution) -> str:
    """"symplectic" iff 1 lies in Alt = im(id + J), else "orthogonal"."""
    witness = alt_membership(inv, inv.algebra.one())
    return "symplectic" if witness is not None else "orthogonal"


def sym_alt_dimensions(inv: AlgebraInvolution) -> tuple[int, int]:
    alg = inv.algebra
    operator = Matrix.identity(alg.field, alg.dim) + inv.matrix
    alt_dim = operator.rank()
    sym_dim = len(operator.kernel_basis())
    return sym_dim, alt_dim


# ---------------------------------------------------------------------------
# the commutative residual subalgebra
# ---------------------------------------------------------------------------

def _require_residual_fixed(tau: Isometry) -> WallForm:
    if tau.space.field.characteristic() != 2:
        raise CharacteristicNot2("characteristic 2 required")
    if not tau.is_involution():
        raise NotInvolution("tau^2 != id")
    if tau.residual_space() != tau.fixed_space():
        raise ResidualNotFixed("r(tau) != k(tau)")
    return wall_form(tau)


@dataclass(frozen=True)
class PhiAlgebra:
    """The commutative subalgebra generated by a residual basis: dimension
    2^s, symmetric square-central elements, self-centralizing, and multiplies
    exactly like the Clifford algebra of the restricted (totally singular)
    form."""

    algebra: CliffordAlgebra
    generators: tuple[Vector, ...]
    monomials: tuple[CliffordElement, ...]  # indexed by generator subsets
    generator_squares: tuple[FieldElement, ...]

    @property
    def s(self) -> int:
        return len(self.generators)

    @property
    def dim(self) -> int:
        return 1 << self.s


def phi_subalgebra(tau: Isometry) -> PhiAlgebra:
    wf = _require_residual_fixed(tau)
    alg = algebra_for_space(tau.space)
    gens = [alg.vector(u) for u in wf.basis]
    s = len(gens)
    monomials = []
    for subset in range(1 << s):
        acc = alg.one()
        for i in range(s):
            if subset >> i & 1:
                acc = acc * gens[i]
        monomials.append(acc)
    squares = tuple(tau.space.eval_q(u) for u in wf.basis)

    # pairwise commutation and scalar squares
    for i in range(s):
        for j in range(i + 1, s):
            if gens[i] * gens[j] != gens[j] * gens[i]:
                raise InvariantViolation("residual generators do not commute")
    for m in monomials:
        sq = m * m
        if not sq.is_scalar():
            raise InvariantViolation("monomial square is not a scalar")

    # linear independence: dimension 2^s
    coeff_rows = Matrix(alg.field, [alg.coeff_vector(m) for m in monomials])
    if coeff_rows.rank() != 1 << s:
        raise InvariantViolation("monomials are not linearly independent")

    # symmetry under the involution
    inv = natural_involution(tau, alg)
    for m in monomials:
        if inv.apply(m) != m:
            raise InvariantViolation("subalgebra is not contained in Sym")

    # self-centralizing: the centralizer of the generators has dimension 2^s
    blocks = [alg.lmul_matrix(g) - alg.rmul_matrix(g) for g in gens]
    if blocks:
        kernel = stack_rows(alg.field, blocks).kernel_basis()
        if len(kernel) != 1 << s:
            raise InvariantViolation("subalgebra is not self-centralizing")
        span = coeff_rows.transpose()
        for k in kernel:
            if span.solve(k) is None:
                raise InvariantViolation("centralizer is larger than the subalgebra")

    # multiplication law of the Clifford algebra of the restricted form
    for a in range(1 << s):
        for b in range(1 << s):
            scalar = alg.field.one
            for i in range(s):
                if a >> i & 1 and b >> i & 1:
                    scalar = scalar * squares[i]
            if monomials[a] * monomials[b] != monomials[a ^ b].scale(scalar):
                raise InvariantViolation("subalgebra does not multiply like C(q|r)")

    return PhiAlgebra(alg, tuple(wf.basis), tuple(monomials), squares)


@dataclass(frozen=True)
class AltGeneratorsReport:
    ok: bool
    explicit_witnesses: tuple[CliffordElement, ...]  # per nonempty subset
    solved_witnesses: tuple[CliffordElement, ...]


def alternating_generators_check(tau: Isometry, basis) -> AltGeneratorsReport:
    """Verify that an orthogonal residual basis generates the commutative
    subalgebra by pairwise-commuting square-central units all of whose
    nonempty products lie in Alt(C(q), J); returns Alt-witnesses."""
    wf = _require_residual_fixed(tau)
    basis = tuple(basis)
    s = len(basis)
    carrier = wf.carrier()
    if Subspace.from_vectors(tau.space, basis).basis != carrier.basis or s != wf.s:
        raise NotOrthogonalBasis("vectors do not form a basis of the residual space")
    for i in range(s):
        if not wf.evaluate(basis[i], basis[i]):
            raise ZeroSquare("residual form vanishes on a basis vector")
        for j in range(i + 1, s):
            if wf.evaluate(basis[i], basis[j]):
                raise NotOrthogonalBasis("basis is not orthogonal for the residual form")

    alg = algebra_for_space(tau.space)
    inv = natural_involution(tau, alg)
    gens = [alg.vector(u) for u in basis]
    for i in range(s):
        sq = gens[i] * gens[i]
        if not sq.is_scalar() or not sq.scalar_part():
            raise ZeroSquare("generator square is not a nonzero scalar")
        for j in range(i + 1, s):
            if gens[i] * gens[j] != gens[j] * gens[i]:
                raise InvariantViolation("generators do not commute")

    preimages = []
    for u in basis:
        y = tau.displacement().solve(u)
        if y is None:
            raise InvariantViolation("no preimage for a residual vector")
        preimages.append(alg.vector(y))

    explicit = []
    solved = []
    ok = True
    for subset in range(1, 1 << s):
        monomial = alg.one()
        for i in range(s):
            if subset >> i & 1:
                monomial = monomial * gens[i]
        first = (subset & -subset).bit_length() - 1
        rest = alg.one()
        for i in range(s):
            if subset >> i & 1 and i != first:
                rest = rest * gens[i]
        witness = preimages[first] * rest
        if witness + inv.apply(witness) != monomial:
            ok = False
        explicit.append(witness)
        general = alt_membership(inv, monomial)
        if general is None:
            ok = False
            general = alg.zero()
        solved.append(general)
    return AltGeneratorsReport(ok, tuple(explicit), tuple(solved))


# ---------------------------------------------------------------------------
# Pfister data and the transpose criterion
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PfisterDescriptor:
    """Generators a_1..a_s of the bilinear form <<a_1, ..., a_s>>, stored
    with their square-class flags.  Equality is multiset equality of square
    classes (structural equality)."""

    field: Field
    generators: tuple[FieldElement, ...]
    square_flags: tuple[bool, ...]

    @property
    def fold(self) -> int:
        return len(self.generators)

    def __eq__(self, other):
        if not isinstance(other, PfisterDescriptor):
            return NotImplemented
        if self.field != other.field or self.fold != other.fold:
            return False
        remaining = list(other.generators)
        for g in self.generators:
            match = next(
                (h for h in remaining if self.field.is_square(g / h)), None
            )
            if match is None:
                return False
            remaining.remove(match)
        return True

    def __hash__(self):
        return hash((self.field, self.fold))


def pfister_invariant(tau: Isometry) -> PfisterDescriptor:
    """Alternating residual form: all generators 1.  Nonalternating: the
    diagonal of an orthogonal basis of the residual form."""
    wf = _require_residual_fixed(tau)
    field = tau.space.field
    if wf.is_alternating():
        gens = (field.one,) * wf.s
    else:
        basis = orthogonal_basis(wf.form())
        gens = tuple(wf.evaluate(u, u) for u in basis)
        for u, g in zip(basis, gens):
            # diagonal values coincide with q on the residual space in char 2
            if g != tau.space.eval_q(u):
                raise InvariantViolation("residual diagonal does not match q")
    return PfisterDescriptor(field, gens, tuple(field.is_square(g) for g in gens))


@dataclass(frozen=True)
class TransposeCriterion:
    holds: bool
    q_values_square: bool          # q(x) in F^2 for x in a residual basis
    wall_diagonal_square: bool     # w(x, x) in F^2 for x in a residual basis
    structure: str                 # "alternating" | "unit-diagonal" | "fails"


def transpose_iso_criterion(tau: Isometry) -> TransposeCriterion:
    """Decide whether (C(q), J) is isomorphic to matrices with transpose.

    Three equivalent tests are evaluated independently and must agree:
    q square-values on a residual basis, residual-form diagonal square
    values, and the structural test (alternating, or diagonalizable with
    all-square entries)."""
    wf = _require_residual_fixed(tau)
    field = tau.space.field
    cond_q = all(field.is_square(tau.space.eval_q(u)) for u in wf.basis)
    cond_w = all(field.is_square(wf.gram[i, i]) for i in range(wf.s))
    if wf.is_alternating():
        structure = "alternating"
    else:
        diag = [wf.evaluate(u, u) for u in orthogonal_basis(wf.form())]
        structure = "unit-diagonal" if all(field.is_square(d) for d in diag) else "fails"
    cond_s = structure != "fails"
    if not (cond_q == cond_w == cond_s):
        raise InvariantViolation("transpose-criterion conditions disagree")
    return TransposeCriterion(cond_q, cond_q, cond_w, structure)


# ---------------------------------------------------------------------------
# explicit matrix isomorphism
# ---------------------------------------------------------------------------

def _split_quaternion(field: Field, qa: FieldElement, qb: FieldElement):
    """Images of the generators a, b of the quaternion algebra
    (a^2 = qa, b^2 = qb, ab + ba = 1) under an isomorphism to M_2(F).

    Works over any finite field of characteristic 2: find an element of
    square 1, derive a nilpotent, pair it into a nontrivial idempotent and
    build matrix units.
    """
    local = CliffordAlgebra(field, (qa, qb), Matrix.from_ints(field, [[0, 1], [1, 0]]))
    one = local.one()

    def vec(x, y):
        return local.element({1: x, 2: y})

    def qval(x, y):
        return x * x * qa + y * y * qb + x * y

    elems = [(x, y) for x in field.elements() for y in field.elements()]
    v = next(((x, y) for x, y in elems if qval(x, y) == field.one), None)
    if v is None:
        raise InvariantViolation("binary form fails to represent 1 over a finite field")
    vx, vy = v
    nil = vec(vx, vy) + one  # (v + 1)^2 = q(v) + 1 = 0

    idem = None
    for wx, wy in elems:
        # b(v, w) = vx wy + wx vy must be 1 so that nil*w + w*nil = 1
        if vx * wy + wx * vy != field.one:
            continue
        cand = nil * vec(wx, wy)
        if cand * cand == cand and not cand.is_zero() and cand != one:
            idem = cand
            break
    if idem is None:
        raise InvariantViolation("no nontrivial idempotent found in a split quaternion")

    e11 = idem
    e22 = one + idem
    blades = [local.basis_blade(b) for b in range(4)]
    e12 = next((e11 * c * e22 for c in blades if not (e11 * c * e22).is_zero()), None)
    e21 = None
    for c in blades:
        cand = e22 * c * e11
        if cand.is_zero():
            continue
        prod = e12 * cand
        # prod must be a nonzero multiple of e11
        lam = None
        for b, coeff in prod.coeffs.items():
            ref = e11.coeffs.get(b)
            if ref is None:
                lam = None
                break
            r = coeff / ref
            if lam is None:
                lam = r
            elif lam != r:
                lam = None
                break
        if lam and prod == e11.scale(lam):
            e21 = cand.scale(field.one / lam)
            break
    if e12 is None or e21 is None:
        raise InvariantViolation("matrix units could not be built")
    units = (e11, e12, e21, e22)
    if (e12 * e21 != e11 or e21 * e12 != e22 or e11 + e22 != one
            or e11 * e12 != e12 or e12 * e22 != e12):
        raise InvariantViolation("matrix unit relations failed")

    # coordinates of a local element in the matrix-unit basis
    unit_cols = from_columns(field, [local.coeff_vector(u) for u in units])

    def to_matrix(elt):
        coords = unit_cols.solve(local.coeff_vector(elt))
        if coords is None:
            raise InvariantViolation("matrix units do not span the quaternion algebra")
        return Matrix(field, [[coords[0], coords[1]], [coords[2], coords[3]]])

    mat_a = to_matrix(local.basis_blade(1))
    mat_b = to_matrix(local.basis_blade(2))
    return mat_a, mat_b


@dataclass(frozen=True)
class MatrixIso:
    """A verified isomorphism (C(q), J) -> (M_N(F), transpose), stored as the
    matrix image of every basis blade."""

    algebra: CliffordAlgebra
    size: int
    blade_images: tuple[Matrix, ...]

    def apply(self, a: CliffordElement) -> Matrix:
        out = Matrix.zeros(self.algebra.field, self.size, self.size)
        for b, c in a.coeffs.items():
            out = out + self.blade_images[b].scale(c)
        return out


def explicit_matrix_iso(tau: Isometry) -> MatrixIso:
    """Build and verify an isomorphism of (C(q), J) with the full matrix
    algebra carrying the transpose involution.  Finite fields only."""
    space = tau.space
    field = space.field
    criterion = transpose_iso_criterion(tau)
    if not criterion.holds:
        raise CriterionFails("the transpose criterion fails for this involution")
    if not isinstance(field, Galois2Field):
        raise UnsupportedField("explicit matrix models are built over finite fields only")

    alg = algebra_for_space(space)
    inv = natural_involution(tau, alg)
    n = space.dim
    size = 1 << (n // 2)

    # split V into orthogonal regular planes (the polar form is alternating)
    whole = SymBilinearForm(
        field, tuple(space.basis_vector(i) for i in range(n)), space.gram, space
    )
    plane_pairs = hyperbolic_basis_alternating(whole)
    m = len(plane_pairs)

    gen_images_per_plane = []
    for a_vec, b_vec in plane_pairs:
        mat_a, mat_b = _split_quaternion(field, space.eval_q(a_vec), space.eval_q(b_vec))
        gen_images_per_plane.append((mat_a, mat_b))

    def embed(k: int, mat2: Matrix) -> Matrix:
        out = None
        for i in range(m):
            factor = mat2 if i == k else Matrix.identity(field, 2)
            out = factor if out is None else kron(out, factor)
        return out if out is not None else Matrix.identity(field, 1)

    # images of the original generators e_i via the plane-basis coordinates
    new_basis = []
    for a_vec, b_vec in plane_pairs:
        new_basis.extend([a_vec, b_vec])
    change = from_columns(field, new_basis)
    f_gen = []
    for i in range(n):
        coords = change.solve(space.basis_vector(i))
        if coords is None:
            raise InvariantViolation("plane vectors do not span the space")
        img = Matrix.zeros(field, size, size)
        for j, c in enumerate(coords):
            if not c:
                continue
            k, which = divmod(j, 2)
            img = img + embed(k, gen_images_per_plane[k][which]).scale(c)
        f_gen.append(img)

    ident = Matrix.identity(field, size)
    for i in range(n):
        if f_gen[i] * f_gen[i] != ident.scale(alg.qvals[i]):
            raise InvariantViolation("generator image has the wrong square")
        for j in range(i + 1, n):
            anti = f_gen[i] * f_gen[j] + f_gen[j] * f_gen[i]
            if anti != ident.scale(space.gram[i, j]):
                raise InvariantViolation("generator images break the polar relation")

    blade_images = []
    for blade in range(alg.dim):
        acc = ident
        for i in range(n):
            if blade >> i & 1:
                acc = acc * f_gen[i]
        blade_images.append(acc)

    # involution transport: G f(J(e_i)) = f(e_i)^T G, then G = H^T H
    g_mat = _solve_involution_gram(field, size, f_gen, [
        _apply_images(blade_images, alg, inv.images[1 << i]) for i in range(n)
    ])
    sym_form = SymBilinearForm(
        field, tuple(unit_vector(field, size, i) for i in range(size)), g_mat
    )
    try:
        diag_basis = orthogonal_basis(sym_form)
    except AlternatingForm:
        raise InvariantViolation("transport form is alternating despite the criterion")
    p_cols = from_columns(field, diag_basis)
    roots = [field.sqrt(sym_form.eval_coords(
        p_cols.col(i), p_cols.col(i))) for i in range(size)]
    h_mat = Matrix.diagonal(field, roots) * p_cols.inverse()
    h_inv = h_mat.inverse()
    blade_images = tuple(h_mat * img * h_inv for img in blade_images)

    iso = MatrixIso(alg, size, blade_images)

    # final verification: bijective, transpose-compatible, multiplicative
    flat = Matrix(field, [
        [img[r, c] for r in range(size) for c in range(size)] for img in blade_images
    ])
    if flat.rank() != alg.dim:
        raise InvariantViolation("blade images are not linearly independent")
    for blade in range(alg.dim):
        if iso.apply(inv.images[blade]) != blade_images[blade].transpose():
            raise InvariantViolation("isomorphism does not carry J to transpose")
    for s in range(alg.dim):
        for t in range(alg.dim):
            lhs = iso.apply(alg.element(dict(alg.blade_mul(s, t))))
            if lhs != blade_images[s] * blade_images[t]:
                raise InvariantViolation("isomorphism is not multiplicative")
    return iso


def _apply_images(blade_images, alg: CliffordAlgebra, elt: CliffordElement) -> Matrix:
    size = blade_images[0].nrows
    out = Matrix.zeros(alg.field, size, size)
    for b, c in elt.coeffs.items():
        out = out + blade_images[b].scale(c)
    return out


def _solve_involution_gram(field, size, f_gen, f_j_gen) -> Matrix:
    """Solve G f(J(e_i)) = f(e_i)^T G for an invertible G (unique up to
    scalars); unknowns are the entries of G in row-major order."""
    n_unknowns = size * size
    rows = []
    for a_mat, c_mat in zip(f_j_gen, (g.transpose() for g in f_gen)):
        for r in range(size):
            for s in range(size):
                row = [field.zero] * n_unknowns
                for t in range(size):
                    row[r * size + t] = row[r * size + t] + a_mat[t, s]
                    row[t * size + s] = row[t * size + s] - c_mat[r, t]
                rows.append(row)
    system = Matrix(field, rows)
    for k in system.kernel_basis():
        g = Matrix(field, [k[i * size:(i + 1) * size] for i in range(size)])
        if g.rank() == size:
            if not g.is_symmetric():
                raise InvariantViolation("transport form is not symmetric")
            return g
    raise InvariantViolation("no invertible transport form found")


# ---------------------------------------------------------------------------
# conjugating elements of interchange isometries
# ---------------------------------------------------------------------------

def goldman_element(tau: Isometry, construction: str = "frame") -> CliffordElement:
    """An invertible g in C(q) whose inner automorphism restricts to the
    interchange isometry on vectors.

    ``construction="frame"`` uses g = 1 + w x from a normalized frame
    (x, y, w, z); ``construction="swap-plane"`` derives g from a regular
    plane that tau swaps with its orthogonal complement, as
    g = 1 + (u1 + tau(u1)) (v1 + tau(v1)).  Both are verified to conjugate
    correctly before being returned.
    """
    if not tau.is_interchange():
        raise NotInterchange("a 4-dimensional interchange isometry is required")
    space = tau.space
    if space.field.characteristic() != 2:
        raise CharacteristicNot2("conjugating elements are built in characteristic 2")
    alg = algebra_for_space(space)
    x, y, w, z = interchange_normal_basis(tau)
    if construction == "frame":
        g = alg.one() + alg.vector(w) * alg.vector(x)
    elif construction == "swap-plane":
        u1, v1 = y, vadd(x, z)
        _check_swap_plane(tau, u1, v1)
        du = alg.vector(vadd(u1, tau.apply(u1)))
        dv = alg.vector(vadd(v1, tau.apply(v1)))
        g = alg.one() + du * dv
    else:
        raise ValueError(f"unknown construction {construction!r}")
    g_inv = alg.inverse(g)
    for i in range(space.dim):
        e = space.basis_vector(i)
        if g * alg.vector(e) * g_inv != alg.vector(tau.apply(e)):
            raise InvariantViolation("conjugation does not reproduce the isometry")
    return g


def _check_swap_plane(tau: Isometry, u1: Vector, v1: Vector):
    """The plane span(u1, v1) must be regular with b(u1, v1) = 1, and tau
    must swap it with its orthogonal complement."""
    space = tau.space
    if space.eval_b(u1, v1) != space.field.one:
        raise InvariantViolation("swap plane basis is not unimodular")
    plane = Subspace.from_vectors(space, [u1, v1])
    image = Subspace.from_vectors(space, [tau.apply(u1), tau.apply(v1)])
    if plane.dim != 2 or not plane.is_regular():
        raise InvariantViolation("swap plane is not a regular plane")
    if plane.intersection(image).dim != 0:
        raise InvariantViolation("swap plane meets its image")
    for a in plane.vectors():
        for b in image.vectors():
            if space.eval_b(a, b):
                raise InvariantViolation("swap plane is not orthogonal to its image")
    if plane.subspace_sum(image).dim != space.dim:
        raise InvariantViolation("swap plane and its image do not fill the space")


# ---------------------------------------------------------------------------
# tensor factorization witness
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TensorFactor:
    kind: str  # "identity-plane" | "reflection" | "interchange"
    vectors: tuple[Vector, ...]


@dataclass(frozen=True)
class TensorWitness:
    factors: tuple[TensorFactor, ...]
    decomposition: Decomposition


def tensor_decomposition_witness(tau: Isometry) -> TensorWitness:
    """Split C(q) into commuting factor subalgebras attached to the summands
    of the isometry decomposition (the identity part further split into
    regular planes), and verify that their ordered products form a basis
    compatible with the involution."""
    space = tau.space
    if space.field.characteristic() != 2:
        raise CharacteristicNot2("characteristic 2 required")
    if not tau.is_involution():
        raise NotInvolution("tau^2 != id")
    alg = algebra_for_space(space)
    inv = natural_involution(tau, alg)
    dec = decompose(tau)

    factors: list[TensorFactor] = []
    w_sub = dec.fixed_complement
    if w_sub.dim:
        w_form = SymBilinearForm(
            space.field, w_sub.vectors(), w_sub.gram_matrix(), space
        )
        for u, v in hyperbolic_basis_alternating(w_form):
            factors.append(TensorFactor("identity-plane", (u, v)))
    for blk in dec.blocks:
        factors.append(TensorFactor(blk.kind, blk.vectors()))

    # cross-factor generators must be orthogonal (hence commute in C(q))
    for i, f1 in enumerate(factors):
        for f2 in factors[i + 1:]:
            for a in f1.vectors:
                for b in f2.vectors:
                    if space.eval_b(a, b):
                        raise InvariantViolation("factors are not orthogonal")
                    ea, eb = alg.vector(a), alg.vector(b)
                    if ea * eb != eb * ea:
                        raise InvariantViolation("factor generators do not commute")

    # ordered products of factor blades give a basis compatible with J
    per_factor_blades = []
    for f in factors:
        blades = []
        for subset in range(1 << len(f.vectors)):
            acc = alg.one()
            for i, vec in enumerate(f.vectors):
                if subset >> i & 1:
                    acc = acc * alg.vector(vec)
            blades.append(acc)
        per_factor_blades.append(blades)

    products: list[tuple[CliffordElement, tuple[CliffordElement, ...]]] = [(alg.one(), ())]
    for blades in per_factor_blades:
        products = [(p * b, parts + (b,)) for p, parts in products for b in blades]
    coeffs = Matrix(space.field, [alg.coeff_vector(p) for p, _ in products])
    if coeffs.rank() != alg.dim:
        raise InvariantViolation("tensor products do not span the algebra")

    # J acts factorwise: J(prod parts) equals the product of J(part) because
    # distinct factors commute and each factor is invariant
    for p, parts in products:
        rhs = alg.one()
        for part in parts:
            rhs = rhs * inv.apply(part)
        if inv.apply(p) != rhs:
            raise InvariantViolation("involution is not compatible with the factors")

    return TensorWitness(tuple(factors), dec)


# ---------------------------------------------------------------------------
# symmetric matrices with scalar square
# ---------------------------------------------------------------------------

def square_scalar_check(x_mat: Matrix, c: FieldElement) -> bool:
    """For a symmetric matrix X over a characteristic-2 field with
    X^2 = c I, report whether c is a square (it always is)."""
    field = x_mat.field
    if field.characteristic() != 2:
        raise CharacteristicNot2("characteristic 2 required")
    if not x_mat.is_symmetric():
        raise NotSymmetric("matrix is not symmetric")
    if x_mat * x_mat != Matrix.identity(field, x_mat.nrows).scale(c):
        raise NotScalarSquare("X^2 is not the given scalar")
    return field.is_square(c)
