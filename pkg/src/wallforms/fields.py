"""Exact arithmetic in the three supported coefficient fields.

Supported fields:

* ``PrimeField(p)``     -- GF(p) for an odd prime p <= 97; payloads are ints in [0, p).
* ``Galois2Field(k)``   -- GF(2^k) for 1 <= k <= 8, arithmetic modulo an
  irreducible polynomial over GF(2); payloads are ints whose binary digits
  are polynomial coefficients (bit i = coefficient of x^i).
* ``RationalFunctionField()`` -- GF(2)(t), reduced fractions of GF(2)[t]
  polynomials; payloads are ``(num, den)`` int pairs in lowest terms with
  nonzero denominator (every nonzero GF(2)[t] polynomial is monic).

Elements are immutable :class:`FieldElement` wrappers around payloads and
support ``+ - * /``.  Fields also expose payload-level ``add/sub/mul/div``
for hot loops.  Square-class queries (``is_square``, ``sqrt``) are exact.

Textual literals: fields ``"gf(7)"``, ``"gf(4;x^2+x+1)"``, ``"gf2(t)"``;
elements ``"3"``, ``"w+1"``, ``"(t^2+1)/t"``.
"""

from __future__ import annotations

from typing import Iterator

from .errors import (
    CapExceeded,
    DescriptorMismatch,
    DivisionByZero,
    NotASquare,
    ParseError,
)

MAX_PRIME = 97
MAX_EXTENSION_DEGREE = 8
MAX_POLY_DEGREE = 64

# Irreducible polynomials over GF(2), one per extension degree.
DEFAULT_MODULI = {
    1: 0b11,          # x + 1
    2: 0b111,         # x^2 + x + 1
    3: 0b1011,        # x^3 + x + 1
    4: 0b10011,       # x^4 + x + 1
    5: 0b100101,      # x^5 + x^2 + 1
    6: 0b1000011,     # x^6 + x + 1
    7: 0b10001001,    # x^7 + x^3 + 1
    8: 0b100011101,   # x^8 + x^4 + x^3 + x^2 + 1
}


# ---------------------------------------------------------------------------
# GF(2)[x] polynomials as ints (bit i = coefficient of x^i)
# ---------------------------------------------------------------------------

def poly_deg(p: int) -> int:
    """Degree of a GF(2) polynomial; deg(0) = -1."""
    return p.bit_length() - 1


def poly_mul(a: int, b: int) -> int:
    """Carry-less product of two GF(2) polynomials."""
    out = 0
    while b:
        if b & 1:
            out ^= a
        a <<= 1
        b >>= 1
    return out


def poly_divmod(a: int, b: int) -> tuple[int, int]:
    if b == 0:
        raise DivisionByZero("polynomial division by zero")
    db = poly_deg(b)
    q = 0
    while poly_deg(a) >= db:
        shift = poly_deg(a) - db
        q ^= 1 << shift
        a ^= b << shift
    return q, a


def poly_mod(a: int, b: int) -> int:
    return poly_divmod(a, b)[1]


def poly_gcd(a: int, b: int) -> int:
    while b:
        a, b = b, poly_mod(a, b)
    return a


def poly_is_square(p: int) -> bool:
    """Over GF(2), f is a square iff f has only even-degree terms."""
    odd_mask = 0
    for i in range(1, p.bit_length(), 2):
        odd_mask |= 1 << i
    return p & odd_mask == 0


def poly_sqrt(p: int) -> int:
    """Square root of an even-degree-terms GF(2) polynomial (halve exponents)."""
    out = 0
    i = 0
    while p:
        if p & 1:
            out |= 1 << i
        p >>= 2
        i += 1
    return out


def poly_is_irreducible(p: int) -> bool:
    """Brute-force irreducibility test; fine for the tiny degrees used here."""
    d = poly_deg(p)
    if d < 1:
        return False
    for f in range(2, 1 << (d // 2 + 1)):
        if poly_deg(f) >= 1 and poly_mod(p, f) == 0:
            return False
    return True


def _poly_to_str(p: int, var: str) -> str:
    if p == 0:
        return "0"
    terms = []
    for i in range(poly_deg(p), -1, -1):
        if p >> i & 1:
            if i == 0:
                terms.append("1")
            elif i == 1:
                terms.append(var)
            else:
                terms.append(f"{var}^{i}")
    return "+".join(terms)


def _poly_from_str(s: str, var: str) -> int:
    s = s.replace(" ", "")
    if not s:
        raise ParseError("empty polynomial literal")
    out = 0
    for term in s.split("+"):
        if term == "0":
            continue
        if term == "1":
            out ^= 1
        elif term == var:
            out ^= 2
        elif term.startswith(var + "^"):
            try:
                exp = int(term[len(var) + 1:])
            except ValueError:
                raise ParseError(f"bad polynomial term {term!r}") from None
            if exp < 0:
                raise ParseError(f"bad polynomial term {term!r}")
            out ^= 1 << exp
        else:
            raise ParseError(f"bad polynomial term {term!r} (variable {var!r})")
    return out


def _is_odd_prime(p: int) -> bool:
    if p < 3 or p % 2 == 0:
        return False
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


# ---------------------------------------------------------------------------
# Elements
# ---------------------------------------------------------------------------

class FieldElement:
    """Immutable element of a :class:`Field`; supports ``+ - * /``."""

    __slots__ = ("field", "payload")

    def __init__(self, field: "Field", payload):
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "payload", payload)

    def __setattr__(self, name, value):
        raise AttributeError("FieldElement is immutable")

    def _coerce(self, other: "FieldElement") -> "FieldElement":
        if not isinstance(other, FieldElement):
            raise TypeError(f"expected FieldElement, got {type(other).__name__}")
        if other.field is not self.field and other.field != self.field:
            raise DescriptorMismatch(f"{self.field} vs {other.field}")
        return other

    def __add__(self, other):
        other = self._coerce(other)
        return FieldElement(self.field, self.field.add(self.payload, other.payload))

    def __sub__(self, other):
        other = self._coerce(other)
        return FieldElement(self.field, self.field.sub(self.payload, other.payload))

    def __mul__(self, other):
        other = self._coerce(other)
        return FieldElement(self.field, self.field.mul(self.payload, other.payload))

    def __truediv__(self, other):
        other = self._coerce(other)
        return FieldElement(self.field, self.field.div(self.payload, other.payload))

    def __neg__(self):
        return FieldElement(self.field, self.field.neg(self.payload))

    def __pow__(self, n: int):
        if n < 0:
            return (self.field.one / self) ** (-n)
        out = self.field.one
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        if not isinstance(other, FieldElement):
            return NotImplemented
        return self.field == other.field and self.payload == other.payload

    def __hash__(self):
        return hash((self.field, self.payload))

    def __bool__(self):
        return self.payload != self.field.zero.payload

    def is_zero(self) -> bool:
        return not self

    def __str__(self):
        return self.field.format(self.payload)

    def __repr__(self):
        return f"{self.field.literal()}:{self}"


class Field:
    """Common interface of the three supported fields."""

    kind: str

    # payload-level arithmetic, implemented by subclasses
    def add(self, a, b): raise NotImplementedError
    def sub(self, a, b): raise NotImplementedError
    def mul(self, a, b): raise NotImplementedError
    def div(self, a, b): raise NotImplementedError
    def neg(self, a): raise NotImplementedError

    def characteristic(self) -> int:
        raise NotImplementedError

    def order(self) -> int | None:
        """Number of elements, or None for an infinite field."""
        return None

    def element(self, payload) -> FieldElement:
        return FieldElement(self, payload)

    def from_int(self, n: int) -> FieldElement:
        """The image of the integer n under the canonical ring map Z -> F."""
        raise NotImplementedError

    def payloads(self) -> Iterator:
        raise NotImplementedError

    def elements(self) -> Iterator[FieldElement]:
        for p in self.payloads():
            yield FieldElement(self, p)

    def is_square(self, a: FieldElement) -> bool:
        raise NotImplementedError

    def sqrt(self, a: FieldElement) -> FieldElement:
        raise NotImplementedError

    def parse(self, s) -> FieldElement:
        raise NotImplementedError

    def format(self, payload) -> str:
        raise NotImplementedError

    def literal(self) -> str:
        raise NotImplementedError

    @property
    def zero(self) -> FieldElement:
        return self._zero

    @property
    def one(self) -> FieldElement:
        return self._one

    def __repr__(self):
        return self.literal()


class PrimeField(Field):
    """GF(p) for an odd prime p <= 97."""

    kind = "prime"

    def __init__(self, p: int):
        if not _is_odd_prime(p):
            raise ParseError(f"{p} is not an odd prime")
        if p > MAX_PRIME:
            raise CapExceeded(f"prime {p} exceeds cap {MAX_PRIME}")
        self.p = p
        self._zero = FieldElement(self, 0)
        self._one = FieldElement(self, 1)
        self._squares = frozenset((a * a) % p for a in range(p))

    def add(self, a, b): return (a + b) % self.p
    def sub(self, a, b): return (a - b) % self.p
    def mul(self, a, b): return (a * b) % self.p

    def div(self, a, b):
        if b == 0:
            raise DivisionByZero(f"division by zero in {self}")
        return (a * pow(b, self.p - 2, self.p)) % self.p

    def neg(self, a): return (-a) % self.p

    def characteristic(self): return self.p
    def order(self): return self.p

    def from_int(self, n: int) -> FieldElement:
        return FieldElement(self, n % self.p)

    def payloads(self):
        return iter(range(self.p))

    def is_square(self, a: FieldElement) -> bool:
        return a.payload in self._squares

    def sqrt(self, a: FieldElement) -> FieldElement:
        # exhaustive search; p <= 97 keeps this instant
        for c in range(self.p):
            if (c * c) % self.p == a.payload:
                return FieldElement(self, c)
        raise NotASquare(f"{a} is not a square in {self}")

    def parse(self, s) -> FieldElement:
        try:
            return self.from_int(int(s))
        except (TypeError, ValueError):
            raise ParseError(f"bad element literal {s!r} for {self}") from None

    def format(self, payload) -> str:
        return str(payload)

    def literal(self) -> str:
        return f"gf({self.p})"

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("prime", self.p))


class Galois2Field(Field):
    """GF(2^k), k in [1, 8], arithmetic modulo an irreducible polynomial."""

    kind = "galois2"
    var = "w"

    def __init__(self, k: int, modulus: int | None = None):
        if not 1 <= k <= MAX_EXTENSION_DEGREE:
            raise CapExceeded(f"extension degree {k} outside [1, {MAX_EXTENSION_DEGREE}]")
        if modulus is None:
            modulus = DEFAULT_MODULI[k]
        if poly_deg(modulus) != k or not poly_is_irreducible(modulus):
            raise ParseError(f"modulus {_poly_to_str(modulus, 'x')} is not irreducible of degree {k}")
        self.k = k
        self.modulus = modulus
        self.size = 1 << k
        self._zero = FieldElement(self, 0)
        self._one = FieldElement(self, 1)
        # small fields get full multiplication/inverse tables
        self._mul_table = None
        self._inv_table = None
        if k <= 4:
            self._mul_table = [
                [self._mul_raw(a, b) for b in range(self.size)] for a in range(self.size)
            ]
            self._inv_table = [0] * self.size
            for a in range(1, self.size):
                self._inv_table[a] = self._pow_raw(a, self.size - 2)

    def _mul_raw(self, a: int, b: int) -> int:
        out = 0
        top = 1 << self.k
        while b:
            if b & 1:
                out ^= a
            a <<= 1
            if a & top:
                a ^= self.modulus
            b >>= 1
        return out

    def _pow_raw(self, a: int, n: int) -> int:
        out = 1
        while n:
            if n & 1:
                out = self._mul_raw(out, a)
            a = self._mul_raw(a, a)
            n >>= 1
        return out

    def add(self, a, b): return a ^ b
    sub = add

    def mul(self, a, b):
        if self._mul_table is not None:
            return self._mul_table[a][b]
        return self._mul_raw(a, b)

    def inv(self, a):
        if a == 0:
            raise DivisionByZero(f"division by zero in {self}")
        if self._inv_table is not None:
            return self._inv_table[a]
        return self._pow_raw(a, self.size - 2)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def neg(self, a): return a

    def characteristic(self): return 2
    def order(self): return self.size

    def from_int(self, n: int) -> FieldElement:
        return FieldElement(self, n % 2)

    def payloads(self):
        return iter(range(self.size))

    def is_square(self, a: FieldElement) -> bool:
        # Frobenius x -> x^2 is bijective on a finite field of characteristic 2
        return True

    def sqrt(self, a: FieldElement) -> FieldElement:
        return FieldElement(self, self._pow_raw(a.payload, 1 << (self.k - 1)))

    def parse(self, s) -> FieldElement:
        if isinstance(s, int):
            return self.from_int(s)
        s = s.strip().replace("x", self.var)
        p = _poly_from_str(s, self.var)
        if poly_deg(p) >= self.k:
            p = poly_mod(p, self.modulus)
        return FieldElement(self, p)

    def format(self, payload) -> str:
        return _poly_to_str(payload, self.var)

    def literal(self) -> str:
        if self.k == 1:
            return "gf(2)"
        return f"gf({self.size};{_poly_to_str(self.modulus, 'x')})"

    def __eq__(self, other):
        return (
            isinstance(other, Galois2Field)
            and other.k == self.k
            and other.modulus == self.modulus
        )

    def __hash__(self):
        return hash(("galois2", self.k, self.modulus))


class RationalFunctionField(Field):
    """GF(2)(t): reduced fractions of GF(2)[t] polynomials."""

    kind = "ratfunc"
    var = "t"

    def __init__(self):
        self._zero = FieldElement(self, (0, 1))
        self._one = FieldElement(self, (1, 1))

    @staticmethod
    def _normalize(num: int, den: int) -> tuple[int, int]:
        if den == 0:
            raise DivisionByZero("zero denominator in gf2(t)")
        if num == 0:
            return (0, 1)
        g = poly_gcd(num, den)
        num, _ = poly_divmod(num, g)
        den, _ = poly_divmod(den, g)
        if poly_deg(num) > MAX_POLY_DEGREE or poly_deg(den) > MAX_POLY_DEGREE:
            raise CapExceeded(f"polynomial degree exceeds cap {MAX_POLY_DEGREE}")
        return (num, den)

    def fraction(self, num: int, den: int = 1) -> FieldElement:
        return FieldElement(self, self._normalize(num, den))

    @property
    def t(self) -> FieldElement:
        return FieldElement(self, (2, 1))

    def add(self, a, b):
        (an, ad), (bn, bd) = a, b
        return self._normalize(poly_mul(an, bd) ^ poly_mul(bn, ad), poly_mul(ad, bd))

    sub = add

    def mul(self, a, b):
        (an, ad), (bn, bd) = a, b
        return self._normalize(poly_mul(an, bn), poly_mul(ad, bd))

    def div(self, a, b):
        (bn, bd) = b
        if bn == 0:
            raise DivisionByZero("division by zero in gf2(t)")
        return self.mul(a, (bd, bn))

    def neg(self, a): return a

    def characteristic(self): return 2

    def from_int(self, n: int) -> FieldElement:
        return self._one if n % 2 else self._zero

    def payloads(self):
        raise CapExceeded("gf2(t) is infinite; cannot enumerate")

    def is_square(self, a: FieldElement) -> bool:
        # a reduced f/g is a square iff both f and g lie in GF(2)[t^2]
        num, den = a.payload
        return poly_is_square(num) and poly_is_square(den)

    def sqrt(self, a: FieldElement) -> FieldElement:
        if not self.is_square(a):
            raise NotASquare(f"{a} is not a square in {self}")
        num, den = a.payload
        return FieldElement(self, (poly_sqrt(num), poly_sqrt(den)))

    def parse(self, s) -> FieldElement:
        if isinstance(s, int):
            return self.from_int(s)
        s = s.strip().replace(" ", "")
        if s.count("/") > 1:
            raise ParseError(f"bad element literal {s!r} for {self}")
        if "/" in s:
            num_s, den_s = s.split("/")
        else:
            num_s, den_s = s, "1"
        num_s = num_s[1:-1] if num_s.startswith("(") and num_s.endswith(")") else num_s
        den_s = den_s[1:-1] if den_s.startswith("(") and den_s.endswith(")") else den_s
        num = _poly_from_str(num_s, self.var)
        den = _poly_from_str(den_s, self.var)
        return self.fraction(num, den)

    def format(self, payload) -> str:
        num, den = payload
        if den == 1:
            return _poly_to_str(num, self.var)
        num_s = _poly_to_str(num, self.var)
        den_s = _poly_to_str(den, self.var)
        if "+" in num_s:
            num_s = f"({num_s})"
        if "+" in den_s:
            den_s = f"({den_s})"
        return f"{num_s}/{den_s}"

    def literal(self) -> str:
        return "gf2(t)"

    def __eq__(self, other):
        return isinstance(other, RationalFunctionField)

    def __hash__(self):
        return hash("ratfunc")


# ---------------------------------------------------------------------------
# Field literals
# ---------------------------------------------------------------------------

def parse_field(s: str) -> Field:
    """Parse a field literal: ``gf(7)``, ``gf(4;x^2+x+1)``, ``gf2(t)``."""
    text = s.strip().lower().replace(" ", "")
    if text == "gf2(t)":
        return RationalFunctionField()
    if not (text.startswith("gf(") and text.endswith(")")):
        raise ParseError(f"bad field literal {s!r}")
    body = text[3:-1]
    if ";" in body:
        size_s, mod_s = body.split(";", 1)
        modulus = _poly_from_str(mod_s, "x")
    else:
        size_s, modulus = body, None
    try:
        size = int(size_s)
    except ValueError:
        raise ParseError(f"bad field literal {s!r}") from None
    if size >= 2 and size & (size - 1) == 0:  # a power of two
        return Galois2Field(size.bit_length() - 1, modulus)
    if modulus is not None:
        raise ParseError(f"modulus given for non-2-power field in {s!r}")
    return PrimeField(size)
