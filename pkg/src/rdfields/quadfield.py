"""Real quadratic fields Q(sqrt(n^2 + r)), r in {1, 4}: numbers, units and ideals.

Elements are stored as ``(u + v*sqrt(d)) / 2`` with rational ``u, v``.  Integral
ideals are rank-2 lattices kept in Hermite normal form with respect to the
integral basis ``{1, omega}``::

    I = Z*A + Z*(B + C*omega),   A, C > 0,  C | A,  C | B,  0 <= B < A

so ``N(I) = A*C``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from .arith import is_prime, legendre, sqrt_mod_prime, square_factor
from .errors import DomainError, InertPrimeError, NotAnIdealError, NotSquarefreeError

SQRT_D = "sqrt_d"
HALF_ONE_PLUS_SQRT_D = "half_one_plus_sqrt_d"


def _canon(x):
    x = Fraction(x)
    return x.numerator if x.denominator == 1 else x


@dataclass(frozen=True)
class QuadraticNumber:
    """The number ``(u + v*sqrt(d)) / 2``."""

    u: object
    v: object
    d: int

    def __post_init__(self):
        object.__setattr__(self, "u", _canon(self.u))
        object.__setattr__(self, "v", _canon(self.v))

    @classmethod
    def rational(cls, x, d):
        return cls(2 * Fraction(x), 0, d)

    def _coerce(self, other):
        if isinstance(other, QuadraticNumber):
            if other.d != self.d:
                raise DomainError(f"mixed fields: sqrt({self.d}) and sqrt({other.d})")
            return other
        if isinstance(other, (int, Fraction)):
            return QuadraticNumber.rational(other, self.d)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return QuadraticNumber(self.u + other.u, self.v + other.v, self.d)

    __radd__ = __add__

    def __neg__(self):
        return QuadraticNumber(-self.u, -self.v, self.d)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        u = Fraction(self.u * other.u + self.v * other.v * self.d, 2)
        v = Fraction(self.u * other.v + self.v * other.u, 2)
        return QuadraticNumber(u, v, self.d)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        n = other.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero in quadratic field")
        q = self * other.conjugate()
        return QuadraticNumber(Fraction(q.u) / n, Fraction(q.v) / n, self.d)

    def conjugate(self):
        return QuadraticNumber(self.u, -self.v, self.d)

    def norm(self):
        return _canon(Fraction(self.u * self.u - self.v * self.v * self.d, 4))

    def trace(self):
        return self.u

    def is_rational(self):
        return self.v == 0

    def sign(self) -> int:
        """Exact sign of the real embedding with sqrt(d) > 0."""
        su = (self.u > 0) - (self.u < 0)
        sv = (self.v > 0) - (self.v < 0)
        if sv == 0 or su == sv:
            return su or sv
        if su == 0:
            return sv
        # Opposite signs: compare u^2 with v^2 d.
        uu, vv = self.u * self.u, self.v * self.v * self.d
        if uu == vv:
            return 0
        return su if uu > vv else sv

    def __lt__(self, other):
        return (self - other).sign() < 0

    def __gt__(self, other):
        return (self - other).sign() > 0

    def __float__(self):
        return (float(self.u) + float(self.v) * math.sqrt(self.d)) / 2

    def is_algebraic_integer(self):
        if Fraction(self.u).denominator != 1 or Fraction(self.v).denominator != 1:
            return False
        if self.d % 4 == 1:
            return (self.u - self.v) % 2 == 0
        return self.u % 2 == 0 and self.v % 2 == 0

    def __str__(self):
        u, v = Fraction(self.u), Fraction(self.v)
        if u.denominator == 1 and v.denominator == 1 and u % 2 == 0 and v % 2 == 0:
            a, b, den = u // 2, v // 2, ""
        else:
            a, b, den = u, v, "/2"
        if b == 0:
            return f"{a}" if not den else f"{a}/2"
        sgn = "-" if b < 0 else "+"
        coeff = "" if abs(b) == 1 else f"{abs(b)}*"
        body = f"{a} {sgn} {coeff}sqrt({self.d})" if a != 0 else f"{'-' if b < 0 else ''}{coeff}sqrt({self.d})"
        return f"({body}){den}" if den else body


@dataclass(frozen=True)
class FieldDescriptor:
    n: int
    r: int
    d: int
    D: int
    omega_kind: str
    epsilon: QuadraticNumber
    epsilon_norm: int
    unit_exception: bool = False

    @property
    def omega(self):
        if self.omega_kind == SQRT_D:
            return QuadraticNumber(0, 2, self.d)
        return QuadraticNumber(1, 1, self.d)

    @property
    def sqrt_D(self):
        return QuadraticNumber(0, 2 if self.D == self.d else 4, self.d)

    def element(self, x, y):
        """The element ``x + y*omega``."""
        if self.omega_kind == SQRT_D:
            return QuadraticNumber(2 * Fraction(x), 2 * Fraction(y), self.d)
        return QuadraticNumber(2 * Fraction(x) + y, y, self.d)

    def coords(self, z: QuadraticNumber):
        """``(x, y)`` with ``z = x + y*omega``."""
        if z.d != self.d:
            raise DomainError(f"element of Q(sqrt({z.d})) used in Q(sqrt({self.d}))")
        if self.omega_kind == SQRT_D:
            return _canon(Fraction(z.u, 2)), _canon(Fraction(z.v, 2))
        return _canon(Fraction(z.u - z.v, 2)), _canon(Fraction(z.v))

    def integral_coords(self, z):
        x, y = self.coords(z)
        if Fraction(x).denominator != 1 or Fraction(y).denominator != 1:
            raise DomainError(f"{z} is not an algebraic integer of Q(sqrt({self.d}))")
        return int(x), int(y)

    @property
    def omega_trace(self):
        return 0 if self.omega_kind == SQRT_D else 1

    @property
    def omega_norm(self):
        return -self.d if self.omega_kind == SQRT_D else (1 - self.d) // 4

    def __str__(self):
        return f"Q(sqrt({self.d}))"


def _cf_state(d):
    # omega = (P + sqrt(d)) / Q with Q | d - P^2.
    return (1, 2) if d % 4 == 1 else (0, 1)


def fundamental_unit_cf(d: int) -> QuadraticNumber:
    """Smallest unit > 1 of the maximal order of Q(sqrt(d)), by continued fractions.

    Expands omega = [a0; a1, ...] with exact integer states and returns the first
    convergent ``p/q`` for which ``p - q*omega'`` has norm +-1.  Every unit
    ``x + y*omega`` with ``y > 0`` is such a convergent, and the period is finite,
    so the loop terminates within one period.
    """
    if d < 2 or square_factor(d) != 1:
        raise DomainError(f"d must be a square-free integer >= 2, got {d}")
    s = math.isqrt(d)
    P, Q = _cf_state(d)
    omega_conj = QuadraticNumber(1, -1, d) if d % 4 == 1 else QuadraticNumber(0, -2, d)
    p_prev, p = 0, 1
    q_prev, q = 1, 0
    while True:
        a = (P + s) // Q
        p_prev, p = p, a * p + p_prev
        q_prev, q = q, a * q + q_prev
        unit = p - q * omega_conj
        if abs(unit.norm()) == 1:
            return unit
        P = a * Q - P
        Q = (d - P * P) // Q


def _closed_form_unit(n, r, d):
    if r == 1:
        return QuadraticNumber(2 * n, 2, d)
    return QuadraticNumber(n, 1, d)


def make_field(n: int, r: int) -> FieldDescriptor:
    """Descriptor of Q(sqrt(n^2 + r)) for r in {1, 4}."""
    if n < 1:
        raise DomainError(f"n must be positive, got {n}")
    if r not in (1, 4):
        raise DomainError(f"r must be 1 or 4, got {r}")
    if r == 4 and n % 2 == 0:
        raise NotSquarefreeError(n * n + 4, 2)
    d = n * n + r
    sq = square_factor(d)
    if sq != 1:
        raise NotSquarefreeError(d, sq)
    D = d if d % 4 == 1 else 4 * d
    kind = HALF_ONE_PLUS_SQRT_D if d % 4 == 1 else SQRT_D
    eps = _closed_form_unit(n, r, d)
    cf_unit = fundamental_unit_cf(d)
    unit_exception = False
    if cf_unit != eps:
        if d != 5:
            raise DomainError(f"closed-form unit {eps} is not fundamental in Q(sqrt({d})); found {cf_unit}")
        # n=2, r=1: 2 + sqrt(5) is the cube of the golden ratio.
        eps, unit_exception = cf_unit, True
    norm = eps.norm()
    if norm != -1:
        raise DomainError(f"fundamental unit of Q(sqrt({d})) has norm {norm}, expected -1")
    return FieldDescriptor(n, r, d, D, kind, eps, norm, unit_exception)


def delta(r1: QuadraticNumber, r2: QuadraticNumber) -> QuadraticNumber:
    """``r1*r2' - r1'*r2`` (a rational multiple of sqrt(d))."""
    return r1 * r2.conjugate() - r1.conjugate() * r2


def _hnf(vectors):
    """HNF ``(A, B, C)`` of the Z-span of integer vectors ``(x, y)``."""
    vecs = [list(v) for v in vectors if v != (0, 0)]
    pivot = None
    rest = []
    for x, y in vecs:
        if y == 0:
            rest.append(x)
            continue
        if pivot is None:
            pivot = [x, y]
            continue
        # Euclid on second coordinates; the eliminated vector joins the rest.
        v = [x, y]
        while v[1] != 0:
            q = pivot[1] // v[1]
            pivot = [pivot[0] - q * v[0], pivot[1] - q * v[1]]
            pivot, v = v, pivot
        rest.append(v[0])
    if pivot is None:
        raise DomainError("lattice has rank < 2")
    A = 0
    for x in rest:
        A = math.gcd(A, x)
    if A == 0:
        raise DomainError("lattice has rank < 2")
    B, C = pivot
    if C < 0:
        B, C = -B, -C
    return A, B % A, C


@dataclass(frozen=True)
class IdealLattice:
    """Integral ideal ``Z*a + Z*beta`` in Hermite normal form."""

    field: FieldDescriptor = dc_field(repr=False)
    A: int
    B: int
    C: int

    @property
    def a(self):
        return self.A

    @property
    def beta(self):
        return self.field.element(self.B, self.C)

    @property
    def norm(self):
        return self.A * self.C

    @property
    def basis(self):
        return (QuadraticNumber.rational(self.A, self.field.d), self.beta)

    @property
    def content(self):
        return self.C

    def contains(self, z) -> bool:
        x, y = self.field.coords(z)
        if Fraction(x).denominator != 1 or Fraction(y).denominator != 1:
            return False
        if y % self.C:
            return False
        return (x - (y // self.C) * self.B) % self.A == 0

    def conjugate(self):
        return lattice_from_generators(self.field, [g.conjugate() for g in self.basis])

    def primitive_part(self):
        """``(A/C, B/C)``: HNF data of ``I / C`` (with ``C = 1``)."""
        return self.A // self.C, self.B // self.C

    def __mul__(self, other):
        return ideal_mul(self, other)

    def __str__(self):
        return f"[{self.A}, {self.beta}]"


def lattice_from_generators(field, gens):
    """HNF of the Z-module spanned by ``gens`` (no ideal test)."""
    A, B, C = _hnf([field.integral_coords(g) for g in gens])
    return IdealLattice(field, A, B, C)


def _check_ideal(I):
    omega = I.field.omega
    for g in I.basis:
        prod = g * omega
        if not I.contains(prod):
            raise NotAnIdealError(f"{I} is not an ideal: ({g})*omega = {prod} lies outside the lattice")
    return I


def ideal_from_pair(field, g, alpha) -> IdealLattice:
    """The lattice ``Z*g + Z*alpha``, verified closed under multiplication by omega."""
    g = g if isinstance(g, QuadraticNumber) else QuadraticNumber.rational(g, field.d)
    return _check_ideal(lattice_from_generators(field, [g, alpha]))


def ideal_generated(field, *gens) -> IdealLattice:
    """The ideal ``(g_1, ..., g_k)`` = sum of ``g_i * O``."""
    omega = field.omega
    elems = []
    for g in gens:
        g = g if isinstance(g, QuadraticNumber) else QuadraticNumber.rational(g, field.d)
        elems += [g, g * omega]
    return lattice_from_generators(field, elems)


def principal_ideal(field, x) -> IdealLattice:
    return ideal_generated(field, x)


def unit_ideal(field) -> IdealLattice:
    return IdealLattice(field, 1, 0, 1)


def ideal_mul(I: IdealLattice, J: IdealLattice) -> IdealLattice:
    if I.field != J.field:
        raise DomainError("ideals from different fields")
    gens = [x * y for x in I.basis for y in J.basis]
    return lattice_from_generators(I.field, gens)


def ideal_power(I: IdealLattice, e: int) -> IdealLattice:
    result = unit_ideal(I.field)
    for _ in range(e):
        result = ideal_mul(result, I)
    return result


def split_prime(field, p: int):
    """Prime ideals above a split or ramified prime ``p`` as a conjugate pair.

    Generators follow the shapes ``(p, (b +- sqrt d)/2)`` (d = 1 mod 4) and
    ``(p, b +- sqrt d)`` otherwise, with ``b = 1`` whenever ``p | n`` and
    ``r = 1``.  Ramified primes return the same ideal twice.
    """
    if not is_prime(p):
        raise DomainError(f"{p} is not prime")
    d = field.d
    if p == 2:
        if d % 4 == 1:
            if d % 8 == 5:
                raise InertPrimeError(f"inert prime: 2 is inert in Q(sqrt({d}))")
            b = 1
        else:
            P = ideal_generated(field, 2, field.sqrt_D * Fraction(1, 2) + (d % 2))
            return P, P
    else:
        if d % p == 0:
            b = 0
        elif legendre(d, p) == 1:
            b = 1 if (d - 1) % p == 0 else sqrt_mod_prime(d, p)
        else:
            raise InertPrimeError(f"inert prime: {p} is inert in Q(sqrt({d}))")
    if d % 4 == 1:
        if b % 2 == 0:
            b += p
        plus = QuadraticNumber(b, 1, d)
    else:
        plus = QuadraticNumber(2 * b, 2, d)
    P = ideal_generated(field, p, plus)
    Q = ideal_generated(field, p, plus.conjugate())
    return P, Q
