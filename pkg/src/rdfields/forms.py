"""Indefinite binary quadratic forms and the form class group.

This is the independent class-group oracle: it never touches ideal arithmetic.
A form ``(a, b, c)`` of discriminant ``D = b^2 - 4ac > 0`` is reduced when
``|sqrt(D) - 2|a|| < b < sqrt(D)``; all comparisons with ``sqrt(D)`` are done by
squaring integers.  Reduced forms are permuted by the reduction operator ``rho``
and its cycles are exactly the proper (SL2(Z)) equivalence classes, i.e. the
narrow class group.  For fields whose fundamental unit has norm -1 this equals
the ordinary class group, which :func:`all_classes` asserts.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import NamedTuple

from .arith import divisors, factorize
from .errors import ConventionError, DomainError
from .quadfield import HALF_ONE_PLUS_SQRT_D, QuadraticNumber, ideal_from_pair


class BinaryForm(NamedTuple):
    a: int
    b: int
    c: int

    @property
    def discriminant(self):
        return self.b * self.b - 4 * self.a * self.c

    def __call__(self, x, y):
        return self.a * x * x + self.b * x * y + self.c * y * y

    def conjugate(self):
        """``(a, -b, c)``, which represents the inverse class."""
        return BinaryForm(self.a, -self.b, self.c)

    def transform(self, x, z, y, w):
        """``f(x*X + z*Y, y*X + w*Y)``."""
        a, b, c = self
        return BinaryForm(
            self(x, y),
            2 * a * x * z + b * (x * w + y * z) + 2 * c * y * w,
            self(z, w),
        )

    def __str__(self):
        return f"({self.a}, {self.b}, {self.c})"


def _check_discriminant(D):
    if D <= 0:
        raise DomainError(f"indefinite forms need D > 0, got {D}")
    if math.isqrt(D) ** 2 == D:
        raise DomainError(f"discriminant {D} is a perfect square")
    if D % 4 not in (0, 1):
        raise DomainError(f"{D} is not a discriminant")


def _below_sqrt(x, D):
    """``x < sqrt(D)`` for integer x (D non-square)."""
    return x < 0 or x * x < D


def is_reduced(f: BinaryForm) -> bool:
    D = f.discriminant
    A = abs(f.a)
    return 0 < f.b and _below_sqrt(f.b, D) and _below_sqrt(2 * A - f.b, D) and (2 * A + f.b) ** 2 > D


def _r(b, a, D, s):
    # Unique r = b (mod 2|a|) with -|a| < r <= |a| if |a| > sqrt(D),
    # else sqrt(D) - 2|a| < r < sqrt(D).
    A = abs(a)
    if A * A > D:
        r = b % (2 * A)
        return r - 2 * A if r > A else r
    return s - (s - b) % (2 * A)


def rho(f: BinaryForm, D=None, s=None) -> BinaryForm:
    """One reduction step ``(a, b, c) -> (c, r(-b, c), (r^2 - D) / 4c)``."""
    if D is None:
        D = f.discriminant
    if s is None:
        s = math.isqrt(D)
    r = _r(-f.b, f.c, D, s)
    return BinaryForm(f.c, r, (r * r - D) // (4 * f.c))


def reduce(f: BinaryForm) -> BinaryForm:
    """A reduced form properly equivalent to ``f``."""
    f = BinaryForm(*f)
    D = f.discriminant
    _check_discriminant(D)
    s = math.isqrt(D)
    while not is_reduced(f):
        f = rho(f, D, s)
    return f


def cycle(f: BinaryForm):
    """The rho-cycle of a reduced form, starting at ``f``."""
    D = f.discriminant
    s = math.isqrt(D)
    out = [f]
    g = rho(f, D, s)
    while g != f:
        out.append(g)
        g = rho(g, D, s)
    return out


def reduced_forms(D: int):
    """All reduced forms of discriminant ``D``, sorted."""
    _check_discriminant(D)
    s = math.isqrt(D)
    out = []
    for b in range(2 - D % 2, s + 1, 2):
        N = (D - b * b) // 4
        for a in divisors(N):
            if (2 * a + b) ** 2 > D and _below_sqrt(2 * a - b, D):
                out.append(BinaryForm(a, b, -(N // a)))
                out.append(BinaryForm(-a, b, N // a))
    return sorted(out)


def _primitive_pairs():
    yield (1, 0)
    for bound in itertools.count(1):
        for y in range(1, bound + 1):
            for x in range(-bound, bound + 1):
                if max(abs(x), y) == bound and math.gcd(x, y) == 1:
                    yield (x, y)


def _positive_leading(f: BinaryForm, m=1) -> BinaryForm:
    """An equivalent form whose first coefficient is positive and coprime to ``m``."""
    for x, y in _primitive_pairs():
        v = f(x, y)
        if v > 0 and math.gcd(v, m) == 1:
            g, s, t = _xgcd(x, y)
            return f.transform(x, -t, y, s)
    raise AssertionError("unreachable")


def _xgcd(x, y):
    # Returns (g, s, t) with s*x + t*y = g.
    s0, s1, t0, t1 = 1, 0, 0, 1
    while y:
        q = x // y
        x, y = y, x - q * y
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if x < 0:
        x, s0, t0 = -x, -s0, -t0
    return x, s0, t0


def compose(f: BinaryForm, g: BinaryForm) -> BinaryForm:
    """Dirichlet composition of two forms of the same discriminant, reduced."""
    D = f.discriminant
    if g.discriminant != D:
        raise DomainError(f"cannot compose forms of discriminants {D} and {g.discriminant}")
    f = f if f.a > 0 else _positive_leading(f)
    g = g if g.a > 0 and math.gcd(g.a, f.a) == 1 else _positive_leading(g, f.a)
    a1, b1 = f.a, f.b
    a2, b2 = g.a, g.b
    k = 0 if a2 == 1 else ((b2 - b1) // 2 * pow(a1, -1, a2)) % a2
    B = b1 + 2 * a1 * k
    A = a1 * a2
    num = B * B - D
    if num % (4 * A):
        raise ConventionError(f"composition of {f} and {g} produced a non-integral form")
    return reduce(BinaryForm(A, B, num // (4 * A)))


def genus_count(D: int) -> int:
    """``2^(mu-1)``, mu = number of prime discriminants dividing the fundamental ``D``."""
    return 2 ** (len(factorize(D).factors) - 1)


@dataclass
class ClassGroupDescriptor:
    """Form class group of one discriminant.

    Classes are indexed with the principal class at 0 and the rest ordered by
    their canonical (lexicographically least) reduced form.
    """

    D: int
    cycles: list
    element_orders: list
    invariant_factors: list
    index: dict = field(repr=False)
    _table: dict = field(default_factory=dict, repr=False)

    @property
    def h(self):
        return len(self.cycles)

    @property
    def identity(self):
        return 0

    def representative(self, i):
        return self.cycles[i][0]

    def positive_representative(self, i):
        """Form in the cycle with ``a > 0`` and smallest ``|c|``."""
        return min((f for f in self.cycles[i] if f.a > 0), key=lambda f: (abs(f.c), f))

    def class_of(self, f: BinaryForm) -> int:
        g = reduce(f)
        try:
            return self.index[g]
        except KeyError:
            raise ConventionError(f"reduced form {g} is missing from the class list of D={self.D}") from None

    def multiply(self, i, j):
        key = (i, j) if i <= j else (j, i)
        if key not in self._table:
            self._table[key] = self.class_of(compose(self.representative(i), self.representative(j)))
        return self._table[key]

    def inverse(self, i):
        return self.class_of(self.representative(i).conjugate())

    def power(self, i, e):
        if e < 0:
            return self.power(self.inverse(i), -e)
        result, base = 0, i
        while e:
            if e & 1:
                result = self.multiply(result, base)
            base = self.multiply(base, base)
            e >>= 1
        return result

    @property
    def group_label(self):
        if self.invariant_factors == [4]:
            return "Z4"
        if self.invariant_factors == [2, 2]:
            return "Z2xZ2"
        return "x".join(f"Z{m}" for m in self.invariant_factors) or "trivial"

    def order_two_count(self):
        """Number of classes x with x^2 = 1."""
        return sum(1 for o in self.element_orders if o <= 2)


def _ilog(x, p):
    k = 0
    while x > 1:
        if x % p:
            raise ConventionError(f"subgroup count {x} is not a power of {p}")
        x //= p
        k += 1
    return k


def _structure(G: ClassGroupDescriptor):
    h = G.h
    orders = [1] * h
    exps_by_prime = {}
    for p, e in factorize(h).factors if h > 1 else ():
        m = h // p**e
        counts = [0] * (e + 1)
        for x in range(h):
            y = G.power(x, m)
            k = 0
            while y != 0:
                y = G.power(y, p)
                k += 1
            orders[x] *= p**k
            counts[k] += 1
        # counts[k] = number of Sylow elements of order exactly p^k (each hit m times).
        cum, total = [], 0
        for c in counts:
            total += c // m
            cum.append(total)
        # rank_k = number of cyclic factors of order >= p^k.
        exps = []
        for k in range(1, e + 1):
            exps.append(_ilog(cum[k] // cum[k - 1], p))
        exps_by_prime[p] = sorted((sum(1 for r in exps if r > i) for i in range(max(exps, default=0))), reverse=True)
    width = max((len(v) for v in exps_by_prime.values()), default=0)
    factors = []
    for i in range(width):
        f = 1
        for p, es in exps_by_prime.items():
            if i < len(es):
                f *= p ** es[i]
        factors.append(f)
    return orders, sorted(factors)


def all_classes(D: int, require_norm_minus_one: bool = True) -> ClassGroupDescriptor:
    """Enumerate the reduced forms of ``D``, split them into cycles and determine the group."""
    forms = set(reduced_forms(D))
    cycles = []
    while forms:
        f = min(forms)
        cyc = cycle(f)
        forms.difference_update(cyc)
        cycles.append(cyc)
    principal = next(i for i, cyc in enumerate(cycles) if any(f.a == 1 for f in cyc))
    cycles.insert(0, cycles.pop(principal))
    if require_norm_minus_one and not any(f.a == -1 for f in cycles[0]):
        raise DomainError(f"D={D}: -1 is not a norm from the unit group; narrow and wide class groups differ")
    index = {f: i for i, cyc in enumerate(cycles) for f in cyc}
    G = ClassGroupDescriptor(D, cycles, [], [], index)
    G.element_orders, G.invariant_factors = _structure(G)
    return G


def form_to_ideal(f: BinaryForm, field_):
    """The ideal ``[a, (-b + sqrt D)/2]`` attached to a form with ``a > 0``."""
    if f.a <= 0:
        raise DomainError(f"form {f} needs a positive first coefficient")
    if f.discriminant != field_.D:
        raise DomainError(f"form {f} has discriminant {f.discriminant}, field has {field_.D}")
    return ideal_from_pair(field_, f.a, form_basis_element(f, field_))


def form_basis_element(f: BinaryForm, field_):
    """``(-b + sqrt D)/2``."""
    return QuadraticNumber(-f.b, field_.sqrt_D.v // 2, field_.d)


def ideal_to_form(I) -> BinaryForm:
    """Form ``(a, b, (b^2 - D)/4a)`` of the primitive part ``[a, (-b + sqrt D)/2]`` of ``I``."""
    a, B = I.primitive_part()
    b = -(2 * B + 1) if I.field.omega_kind == HALF_ONE_PLUS_SQRT_D else -2 * B
    num = b * b - I.field.D
    if num % (4 * a):
        raise ConventionError(f"ideal {I} does not normalize to a form of discriminant {I.field.D}")
    return BinaryForm(a, b, num // (4 * a))


def ideal_to_class(I, G: ClassGroupDescriptor) -> int:
    return G.class_of(ideal_to_form(I))
