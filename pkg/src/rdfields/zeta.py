"""Dedekind zeta values at s = -1: total, per ideal class, and closed forms.

The total comes from Zagier's divisor-sum formula; per-class values come from
Lang's formula on an integral basis ``(r1, r2)`` of an ideal in the inverse
class, with the unit-action matrix ``M`` (``eps * (r1, r2)^T = M (r1, r2)^T``).
Every step is exact rational arithmetic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .arith import sigma
from .dedekind import dedekind_sum
from .errors import ConventionError, DomainError, ZetaInconsistency
from .forms import ClassGroupDescriptor, all_classes, form_basis_element, form_to_ideal
from .quadfield import FieldDescriptor, IdealLattice, QuadraticNumber, delta


@dataclass(frozen=True)
class UnitActionMatrix:
    a: int
    b: int
    c: int
    d: int

    @property
    def det(self):
        return self.a * self.d - self.b * self.c

    @property
    def trace(self):
        return self.a + self.d

    def as_lists(self):
        return [[self.a, self.b], [self.c, self.d]]


@dataclass(frozen=True)
class PartialZetaReport:
    class_index: object
    basis: tuple
    matrix: UnitActionMatrix
    sign_delta: int
    value: Fraction


def zagier_zeta_minus1(field: FieldDescriptor) -> Fraction:
    """(1/60) * sum of sigma((D - t^2)/4) over |t| < sqrt(D), t = D (mod 2)."""
    return zagier_from_discriminant(field.D)


def zagier_from_discriminant(D: int) -> Fraction:
    s = math.isqrt(D)
    if s * s == D:
        s -= 1
    total = 0
    for t in range(D % 2, s + 1, 2):
        term = sigma((D - t * t) // 4)
        total += term if t == 0 else 2 * term
    return Fraction(total, 60)


def _trace_over_delta(x: QuadraticNumber, dl: QuadraticNumber):
    return (x / dl).trace()


def _as_integer(x, what):
    x = Fraction(x)
    if x.denominator != 1:
        raise ConventionError(f"unit-action entry {what} = {x} is not an integer")
    return x.numerator


def unit_action_matrix(field: FieldDescriptor, r1: QuadraticNumber, r2: QuadraticNumber) -> UnitActionMatrix:
    """Matrix of multiplication by the fundamental unit on the basis ``(r1, r2)``.

    Computed from the trace formulas and, independently, by solving
    ``eps*r_i = x*r1 + y*r2`` in coordinates; both must agree.
    """
    eps = field.epsilon
    epsc = eps.conjugate()
    dl = delta(r1, r2)
    if dl.sign() == 0:
        raise DomainError("degenerate basis; basis elements are linearly dependent")
    r1c, r2c = r1.conjugate(), r2.conjugate()
    by_trace = (
        _trace_over_delta(r1 * r2c * eps, dl),
        _trace_over_delta(r1 * r1c * epsc, dl),
        _trace_over_delta(r2 * r2c * eps, dl),
        _trace_over_delta(r1 * r2c * epsc, dl),
    )
    # Cramer's rule on (u, v) coordinates.
    det = Fraction(r1.u * r2.v - r2.u * r1.v)
    solved = []
    for target in (eps * r1, eps * r2):
        solved.append((target.u * r2.v - r2.u * target.v) / det)
        solved.append((r1.u * target.v - target.u * r1.v) / det)
    if tuple(Fraction(x) for x in by_trace) != tuple(solved):
        raise ConventionError(f"trace formulas give {by_trace}, linear solve gives {solved}")
    M = UnitActionMatrix(*(_as_integer(x, name) for x, name in zip(solved, "abcd")))
    if M.det != field.epsilon_norm:
        raise ConventionError(f"det M = {M.det} differs from N(eps) = {field.epsilon_norm}")
    if M.b == 0 or M.c == 0:
        raise ConventionError(f"unit-action matrix {M.as_lists()} has bc = 0")
    return M


def _sgn(x):
    return (x > 0) - (x < 0)


def lang_partial_zeta(field: FieldDescriptor, ideal: IdealLattice, basis=None, class_index=None) -> PartialZetaReport:
    """Partial zeta value at -1 of the class A with ``ideal`` in A^{-1}.

    ``basis`` defaults to the ideal's Hermite basis ``(a, beta)``.
    """
    r1, r2 = basis if basis is not None else ideal.basis
    M = unit_action_matrix(field, r1, r2)
    a, c, d = M.a, M.c, M.d
    if c == 0:
        raise DomainError("degenerate basis; re-order")
    dl = delta(r1, r2)
    sd = dl.sign()
    k, sc = abs(c), _sgn(c)
    nu = field.epsilon_norm
    c3 = c**3
    brace = (
        (a + d) ** 3
        - 6 * (a + d) * nu
        - 240 * c3 * sc * dedekind_sum(3, a, k)
        + 180 * a * c3 * sc * dedekind_sum(2, a, k)
        - 240 * c3 * sc * dedekind_sum(3, d, k)
        + 180 * d * c3 * sc * dedekind_sum(2, d, k)
    )
    value = Fraction(sd * r2.norm(), 360 * ideal.norm * c3) * brace
    return PartialZetaReport(class_index, (r1, r2), M, sd, value)


def partial_zetas(field: FieldDescriptor, G: ClassGroupDescriptor):
    """One Lang report per class, indexed by the class whose partial zeta it is."""
    reports = []
    for i in range(G.h):
        f = G.positive_representative(i)
        I = form_to_ideal(f, field)
        basis = (QuadraticNumber.rational(f.a, field.d), form_basis_element(f, field))
        # I lies in class i, so its value belongs to the inverse class.
        reports.append(lang_partial_zeta(field, I, basis, class_index=G.inverse(i)))
    reports.sort(key=lambda rep: rep.class_index)
    return reports


def zeta_minus1_by_classes(field: FieldDescriptor, G: ClassGroupDescriptor = None, check=True) -> Fraction:
    """Sum of the partial zeta values over all classes."""
    if G is None:
        G = all_classes(field.D)
    total = sum((rep.value for rep in partial_zetas(field, G)), Fraction(0))
    if check:
        expected = zagier_zeta_minus1(field)
        if total != expected:
            raise ZetaInconsistency(f"{field}: class sum {total} differs from Zagier value {expected}")
    return total


def closed_principal_zeta(field: FieldDescriptor) -> Fraction:
    """Principal-class value for d = n^2 + 1."""
    n = field.n
    if field.r != 1:
        raise DomainError("closed principal-class form is only available for d = n^2 + 1")
    if field.unit_exception:
        raise DomainError("unit exception: closed form invalid for d = 5 (n = 2)")
    if field.d % 4 == 1:
        return Fraction(n**3 + 14 * n, 360)
    return Fraction(4 * n**3 + 11 * n, 180)


def closed_split_class_zeta(field: FieldDescriptor, p: int, exponent: int = 1) -> Fraction:
    """Closed-form partial zeta value of the class of ``(p^e, (1 - sqrt d)/2)``-type ideals.

    Covers odd ``p | n`` (exponent 1 or 2 when d is odd, exponent 1 when
    d = 2 mod 4) and ``p = 2`` (d = 1 mod 8, or d = 2 mod 4 where 2 ramifies),
    always for d = n^2 + 1.
    """
    n, d = field.n, field.d
    if field.r != 1 or field.unit_exception:
        raise DomainError("closed split-class forms need d = n^2 + 1 with n != 2")
    if exponent not in (1, 2):
        raise DomainError(f"exponent must be 1 or 2, got {exponent}")
    if p == 2:
        if exponent != 1:
            raise DomainError("no closed form for the square of the class above 2")
        if d % 8 == 1:
            return Fraction(n**3 + 104 * n, 1440)
        if d % 4 == 2:
            return Fraction(n**3 + 14 * n, 180)
        raise DomainError(f"2 is inert in Q(sqrt({d}))")
    q = p**exponent
    if p % 2 == 0 or n % q:
        raise DomainError(f"{q} must be an odd prime power dividing n = {n}")
    if d % 2 == 1:
        return Fraction(n**3 + n * (4 * q**4 + 10 * q**2), 360 * q**2)
    if exponent != 1:
        raise DomainError("no closed form for squared classes when d = 2 mod 4")
    return Fraction(4 * n**3 + n * (p**4 + 10 * p**2), 180 * p**2)
