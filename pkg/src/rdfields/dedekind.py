"""Generalized Dedekind sums.

    S^p(h, k) = sum_{a mod k} Bbar_{4-p}(a/k) * Bbar_p(h*a/k),    p in {1, 2, 3}

with the periodic Bernoulli functions of :mod:`rdfields.arith` (Bbar_1 vanishes
at integers).  Direct evaluation clears the common denominator ``k**4`` and
accumulates integer polynomials in ``a`` and ``y = h*a mod k``; the closed forms
for ``h = +-1 (mod k)`` and ``h = m +- 1 (mod 2m)`` serve as fast paths and as
an independent check.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .arith import periodic_bernoulli
from .errors import DomainError

# |term| <= k**4 for every p, so a chunk of L terms stays below 2**63 while
# L * k**4 < 9e18.
_INT64_SAFE = 9 * 10**18
_NUMPY_MAX_K = 50_000


def _check(p, k):
    if p not in (1, 2, 3):
        raise DomainError(f"Dedekind sum index must be 1, 2 or 3, got {p}")
    if k < 1:
        raise DomainError(f"Dedekind sum modulus must be positive, got {k}")


def _numerators(p, a, y, k, zero):
    # Scaled so that S^p = sum(numerators) / (scale * k**4).
    if p == 2:
        return (6 * a * a - 6 * a * k + k * k) * (6 * y * y - 6 * y * k + k * k)
    if p == 3:
        lin = 2 * a - k
        lin = np.where(a == 0, zero, lin) if zero is not None else (0 if a == 0 else lin)
        return lin * (y * (2 * y - k) * (y - k))
    lin = 2 * y - k
    lin = np.where(y == 0, zero, lin) if zero is not None else (0 if y == 0 else lin)
    return (a * (2 * a - k) * (a - k)) * lin


_SCALE = {1: 4, 2: 36, 3: 4}


def _direct_numpy(p, h, k):
    chunk = max(1, _INT64_SAFE // k**4)
    total = 0
    for start in range(0, k, chunk):
        a = np.arange(start, min(k, start + chunk), dtype=np.int64)
        y = (a * h) % k
        total += int(_numerators(p, a, y, k, np.int64(0)).sum())
    return total


def _direct_python(p, h, k):
    return sum(_numerators(p, a, (h * a) % k, k, None) for a in range(k))


def dedekind_sum_direct(p: int, h: int, k: int) -> Fraction:
    """O(k) exact evaluation of S^p(h, k) from the definition."""
    _check(p, k)
    h %= k
    if k <= _NUMPY_MAX_K:
        num = _direct_numpy(p, h, k)
    else:
        num = _direct_python(p, h, k)
    return Fraction(num, _SCALE[p] * k**4)


def dedekind_sum_reference(p: int, h: int, k: int) -> Fraction:
    """Term-by-term evaluation with Fraction Bernoulli values (slow, for testing)."""
    _check(p, k)
    return sum(
        (periodic_bernoulli(4 - p, Fraction(a, k)) * periodic_bernoulli(p, Fraction(h * a, k)) for a in range(k)),
        Fraction(0),
    )


def closed_form_unit(p: int, sign: int, m: int) -> Fraction:
    """S^p(+-1, m) for p in {2, 3}."""
    if p not in (2, 3):
        raise DomainError(f"closed form for S^p(+-1, m) needs p in {{2, 3}}, got {p}")
    if sign not in (1, -1):
        raise DomainError(f"sign must be +1 or -1, got {sign}")
    if m < 1:
        raise DomainError(f"m must be positive, got {m}")
    if p == 3:
        return sign * Fraction(-(m**4) + 5 * m**2 - 4, 120 * m**3)
    return Fraction(m**4 + 10 * m**2 - 6, 180 * m**3)


def closed_form_near_half(p: int, sign: int, m: int) -> Fraction:
    """S^p(m +- 1, 2m) for even m and p in {1, 2, 3}."""
    if p not in (1, 2, 3):
        raise DomainError(f"p must be 1, 2 or 3, got {p}")
    if sign not in (1, -1):
        raise DomainError(f"sign must be +1 or -1, got {sign}")
    if m < 2 or m % 2:
        raise DomainError(f"m must be a positive even integer, got {m}")
    if p == 2:
        return Fraction(m**4 + 100 * m**2 - 6, 1440 * m**3)
    # S^1 and S^3 agree here since (m+1)^2 = 1 (mod 2m); S^1 is odd in h.
    return -sign * Fraction(m**4 - 50 * m**2 + 4, 960 * m**3)


def closed_form(p: int, h: int, k: int):
    """Closed-form value of S^p(h, k) when ``(h mod k, k)`` matches a known pattern, else None."""
    _check(p, k)
    h %= k
    if p in (1, 3) and k > 2 and h in (1, k - 1):
        # h^2 = 1 (mod k) makes S^1 = S^3.
        return closed_form_unit(3, 1 if h == 1 else -1, k)
    if p in (2, 3) and h in (1 % k, (k - 1) % k):
        if k <= 2:
            return closed_form_unit(p, 1, k)
        return closed_form_unit(p, 1 if h == 1 else -1, k)
    if k % 4 == 0:
        m = k // 2
        if h == m + 1:
            return closed_form_near_half(p, 1, m)
        if h == m - 1:
            return closed_form_near_half(p, -1, m)
    return None


def dedekind_sum(p: int, h: int, k: int, method: str = "auto") -> Fraction:
    """Generalized Dedekind sum S^p(h, k).

    ``method`` is ``"direct"`` (always sum), ``"closed"`` (closed form only;
    raises when no pattern applies) or ``"auto"`` (closed form if available).
    """
    _check(p, k)
    if method == "direct":
        return dedekind_sum_direct(p, h, k)
    value = closed_form(p, h, k)
    if value is not None:
        return value
    if method == "closed":
        raise DomainError(f"no closed form for S^{p}({h}, {k})")
    return dedekind_sum_direct(p, h, k)
