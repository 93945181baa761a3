"""Exact integer and rational arithmetic.

Rationals are :class:`fractions.Fraction`, which normalizes eagerly, so every
downstream comparison is an exact equality.  Factorization uses a lazily built
smallest-prime-factor table for small arguments (the scan workload computes
millions of divisor sums below a few million), and trial division followed by
Pollard rho beyond it.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from operator import mul

import numpy as np

from .errors import DomainError

Rational = Fraction

# Table cap: 2**23 entries of uint32 is 32 MiB.
_SPF_CAP = 1 << 23
_TRIAL_LIMIT = 10**6
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)

_spf = np.zeros(0, dtype=np.uint32)


def _spf_table(limit):
    """Return a smallest-prime-factor table covering ``0..limit``.

    The table only ever grows, and is read-only once built, so sharing it
    between calls (and forked worker processes) is safe.
    """
    global _spf
    if limit < len(_spf):
        return _spf
    size = 1 << max(10, (limit + 1).bit_length())
    size = min(size, _SPF_CAP)
    spf = np.zeros(size, dtype=np.uint32)
    spf[2::2] = 2
    for p in range(3, math.isqrt(size - 1) + 1, 2):
        if spf[p] == 0:
            s = spf[p * p :: 2 * p]
            s[s == 0] = p
    # Remaining zeros (n >= 2) are primes.
    idx = np.nonzero(spf == 0)[0]
    spf[idx] = idx.astype(np.uint32)
    _spf = spf
    return spf


def is_prime(m: int) -> bool:
    """Strong-pseudoprime test; deterministic for ``m < 3.3e24``."""
    if m < 2:
        return False
    for p in _MR_BASES:
        if m % p == 0:
            return m == p
    e, s = m - 1, 0
    while e % 2 == 0:
        e //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, e, m)
        if x in (1, m - 1):
            continue
        for _ in range(s - 1):
            x = x * x % m
            if x == m - 1:
                break
        else:
            return False
    return True


def _pollard_rho(m, rng):
    if m % 2 == 0:
        return 2
    while True:
        c = rng.randrange(1, m)
        y = x = rng.randrange(2, m)
        g = 1
        while g == 1:
            x = (x * x + c) % m
            y = (y * y + c) % m
            y = (y * y + c) % m
            g = math.gcd(abs(x - y), m)
        if g != m:
            return g


def _factor_large(m, out):
    # Trial division first, then rho on whatever survives.
    p = 2
    while p * p <= m and p <= _TRIAL_LIMIT:
        while m % p == 0:
            out[p] = out.get(p, 0) + 1
            m //= p
        p += 1 if p == 2 else 2
    if m == 1:
        return
    stack = [m]
    rng = random.Random(m)
    while stack:
        x = stack.pop()
        if x == 1:
            continue
        if x <= _TRIAL_LIMIT**2 or is_prime(x):
            out[x] = out.get(x, 0) + 1
            continue
        f = _pollard_rho(x, rng)
        stack.extend((f, x // f))


@dataclass(frozen=True)
class FactorProfile:
    value: int
    factors: tuple  # ((prime, exponent), ...), primes increasing
    odd_prime_count: int

    def exponent(self, p):
        for q, e in self.factors:
            if q == p:
                return e
        return 0

    @property
    def primes(self):
        return tuple(p for p, _ in self.factors)

    @property
    def odd_part(self):
        return tuple((p, e) for p, e in self.factors if p != 2)


def factor_dict(m: int) -> dict:
    if m < 1:
        raise DomainError(f"factorize needs a positive integer, got {m}")
    out = {}
    if m < _SPF_CAP:
        spf = _spf_table(m)
        while m > 1:
            p = int(spf[m])
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            out[p] = e
        return out
    _factor_large(m, out)
    return out


def factorize(m: int) -> FactorProfile:
    fac = tuple(sorted(factor_dict(m).items()))
    return FactorProfile(m, fac, sum(1 for p, _ in fac if p != 2))


def sigma(m: int) -> int:
    """Sum of the positive divisors of ``m``."""
    if m < 1:
        raise DomainError(f"sigma needs a positive integer, got {m}")
    total = 1
    for p, e in factor_dict(m).items():
        total *= (p ** (e + 1) - 1) // (p - 1)
    return total


def divisors(m: int) -> list:
    divs = [1]
    for p, e in factor_dict(m).items():
        divs = [x * p**k for x in divs for k in range(e + 1)]
    return sorted(divs)


def square_factor(m: int) -> int:
    """Largest ``s`` with ``s**2 | m``; 1 iff ``m`` is square-free."""
    return reduce(mul, (p ** (e // 2) for p, e in factor_dict(m).items()), 1)


def is_squarefree(m: int) -> bool:
    return all(e == 1 for e in factor_dict(m).values())


def legendre(a: int, p: int) -> int:
    r = pow(a % p, (p - 1) // 2, p)
    return -1 if r == p - 1 else r


def sqrt_mod_prime(a: int, p: int) -> int:
    """Some root of ``x**2 = a (mod p)`` (Tonelli-Shanks), ``p`` an odd prime."""
    a %= p
    if a == 0:
        return 0
    if legendre(a, p) != 1:
        raise DomainError(f"{a} is not a square modulo {p}")
    if p % 4 == 3:
        return pow(a, (p + 1) // 4, p)
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while legendre(z, p) != -1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c, t, r = i, b * b % p, t * b * b % p, r * b % p
    return r


def bernoulli_polynomial(p: int, x) -> Fraction:
    x = Fraction(x)
    if p == 0:
        return Fraction(1)
    if p == 1:
        return x - Fraction(1, 2)
    if p == 2:
        return x * x - x + Fraction(1, 6)
    if p == 3:
        return x**3 - Fraction(3, 2) * x * x + Fraction(1, 2) * x
    raise DomainError(f"Bernoulli polynomial index must be in 0..3, got {p}")


def periodic_bernoulli(p: int, x) -> Fraction:
    """1-periodic Bernoulli function, with the symmetric value 0 for p=1 at integers."""
    if not 1 <= p <= 3:
        raise DomainError(f"periodic Bernoulli index must be in 1..3, got {p}")
    x = Fraction(x)
    frac = x - math.floor(x)
    if p == 1 and frac == 0:
        return Fraction(0)
    return bernoulli_polynomial(p, frac)


def frac_str(x) -> str:
    """Render as ``"num/den"`` (or ``"num"`` for integers)."""
    return str(Fraction(x))
