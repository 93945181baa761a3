"""Order-4 class-group classification for Q(sqrt(n^2 + r)), and its verification.

:func:`classify` matches the factorization of ``n`` (and ``d mod 8``) against
the hypotheses of the classification results; :func:`verify_instance` checks a
prediction against the form class group and Zagier's value.
"""

from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction

from .arith import factorize, is_squarefree, square_factor
from .errors import ConventionError, DomainError
from .forms import all_classes, genus_count
from .quadfield import make_field
from .zeta import closed_principal_zeta, partial_zetas, zagier_zeta_minus1

log = logging.getLogger(__name__)

T1_I, T1_II = "T1_I", "T1_II"
T2_I, T2_II, T2_III = "T2_I", "T2_II", "T2_III"
T3_I, T3_II = "T3_I", "T3_II"
T4_i, T4_ii, T4_iii = "T4_i", "T4_ii", "T4_iii"
UNCOVERED = "UNCOVERED"

Z4, Z2xZ2, NONE = "Z4", "Z2xZ2", "NONE"
GROUP_FACTORS = {Z4: [4], Z2xZ2: [2, 2]}

CONFIRMED, VACUOUS, VIOLATION, REJECTED = "CONFIRMED", "VACUOUS", "VIOLATION", "REJECTED"
STATUSES = (CONFIRMED, VACUOUS, UNCOVERED, VIOLATION, REJECTED)

# Cases whose conclusion includes a total zeta formula.
_FORMULA_CASES = {T1_I: "t1_i", T1_II: "t1_ii", T2_I: "t1_i", T2_III: "t2_iii", T3_I: "t3_i"}


@dataclass(frozen=True)
class ClassificationCase:
    label: str
    parameters: dict = field(default_factory=dict)
    predicted_group: str = NONE
    predicted_zeta: str | None = None

    def __str__(self):
        if not self.parameters:
            return self.label
        inner = ",".join(f"{k}={v}" for k, v in self.parameters.items())
        return f"{self.label}({inner})"


def _case(label, group, **params):
    return ClassificationCase(label, params, group, _FORMULA_CASES.get(label))


def _odd_names(odd):
    names = {}
    for (p, e), (pn, en) in zip(odd, (("p", "s"), ("q", "t"), ("l", "u"))):
        names[pn], names[en] = p, e
    return names


def _matches(n, r):
    """All hypotheses satisfied by (n, r); more than one would be a bug."""
    prof = factorize(n)
    m = prof.exponent(2)
    odd = prof.odd_part
    k = len(odd)
    exps = [e for _, e in odd]
    found = []
    if r == 1:
        d8 = (n * n + 1) % 8
        if d8 == 1:  # 4 | n
            if k == 1 and exps[0] >= 2:
                found.append(_case(T1_I, Z4, m=m, p=odd[0][0], t=exps[0]))
            if k == 2:
                found.append(_case(T1_II, Z2xZ2, m=m, **_odd_names(odd)))
        elif d8 == 5:  # n = 2 (mod 4)
            if k == 1 and exps[0] >= 3:
                found.append(_case(T2_I, Z4, p=odd[0][0], t=exps[0]))
            if k == 2:
                s, t = exps
                if s > 2 or t > 2 or (s >= 2 and t >= 2):
                    found.append(_case(T2_II, Z2xZ2, **_odd_names(odd)))
            if k == 3:
                found.append(_case(T2_III, Z2xZ2, **_odd_names(odd)))
        else:  # n odd, d = 2 (mod 8)
            if k == 2:
                found.append(_case(T3_I, Z2xZ2, **_odd_names(odd)))
            if k == 1 and exps[0] >= 2:
                found.append(_case(T3_II, Z4, p=odd[0][0], t=exps[0]))
    elif r == 4 and m == 0:
        if k == 1 and exps[0] >= 2:
            found.append(_case(T4_i, Z4, p=odd[0][0], t=exps[0]))
        if k == 2 and max(exps) >= 2:
            found.append(_case(T4_ii, Z2xZ2, **_odd_names(odd)))
        if k >= 3:
            found.append(_case(T4_iii, Z2xZ2, primes=k))
    return found


def classify(n: int, r: int) -> ClassificationCase:
    if n < 1:
        raise DomainError(f"n must be positive, got {n}")
    if r not in (1, 4):
        raise DomainError(f"r must be 1 or 4, got {r}")
    found = _matches(n, r)
    if len(found) > 1:
        raise ConventionError(f"n={n}, r={r} matches several hypotheses: {found}")
    return found[0] if found else ClassificationCase(UNCOVERED)


def _split_term(n, x):
    return Fraction(n**3 + n * (4 * x**4 + 10 * x**2), 360 * x**2)


def predicted_zeta_formula(case: ClassificationCase, n: int):
    """The total zeta value at -1 asserted by the matched case, or None."""
    P = case.parameters
    fid = case.predicted_zeta
    if fid == "t1_i":
        p = P["p"]
        return Fraction(n**3 + 14 * n, 360) + 2 * _split_term(n, p) + _split_term(n, p * p)
    if fid == "t1_ii":
        return Fraction(n**3 + 32 * n, 288) + _split_term(n, P["p"]) + _split_term(n, P["q"])
    if fid == "t2_iii":
        return Fraction(n**3 + 14 * n, 360) + sum(_split_term(n, P[x]) for x in "pql")
    if fid == "t3_i":
        p, q = P["p"], P["q"]
        return (
            Fraction(n**3 + 5 * n, 36)
            + Fraction(4 * n**3 + n * (p**4 + 10 * p**2), 180 * p**2)
            + Fraction(4 * n**3 + n * (q**4 + 10 * q**2), 180 * q**2)
        )
    return None


def proposition_bound(n: int):
    """Lower bound on h for d = n^2 + 1 with at least three odd primes dividing n, else None."""
    N = factorize(n).odd_prime_count
    if N < 3:
        return None
    return N + 1 if (n * n + 1) % 8 == 5 else N + 2


def proposition_check(n: int, h: int | None = None):
    """None when the bound holds or does not apply, else a description of the violation."""
    bound = proposition_bound(n)
    d = n * n + 1
    if bound is None or not is_squarefree(d):
        return None
    if h is None:
        h = all_classes(make_field(n, 1).D).h
    if h < bound:
        return f"n={n}: h={h} < {bound}"
    return None


@dataclass
class VerificationRecord:
    n: int
    r: int
    d: int
    D: int | None
    squarefree: bool
    h: int | None
    invariant_factors: list | None
    case: ClassificationCase
    zeta_total: Fraction | None
    zeta_by_classes: Fraction | None
    closed_zeta: Fraction | None
    status: str
    notes: list = field(default_factory=list)


def _boundary_notes(n, r, case, G, d):
    notes = []
    if G.h != 4:
        return notes
    prof = factorize(n)
    odd = prof.odd_part
    if case.label == T3_II and case.parameters["t"] == 2:
        notes.append(f"flag: exponent t=2 admitted by the stated hypothesis of {T3_II}; oracle group {G.group_label}")
    if r == 1 and prof.exponent(2) == 1 and len(odd) == 1 and odd[0][1] == 2:
        notes.append(f"flag: n=2p^2 lies just below the exponent bound of {T2_I}; oracle group {G.group_label}")
    if case.label == T3_I and is_squarefree(d) and factorize(d // 2).factors == ((d // 2, 1),):
        notes.append(f"flag: d/2 is prime, so the 2-rank is 1; oracle group {G.group_label}")
    return notes


def verify_instance(n: int, r: int, class_zeta: bool = True) -> VerificationRecord:
    """Verify the classification at one field against both oracles."""
    d = n * n + r
    case = classify(n, r)
    if (r == 4 and n % 2 == 0) or square_factor(d) != 1:
        sq = 2 if r == 4 and n % 2 == 0 else square_factor(d)
        return VerificationRecord(
            n, r, d, None, False, None, None, case, None, None, None, REJECTED, [f"d={d} is divisible by {sq}^2"]
        )
    F = make_field(n, r)
    G = all_classes(F.D)
    notes = []
    problems = []
    if F.unit_exception:
        notes.append(f"unit exception: fundamental unit is {F.epsilon}")
    total = zagier_zeta_minus1(F)
    by_classes = None
    if class_zeta or G.h == 4:
        reports = partial_zetas(F, G)
        by_classes = sum((rep.value for rep in reports), Fraction(0))
        if by_classes != total:
            problems.append(f"class sum {by_classes} != Zagier {total}")
        if r == 1 and not F.unit_exception:
            principal = reports[0].value
            if principal != closed_principal_zeta(F):
                problems.append(f"principal partial {principal} != closed form {closed_principal_zeta(F)}")
    if G.order_two_count() != genus_count(F.D):
        problems.append(f"{G.order_two_count()} classes of order <= 2, genus theory gives {genus_count(F.D)}")
    if r == 1:
        v = proposition_check(n, G.h)
        if v:
            problems.append(f"class-number bound: {v}")
    closed = None
    notes += _boundary_notes(n, r, case, G, d)
    if G.h != 4:
        status = VACUOUS
    elif case.label == UNCOVERED:
        status = UNCOVERED
    else:
        status = CONFIRMED
        if G.invariant_factors != GROUP_FACTORS[case.predicted_group]:
            problems.append(f"predicted {case.predicted_group}, oracle group {G.group_label}")
        closed = predicted_zeta_formula(case, n)
        if closed is not None and closed != total:
            problems.append(f"formula value {closed} != Zagier {total}")
    if problems:
        status = VIOLATION
        notes += problems
        log.warning("n=%d r=%d: %s", n, r, "; ".join(problems))
    return VerificationRecord(n, r, d, F.D, True, G.h, list(G.invariant_factors), case, total, by_classes, closed, status, notes)


def _verify_args(args):
    return verify_instance(*args)


def scan(n_min: int, n_max: int, r: int, jobs: int = 1, class_zeta: bool = True):
    """Yield records for ``n_min <= n <= n_max`` in increasing n."""
    tasks = [(n, r, class_zeta) for n in range(max(n_min, 1), n_max + 1)]
    if jobs <= 1 or len(tasks) < 2:
        for t in tasks:
            yield verify_instance(*t)
        return
    from multiprocessing import Pool

    with Pool(jobs) as pool:
        yield from pool.imap(_verify_args, tasks, chunksize=8)


def summarize(records):
    """Status counts plus an (N -> count, min h, max h) table over classified fields."""
    counts = Counter()
    trend = {}
    for rec in records:
        counts[rec.status] += 1
        if rec.h is None:
            continue
        N = factorize(rec.n).odd_prime_count
        cnt, lo, hi = trend.get(N, (0, rec.h, rec.h))
        trend[N] = (cnt + 1, min(lo, rec.h), max(hi, rec.h))
    return {"status_counts": {s: counts.get(s, 0) for s in STATUSES}, "trend": dict(sorted(trend.items()))}
