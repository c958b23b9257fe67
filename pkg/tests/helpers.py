"""Independent oracles and shared strategies for the test suite.

Everything here recomputes expected results from first principles with its
own arithmetic, so a bug in the package cannot hide in its own oracle.  The
only package types used are plain (residue, modulus) pairs and delta lists.
"""

from __future__ import annotations

from collections import Counter
from decimal import Decimal, localcontext
from fractions import Fraction
from math import gcd

from hypothesis import strategies as st

# frames whose divisors supply moduli; keeps every generated Q a divisor
# of the frame instead of rejection-sampling on lcm size
FRAMES = (4, 6, 8, 12, 18, 24, 30, 36, 48, 60, 72, 90, 120, 144, 180, 240, 360, 720)


def brute_lcm(values) -> int:
    out = 1
    for v in values:
        out = out * v // gcd(out, v)
    return out


def divisors_of(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


def brute_covers(pairs) -> tuple[bool, int | None, int]:
    """Coverage decided by per-integer membership tests over one period."""
    q = brute_lcm(d for _, d in pairs)
    uncovered = [x for x in range(q) if not any((x - r) % d == 0 for r, d in pairs)]
    if uncovered:
        return (False, uncovered[0], len(uncovered))
    return (True, None, 0)


def brute_covers_initial_segment(pairs, size: int) -> bool:
    return all(any((x - r) % d == 0 for r, d in pairs) for x in range(1, size + 1))


def brute_multiplicity(pairs) -> int:
    counts = Counter(d for _, d in pairs)
    return max(counts.values())


def brute_largest_prime(n: int) -> int:
    best = 1
    d = 2
    while d * d <= n:
        while n % d == 0:
            best = d
            n //= d
        d += 1
    return n if n > 1 else best


def brute_factor(n: int) -> list[tuple[int, int]]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            e = 0
            while n % d == 0:
                n //= d
                e += 1
            out.append((d, e))
        d += 1
    if n > 1:
        out.append((n, 1))
    return out


def reference_pipeline(pairs, deltas):
    """Pointwise re-derivation of the distorted measures over all of Z/QZ.

    Maintains one rational mass per residue mod Q (no fiber collapsing, no
    denominator bucketing) and applies the two-case update directly.  Returns
    (records, eta): each record carries level, prime, alpha (per residue mod
    Q_(j-1)), m1, m2, term, branch, and the full pointwise masses after the
    level.
    """
    q = brute_lcm(d for _, d in pairs)
    fact = brute_factor(q)
    partials = [1]
    for p, e in fact:
        partials.append(partials[-1] * p**e)
    depth = len(fact)
    assert len(deltas) == depth, "one delta per prime of Q"
    masses = [Fraction(1, q)] * q
    records = []
    eta = Fraction(0)
    for j in range(1, depth + 1):
        p = fact[j - 1][0]
        qj, qprev = partials[j], partials[j - 1]
        lifts = qj // qprev
        level_pairs = [(r, d) for r, d in pairs if brute_largest_prime(d) == p]
        in_b = [
            any((z - r) % d == 0 for r, d in level_pairs) for z in range(qj)
        ]
        alpha = []
        for y in range(qprev):
            hits = sum(1 for z in range(y, qj, qprev) if in_b[z])
            alpha.append(Fraction(hits, lifts))
        m1 = sum((masses[x] * alpha[x % qprev] for x in range(q)), Fraction(0))
        m2 = sum((masses[x] * alpha[x % qprev] ** 2 for x in range(q)), Fraction(0))
        delta = Fraction(deltas[j - 1])
        if delta == 0:
            term, branch = m1, "first-moment"
        else:
            second = m2 / (4 * delta * (1 - delta))
            if m1 <= second:
                term, branch = m1, "first-moment"
            else:
                term, branch = second, "second-moment"
        eta += term
        updated = []
        for x in range(q):
            a = alpha[x % qprev]
            mx = masses[x]
            if a < delta:
                updated.append(Fraction(0) if in_b[x % qj] else mx / (1 - a))
            elif in_b[x % qj]:
                updated.append(mx * (a - delta) / (a * (1 - delta)))
            else:
                updated.append(mx / (1 - delta))
        masses = updated
        records.append(
            {
                "level": j,
                "prime": p,
                "modulus": qj,
                "alpha": tuple(alpha),
                "m1": m1,
                "m2": m2,
                "term": term,
                "branch": branch,
                "masses": tuple(masses),
            }
        )
    return records, eta


def fiber_sums(pointwise, modulus: int) -> tuple[Fraction, ...]:
    """Collapse pointwise masses over Z/QZ to fiber masses over Z/modulusZ."""
    q = len(pointwise)
    return tuple(
        sum((pointwise[x] for x in range(y, q, modulus)), Fraction(0))
        for y in range(modulus)
    )


def sieve_smooth_reciprocal(y: int, threshold: int, cap: int) -> Fraction:
    """Smooth reciprocal sum via a largest-prime-factor sieve."""
    lpf = list(range(cap + 1))
    for i in range(2, cap + 1):
        if lpf[i] == i:
            for k in range(2 * i, cap + 1, i):
                lpf[k] = i
    return sum(
        (Fraction(1, d) for d in range(threshold + 1, cap + 1) if lpf[d] <= y),
        Fraction(0),
    )


def decimal_jth_modulus_bound(j: int, c, digits: int = 45) -> Decimal:
    """exp(c j^2 / log(j+1)) via the decimal module, independent of mpmath."""
    with localcontext() as ctx:
        ctx.prec = digits + 15
        cd = _decimal_constant(c)
        return (cd * j * j / Decimal(j + 1).ln()).exp()


def decimal_multiplicity_modulus_bound(s: int, c, digits: int = 45) -> Decimal:
    """exp(c log^2(s+1) / log log(s+2)) via the decimal module."""
    with localcontext() as ctx:
        ctx.prec = digits + 15
        cd = _decimal_constant(c)
        num = cd * Decimal(s + 1).ln() ** 2
        return (num / Decimal(s + 2).ln().ln()).exp()


def _decimal_constant(c) -> Decimal:
    if isinstance(c, Fraction):
        return Decimal(c.numerator) / Decimal(c.denominator)
    if isinstance(c, str) and "/" in c:
        num, den = c.split("/")
        return Decimal(num.strip()) / Decimal(den.strip())
    return Decimal(str(c))


def agree_to_digits(a, b, digits: int) -> bool:
    """True when a and b agree to the given number of significant digits."""
    x = Fraction(str(a))
    y = Fraction(str(b))
    if x == y:
        return True
    return abs(x - y) < abs(y) * Fraction(1, 10**digits) * 5


# ---------------------------------------------------------------------------
# hypothesis strategies


@st.composite
def class_pairs(draw, frame: int, min_modulus: int = 1):
    pool = [d for d in divisors_of(frame) if d >= min_modulus]
    d = draw(st.sampled_from(pool))
    r = draw(st.integers(min_value=-2 * frame, max_value=2 * frame))
    return (r, d)


@st.composite
def system_pairs(draw, max_classes: int = 6, min_classes: int = 0, min_modulus: int = 1):
    frame = draw(st.sampled_from(FRAMES))
    n = draw(st.integers(min_value=min_classes, max_value=max_classes))
    return [draw(class_pairs(frame, min_modulus)) for _ in range(n)]


_DELTA_POOL = (
    Fraction(0),
    Fraction(1, 2),
    Fraction(1, 4),
    Fraction(1, 3),
    Fraction(1, 8),
    Fraction(2, 5),
)


@st.composite
def pipeline_cases(draw, max_classes: int = 5):
    """(pairs, deltas) with all moduli >= 2 and one delta per prime of Q."""
    pairs = draw(system_pairs(max_classes=max_classes, min_classes=1, min_modulus=2))
    q = brute_lcm(d for _, d in pairs)
    depth = len(brute_factor(q))
    deltas = [draw(st.sampled_from(_DELTA_POOL)) for _ in range(depth)]
    return pairs, deltas
