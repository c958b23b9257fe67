"""Exact arithmetic on residue classes and systems of congruences.

Everything here is exact: residues and moduli are arbitrary-precision
integers, densities are fractions, and coverage questions are decided by
finite enumeration over Z/QZ, where Q is the lcm of the moduli.  Any
operation that scans a residue space or an interval is guarded by a
configurable cap and fails loudly instead of grinding.
"""

from __future__ import annotations

import json
import re
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import gcd, lcm


class CovercertError(Exception):
    """Base class for errors raised by this package."""


class DomainError(CovercertError):
    """Input lies outside an operation's domain."""


class InvalidModulusError(DomainError):
    """A modulus smaller than 1 was supplied."""


class ParseError(CovercertError):
    """Malformed system text."""

    def __init__(self, message: str, line: int | None = None):
        super().__init__(message)
        self.line = line


class ResourceLimitError(CovercertError):
    """An enumeration would exceed the configured limit."""

    def __init__(self, message: str, required: int | None = None, limit: int | None = None):
        super().__init__(message)
        self.required = required
        self.limit = limit


class InternalConsistencyError(CovercertError):
    """A structural invariant that should hold by construction failed."""


@dataclass(frozen=True)
class Limits:
    """Caps on the finite enumerations behind the decision procedures."""

    residue_space: int = 10_000_000  # largest Z/QZ that may be scanned
    interval: int = 2**24            # longest initial segment {1..2^n} scanned
    divisors: int = 1_000_000        # largest divisor/progression enumeration


DEFAULT_LIMITS = Limits()


def rational_str(q: Fraction) -> str:
    """Render a fraction as an exact 'numerator/denominator' string."""
    return f"{q.numerator}/{q.denominator}"


# ---------------------------------------------------------------------------
# residue classes


@dataclass(frozen=True)
class ResidueClass:
    """A single congruence a mod d, stored with 0 <= a < d.

    A modulus of 1 denotes the class equal to all of Z.
    """

    residue: int
    modulus: int

    def __post_init__(self):
        if self.modulus < 1:
            raise InvalidModulusError(f"modulus must be >= 1, got {self.modulus}")
        object.__setattr__(self, "residue", self.residue % self.modulus)

    def contains(self, x: int) -> bool:
        return x % self.modulus == self.residue

    def sort_key(self) -> tuple[int, int]:
        return (self.modulus, self.residue)

    def __str__(self) -> str:
        return f"{self.residue} mod {self.modulus}"


def make_class(a: int, d: int) -> ResidueClass:
    """Build the residue class a mod d, reducing a into [0, d)."""
    return ResidueClass(a, d)


def intersect(c1: ResidueClass, c2: ResidueClass) -> ResidueClass | None:
    """Intersect two residue classes.

    By the Chinese Remainder Theorem the intersection is empty exactly when
    the residues disagree modulo gcd of the moduli, and otherwise is a single
    class modulo the lcm.  Returns None for the empty intersection.
    """
    d1, d2 = c1.modulus, c2.modulus
    g = gcd(d1, d2)
    if (c1.residue - c2.residue) % g != 0:
        return None
    m = d2 // g
    if m == 1:
        return ResidueClass(c1.residue, lcm(d1, d2))
    t = ((c2.residue - c1.residue) // g) * pow(d1 // g, -1, m) % m
    return ResidueClass(c1.residue + d1 * t, lcm(d1, d2))


# ---------------------------------------------------------------------------
# factorization utilities


@dataclass(frozen=True)
class Factorization:
    """A prime factorization as ordered (prime, exponent) pairs."""

    pairs: tuple[tuple[int, int], ...]

    @property
    def value(self) -> int:
        out = 1
        for p, e in self.pairs:
            out *= p**e
        return out

    @property
    def largest_prime(self) -> int:
        # convention: the largest prime factor of 1 is 1
        return self.pairs[-1][0] if self.pairs else 1

    @property
    def num_primes(self) -> int:
        return len(self.pairs)

    @property
    def num_divisors(self) -> int:
        out = 1
        for _, e in self.pairs:
            out *= e + 1
        return out

    def divisors(self) -> list[int]:
        divs = [1]
        for p, e in self.pairs:
            divs = [d * p**k for d in divs for k in range(e + 1)]
        return sorted(divs)


def factorize(m: int) -> Factorization:
    """Factor a positive integer by deterministic trial division."""
    if m < 1:
        raise DomainError(f"cannot factor non-positive integer {m}")
    pairs = []
    d = 2
    while d * d <= m:
        if m % d == 0:
            e = 0
            while m % d == 0:
                m //= d
                e += 1
            pairs.append((d, e))
        d += 1 if d == 2 else 2
    if m > 1:
        pairs.append((m, 1))
    return Factorization(tuple(pairs))


def largest_prime_factor(m: int) -> int:
    """Largest prime factor of m >= 1, with largest_prime_factor(1) == 1."""
    if m < 1:
        raise DomainError(f"largest prime factor undefined for {m}")
    best = 1
    d = 2
    while d * d <= m:
        while m % d == 0:
            best = d
            m //= d
        d += 1 if d == 2 else 2
    return m if m > 1 else best


# ---------------------------------------------------------------------------
# congruence systems


@dataclass(frozen=True)
class CongruenceSystem:
    """An ordered multiset of residue classes.

    Duplicate classes are preserved: multiplicity counts are taken over the
    multiset, and deduplication is a separate, explicit operation.
    """

    classes: tuple[ResidueClass, ...]

    def __post_init__(self):
        object.__setattr__(self, "classes", tuple(self.classes))

    @classmethod
    def from_pairs(cls, pairs) -> "CongruenceSystem":
        return cls(tuple(make_class(r, d) for r, d in pairs))

    def __len__(self) -> int:
        return len(self.classes)

    def __iter__(self):
        return iter(self.classes)

    @cached_property
    def lcm_modulus(self) -> int:
        out = 1
        for c in self.classes:
            out = lcm(out, c.modulus)
        return out

    @cached_property
    def factorization(self) -> Factorization:
        return factorize(self.lcm_modulus)

    @cached_property
    def modulus_counts(self) -> Counter:
        return Counter(c.modulus for c in self.classes)

    def sorted_by_modulus(self) -> "CongruenceSystem":
        return CongruenceSystem(tuple(sorted(self.classes, key=ResidueClass.sort_key)))

    def without(self, index: int) -> "CongruenceSystem":
        return CongruenceSystem(self.classes[:index] + self.classes[index + 1 :])


def multiplicity(sys: CongruenceSystem) -> int:
    """Largest number of classes sharing one modulus, duplicates included."""
    if not sys.classes:
        raise DomainError("multiplicity of the empty system is undefined")
    return max(sys.modulus_counts.values())


def deduplicated(sys: CongruenceSystem) -> CongruenceSystem:
    """Remove repeated (residue, modulus) pairs, keeping first occurrences."""
    seen = set()
    kept = []
    for c in sys.classes:
        key = (c.residue, c.modulus)
        if key not in seen:
            seen.add(key)
            kept.append(c)
    return CongruenceSystem(tuple(kept))


@dataclass(frozen=True)
class CoverageReport:
    """Outcome of the exhaustive coverage check over Z/QZ."""

    covers: bool
    witness: int | None
    uncovered_count: int


def _require_space(q: int, limits: Limits, what: str) -> None:
    if q > limits.residue_space:
        raise ResourceLimitError(
            f"{what} needs a residue space of size {q}, over the limit"
            f" {limits.residue_space}",
            required=q,
            limit=limits.residue_space,
        )


def covers_oracle(sys: CongruenceSystem, *, limits: Limits = DEFAULT_LIMITS) -> CoverageReport:
    """Decide coverage by checking every residue modulo Q.

    The witness, when the system does not cover, is the smallest nonnegative
    uncovered residue.  The empty system does not cover, with witness 0.
    """
    q = sys.lcm_modulus
    _require_space(q, limits, "coverage oracle")
    hit = bytearray(q)
    for c in sys.classes:
        span = range(c.residue, q, c.modulus)
        hit[c.residue :: c.modulus] = b"\x01" * len(span)
    uncovered = q - sum(hit)
    if uncovered == 0:
        return CoverageReport(True, None, 0)
    return CoverageReport(False, hit.index(0), uncovered)


def covers_interval(sys: CongruenceSystem, *, limits: Limits = DEFAULT_LIMITS) -> bool:
    """Decide whether the system covers {1, ..., 2^n}, n the class count.

    For n arithmetic progressions this interval check is equivalent to
    coverage of all of Z.
    """
    n = len(sys.classes)
    size = 2**n
    if size > limits.interval:
        raise ResourceLimitError(
            f"interval check needs {size} integers, over the limit {limits.interval}",
            required=size,
            limit=limits.interval,
        )
    hit = bytearray(size)  # index i stands for the integer i + 1
    for c in sys.classes:
        first = c.residue if c.residue >= 1 else c.modulus
        start = first - 1
        if start < size:
            span = range(start, size, c.modulus)
            hit[start :: c.modulus] = b"\x01" * len(span)
    return sum(hit) == size


def is_minimal(
    sys: CongruenceSystem, *, limits: Limits = DEFAULT_LIMITS
) -> tuple[bool, list[int]]:
    """Check single-removal minimality of a covering system.

    Returns (minimal, redundant) where redundant lists the indices of classes
    whose individual removal keeps the system covering.  A class is redundant
    exactly when every residue it covers is covered at least twice.
    """
    q = sys.lcm_modulus
    _require_space(q, limits, "minimality check")
    counts = [0] * q
    for c in sys.classes:
        for x in range(c.residue, q, c.modulus):
            counts[x] += 1
    if not sys.classes or min(counts) == 0:
        raise DomainError("minimality is only defined for covering systems")
    redundant = []
    for i, c in enumerate(sys.classes):
        if all(counts[x] >= 2 for x in range(c.residue, q, c.modulus)):
            redundant.append(i)
    return (not redundant, redundant)


def density_uncovered(sys: CongruenceSystem, *, limits: Limits = DEFAULT_LIMITS) -> Fraction:
    """Exact density of the uncovered residues, as uncovered_count / Q."""
    report = covers_oracle(sys, limits=limits)
    return Fraction(report.uncovered_count, sys.lcm_modulus)


# ---------------------------------------------------------------------------
# text and JSON formats

_LINE_RE = re.compile(r"^(-?\d+)\s+mod\s+(-?\d+)$")


def parse_system(text: str) -> CongruenceSystem:
    """Parse a system from text.

    Two formats are accepted: one class per line as "R mod D", with blank
    lines and lines starting with "#" ignored, or a JSON object
    {"classes": [{"r": R, "d": D}, ...]}.  Residues may be unreduced or
    negative; moduli must be positive.
    """
    stripped = text.lstrip()
    if stripped.startswith("{"):
        return _parse_json_system(text)
    classes = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        m = _LINE_RE.match(line)
        if not m:
            raise ParseError(f"line {lineno}: expected 'R mod D', got {line!r}", line=lineno)
        r, d = int(m.group(1)), int(m.group(2))
        if d < 1:
            raise ParseError(f"line {lineno}: invalid modulus {d}", line=lineno)
        classes.append(make_class(r, d))
    return CongruenceSystem(tuple(classes))


def _parse_json_system(text: str) -> CongruenceSystem:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON system: {exc}") from exc
    if not isinstance(data, dict) or "classes" not in data:
        raise ParseError('JSON system must be an object with a "classes" array')
    classes = []
    for i, entry in enumerate(data["classes"]):
        if not isinstance(entry, dict) or "r" not in entry or "d" not in entry:
            raise ParseError(f'class {i}: expected an object with keys "r" and "d"')
        r, d = entry["r"], entry["d"]
        if not isinstance(r, int) or not isinstance(d, int):
            raise ParseError(f"class {i}: residue and modulus must be integers")
        if d < 1:
            raise ParseError(f"class {i}: invalid modulus {d}")
        classes.append(make_class(r, d))
    return CongruenceSystem(tuple(classes))


def emit_system(sys: CongruenceSystem) -> str:
    """Render a system in the line format, one "R mod D" per line."""
    return "".join(f"{c.residue} mod {c.modulus}\n" for c in sys.classes)


def emit_system_json(sys: CongruenceSystem) -> str:
    """Render a system in the JSON format."""
    return json.dumps({"classes": [{"r": c.residue, "d": c.modulus} for c in sys.classes]})
