"""Explicit covering constructions.

Two builders live here.  The first produces, for each j >= 5, a minimal
covering system whose j distinct moduli are powers of two up to 2^(j-3)
together with three moduli of the form 3 * 2^k.  The second inflates any
minimal covering system into a covering multiset whose repeated-modulus
count is exactly a chosen power of two, by replacing a tail of the system
with blocks of shifted copies.
"""

from __future__ import annotations

from .core import (
    DEFAULT_LIMITS,
    CongruenceSystem,
    DomainError,
    InternalConsistencyError,
    Limits,
    ResidueClass,
    intersect,
    is_minimal,
    make_class,
)


def minimal_family_moduli(j: int) -> list[int]:
    """Sorted moduli of the j-modulus minimal covering family."""
    if j < 5:
        raise DomainError(f"the minimal covering family needs j >= 5, got {j}")
    return sorted([2**i for i in range(1, j - 2)] + [3 * 2 ** (j - 5 + k) for k in range(3)])


def construct_minimal_family(j: int) -> CongruenceSystem:
    """Build a minimal covering system with exactly j distinct moduli.

    The binary ladder 2^(i-1) mod 2^i for i = 1..j-3 covers everything except
    the class 0 mod 2^(j-3).  That leftover class is split by residue mod 3
    into three pieces, and each piece is a single residue class modulo
    3 * 2^(j-5+k) by the Chinese Remainder Theorem.  All j moduli are
    distinct, so the multiset multiplicity is 1.
    """
    if j < 5:
        raise DomainError(f"the minimal covering family needs j >= 5, got {j}")
    classes = [make_class(2 ** (i - 1), 2**i) for i in range(1, j - 2)]
    for k in range(3):
        piece = intersect(make_class(k, 3), make_class(0, 2 ** (j - 5 + k)))
        if piece is None:
            raise InternalConsistencyError("family pieces must be nonempty")
        classes.append(piece)
    return CongruenceSystem(tuple(classes))


def shift_expand(
    sys: CongruenceSystem, ell: int, *, limits: Limits = DEFAULT_LIMITS
) -> CongruenceSystem:
    """Expand a minimal covering system into a high-multiplicity covering.

    The source classes are taken sorted by (modulus, residue).  With n
    classes and 1 <= ell <= n, the first ell - 1 sorted classes are dropped
    and every remaining class r mod d is replaced by the block of 2^(ell-1)
    shifted copies r - h mod d for h = 0..2^(ell-1)-1.  Because the source is
    a minimal covering, each dropped class is hit by the shifts of the kept
    ones, so the result covers Z; its multiset multiplicity is 2^(ell-1).

    Output classes are ordered by kept-class position, then by shift.  Blocks
    from distinct source classes may overlap as sets; duplicates are kept, and
    collapsing them is left to an explicit deduplication.

    When the source's residue space is within limits, the minimality
    precondition is checked and its failure raises DomainError; for larger
    systems the precondition is trusted as asserted by the caller.
    """
    n = len(sys.classes)
    if not 1 <= ell <= n:
        raise DomainError(f"shift level must satisfy 1 <= ell <= {n}, got {ell}")
    if sys.lcm_modulus <= limits.residue_space:
        minimal, _ = is_minimal(sys, limits=limits)
        if not minimal:
            raise DomainError("shift expansion needs a minimal covering system")
    source = sys.sorted_by_modulus()
    width = 2 ** (ell - 1)
    out: list[ResidueClass] = []
    for c in source.classes[ell - 1 :]:
        out.extend(make_class(c.residue - h, c.modulus) for h in range(width))
    return CongruenceSystem(tuple(out))
