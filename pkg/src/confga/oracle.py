"""Independent basis-blade multiplication oracle.

Multiplies two basis blades by concatenating their generator index lists,
bubble-sorting into ascending order while counting swaps, and contracting
adjacent equal generators with their metric sign.  Shares no code with the
table-driven product in :mod:`confga.algebra`; the test suite checks the two
against each other over every blade pair.
"""

from __future__ import annotations

from .algebra import Algebra


def _gen_list(bits: int) -> list[int]:
    out = []
    k = 0
    while bits:
        if bits & 1:
            out.append(k)
        bits >>= 1
        k += 1
    return out


def oracle_product(a_bits: int, b_bits: int, alg: Algebra) -> tuple[int, int]:
    """Product of two basis blades as (sign, result_bits); sign 0 never occurs
    for non-degenerate metrics."""
    if not (0 <= a_bits < alg.dim and 0 <= b_bits < alg.dim):
        raise ValueError("blade bits out of range for this signature")
    gens = _gen_list(a_bits) + _gen_list(b_bits)
    sign = 1

    # Bubble sort; every adjacent transposition of distinct generators
    # flips the sign.
    changed = True
    while changed:
        changed = False
        for i in range(len(gens) - 1):
            if gens[i] > gens[i + 1]:
                gens[i], gens[i + 1] = gens[i + 1], gens[i]
                sign = -sign
                changed = True

    # Contract adjacent equal generators with their metric square.
    out: list[int] = []
    i = 0
    while i < len(gens):
        if i + 1 < len(gens) and gens[i] == gens[i + 1]:
            sign *= 1 if alg.metric[gens[i]] > 0 else -1
            i += 2
        else:
            out.append(gens[i])
            i += 1

    bits = 0
    for g in out:
        bits |= 1 << g
    return sign, bits
