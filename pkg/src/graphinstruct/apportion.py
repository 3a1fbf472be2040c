"""Largest-remainder apportionment of an integer total over weights."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence


def largest_remainder(weights: Sequence[float], total: int,
                      tie_keys: Sequence = None) -> list[int]:
    """Split ``total`` into integers proportional to ``weights``.

    Quotas are floored; leftover units go to the entries with the largest
    fractional parts. Remainder ties are broken by ascending ``tie_keys``
    (input order when omitted). The result always sums to ``total``.
    """
    if total < 0:
        raise ValueError("total must be non-negative")
    n = len(weights)
    if n == 0:
        raise ValueError("weights must be non-empty")
    if any(w < 0 for w in weights):
        raise ValueError("weights must be non-negative")
    if tie_keys is None:
        tie_keys = range(n)

    wsum = sum(Fraction(w) for w in weights)
    if wsum == 0:
        quotas = [Fraction(total, n)] * n
    else:
        quotas = [Fraction(w) * total / wsum for w in weights]

    counts = [int(q) for q in quotas]  # floor; quotas are non-negative
    leftover = total - sum(counts)
    order = sorted(range(n), key=lambda i: (-(quotas[i] - counts[i]), tie_keys[i]))
    for i in order[:leftover]:
        counts[i] += 1
    return counts
