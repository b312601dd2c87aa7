"""Prefix-free binary codebooks built canonically from a length profile.

Feasibility is decided in exact integer arithmetic: lengths l_1..l_m are
realizable as a prefix-free binary code iff sum(2**-l_i) <= 1, checked as
sum(2**(L - l_i)) <= 2**L with L = max length, so no float rounding can
accept an infeasible profile.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Hashable, Iterable, Mapping

from .errors import KraftInfeasibleError
from .words import is_prefix_free


def kraft_sum(lengths: Iterable[int]) -> Fraction:
    """Exact value of sum(2**-l) over the given codeword lengths."""
    total = Fraction(0)
    for l in lengths:
        total += Fraction(1, 2 ** int(l))
    return total


def shannon_length(probability: Fraction) -> int:
    """Smallest integer l with 2**-l <= probability, i.e. ceil(-log2 p).

    Computed exactly from the rational probability; p must lie in (0, 1].
    """
    p = Fraction(probability)
    if not 0 < p <= 1:
        raise ValueError("probability must lie in (0, 1]")
    num, den = p.numerator, p.denominator
    length = 0
    scaled = num
    while scaled < den:
        scaled <<= 1
        length += 1
    return length


@dataclass(frozen=True)
class BinaryCodebook:
    """An injective, prefix-free map from source blocks to bit strings."""

    entries: dict

    def __post_init__(self):
        values = list(self.entries.values())
        if len(set(values)) != len(values):
            raise ValueError("codewords must be distinct")
        if any(not w or set(w) - {"0", "1"} for w in values):
            raise ValueError("codewords must be non-empty bit strings")
        if not is_prefix_free(values):
            raise ValueError("codewords must be prefix free")
        if kraft_sum(len(w) for w in values) > 1:
            raise KraftInfeasibleError("codeword lengths violate Kraft's inequality")

    def length_of(self, block: Hashable) -> int:
        return len(self.entries[block])

    def __len__(self) -> int:
        return len(self.entries)


def canonical_kraft_code(lengths: Mapping[Hashable, int]) -> BinaryCodebook:
    """Construct the canonical prefix-free code realizing a length profile.

    Blocks are sorted by (length, block identifier) and codewords assigned
    as consecutive binary fractions, so equal inputs always yield the same
    codebook.  Raises KraftInfeasibleError when sum(2**-l) > 1.
    """
    for block, l in lengths.items():
        if int(l) != l or l < 1:
            raise ValueError(f"length for block {block!r} must be a positive integer, got {l!r}")
    if kraft_sum(lengths.values()) > 1:
        raise KraftInfeasibleError("requested lengths violate Kraft's inequality")
    items = sorted(lengths.items(), key=lambda kv: (kv[1], kv[0]))
    entries = {}
    code = 0
    prev_len = items[0][1] if items else 0
    for block, length in items:
        code <<= length - prev_len
        prev_len = length
        entries[block] = format(code, f"0{length}b")
        code += 1
    return BinaryCodebook(entries)
