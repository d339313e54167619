"""Brute-force ground truth: count symbols, pick the strict majority."""

from __future__ import annotations

from dataclasses import dataclass

from .alphabet import check_alphabet_size


@dataclass(frozen=True, slots=True)
class DensityVerdict:
    """Exact per-symbol counts plus the strict-majority value, if any."""

    majority: int | None
    counts: tuple[int, ...]

    @property
    def is_tie(self) -> bool:
        return self.majority is None


def majority(cells, alphabet_size: int) -> DensityVerdict:
    """Counts every value; a verdict only when one count strictly leads.

    ``cells`` must be a non-empty sequence of base values (plain ints).
    A tie is any configuration whose maximum count is shared.
    """
    check_alphabet_size(alphabet_size)
    counts = [0] * alphabet_size
    n = 0
    for v in cells:
        if not isinstance(v, int) or isinstance(v, bool) or not 0 <= v < alphabet_size:
            raise ValueError(f"expected a base value below {alphabet_size}, got {v!r}")
        counts[v] += 1
        n += 1
    if n == 0:
        raise ValueError("cannot take the majority of an empty configuration")
    top = max(counts)
    leaders = [v for v, c in enumerate(counts) if c == top]
    winner = leaders[0] if len(leaders) == 1 else None
    return DensityVerdict(winner, tuple(counts))
