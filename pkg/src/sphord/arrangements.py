"""Arrangements of group elements: permutation parity, chirality classes, translations."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import comb
from typing import Iterator, Sequence

from .groups import FiniteGroup

EVEN = 0
ODD = 1

PLUS = 0   # the ascending arrangement's even-permutation class
MINUS = 1  # the other class


class RepeatedCoordinateError(ValueError):
    """Raised when an operation requiring distinct coordinates sees a repeat."""


def has_repeat(coords: Sequence[int]) -> bool:
    return len(set(coords)) < len(coords)


def parity(coords: Sequence[int]) -> int:
    """Parity (0 even, 1 odd) of the permutation sorting ``coords`` ascending.

    Inversion count is O(n^2); arities here are small by construction.
    """
    inv = 0
    n = len(coords)
    for i in range(n):
        ci = coords[i]
        for j in range(i + 1, n):
            cj = coords[j]
            if ci > cj:
                inv += 1
            elif ci == cj:
                raise RepeatedCoordinateError(f"repeated coordinate {ci} in {tuple(coords)}")
    return inv & 1


@dataclass(frozen=True)
class Chirality:
    """One of the two even-permutation classes of arrangements of a fixed n-set."""

    subset: tuple[int, ...]  # strictly ascending
    bit: int                 # PLUS or MINUS

    def __post_init__(self) -> None:
        if any(a >= b for a, b in zip(self.subset, self.subset[1:])):
            raise ValueError(f"subset {self.subset} is not strictly ascending")
        if self.bit not in (PLUS, MINUS):
            raise ValueError(f"bit must be 0 or 1, got {self.bit}")


def chirality_class(coords: Sequence[int]) -> Chirality:
    """Class of an arrangement: its sorted subset plus the parity bit."""
    return Chirality(subset=tuple(sorted(coords)), bit=parity(coords))


def translate_tuple(
    group: FiniteGroup, coords: Sequence[int], b: int, side: str
) -> tuple[int, ...]:
    """Coordinatewise product with b on the given side; cancellation keeps coords distinct."""
    if not 0 <= b < group.order:
        raise ValueError(f"element {b} out of range for {group.name}")
    table = group.table
    if side == "right":
        return tuple(table[x][b] for x in coords)
    if side == "left":
        return tuple(table[b][x] for x in coords)
    raise ValueError(f"side must be 'left' or 'right', got {side!r}")


def all_subsets(m: int, n: int) -> list[tuple[int, ...]]:
    """All n-subsets of 0..m-1 in colexicographic order."""
    return sorted(itertools.combinations(range(m), n), key=lambda s: s[::-1])


def colex_rank(subset: Sequence[int]) -> int:
    """Rank of an ascending subset in colex order over all same-size subsets."""
    return sum(comb(v, i + 1) for i, v in enumerate(subset))


def rank_in(subset: Sequence[int], value: int) -> int:
    """Position value would occupy in the ascending subset (assumes value present)."""
    return subset.index(value) if isinstance(subset, list) else list(subset).index(value)


def parity_within(subset: Sequence[int], arrangement: Sequence[int]) -> int:
    """Parity of an arrangement relative to the ascending order of its own subset."""
    pos = {v: i for i, v in enumerate(subset)}
    return parity([pos[v] for v in arrangement])


def even_arrangements(subset: Sequence[int]) -> Iterator[tuple[int, ...]]:
    """All arrangements of the subset in its even (PLUS) class."""
    base = tuple(subset)
    for perm in itertools.permutations(range(len(base))):
        if parity(perm) == EVEN:
            yield tuple(base[i] for i in perm)


def class_representative(subset: Sequence[int], bit: int) -> tuple[int, ...]:
    """Canonical arrangement of a class: ascending for PLUS, first-two-swapped for MINUS."""
    s = tuple(subset)
    if bit == PLUS:
        return s
    if len(s) < 2:
        raise ValueError("MINUS class requires arity >= 2")
    return (s[1], s[0]) + s[2:]
