"""Finite groups as validated Cayley tables, elements indexed 0..m-1 with identity 0."""

from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

DEFAULT_MAX_ORDER = 16


class GroupSpecError(ValueError):
    """Raised for an unparsable or unsupported group-spec string."""


class CayleyTableError(ValueError):
    """Raised when a table fails one of the group axioms."""


@dataclass(frozen=True)
class FiniteGroup:
    """Immutable finite group; ``table[a][b]`` is the product a*b, identity is 0."""

    name: str
    order: int
    table: tuple[tuple[int, ...], ...]
    _inverse: tuple[int, ...] = field(repr=False, compare=False, default=())

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def inv(self, a: int) -> int:
        return self._inverse[a]

    @property
    def identity(self) -> int:
        return 0

    def elements(self) -> range:
        return range(self.order)

    def element_order(self, g: int) -> int:
        """Least k >= 1 with g^k = identity."""
        if not 0 <= g < self.order:
            raise ValueError(f"element {g} out of range for group of order {self.order}")
        k, x = 1, g
        while x != 0:
            x = self.table[x][g]
            k += 1
        return k

    def is_abelian(self) -> bool:
        return all(
            self.table[a][b] == self.table[b][a]
            for a in range(self.order)
            for b in range(a + 1, self.order)
        )

    def element_orders(self) -> list[int]:
        return [self.element_order(g) for g in self.elements()]

    def __str__(self) -> str:
        return f"{self.name} (order {self.order})"


def _validate_table(rows: Sequence[Sequence[int]]) -> tuple[tuple[int, ...], ...]:
    m = len(rows)
    if m == 0:
        raise CayleyTableError("empty table")
    table = []
    for i, row in enumerate(rows):
        if len(row) != m:
            raise CayleyTableError(f"row {i} has length {len(row)}, expected {m}")
        row = tuple(int(x) for x in row)
        for x in row:
            if not 0 <= x < m:
                raise CayleyTableError(f"entry {x} in row {i} out of range 0..{m - 1}")
        table.append(row)
    return tuple(table)


def _find_identity(table: tuple[tuple[int, ...], ...]) -> int:
    m = len(table)
    for e in range(m):
        if all(table[e][b] == b and table[a][e] == a for a in range(m) for b in range(m)):
            return e
    raise CayleyTableError("no two-sided identity element")


def _reindex_identity_first(table: tuple[tuple[int, ...], ...], e: int) -> tuple[tuple[int, ...], ...]:
    # swap labels 0 <-> e so the identity sits at index 0
    m = len(table)
    perm = list(range(m))
    perm[0], perm[e] = e, 0
    inv = perm  # the swap is an involution
    return tuple(
        tuple(inv[table[perm[a]][perm[b]]] for b in range(m)) for a in range(m)
    )


def from_cayley_table(rows: Sequence[Sequence[int]], name: str = "custom") -> FiniteGroup:
    """Build a validated group from an m-by-m grid; rejects non-groups naming the failed axiom."""
    table = _validate_table(rows)
    m = len(table)

    for i, row in enumerate(table):
        if len(set(row)) != m:
            raise CayleyTableError(f"row {i} is not a permutation of 0..{m - 1}")
    for j in range(m):
        col = [table[i][j] for i in range(m)]
        if len(set(col)) != m:
            raise CayleyTableError(f"column {j} is not a permutation of 0..{m - 1}")

    e = _find_identity(table)
    if e != 0:
        table = _reindex_identity_first(table, e)

    for a in range(m):
        for b in range(m):
            ab = table[a][b]
            for c in range(m):
                if table[ab][c] != table[a][table[b][c]]:
                    raise CayleyTableError(
                        f"associativity fails at triple ({a}, {b}, {c})"
                    )

    inverse = [-1] * m
    for a in range(m):
        for b in range(m):
            if table[a][b] == 0 and table[b][a] == 0:
                inverse[a] = b
                break
        if inverse[a] < 0:
            raise CayleyTableError(f"element {a} has no two-sided inverse")

    return FiniteGroup(name=name, order=m, table=table, _inverse=tuple(inverse))


def cyclic_group(m: int) -> FiniteGroup:
    """Z_m with addition mod m."""
    if m < 1:
        raise GroupSpecError(f"cyclic group order must be >= 1, got {m}")
    rows = [[(a + b) % m for b in range(m)] for a in range(m)]
    return from_cayley_table(rows, name=f"Z{m}")


def dihedral_group(k: int) -> FiniteGroup:
    """D_k of order 2k; indices 0..k-1 rotations, k..2k-1 reflections."""
    if k < 1:
        raise GroupSpecError(f"dihedral parameter must be >= 1, got {k}")

    def mul(a: int, b: int) -> int:
        r1, s1 = a % k, a // k
        r2, s2 = b % k, b // k
        r = (r1 + r2) % k if s1 == 0 else (r1 - r2) % k
        return r + k * (s1 ^ s2)

    rows = [[mul(a, b) for b in range(2 * k)] for a in range(2 * k)]
    return from_cayley_table(rows, name=f"D{k}")


def symmetric_group(k: int) -> FiniteGroup:
    """S_k; elements are the permutations of 0..k-1 in lexicographic order."""
    if k < 1:
        raise GroupSpecError(f"symmetric group parameter must be >= 1, got {k}")
    perms = sorted(itertools.permutations(range(k)))
    index = {p: i for i, p in enumerate(perms)}
    rows = [
        [index[tuple(p[q[i]] for i in range(k))] for q in perms]
        for p in perms
    ]
    return from_cayley_table(rows, name=f"S{k}")


def quaternion_group() -> FiniteGroup:
    """Q8 with elements 1, -1, i, -i, j, -j, k, -k in that order."""
    # unit products carry a sign: i*j = k, j*i = -k, i*i = -1, ...
    unit_mul = {
        (0, 0): (1, 0), (0, 1): (1, 1), (0, 2): (1, 2), (0, 3): (1, 3),
        (1, 0): (1, 1), (1, 1): (-1, 0), (1, 2): (1, 3), (1, 3): (-1, 2),
        (2, 0): (1, 2), (2, 1): (-1, 3), (2, 2): (-1, 0), (2, 3): (1, 1),
        (3, 0): (1, 3), (3, 1): (1, 2), (3, 2): (-1, 1), (3, 3): (-1, 0),
    }

    def mul(a: int, b: int) -> int:
        ua, sa = a // 2, 1 - 2 * (a % 2)
        ub, sb = b // 2, 1 - 2 * (b % 2)
        s, u = unit_mul[(ua, ub)]
        s *= sa * sb
        return 2 * u + (0 if s > 0 else 1)

    rows = [[mul(a, b) for b in range(8)] for a in range(8)]
    return from_cayley_table(rows, name="Q8")


def direct_product(g1: FiniteGroup, g2: FiniteGroup, name: str | None = None) -> FiniteGroup:
    """Componentwise product; element (a, b) gets index a*|G2| + b."""
    m1, m2 = g1.order, g2.order

    def mul(a: int, b: int) -> int:
        a1, a2 = divmod(a, m2)
        b1, b2 = divmod(b, m2)
        return g1.mul(a1, b1) * m2 + g2.mul(a2, b2)

    rows = [[mul(a, b) for b in range(m1 * m2)] for a in range(m1 * m2)]
    return from_cayley_table(rows, name=name or f"{g1.name}x{g2.name}")


def load_cayley_file(path: str | Path) -> FiniteGroup:
    """Read the Cayley-table file format: order line, then m rows of m indices; '#' comments."""
    p = Path(path)
    if not p.exists():
        raise GroupSpecError(f"Cayley table file not found: {p}")
    lines = [
        ln.strip() for ln in p.read_text(encoding="utf-8").splitlines()
        if ln.strip() and not ln.strip().startswith("#")
    ]
    if not lines:
        raise CayleyTableError(f"{p}: no content")
    try:
        m = int(lines[0])
    except ValueError as exc:
        raise CayleyTableError(f"{p}: first line must be the order, got {lines[0]!r}") from exc
    if len(lines) != m + 1:
        raise CayleyTableError(f"{p}: expected {m} table rows, found {len(lines) - 1}")
    rows = []
    for ln in lines[1:]:
        try:
            rows.append([int(tok) for tok in ln.split()])
        except ValueError as exc:
            raise CayleyTableError(f"{p}: malformed row {ln!r}") from exc
    return from_cayley_table(rows, name=p.stem)


def save_cayley_file(group: FiniteGroup, path: str | Path) -> None:
    """Write a group in the same file format load_cayley_file reads."""
    p = Path(path)
    lines = [f"# {group.name}", str(group.order)]
    lines += [" ".join(str(x) for x in row) for row in group.table]
    p.write_text("\n".join(lines) + "\n", encoding="utf-8")


_ATOM_RE = re.compile(r"^(Z|D|S)(\d+)$|^Q8$")


def _make_atom(token: str, max_order: int) -> FiniteGroup:
    m = _ATOM_RE.match(token)
    if m is None:
        raise GroupSpecError(f"unrecognized group spec token {token!r}")
    if token == "Q8":
        return quaternion_group()
    family, num = m.group(1), int(m.group(2))
    if family == "Z":
        g = cyclic_group(num)
    elif family == "D":
        g = dihedral_group(num)
    else:
        if math.factorial(num) > max_order:
            raise GroupSpecError(
                f"S{num} has order {math.factorial(num)} > max_order {max_order}"
            )
        g = symmetric_group(num)
    return g


def make_group(spec: str, max_order: int = DEFAULT_MAX_ORDER) -> FiniteGroup:
    """Parse a group spec: Z<m>, D<k>, S<k>, Q8, products joined by 'x', or file:<path>."""
    spec = spec.strip()
    if not spec:
        raise GroupSpecError("empty group spec")
    if spec.startswith("file:"):
        g = load_cayley_file(spec[5:])
    else:
        factors = [_make_atom(tok, max_order) for tok in spec.split("x")]
        g = factors[0]
        for h in factors[1:]:
            g = direct_product(g, h)
        g = FiniteGroup(name=spec, order=g.order, table=g.table, _inverse=g._inverse)
    if g.order > max_order:
        raise GroupSpecError(
            f"group {spec!r} has order {g.order}, exceeding max_order {max_order}"
        )
    return g


# Standard catalog used by sweeps and the acceptance suite.  Kept at order <= 10
# so exhaustive verification stays within desk-scale budgets.
CATALOG: tuple[str, ...] = (
    "Z1", "Z2", "Z3", "Z4", "Z5", "Z6", "Z7", "Z8", "Z9", "Z10",
    "Z2xZ2", "Z2xZ4", "Z2xZ2xZ2", "Z3xZ3",
    "S3", "D4", "D5", "Q8",
)


def catalog_groups(max_order: int = DEFAULT_MAX_ORDER) -> list[FiniteGroup]:
    return [make_group(spec, max_order=max_order) for spec in CATALOG]
