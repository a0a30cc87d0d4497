"""Finite groups as explicit multiplication tables, with subsets as bitmasks.

A group of order n lives on element indices 0..n-1 with the identity pinned
at index 0.  Every constructor validates the full set of axioms (identity,
Latin square, associativity, two-sided inverses), so downstream code never
has to doubt a table.  Subsets of a group are immutable bitmasks wrapped in
:class:`GroupSubset`, the common currency of all set arithmetic here.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from typing import Callable, Iterable, Iterator, Optional, Sequence

import numpy as np

from .bitset import bit_indices, indices_tuple, permute_mask
from .errors import (
    GroupMismatchError,
    ParseError,
    PreconditionError,
    SizeCapError,
    ValidationError,
)

DEFAULT_ORDER_CAP = 2048
IDENTITY = 0


def _validate_table(table: Sequence[Sequence[int]]) -> None:
    """Check all group axioms, raising ValidationError naming the first failure."""
    n = len(table)
    for i, row in enumerate(table):
        if len(row) != n:
            raise ValidationError(f"row {i} has {len(row)} entries, expected {n}")
        for x in row:
            if not 0 <= x < n:
                raise ValidationError(f"row {i} entry {x} out of range [0,{n})")
    arr = np.asarray(table, dtype=np.int64)
    ident = np.arange(n)
    if not (np.array_equal(arr[0], ident) and np.array_equal(arr[:, 0], ident)):
        raise ValidationError("identity not at index 0")
    row_sorted = np.sort(arr, axis=1)
    if not np.all(row_sorted == ident):
        bad = int(np.nonzero(np.any(row_sorted != ident, axis=1))[0][0])
        raise ValidationError(f"row {bad} not a permutation")
    col_sorted = np.sort(arr, axis=0)
    if not np.all(col_sorted == ident[:, None]):
        bad = int(np.nonzero(np.any(col_sorted != ident[:, None], axis=0))[0][0])
        raise ValidationError(f"column {bad} not a permutation")
    # Associativity, chunked by the first operand to bound memory at O(n^2).
    for i in range(n):
        row = arr[i]
        lhs = arr[row]          # lhs[j, k] = table[table[i][j]][k]
        rhs = row[arr]          # rhs[j, k] = table[i][table[j][k]]
        if not np.array_equal(lhs, rhs):
            j, k = map(int, np.argwhere(lhs != rhs)[0])
            raise ValidationError(f"associativity fails at triple ({i},{j},{k})")
    inv = np.argmax(arr == IDENTITY, axis=1)
    if not np.all(arr[inv, ident] == IDENTITY):
        bad = int(np.nonzero(arr[inv, ident] != IDENTITY)[0][0])
        raise ValidationError(f"missing inverse for element {bad}")


class FiniteGroup:
    """A finite group given by its full multiplication table.

    ``table[i][j]`` is the index of the product of elements i and j; the
    identity is element 0.  Instances are immutable after construction and
    safe to share between threads or worker processes.
    """

    __slots__ = (
        "order",
        "table",
        "inverse",
        "labels",
        "name",
        "_columns",
        "_elem_orders",
        "_abelian",
        "_subgroups",
    )

    def __init__(
        self,
        table: Sequence[Sequence[int]],
        *,
        labels: Optional[Sequence[str]] = None,
        name: str = "group",
        validate: bool = True,
        cap: int = DEFAULT_ORDER_CAP,
    ) -> None:
        n = len(table)
        if n < 1:
            raise ValidationError("group table is empty")
        if n > cap:
            raise SizeCapError(f"group order {n} exceeds cap {cap}")
        self.order = n
        self.table = [list(map(int, row)) for row in table]
        if validate:
            _validate_table(self.table)
        self.inverse = [row.index(IDENTITY) for row in self.table]
        if labels is not None and len(labels) != n:
            raise ValidationError(f"{len(labels)} labels for {n} elements")
        self.labels = list(labels) if labels is not None else None
        self.name = name
        self._columns: Optional[list[list[int]]] = None
        self._elem_orders: Optional[list[int]] = None
        self._abelian: Optional[bool] = None
        self._subgroups: Optional[list["GroupSubset"]] = None

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def inv(self, a: int) -> int:
        return self.inverse[a]

    def label(self, a: int) -> str:
        if self.labels is None:
            return str(a)
        return self.labels[a]

    def column(self, g: int) -> list[int]:
        """The right-multiplication permutation x -> x*g."""
        if self._columns is None:
            self._columns = [list(col) for col in zip(*self.table)]
        return self._columns[g]

    def element_order(self, g: int) -> int:
        if self._elem_orders is None:
            self._elem_orders = [0] * self.order
        cached = self._elem_orders[g]
        if cached:
            return cached
        x, k = g, 1
        while x != IDENTITY:
            x = self.table[x][g]
            k += 1
        self._elem_orders[g] = k
        return k

    @property
    def is_abelian(self) -> bool:
        if self._abelian is None:
            t = self.table
            self._abelian = all(
                t[i][j] == t[j][i] for i in range(self.order) for j in range(i)
            )
        return self._abelian

    def __repr__(self) -> str:
        return f"FiniteGroup({self.name!r}, order={self.order})"


@dataclass(frozen=True)
class GroupSubset:
    """A subset of a group's elements, stored as a bitmask over indices."""

    group: FiniteGroup
    mask: int

    def __post_init__(self) -> None:
        if not 0 <= self.mask < (1 << self.group.order):
            raise ValidationError("subset bitmask out of range for group order")

    @classmethod
    def from_indices(cls, group: FiniteGroup, indices: Iterable[int]) -> "GroupSubset":
        m = 0
        for i in indices:
            if not 0 <= i < group.order:
                raise ValidationError(f"element index {i} out of range [0,{group.order})")
            m |= 1 << i
        return cls(group, m)

    @classmethod
    def from_literal(cls, group: FiniteGroup, text: str) -> "GroupSubset":
        """Parse the one-line subset literal: space-separated element indices."""
        try:
            indices = [int(tok) for tok in text.split()]
        except ValueError as exc:
            raise ParseError(f"bad subset literal {text!r}") from exc
        return cls.from_indices(group, indices)

    @classmethod
    def empty(cls, group: FiniteGroup) -> "GroupSubset":
        return cls(group, 0)

    @classmethod
    def full(cls, group: FiniteGroup) -> "GroupSubset":
        return cls(group, (1 << group.order) - 1)

    def indices(self) -> tuple[int, ...]:
        return indices_tuple(self.mask)

    def to_literal(self) -> str:
        return " ".join(str(i) for i in self.indices())

    def __len__(self) -> int:
        return self.mask.bit_count()

    def __bool__(self) -> bool:
        return self.mask != 0

    def __contains__(self, i: int) -> bool:
        return bool(self.mask >> i & 1)

    def __iter__(self) -> Iterator[int]:
        return bit_indices(self.mask)

    def _check(self, other: "GroupSubset") -> None:
        if self.group is not other.group:
            raise GroupMismatchError("subsets belong to different groups")

    def union(self, other: "GroupSubset") -> "GroupSubset":
        self._check(other)
        return GroupSubset(self.group, self.mask | other.mask)

    def intersection(self, other: "GroupSubset") -> "GroupSubset":
        self._check(other)
        return GroupSubset(self.group, self.mask & other.mask)

    def difference(self, other: "GroupSubset") -> "GroupSubset":
        self._check(other)
        return GroupSubset(self.group, self.mask & ~other.mask)

    def complement(self) -> "GroupSubset":
        return GroupSubset(self.group, ~self.mask & ((1 << self.group.order) - 1))

    def issubset(self, other: "GroupSubset") -> bool:
        self._check(other)
        return self.mask & ~other.mask == 0

    def inverse_set(self) -> "GroupSubset":
        """Elementwise inverses {x^-1 : x in X}."""
        inv = self.group.inverse
        return GroupSubset(self.group, permute_mask(self.mask, inv))

    def left_translate(self, g: int) -> "GroupSubset":
        """g*X."""
        return GroupSubset(self.group, permute_mask(self.mask, self.group.table[g]))

    def right_translate(self, g: int) -> "GroupSubset":
        """X*g."""
        return GroupSubset(self.group, permute_mask(self.mask, self.group.column(g)))

    def is_subgroup(self) -> bool:
        if not self.mask & 1:
            return False
        table = self.group.table
        members = self.indices()
        m = self.mask
        return all(m >> table[a][b] & 1 for a in members for b in members)

    def __repr__(self) -> str:
        return f"GroupSubset({self.group.name!r}, {{{self.to_literal()}}})"


# ---------------------------------------------------------------------------
# Construction


def _group_from_mul(
    n: int,
    mul: Callable[[int, int], int],
    *,
    labels: Optional[Sequence[str]] = None,
    name: str = "group",
    cap: int = DEFAULT_ORDER_CAP,
) -> FiniteGroup:
    if n > cap:
        raise SizeCapError(f"group order {n} exceeds cap {cap}")
    table = [[mul(i, j) for j in range(n)] for i in range(n)]
    return FiniteGroup(table, labels=labels, name=name, cap=cap)


def make_cyclic(n: int, *, cap: int = DEFAULT_ORDER_CAP) -> FiniteGroup:
    """The cyclic group of order n, written additively on 0..n-1."""
    if n < 1:
        raise ValidationError(f"cyclic order must be positive, got {n}")
    return _group_from_mul(n, lambda i, j: (i + j) % n, name=f"C{n}", cap=cap)


def make_dihedral(m: int, *, cap: int = DEFAULT_ORDER_CAP) -> FiniteGroup:
    """The dihedral group of order 2m: rotations r^j (j < m), reflections f r^j.

    Element j < m is r^j and element m + j is f r^j, with f r f = r^-1.
    """
    if m < 3:
        raise ValidationError(f"dihedral parameter must be >= 3, got {m}")

    def mul(i: int, j: int) -> int:
        j1, e1 = i % m, i // m
        j2, e2 = j % m, j // m
        jj = (j1 + j2) % m if e1 == 0 else (j1 - j2) % m
        return (e1 ^ e2) * m + jj

    labels = [f"r{j}" for j in range(m)] + [f"fr{j}" for j in range(m)]
    return _group_from_mul(2 * m, mul, labels=labels, name=f"D{m}", cap=cap)


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    for d in range(2, int(math.isqrt(n)) + 1):
        if n % d == 0:
            return False
    return True


def make_semidirect(p: int, q: int, *, cap: int = DEFAULT_ORDER_CAP) -> FiniteGroup:
    """The nonabelian group of order p*q built from pairs (x, h).

    Elements are pairs with x mod p and h in the order-q subgroup of the
    multiplicative group mod p; the product is (x,h)(y,k) = (x + h*y, h*k).
    Requires q an odd prime dividing p - 1.  Pair (x, h) gets index
    x*q + rank(h) with the h-values sorted ascending, so (0,1) is index 0.
    """
    if not _is_prime(p) or not _is_prime(q):
        raise ValidationError(f"({p},{q}): both parameters must be prime")
    if q == 2:
        raise ValidationError(f"({p},{q}): second parameter must be odd")
    if (p - 1) % q != 0:
        raise ValidationError(f"({p},{q}): {q} does not divide {p - 1}")
    if p * q > cap:
        raise SizeCapError(f"group order {p * q} exceeds cap {cap}")
    h0 = sorted(h for h in range(1, p) if pow(h, q, p) == 1)
    if len(h0) != q:
        raise ValidationError(f"({p},{q}): multiplicative subgroup has wrong size")
    rank = {h: r for r, h in enumerate(h0)}

    def mul(i: int, j: int) -> int:
        x, h = divmod(i, q)
        y, k = divmod(j, q)
        return ((x + h0[h] * y) % p) * q + rank[h0[h] * h0[k] % p]

    labels = [f"({x},{h})" for x in range(p) for h in h0]
    return _group_from_mul(p * q, mul, labels=labels, name=f"SD({p},{q})", cap=cap)


def direct_product(
    a: FiniteGroup, b: FiniteGroup, *, cap: int = DEFAULT_ORDER_CAP
) -> FiniteGroup:
    """Direct product with pair (i, j) at index i*|b| + j."""
    n = a.order * b.order
    if n > cap:
        raise SizeCapError(f"group order {n} exceeds cap {cap}")
    nb = b.order

    def mul(i: int, j: int) -> int:
        i1, i2 = divmod(i, nb)
        j1, j2 = divmod(j, nb)
        return a.table[i1][j1] * nb + b.table[i2][j2]

    labels = [f"({a.label(i)},{b.label(j)})" for i in range(a.order) for j in range(b.order)]
    return _group_from_mul(n, mul, labels=labels, name=f"{a.name}x{b.name}", cap=cap)


def load_group_table(text: str, *, cap: int = DEFAULT_ORDER_CAP) -> FiniteGroup:
    """Parse and validate the line-oriented group-table document.

    Line 1 is the order n, lines 2..n+1 hold the table rows, and optional
    trailing lines "# i name" attach element labels.
    """
    lines = [line.strip() for line in text.splitlines()]
    lines = [line for line in lines if line]
    if not lines:
        raise ParseError("empty group table document")
    try:
        n = int(lines[0])
    except ValueError as exc:
        raise ParseError(f"first line must be the order, got {lines[0]!r}") from exc
    if n < 1:
        raise ParseError(f"order must be positive, got {n}")
    if n > cap:
        raise SizeCapError(f"group order {n} exceeds cap {cap}")
    if len(lines) < n + 1:
        raise ParseError(f"expected {n} table rows, found {len(lines) - 1}")
    table = []
    for i in range(1, n + 1):
        if lines[i].startswith("#"):
            raise ParseError(f"label line before table complete at line {i + 1}")
        try:
            row = [int(tok) for tok in lines[i].split()]
        except ValueError as exc:
            raise ParseError(f"non-integer entry in table row {i - 1}") from exc
        if len(row) != n:
            raise ParseError(f"table row {i - 1} has {len(row)} entries, expected {n}")
        table.append(row)
    labels: Optional[list[str]] = None
    for line in lines[n + 1 :]:
        if not line.startswith("#"):
            raise ParseError(f"unexpected trailing line {line!r}")
        parts = line[1:].split(None, 1)
        if len(parts) != 2:
            raise ParseError(f"bad label line {line!r}")
        try:
            idx = int(parts[0])
        except ValueError as exc:
            raise ParseError(f"bad label index in {line!r}") from exc
        if not 0 <= idx < n:
            raise ParseError(f"label index {idx} out of range")
        if labels is None:
            labels = [str(i) for i in range(n)]
        labels[idx] = parts[1]
    return FiniteGroup(table, labels=labels, name="table-group", cap=cap)


# ---------------------------------------------------------------------------
# Subgroup machinery


def closure_mask(group: FiniteGroup, generators: Iterable[int]) -> int:
    """Bitmask of the subgroup generated by the given element indices."""
    gens = set(generators)
    gens.update(group.inverse[g] for g in list(gens))
    table = group.table
    members = 1 << IDENTITY
    queue = [IDENTITY]
    while queue:
        x = queue.pop()
        row = table[x]
        for g in gens:
            y = row[g]
            bit = 1 << y
            if not members & bit:
                members |= bit
                queue.append(y)
    return members


def generated_subgroup(group: FiniteGroup, subset: GroupSubset) -> GroupSubset:
    """The subgroup generated by a nonempty subset."""
    if subset.group is not group:
        raise GroupMismatchError("subset belongs to a different group")
    if not subset:
        raise PreconditionError("cannot generate a subgroup from the empty set")
    return GroupSubset(group, closure_mask(group, subset.indices()))


def _subgroup_sort_key(mask: int) -> tuple[int, tuple[int, ...]]:
    return (mask.bit_count(), indices_tuple(mask))


def enumerate_subgroups(group: FiniteGroup) -> list[GroupSubset]:
    """All subgroups, ordered by (size, lexicographic membership).

    Works by closing single-generator extensions of already-found subgroups,
    starting at the trivial subgroup.  A Lagrange argument skips closures
    whose result is forced to be the whole group: the extension's order is a
    multiple of lcm(|H|, ord(g)) dividing |G|.
    """
    if group._subgroups is not None:
        return list(group._subgroups)
    n = group.order
    divisors = [d for d in range(1, n + 1) if n % d == 0]
    full = (1 << n) - 1
    trivial = 1 << IDENTITY
    found: dict[int, tuple[int, ...]] = {trivial: ()}
    work: deque[int] = deque([trivial])
    while work:
        h = work.popleft()
        gens = found[h]
        hsize = h.bit_count()
        for g in range(1, n):
            if h >> g & 1:
                continue
            step = math.lcm(hsize, group.element_order(g))
            candidates = [d for d in divisors if d > hsize and d % step == 0]
            if candidates == [n]:
                m = full
            else:
                m = closure_mask(group, gens + (g,))
            if m not in found:
                found[m] = gens + (g,)
                work.append(m)
    masks = sorted(found, key=_subgroup_sort_key)
    result = [GroupSubset(group, m) for m in masks]
    group._subgroups = result
    return list(result)


def _require_subgroup(subset: GroupSubset) -> None:
    if not subset.is_subgroup():
        raise PreconditionError(f"{{{subset.to_literal()}}} is not a subgroup")


def right_coset_mask(group: FiniteGroup, hmask: int, x: int) -> int:
    """Bitmask of the right coset H*x."""
    col = group.column(x)
    return permute_mask(hmask, col)


def double_coset_mask(group: FiniteGroup, hmask: int, a: int) -> int:
    """Bitmask of H*a*H."""
    ha = right_coset_mask(group, hmask, a)
    out = 0
    for x in bit_indices(ha):
        out |= permute_mask(hmask, group.table[x])
    return out


def double_coset_size(group: FiniteGroup, subgroup: GroupSubset, a: int) -> int:
    """|H a H|, computed by direct expansion."""
    if subgroup.group is not group:
        raise GroupMismatchError("subgroup belongs to a different group")
    _require_subgroup(subgroup)
    return double_coset_mask(group, subgroup.mask, a).bit_count()


def right_coset_decomposition(
    group: FiniteGroup, subset: GroupSubset, subgroup: GroupSubset
) -> list[GroupSubset]:
    """Partition X into its nonempty slices X ∩ Hx, ordered by smallest element."""
    if subset.group is not group or subgroup.group is not group:
        raise GroupMismatchError("operands belong to different groups")
    _require_subgroup(subgroup)
    parts = []
    remaining = subset.mask
    while remaining:
        x = (remaining & -remaining).bit_length() - 1
        coset = right_coset_mask(group, subgroup.mask, x)
        parts.append(GroupSubset(group, subset.mask & coset))
        remaining &= ~coset
    return parts


def restrict_to_subgroup(
    group: FiniteGroup, subgroup: GroupSubset
) -> tuple[FiniteGroup, list[int]]:
    """A standalone group on the subgroup's elements, plus the index map.

    Entry i of the returned list is the ambient index of the new element i;
    the subgroup's smallest element (the identity) maps to index 0.
    """
    _require_subgroup(subgroup)
    elems = list(subgroup.indices())
    pos = {e: i for i, e in enumerate(elems)}
    table = [[pos[group.table[a][b]] for b in elems] for a in elems]
    labels = [group.label(e) for e in elems] if group.labels else None
    sub = FiniteGroup(table, labels=labels, name=f"{group.name}|sub{len(elems)}")
    return sub, elems
