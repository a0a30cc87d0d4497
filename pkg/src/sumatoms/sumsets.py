"""Product sets, boundaries, isoperimetric numbers, fragments and atoms.

For a generating set S containing the identity, the boundary of X is
XS \\ X and the remainder is everything outside X and its boundary.  The
k-th isoperimetric number is the minimum boundary size over sets X with
|X| >= k and remainder at least k; minimizers are k-fragments, and minimum
cardinality minimizers are k-atoms.  Two computations of these live here:
a pruned search (:func:`find_atoms`) and a plain exhaustive oracle
(:func:`oracle_atoms`) that must always agree.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass
from itertools import combinations
from typing import Optional

from .bitset import bit_indices, indices_tuple, mask_from_indices, permute_mask
from .errors import (
    GroupMismatchError,
    NotGeneratingError,
    NotSeparableError,
    OracleCapError,
    PreconditionError,
)
from .groups import IDENTITY, FiniteGroup, GroupSubset, closure_mask

DEFAULT_ATOM_CAP = 256
FRAGMENT_COUNT_EXACT_CAP = 20
DEFAULT_ORACLE_ORDER_CAP = 20


# ---------------------------------------------------------------------------
# Reports


@dataclass(frozen=True)
class FragmentReport:
    """Result of an atom computation for one (group, set, k) triple."""

    k: int
    separable: bool
    kappa: Optional[int]
    alpha: Optional[int]
    atoms: tuple[GroupSubset, ...]
    fragment_count: int
    fragment_count_exact: bool
    oracle_used: bool
    atoms_truncated: bool = False

    def same_result(self, other: "FragmentReport") -> bool:
        """Semantic equality, ignoring which engine produced the report."""
        return (
            self.k == other.k
            and self.separable == other.separable
            and self.kappa == other.kappa
            and self.alpha == other.alpha
            and tuple(a.mask for a in self.atoms) == tuple(a.mask for a in other.atoms)
            and self.fragment_count == other.fragment_count
        )


@dataclass(frozen=True)
class FragmentDiagram:
    """Cell counts of the common refinement of two fragment partitions.

    Each of F1, F2 splits the group into (F, boundary, remainder); the nine
    intersection counts always sum to the group order.
    """

    beta_12: int
    beta_21: int
    beta_p12: int
    beta_p21: int
    gamma: int
    f1_f2: int
    f1_f2star: int
    f1star_f2: int
    f1star_f2star: int
    group_order: int

    @property
    def cell_total(self) -> int:
        return (
            self.f1_f2
            + self.beta_12
            + self.f1_f2star
            + self.beta_21
            + self.gamma
            + self.beta_p21
            + self.f1star_f2
            + self.beta_p12
            + self.f1star_f2star
        )


@dataclass(frozen=True)
class NormalizeReport:
    contains_identity: bool
    generates: bool
    translator: int


@dataclass(frozen=True)
class IntersectionVerdict:
    """Outcome of the pairwise atom-intersection check."""

    k: int
    applicable: bool
    holds: Optional[bool]
    kappa: int
    alpha: int
    atom_count: int
    counterexample: Optional[tuple[GroupSubset, GroupSubset]]


# ---------------------------------------------------------------------------
# Elementary set arithmetic


def product_mask(group: FiniteGroup, xmask: int, ymask: int) -> int:
    """Bitmask of {x*y : x in X, y in Y}."""
    table = group.table
    out = 0
    for x in bit_indices(xmask):
        out |= permute_mask(ymask, table[x])
    return out


def _check_pair(a: GroupSubset, b: GroupSubset) -> FiniteGroup:
    if a.group is not b.group:
        raise GroupMismatchError("operands belong to different groups")
    return a.group


def product_set(x: GroupSubset, y: GroupSubset) -> GroupSubset:
    group = _check_pair(x, y)
    return GroupSubset(group, product_mask(group, x.mask, y.mask))


def _require_identity(smask: int) -> None:
    if not smask & (1 << IDENTITY):
        raise PreconditionError(
            "set must contain the identity; apply normalize() first"
        )


def boundary(s: GroupSubset, x: GroupSubset) -> GroupSubset:
    """The boundary XS \\ X of X under right multiplication by S."""
    group = _check_pair(s, x)
    _require_identity(s.mask)
    xs = product_mask(group, x.mask, s.mask)
    return GroupSubset(group, xs & ~x.mask)

def remainder(s: GroupSubset, x: GroupSubset) -> GroupSubset:
    """Everything outside X and its boundary (the complement of XS when 1 is in S)."""
    group = _check_pair(s, x)
    xs = product_mask(group, x.mask, s.mask)
    full = (1 << group.order) - 1
    return GroupSubset(group, full & ~(x.mask | xs))


class TranslateTables:
    """Lazy per-element translate masks for one (group, set) pair.

    ``xs(x)`` is the mask of x*S and ``neighbors(x)`` the mask of x*(S*S^-1),
    the adjacency used by the connected fragment search: two elements whose
    product sets overlap are neighbors.
    """

    __slots__ = ("group", "smask", "_xs", "_nbr", "_sinv_mask")

    def __init__(self, group: FiniteGroup, smask: int) -> None:
        self.group = group
        self.smask = smask
        self._xs: Optional[list[int]] = None
        self._nbr: Optional[list[int]] = None
        self._sinv_mask: Optional[int] = None

    @property
    def sinv_mask(self) -> int:
        if self._sinv_mask is None:
            self._sinv_mask = permute_mask(self.smask, self.group.inverse)
        return self._sinv_mask

    def xs_masks(self) -> list[int]:
        if self._xs is None:
            table = self.group.table
            smask = self.smask
            self._xs = [permute_mask(smask, table[x]) for x in range(self.group.order)]
        return self._xs

    def neighbor_masks(self) -> list[int]:
        if self._nbr is None:
            shared = product_mask(self.group, self.smask, self.sinv_mask)
            table = self.group.table
            self._nbr = [
                permute_mask(shared, table[x]) & ~(1 << x)
                for x in range(self.group.order)
            ]
        return self._nbr


# ---------------------------------------------------------------------------
# Separability


def _separability_witness(group: FiniteGroup, smask: int, k: int) -> Optional[int]:
    """A mask X containing the identity with |X| = k and |X*| >= k, or None.

    Product masks grow with X, so size-k candidates decide separability, and
    every candidate class has a representative containing the identity.
    """
    n = group.order
    if k < 1:
        raise ValueError(f"k must be positive, got {k}")
    if 2 * k > n:
        return None
    full = (1 << n) - 1
    if k == 1:
        x = 1 << IDENTITY
        xs = product_mask(group, x, smask)
        return x if (full & ~(x | xs)).bit_count() >= 1 else None
    tables = TranslateTables(group, smask)
    xs = tables.xs_masks()
    base = 1 << IDENTITY
    base_xs = xs[IDENTITY]
    if k == 2:
        for g in range(1, n):
            x = base | (1 << g)
            u = base_xs | xs[g]
            if (full & ~(x | u)).bit_count() >= 2:
                return x
        return None
    # Greedy first: repeatedly add the element with the least product growth.
    x, u = base, base_xs
    for _ in range(k - 1):
        best_g, best_count, best_u = -1, n + 1, 0
        for g in range(1, n):
            if x >> g & 1:
                continue
            cand = u | xs[g]
            if cand.bit_count() < best_count:
                best_g, best_count, best_u = g, cand.bit_count(), cand
        x |= 1 << best_g
        u = best_u
    if (full & ~(x | u)).bit_count() >= k:
        return x
    for combo in combinations(range(1, n), k - 1):
        x = base | mask_from_indices(combo)
        u = base_xs
        for g in combo:
            u |= xs[g]
        if (full & ~(x | u)).bit_count() >= k:
            return x
    return None


def is_k_separable(s: GroupSubset, k: int) -> bool:
    """Whether some X has |X| >= k and remainder of size >= k."""
    return _separability_witness(s.group, s.mask, k) is not None


def _require_generating(group: FiniteGroup, smask: int) -> None:
    full = (1 << group.order) - 1
    if closure_mask(group, indices_tuple(smask)) != full:
        raise NotGeneratingError("set does not generate the group")


# ---------------------------------------------------------------------------
# Fragment search
#
# All searches normalize 1 into X (boundaries are invariant under left
# translation).  For k <= 2 they may further restrict to connected X in the
# shared-growth adjacency: a disconnected admissible X splits into parts with
# disjoint product masks, and either some part beats X (contradicting
# minimality) or all parts are singletons, in which case the pair {1, s} for
# any s in S is admissible with a strictly smaller boundary.


def _scan_fragments(
    group: FiniteGroup,
    smask: int,
    k: int,
    atom_cap: int,
    *,
    connected: bool,
) -> tuple[Optional[int], dict[int, int], dict[int, list[int]], dict[int, int]]:
    """Enumerate admissible sets containing the identity.

    Returns (kappa, best boundary per size, capped achiever masks per size,
    achiever counts per size).  With ``connected`` the scan visits only
    connected candidates, which is complete for k <= 2.
    """
    n = group.order
    limit = n - k
    tables = TranslateTables(group, smask)
    xs = tables.xs_masks()
    if connected:
        nbr = tables.neighbor_masks()
    else:
        full = (1 << n) - 1
        nbr = [full] * n
    best_by_size: dict[int, int] = {}
    achievers: dict[int, list[int]] = {}
    counts: dict[int, int] = {}
    kappa = [n + 1]

    def record(x: int, size: int, b: int) -> None:
        if b < kappa[0]:
            kappa[0] = b
        cur = best_by_size.get(size)
        if cur is None or b < cur:
            best_by_size[size] = b
            achievers[size] = [x]
            counts[size] = 1
        elif b == cur:
            counts[size] += 1
            bucket = achievers[size]
            if len(bucket) < atom_cap:
                bucket.append(x)

    sys.setrecursionlimit(max(sys.getrecursionlimit(), 4 * n + 100))

    def rec(x: int, u: int, frontier: int, banned: int) -> None:
        cands = frontier & ~banned & ~x
        ban = banned
        while cands:
            low = cands & -cands
            cands ^= low
            c = low.bit_length() - 1
            nu = u | xs[c]
            if nu.bit_count() <= limit:
                nx = x | low
                size = nx.bit_count()
                if size >= k:
                    record(nx, size, nu.bit_count() - size)
                rec(nx, nu, frontier | nbr[c], ban)
            ban |= low
        return

    seed = 1 << IDENTITY
    seed_u = xs[IDENTITY]
    if seed_u.bit_count() <= limit:
        if k <= 1:
            record(seed, 1, seed_u.bit_count() - 1)
        rec(seed, seed_u, nbr[IDENTITY], 0)
    if kappa[0] > n:
        return None, best_by_size, achievers, counts
    return kappa[0], best_by_size, achievers, counts


def boundary_witness(
    group: FiniteGroup, smask: int, k: int, target: int
) -> Optional[int]:
    """A mask X (1 in X, |X| >= k, |X*| >= k) with boundary <= target, or None.

    Complete decision via the same connected scan as the atom search (general
    scan for k >= 3), stopping at the first witness.
    """
    n = group.order
    if target < 0 or 2 * k > n:
        return None
    limit = n - k
    tables = TranslateTables(group, smask)
    xs = tables.xs_masks()
    if k <= 2:
        nbr = tables.neighbor_masks()
    else:
        full = (1 << n) - 1
        nbr = [full] * n
    sys.setrecursionlimit(max(sys.getrecursionlimit(), 4 * n + 100))

    def rec(x: int, u: int, frontier: int, banned: int) -> Optional[int]:
        cands = frontier & ~banned & ~x
        ban = banned
        while cands:
            low = cands & -cands
            cands ^= low
            c = low.bit_length() - 1
            nu = u | xs[c]
            if nu.bit_count() <= limit:
                nx = x | low
                size = nx.bit_count()
                if size >= k and nu.bit_count() - size <= target:
                    return nx
                hit = rec(nx, nu, frontier | nbr[c], ban)
                if hit is not None:
                    return hit
            ban |= low
        return None

    seed = 1 << IDENTITY
    seed_u = xs[IDENTITY]
    if seed_u.bit_count() > limit:
        return None
    if k <= 1 and seed_u.bit_count() - 1 <= target:
        return seed
    return rec(seed, seed_u, nbr[IDENTITY], 0)


def _atoms_from_scan(
    group: FiniteGroup,
    kappa: int,
    best_by_size: dict[int, int],
    achievers: dict[int, list[int]],
    counts: dict[int, int],
    atom_cap: int,
) -> tuple[int, list[int], int, bool]:
    alpha = min(size for size, b in best_by_size.items() if b == kappa)
    atom_masks = sorted(achievers[alpha], key=indices_tuple)
    truncated = counts[alpha] > len(atom_masks)
    frag_count = sum(
        counts[size] for size, b in best_by_size.items() if b == kappa
    )
    return alpha, atom_masks[:atom_cap], frag_count, truncated


def _checked_input(s: GroupSubset, k: int) -> None:
    if k < 1:
        raise ValueError(f"k must be positive, got {k}")
    _require_identity(s.mask)
    _require_generating(s.group, s.mask)


def find_atoms(
    s: GroupSubset, k: int, *, atom_cap: int = DEFAULT_ATOM_CAP
) -> FragmentReport:
    """Exact isoperimetric number, atom size and all atoms containing 1.

    Atoms not containing the identity are left translates of the listed ones.
    Requires S to contain the identity, generate the group and be k-separable.
    """
    _checked_input(s, k)
    group = s.group
    kappa, by_size, achievers, counts = _scan_fragments(
        group, s.mask, k, atom_cap, connected=k <= 2
    )
    if kappa is None:
        raise NotSeparableError(f"set is not {k}-separable")
    alpha, atom_masks, frag_count, truncated = _atoms_from_scan(
        group, kappa, by_size, achievers, counts, atom_cap
    )
    return FragmentReport(
        k=k,
        separable=True,
        kappa=kappa,
        alpha=alpha,
        atoms=tuple(GroupSubset(group, m) for m in atom_masks),
        fragment_count=frag_count,
        fragment_count_exact=group.order <= FRAGMENT_COUNT_EXACT_CAP,
        oracle_used=False,
        atoms_truncated=truncated,
    )


def isoperimetric_number(s: GroupSubset, k: int) -> int:
    """The k-th isoperimetric number of S (minimum admissible boundary size)."""
    return find_atoms(s, k).kappa


def find_fragments(
    s: GroupSubset, k: int, *, cap: int = DEFAULT_ATOM_CAP
) -> tuple[GroupSubset, ...]:
    """All k-fragments containing the identity, of every admissible size."""
    _checked_input(s, k)
    group = s.group
    kappa, by_size, achievers, _ = _scan_fragments(
        group, s.mask, k, cap, connected=k <= 2
    )
    if kappa is None:
        raise NotSeparableError(f"set is not {k}-separable")
    masks = []
    for size in sorted(by_size):
        if by_size[size] == kappa:
            masks.extend(achievers[size])
    masks.sort(key=indices_tuple)
    return tuple(GroupSubset(group, m) for m in masks)


def oracle_atoms(
    s: GroupSubset,
    k: int,
    *,
    order_cap: int = DEFAULT_ORACLE_ORDER_CAP,
    atom_cap: int = DEFAULT_ATOM_CAP,
) -> FragmentReport:
    """Same contract as :func:`find_atoms` by plain exhaustive enumeration.

    Every subset containing the identity is visited; the only normalization
    is pinning 1 into X.  Intended as an independent cross-check engine.
    """
    _checked_input(s, k)
    group = s.group
    n = group.order
    if n > order_cap:
        raise OracleCapError(f"group order {n} exceeds oracle cap {order_cap}")
    tables = TranslateTables(group, s.mask)
    xs = tables.xs_masks()
    limit = n - k
    best_by_size: dict[int, int] = {}
    achievers: dict[int, list[int]] = {}
    counts: dict[int, int] = {}
    kappa = n + 1
    sys.setrecursionlimit(max(sys.getrecursionlimit(), 4 * n + 100))

    def visit(x: int, u: int, size: int) -> None:
        nonlocal kappa
        usize = u.bit_count()
        if size >= k and usize <= limit:
            b = usize - size
            if b < kappa:
                kappa = b
            cur = best_by_size.get(size)
            if cur is None or b < cur:
                best_by_size[size] = b
                achievers[size] = [x]
                counts[size] = 1
            elif b == cur:
                counts[size] += 1
                bucket = achievers[size]
                if len(bucket) < atom_cap:
                    bucket.append(x)

    def rec(x: int, u: int, size: int, start: int) -> None:
        for c in range(start, n):
            nx = x | (1 << c)
            nu = u | xs[c]
            visit(nx, nu, size + 1)
            rec(nx, nu, size + 1, c + 1)

    visit(1 << IDENTITY, xs[IDENTITY], 1)
    rec(1 << IDENTITY, xs[IDENTITY], 1, 1)
    if kappa > n:
        raise NotSeparableError(f"set is not {k}-separable")
    alpha, atom_masks, frag_count, truncated = _atoms_from_scan(
        group, kappa, best_by_size, achievers, counts, atom_cap
    )
    return FragmentReport(
        k=k,
        separable=True,
        kappa=kappa,
        alpha=alpha,
        atoms=tuple(GroupSubset(group, m) for m in atom_masks),
        fragment_count=frag_count,
        fragment_count_exact=True,
        oracle_used=True,
        atoms_truncated=truncated,
    )


# ---------------------------------------------------------------------------
# Structure of atoms


def maximal_left_period(a: GroupSubset) -> GroupSubset:
    """The largest subgroup H with H*A = A (the left stabilizer of A)."""
    if not a:
        raise PreconditionError("empty set has no left period")
    group = a.group
    table = group.table
    target = a.mask
    out = 0
    for g in range(group.order):
        if permute_mask(target, table[g]) == target:
            out |= 1 << g
    return GroupSubset(group, out)


def atom_translates(report: FragmentReport, group: FiniteGroup) -> list[int]:
    """Masks of all distinct atoms, i.e. all left translates of the listed ones."""
    table = group.table
    seen = set()
    out = []
    for atom in report.atoms:
        for g in range(group.order):
            m = permute_mask(atom.mask, table[g])
            if m not in seen:
                seen.add(m)
                out.append(m)
    out.sort(key=indices_tuple)
    return out


def check_intersection_property(s: GroupSubset, k: int) -> IntersectionVerdict:
    """Verify that distinct k-atoms meet in at most k-1 points.

    Applicable only when the group has room for two disjoint atoms plus a
    boundary (|G| >= 2*alpha + kappa); otherwise the verdict is vacuous.
    """
    report = find_atoms(s, k)
    group = s.group
    all_atoms = atom_translates(report, group)
    applicable = group.order >= 2 * report.alpha + report.kappa
    holds: Optional[bool] = None
    counterexample = None
    if applicable:
        holds = True
        for i, a in enumerate(all_atoms):
            for b in all_atoms[i + 1 :]:
                if (a & b).bit_count() > k - 1:
                    holds = False
                    counterexample = (GroupSubset(group, a), GroupSubset(group, b))
                    break
            if not holds:
                break
    return IntersectionVerdict(
        k=k,
        applicable=applicable,
        holds=holds,
        kappa=report.kappa,
        alpha=report.alpha,
        atom_count=len(all_atoms),
        counterexample=counterexample,
    )


def fragment_diagram(f1: GroupSubset, f2: GroupSubset, s: GroupSubset) -> FragmentDiagram:
    """All nine cell counts of the partition pair induced by F1 and F2."""
    group = _check_pair(f1, f2)
    _check_pair(f1, s)
    _require_identity(s.mask)
    full = (1 << group.order) - 1
    d1 = product_mask(group, f1.mask, s.mask) & ~f1.mask
    d2 = product_mask(group, f2.mask, s.mask) & ~f2.mask
    r1 = full & ~(f1.mask | d1)
    r2 = full & ~(f2.mask | d2)
    return FragmentDiagram(
        beta_12=(f1.mask & d2).bit_count(),
        beta_21=(f2.mask & d1).bit_count(),
        beta_p12=(d1 & r2).bit_count(),
        beta_p21=(d2 & r1).bit_count(),
        gamma=(d1 & d2).bit_count(),
        f1_f2=(f1.mask & f2.mask).bit_count(),
        f1_f2star=(f1.mask & r2).bit_count(),
        f1star_f2=(r1 & f2.mask).bit_count(),
        f1star_f2star=(r1 & r2).bit_count(),
        group_order=group.order,
    )


def normalize(s: GroupSubset) -> tuple[GroupSubset, NormalizeReport]:
    """Right-translate S so its smallest element lands on the identity.

    Returns the translated set and flags: whether it now contains the
    identity (always true) and whether it generates the group.
    """
    if not s:
        raise PreconditionError("cannot normalize the empty set")
    group = s.group
    smallest = (s.mask & -s.mask).bit_length() - 1
    if smallest == IDENTITY:
        translated = s
    else:
        translated = s.right_translate(group.inverse[smallest])
    full = (1 << group.order) - 1
    generates = closure_mask(group, translated.indices()) == full
    return translated, NormalizeReport(
        contains_identity=True, generates=generates, translator=smallest
    )
