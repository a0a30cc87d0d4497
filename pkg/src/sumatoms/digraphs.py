"""Coset quotient digraphs and arc connectivity.

Left multiplication by a union of two cosets H and Ha induces a digraph on
the right cosets of H: there is an arc Hx -> Hy exactly when HaHx covers Hy.
This module builds that graph, certifies its translation symmetries, and
computes arc connectivity with three engines that cross-check each other:
augmenting-path flows, plain cut enumeration, and a size-bounded sweep that
is exact on arc-transitive graphs.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Optional

from .bitset import bit_indices, indices_tuple, permute_mask
from .errors import (
    DisconnectedGraphError,
    GraphTooLargeError,
    GroupMismatchError,
    PreconditionError,
)
from .groups import FiniteGroup, GroupSubset, double_coset_mask, right_coset_mask

DEFAULT_EXACT_CUT_CAP = 16


@dataclass(frozen=True)
class DirectedGraph:
    """A simple digraph on vertices 0..n-1, adjacency stored as bitmasks."""

    out_masks: tuple[int, ...]
    labels: Optional[tuple[str, ...]] = None

    def __post_init__(self) -> None:
        n = len(self.out_masks)
        for u, m in enumerate(self.out_masks):
            if not 0 <= m < (1 << n):
                raise PreconditionError(f"adjacency mask of vertex {u} out of range")
            if m >> u & 1:
                raise PreconditionError(f"self-loop at vertex {u}")

    @property
    def vertex_count(self) -> int:
        return len(self.out_masks)

    @property
    def arc_count(self) -> int:
        return sum(m.bit_count() for m in self.out_masks)

    def arcs(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.vertex_count) for v in bit_indices(self.out_masks[u])]

    def in_masks(self) -> tuple[int, ...]:
        n = self.vertex_count
        ins = [0] * n
        for u, m in enumerate(self.out_masks):
            for v in bit_indices(m):
                ins[v] |= 1 << u
        return tuple(ins)

    def out_degree(self, u: int) -> int:
        return self.out_masks[u].bit_count()


def graph_from_arcs(n: int, arcs: Iterable[tuple[int, int]]) -> DirectedGraph:
    masks = [0] * n
    for u, v in arcs:
        if u == v:
            raise PreconditionError(f"self-loop at vertex {u}")
        if not (0 <= u < n and 0 <= v < n):
            raise PreconditionError(f"arc ({u},{v}) out of range")
        masks[u] |= 1 << v
    return DirectedGraph(tuple(masks))


def directed_cycle(n: int) -> DirectedGraph:
    return graph_from_arcs(n, [(i, (i + 1) % n) for i in range(n)])


def bidirected_clique(n: int) -> DirectedGraph:
    return graph_from_arcs(
        n, [(u, v) for u in range(n) for v in range(n) if u != v]
    )


def oriented_octahedron() -> DirectedGraph:
    """The 6-vertex antisymmetric orientation with every arc in a directed triangle.

    Underlying graph is the complete tripartite K_{2,2,2}; antipodal pairs
    are (0,5), (1,4), (2,3).
    """
    arcs = [
        (2, 1), (1, 0), (0, 2),
        (0, 3), (3, 1),
        (4, 0), (1, 5),
        (2, 4), (3, 4),
        (5, 2), (5, 3),
        (4, 5),
    ]
    return graph_from_arcs(6, arcs)


def oriented_rook() -> DirectedGraph:
    """Both triangle classes of the 3x3 rook graph oriented cyclically.

    The Cayley digraph of Z3 x Z3 on {(0,1),(1,0)}: antisymmetric,
    out-degree 2, every arc in a directed triangle, arc-transitive
    (translations plus the transpose swap the two arc classes).
    """
    arcs = []
    for i in range(3):
        for j in range(3):
            arcs.append((3 * i + j, 3 * i + (j + 1) % 3))
            arcs.append((3 * i + j, 3 * ((i + 1) % 3) + j))
    return graph_from_arcs(9, arcs)


def format_graph_dump(graph: DirectedGraph) -> str:
    """Line-oriented dump: "n m" then one "u v" line per arc, sorted."""
    arcs = sorted(graph.arcs())
    lines = [f"{graph.vertex_count} {len(arcs)}"]
    lines.extend(f"{u} {v}" for u, v in arcs)
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Quotient construction


def coset_vertices(group: FiniteGroup, hmask: int) -> tuple[list[int], list[int]]:
    """Right-coset representatives (smallest element) and the element->vertex map."""
    n = group.order
    coset_of = [-1] * n
    reps: list[int] = []
    for x in range(n):
        if coset_of[x] < 0:
            idx = len(reps)
            reps.append(x)
            for y in bit_indices(right_coset_mask(group, hmask, x)):
                coset_of[y] = idx
    return reps, coset_of


def build_quotient_graph(
    group: FiniteGroup, subgroup: GroupSubset, a: int
) -> DirectedGraph:
    """The digraph on right cosets Hx with an arc Hx -> Hy when HaHx covers Hy."""
    if subgroup.group is not group:
        raise GroupMismatchError("subgroup belongs to a different group")
    if not subgroup.is_subgroup():
        raise PreconditionError(f"{{{subgroup.to_literal()}}} is not a subgroup")
    if not 0 <= a < group.order:
        raise PreconditionError(f"element {a} out of range")
    if a in subgroup:
        raise PreconditionError("a lies in H; the quotient would have self-loops")
    hmask = subgroup.mask
    reps, coset_of = coset_vertices(group, hmask)
    dc = double_coset_mask(group, hmask, a)
    out = []
    for rep in reps:
        image = permute_mask(dc, group.column(rep))
        mask = 0
        for y in bit_indices(image):
            mask |= 1 << coset_of[y]
        out.append(mask)
    labels = tuple(str(rep) for rep in reps)
    return DirectedGraph(tuple(out), labels=labels)


@dataclass(frozen=True)
class TransitivityVerdict:
    """Certificate that coset translations act as graph symmetries."""

    translations_are_automorphisms: bool
    vertex_transitive: bool
    neighbor_action_transitive: bool
    regular: bool
    degree: Optional[int]
    failures: tuple[str, ...]

    @property
    def passed(self) -> bool:
        return not self.failures


def _vertex_translation(
    group: FiniteGroup, reps: list[int], coset_of: list[int], z: int
) -> list[int]:
    # Image of vertex Hx under right multiplication by z is the vertex of Hxz.
    table = group.table
    return [coset_of[table[rep][z]] for rep in reps]


def verify_translation_transitivity(
    graph: DirectedGraph, group: FiniteGroup, subgroup: GroupSubset, a: int
) -> TransitivityVerdict:
    """Check the translation symmetries of a quotient graph.

    Right multiplication by any group element must permute the vertices and
    preserve arcs, the family must act transitively on vertices, and the
    translations fixing the base coset (those by elements of H) must act
    transitively on its out-neighbors.  Left multiplication by elements of H
    fixes every right coset, so the stabilizer action is realized by the
    right translations.
    """
    failures: list[str] = []
    reps, coset_of = coset_vertices(group, subgroup.mask)
    n = graph.vertex_count
    if len(reps) != n:
        raise PreconditionError("graph does not match the coset structure")
    out = graph.out_masks
    autos_ok = True
    orbit_of_base = set()
    for z in range(group.order):
        perm = _vertex_translation(group, reps, coset_of, z)
        orbit_of_base.add(perm[0])
        if len(set(perm)) != n:
            autos_ok = False
            failures.append(f"translation by {z} is not a vertex bijection")
            continue
        for u in range(n):
            if permute_mask(out[u], perm) != out[perm[u]]:
                autos_ok = False
                failures.append(f"translation by {z} breaks arcs at vertex {u}")
                break
    vertex_transitive = len(orbit_of_base) == n
    if not vertex_transitive:
        failures.append("translations do not act transitively on vertices")
    neighbors = list(bit_indices(out[0]))
    reached = set()
    for z in subgroup:
        perm = _vertex_translation(group, reps, coset_of, z)
        if perm[0] != 0:
            failures.append(f"translation by subgroup element {z} moves the base coset")
            continue
        if neighbors:
            reached.add(perm[neighbors[0]])
    neighbor_transitive = set(neighbors) <= reached if neighbors else True
    if not neighbor_transitive:
        failures.append("subgroup translations not transitive on base out-neighbors")
    degrees = {m.bit_count() for m in out}
    in_degrees = {m.bit_count() for m in graph.in_masks()}
    regular = len(degrees) == 1 and in_degrees == degrees
    if not regular:
        failures.append("graph is not regular with equal in- and out-degrees")
    return TransitivityVerdict(
        translations_are_automorphisms=autos_ok,
        vertex_transitive=vertex_transitive,
        neighbor_action_transitive=neighbor_transitive,
        regular=regular,
        degree=degrees.pop() if len(degrees) == 1 else None,
        failures=tuple(failures),
    )


# ---------------------------------------------------------------------------
# Cuts and arc connectivity


def outgoing_arcs(graph: DirectedGraph, vertices: Iterable[int]) -> int:
    """Number of arcs from the vertex set to its complement."""
    cmask = 0
    for v in vertices:
        if not 0 <= v < graph.vertex_count:
            raise PreconditionError(f"vertex {v} out of range")
        cmask |= 1 << v
    return _outgoing(graph.out_masks, cmask)


def _outgoing(out_masks: tuple[int, ...], cmask: int) -> int:
    total = 0
    m = cmask
    while m:
        low = m & -m
        m ^= low
        total += (out_masks[low.bit_length() - 1] & ~cmask).bit_count()
    return total


def _reachable(masks: tuple[int, ...], start: int) -> int:
    seen = 1 << start
    queue = [start]
    while queue:
        u = queue.pop()
        new = masks[u] & ~seen
        seen |= new
        for v in bit_indices(new):
            queue.append(v)
    return seen


def is_strongly_connected(graph: DirectedGraph) -> bool:
    n = graph.vertex_count
    full = (1 << n) - 1
    if n == 0:
        return False
    return (
        _reachable(graph.out_masks, 0) == full
        and _reachable(graph.in_masks(), 0) == full
    )


@dataclass(frozen=True)
class ArcCutReport:
    """Arc connectivity at level k, with the minimum cuts of least size."""

    k: int
    lam: int
    atoms: tuple[tuple[int, ...], ...]
    separable: bool
    atoms_complete: bool
    method: str


def _max_flow_unit(cap: list[list[int]], s: int, t: int) -> tuple[int, int]:
    """Augmenting-path max flow; returns (value, residual-reachable mask)."""
    n = len(cap)
    flow = [[0] * n for _ in range(n)]
    total = 0
    while True:
        parent = [-1] * n
        parent[s] = s
        queue: deque[int] = deque([s])
        while queue:
            u = queue.popleft()
            if u == t:
                break
            row_c, row_f = cap[u], flow[u]
            for v in range(n):
                if parent[v] < 0 and row_c[v] - row_f[v] > 0:
                    parent[v] = u
                    queue.append(v)
        if parent[t] < 0:
            break
        bottleneck = None
        v = t
        while v != s:
            u = parent[v]
            r = cap[u][v] - flow[u][v]
            bottleneck = r if bottleneck is None else min(bottleneck, r)
            v = u
        v = t
        while v != s:
            u = parent[v]
            flow[u][v] += bottleneck
            flow[v][u] -= bottleneck
            v = u
        total += bottleneck
    seen = 1 << s
    queue = [s]
    while queue:
        u = queue.pop()
        for v in range(n):
            if not seen >> v & 1 and cap[u][v] - flow[u][v] > 0:
                seen |= 1 << v
                queue.append(v)
    return total, seen


def _unit_capacity_matrix(graph: DirectedGraph) -> list[list[int]]:
    n = graph.vertex_count
    cap = [[0] * n for _ in range(n)]
    for u, v in graph.arcs():
        cap[u][v] = 1
    return cap


def _flow_lambda1(graph: DirectedGraph) -> tuple[int, list[int]]:
    """Global minimum arc cut by flows pinned at vertex 0, plus cut sides found."""
    n = graph.vertex_count
    base = _unit_capacity_matrix(graph)
    best = None
    sides: list[int] = []
    full = (1 << n) - 1
    for t in range(1, n):
        for s, sink in ((0, t), (t, 0)):
            cap = [row[:] for row in base]
            value, reach = _max_flow_unit(cap, s, sink)
            side = reach & full
            if best is None or value < best:
                best = value
                sides = [side]
            elif value == best and side not in sides:
                sides.append(side)
    return best, sides


def arc_connectivity_flow(
    graph: DirectedGraph, k: int, *, work_cap: int = 200_000
) -> int:
    """Exact k-arc-connectivity via flows with pinned k-element terminals.

    Every admissible cut C contains some k of its vertices and misses some k
    others, so contracting each (source k-set, sink k-set) pair and taking
    the minimum flow value is exact.  Cost grows as C(n,k)^2; guarded by
    ``work_cap``.
    """
    n = graph.vertex_count
    if n < 2 * k:
        raise PreconditionError(f"graph is not {k}-separable")
    if not is_strongly_connected(graph):
        raise DisconnectedGraphError("graph is not strongly connected")
    if k == 1:
        value, _ = _flow_lambda1(graph)
        return value
    from math import comb

    pairs = comb(n, k) * comb(n - k, k)
    if pairs > work_cap:
        raise GraphTooLargeError(
            f"pinned-terminal flow needs {pairs} flow runs, cap {work_cap}"
        )
    base = _unit_capacity_matrix(graph)
    big = graph.arc_count + 1
    best: Optional[int] = None
    verts = range(n)
    for sources in combinations(verts, k):
        rest = [v for v in verts if v not in sources]
        for sinks in combinations(rest, k):
            m = n + 2
            cap = [row[:] + [0, 0] for row in base]
            cap.append([0] * m)  # super source
            cap.append([0] * m)  # super sink
            for v in sources:
                cap[n][v] = big
            for v in sinks:
                cap[v][n + 1] = big
            value, _ = _max_flow_unit(cap, n, n + 1)
            if best is None or value < best:
                best = value
    return best


def arc_connectivity_exhaustive(
    graph: DirectedGraph, k: int, *, cap: int = 22, atom_cap: int = 256
) -> ArcCutReport:
    """Plain scan of every vertex subset with k <= |C| <= n-k."""
    n = graph.vertex_count
    if n > cap:
        raise GraphTooLargeError(f"{n} vertices exceeds exhaustive cap {cap}")
    if n < 2 * k:
        raise PreconditionError(f"graph is not {k}-separable")
    if not is_strongly_connected(graph):
        raise DisconnectedGraphError("graph is not strongly connected")
    out = graph.out_masks
    lam = None
    alpha = None
    atoms: list[int] = []
    count = 0
    hi = n - k
    for cmask in range(1, 1 << n):
        size = cmask.bit_count()
        if size < k or size > hi:
            continue
        e = _outgoing(out, cmask)
        if lam is None or e < lam or (e == lam and size < alpha):
            lam, alpha, atoms, count = e, size, [cmask], 1
        elif e == lam and size == alpha:
            count += 1
            if len(atoms) < atom_cap:
                atoms.append(cmask)
    return ArcCutReport(
        k=k,
        lam=lam,
        atoms=tuple(sorted(indices_tuple(m) for m in atoms)),
        separable=True,
        atoms_complete=count == len(atoms),
        method="exhaustive",
    )


def _bounded_sweep(
    graph: DirectedGraph, k: int, atom_cap: int
) -> ArcCutReport:
    # Exact on connected arc-transitive graphs: arc k-atoms have at most
    # max(k, 2k-2) vertices there, so sweeping the small sizes finds lambda.
    n = graph.vertex_count
    out = graph.out_masks
    size_hi = min(max(k, 2 * k - 2), n - k)
    lam = None
    alpha = None
    atoms: list[int] = []
    count = 0
    for size in range(k, size_hi + 1):
        for combo in combinations(range(n), size):
            cmask = 0
            for v in combo:
                cmask |= 1 << v
            e = _outgoing(out, cmask)
            if lam is None or e < lam:
                lam, alpha, atoms, count = e, size, [cmask], 1
            elif e == lam and size == alpha:
                count += 1
                if len(atoms) < atom_cap:
                    atoms.append(cmask)
    return ArcCutReport(
        k=k,
        lam=lam,
        atoms=tuple(sorted(indices_tuple(m) for m in atoms)),
        separable=True,
        atoms_complete=count == len(atoms),
        method="transitive-sweep",
    )


def arc_connectivity(
    graph: DirectedGraph,
    k: int,
    *,
    arc_transitive: bool = False,
    exact_cap: int = DEFAULT_EXACT_CUT_CAP,
    atom_cap: int = 256,
) -> ArcCutReport:
    """Exact lambda_k with all minimum cuts of least cardinality.

    k = 1 uses pinned flows (any size); larger k uses full enumeration up to
    ``exact_cap`` vertices and, beyond that, the size-bounded sweep that is
    exact for arc-transitive graphs (caller asserts transitivity).
    """
    n = graph.vertex_count
    if n < 2 * k:
        raise PreconditionError(f"graph is not {k}-separable")
    if not is_strongly_connected(graph):
        raise DisconnectedGraphError("graph is not strongly connected")
    if k == 1:
        lam, sides = _flow_lambda1(graph)
        if n <= exact_cap:
            enum = arc_connectivity_exhaustive(graph, 1, cap=exact_cap, atom_cap=atom_cap)
            if enum.lam != lam:
                raise AssertionError(
                    f"flow/enumeration disagree on lambda_1: {lam} vs {enum.lam}"
                )
            return ArcCutReport(
                k=1,
                lam=lam,
                atoms=enum.atoms,
                separable=True,
                atoms_complete=enum.atoms_complete,
                method="flow+enumeration",
            )
        best_sides = [s for s in sides if _outgoing(graph.out_masks, s) == lam]
        smallest = min(m.bit_count() for m in best_sides)
        atoms = sorted(
            {indices_tuple(m) for m in best_sides if m.bit_count() == smallest}
        )
        return ArcCutReport(
            k=1,
            lam=lam,
            atoms=tuple(atoms),
            separable=True,
            atoms_complete=False,
            method="flow",
        )
    if n <= exact_cap:
        return arc_connectivity_exhaustive(graph, k, cap=exact_cap, atom_cap=atom_cap)
    if arc_transitive:
        return _bounded_sweep(graph, k, atom_cap)
    raise GraphTooLargeError(
        f"exact cuts need <= {exact_cap} vertices unless arc-transitivity is asserted"
    )


# ---------------------------------------------------------------------------
# Structure detectors


def is_antisymmetric(graph: DirectedGraph) -> bool:
    """No pair of opposite arcs."""
    out = graph.out_masks
    for u in range(graph.vertex_count):
        for v in bit_indices(out[u]):
            if out[v] >> u & 1:
                return False
    return True


def is_symmetric(graph: DirectedGraph) -> bool:
    """Every arc has its reverse."""
    out = graph.out_masks
    return all(
        out[v] >> u & 1 for u in range(graph.vertex_count) for v in bit_indices(out[u])
    )


def every_arc_in_oriented_triangle(graph: DirectedGraph) -> bool:
    """Each arc (u,v) extends to a directed triangle u -> v -> w -> u."""
    out = graph.out_masks
    ins = graph.in_masks()
    for u in range(graph.vertex_count):
        for v in bit_indices(out[u]):
            if not out[v] & ins[u]:
                return False
    return True


def contains_k4_star(graph: DirectedGraph) -> Optional[tuple[int, int, int, int]]:
    """A 4-vertex set inducing at least 5 arcs with no opposite pair, if any."""
    n = graph.vertex_count
    out = graph.out_masks
    for combo in combinations(range(n), 4):
        cmask = 0
        for v in combo:
            cmask |= 1 << v
        ok = True
        arcs = 0
        for u in combo:
            for v in combo:
                if u < v and out[u] >> v & 1 and out[v] >> u & 1:
                    ok = False
                    break
            if not ok:
                break
            arcs += (out[u] & cmask).bit_count()
        if ok and arcs >= 5:
            return combo
    return None


def is_octahedron_underlying(graph: DirectedGraph) -> bool:
    """Whether the underlying simple graph is the complete tripartite K_{2,2,2}."""
    n = graph.vertex_count
    if n != 6:
        return False
    ins = graph.in_masks()
    und = [graph.out_masks[u] | ins[u] for u in range(n)]
    non_neighbors = []
    for u in range(n):
        if und[u].bit_count() != 4:
            return False
        missing = [v for v in range(n) if v != u and not und[u] >> v & 1]
        if len(missing) != 1:
            return False
        non_neighbors.append(missing[0])
    return all(non_neighbors[non_neighbors[u]] == u != non_neighbors[u] for u in range(n))


def max_induced_arcs(graph: DirectedGraph, k: int) -> int:
    """Largest arc count induced by any k vertices (exhaustive; meant for k <= 4)."""
    n = graph.vertex_count
    if k > n:
        raise PreconditionError(f"k={k} exceeds vertex count {n}")
    out = graph.out_masks
    best = 0
    for combo in combinations(range(n), k):
        cmask = 0
        for v in combo:
            cmask |= 1 << v
        arcs = sum((out[v] & cmask).bit_count() for v in combo)
        if arcs > best:
            best = arcs
    return best


@dataclass(frozen=True)
class ArcAtomVerdict:
    """Size and bound checks for arc k-atoms of a regular arc-transitive graph."""

    k: int
    degree: int
    antisymmetric: bool
    lam: int
    atom_sizes: tuple[int, ...]
    checks: tuple[tuple[str, bool, int, int], ...]

    @property
    def passed(self) -> bool:
        return all(ok for _, ok, _, _ in self.checks)


def arc_atom_cardinality_check(
    graph: DirectedGraph,
    k: int,
    *,
    arc_transitive: bool = True,
    exact_cap: int = DEFAULT_EXACT_CUT_CAP,
) -> ArcAtomVerdict:
    """Check the cardinality caps and the degree bound for arc k-atoms.

    The caller certifies (or asserts) arc-transitivity; the graph must be
    regular with equal in- and out-degrees.  Checks: atoms have at most
    max(k, 2k-2) vertices; exactly k when 3(k-1) <= d, or when the graph is
    antisymmetric and 3(k-1) <= 2d; and in those regimes
    lambda_k >= d*k - e_k with e_k the maximum induced arc count.
    """
    degrees = {m.bit_count() for m in graph.out_masks}
    in_degrees = {m.bit_count() for m in graph.in_masks()}
    if len(degrees) != 1 or degrees != in_degrees:
        raise PreconditionError("graph is not regular with equal in/out degrees")
    d = degrees.pop()
    report = arc_connectivity(
        graph, k, arc_transitive=arc_transitive, exact_cap=exact_cap
    )
    sizes = tuple(sorted({len(c) for c in report.atoms}))
    anti = is_antisymmetric(graph)
    checks: list[tuple[str, bool, int, int]] = []
    size_cap = max(k, 2 * k - 2)
    checks.append(("atom_size_cap", max(sizes) <= size_cap, max(sizes), size_cap))
    plain_clause = 3 * (k - 1) <= d
    anti_clause = anti and 3 * (k - 1) <= 2 * d
    if plain_clause or anti_clause:
        name = "atom_size_k" if plain_clause else "atom_size_k_antisymmetric"
        checks.append((name, sizes == (k,), max(sizes), k))
        if k <= 4:
            ek = max_induced_arcs(graph, k)
            checks.append(
                ("lambda_degree_bound", report.lam >= d * k - ek, report.lam, d * k - ek)
            )
    return ArcAtomVerdict(
        k=k,
        degree=d,
        antisymmetric=anti,
        lam=report.lam,
        atom_sizes=sizes,
        checks=tuple(checks),
    )
