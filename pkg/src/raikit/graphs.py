"""Signed weighted directed graphs and the structural predicates built on them.

Arc convention
--------------
``weights[i][j]`` is the weight that node ``j`` exerts **on** node ``i``;
a nonzero entry ``weights[i][j]`` is the arc ``j -> i``.  This is the
row-reads-influences convention used throughout the package: row ``i``
lists who influences ``i``.  It is the single most error-prone convention
in this domain, so every function below states flows in terms of explicit
(i, j) index pairs rather than "source/target" prose.

Weight exactly ``0.0`` means "no arc"; the graph layer applies no epsilon
thresholding (that belongs to the sequence analyzers).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Iterable, Iterator

import numpy as np

from .tolerances import CUT_ENUMERATION_LIMIT

__all__ = [
    "WeightedDigraph",
    "Cut",
    "SccDecomposition",
    "strong_components",
    "is_aperiodic",
    "cut_flow",
    "cut_balance_certificate",
    "graph_to_json",
    "graph_from_json",
    "graph_to_edgelist",
    "graph_from_edgelist",
    "all_cuts",
]


@dataclass(frozen=True)
class WeightedDigraph:
    """Immutable weighted digraph on nodes ``0..n-1``.

    ``weights[i][j]`` is the weight of arc ``j -> i`` (influence of j on i).
    Self-loops are permitted and weights may be negative; operations that
    require nonnegativity validate it themselves.
    """

    n: int
    weights: np.ndarray

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("node count must be at least 1")
        w = np.asarray(self.weights, dtype=float)
        if w.shape != (self.n, self.n):
            raise ValueError(f"weights must be {self.n}x{self.n}, got {w.shape}")
        if not np.all(np.isfinite(w)):
            raise ValueError("weights must be finite")
        w = w.copy()
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)

    @classmethod
    def from_weights(cls, rows: Iterable[Iterable[float]]) -> "WeightedDigraph":
        w = np.asarray(list(rows), dtype=float)
        return cls(n=w.shape[0], weights=w)

    def arc_set(self) -> set[tuple[int, int]]:
        """All arcs as (j, i) pairs, j -> i."""
        ii, jj = np.nonzero(self.weights)
        return {(int(j), int(i)) for i, j in zip(ii, jj)}

    def out_neighbors(self, j: int) -> np.ndarray:
        """Nodes i with an arc j -> i, i.e. nonzeros of column j."""
        return np.nonzero(self.weights[:, j])[0]

    def has_negative_weights(self) -> bool:
        return bool(np.any(self.weights < 0))

    def require_nonnegative(self) -> None:
        if self.has_negative_weights():
            raise ValueError("operation requires nonnegative weights")


@dataclass(frozen=True)
class Cut:
    """A bipartition of ``0..n-1`` into nonempty ``left`` (I) and ``right`` (J)."""

    left: frozenset[int]
    right: frozenset[int]

    def __post_init__(self) -> None:
        if not self.left or not self.right:
            raise ValueError("both sides of a cut must be nonempty")
        if self.left & self.right:
            raise ValueError("cut sides must be disjoint")
        object.__setattr__(self, "left", frozenset(int(v) for v in self.left))
        object.__setattr__(self, "right", frozenset(int(v) for v in self.right))

    @classmethod
    def of(cls, left: Iterable[int], n: int) -> "Cut":
        li = frozenset(int(v) for v in left)
        if any(v < 0 or v >= n for v in li):
            raise ValueError("cut members out of range")
        return cls(left=li, right=frozenset(range(n)) - li)

    def validate_for(self, n: int) -> None:
        if self.left | self.right != frozenset(range(n)):
            raise ValueError(f"cut does not partition 0..{n - 1}")


def all_cuts(n: int) -> Iterator[Cut]:
    """All 2^n - 2 ordered cuts (I, I^c) of ``0..n-1``."""
    if n > CUT_ENUMERATION_LIMIT:
        raise ValueError(
            f"cut enumeration limited to n <= {CUT_ENUMERATION_LIMIT}, got n = {n}"
        )
    for mask in range(1, (1 << n) - 1):
        left = frozenset(v for v in range(n) if mask >> v & 1)
        yield Cut(left=left, right=frozenset(range(n)) - left)


@dataclass(frozen=True)
class SccDecomposition:
    """Strongly connected components with condensation and per-component roles.

    ``classification[c]`` is one of ``source`` (condensation in-degree 0 only),
    ``sink`` (out-degree 0 only), ``isolated`` (both), ``internal`` (neither).
    ``is_quasi_strong`` means exactly one component has condensation
    in-degree 0, counting isolated components as sources.
    """

    components: tuple[frozenset[int], ...]
    condensation: WeightedDigraph
    classification: tuple[str, ...]
    is_strong: bool
    is_quasi_strong: bool
    component_of: tuple[int, ...] = field(repr=False)

    def source_components(self) -> list[int]:
        """Indices of components with condensation in-degree 0."""
        return [
            c
            for c in range(len(self.components))
            if self.classification[c] in ("source", "isolated")
        ]

    def all_isolated(self) -> bool:
        return all(cl == "isolated" for cl in self.classification)


def strong_components(g: WeightedDigraph) -> SccDecomposition:
    """Tarjan's algorithm on the arc set of ``g`` plus role classification.

    Components are numbered in the (deterministic) order Tarjan emits them;
    the condensation carries 0/1 weights and is acyclic with no self-arcs.
    """
    n = g.n
    succ = [g.out_neighbors(v).tolist() for v in range(n)]

    index = [-1] * n
    lowlink = [0] * n
    on_stack = [False] * n
    stack: list[int] = []
    comp_of = [-1] * n
    components: list[frozenset[int]] = []
    counter = 0

    # Iterative Tarjan; explicit frames avoid recursion limits.
    for root in range(n):
        if index[root] != -1:
            continue
        frames: list[tuple[int, int]] = [(root, 0)]
        while frames:
            v, pi = frames.pop()
            if pi == 0:
                index[v] = lowlink[v] = counter
                counter += 1
                stack.append(v)
                on_stack[v] = True
            advanced = False
            while pi < len(succ[v]):
                w = succ[v][pi]
                pi += 1
                if index[w] == -1:
                    frames.append((v, pi))
                    frames.append((w, 0))
                    advanced = True
                    break
                if on_stack[w]:
                    lowlink[v] = min(lowlink[v], index[w])
            if advanced:
                continue
            if lowlink[v] == index[v]:
                comp: list[int] = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp_of[w] = len(components)
                    comp.append(w)
                    if w == v:
                        break
                components.append(frozenset(comp))
            if frames:
                parent, _ = frames[-1]
                lowlink[parent] = min(lowlink[parent], lowlink[v])

    m = len(components)
    cond = np.zeros((m, m))
    ii, jj = np.nonzero(g.weights)
    for i, j in zip(ii, jj):
        ci, cj = comp_of[int(i)], comp_of[int(j)]
        if ci != cj:
            cond[ci][cj] = 1.0  # component cj influences component ci

    indeg = (cond != 0).sum(axis=1)
    outdeg = (cond != 0).sum(axis=0)
    classification = []
    for c in range(m):
        src, snk = indeg[c] == 0, outdeg[c] == 0
        if src and snk:
            classification.append("isolated")
        elif src:
            classification.append("source")
        elif snk:
            classification.append("sink")
        else:
            classification.append("internal")

    n_sources = int(sum(1 for c in range(m) if indeg[c] == 0))
    return SccDecomposition(
        components=tuple(components),
        condensation=WeightedDigraph(n=m, weights=cond),
        classification=tuple(classification),
        is_strong=(m == 1),
        is_quasi_strong=(n_sources == 1),
        component_of=tuple(comp_of),
    )


def is_aperiodic(g: WeightedDigraph, component: Iterable[int]) -> bool:
    """True iff the gcd of cycle lengths inside ``component`` is 1.

    ``component`` must induce a strongly connected subgraph of ``g``.
    Computed from BFS levels: the period is gcd over internal arcs u -> v of
    ``level(u) + 1 - level(v)``.  A single node without a self-loop has no
    cycles; its period is undefined and the function returns False.
    """
    comp = sorted(int(v) for v in set(component))
    if not comp:
        raise ValueError("component must be nonempty")
    comp_set = set(comp)
    for v in comp:
        if v < 0 or v >= g.n:
            raise ValueError("component node out of range")

    # Verify strong connectivity of the induced subgraph.
    for start in (comp[0],):
        seen = _bfs_inside(g, start, comp_set)
        if seen != comp_set:
            raise ValueError("component is not strongly connected")
    # Reverse reachability: every node must also reach comp[0].
    rev_seen = _bfs_inside(g, comp[0], comp_set, reverse=True)
    if rev_seen != comp_set:
        raise ValueError("component is not strongly connected")

    if len(comp) == 1:
        v = comp[0]
        return bool(g.weights[v][v] != 0)  # period defined only via the self-loop

    level = {comp[0]: 0}
    queue = [comp[0]]
    while queue:
        u = queue.pop(0)
        for v in g.out_neighbors(u):
            v = int(v)
            if v in comp_set and v not in level:
                level[v] = level[u] + 1
                queue.append(v)

    period = 0
    for u in comp:
        for v in g.out_neighbors(u):
            v = int(v)
            if v in comp_set:
                period = math.gcd(period, abs(level[u] + 1 - level[v]))
    return period == 1


def _bfs_inside(
    g: WeightedDigraph, start: int, allowed: set[int], reverse: bool = False
) -> set[int]:
    seen = {start}
    queue = [start]
    while queue:
        u = queue.pop(0)
        if reverse:
            nxt = np.nonzero(g.weights[u, :])[0]  # arcs v -> u
        else:
            nxt = np.nonzero(g.weights[:, u])[0]  # arcs u -> v
        for v in nxt:
            v = int(v)
            if v in allowed and v not in seen:
                seen.add(v)
                queue.append(v)
    return seen


def cut_flow(g: WeightedDigraph, cut: Cut) -> tuple[float, float]:
    """Windowless cross-flows of a nonnegative graph across ``cut``.

    Returns ``(flow_IJ, flow_JI)`` where, with I = cut.left and J = cut.right,
    ``flow_IJ = sum over i in I, j in J of weights[i][j]`` (arcs J -> I) and
    ``flow_JI = sum over i in I, j in J of weights[j][i]`` (arcs I -> J).
    """
    g.require_nonnegative()
    cut.validate_for(g.n)
    ii = sorted(cut.left)
    jj = sorted(cut.right)
    flow_ij = float(g.weights[np.ix_(ii, jj)].sum())
    flow_ji = float(g.weights[np.ix_(jj, ii)].sum())
    return flow_ij, flow_ji


@dataclass(frozen=True)
class CutBalanceCertificate:
    balanced: bool
    constant_C: float | None
    witness_cut: Cut | None


def cut_balance_certificate(g: WeightedDigraph) -> CutBalanceCertificate:
    """Decide cut-balance and produce either the constant C or a witness cut.

    Balance is decided structurally: the graph is cut-balanced iff every
    strongly connected component is isolated (simultaneously a source and a
    sink of the condensation).  When balanced and n is small enough for
    exhaustive enumeration, ``constant_C`` is the exact maximum of
    flow_IJ / flow_JI over all cuts where the ratio is well defined; above
    the enumeration limit it is reported as None.  When unbalanced,
    ``witness_cut`` has one cross-flow positive and the opposite one zero.
    """
    g.require_nonnegative()
    dec = strong_components(g)
    if dec.all_isolated():
        constant: float | None = None
        if g.n <= CUT_ENUMERATION_LIMIT:
            best = 0.0
            any_ratio = False
            for cut in all_cuts(g.n):
                f_ij, f_ji = cut_flow(g, cut)
                if f_ji > 0:
                    any_ratio = True
                    best = max(best, f_ij / f_ji)
            constant = best if any_ratio else 1.0  # no cross arcs at all
        return CutBalanceCertificate(balanced=True, constant_C=constant, witness_cut=None)

    # Unbalanced: take a condensation arc c -> c' and cut along the
    # downstream closure of c', which receives flow but returns none.
    cond = dec.condensation
    ci, cj = next(zip(*np.nonzero(cond.weights)))  # arc cj -> ci in condensation
    closure = _downstream_closure(cond, int(ci))
    left_nodes = frozenset().union(*(dec.components[c] for c in closure))
    witness = Cut(left=left_nodes, right=frozenset(range(g.n)) - left_nodes)
    return CutBalanceCertificate(balanced=False, constant_C=None, witness_cut=witness)


def _downstream_closure(cond: WeightedDigraph, start: int) -> set[int]:
    """Components reachable from ``start`` in the condensation (including it)."""
    seen = {start}
    queue = [start]
    while queue:
        u = queue.pop(0)
        for v in cond.out_neighbors(u):
            v = int(v)
            if v not in seen:
                seen.add(v)
                queue.append(v)
    return seen


# Graph I/O.  The JSON object form {"n": ..., "weights": [[...]]} round-trips
# any graph exactly; numbers are serialized with repr, the shortest decimal
# that parses back to the identical double.


def graph_to_json(g: WeightedDigraph) -> str:
    return json.dumps(
        {"n": g.n, "weights": [[float(x) for x in row] for row in g.weights]},
        sort_keys=True,
    )


def graph_from_json(text: str) -> WeightedDigraph:
    obj = json.loads(text)
    if not isinstance(obj, dict) or "n" not in obj or "weights" not in obj:
        raise ValueError('graph JSON must be an object {"n": ..., "weights": [[...]]}')
    return WeightedDigraph(n=int(obj["n"]), weights=np.asarray(obj["weights"], dtype=float))


def graph_to_edgelist(g: WeightedDigraph) -> str:
    """One line "j i w" per arc j -> i; w in round-trip decimal."""
    lines = []
    for i in range(g.n):
        for j in range(g.n):
            w = g.weights[i][j]
            if w != 0:
                lines.append(f"{j} {i} {float(w)!r}")
    return "\n".join(lines) + ("\n" if lines else "")


def graph_from_edgelist(text: str, n: int | None = None) -> WeightedDigraph:
    """Parse "j i w" lines.  Without an explicit ``n``, trailing isolated
    nodes are unrepresentable and n is inferred as 1 + the largest index."""
    arcs: list[tuple[int, int, float]] = []
    max_node = -1
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 3:
            raise ValueError(f"line {ln}: expected 'j i w', got {raw!r}")
        j, i, w = int(parts[0]), int(parts[1]), float(parts[2])
        arcs.append((j, i, w))
        max_node = max(max_node, i, j)
    size = n if n is not None else max_node + 1
    if size < 1:
        raise ValueError("empty edge list and no node count given")
    weights = np.zeros((size, size))
    for j, i, w in arcs:
        if i >= size or j >= size:
            raise ValueError(f"arc ({j}, {i}) out of range for n = {size}")
        weights[i][j] = w
    return WeightedDigraph(n=size, weights=weights)
