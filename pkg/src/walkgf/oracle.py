"""Brute-force walk enumeration.

Every walk of length at most ``order`` is visited individually by an
explicit-stack depth-first traversal and tallied by (source, sink, length).
Nothing here touches the series algebra, so it serves as an independent
ground truth for the generating-function formulas.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .graph import Network, link_set, node_set

__all__ = ["Restriction", "WalkCountTable", "enumerate_walks", "count_exact_link_passes"]

_KINDS = ("unrestricted", "avoid_nodes", "through_nodes", "avoid_links", "through_links", "exact_link_passes")


@dataclass(frozen=True)
class Restriction:
    """Which walks to count.

    Node restrictions look only at strictly interior nodes; the start and end
    of a walk are exempt. Link restrictions look at every step.
    """

    kind: str = "unrestricted"
    nodes: tuple = ()
    links: tuple = ()
    passes: int = 0

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"unknown restriction kind {self.kind!r}")
        object.__setattr__(self, "nodes", node_set(self.nodes))
        object.__setattr__(self, "links", link_set(self.links))
        if self.passes < 0:
            raise ValueError("passes must be non-negative")

    @classmethod
    def unrestricted(cls):
        return cls()

    @classmethod
    def avoid_nodes(cls, A):
        return cls("avoid_nodes", nodes=A)

    @classmethod
    def through_nodes(cls, A):
        return cls("through_nodes", nodes=A)

    @classmethod
    def avoid_links(cls, L):
        return cls("avoid_links", links=L)

    @classmethod
    def through_links(cls, L):
        return cls("through_links", links=L)

    @classmethod
    def exact_link_passes(cls, L, passes):
        return cls("exact_link_passes", links=L, passes=passes)


@dataclass
class WalkCountTable:
    """``counts[(i, j)][t]`` is the number of counted walks from i to j of length t."""

    n: int
    order: int
    counts: dict = field(default_factory=dict)

    def __getitem__(self, ij) -> list:
        return self.counts[ij]

    def row_sum(self, i: int) -> list:
        """Counts of walks from ``i`` to any sink, per length."""
        return [sum(self.counts[i, j][t] for j in range(self.n)) for t in range(self.order + 1)]

    def total(self) -> list:
        return [sum(self.row_sum(i)[t] for i in range(self.n)) for t in range(self.order + 1)]


def enumerate_walks(net: Network, restriction: Restriction, order: int) -> WalkCountTable:
    if order < 0:
        raise ValueError("order must be non-negative")
    n = net.n
    for v in restriction.nodes:
        if not 0 <= v < n:
            raise ValueError(f"node {v} out of range")
    for i, j in restriction.links:
        if not (0 <= i < n and 0 <= j < n):
            raise ValueError(f"link ({i}, {j}) out of range")

    nbrs = [[int(j) for j in range(n) if net.adjacency[i, j]] for i in range(n)]
    kind = restriction.kind
    A = set(restriction.nodes)
    L = set(restriction.links)
    passes = restriction.passes

    table = WalkCountTable(n, order, {(i, j): [0] * (order + 1) for i in range(n) for j in range(n)})
    for src in range(n):
        # state: has the walk met the restriction so far (through_*), or how
        # many restricted links it has used (exact_link_passes)
        stack = [(src, 0, 0)]
        while stack:
            node, length, state = stack.pop()
            if _accept(kind, state, passes):
                table.counts[src, node][length] += 1
            if length == order:
                continue
            interior = length >= 1
            if kind == "avoid_nodes" and interior and node in A:
                continue
            if kind == "through_nodes" and interior and node in A:
                state = 1
            for nxt in nbrs[node]:
                step = (node, nxt)
                s = state
                if kind == "avoid_links":
                    if step in L:
                        continue
                elif kind == "through_links":
                    if step in L:
                        s = 1
                elif kind == "exact_link_passes":
                    if step in L:
                        s += 1
                        if s > passes:
                            continue
                stack.append((nxt, length + 1, s))
    return table


def _accept(kind: str, state: int, passes: int) -> bool:
    if kind in ("through_nodes", "through_links"):
        return state == 1
    if kind == "exact_link_passes":
        return state == passes
    return True


def count_exact_link_passes(net: Network, L, passes: int, order: int) -> WalkCountTable:
    """Walks that traverse links of ``L`` exactly ``passes`` times (with multiplicity)."""
    return enumerate_walks(net, Restriction.exact_link_passes(L, passes), order)
