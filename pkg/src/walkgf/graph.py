"""Directed, unweighted networks and the structural edits applied to them."""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from typing import Iterable, NamedTuple

import numpy as np

from .errors import ConvergenceGuardError, EmptyGraphError, ValidationError

__all__ = [
    "Network",
    "InterventionSpec",
    "SpectralBound",
    "node_set",
    "link_set",
    "undirected_links",
    "load_network",
    "read_network",
    "out_neighbors",
    "apply_intervention",
    "remove_nodes",
    "spectral_bound",
    "power_iteration_bound",
    "check_convergence",
]


class Network:
    """A directed graph on nodes ``0..n-1`` without self-links.

    ``directed`` records how the source described the graph; an undirected
    network always has a symmetric adjacency matrix.
    """

    __slots__ = ("_adj", "directed", "name")

    def __init__(self, adjacency, directed: bool = True, name: str | None = None):
        adj = np.array(adjacency, dtype=np.int8)
        if adj.ndim != 2 or adj.shape[0] != adj.shape[1] or adj.shape[0] == 0:
            raise ValidationError("adjacency must be a non-empty square matrix")
        if np.any((adj != 0) & (adj != 1)):
            raise ValidationError("adjacency entries must be 0 or 1")
        if np.any(np.diag(adj)):
            raise ValidationError("self-links are not allowed")
        if not directed and not np.array_equal(adj, adj.T):
            raise ValidationError("undirected network needs a symmetric adjacency")
        adj.setflags(write=False)
        self._adj = adj
        self.directed = bool(directed)
        self.name = name

    @classmethod
    def from_edges(cls, n: int, edges: Iterable, directed: bool = True, name: str | None = None) -> "Network":
        adj = np.zeros((n, n), dtype=np.int8)
        for i, j in edges:
            adj[i, j] = 1
            if not directed:
                adj[j, i] = 1
        return cls(adj, directed=directed, name=name)

    @property
    def n(self) -> int:
        return self._adj.shape[0]

    @property
    def adjacency(self) -> np.ndarray:
        return self._adj

    def links(self) -> tuple:
        """All directed links ``(i, j)`` in lexicographic order."""
        return tuple((int(i), int(j)) for i, j in zip(*np.nonzero(self._adj)))

    def edges(self) -> tuple:
        """Undirected edges ``(i, j)`` with ``i < j`` (only for undirected networks)."""
        return tuple((i, j) for i, j in self.links() if i < j)

    def has_link(self, i: int, j: int) -> bool:
        return bool(self._adj[i, j])

    def is_symmetric(self) -> bool:
        return bool(np.array_equal(self._adj, self._adj.T))

    def __eq__(self, other):
        if not isinstance(other, Network):
            return NotImplemented
        return self.directed == other.directed and np.array_equal(self._adj, other._adj)

    def __hash__(self):
        return hash((self.directed, self._adj.tobytes(), self._adj.shape))

    def __repr__(self):
        kind = "directed" if self.directed else "undirected"
        return f"Network(n={self.n}, {kind}, links={int(self._adj.sum())})"


def node_set(members: Iterable[int], n: int | None = None) -> tuple:
    """Sorted, duplicate-free tuple of node indices, range-checked against ``n``."""
    out = tuple(sorted({int(v) for v in members}))
    if n is not None and any(v < 0 or v >= n for v in out):
        raise ValidationError(f"node index out of range for n={n}: {out}")
    return out


def link_set(members: Iterable, n: int | None = None) -> tuple:
    """Sorted, duplicate-free tuple of directed links ``(i, j)`` with ``i != j``."""
    out = tuple(sorted({(int(i), int(j)) for i, j in members}))
    for i, j in out:
        if i == j:
            raise ValidationError(f"self-link ({i}, {j}) in link set")
        if n is not None and not (0 <= i < n and 0 <= j < n):
            raise ValidationError(f"link ({i}, {j}) out of range for n={n}")
    return out


def undirected_links(pairs: Iterable) -> tuple:
    """Both orientations of every pair."""
    return link_set([(i, j) for i, j in pairs] + [(j, i) for i, j in pairs])


@dataclass(frozen=True)
class InterventionSpec:
    """Remove the links ``remove`` and add the links ``add``."""

    remove: tuple = ()
    add: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "remove", link_set(self.remove))
        object.__setattr__(self, "add", link_set(self.add))
        if set(self.remove) & set(self.add):
            raise ValidationError("a link cannot be both removed and added")

    def validate(self, net: Network) -> None:
        for i, j in self.remove + self.add:
            if not (0 <= i < net.n and 0 <= j < net.n):
                raise ValidationError(f"link ({i}, {j}) out of range for n={net.n}")
        missing = [l for l in self.remove if not net.has_link(*l)]
        if missing:
            raise ValidationError(f"cannot remove absent links {missing}")
        present = [l for l in self.add if net.has_link(*l)]
        if present:
            raise ValidationError(f"cannot add existing links {present}")

    def reversed(self) -> "InterventionSpec":
        return InterventionSpec(remove=self.add, add=self.remove)

    def difference_matrix(self, n: int) -> np.ndarray:
        """Integer matrix ``L+ - L-``."""
        d = np.zeros((n, n), dtype=np.int64)
        for i, j in self.add:
            d[i, j] += 1
        for i, j in self.remove:
            d[i, j] -= 1
        return d


def load_network(description: dict) -> Network:
    """Validate a graph document and build the network.

    The document has keys ``n``, ``edges`` and optionally ``directed``
    (default false), ``index_base`` (0 or 1, default 0) and ``name``.
    Undirected documents list each edge once.
    """
    if not isinstance(description, dict):
        raise ValidationError("graph document must be a JSON object")
    try:
        n = description["n"]
        edges = description.get("edges", [])
    except KeyError as exc:
        raise ValidationError(f"graph document lacks {exc.args[0]!r}") from None
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise ValidationError("'n' must be a positive integer")
    directed = description.get("directed", False)
    if not isinstance(directed, bool):
        raise ValidationError("'directed' must be a boolean")
    base = description.get("index_base", 0)
    if base not in (0, 1) or isinstance(base, bool):
        raise ValidationError("'index_base' must be 0 or 1")
    seen = set()
    adj = np.zeros((n, n), dtype=np.int8)
    for e in edges:
        if not isinstance(e, (list, tuple)) or len(e) != 2 or not all(
            isinstance(v, int) and not isinstance(v, bool) for v in e
        ):
            raise ValidationError(f"malformed edge {e!r}")
        i, j = e[0] - base, e[1] - base
        if not (0 <= i < n and 0 <= j < n):
            raise ValidationError(f"edge {list(e)} out of range for n={n}, index_base={base}")
        if i == j:
            raise ValidationError(f"self-loop at node {e[0]}")
        key = (i, j) if directed else (min(i, j), max(i, j))
        if key in seen:
            raise ValidationError(f"duplicate edge {list(e)}")
        seen.add(key)
        adj[i, j] = 1
        if not directed:
            adj[j, i] = 1
    return Network(adj, directed=directed, name=description.get("name"))


def read_network(path: str | os.PathLike) -> Network:
    with open(path, encoding="utf-8") as fh:
        doc = json.load(fh)
    return load_network(doc)


def out_neighbors(net: Network, i: int) -> tuple:
    if not 0 <= i < net.n:
        raise ValidationError(f"node {i} out of range")
    return tuple(int(j) for j in np.nonzero(net.adjacency[i])[0])


def apply_intervention(net: Network, spec: InterventionSpec) -> Network:
    """The network ``G - L- + L+``; ``net`` itself is untouched."""
    spec.validate(net)
    adj = np.array(net.adjacency) + spec.difference_matrix(net.n)
    directed = net.directed or not np.array_equal(adj, adj.T)
    return Network(adj, directed=directed, name=net.name)


def remove_nodes(net: Network, A: Iterable[int]) -> tuple:
    """Induced subgraph on the complement of ``A``.

    Returns ``(subnetwork, index_map)`` where ``index_map[new] = old``.
    """
    A = set(node_set(A, net.n))
    keep = [v for v in range(net.n) if v not in A]
    if not keep:
        raise EmptyGraphError("removing every node leaves an empty graph")
    sub = net.adjacency[np.ix_(keep, keep)]
    return Network(sub, directed=net.directed, name=net.name), tuple(keep)


class SpectralBound(NamedTuple):
    value: float
    approximate: bool
    iterations: int


def power_iteration_bound(net: Network, tol: float = 1e-10, max_iter: int = 500) -> SpectralBound:
    """Largest eigenvalue of the symmetrized adjacency ``(G + G')/2``.

    Power iteration runs on ``S + I`` (same eigenvectors, spectrum shifted
    by one) so that the Perron root strictly dominates even on bipartite
    graphs, where ``S`` alone has a ``-lambda`` eigenvalue of equal modulus.
    """
    S = (net.adjacency.astype(float) + net.adjacency.T) / 2.0
    if not S.any():
        return SpectralBound(0.0, False, 0)
    B = S + np.eye(net.n)
    v = np.ones(net.n) / np.sqrt(net.n)
    rq = float(v @ S @ v)
    for it in range(1, max_iter + 1):
        w = B @ v
        v = w / np.linalg.norm(w)
        new = float(v @ S @ v)
        if abs(new - rq) <= tol * max(1.0, abs(new)):
            return SpectralBound(new, False, it)
        rq = new
    return SpectralBound(rq + 1e-6, True, max_iter)


def spectral_bound(net: Network) -> float:
    return power_iteration_bound(net).value


def check_convergence(net: Network, x0: float, what: str = "x") -> float:
    """Raise :class:`ConvergenceGuardError` unless ``x0 < 1/lambda_max``; return the bound."""
    lam = spectral_bound(net)
    bound = float("inf") if lam == 0 else 1.0 / lam
    if x0 < 0 or x0 >= bound:
        raise ConvergenceGuardError(x0, bound, what)
    return bound
