"""Walk generating-function matrices of a network and their restricted variants.

``M = (I - xG)^{-1}`` counts all walks; the functions below derive, from
``M`` alone, the matrices of walks that avoid or pass through a node set or
a link set, plus Katz vectors and group intercentrality.
"""

from __future__ import annotations

from typing import Iterable

import numpy as np

from .errors import ValidationError
from .graph import Network, link_set, node_set
from .series import KatzVectors, SeriesMatrix, TruncatedSeries

__all__ = [
    "compute_M",
    "avoid_nodes_matrix",
    "through_nodes_matrix",
    "avoid_links_matrix",
    "add_links_matrix",
    "through_links_matrix",
    "katz_vectors",
    "group_intercentrality",
    "adjacency_from_M",
    "link_matrix",
    "numeric_M",
]


def compute_M(net: Network, order: int) -> SeriesMatrix:
    """Generating matrix of all walks, truncated at ``order``."""
    if order < 0:
        raise ValueError("order must be non-negative")
    n = net.n
    A = SeriesMatrix.from_coefficients([np.eye(n, dtype=np.int64), -net.adjacency.astype(np.int64)], order)
    return A.inverse()


def adjacency_from_M(M: SeriesMatrix) -> np.ndarray:
    """Recover ``G`` from the length-one coefficients of ``M``."""
    if M.order < 1:
        raise ValidationError("order-0 generating matrix does not determine the links")
    return M.coefficient(1).astype(np.int64)


def link_matrix(L: Iterable, n: int) -> np.ndarray:
    mat = np.zeros((n, n), dtype=np.int64)
    for i, j in link_set(L, n):
        mat[i, j] = 1
    return mat


def _x_times(mat: np.ndarray, order: int) -> SeriesMatrix:
    return SeriesMatrix.from_coefficients([np.zeros_like(mat), mat], order)


def avoid_nodes_matrix(M: SeriesMatrix, A: Iterable[int]) -> SeriesMatrix:
    """Walks whose interior nodes avoid ``A`` (endpoints may lie in ``A``).

    With ``Q = (M_AA)^{-1}`` the blocks are::

        A^C x A^C :  M_cc - M_cA Q M_Ac
        A^C x A   :  M_cA Q
        A   x A^C :  Q M_Ac
        A   x A   :  2I - Q
    """
    n = M.n
    A = list(node_set(A, n))
    if not A:
        return M
    C = [v for v in range(n) if v not in set(A)]
    Q = M.block(A, A).inverse()
    out = SeriesMatrix.zeros(n, M.order)
    out = out.with_block(A, A, SeriesMatrix.identity(len(A), M.order).scale(2) - Q)
    if C:
        M_cA = M.block(C, A)
        M_Ac = M.block(A, C)
        left = M_cA @ Q
        out = out.with_block(C, A, left)
        out = out.with_block(A, C, Q @ M_Ac)
        out = out.with_block(C, C, M.block(C, C) - left @ M_Ac)
    return out


def through_nodes_matrix(M: SeriesMatrix, A: Iterable[int]) -> SeriesMatrix:
    """Walks with at least one interior node in ``A``."""
    return M - avoid_nodes_matrix(M, A)


def _present(M: SeriesMatrix, L) -> list:
    L = link_set(L, M.n)
    if M.order < 1:
        return []
    G = M.coefficient(1)
    return [l for l in L if G[l] == 1]


def avoid_links_matrix(M: SeriesMatrix, L: Iterable) -> SeriesMatrix:
    """Walks that never traverse a link of ``L``: ``M (I + xLM)^{-1}``.

    Links of ``L`` absent from the network are ignored; they cannot be
    traversed, so the restriction is vacuous for them.
    """
    present = _present(M, L)
    if not present:
        return M
    n = M.n
    xL = _x_times(link_matrix(present, n), M.order)
    return M @ (SeriesMatrix.identity(n, M.order) + xL @ M).inverse()


def add_links_matrix(M_base: SeriesMatrix, L: Iterable) -> SeriesMatrix:
    """Generating matrix after adding ``L``: ``(I - x M_base L)^{-1} M_base``."""
    n = M_base.n
    L = link_set(L, n)
    if not L:
        return M_base
    if M_base.order >= 1:
        G = M_base.coefficient(1)
        clash = [l for l in L if G[l] != 0]
        if clash:
            raise ValidationError(f"links already present: {clash}")
    xL = _x_times(link_matrix(L, n), M_base.order)
    return (SeriesMatrix.identity(n, M_base.order) - M_base @ xL).inverse() @ M_base


def through_links_matrix(M: SeriesMatrix, L: Iterable) -> SeriesMatrix:
    """Walks that traverse at least one link of ``L``."""
    return M - avoid_links_matrix(M, L)


def katz_vectors(M: SeriesMatrix) -> KatzVectors:
    return KatzVectors.of(M)


def group_intercentrality(M: SeriesMatrix, A: Iterable[int], vectors: KatzVectors | None = None) -> TruncatedSeries:
    """Loss in total walks from deleting ``A``: ``b_in_A' (M_AA)^{-1} b_out_A``."""
    A = list(node_set(A, M.n))
    if not A:
        raise ValidationError("group intercentrality needs a non-empty node set")
    kv = vectors if vectors is not None else katz_vectors(M)
    row = SeriesMatrix([[kv.incoming[a] for a in A]])
    col = SeriesMatrix([[kv.outgoing[a]] for a in A])
    return (row @ M.block(A, A).inverse() @ col)[0, 0]


def numeric_M(net: Network, x0: float) -> np.ndarray:
    """Convergent value ``(I - x0 G)^{-1}`` in floating point."""
    return np.linalg.inv(np.eye(net.n) - x0 * net.adjacency.astype(float))
