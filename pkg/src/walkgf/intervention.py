"""Effects of removing and adding links or nodes, and key-element search."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .calculus import adjacency_from_M, katz_vectors, numeric_M
from .errors import ValidationError
from .graph import InterventionSpec, Network, check_convergence
from .series import KatzVectors, SeriesMatrix, TruncatedSeries

__all__ = [
    "KeySearchResult",
    "delta_M",
    "total_walk_change",
    "single_link_change",
    "key_group_search",
    "key_link_search",
    "intercentrality_value",
    "link_change_value",
]


@dataclass
class KeySearchResult:
    best_set: tuple
    objective_value: float
    ranking: list = field(default_factory=list)
    tie_policy_applied: bool = False


def _check_spec(M: SeriesMatrix, spec: InterventionSpec) -> None:
    if M.order < 1:
        return
    G = adjacency_from_M(M)
    for i, j in spec.remove + spec.add:
        if not (0 <= i < M.n and 0 <= j < M.n):
            raise ValidationError(f"link ({i}, {j}) out of range")
    if any(G[l] != 1 for l in spec.remove):
        raise ValidationError("removed links must exist in the network")
    if any(G[l] != 0 for l in spec.add):
        raise ValidationError("added links must be absent from the network")


def _xD(D: np.ndarray, order: int) -> SeriesMatrix:
    return SeriesMatrix.from_coefficients([np.zeros_like(D), D], order)


def delta_M(M: SeriesMatrix, spec: InterventionSpec) -> SeriesMatrix:
    """Change in the generating matrix: ``xMD (I - xMD)^{-1} M`` with ``D = L+ - L-``."""
    _check_spec(M, spec)
    n, T = M.n, M.order
    if not spec.remove and not spec.add:
        return SeriesMatrix.zeros(n, T)
    MxD = M @ _xD(spec.difference_matrix(n), T)
    return MxD @ (SeriesMatrix.identity(n, T) - MxD).inverse() @ M


def _touched(spec: InterventionSpec) -> list:
    return sorted({v for l in spec.remove + spec.add for v in l})


def total_walk_change(M: SeriesMatrix, vectors: KatzVectors | None, spec: InterventionSpec) -> TruncatedSeries:
    """``1' dM 1`` through the low-rank form on the touched nodes ``S``::

        x b_in_S' D_SS (I - x M_SS D_SS)^{-1} b_out_S
    """
    _check_spec(M, spec)
    T = M.order
    S = _touched(spec)
    if not S:
        return TruncatedSeries.zero(T)
    kv = vectors if vectors is not None else katz_vectors(M)
    D = spec.difference_matrix(M.n)[np.ix_(S, S)]
    xD = _xD(D, T)
    Q = (SeriesMatrix.identity(len(S), T) - M.block(S, S) @ xD).inverse()
    row = SeriesMatrix([[kv.incoming[v] for v in S]])
    col = SeriesMatrix([[kv.outgoing[v]] for v in S])
    return (row @ xD @ Q @ col)[0, 0]


def single_link_change(M: SeriesMatrix, vectors: KatzVectors | None, i: int, j: int, action: str) -> TruncatedSeries:
    """Change in total walks from adding or deleting the undirected link ``{i, j}``.

    Scalar closed forms (``b`` = Katz series, ``m`` = entries of ``M``)::

        add:    x [x m_jj b_i^2 + x m_ii b_j^2 + 2(1 - x m_ij) b_i b_j] / [(1 - x m_ij)^2 - x^2 m_ii m_jj]
        delete: x [x m_jj b_i^2 + x m_ii b_j^2 - 2(1 + x m_ij) b_i b_j] / [(1 + x m_ij)^2 - x^2 m_ii m_jj]
    """
    action = action.lower()
    if action not in ("add", "delete"):
        raise ValidationError(f"action must be 'add' or 'delete', got {action!r}")
    if i == j or not (0 <= i < M.n and 0 <= j < M.n):
        raise ValidationError(f"invalid link ({i}, {j})")
    G = adjacency_from_M(M)
    if not np.array_equal(G, G.T):
        raise ValidationError("single-link closed forms need an undirected network")
    if action == "add" and G[i, j]:
        raise ValidationError(f"link ({i}, {j}) already exists")
    if action == "delete" and not G[i, j]:
        raise ValidationError(f"link ({i}, {j}) does not exist")
    kv = vectors if vectors is not None else katz_vectors(M)
    T = M.order
    x = TruncatedSeries.monomial(T, 1)
    one = TruncatedSeries.one(T)
    bi, bj = kv.outgoing[i], kv.outgoing[j]
    mii, mjj, mij = M[i, i], M[j, j], M[i, j]
    cross = one - x * mij if action == "add" else one + x * mij
    sign = 1 if action == "add" else -1
    num = x * mjj * bi * bi + x * mii * bj * bj + cross * bi * bj * (2 * sign)
    den = cross * cross - x * x * mii * mjj
    return x * num / den


# --------------------------------------------------------------------------
# numeric searches


def intercentrality_value(Mx: np.ndarray, A) -> float:
    """Convergent group intercentrality from the numeric matrix ``(I - x0 G)^{-1}``."""
    A = list(A)
    b_out = Mx.sum(axis=1)
    b_in = Mx.sum(axis=0)
    return float(b_in[A] @ np.linalg.solve(Mx[np.ix_(A, A)], b_out[A]))


def link_change_value(Mx: np.ndarray, x0: float, spec: InterventionSpec) -> float:
    """Convergent ``1' dM 1`` at ``x0`` through the low-rank form."""
    S = _touched(spec)
    if not S:
        return 0.0
    D = spec.difference_matrix(Mx.shape[0])[np.ix_(S, S)].astype(float)
    b_out = Mx.sum(axis=1)[S]
    b_in = Mx.sum(axis=0)[S]
    K = np.eye(len(S)) - x0 * Mx[np.ix_(S, S)] @ D
    return float(x0 * b_in @ D @ np.linalg.solve(K, b_out))


def _rank(scored: list) -> tuple:
    # values agreeing to 12 significant digits count as tied; ties go to the
    # lexicographically smallest candidate
    keyed = sorted(scored, key=lambda cv: (-float(f"{cv[1]:.12g}"), cv[0]))
    top = float(f"{keyed[0][1]:.12g}")
    tied = sum(1 for _, v in keyed if float(f"{v:.12g}") == top) > 1
    return keyed, tied


def key_group_search(net: Network, size: int, x0: float, mode: str = "exhaustive") -> KeySearchResult:
    """Node group whose removal most reduces total (discounted) walks.

    ``exhaustive`` scores every ``size``-subset; ``greedy`` adds one node per
    round, each time maximizing the intercentrality of the enlarged group.
    """
    mode = mode.lower()
    if mode not in ("exhaustive", "greedy"):
        raise ValidationError(f"mode must be 'exhaustive' or 'greedy', got {mode!r}")
    if not 1 <= size < net.n:
        raise ValidationError(f"group size must lie in [1, {net.n - 1}]")
    if x0 <= 0:
        raise ValidationError("x0 must be positive")
    check_convergence(net, x0)
    Mx = numeric_M(net, x0)
    if mode == "exhaustive":
        scored = [(c, intercentrality_value(Mx, c)) for c in itertools.combinations(range(net.n), size)]
        ranking, tied = _rank(scored)
        best, value = ranking[0]
        return KeySearchResult(best, value, ranking, tied)
    current: tuple = ()
    tie_seen = False
    for _ in range(size):
        scored = []
        for c in range(net.n):
            if c in current:
                continue
            cand = tuple(sorted(current + (c,)))
            scored.append((cand, intercentrality_value(Mx, cand)))
        ranking, tied = _rank(scored)
        tie_seen = tie_seen or tied
        current, value = ranking[0]
    return KeySearchResult(current, value, ranking, tie_seen)


def key_link_search(net: Network, x0: float) -> KeySearchResult:
    """Single link whose deletion most reduces total (discounted) walks.

    Undirected networks are searched over edges ``(i, j)``, ``i < j``, each
    deletion removing both orientations.
    """
    if x0 <= 0:
        raise ValidationError("x0 must be positive")
    check_convergence(net, x0)
    candidates = net.edges() if not net.directed else net.links()
    if not candidates:
        raise ValidationError("network has no links")
    Mx = numeric_M(net, x0)
    scored = []
    for i, j in candidates:
        remove = [(i, j), (j, i)] if not net.directed else [(i, j)]
        scored.append(((i, j), -link_change_value(Mx, x0, InterventionSpec(remove=remove))))
    ranking, tied = _rank(scored)
    best, value = ranking[0]
    return KeySearchResult(best, value, ranking, tied)
