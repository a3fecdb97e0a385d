"""Message diffusion on symmetric networks with non-retransmitting nodes.

A message starts at a sender; every copy held by a transmitting node is
passed to each neighbor independently with probability ``delta``, so the
expected number of copies reaching ``j`` after ``t`` steps is ``delta**t``
times the number of admissible length-``t`` walks. Silent nodes (the
sender, the targets, or both) receive copies but never forward them.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .calculus import adjacency_from_M, avoid_nodes_matrix
from .errors import ConvergenceGuardError, ValidationError
from .graph import Network, node_set, spectral_bound
from .series import SeriesMatrix, TruncatedSeries

__all__ = [
    "Mode",
    "DiffusionQuery",
    "IntermediaryEntry",
    "IntermediaryReport",
    "target_series_pair",
    "target_centrality_pair",
    "target_series_group",
    "target_centrality_group",
    "group_aggregate_series",
    "group_aggregates",
    "incoming_aggregate_closed_form",
    "both_silent_aggregate_closed_form",
    "without_retransmission_series",
    "intermediary_report",
    "simulate_diffusion",
    "horizon_tail_bound",
]


class Mode(str, enum.Enum):
    SENDER_SILENT = "sender"
    TARGET_SILENT = "target"
    BOTH_SILENT = "both"

    @classmethod
    def parse(cls, value) -> "Mode":
        if isinstance(value, Mode):
            return value
        key = str(value).strip().lower().replace("_", "").replace("-", "")
        aliases = {
            "sender": cls.SENDER_SILENT, "sendersilent": cls.SENDER_SILENT,
            "target": cls.TARGET_SILENT, "targetsilent": cls.TARGET_SILENT,
            "both": cls.BOTH_SILENT, "bothsilent": cls.BOTH_SILENT,
        }
        try:
            return aliases[key]
        except KeyError:
            raise ValidationError(f"unknown mode {value!r}") from None


@dataclass(frozen=True)
class DiffusionQuery:
    sender: int
    targets: tuple
    delta: float
    mode: Mode = Mode.BOTH_SILENT

    def __post_init__(self):
        object.__setattr__(self, "targets", node_set(self.targets))
        object.__setattr__(self, "mode", Mode.parse(self.mode))
        if not self.targets:
            raise ValidationError("target set is empty")
        if self.sender in self.targets:
            raise ValidationError("sender cannot be a target")

    def silent(self) -> tuple:
        if self.mode is Mode.SENDER_SILENT:
            return (self.sender,)
        if self.mode is Mode.TARGET_SILENT:
            return self.targets
        return node_set(self.targets + (self.sender,))


def _symmetric_adjacency(M: SeriesMatrix) -> np.ndarray:
    G = adjacency_from_M(M)
    if not np.array_equal(G, G.T):
        raise ValidationError("diffusion measures need a symmetric network")
    return G


def _guard(G: np.ndarray, delta: float) -> None:
    lam = spectral_bound(Network(G))
    bound = math.inf if lam == 0 else 1.0 / lam
    if not 0 <= delta < bound:
        raise ConvergenceGuardError(delta, bound, "delta")


def target_series_pair(M: SeriesMatrix, i: int, j: int, mode) -> TruncatedSeries:
    """Single-target reception series: ``m_ij/m_ii``, ``m_ij/m_jj`` or ``m_ij/(m_ii m_jj - m_ij m_ji)``."""
    mode = Mode.parse(mode)
    if i == j:
        raise ValidationError("sender and target must differ")
    mij = M[i, j]
    if mode is Mode.SENDER_SILENT:
        return mij / M[i, i]
    if mode is Mode.TARGET_SILENT:
        return mij / M[j, j]
    return mij / (M[i, i] * M[j, j] - mij * M[j, i])


def target_centrality_pair(M: SeriesMatrix, i: int, j: int, mode, delta: float) -> float:
    _guard(_symmetric_adjacency(M), delta)
    return target_series_pair(M, i, j, mode).evaluate(delta)


def target_series_group(M: SeriesMatrix, sender: int, targets: Iterable[int], mode) -> TruncatedSeries:
    q = DiffusionQuery(sender, tuple(targets), 0.0, mode)
    avoid = avoid_nodes_matrix(M, q.silent())
    acc = TruncatedSeries.zero(M.order)
    for j in q.targets:
        acc = acc + avoid[sender, j]
    return acc


def target_centrality_group(M: SeriesMatrix, q: DiffusionQuery) -> float:
    _guard(_symmetric_adjacency(M), q.delta)
    return target_series_group(M, q.sender, q.targets, q.mode).evaluate(q.delta)


def _proper(M: SeriesMatrix, A) -> tuple:
    A = node_set(A, M.n)
    if not A or len(A) == M.n:
        raise ValidationError("target group must be a non-empty proper subset")
    return A


def group_aggregate_series(M: SeriesMatrix, A: Iterable[int]) -> tuple:
    """Per-definition sums over every sender outside ``A``, one series per mode."""
    A = _proper(M, A)
    senders = [i for i in range(M.n) if i not in A]
    T = M.order
    out = []
    for mode in Mode:
        acc = TruncatedSeries.zero(T)
        if mode is Mode.TARGET_SILENT:
            avoid = avoid_nodes_matrix(M, A)
            for i in senders:
                for j in A:
                    acc = acc + avoid[i, j]
        else:
            for i in senders:
                acc = acc + target_series_group(M, i, A, mode)
        out.append(acc)
    return tuple(out)


def group_aggregates(M: SeriesMatrix, A: Iterable[int], delta: float) -> tuple:
    """``(sender-silent, target-silent, both-silent)`` totals received by ``A``."""
    _guard(_symmetric_adjacency(M), delta)
    return tuple(s.evaluate(delta) for s in group_aggregate_series(M, A))


def incoming_aggregate_closed_form(M: SeriesMatrix, A: Iterable[int]) -> TruncatedSeries:
    """Target-silent total as ``b_A (M_AA)^{-1} 1 - |A|`` with ``b`` the column sums."""
    A = list(_proper(M, A))
    cols = M.col_sums()
    row = SeriesMatrix([[cols[a] for a in A]])
    ones = SeriesMatrix([[TruncatedSeries.one(M.order)] for _ in A])
    return (row @ M.block(A, A).inverse() @ ones)[0, 0] - TruncatedSeries.monomial(M.order, 0, len(A))


def both_silent_aggregate_closed_form(M: SeriesMatrix, A: Iterable[int]) -> TruncatedSeries:
    """Both-silent total as ``-sum_{i not in A} sum_{j in A} [(M_BB)^{-1}]_ij`` with ``B = A + {i}``.

    Off the diagonal, the avoid-``B`` block ``2I - (M_BB)^{-1}`` is just the
    negated inverse.
    """
    A = list(_proper(M, A))
    acc = TruncatedSeries.zero(M.order)
    for i in range(M.n):
        if i in A:
            continue
        B = [i] + A
        inv = M.block(B, B).inverse()
        for col in range(1, len(B)):
            acc = acc - inv[0, col]
    return acc


def without_retransmission_series(M: SeriesMatrix, i: int, j: int, k: int) -> TruncatedSeries:
    """Walks i -> j whose interior avoids ``{i, j, k}``.

    Equals ``[2I - (M_B)^{-1}]_ij`` for ``B = (i, j, k)``, written out as
    ``(m_ij m_kk - m_ik m_kj) / det(M_B)``.
    """
    if len({i, j, k}) != 3:
        raise ValidationError("i, j, k must be distinct")
    m = M
    det = (
        m[i, i] * (m[j, j] * m[k, k] - m[j, k] * m[k, j])
        - m[i, j] * (m[j, i] * m[k, k] - m[j, k] * m[k, i])
        + m[i, k] * (m[j, i] * m[k, j] - m[j, j] * m[k, i])
    )
    return (m[i, j] * m[k, k] - m[i, k] * m[k, j]) / det


@dataclass
class IntermediaryEntry:
    with_retrans: float
    without_retrans: float
    index: float


@dataclass
class IntermediaryReport:
    pair: tuple
    per_node: dict = field(default_factory=dict)
    key_intermediary: int | None = None


def intermediary_report(M: SeriesMatrix, i: int, j: int, delta: float) -> IntermediaryReport:
    """Score every third node ``k`` by how much silencing it cuts i -> j receptions.

    ``index = n_both_ij - without_retrans``; the key intermediary maximizes
    it (lowest index wins ties).
    """
    if M.n < 3:
        raise ValidationError("intermediaries need at least three nodes")
    if i == j:
        raise ValidationError("sender and target must differ")
    _guard(_symmetric_adjacency(M), delta)
    both = target_series_pair(M, i, j, Mode.BOTH_SILENT).evaluate(delta)
    report = IntermediaryReport((i, j))
    best = None
    for k in range(M.n):
        if k in (i, j):
            continue
        with_r = (M[i, j] - M[i, k] * M[k, j] / M[k, k]).evaluate(delta)
        without = without_retransmission_series(M, i, j, k).evaluate(delta)
        entry = IntermediaryEntry(with_r, without, both - without)
        report.per_node[k] = entry
        score = float(f"{entry.index:.12g}")
        if best is None or score > best:
            best = score
            report.key_intermediary = k
    return report


def horizon_tail_bound(net: Network, delta: float, horizon: int) -> float:
    """Upper estimate of receptions beyond ``horizon``: ``sqrt(n) r^(h+1) / (1 - r)``, ``r = delta lambda``."""
    r = delta * spectral_bound(net)
    if r >= 1:
        return math.inf
    return math.sqrt(net.n) * r ** (horizon + 1) / (1 - r)


def simulate_diffusion(net: Network, q: DiffusionQuery, reps: int, horizon: int, seed: int) -> tuple:
    """Monte Carlo estimate of receptions by ``q.targets``; returns ``(mean, std_error)``.

    Copies are counted, not just informed/uninformed states: a node holding
    ``s`` copies makes ``s`` independent attempts per neighbor. All
    replications advance together, one vectorized step per period.
    """
    if reps < 1 or horizon < 1:
        raise ValidationError("reps and horizon must be positive")
    if not net.is_symmetric():
        raise ValidationError("diffusion simulation needs a symmetric network")
    if not 0 <= q.sender < net.n or any(not 0 <= v < net.n for v in q.targets):
        raise ValidationError("query nodes out of range")
    _guard(net.adjacency, q.delta)
    rng = np.random.default_rng(seed)
    nbrs = [np.nonzero(net.adjacency[k])[0] for k in range(net.n)]
    silent = list(q.silent())
    targets = list(q.targets)
    state = np.zeros((reps, net.n), dtype=np.int64)
    state[:, q.sender] = 1
    received = np.zeros(reps, dtype=np.int64)
    for _ in range(horizon):
        nxt = np.zeros_like(state)
        for k in range(net.n):
            copies = state[:, k]
            if not copies.any():
                continue
            for l in nbrs[k]:
                nxt[:, l] += rng.binomial(copies, q.delta)
        received += nxt[:, targets].sum(axis=1)
        nxt[:, silent] = 0
        state = nxt
        if not state.any():
            break
    mean = float(received.mean())
    se = float(received.std(ddof=1) / math.sqrt(reps)) if reps > 1 else 0.0
    return mean, se
