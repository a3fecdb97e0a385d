import math

import numpy as np
import pytest

from walkgf.calculus import avoid_nodes_matrix, compute_M
from walkgf.diffusion import (
    DiffusionQuery,
    Mode,
    both_silent_aggregate_closed_form,
    group_aggregate_series,
    group_aggregates,
    horizon_tail_bound,
    incoming_aggregate_closed_form,
    intermediary_report,
    simulate_diffusion,
    target_centrality_group,
    target_centrality_pair,
    target_series_group,
    target_series_pair,
    without_retransmission_series,
)
from walkgf.errors import ConvergenceGuardError, ValidationError
from walkgf.graph import Network, spectral_bound
from walkgf.series import TruncatedSeries

from conftest import dyad, path3, random_undirected, triangle

T = 12


def ints(s):
    return [int(v) for v in s.coeffs]


def test_mode_parsing():
    assert Mode.parse("both") is Mode.BOTH_SILENT
    assert Mode.parse("Sender-Silent") is Mode.SENDER_SILENT
    with pytest.raises(ValidationError):
        Mode.parse("nobody")


def test_query_validation():
    with pytest.raises(ValidationError):
        DiffusionQuery(0, (0, 1), 0.1)
    with pytest.raises(ValidationError):
        DiffusionQuery(0, (), 0.1)


def test_pair_examples():
    M = compute_M(dyad(), T)
    for mode in Mode:
        assert abs(target_centrality_pair(M, 0, 1, mode, 0.2) - 0.2) < 1e-12
    P = compute_M(path3(), T)
    assert abs(target_centrality_pair(P, 0, 2, Mode.BOTH_SILENT, 0.18) - 0.18**2) < 1e-12
    split = compute_M(Network.from_edges(4, [(0, 1), (2, 3)], directed=False), T)
    assert target_centrality_pair(split, 0, 3, "target", 0.3) == 0.0


def test_pair_guards():
    M = compute_M(triangle(), T)
    with pytest.raises(ConvergenceGuardError):
        target_centrality_pair(M, 0, 1, "both", 0.5)
    D = compute_M(Network.from_edges(3, [(0, 1), (1, 2)]), T)
    with pytest.raises(ValidationError):
        target_centrality_pair(D, 0, 2, "both", 0.1)


def test_pair_ratios_equal_avoid_entries(rng):
    for _ in range(20):
        n = int(rng.integers(3, 7))
        net = random_undirected(rng, n, 0.5)
        M = compute_M(net, T)
        i, j = (int(v) for v in rng.choice(n, 2, replace=False))
        silent = {Mode.SENDER_SILENT: [i], Mode.TARGET_SILENT: [j], Mode.BOTH_SILENT: [i, j]}
        series = {}
        for mode, A in silent.items():
            series[mode] = target_series_pair(M, i, j, mode)
            assert series[mode] == avoid_nodes_matrix(M, A)[i, j]
        both = series[Mode.BOTH_SILENT]
        assert series[Mode.SENDER_SILENT].dominates(both)
        assert series[Mode.TARGET_SILENT].dominates(both)


def test_group_examples():
    net = Network.from_edges(3, [(0, 1)], directed=False)
    M = compute_M(net, T)
    for mode in Mode:
        q = DiffusionQuery(0, (1, 2), 0.3, mode)
        assert target_centrality_group(M, q) == pytest.approx(target_centrality_pair(M, 0, 1, mode, 0.3), abs=1e-12)
    P = compute_M(path3(), T)
    for mode in Mode:
        assert target_series_group(P, 0, (2,), mode) == target_series_pair(P, 0, 2, mode)


def test_aggregate_examples():
    M = compute_M(dyad(), T)
    vals = group_aggregates(M, (1,), 0.2)
    assert all(abs(v - 0.2) < 1e-12 for v in vals)
    iso = compute_M(Network.from_edges(4, [(0, 1), (2, 3)], directed=False), T)
    assert all(v == 0.0 for v in group_aggregates(iso, (2, 3), 0.3))
    P = compute_M(path3(), T)
    both = group_aggregates(P, (2,), 0.18)[2]
    assert abs(both - (0.18 + 0.18**2)) < 1e-12


def test_aggregate_closed_forms(rng):
    P = compute_M(path3(), T)
    per_def = group_aggregate_series(P, (1, 2))
    assert incoming_aggregate_closed_form(P, (1, 2)) == per_def[1]
    for _ in range(20):
        n = int(rng.integers(3, 7))
        M = compute_M(random_undirected(rng, n, 0.5), T)
        k = int(rng.integers(1, n))
        A = tuple(sorted(int(v) for v in rng.choice(n, k, replace=False)))
        sender, target, both = group_aggregate_series(M, A)
        assert incoming_aggregate_closed_form(M, A) == target
        assert both_silent_aggregate_closed_form(M, A) == both


def _alt_both_aggregate(M, A):
    # 2|A| - sum_{i not in A} (1'(M_B)^{-1} 1 - [(M_B)^{-1}]_ii), B = A + {i}
    acc = TruncatedSeries.monomial(M.order, 0, 2 * len(A))
    for i in range(M.n):
        if i in A:
            continue
        B = [i] + list(A)
        inv = M.block(B, B).inverse()
        total = TruncatedSeries.zero(M.order)
        for r in range(len(B)):
            for c in range(len(B)):
                total = total + inv[r, c]
        acc = acc - (total - inv[0, 0])
    return acc


def test_alternative_both_aggregate_diverges_on_dyad():
    M = compute_M(dyad(), T)
    alt = _alt_both_aggregate(M, (1,))
    assert alt.evaluate(0.2) == pytest.approx(1 + 2 * 0.2, abs=1e-12)
    assert group_aggregates(M, (1,), 0.2)[2] == pytest.approx(0.2, abs=1e-12)


def test_intermediary_examples():
    P = compute_M(path3(), T)
    rep = intermediary_report(P, 0, 2, 0.18)
    assert rep.key_intermediary == 1
    e = rep.per_node[1]
    assert e.without_retrans == 0.0
    assert e.index == pytest.approx(0.18**2, abs=1e-12)
    K = compute_M(triangle(), T)
    assert ints(without_retransmission_series(K, 0, 1, 2)) == [0, 1] + [0] * (T - 1)
    iso = compute_M(Network.from_edges(3, [(0, 1)], directed=False), T)
    assert intermediary_report(iso, 0, 1, 0.3).per_node[2].index == pytest.approx(0.0, abs=1e-15)
    with pytest.raises(ValidationError):
        intermediary_report(compute_M(dyad(), T), 0, 1, 0.2)


def test_without_retransmission_identity(rng):
    for _ in range(40):
        n = int(rng.integers(3, 7))
        M = compute_M(random_undirected(rng, n, 0.5), T)
        i, j, k = (int(v) for v in rng.choice(n, 3, replace=False))
        B = [i, j, k]
        inv = M.block(B, B).inverse()
        assert without_retransmission_series(M, i, j, k) == -inv[0, 1]
        assert without_retransmission_series(M, i, j, k) == avoid_nodes_matrix(M, B)[i, j]


def _alt_third_node_form(M, i, j, k):
    m = M
    det = (
        m[i, i] * (m[j, j] * m[k, k] - m[j, k] * m[k, j])
        - m[i, j] * (m[j, i] * m[k, k] - m[j, k] * m[k, i])
        + m[i, k] * (m[j, i] * m[k, j] - m[j, j] * m[k, i])
    )
    return m[i, j] - (m[i, j] * m[k, k] - m[i, k] * m[j, k]) / det


def test_alternative_third_node_form_diverges():
    P = compute_M(path3(), T)
    assert without_retransmission_series(P, 0, 2, 1).is_zero()
    assert _alt_third_node_form(P, 0, 2, 1) == P[0, 2]
    K = compute_M(triangle(), T)
    x = TruncatedSeries.monomial(T, 1)
    assert _alt_third_node_form(K, 0, 1, 2) == K[0, 1] - x


def test_intermediary_properties(rng):
    for _ in range(10):
        n = int(rng.integers(3, 7))
        net = random_undirected(rng, n, 0.5)
        lam = spectral_bound(net)
        delta = 0.5 / lam if lam else 0.3
        M = compute_M(net, T)
        i, j = (int(v) for v in rng.choice(n, 2, replace=False))
        rep = intermediary_report(M, i, j, delta)
        both = target_centrality_pair(M, i, j, "both", delta)
        for k, e in rep.per_node.items():
            assert e.index >= -1e-12
            assert -1e-12 <= e.without_retrans <= both + 1e-12
        # argmax of the index and argmin of the blocked count agree
        lowest = min(rep.per_node, key=lambda k: (round(rep.per_node[k].without_retrans, 12), k))
        assert lowest == rep.key_intermediary


def test_tail_bound():
    assert horizon_tail_bound(triangle(), 0.25, 10) == pytest.approx(math.sqrt(3) * 0.5**11 / 0.5)
    assert horizon_tail_bound(triangle(), 0.5, 10) == math.inf


@pytest.mark.parametrize(
    "net, sender, targets, delta, mode",
    [
        (dyad(), 0, (1,), 0.2, "both"),
        (path3(), 0, (2,), 0.18, "both"),
        (path3(), 0, (2,), 0.18, "sender"),
        (path3(), 0, (2,), 0.18, "target"),
    ],
)
def test_monte_carlo_agreement(net, sender, targets, delta, mode):
    q = DiffusionQuery(sender, targets, delta, mode)
    analytic = target_centrality_group(compute_M(net, 30), q)
    mean, se = simulate_diffusion(net, q, 200_000, 30, seed=11)
    assert se < 5e-3
    assert abs(mean - analytic) <= 3 * se


def test_simulation_edge_cases():
    q = DiffusionQuery(0, (1,), 0.0)
    assert simulate_diffusion(dyad(), q, 100, 5, seed=1) == (0.0, 0.0)
    with pytest.raises(ConvergenceGuardError):
        simulate_diffusion(triangle(), DiffusionQuery(0, (1,), 0.5), 10, 5, seed=1)
    a = simulate_diffusion(path3(), DiffusionQuery(0, (2,), 0.3), 500, 10, seed=5)
    b = simulate_diffusion(path3(), DiffusionQuery(0, (2,), 0.3), 500, 10, seed=5)
    assert a == b
