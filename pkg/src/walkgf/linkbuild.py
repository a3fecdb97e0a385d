"""Comparing two ways of wiring a node set ``T`` into an undirected network.

Connecting ``T`` to ``i`` gives the network G_hat, connecting it to ``j``
gives G_ring. When the closed neighborhood of ``j`` sits inside that of
``i``, every walk count of G_hat dominates the matching one of G_ring.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, NamedTuple

from .calculus import compute_M
from .errors import ValidationError
from .graph import InterventionSpec, Network, apply_intervention, link_set, node_set, out_neighbors
from .series import TruncatedSeries

__all__ = [
    "Counterexample",
    "DominanceVerdict",
    "check_nestedness",
    "star_links",
    "exact_pass_series",
    "compare_constructions",
]


def _require_undirected(net: Network) -> None:
    if net.directed or not net.is_symmetric():
        raise ValidationError("operation requires an undirected network")


def check_nestedness(net: Network, i: int, j: int) -> bool:
    """True iff ``N_j + {j}`` is contained in ``N_i + {i}``."""
    _require_undirected(net)
    if i == j:
        raise ValidationError("i and j must differ")
    closed_i = set(out_neighbors(net, i)) | {i}
    closed_j = set(out_neighbors(net, j)) | {j}
    return closed_j <= closed_i


def star_links(hub: int, T: Iterable[int]) -> tuple:
    """Both orientations of every link between ``hub`` and ``T``."""
    return link_set([(hub, k) for k in T] + [(k, hub) for k in T])


def _hub_of(L: tuple) -> tuple:
    if not L:
        raise ValidationError("link set is empty")
    pairs = {frozenset(l) for l in L}
    if set(L) != {(a, b) for a, b in L} | {(b, a) for a, b in L}:
        raise ValidationError("link set must contain both orientations of each link")
    common = frozenset.intersection(*pairs)
    if not common:
        raise ValidationError("links do not share a hub node")
    hub = min(common)
    spokes = tuple(sorted(next(iter(p - {hub})) for p in pairs))
    return hub, spokes


def exact_pass_series(net_hat: Network, L: Iterable, max_passes: int, order: int, hub: int | None = None) -> dict:
    """Series of walks from each source using links of the hub star ``L`` exactly ``p`` times.

    Level 0 is the row sums of ``M`` for the base network ``net_hat - L``;
    higher levels follow the first-pass recursion::

        W^(p+1)_k = x * sum_{l in T} ( m_k,hub W^(p)_l + m_k,l W^(p)_hub )

    Returns ``{(p, source): series}`` for ``p = 0..max_passes``.
    """
    _require_undirected(net_hat)
    L = link_set(L, net_hat.n)
    h, spokes = _hub_of(L)
    if hub is not None:
        if len(spokes) == 1 and hub in (h, spokes[0]):
            h, spokes = hub, ((spokes[0] if hub == h else h),)
        elif hub != h:
            raise ValidationError(f"node {hub} is not the hub of the link set")
    missing = [l for l in L if not net_hat.has_link(*l)]
    if missing:
        raise ValidationError(f"links {missing} are not in the network")
    if max_passes < 0:
        raise ValidationError("max_passes must be non-negative")
    base = apply_intervention(net_hat, InterventionSpec(remove=L))
    M = compute_M(base, order)
    n = net_hat.n
    x = TruncatedSeries.monomial(order, 1)
    level = M.row_sums()
    out = {(0, k): level[k] for k in range(n)}
    for p in range(1, max_passes + 1):
        nxt = []
        for k in range(n):
            acc = TruncatedSeries.zero(order)
            for l in spokes:
                acc = acc + M[k, h] * level[l] + M[k, l] * level[h]
            nxt.append(x * acc)
        level = nxt
        out.update({(p, k): level[k] for k in range(n)})
    return out


class Counterexample(NamedTuple):
    scope: object  # node index, "pair" or "total"
    length: int
    hat: object
    ring: object


@dataclass
class DominanceVerdict:
    nested: bool
    per_node: dict = field(default_factory=dict)
    pair_sum: bool = True
    aggregate: bool = True
    node_j: bool = True
    counterexample: Counterexample | None = None
    order: int = 0

    @property
    def all_hold(self) -> bool:
        return all(self.per_node.values()) and self.pair_sum and self.aggregate


def _first_violation(a: TruncatedSeries, b: TruncatedSeries):
    for t, (u, v) in enumerate(zip(a.coeffs, b.coeffs)):
        if u < v:
            return t, u, v
    return None


def compare_constructions(net: Network, i: int, j: int, T_set: Iterable[int], order: int) -> DominanceVerdict:
    """Row-sum dominance of G + links(i, T) over G + links(j, T), up to ``order``.

    ``node_j`` reports the comparison at ``j`` itself for information only;
    no dominance is claimed there.
    """
    _require_undirected(net)
    if i == j:
        raise ValidationError("i and j must differ")
    T_set = node_set(T_set, net.n)
    blocked = set(out_neighbors(net, i)) | set(out_neighbors(net, j)) | {i, j}
    if blocked & set(T_set):
        raise ValidationError("T_set must avoid i, j and their neighbors")
    nested = check_nestedness(net, i, j)
    hat = apply_intervention(net, InterventionSpec(add=star_links(i, T_set)))
    ring = apply_intervention(net, InterventionSpec(add=star_links(j, T_set)))
    b_hat = compute_M(hat, order).row_sums()
    b_ring = compute_M(ring, order).row_sums()
    verdict = DominanceVerdict(nested=nested, order=order)
    failures = []
    for l in range(net.n):
        ok = b_hat[l].dominates(b_ring[l])
        if l == j:
            verdict.node_j = ok
            continue
        verdict.per_node[l] = ok
        if not ok:
            failures.append((l, _first_violation(b_hat[l], b_ring[l])))
    pair_hat, pair_ring = b_hat[i] + b_hat[j], b_ring[i] + b_ring[j]
    verdict.pair_sum = pair_hat.dominates(pair_ring)
    if not verdict.pair_sum:
        failures.append(("pair", _first_violation(pair_hat, pair_ring)))
    tot_hat = sum(b_hat[1:], b_hat[0])
    tot_ring = sum(b_ring[1:], b_ring[0])
    verdict.aggregate = tot_hat.dominates(tot_ring)
    if not verdict.aggregate:
        failures.append(("total", _first_violation(tot_hat, tot_ring)))
    if failures:
        scope, (t, u, v) = failures[0]
        verdict.counterexample = Counterexample(scope, t, u, v)
    return verdict
