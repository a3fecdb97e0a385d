import json
import math

import numpy as np
import pytest

from walkgf.errors import ConvergenceGuardError, EmptyGraphError, ValidationError
from walkgf.graph import (
    InterventionSpec,
    Network,
    apply_intervention,
    check_convergence,
    load_network,
    out_neighbors,
    power_iteration_bound,
    read_network,
    remove_nodes,
    spectral_bound,
    undirected_links,
)

from conftest import FIXTURES, dyad, empty, path3, random_digraph, random_undirected, star, triangle


def test_load_examples():
    d = load_network({"n": 2, "directed": False, "edges": [[0, 1]]})
    assert d.adjacency[0, 1] == d.adjacency[1, 0] == 1
    p = load_network({"n": 3, "directed": True, "edges": [[0, 1], [1, 2]]})
    assert p.links() == ((0, 1), (1, 2))
    assert not p.is_symmetric()


@pytest.mark.parametrize(
    "doc",
    [
        {"n": 2, "edges": [[0, 0]]},
        {"n": 2, "edges": [[0, 2]]},
        {"n": 3, "edges": [[0, 1], [1, 0]]},
        {"n": 3, "directed": True, "edges": [[0, 1], [0, 1]]},
        {"n": 2, "edges": [[1, 2]], "index_base": 0},
    ],
)
def test_load_rejects(doc):
    with pytest.raises(ValidationError):
        load_network(doc)


def test_index_base_one():
    net = read_network(FIXTURES / "digraph.json")
    assert net.directed and net.n == 4
    assert net.has_link(0, 1) and net.has_link(3, 1) and not net.has_link(1, 0)


def test_network_rejects_bad_adjacency():
    with pytest.raises(ValidationError):
        Network([[1, 0], [0, 0]])
    with pytest.raises(ValidationError):
        Network([[0, 2], [0, 0]])
    with pytest.raises(ValidationError):
        Network([[0, 1], [0, 0]], directed=False)


def test_out_neighbors():
    assert out_neighbors(dyad(), 0) == (1,)
    assert out_neighbors(empty(3), 2) == ()
    assert out_neighbors(path3(), 1) == (0, 2)


def test_apply_intervention_examples():
    both = ((0, 1), (1, 0))
    assert apply_intervention(dyad(), InterventionSpec(remove=both)) == empty(2)
    assert apply_intervention(empty(2), InterventionSpec(add=both)) == dyad()
    out = apply_intervention(path3(), InterventionSpec(remove=both, add=((0, 2), (2, 0))))
    assert out == Network.from_edges(3, [(1, 2), (0, 2)], directed=False)


def test_intervention_validation():
    with pytest.raises(ValidationError):
        apply_intervention(dyad(), InterventionSpec(add=((0, 1),)))
    with pytest.raises(ValidationError):
        apply_intervention(empty(2), InterventionSpec(remove=((0, 1),)))
    with pytest.raises(ValidationError):
        InterventionSpec(remove=((0, 1),), add=((0, 1),))


def test_intervention_round_trip(rng):
    for _ in range(20):
        net = random_undirected(rng, 6)
        rem = [e for e in net.edges() if rng.random() < 0.3]
        add = [(i, j) for i in range(6) for j in range(i + 1, 6) if not net.has_link(i, j) and rng.random() < 0.3]
        spec = InterventionSpec(remove=undirected_links(rem), add=undirected_links(add))
        assert apply_intervention(apply_intervention(net, spec), spec.reversed()) == net
    for _ in range(20):
        net = random_digraph(rng, 6)
        absent = [(i, j) for i in range(6) for j in range(6) if i != j and not net.has_link(i, j)]
        spec = InterventionSpec(
            remove=tuple(l for l in net.links() if rng.random() < 0.3),
            add=tuple(l for l in absent if rng.random() < 0.3),
        )
        assert apply_intervention(apply_intervention(net, spec), spec.reversed()) == net


def test_remove_nodes_examples():
    sub, keep = remove_nodes(path3(), [1])
    assert keep == (0, 2) and sub == empty(2)
    sub, keep = remove_nodes(triangle(), [2])
    assert sub == dyad()
    sub, keep = remove_nodes(dyad(), [])
    assert sub == dyad() and keep == (0, 1)
    with pytest.raises(EmptyGraphError):
        remove_nodes(dyad(), [0, 1])


def test_spectral_examples():
    assert abs(spectral_bound(dyad()) - 1.0) < 1e-9
    assert abs(spectral_bound(triangle()) - 2.0) < 1e-9
    assert abs(spectral_bound(star(3)) - math.sqrt(3)) < 1e-8
    assert spectral_bound(empty(4)) == 0.0
    assert not power_iteration_bound(star(3)).approximate


def test_spectral_against_eigvalsh(rng):
    for _ in range(30):
        net = random_undirected(rng, 7)
        lam = float(np.linalg.eigvalsh(net.adjacency.astype(float)).max())
        assert abs(spectral_bound(net) - lam) < 1e-6


def test_spectral_interlacing(rng):
    for _ in range(20):
        net = random_undirected(rng, 7)
        sub, _ = remove_nodes(net, [int(rng.integers(7))])
        assert spectral_bound(sub) <= spectral_bound(net) + 1e-9


def test_iteration_cap_is_conservative():
    net = random_undirected(np.random.default_rng(3), 8, 0.5)
    res = power_iteration_bound(net, tol=0.0, max_iter=3)
    assert res.approximate
    assert res.value >= float(np.linalg.eigvalsh(net.adjacency.astype(float)).max()) - 1.0


def test_convergence_guard():
    assert check_convergence(dyad(), 0.5) == pytest.approx(1.0)
    with pytest.raises(ConvergenceGuardError) as err:
        check_convergence(triangle(), 0.5)
    assert "0.5" in str(err.value) and err.value.bound == pytest.approx(0.5)
    assert check_convergence(empty(3), 10.0) == math.inf


def test_fixture_documents_parse():
    for path in FIXTURES.glob("*.json"):
        doc = json.loads(path.read_text())
        assert read_network(path).n == doc["n"]
