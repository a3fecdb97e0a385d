import numpy as np
import pytest

from walkgf.graph import Network

FIXTURES = __import__("pathlib").Path(__file__).parent / "fixtures"


def random_digraph(rng, n, p=0.4):
    adj = (rng.random((n, n)) < p).astype(np.int8)
    np.fill_diagonal(adj, 0)
    return Network(adj, directed=True)


def random_undirected(rng, n, p=0.4):
    upper = np.triu((rng.random((n, n)) < p).astype(np.int8), 1)
    return Network(upper + upper.T, directed=False)


def random_subset(rng, items, nonempty=True):
    items = list(items)
    if not items:
        return ()
    mask = rng.random(len(items)) < 0.5
    if nonempty and not mask.any():
        mask[rng.integers(len(items))] = True
    return tuple(sorted(items[k] for k in np.nonzero(mask)[0]))


def planted_nested(rng, n_min=5, n_max=8, p=0.4):
    """Random undirected graph with a pair (i, j) whose closed neighborhoods nest.

    Start from a random graph, pick i and j adjacent, then rewire j so that
    N_j is a random subset of N_i plus i itself. T is drawn from the nodes
    outside both closed neighborhoods.
    """
    while True:
        n = int(rng.integers(n_min, n_max + 1))
        adj = np.array(random_undirected(rng, n, p).adjacency)
        i, j = (int(v) for v in rng.choice(n, size=2, replace=False))
        adj[i, j] = adj[j, i] = 1
        adj[j, :] = 0
        adj[:, j] = 0
        for l in np.nonzero(adj[i])[0]:
            if rng.random() < 0.5:
                adj[j, l] = adj[l, j] = 1
        adj[i, j] = adj[j, i] = 1
        free = [v for v in range(n) if v not in (i, j) and not adj[i, v] and not adj[j, v]]
        if free:
            T = random_subset(rng, free)
            return Network(adj, directed=False), i, j, T


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


def dyad():
    return Network.from_edges(2, [(0, 1)], directed=False)


def path3():
    return Network.from_edges(3, [(0, 1), (1, 2)], directed=False)


def triangle():
    return Network.from_edges(3, [(0, 1), (1, 2), (0, 2)], directed=False)


def star(leaves=3):
    return Network.from_edges(leaves + 1, [(0, k) for k in range(1, leaves + 1)], directed=False)


def empty(n):
    return Network(np.zeros((n, n), dtype=np.int8), directed=False)
