# Walk counts as exact power series, and what happens when nodes are avoided.
#
# Run: python demos/01_walk_counts.py

import numpy as np

from walkgf import Network, compute_M, avoid_nodes_matrix, through_nodes_matrix
from walkgf.oracle import Restriction, enumerate_walks

# a small "house": square 0-1-2-3 with a roof node 4 over the edge 2-3
net = Network.from_edges(5, [(0, 1), (1, 2), (2, 3), (3, 0), (2, 4), (3, 4)], directed=False)
T = 8
M = compute_M(net, T)

print("walks 0 -> 4 by length:", [int(c) for c in M[0, 4].coeffs])

# same numbers from brute force
table = enumerate_walks(net, Restriction.unrestricted(), T)
print("brute force:           ", table[0, 4])

# walks 0 -> 4 that never pass through node 2 on the way
avoid = avoid_nodes_matrix(M, [2])
print("avoiding node 2:       ", [int(c) for c in avoid[0, 4].coeffs])
print("through node 2:        ", [int(c) for c in through_nodes_matrix(M, [2])[0, 4].coeffs])

# the series converge to (I - xG)^{-1} for small x
x0 = 0.2
exact = np.linalg.inv(np.eye(5) - x0 * net.adjacency)
print("partial sum to x^8:    ", round(M[0, 4].evaluate(x0), 8))
print("partial sum to x^40:   ", round(compute_M(net, 40)[0, 4].evaluate(x0), 8), "vs", round(exact[0, 4], 8))
