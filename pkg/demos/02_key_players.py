# Which nodes or links hold the network together?
#
# Group intercentrality measures the discounted walks lost when a node set
# is deleted. Searching over all pairs can beat picking greedily.
#
# Run: python demos/02_key_players.py

from walkgf import Network, compute_M, group_intercentrality, key_group_search, key_link_search

path5 = Network.from_edges(5, [(0, 1), (1, 2), (2, 3), (3, 4)], directed=False)
x0 = 0.5

single = key_group_search(path5, 1, x0)
print("best single node:", single.best_set, round(single.objective_value, 6))

best = key_group_search(path5, 2, x0)
greedy = key_group_search(path5, 2, x0, mode="greedy")
print("best pair:       ", best.best_set, round(best.objective_value, 6))
print("greedy pair:     ", greedy.best_set, round(greedy.objective_value, 6))
print("(greedy locks in the centre first and never recovers)")

M = compute_M(path5, 10)
print("loss series for {1, 3}:", [int(c) for c in group_intercentrality(M, [1, 3]).coeffs])

link = key_link_search(path5, x0)
print("key link:", link.best_set, "ties broken to the smallest" if link.tie_policy_applied else "")
