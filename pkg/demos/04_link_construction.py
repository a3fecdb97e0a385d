# Where should a newcomer group be attached?
#
# When j's closed neighbourhood sits inside i's, wiring a set T to i gives
# at least as many walks of every length (from every node but j) as wiring
# it to j.
#
# Run: python demos/04_link_construction.py

from walkgf import Network, check_nestedness, compare_constructions

# 0 is a hub; 1 is a follower who only knows 0 and 2; 4, 5 are newcomers
net = Network.from_edges(6, [(0, 1), (0, 2), (0, 3), (1, 2)], directed=False)
print("N(1) inside N(0):", check_nestedness(net, 0, 1))

v = compare_constructions(net, 0, 1, [4, 5], order=10)
print("attach to 0 beats attach to 1:", v.all_hold)

w = compare_constructions(net, 1, 0, [4, 5], order=10)
print("the reverse:", w.all_hold, "- first failure:", w.counterexample)
