# Passing a message along a network where some people stay quiet.
#
# A sender's message is forwarded along each link with probability delta.
# Silent nodes receive copies but do not pass them on. The expected number
# of copies a target receives has a closed form; the simulation agrees.
#
# Run: python demos/03_diffusion.py

from walkgf import DiffusionQuery, Mode, Network, compute_M, intermediary_report, simulate_diffusion
from walkgf.diffusion import target_centrality_group

net = Network.from_edges(6, [(0, 1), (0, 2), (1, 3), (2, 3), (3, 4), (4, 5), (2, 4)], directed=False)
delta = 0.2
M = compute_M(net, 24)

for mode in Mode:
    q = DiffusionQuery(0, (5,), delta, mode)
    analytic = target_centrality_group(M, q)
    mean, se = simulate_diffusion(net, q, reps=50_000, horizon=30, seed=1)
    print(f"{mode.value:>6}-silent: analytic {analytic:.5f}, simulated {mean:.5f} +/- {se:.5f}")

rep = intermediary_report(M, 0, 5, delta)
print("key intermediary between 0 and 5:", rep.key_intermediary)
for k, e in sorted(rep.per_node.items()):
    print(f"  node {k}: index {e.index:.5f}")
