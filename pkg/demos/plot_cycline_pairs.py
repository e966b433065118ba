"""
Cycline pairs on small k-graphs
===============================

Which pairs of paths generate the same cylinder after every common extension?
"""

from kgraphkit import corpus
from kgraphkit.cycline import cycline_bruteforce, cycline_report, enumerate_cycline, per_group

# a single loop: every pair (e^m, e^n) is cycline
G1 = corpus.get("G1")
pairs = enumerate_cycline(G1, (2,))
print("G1 cycline pairs up to length 2:", len(pairs))
print("Per(G1) within 3:", sorted(per_group(G1, (3,)).elements))

# two loops at one vertex: only the diagonal survives
G2 = corpus.get("G2")
print("G2 nontrivial pairs:", sum(1 for a, b in enumerate_cycline(G2, (2,)) if a != b))

# TWIST hides the failure of (e, v) in the second color
TW = corpus.get("TWIST")
e, v = TW.edge("e"), TW.vertex("v")
rep = cycline_report(TW, e, v)
print("TWIST (e, v):", rep.decided, "rounds:", rep.gfp_rounds)
print("  brute force to depth (3, 3):", cycline_bruteforce(TW, e, v, (3, 3)))

# the pullback of a 2-cycle along f(n) = n1 + 2 n2
P = corpus.get("P1_C2_12")
print("P1_C2_12 Per:", sorted(per_group(P, (2, 2)).elements))
