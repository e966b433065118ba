"""
Regular infinite paths
======================

Eventually periodic paths are classified by searching for agreement pairs
whose F-set contains a whole cylinder around the path.
"""

from kgraphkit import corpus
from kgraphkit.infinite import ep_path, is_regular, regular_point_in, tm_path

G1e = corpus.get("G1e")
for head, cycle in [(None, ["c"]), (None, ["g"]), (["f"], ["g"])]:
    x = ep_path(G1e, G1e.path(head) if head else None, G1e.path(cycle))
    print(f"{str(x):12s}", is_regular(G1e, x).status)

# in G2 every periodic path has an entry; an aperiodic word is needed
G2 = corpus.get("G2")
a, b = G2.edge("a"), G2.edge("b")
print("a^inf:", is_regular(G2, ep_path(G2, None, a)).status)
tm = tm_path(G2, a, b)
print("Thue-Morse on (a, b):", is_regular(G2, tm).status)

# every cylinder of G2 up to length 3 meets a regular point
for mu in G2.paths_upto((3,)):
    assert regular_point_in(G2, mu) is not None
print("all", len(G2.paths_upto((3,))), "cylinders contain a regular point")
