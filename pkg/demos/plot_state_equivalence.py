"""
States along a regular path
===========================

psi_{z,x} depends on z only through the characters in H_x.
"""

from kgraphkit import corpus
from kgraphkit.combos import GeneratorCombo
from kgraphkit.infinite import ep_path, tm_path
from kgraphkit.states import compute_Hx, psi_eval, states_equiv

C2 = corpus.get("C2")
x = ep_path(C2, None, C2.path(["p", "q"]))
print("H_x on C2:", sorted(compute_Hx(C2, x, (4,)).diffs))
c = GeneratorCombo.gen(C2, C2.vertex(x.rng), C2.path(["p", "q"]))
for z in (1, 1j, -1, -1j):
    print(f"  psi at z={z}:", psi_eval(C2, (z,), x, c))
print("z=i vs z=-i equivalent:", states_equiv(C2, (1j,), (-1j,), x, (3,)))

G2 = corpus.get("G2")
y = tm_path(G2, G2.edge("a"), G2.edge("b"))
print("H_x on G2:", sorted(compute_Hx(G2, y, (4,)).diffs))
print("every z gives the same state:", states_equiv(G2, (1,), (1j,), y, (4,)))
