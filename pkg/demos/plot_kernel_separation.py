"""
Kernels of the two representations
==================================

On a loop the aperiodic representation kills S_v S_e^* - P_v while the
twisted one keeps it apart through its graded components.
"""

import numpy as np

from kgraphkit import corpus
from kgraphkit.combos import GeneratorCombo
from kgraphkit.infinite import ep_path
from kgraphkit.model import build_basis, eval_Upsilon, eval_upsilon, verify_CK

G1 = corpus.get("G1")
v, e = G1.vertex("v"), G1.edge("e")
B = build_basis(G1, [ep_path(G1, None, e)])
print("CK on the basis:", verify_CK(B, (1,)))

c = GeneratorCombo.gen(G1, v, e) - GeneratorCombo.P(G1, v)
print("upsilon(c) is zero:", eval_upsilon(c, B).is_zero())
big = eval_Upsilon(c, B)
for d, op in sorted(big.components.items()):
    print("  component", d, op.toarray().ravel())

# evaluating the components at z recovers h_{-1}(z) - 1
for z in (1, 1j, -1):
    val = big.evaluate((z,)).toarray()[0, 0]
    print(f"  z={z}: {val}  (expected {np.conj(z) - 1})")
