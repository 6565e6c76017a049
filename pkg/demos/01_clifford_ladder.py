"""
Complex Clifford algebras as graded tensor powers
=================================================

C ⊕ C with the swap grading is the smallest algebra with an odd
self-adjoint unitary. Taking graded tensor powers of it reproduces the
period-two pattern of complex Clifford algebras: one full matrix block for
even k, two blocks for odd k.
"""

import numpy as np

from gradedvna import factor_decomposition
from gradedvna.graded import find_odd_symmetry, is_central
from gradedvna.presets import build_preset

# one generator: diag(1, -1), odd because the grading swaps the two entries
sp1 = build_preset("sp:1")
print("grading of sp:1:\n", sp1.gamma.real)

for k in range(1, 6):
    g = build_preset(f"clifford:{k}")
    rep = factor_decomposition(g.alg)
    print(f"k={k}  C^{g.hilbert_dim:<3d} {rep.type_label:12s} factor={rep.is_factor!s:5s} "
          f"central={is_central(g)!s:5s} profile={rep.profile}")

# the odd symmetry of Cl(2) anticommutes with the grading
u = find_odd_symmetry(build_preset("clifford:2"))
gam = build_preset("clifford:2").gamma
print("‖ΓuΓ + u‖ =", np.linalg.norm(gam @ u @ gam + u))
