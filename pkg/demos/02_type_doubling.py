"""
Graded versus ordinary tensor products
======================================

For two central graded algebras that are not factors, each of the form
M_n ⊕ M_n with the blocks swapped by the grading, the graded tensor product
is a single matrix block of size 2mn. The ordinary tensor product of the same
algebras splits into four blocks of size mn.
"""

from gradedvna import factor_decomposition
from gradedvna.presets import build_preset
from gradedvna.tensor import abelian_grid, graded_tensor, ordinary_tensor

for m, n in [(1, 1), (2, 1), (2, 2), (2, 3)]:
    g1, g2 = build_preset(f"sp:{m}"), build_preset(f"sp:{n}")
    graded = factor_decomposition(graded_tensor(g1, g2).result.alg)
    ordinary = factor_decomposition(ordinary_tensor(g1, g2))
    print(f"sp:{m} ⊗̂ sp:{n}: {graded.type_label:6s} | ordinary: {ordinary.type_label}")

# a witness for the 12 = 2·2·3 count: equivalent abelian projections summing to I
grid = abelian_grid(build_preset("sp:2"), build_preset("sp:3"))
print(len(grid.projections), "abelian projections; checks:", grid.checks)
print("ranks:", sorted({h.rank for h in grid.projections}))
