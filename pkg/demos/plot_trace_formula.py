"""
Generalized traces and the homological trace formula
=====================================================

For an elliptic u, the alternating trace of u on the homology of the lattice
with coefficients in M is the sum of generalized traces over the
coinvariant classes.
"""

from weylkit import DeltaGroup, FiniteDim, Free, Induced, DirectSum, Twist
from weylkit import verify_trace_formula, homology
from weylkit.cyclotomic import Cyc

G = DeltaGroup([[0, -1], [1, -1]])  # Coxeter element of A2
triv = FiniteDim([[[1]], [[1]]], [[1]])
rep = verify_trace_formula(triv, G)
print(rep.lhs, rep.rhs, rep.equal)
for lam, v in rep.terms:
    print(lam, v)

###############################################################################
# Homology degrees and their u-traces.

for j, h in enumerate(homology(G, triv)):
    print(j, h.dim, h.trace())

###############################################################################
# Sums, twists and induced modules behave the same way.

zeta3 = Cyc(3, [0, 1])
M = DirectSum([Twist(triv, zeta3), Free([[zeta3]]), Induced([[3, 0], [0, 3]], triv)])
print(verify_trace_formula(M, G).equal)
