"""
A tour of the symmetric pairing
===============================

The TEST curve y^2 = x^3 + x over F_43 has 44 points.  The generator P spans
a subgroup of order 11, and the pairing sends it into the 11th roots of unity
inside F_43^2.
"""
from tmis_workbench.algebra import distortion_map, g1_scalar_mul, gt_pow, pairing
from tmis_workbench.params import TEST

P = TEST.generator
print("P =", P)
print("11 * P is infinity:", g1_scalar_mul(11, P).is_infinity)

# The distortion map moves P off the F_p-rational points, which is what makes
# e(P, P) non-trivial.
print("phi(P) =", distortion_map(P))

g = pairing(P, P)
print("e(P, P) =", g)
print("powers of e(P, P):", [str(gt_pow(g, k).value) for k in range(11)])

###############################################################################
# Bilinearity: e(aP, bP) = e(P, P)^(ab), here for a = 3, b = 7.
a, b = 3, 7
lhs = pairing(g1_scalar_mul(a, P), g1_scalar_mul(b, P))
print("e(3P, 7P) == e(P, P)^21:", lhs == gt_pow(g, a * b))
