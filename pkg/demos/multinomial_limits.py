"""Refined multinomials: the two sum forms, classical limits, differences."""

import math
from fractions import Fraction

from qident.multinom import (
    MultinomialQuery,
    classical_limit,
    classical_multinomial,
    difference_sides,
    t_multinomial,
    tnew_rhs,
)
from qident.qpoly import render

# the base form and its rewrite agree point by point; sigma follows L's parity
print("two routes to the same polynomial:")
for n, l, ell in [(2, 2, 2), (3, 3, 1), (4, 2, -4)]:
    base = t_multinomial(MultinomialQuery(n, l, Fraction(ell, 2)))
    rewrite = tnew_rhs(n, l, ell, l % 2)
    print(f"  N={n} L={l} ell={ell:2d}  equal={base == rewrite}")

q = MultinomialQuery(3, 3, Fraction(1, 2))
print()
print("N=3 L=3 a=1/2:", render(t_multinomial(q)))

# at q=1 the refinement collapses to the coefficient of x^{a+NL/2}
# in (1 + x + ... + x^N)^L
print()
print("classical limit check:")
for n, l, twoa in [(2, 4, 0), (3, 3, 3), (4, 5, -2)]:
    a = Fraction(twoa, 2)
    got = classical_limit(t_multinomial(MultinomialQuery(n, l, a)))
    want = classical_multinomial(n, l, a)
    print(f"  N={n} L={l} a={a}   q->1 value {got}  direct count {want}")
    assert got == want

# interior difference identity; both sides expand to the same polynomial
print()
lhs, rhs = difference_sides(3, 4, 3, 1)
print("difference identity at N=3 L=4 ell=3 n=1:", lhs == rhs)
print("  shared value:", render(lhs))

# binomial sanity: N=1 reduces to a plain binomial count at q=1
val = classical_limit(t_multinomial(MultinomialQuery(1, 5, Fraction(1, 2))))
print()
print("N=1 L=5 a=1/2 at q=1:", val, "== C(5,3):", val == math.comb(5, 3))
