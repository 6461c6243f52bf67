"""Terminating balanced sums: generic agreement and the exceptional window.

The doubly bounded column sum equals a single product of binomials on most
of the integer box, but inside a small window the sum telescopes to zero
while the closed form stays alive.  Both behaviours are shown exactly.
"""

from fractions import Fraction

from qident.qpoly import render
from qident.saalschutz import (
    ClassicParams,
    SaalschutzParams,
    gensum_lhs,
    gensum_rhs,
    qs2_exceptional,
    qs2_lhs,
    qs2_rhs,
)

print("classic sum on generic points:")
for l1, l2, m, ell in [(3, 2, 2, 1), (4, 4, 3, -2), (2, 5, 1, 0)]:
    p = ClassicParams(l1, l2, m, ell)
    lhs, rhs = qs2_lhs(p), qs2_rhs(p)
    print(f"  L1={l1} L2={l2} M={m} ell={ell:2d}   equal={lhs == rhs}")

print()
print("exceptional window (sum vanishes, product does not):")
for l1, l2, m, ell in [(-1, 1, 1, -1), (-2, 2, 3, -2), (1, -1, 2, 1)]:
    p = ClassicParams(l1, l2, m, ell)
    assert qs2_exceptional(p)
    print(
        f"  L1={l1} L2={l2} M={m} ell={ell:2d}   lhs={render(qs2_lhs(p))}"
        f"   rhs={render(qs2_rhs(p))}"
    )

print()
print("rank-N refinement, including half-odd bounds at sigma=1:")
points = [
    (1, 0, 0, 2, 2, 3),
    (2, 0, 2, 3, Fraction(3), Fraction(2)),
    (2, 1, 0, 2, Fraction(3, 2), Fraction(5, 2)),
    (3, 0, -2, 1, 2, 4),
]
for n, sigma, ell, m, l1, l2 in points:
    sp = SaalschutzParams(n, sigma, ell, m, l1, l2)
    sp.validate()
    same = gensum_lhs(sp) == gensum_rhs(sp)
    print(f"  N={n} sigma={sigma} ell={ell:2d} M={m} L1={l1} L2={l2}   equal={same}")
