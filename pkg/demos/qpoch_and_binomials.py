"""Exact q-factorials and Gaussian binomials, rendered as honest polynomials."""

from qident.qpoly import mul, qpoch, render
from qident.qbinom import qbin, qbin_mod_tb

print("q-shifted factorials (q^s; q)_m:")
for s, m in [(1, 2), (1, 4), (0, 1), (-2, 1)]:
    print(f"  (s={s:2d}, m={m})  ->  {render(qpoch(s, m))}")

print()
print("Gaussian binomials [top over bottom]:")
for top, bottom in [(4, 2), (5, 2), (0, 0), (2, 3)]:
    print(f"  [{top} over {bottom}]  ->  {render(qbin(top, bottom))}")

# the modified binomial extends the top entry below zero; the standard one
# vanishes there, which is exactly the distinction the sweeps rely on
print()
print("modified vs standard at negative top entries:")
for top, bottom in [(-1, 2), (-2, 1), (-3, 3)]:
    print(
        f"  [{top} over {bottom}]  standard={render(qbin(top, bottom))}"
        f"  modified={render(qbin_mod_tb(top, bottom))}"
    )

print()
lhs = mul(qbin(4, 2), qpoch(1, 2))
print("a product, fully expanded:", render(lhs))
