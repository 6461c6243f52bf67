"""Gaussian binomial coefficients, in two analytic continuations.

The standard binomial [m+n over m] vanishes unless both m and n are
nonnegative; it is the generating function of partitions in an m x n box.
The modified binomial keeps the product definition (q^{n+1}; q)_m / (q; q)_m
for every integer n, which stays a polynomial for n >= 0, vanishes for
n < 0 <= m+n, and becomes a Laurent polynomial when m+n < 0:

    (-1)^m q^(m(2n+m+1)/2) [ -n-1 over m ].

Both are exposed in (m, n) form and in [top over bottom] form.  Standard
binomials are memoized under the (min, max) symmetric key; the uncached
path is reachable for equivalence testing via _qbin_symmetric.__wrapped__.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Optional, Sequence, Tuple

from .qpoly import ONE, ZERO, QPoly, Truncation, exact_div, mul


@lru_cache(maxsize=None)
def _qbin_symmetric(lo: int, hi: int) -> QPoly:
    # [lo+hi over lo] via interleaved multiply/divide; every intermediate
    # prod_{k=1..j} (1-q^{hi+k})/(1-q^k) is itself a binomial, so exact
    out = ONE
    for k in range(1, lo + 1):
        out = mul(out, QPoly({0: 1, hi + k: -1}))
        out = exact_div(out, QPoly({0: 1, k: -1}))
    return out


def qbin_standard(m: int, n: int) -> QPoly:
    """[m+n over m]; zero unless m >= 0 and n >= 0."""
    if m < 0 or n < 0:
        return ZERO
    return _qbin_symmetric(min(m, n), max(m, n))


def qbin(top: int, bottom: int) -> QPoly:
    """Standard [top over bottom]."""
    return qbin_standard(bottom, top - bottom)


def qbin_modified(m: int, n: int) -> QPoly:
    """(q^{n+1}; q)_m / (q; q)_m for any integer n; zero for m < 0."""
    if m < 0:
        return ZERO
    if n >= 0:
        return qbin_standard(m, n)
    if m + n >= 0:
        return ZERO
    base = qbin(-n - 1, m)
    return base.times_monomial((-1) ** m, (m * (2 * n + m + 1)) // 2)


def qbin_mod_tb(top: int, bottom: int) -> QPoly:
    """Modified [top over bottom]."""
    return qbin_modified(bottom, top - bottom)


def qbin_vector(
    pairs: Sequence[Tuple[int, int]],
    variant: str = "standard",
    trunc: Optional[Truncation] = None,
) -> QPoly:
    """prod over (m_j, n_j) of [m_j + n_j over m_j]; empty input gives 1."""
    if variant == "standard":
        factor_of = qbin_standard
    elif variant == "modified":
        factor_of = qbin_modified
    else:
        raise ValueError(f"unknown variant {variant!r}")
    out = ONE
    for mj, nj in pairs:
        factor = factor_of(mj, nj)
        if factor.is_zero():
            return ZERO
        out = mul(out, factor, trunc)
    return out


def qbin_cache_clear() -> None:
    _qbin_symmetric.cache_clear()
