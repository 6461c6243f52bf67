"""Polynomial Saalschutz-type summations and the Sears transform.

Four families live here.  qs2 is the classical two-binomial summation
with its known exceptional region, qcv the Chu-Vandermonde corollary,
sears the balanced transformation evaluated with modified binomials over
exactly derived bilateral windows, and gensum the lattice generalization
whose inner sums run over admissible (m,n)- and (mu,eta)-systems.

All gensum binomials are standard.  Binomial top entries of the form
L + m1/2 are checked for integrality: the parameter constraints make a
fractional top impossible, so hitting one raises InvalidParams rather
than silently dropping a term.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .errors import InvalidParams, UnbalancedParameters
from .lattice import axis_source, cartan, enumerate_admissible
from .qbinom import qbin, qbin_mod_tb, qbin_vector
from .qpoly import ONE, ZERO, QPoly, mul

Rational = Union[int, Fraction]


@dataclass(frozen=True)
class ClassicParams:
    L1: int
    L2: int
    M: int
    ell: int


def _norm_rat(x: Rational) -> Rational:
    f = Fraction(x)
    return f.numerator if f.denominator == 1 else f


@dataclass(frozen=True)
class SaalschutzParams:
    N: int
    sigma: int
    ell: int
    M: int
    L1: Rational
    L2: Rational

    def __post_init__(self) -> None:
        object.__setattr__(self, "L1", _norm_rat(self.L1))
        object.__setattr__(self, "L2", _norm_rat(self.L2))

    def validate(self) -> None:
        if self.N < 1:
            raise InvalidParams("N must be >= 1")
        if self.sigma not in (0, 1):
            raise InvalidParams("sigma must be 0 or 1")
        if (self.ell + self.sigma * self.N) % 2:
            raise InvalidParams("ell + sigma*N must be even")
        half = Fraction(self.ell + self.sigma, 2)
        for name, L in (("L1", self.L1), ("L2", self.L2)):
            if L < 0:
                raise InvalidParams(f"{name} must be >= 0")
            if (Fraction(L) + half).denominator != 1:
                raise InvalidParams(f"{name} + (ell+sigma)/2 must be an integer")


def _int_top(top: Rational) -> int:
    f = Fraction(top)
    if f.denominator != 1:
        raise InvalidParams(f"non-integral binomial entry {top}")
    return f.numerator


# --- classical summation ----------------------------------------------------

def qs2_lhs(p: ClassicParams) -> QPoly:
    total = ZERO
    for i in range(0, p.M + 1):
        term = qbin(p.L1 + p.L2 + p.M - i, p.M - i)
        if term.is_zero():
            continue
        term = mul(term, qbin(p.L1, i + p.ell))
        if term.is_zero():
            continue
        term = mul(term, qbin(p.L2, i))
        if term.is_zero():
            continue
        total = total + term.times_monomial(1, i * (i + p.ell))
    return total


def qs2_rhs(p: ClassicParams) -> QPoly:
    return mul(qbin(p.L1 + p.M, p.M + p.ell), qbin(p.L2 + p.M + p.ell, p.M))


def qs2_exceptional(p: ClassicParams) -> bool:
    first = -p.L1 <= -p.ell <= p.L2 < 0 <= p.M
    second = -p.L2 <= p.ell <= p.L1 < 0 <= p.M + p.ell
    return first or second


def qcv_lhs(p: ClassicParams) -> QPoly:
    total = ZERO
    for i in range(0, p.L2 + 1):
        term = mul(qbin(p.L1, i + p.ell), qbin(p.L2, i))
        if not term.is_zero():
            total = total + term.times_monomial(1, i * (i + p.ell))
    return total


def qcv_rhs(p: ClassicParams) -> QPoly:
    return qbin(p.L1 + p.L2, p.L1 - p.ell)


def qcv_exceptional(p: ClassicParams) -> bool:
    """M-free caveat: the column sum vanishes while the closed form may not."""
    first = -p.L1 <= -p.ell <= p.L2 < 0
    second = -p.L2 <= p.ell <= p.L1 < 0
    return first or second


# --- Sears transform ---------------------------------------------------------

def _check_balance(a: int, b: int, c: int, d: int, e: int, f: int, g: int) -> None:
    if a + b != c + d + f:
        raise UnbalancedParameters(f"a+b must equal c+d+f, got {a + b} != {c + d + f}")


def sears_lhs(a: int, b: int, c: int, d: int, e: int, f: int, g: int) -> QPoly:
    """sum_i q^{i(i-a+e+g)} [i+a, a][b-i, c-i][d, i+e][f, i+g], modified."""
    _check_balance(a, b, c, d, e, f, g)
    total = ZERO
    # the bottom entries a (fixed), c-i, i+e, i+g must all be >= 0
    if a < 0:
        return total
    for i in range(max(-e, -g), c + 1):
        term = qbin_mod_tb(i + a, a)
        if term.is_zero():
            continue
        for top, bottom in ((b - i, c - i), (d, i + e), (f, i + g)):
            term = mul(term, qbin_mod_tb(top, bottom))
            if term.is_zero():
                break
        else:
            total = total + term.times_monomial(1, i * (i - a + e + g))
    return total


def sears_rhs(a: int, b: int, c: int, d: int, e: int, f: int, g: int) -> QPoly:
    """sum_i q^{i(i-a+e+g)} [a-g, a-g-i][b-d+e, c-i][c+d-i, c+e][i+f, i+g]."""
    _check_balance(a, b, c, d, e, f, g)
    total = ZERO
    if c + e < 0:
        return total
    for i in range(-g, min(a - g, c) + 1):
        term = qbin_mod_tb(a - g, a - g - i)
        if term.is_zero():
            continue
        for top, bottom in ((b - d + e, c - i), (c + d - i, c + e), (i + f, i + g)):
            term = mul(term, qbin_mod_tb(top, bottom))
            if term.is_zero():
                break
        else:
            total = total + term.times_monomial(1, i * (i - a + e + g))
    return total


# --- lattice generalization ----------------------------------------------------

def gensum_lhs(p: SaalschutzParams) -> QPoly:
    p.validate()
    cd = cartan(p.N)
    l12 = _int_top(Fraction(p.L1) + Fraction(p.L2))
    total = ZERO
    for i in range(0, p.M + 1):
        outer = qbin(l12 + p.M - i, p.M - i)
        if outer.is_zero():
            continue
        v = axis_source(cd.rank, [(1, 2 * i + p.ell)])
        offset = Fraction(2 * i + p.ell + p.sigma * p.N, 2 * p.N)
        inner = ZERO
        for sol in enumerate_admissible(cd, v, offset):
            m1 = sol.m_vec[0] if cd.rank else 0
            b1 = qbin(_int_top(p.L1 + Fraction(m1, 2)), i + p.ell)
            if b1.is_zero():
                continue
            b2 = qbin(_int_top(p.L2 + Fraction(m1, 2)), i)
            if b2.is_zero():
                continue
            term = mul(mul(b1, b2), qbin_vector(tuple(zip(sol.m_vec, sol.n_vec))))
            if term.is_zero():
                continue
            inner = inner + term.times_monomial(1, cd.qform(sol.n_vec))
        if inner.is_zero():
            continue
        total = total + mul(outer, inner).times_monomial(1, Fraction(i * (i + p.ell), p.N))
    return total


def gensum_rhs(p: SaalschutzParams) -> QPoly:
    p.validate()
    cd = cartan(p.N)
    v = axis_source(cd.rank, [(1, p.M + p.ell), (cd.rank, p.M)])
    offset = Fraction(p.ell + p.sigma * p.N, 2 * p.N)
    total = ZERO
    for sol in enumerate_admissible(cd, v, offset):
        if cd.rank:
            mu_first, mu_last = sol.m_vec[0], sol.m_vec[-1]
        else:
            mu_first, mu_last = p.M, p.M + p.ell  # rank-0 convention
        b1 = qbin(_int_top(p.L1 + Fraction(p.M + mu_first, 2)), p.M + p.ell)
        if b1.is_zero():
            continue
        b2 = qbin(_int_top(p.L2 + Fraction(p.M + p.ell + mu_last, 2)), p.M)
        if b2.is_zero():
            continue
        term = mul(mul(b1, b2), qbin_vector(tuple(zip(sol.m_vec, sol.n_vec))))
        if term.is_zero():
            continue
        total = total + term.times_monomial(1, cd.qform(sol.n_vec))
    return total


# --- Bailey-type limit check -----------------------------------------------------

def cbp_n1_check(M: int, ell: int) -> bool:
    """Cleared-denominator form of the conjugate-pair normalization.

    sum_{i=0}^M q^{i(i+ell)} [M over i] (q^{i+ell+1}; q)_{M-i} == 1.
    """
    from .qpoly import qpoch

    total = ZERO
    for i in range(0, M + 1):
        term = mul(qbin(M, i), qpoch(i + ell + 1, M - i))
        if not term.is_zero():
            total = total + term.times_monomial(1, i * (i + ell))
    return total == ONE
