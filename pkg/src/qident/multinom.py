"""Generalized q-multinomial coefficients and their decompositions.

T_n^{(N)}(L, a) is a finite sum over lattice vectors eta >= 0 subject to
a congruence restriction; each term is (q)_L divided by three factorial
blocks.  The two outer block lengths always sum with |eta| to L, so each
term is a genuine q-multinomial coefficient and the division is exact; a
division failure here means a bug, not bad input, and is allowed to
propagate.

The decomposition rewrites the n = 0 coefficient as a quadratic-exponent
double sum over restricted (m, n)-systems, and a companion difference
identity covers 0 < n < N-1.  Both are checked term-exactly.  The
classical limit q -> 1 is the ordinary multinomial coefficient, computed
independently by convolution for cross-checks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Tuple, Union

from .errors import InvalidParams, NonPolynomial, StabilizationFailure
from .lattice import CartanData, axis_source, cartan, enumerate_admissible
from .qbinom import qbin
from .qpoly import (
    ONE,
    ZERO,
    QPoly,
    Truncation,
    eval_at_one,
    exact_div,
    mul,
    qpoch,
    truncated_equal,
)

Rational = Union[int, Fraction]


@dataclass(frozen=True)
class MultinomialQuery:
    N: int
    L: int
    a: Rational
    n_index: int = 0

    def __post_init__(self) -> None:
        a = Fraction(self.a)
        object.__setattr__(self, "a", a.numerator if a.denominator == 1 else a)

    def validate(self) -> None:
        if self.N < 1:
            raise InvalidParams("N must be >= 1")
        if self.L < 0:
            raise InvalidParams("L must be >= 0")
        two_a = 2 * Fraction(self.a)
        if two_a.denominator != 1:
            raise InvalidParams("a must be a half-integer")
        if abs(two_a.numerator) > self.N * self.L:
            raise InvalidParams("2a must lie in [-NL, NL]")
        if (two_a.numerator - self.N * self.L) % 2:
            raise InvalidParams("2a must have the parity of NL")
        if not 0 <= self.n_index < self.N:
            raise InvalidParams("n_index must lie in [0, N-1]")


def _eta_box(rank: int, total: int) -> Iterator[Tuple[int, ...]]:
    # all eta >= 0 with sum <= total, lexicographic
    if rank == 0:
        yield ()
        return
    vec = [0] * rank

    def rec(pos: int, left: int) -> Iterator[Tuple[int, ...]]:
        if pos == rank:
            yield tuple(vec)
            return
        for val in range(left + 1):
            vec[pos] = val
            yield from rec(pos + 1, left - val)
        vec[pos] = 0

    yield from rec(0, total)


def _t_sum(cd: CartanData, L: int, a: Fraction, n_index: int) -> QPoly:
    """Defining eta-sum; out-of-range a simply yields the zero polynomial."""
    rank = cd.rank
    half_l = Fraction(L, 2)
    shift = a / cd.n
    num = qpoch(1, L)
    total = ZERO
    bound = (cd.n * L - 2 * abs(a)) / 2
    if bound < 0:
        return ZERO
    for eta in _eta_box(rank, int(bound)):
        first = cd.cinv_component(eta, 0) if rank else Fraction(0)
        if (half_l + shift + first).denominator != 1:
            continue
        last = cd.cinv_component(eta, rank - 1) if rank else Fraction(0)
        k1 = half_l - shift - first
        k2 = half_l + shift - last
        if k1 < 0 or k2 < 0:
            continue
        den = mul(qpoch(1, int(k1)), qpoch(1, int(k2)))
        for e in eta:
            den = mul(den, qpoch(1, e))
        term = exact_div(num, den)
        exp = cd.qform(eta)
        if n_index:
            exp -= cd.cinv_component(eta, n_index - 1)
        total = total + term.times_monomial(1, exp)
    return total


def t_multinomial(query: MultinomialQuery) -> QPoly:
    query.validate()
    cd = cartan(query.N)
    return _t_sum(cd, query.L, Fraction(query.a), query.n_index)


def classical_multinomial(N: int, L: int, a: Rational) -> int:
    """Coefficient of x^(a + NL/2) in (1 + x + ... + x^N)^L."""
    MultinomialQuery(N, L, a).validate()
    coeffs = [1]
    for _ in range(L):
        nxt = [0] * (len(coeffs) + N)
        for i, c in enumerate(coeffs):
            for k in range(N + 1):
                nxt[i + k] += c
        coeffs = nxt
    idx = int(Fraction(a) + Fraction(N * L, 2))
    return coeffs[idx]


def classical_limit(poly: QPoly) -> int:
    """Value at q = 1 after factoring out the global fractional shift.

    Every exponent of a T sum lies in f + Z>=0 for a single fractional part f;
    that structure is asserted here rather than assumed, then the shifted
    polynomial is evaluated at 1.
    """
    if poly.is_zero():
        return 0
    shifts = {Fraction(e) - math.floor(e) for e, _ in poly.items()}
    if len(shifts) != 1:
        raise NonPolynomial("exponents do not share one fractional part")
    shift = shifts.pop()
    if shift:
        poly = poly.times_monomial(1, -shift)
    return eval_at_one(poly)


def _tnew_i_bound(N: int, L: int, ell: int) -> int:
    # a nonzero term needs 2i <= L - ell + m1 and m1 <= ((2i+ell)(N-1)+n)/N
    return max(0, (N * L - ell) // 2)


def tnew_rhs(N: int, L: int, ell: int, sigma: int) -> QPoly:
    """Quadratic-exponent rewriting of T_0^{(N)}(L, ell/2)."""
    if sigma not in (0, 1) or (sigma - L) % 2:
        raise InvalidParams("sigma must be 0 or 1 with sigma = L mod 2")
    MultinomialQuery(N, L, Fraction(ell, 2)).validate()
    cd = cartan(N)
    total = ZERO
    for i in range(0, _tnew_i_bound(N, L, ell) + 1):
        v = axis_source(cd.rank, [(1, 2 * i + ell)])
        offset = Fraction(L, 2) + Fraction(2 * i + ell, 2 * N)
        inner = ZERO
        for sol in enumerate_admissible(cd, v, offset):
            m1 = sol.m_vec[0] if cd.rank else 0
            top1 = Fraction(L + ell + m1, 2)
            top2 = Fraction(L - ell + m1, 2)
            if top1.denominator != 1 or top2.denominator != 1:
                raise InvalidParams("internal: fractional binomial entry")
            t = mul(qbin(top1.numerator, i + ell), qbin(top2.numerator, i))
            if t.is_zero():
                continue
            vec = ONE
            for mj, nj in zip(sol.m_vec, sol.n_vec):
                vec = mul(vec, qbin(mj + nj, nj))
                if vec.is_zero():
                    break
            if vec.is_zero():
                continue
            inner = inner + mul(t, vec).times_monomial(1, cd.qform(sol.n_vec))
        if inner.is_zero():
            continue
        total = total + inner.times_monomial(1, Fraction(i * (i + ell), N))
    return total


def difference_sides(N: int, L: int, ell: int, n_index: int) -> Tuple[QPoly, QPoly]:
    """T_n(L,(n-l)/2) - q^{(l+1)/N} T_n(L,(n+l+2)/2) against its double sum.

    Only the subtracted combination is an identity; the individual halves
    differ, which a test exercises separately.
    """
    if not 1 <= n_index < N - 1:
        raise InvalidParams("n_index must satisfy 1 <= n_index < N-1")
    if L < 0:
        raise InvalidParams("L must be >= 0")
    cd = cartan(N)
    a1 = Fraction(n_index - ell, 2)
    a2 = Fraction(n_index + ell + 2, 2)
    if (2 * a1 - N * L) % 2:
        raise InvalidParams("n_index - ell must have the parity of NL")
    lhs = _t_sum(cd, L, a1, n_index) - _t_sum(cd, L, a2, n_index).times_monomial(
        1, Fraction(ell + 1, N)
    )
    source_idx = N - n_index
    rhs = ZERO
    for i in range(0, max(0, (N * L - ell + n_index) // 2) + 1):
        v = axis_source(cd.rank, [(1, 2 * i + ell), (source_idx, 1)])
        offset = Fraction(L, 2) + Fraction(2 * i + ell - n_index, 2 * N)
        inner = ZERO
        for sol in enumerate_admissible(cd, v, offset):
            m1 = sol.m_vec[0] if cd.rank else 0
            tops = [Fraction(L + ell + m1, 2), Fraction(L - ell + m1, 2),
                    Fraction(L + ell + 2 + m1, 2), Fraction(L - ell - 2 + m1, 2)]
            if any(t.denominator != 1 for t in tops):
                raise InvalidParams("internal: fractional binomial entry")

            pair = mul(qbin(tops[0].numerator, i + ell), qbin(tops[1].numerator, i)) - mul(
                qbin(tops[2].numerator, i + ell + 1), qbin(tops[3].numerator, i - 1)
            )
            if pair.is_zero():
                continue
            vec = ONE
            for mj, nj in zip(sol.m_vec, sol.n_vec):
                vec = mul(vec, qbin(mj + nj, nj))
                if vec.is_zero():
                    break
            if vec.is_zero():
                continue
            exp = cd.qform(sol.n_vec) - cd.cinv_component(sol.n_vec, source_idx - 1)
            inner = inner + mul(pair, vec).times_monomial(1, exp)
        if inner.is_zero():
            continue
        rhs = rhs + inner.times_monomial(1, Fraction(i * (i + ell), N))
    return lhs, rhs


def difference_identity_check(N: int, L: int, ell: int, n_index: int) -> bool:
    lhs, rhs = difference_sides(N, L, ell, n_index)
    return lhs == rhs


def abf_config_sum(p: int, s: int, L: int) -> QPoly:
    """Bilateral configuration sum of the (p-1)-state height model, regime I.

    Binomial entries with fractional bottoms vanish, which settles all
    parity bookkeeping; the j-window comes from 0 <= bottom <= L.
    """
    if p < 2:
        raise InvalidParams("p must be >= 2")
    if L < 0:
        raise InvalidParams("L must be >= 0")
    total = ZERO
    for delta in (1, -1):
        num = L - s + delta  # bottom = num/2 - pj
        lo = -(-(num - 2 * L) // (2 * p))
        hi = num // (2 * p)
        for j in range(lo, hi + 1):
            if (num - 2 * p * j) % 2:
                continue
            bot = (num - 2 * p * j) // 2
            t = qbin(L, bot)
            if t.is_zero():
                continue
            t = t.times_monomial(delta, j * (p * j + s))
            total = total + t
    return total


def config_limit_check(bp, trunc, m_cap: int = 60) -> bool:
    """Stabilized (q)_(L1+L2)-weighted polynomial against its T_0 form.

    The bounds in `bp` are the starting point; M2 grows with M1 - M2 held
    fixed until the truncated product stabilizes, then the bilateral
    difference of n = 0 multinomial columns must match.  The weight is
    (q)_(L1+L2), i.e. (q)_L in terms of the width L = 2*L1 + M12 + (r-s)/N;
    weighting by (q)_2L instead provably breaks at (2,5,1,2), M12 = 1, L = 2.
    """
    from .burge import BurgeParams, burge_xn

    bp.validate()
    N, p, pp, r, s = bp.N, bp.p, bp.pprime, bp.r, bp.s
    M12 = bp.M12
    skew = Fraction(r - s, N)
    L_frac = 2 * Fraction(bp.L1) + M12 + skew
    if L_frac.denominator != 1 or L_frac < 0:
        raise InvalidParams("bounds do not define a nonnegative integer L")
    L = L_frac.numerator
    if Fraction(bp.L2) != Fraction(bp.L1) + M12 + skew:
        raise InvalidParams("L2 must equal L1 + M12 + (r-s)/N")
    if (L_frac - skew + bp.sigma).denominator != 1 or int(L_frac - skew + bp.sigma) % 2:
        raise InvalidParams("sigma is fixed by L - (r-s)/N + sigma even")
    if not isinstance(trunc, Truncation):
        trunc = Truncation(trunc)
    D = trunc.degree_cap

    weight = qpoch(1, L)
    cd = cartan(N)
    prev = None
    stable = None
    streak = 0
    m2 = bp.M2
    for _ in range(m_cap):
        cur = mul(
            weight,
            burge_xn(BurgeParams(p, pp, r, s, m2 + M12, bp.L1, m2, bp.L2,
                                 N=N, sigma=bp.sigma)),
            trunc,
        )
        if prev is not None and cur == prev:
            streak += 1
            if streak >= 2:
                stable = cur
                break
        else:
            streak = 0
        prev = cur
        m2 += 1
    if stable is None:
        raise StabilizationFailure(f"no stabilization within {m_cap} steps at degree {D}")

    target = ZERO
    half_rms = Fraction(r + M12 - s, 2)
    half_rps = Fraction(r + M12 + s, 2)
    j_span = (N * L + abs(2 * half_rms) + abs(2 * half_rps)) // (2 * pp) + 2
    for j in range(-j_span, j_span + 1):
        a1 = half_rms + pp * j
        if abs(2 * a1) <= N * L:
            t = _t_sum(cd, L, a1, 0)
            exp = Fraction(j * (p * pp * j + pp * (M12 + r) - p * s), N)
            target = target + t.times_monomial(1, exp)
        a2 = half_rps + pp * j
        if abs(2 * a2) <= N * L:
            t = _t_sum(cd, L, a2, 0)
            exp = Fraction((p * j + M12 + r) * (pp * j + s), N)
            target = target - t.times_monomial(1, exp)
    return truncated_equal(stable, target, trunc)
