"""Doubly bounded partition-pair polynomials and their transform tree.

burge_x evaluates the bilateral two-term j-sum X_{r,s}^{(p,p')} with
standard binomials; burge_xn its level-N extension, where each j-term
carries an inner sum over admissible (mu,eta)-systems.  The j-windows
are exact: every binomial bottom must be nonnegative, and the two
bottoms of a term sum to a j-free constant, so support is an integer
interval computable in advance.

Transforms are higher-order: they apply the summation kernel to a child
evaluator, so the same code path both verifies transform identities
against direct evaluation and generates tree-node values.  Sufficiency
predicates (floor inequalities, and the scan-based safety check of the
classic transform) are warning-grade: failing them does not make the
evaluation wrong, only unproven, hence SufficiencyViolated is raised
only when enforcement is requested.

The tree: for N = 1, breadth-first iteration of both transforms from
the trivial seed (p,p',r,s) = (1,2,0,1).  For N > 1 the classic tree is
kept as a backbone and each backbone node sprouts two level-N leaves,
whose labels follow the symmetric level-N transform rules.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, List, Optional, Sequence, Tuple, Union

from .errors import InvalidParams, SufficiencyViolated, UnknownClosedForm
from .lattice import axis_source, cartan, enumerate_admissible
from .qbinom import qbin, qbin_vector
from .qpoly import ONE, ZERO, QPoly, mul

Rational = Union[int, Fraction]
Evaluator4 = Callable[[int, int, int, int], QPoly]
Evaluator2 = Callable[[int, int], QPoly]


def _norm_rat(x: Rational) -> Rational:
    f = Fraction(x)
    return f.numerator if f.denominator == 1 else f


def _as_int(x: Rational, what: str) -> int:
    f = Fraction(x)
    if f.denominator != 1:
        raise InvalidParams(f"{what} must be an integer, got {x}")
    return f.numerator


def _ceil_div(a: int, b: int) -> int:
    return -((-a) // b)


@dataclass(frozen=True)
class BurgeParams:
    p: int
    pprime: int
    r: int
    s: int
    M1: int
    L1: Rational
    M2: int
    L2: Rational
    N: int = 1
    sigma: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(self, "L1", _norm_rat(self.L1))
        object.__setattr__(self, "L2", _norm_rat(self.L2))

    @property
    def M12(self) -> int:
        return self.M1 - self.M2

    def validate(self) -> None:
        if self.p < 1 or self.pprime < 1:
            raise InvalidParams("p and p' must be >= 1")
        if self.N < 1:
            raise InvalidParams("N must be >= 1")
        if self.sigma not in (0, 1):
            raise InvalidParams("sigma must be 0 or 1")
        diff = self.pprime - self.p
        if diff < 0 or diff % self.N:
            raise InvalidParams("(p'-p)/N must be a nonnegative integer")
        if (self.r - self.s) % self.N:
            raise InvalidParams("(r-s)/N must be an integer")
        if (self.M12 + self.sigma * self.N) % 2:
            raise InvalidParams("M1-M2 + sigma*N must be even")
        half = Fraction(self.M12 + self.sigma, 2)
        for name, L in (("L1", self.L1), ("L2", self.L2)):
            if (Fraction(L) + half).denominator != 1:
                raise InvalidParams(f"{name} + (M1-M2+sigma)/2 must be an integer")


# --- classic polynomial -------------------------------------------------------

def burge_x(bp: BurgeParams) -> QPoly:
    # sigma plays no role here, so the level-N parity constraints are not imposed
    if bp.N != 1:
        raise InvalidParams("burge_x is the N=1 polynomial")
    if bp.p < 1 or bp.pprime < 1:
        raise InvalidParams("p and p' must be >= 1")
    p, pp, r, s = bp.p, bp.pprime, bp.r, bp.s
    M1, M2 = bp.M1, bp.M2
    L1, L2 = _as_int(bp.L1, "L1"), _as_int(bp.L2, "L2")
    M12 = M1 - M2
    total = ZERO
    lo = max(_ceil_div(-M1, p), _ceil_div(-L2, pp))
    hi = min(M2 // p, L1 // pp)
    for j in range(lo, hi + 1):
        t = mul(
            qbin(M1 + L1 - (pp - p) * j, M1 + p * j),
            qbin(M2 + L2 + (pp - p) * j, M2 - p * j),
        )
        if not t.is_zero():
            total = total + t.times_monomial(1, j * (p * pp * j + pp * (M12 + r) - p * s))
    lo = max(_ceil_div(-M1 - r, p), _ceil_div(-L2 - s, pp))
    hi = min((M2 - r) // p, (L1 - s) // pp)
    for j in range(lo, hi + 1):
        t = mul(
            qbin(M1 + L1 - (pp - p) * j + r - s, M1 + p * j + r),
            qbin(M2 + L2 + (pp - p) * j - r + s, M2 - p * j - r),
        )
        if not t.is_zero():
            total = total - t.times_monomial(1, (p * j + M12 + r) * (pp * j + s))
    return total


def burge_symmetry_check(bp: BurgeParams) -> bool:
    """X_{r,s}^{(p,p')}(M1,L1,M2,L2) = X_{s-L12,r+M12}^{(p',p)}(L1,M1,L2,M2)."""
    L1, L2 = _as_int(bp.L1, "L1"), _as_int(bp.L2, "L2")
    L12 = L1 - L2
    image = BurgeParams(
        bp.pprime, bp.p, bp.s - L12, bp.r + bp.M12, L1, bp.M1, L2, bp.M2
    )
    return burge_x(bp) == burge_x(image)


# --- level-N polynomial ---------------------------------------------------------

_xn_nonintegral_skips = 0


def xn_nonintegral_skips() -> int:
    """Terms dropped because a binomial entry came out fractional.

    The congruence restriction is supposed to make this impossible; the
    counter exists so tests can assert it stayed at zero.
    """
    return _xn_nonintegral_skips


def _xn_term(
    cd, M1: int, M2: int, L1, L2, p: int, pp: int, n_lat: int, sigma: int,
    j: int, shift: int, s_shift: Fraction,
) -> QPoly:
    """Inner eta-sum of one j-term; shift = 0 or r, s_shift = 0 or (r-s)/N."""
    global _xn_nonintegral_skips
    b1_bot = M1 + p * j + shift
    b2_bot = M2 - p * j - shift
    v = axis_source(cd.rank, [(1, b1_bot), (cd.rank, b2_bot)])
    offset = Fraction(M1 - M2 + 2 * p * j + 2 * shift + sigma * n_lat, 2 * n_lat)
    acc = ZERO
    for sol in enumerate_admissible(cd, v, offset):
        if cd.rank:
            mu1, mu_last = sol.m_vec[0], sol.m_vec[-1]
        else:
            mu1, mu_last = b2_bot, b1_bot
        top1 = Fraction(M1) + Fraction(L1) - Fraction((pp - p) * j, n_lat) + s_shift - Fraction(b2_bot - mu1, 2)
        top2 = Fraction(M2) + Fraction(L2) + Fraction((pp - p) * j, n_lat) - s_shift - Fraction(b1_bot - mu_last, 2)
        if top1.denominator != 1 or top2.denominator != 1:
            _xn_nonintegral_skips += 1
            continue
        t = qbin(top1.numerator, b1_bot)
        if t.is_zero():
            continue
        t = mul(t, qbin(top2.numerator, b2_bot))
        if t.is_zero():
            continue
        t = mul(t, qbin_vector(tuple(zip(sol.m_vec, sol.n_vec))))
        if t.is_zero():
            continue
        acc = acc + t.times_monomial(1, cd.qform(sol.n_vec))
    return acc


def burge_xn(bp: BurgeParams) -> QPoly:
    bp.validate()
    p, pp, r, s = bp.p, bp.pprime, bp.r, bp.s
    M1, M2, L1, L2 = bp.M1, bp.M2, bp.L1, bp.L2
    M12, N = bp.M12, bp.N
    cd = cartan(N)
    total = ZERO
    for j in range(_ceil_div(-M1, p), M2 // p + 1):
        inner = _xn_term(cd, M1, M2, L1, L2, p, pp, N, bp.sigma, j, 0, Fraction(0))
        if inner.is_zero():
            continue
        exp = Fraction(j * (p * pp * j + pp * (M12 + r) - p * s), N)
        total = total + inner.times_monomial(1, exp)
    s_shift = Fraction(r - s, N)
    for j in range(_ceil_div(-M1 - r, p), (M2 - r) // p + 1):
        inner = _xn_term(cd, M1, M2, L1, L2, p, pp, N, bp.sigma, j, r, s_shift)
        if inner.is_zero():
            continue
        exp = Fraction((p * j + M12 + r) * (pp * j + s), N)
        total = total - inner.times_monomial(1, exp)
    return total


# --- transforms -------------------------------------------------------------------

def _check_sufficiency(labels, which, n_lat, m12, l1, l2, enforce):
    if labels is None or not enforce:
        return
    p, pp, r, s = labels
    if not _suff(p, pp, r, s, n_lat, m12, l1, l2, which):
        raise SufficiencyViolated(
            f"predicate {which} fails for child labels (p,p',r,s)=({p},{pp},{r},{s})"
        )


def transform_bt(
    M1: int, L1: int, M2: int, L2: int, child: Evaluator4,
    labels: Optional[Tuple[int, int, int, int]] = None, enforce: bool = True,
) -> QPoly:
    """sum_i q^{i(i+M12)} [L1+L2+M2-i over M2-i] child(i+M12, L1-i, i, L2-M12-i)."""
    M12 = M1 - M2
    if labels is not None and enforce:
        if not classic_bt_safe(*labels, M1, L1, M2, L2):
            raise SufficiencyViolated("classic transform safety scan failed")
    total = ZERO
    for i in range(_ceil_div(-M12, 2), M2 + 1):
        kernel = qbin(L1 + L2 + M2 - i, M2 - i)
        if kernel.is_zero():
            continue
        val = child(i + M12, L1 - i, i, L2 - M12 - i)
        if val.is_zero():
            continue
        total = total + mul(kernel, val).times_monomial(1, i * (i + M12))
    return total


def transform_bt2(
    M1: int, L1: int, M2: int, L2: int, child: Evaluator4,
    labels: Optional[Tuple[int, int, int, int]] = None, enforce: bool = True,
) -> QPoly:
    """Same kernel, child evaluated at (L1-i, i+M12, L2-M12-i, i).

    The window lower end is again ceil(-M12/2): in either orientation the
    child's top-minus-bottom differences sum to 2i+M12 plus a quantity
    whose minimum over j is zero, so terms below that vanish.
    """
    M12 = M1 - M2
    if labels is not None and enforce:
        if not classic_bt2_safe(*labels, M1, L1, M2, L2):
            raise SufficiencyViolated("classic transform safety scan failed")
    total = ZERO
    for i in range(_ceil_div(-M12, 2), M2 + 1):
        kernel = qbin(L1 + L2 + M2 - i, M2 - i)
        if kernel.is_zero():
            continue
        val = child(L1 - i, i + M12, L2 - M12 - i, i)
        if val.is_zero():
            continue
        total = total + mul(kernel, val).times_monomial(1, i * (i + M12))
    return total


def _level_kernel_sum(
    n_lat: int, sigma: int, M1: int, L1: Rational, M2: int, L2: Rational,
    child_args, i_low: int,
) -> QPoly:
    """Shared body of the level-N transforms; child_args builds the four bounds."""
    cd = cartan(n_lat)
    M12 = M1 - M2
    if (M12 + sigma * n_lat) % 2:
        raise InvalidParams("M1-M2 + sigma*N must be even")
    l1l2 = _as_int(Fraction(L1) + Fraction(L2), "L1+L2")
    total = ZERO
    for i in range(i_low, M2 + 1):
        kernel = qbin(l1l2 + M2 - i, M2 - i)
        if kernel.is_zero():
            continue
        v = axis_source(cd.rank, [(1, 2 * i + M12)])
        offset = Fraction(2 * i + M12 + sigma * n_lat, 2 * n_lat)
        inner = ZERO
        for sol in enumerate_admissible(cd, v, offset):
            m1 = sol.m_vec[0] if cd.rank else 0
            val = child_args(i, m1)
            if val.is_zero():
                continue
            vec = qbin_vector(tuple(zip(sol.m_vec, sol.n_vec)))
            if vec.is_zero():
                continue
            inner = inner + mul(vec, val).times_monomial(1, cd.qform(sol.n_vec))
        if inner.is_zero():
            continue
        total = total + mul(kernel, inner).times_monomial(1, Fraction(i * (i + M12), n_lat))
    return total


def transform_burgetrafo_n(
    n_lat: int, sigma: int, M1: int, L1: Rational, M2: int, L2: Rational,
    child: Evaluator4,
    labels: Optional[Tuple[int, int, int, int]] = None, enforce: bool = True,
) -> QPoly:
    """Level-N kernel over child(i+M12, L1-i+m1/2, i, L2-M12-i+m1/2)."""
    M12 = M1 - M2
    _check_sufficiency(labels, "suf", n_lat, M12, L1, L2, enforce)

    def child_args(i: int, m1: int) -> QPoly:
        a = _as_int(Fraction(L1) - i + Fraction(m1, 2), "child L1")
        b = _as_int(Fraction(L2) - M12 - i + Fraction(m1, 2), "child L2")
        return child(i + M12, a, i, b)

    return _level_kernel_sum(n_lat, sigma, M1, L1, M2, L2, child_args, _ceil_div(-M12, 2))


def transform_trafo(
    n_lat: int, sigma: int, M1: int, L1: Rational, M2: int, L2: Rational,
    child: Evaluator4,
    labels: Optional[Tuple[int, int, int, int]] = None, enforce: bool = True,
) -> QPoly:
    """Level-N kernel over child(L1-i+m1/2, i+M12, L2-M12-i+m1/2, i)."""
    M12 = M1 - M2
    _check_sufficiency(labels, "suf2", n_lat, M12, L1, L2, enforce)

    def child_args(i: int, m1: int) -> QPoly:
        a = _as_int(Fraction(L1) - i + Fraction(m1, 2), "child M1")
        b = _as_int(Fraction(L2) - M12 - i + Fraction(m1, 2), "child M2")
        return child(a, i + M12, b, i)

    return _level_kernel_sum(n_lat, sigma, M1, L1, M2, L2, child_args, _ceil_div(-M12, 2))


def transform_traf1(
    n_lat: int, sigma: int, M: int, L: Rational, child: Evaluator2,
    labels: Optional[Tuple[int, int, int, int]] = None, enforce: bool = True,
) -> QPoly:
    """Symmetric form: sum_{i=0}^M q^{i^2/N} [2L+M-i over 2L] ... child(i, L-i+m1/2)."""
    _check_sufficiency(labels, "sufsym", n_lat, 0, L, L, enforce)

    def child4(m1: int, l1: int, m2: int, l2: int) -> QPoly:
        return child(m2, l2)

    return transform_burgetrafo_n(n_lat, sigma, M, L, M, L, child4, labels=None)


def transform_traf2(
    n_lat: int, sigma: int, M: int, L: Rational, child: Evaluator2,
    labels: Optional[Tuple[int, int, int, int]] = None, enforce: bool = True,
) -> QPoly:
    """Symmetric form with child(L-i+m1/2, i)."""
    _check_sufficiency(labels, "sufsym", n_lat, 0, L, L, enforce)

    def child4(m1: int, l1: int, m2: int, l2: int) -> QPoly:
        return child(m2, l2)

    return transform_trafo(n_lat, sigma, M, L, M, L, child4, labels=None)


# --- sufficiency predicates ---------------------------------------------------------

def _floor_le(num_l: Fraction, den_l: Fraction, num_r: Fraction, den_r: Fraction) -> bool:
    return math.floor(num_l / den_l) <= math.floor(num_r / den_r)


def _suff(
    p: int, pprime: int, r: int, s: int, n_lat: int,
    m12: int, l1: Rational, l2: Rational, which: str,
) -> bool:
    if pprime <= p:
        return False
    L1, L2 = Fraction(l1), Fraction(l2)
    den_l = Fraction(pprime) + Fraction(p, n_lat)
    den_r = Fraction(pprime - p)
    skew = Fraction(m12 * (n_lat - 1), 2 * n_lat)

    def line(a_num, b_num) -> bool:
        return _floor_le(a_num, den_l, b_num, den_r)

    if which == "sufsym":
        if m12 != 0 or L1 != L2:
            raise InvalidParams("sufsym applies to the symmetric case only")
        return line(L1 + s + Fraction(r, n_lat), L1 - r + s)
    if which == "suf":
        pairs = [
            (L1 + skew - s - Fraction(r, n_lat), L1 + m12 + r - s),
            (L2 - skew + s + Fraction(r, n_lat), L2 - m12 - r + s),
            (L1 + skew, L1 + m12),
            (L2 - skew, L2 - m12),
        ]
    elif which == "suf2":
        pairs = [
            (L2 - skew - s - Fraction(r, n_lat), L1 + m12 + r - s),
            (L1 + skew + s + Fraction(r, n_lat), L2 - m12 - r + s),
            (L2 - skew, L1 + m12),
            (L1 + skew, L2 - m12),
        ]
    else:
        raise InvalidParams(f"unknown sufficiency predicate {which!r}")
    return all(line(a, b) for a, b in pairs)


def sufficiency(bp: BurgeParams, which: str) -> bool:
    """Floor-inequality guarantees for the level-N transforms.

    The label fields of `bp` are read as the child labels of the
    transform, the bound fields as the point of application; `which`
    selects "suf" (first unsymmetric transform), "suf2" (second), or
    "sufsym" (the shared symmetric case, needing M1 = M2 and L1 = L2).
    All three require p' > p; otherwise the guarantee is unavailable
    and the answer is False.
    """
    return _suff(bp.p, bp.pprime, bp.r, bp.s, bp.N, bp.M12, bp.L1, bp.L2, which)


def classic_bt_safe(
    p: int, pprime: int, r: int, s: int, M1: int, L1: int, M2: int, L2: int
) -> bool:
    """True when the classic transform's proof never needs an excluded case.

    Scans the finite j-ranges where either exceptional chain could hold,
    for (r, s) and for the (0, 0) counterpart; any hit disproves safety.
    The windows come from the chain's own inequalities: the middle member
    must be negative, and comparing it with the outer members bounds j on
    the other side by (L1-s-r)/(p'+p) or -(L2+r+s)/(p'+p).
    """
    M12 = M1 - M2

    def chain1(j: int, rr: int, ss: int) -> bool:
        a = -L1 - M12 + (pprime - p) * j - rr + ss
        b = -M12 - 2 * p * j - 2 * rr
        c = L2 - M12 + (pprime - p) * j - rr + ss
        return a <= b <= c < 0 <= M2 - p * j - rr

    def chain2(j: int, rr: int, ss: int) -> bool:
        a = -L2 + M12 - (pprime - p) * j + rr - ss
        b = M12 + 2 * p * j + 2 * rr
        c = L1 + M12 - (pprime - p) * j + rr - ss
        return a <= b <= c < 0 <= M1 + p * j + rr

    for rr, ss in ((r, s), (0, 0)):
        lo = (-M12 - 2 * rr) // (2 * p) + 1
        hi = (L1 - ss - rr) // (pprime + p)
        for j in range(lo, hi + 1):
            if chain1(j, rr, ss):
                return False
        lo = _ceil_div(-(L2 + rr + ss), pprime + p)
        hi = (-M12 - 2 * rr - 1) // (2 * p)
        for j in range(lo, hi + 1):
            if chain2(j, rr, ss):
                return False
    return True


def classic_bt2_safe(
    p: int, pprime: int, r: int, s: int, M1: int, L1: int, M2: int, L2: int
) -> bool:
    """Safety scan for the second classic transform.

    That transform is the first one seen through the label symmetry, so
    the scan runs on the symmetry-transformed child labels.
    """
    M12, L12 = M1 - M2, L1 - L2
    return classic_bt_safe(pprime, p, s - M12, r + M12 + L12, M1, L1, M2, L2)


# --- closed forms ----------------------------------------------------------------------

def _parity_ok(m_vec: Sequence[int], n_lat: int, sigma: int, flip: bool) -> bool:
    # 1-based odd positions carry sigma for the tadpole display, even
    # positions for the A_N display (flip=True); N odd allows only even m
    if n_lat % 2:
        return all(x % 2 == 0 for x in m_vec)
    for idx, x in enumerate(m_vec):
        odd_pos = idx % 2 == 0
        want = sigma if (odd_pos != flip) else 0
        if x % 2 != want % 2:
            return False
    return True


def _matrix_form(mat, vec) -> int:
    return sum(vec[i] * sum(mat[i][j] * vec[j] for j in range(len(vec))) for i in range(len(vec)))


def closed_form(name: str, M: int, L: Rational, n_lat: int = 1, sigma: int = 0) -> QPoly:
    """Explicit right-hand sides for the recognized tree nodes."""
    if name == "initial":
        return ONE if L == 0 else ZERO
    if name == "nn":
        Li = _as_int(L, "L")
        return qbin(Li + M, 2 * Li).times_monomial(1, Li * Li)
    if name == "euler":
        Li = _as_int(L, "L")
        return qbin(2 * Li + M, 2 * Li)
    if name == "ising":
        Li = _as_int(L, "L")
        total = ZERO
        for m in range(0, Li + 1, 2):
            t = mul(qbin(2 * Li + M - m // 2, 2 * Li), qbin(Li, m))
            if not t.is_zero():
                total = total + t.times_monomial(1, m * m // 2)
        return total
    if name == "rr":
        Li = _as_int(L, "L")
        total = ZERO
        for k in range(0, Li + 1):
            t = mul(qbin(2 * Li + M - k, 2 * Li), qbin(2 * Li - k, k))
            if not t.is_zero():
                total = total + t.times_monomial(1, k * k)
        return total
    if name == "euler_n":
        if sigma != 0:
            return ZERO
        Li = _as_int(L, "L")
        return qbin(2 * Li + M, 2 * Li)
    if name == "tadpole":
        return _tadpole_form(M, L, n_lat, sigma)
    if name == "a_n":
        return _a_n_form(M, L, n_lat, sigma)
    if name == "rr_n":
        return _rr_n_form(M, L, n_lat, sigma)
    if name == "slater":
        return _slater_form(M, L, n_lat, sigma)
    raise UnknownClosedForm(name)


def _tadpole_form(M: int, L: Rational, n_lat: int, sigma: int) -> QPoly:
    two_l = _as_int(2 * Fraction(L), "2L")
    if n_lat % 2 and sigma != 0:
        raise InvalidParams("odd N forces sigma = 0 here")
    cd = cartan(n_lat, "tadpole")
    v = axis_source(cd.rank, [(1, two_l)])
    total = ZERO
    for sol in enumerate_admissible(cd, v, None):
        if not _parity_ok(sol.m_vec, n_lat, sigma, flip=False):
            continue
        m1 = sol.m_vec[0] if cd.rank else 0
        top = Fraction(L) + M - Fraction(m1, 2)
        t = qbin(_as_int(top, "binomial top"), two_l)
        if t.is_zero():
            continue
        t = mul(t, qbin_vector(tuple(zip(sol.m_vec, sol.n_vec))))
        if t.is_zero():
            continue
        exp = Fraction(_matrix_form(cd.cartan, sol.m_vec), 4)
        total = total + t.times_monomial(1, exp)
    return total.times_monomial(1, Fraction(L) * Fraction(L))


def _a_n_form(M: int, L: Rational, n_lat: int, sigma: int) -> QPoly:
    two_l = _as_int(2 * Fraction(L), "2L")
    if n_lat % 2 and sigma != 0:
        raise InvalidParams("odd N forces sigma = 0 here")
    cd = cartan(n_lat + 1, "a")  # rank N system
    v = axis_source(cd.rank, [(1, two_l)])
    total = ZERO
    for sol in enumerate_admissible(cd, v, None):
        if not _parity_ok(sol.m_vec, n_lat, sigma, flip=True):
            continue
        m1 = sol.m_vec[0] if cd.rank else 0
        top = 2 * Fraction(L) + M - Fraction(m1, 2)
        t = qbin(_as_int(top, "binomial top"), two_l)
        if t.is_zero():
            continue
        t = mul(t, qbin_vector(tuple(zip(sol.n_vec, sol.m_vec))))
        if t.is_zero():
            continue
        exp = Fraction(_matrix_form(cd.cartan, sol.m_vec), 4)
        total = total + t.times_monomial(1, exp)
    return total


def _rr_n_form(M: int, L: Rational, n_lat: int, sigma: int) -> QPoly:
    two_l = _as_int(2 * Fraction(L), "2L")
    cd = cartan(n_lat)
    total = ZERO
    for i in range(0, M + 1):
        outer = qbin(two_l + M - i, two_l)
        if outer.is_zero():
            continue
        v = axis_source(cd.rank, [(1, 2 * i)])
        offset = Fraction(2 * i + sigma * n_lat, 2 * n_lat)
        inner = ZERO
        for sol in enumerate_admissible(cd, v, offset):
            m1 = sol.m_vec[0] if cd.rank else 0
            t = qbin(two_l - i + m1, i)
            if t.is_zero():
                continue
            t = mul(t, qbin_vector(tuple(zip(sol.m_vec, sol.n_vec))))
            if t.is_zero():
                continue
            inner = inner + t.times_monomial(1, cd.qform(sol.n_vec))
        if inner.is_zero():
            continue
        total = total + mul(outer, inner).times_monomial(1, Fraction(i * i, n_lat))
    return total


def _slater_form(M: int, L: Rational, n_lat: int, sigma: int) -> QPoly:
    if n_lat != 2:
        raise InvalidParams("this double sum is the N=2 display")
    two_l = _as_int(2 * Fraction(L), "2L")
    total = ZERO
    for i in range(0, M + 1):
        outer = qbin(two_l + M - i, two_l)
        if outer.is_zero():
            continue
        for k in range(0, i + 1):
            if (k + i + sigma) % 2:
                continue
            t = mul(qbin(i, k), qbin(two_l - k, i))
            if t.is_zero():
                continue
            t = mul(outer, t)
            total = total + t.times_monomial(1, Fraction(i * i + k * k, 2))
    return total


_CLASSIC_FORMS = {
    (1, 2, 0, 1): "initial",
    (1, 3, 0, 1): "nn",
    (2, 3, 1, 1): "euler",
    (3, 4, 1, 1): "ising",
    (2, 5, 1, 2): "rr",
}


def closed_form_name(p: int, pprime: int, r: int, s: int, n_lat: int) -> Optional[str]:
    if n_lat == 1:
        return _CLASSIC_FORMS.get((p, pprime, r, s))
    if (p, pprime, r, s) == (1, 2 * n_lat + 1, 0, n_lat):
        return "tadpole"
    if (p, pprime, r, s) == (2, n_lat + 2, 1, 1):
        return "euler_n"
    if (p, pprime, r, s) == (3, n_lat + 3, 1, 1):
        return "a_n"
    if (p, pprime, r, s) == (2, 3 * n_lat + 2, 1, n_lat + 1):
        return "rr_n"
    return None


# --- tree -------------------------------------------------------------------------------

@dataclass(frozen=True)
class TreeNode:
    p: int
    pprime: int
    r: int
    s: int
    N: int
    sigma: int
    depth: int
    parent_index: Optional[int]
    transform_tag: Optional[str]
    closed_form_name: Optional[str]
    verified: Optional[bool]


def _verify_node(p: int, pp: int, r: int, s: int, n_lat: int, sigma: int,
                 form: Optional[str], grid: int) -> Optional[bool]:
    if form is None:
        return None
    shift = Fraction(sigma, 2)
    for M in range(0, grid + 1):
        for twoL in range(0, 2 * grid + 1, 2):
            L = twoL // 2 + shift
            bp = BurgeParams(p, pp, r, s, M, L, M, L, N=n_lat, sigma=sigma)
            if burge_xn(bp) != closed_form(form, M, L, n_lat, sigma):
                return False
    return True


def _verify_edge(parent: "TreeNode", child_labels: Tuple[int, int, int, int],
                 tag: str, n_lat: int, sigma: int, grid: int) -> Optional[bool]:
    """Route through the parent equals the direct child at symmetric points.

    Level transforms skip grid points outside their sufficiency window;
    None means no point was applicable.
    """
    pl = (parent.p, parent.pprime, parent.r, parent.s)
    cp, cpp, cr, cs = child_labels

    def through_parent(m1, l1, m2, l2):
        return burge_x(BurgeParams(*pl, m1, l1, m2, l2))

    shift = Fraction(sigma, 2) if tag in ("traf1", "traf2") else Fraction(0)
    checked = False
    for M in range(0, grid + 1):
        for k in range(0, grid + 1):
            L = k + shift
            if tag == "bt":
                direct = burge_x(BurgeParams(cp, cpp, cr, cs, M, L, M, L))
                route = transform_bt(M, int(L), M, int(L), through_parent)
            elif tag == "bt2":
                direct = burge_x(BurgeParams(cp, cpp, cr, cs, M, L, M, L))
                route = transform_bt2(M, int(L), M, int(L), through_parent)
            else:
                probe = BurgeParams(*pl, M, L, M, L, N=n_lat, sigma=sigma)
                if not sufficiency(probe, "sufsym"):
                    continue
                direct = burge_xn(
                    BurgeParams(cp, cpp, cr, cs, M, L, M, L, N=n_lat, sigma=sigma)
                )
                tf = transform_traf1 if tag == "traf1" else transform_traf2
                route = tf(n_lat, sigma, M, L, lambda m, l: through_parent(m, l, m, l))
            if direct != route:
                return False
            checked = True
    return True if checked else None


def build_tree(depth: int, n_lat: int = 1, sigma: int = 0, verify_grid: int = 2) -> List[TreeNode]:
    """Transform tree from the seed (1,2,0,1), breadth first.

    For n_lat = 1 both classic transforms generate children down to
    `depth`.  For n_lat > 1 the classic tree forms a backbone of depth
    depth-1 and every backbone node sprouts one leaf per symmetric
    level-N transform.  Nodes with recognized labels carry a closed-form
    verdict checked on a small (M, L) grid.
    """
    if depth < 0:
        raise InvalidParams("depth must be >= 0")
    if n_lat % 2 and sigma != 0:
        raise InvalidParams("odd N forces sigma = 0")
    nodes: List[TreeNode] = []

    def add(p, pp, r, s, nl, sg, d, parent, tag):
        form = closed_form_name(p, pp, r, s, nl)
        form_ok = _verify_node(p, pp, r, s, nl, sg, form, verify_grid)
        edge_ok = None
        if parent is not None:
            edge_ok = _verify_edge(nodes[parent], (p, pp, r, s), tag, nl, sg, verify_grid)
        if form_ok is None and edge_ok is None:
            verified: Optional[bool] = None
        else:
            verified = form_ok is not False and edge_ok is not False
        nodes.append(TreeNode(p, pp, r, s, nl, sg, d, parent, tag, form, verified))
        return len(nodes) - 1

    backbone_depth = depth if n_lat == 1 else depth - 1
    frontier = [add(1, 2, 0, 1, 1, 0, 0, None, None)]
    for d in range(1, backbone_depth + 1):
        next_frontier = []
        for idx in frontier:
            nd = nodes[idx]
            next_frontier.append(
                add(nd.p, nd.p + nd.pprime, nd.r, nd.r + nd.s, 1, 0, d, idx, "bt")
            )
            next_frontier.append(
                add(nd.pprime, nd.p + nd.pprime, nd.s, nd.r + nd.s, 1, 0, d, idx, "bt2")
            )
        frontier = next_frontier
    if n_lat > 1 and depth >= 1:
        for idx in range(len(nodes)):
            nd = nodes[idx]
            add(nd.p, nd.p + n_lat * nd.pprime, nd.r, nd.r + n_lat * nd.s,
                n_lat, sigma, nd.depth + 1, idx, "traf1")
            add(nd.pprime, n_lat * nd.p + nd.pprime, nd.s, n_lat * nd.r + nd.s,
                n_lat, sigma, nd.depth + 1, idx, "traf2")
    return nodes


def tree_to_json(nodes: Sequence[TreeNode]) -> List[dict]:
    return [
        {
            "labels": [nd.p, nd.pprime, nd.r, nd.s, nd.N, nd.sigma],
            "parent_index": nd.parent_index,
            "transform_tag": nd.transform_tag,
            "verified": nd.verified,
        }
        for nd in nodes
    ]
