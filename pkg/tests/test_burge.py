"""Transform-tree polynomials: direct sums, transforms, closed forms.

The oracle here is a wide-window transcription of the bilateral j-sum:
it scans far more j than can contribute, so it cannot miss support, and
it reuses only qbin (itself oracle-tested elsewhere).  Everything else
is cross-checked three ways where possible: direct evaluation, closed
form, and transform route.
"""

import itertools
import json
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qident.burge import (
    BurgeParams,
    build_tree,
    burge_symmetry_check,
    burge_x,
    burge_xn,
    classic_bt2_safe,
    classic_bt_safe,
    closed_form,
    closed_form_name,
    sufficiency,
    transform_bt,
    transform_bt2,
    transform_burgetrafo_n,
    transform_traf1,
    transform_traf2,
    transform_trafo,
    tree_to_json,
    xn_nonintegral_skips,
)
from qident.errors import InvalidParams, SufficiencyViolated, UnknownClosedForm
from qident.lattice import axis_source, cartan, enumerate_admissible
from qident.qbinom import qbin
from qident.qpoly import ZERO, QPoly, mul, render


def oracle_x(p, pp, r, s, m1, l1, m2, l2):
    # wide scan: any nonzero term needs m1+p*j >= 0 and m2-p*j >= 0 (or the
    # r-shifted versions), so |j| <= span is more than enough
    span = abs(m1) + abs(m2) + abs(r) + 2
    total = ZERO
    for j in range(-span, span + 1):
        t = mul(
            qbin(m1 + l1 - (pp - p) * j, m1 + p * j),
            qbin(m2 + l2 + (pp - p) * j, m2 - p * j),
        )
        total = total + t.times_monomial(1, j * (p * pp * j + pp * (m1 - m2 + r) - p * s))
        t = mul(
            qbin(m1 + l1 - (pp - p) * j + r - s, m1 + p * j + r),
            qbin(m2 + l2 + (pp - p) * j - r + s, m2 - p * j - r),
        )
        total = total - t.times_monomial(1, (p * j + m1 - m2 + r) * (pp * j + s))
    return total


LABELS = [(1, 2, 0, 1), (1, 3, 0, 1), (2, 3, 1, 1), (3, 4, 1, 1), (2, 5, 1, 2)]


def test_x_matches_wide_window_oracle_on_grid():
    for p, pp, r, s in LABELS:
        for m1, l1, m2, l2 in itertools.product(range(0, 4), repeat=4):
            bp = BurgeParams(p, pp, r, s, m1, l1, m2, l2)
            assert burge_x(bp) == oracle_x(p, pp, r, s, m1, l1, m2, l2)


@settings(max_examples=120, deadline=None)
@given(
    p=st.integers(1, 4),
    dp=st.integers(0, 4),
    r=st.integers(-2, 4),
    s=st.integers(-2, 4),
    bounds=st.tuples(*(st.integers(0, 5) for _ in range(4))),
)
def test_x_matches_oracle_random(p, dp, r, s, bounds):
    pp = p + dp
    m1, l1, m2, l2 = bounds
    bp = BurgeParams(p, pp, r, s, m1, l1, m2, l2)
    assert burge_x(bp) == oracle_x(p, pp, r, s, m1, l1, m2, l2)


def test_x_rejects_bad_labels():
    with pytest.raises(InvalidParams):
        burge_x(BurgeParams(0, 2, 0, 1, 1, 1, 1, 1))
    with pytest.raises(InvalidParams):
        burge_x(BurgeParams(1, 2, 0, 1, 1, 1, 1, 1, N=2))


def test_initial_form_is_kronecker_delta():
    for m in range(0, 6):
        assert burge_x(BurgeParams(1, 2, 0, 1, m, 0, m, 0)) == QPoly({0: 1})
        for l in range(1, 5):
            assert burge_x(BurgeParams(1, 2, 0, 1, m, l, m, l)).is_zero()


@pytest.mark.parametrize(
    "labels,name",
    [
        ((1, 3, 0, 1), "nn"),
        ((2, 3, 1, 1), "euler"),
        ((3, 4, 1, 1), "ising"),
        ((2, 5, 1, 2), "rr"),
    ],
)
def test_classic_closed_forms(labels, name):
    p, pp, r, s = labels
    for m in range(0, 7):
        for l in range(0, 7):
            direct = burge_x(BurgeParams(p, pp, r, s, m, l, m, l))
            assert direct == closed_form(name, m, l), (name, m, l)


def test_closed_form_unknown_name():
    with pytest.raises(UnknownClosedForm):
        closed_form("no-such-form", 1, 1)


def test_symmetry_relation():
    for p, pp, r, s in LABELS:
        for m1, l1, m2, l2 in itertools.product(range(0, 4), repeat=4):
            assert burge_symmetry_check(BurgeParams(p, pp, r, s, m1, l1, m2, l2))


def test_xn_reduces_to_x_at_level_one():
    before = xn_nonintegral_skips()
    for p, pp, r, s in LABELS:
        for m1, l1, m2, l2 in itertools.product(range(0, 4), repeat=4):
            sigma = (m1 - m2) % 2
            a = burge_x(BurgeParams(p, pp, r, s, m1, l1, m2, l2))
            b = burge_xn(BurgeParams(p, pp, r, s, m1, l1, m2, l2, sigma=sigma))
            assert a == b
            assert render(a) == render(b)
    assert xn_nonintegral_skips() == before


def _child(p, pp, r, s):
    return lambda m1, l1, m2, l2: burge_x(BurgeParams(p, pp, r, s, m1, l1, m2, l2))


def test_bt_equals_direct_wherever_safe():
    mismatches_outside = 0
    for p, pp, r, s in [(1, 2, 0, 1), (2, 3, 1, 1), (1, 3, 0, 1)]:
        for m1, l1, m2, l2 in itertools.product(range(0, 4), repeat=4):
            lhs = burge_x(BurgeParams(p, p + pp, r, r + s, m1, l1, m2, l2))
            rhs = transform_bt(m1, l1, m2, l2, _child(p, pp, r, s), enforce=False)
            if classic_bt_safe(p, pp, r, s, m1, l1, m2, l2):
                assert lhs == rhs, (p, pp, r, s, m1, l1, m2, l2)
            elif lhs != rhs:
                mismatches_outside += 1
    # the scan is not vacuous: outside it the identity really can fail
    assert mismatches_outside > 0


def test_bt2_equals_direct_wherever_safe():
    mismatches_outside = 0
    for p, pp, r, s in [(1, 2, 0, 1), (2, 3, 1, 1), (1, 3, 0, 1)]:
        for m1, l1, m2, l2 in itertools.product(range(0, 4), repeat=4):
            m12, l12 = m1 - m2, l1 - l2
            lhs = burge_x(BurgeParams(pp, p + pp, s - m12, r + s + l12, m1, l1, m2, l2))
            rhs = transform_bt2(m1, l1, m2, l2, _child(p, pp, r, s), enforce=False)
            if classic_bt2_safe(p, pp, r, s, m1, l1, m2, l2):
                assert lhs == rhs, (p, pp, r, s, m1, l1, m2, l2)
            elif lhs != rhs:
                mismatches_outside += 1
    assert mismatches_outside > 0


def test_bt_enforcement_raises():
    # symmetric points are always safe; pick a known-unsafe unsymmetric one
    found = None
    for p, pp, r, s in [(1, 2, 0, 1)]:
        for m1, l1, m2, l2 in itertools.product(range(0, 4), repeat=4):
            if not classic_bt_safe(p, pp, r, s, m1, l1, m2, l2):
                found = (p, pp, r, s, m1, l1, m2, l2)
                break
    assert found is not None
    p, pp, r, s, m1, l1, m2, l2 = found
    with pytest.raises(SufficiencyViolated):
        transform_bt(m1, l1, m2, l2, _child(p, pp, r, s), labels=(p, pp, r, s))


def test_symmetric_transforms_always_hold():
    # no safety side conditions at m1 == m2, l1 == l2
    for p, pp, r, s in LABELS:
        for m in range(0, 5):
            for l in range(0, 5):
                assert classic_bt_safe(p, pp, r, s, m, l, m, l)
                assert classic_bt2_safe(p, pp, r, s, m, l, m, l)
                lhs = burge_x(BurgeParams(p, p + pp, r, r + s, m, l, m, l))
                assert lhs == transform_bt(m, l, m, l, _child(p, pp, r, s))
                lhs = burge_x(BurgeParams(pp, p + pp, s, r + s, m, l, m, l))
                assert lhs == transform_bt2(m, l, m, l, _child(p, pp, r, s))


def _sigma_grid(n, grid):
    for sigma in (0, 1) if n % 2 == 0 else (0,):
        for m in range(0, grid + 1):
            for k in range(0, grid + 1):
                yield sigma, m, k + Fraction(sigma, 2)


@pytest.mark.parametrize("n", [2, 3])
def test_level_n_displays_three_ways(n):
    routes = {
        "tadpole": ((1, 2 * n + 1, 0, n), transform_traf1, "initial"),
        "euler_n": ((2, n + 2, 1, 1), transform_traf2, "initial"),
        "a_n": ((3, n + 3, 1, 1), transform_traf2, "nn"),
        "rr_n": ((2, 3 * n + 2, 1, n + 1), transform_traf1, "euler"),
    }
    for name, (labels, tf, seed) in routes.items():
        p, pp, r, s = labels
        assert closed_form_name(p, pp, r, s, n) == name
        for sigma, m, l in _sigma_grid(n, 3):
            direct = burge_xn(BurgeParams(p, pp, r, s, m, l, m, l, N=n, sigma=sigma))
            form = closed_form(name, m, l, n, sigma)
            route = tf(n, sigma, m, l, lambda a, b: closed_form(seed, a, b))
            assert direct == form == route, (name, n, sigma, m, l)


def test_slater_display_at_level_two():
    for sigma, m, l in _sigma_grid(2, 3):
        a = closed_form("slater", m, l, 2, sigma)
        b = closed_form("rr_n", m, l, 2, sigma)
        c = burge_xn(BurgeParams(2, 8, 1, 3, m, l, m, l, N=2, sigma=sigma))
        assert a == b == c
    with pytest.raises(InvalidParams):
        closed_form("slater", 1, 1, 3, 0)


def test_tadpole_small_value():
    assert render(closed_form("tadpole", 1, 1, 2, 0)) == "q"


def test_unsymmetric_level_transforms_under_sufficiency():
    rng = random.Random(406)
    checked = 0
    for _ in range(400):
        n = rng.choice([2, 3])
        sigma = rng.choice([0, 1])
        m1, m2 = rng.randint(0, 4), rng.randint(0, 4)
        if (m1 - m2 + sigma * n) % 2:
            continue
        sh = Fraction((m1 - m2 + sigma) % 2, 2)
        l1 = rng.randint(0, 3) + sh
        l2 = rng.randint(0, 3) + sh
        p, pp, r, s = rng.choice([(1, 2, 0, 1), (2, 3, 1, 1), (1, 3, 0, 1)])
        probe = BurgeParams(p, pp, r, s, m1, l1, m2, l2, N=n, sigma=sigma)
        if sufficiency(probe, "suf"):
            lhs = burge_xn(
                BurgeParams(p, p + n * pp, r, r + n * s, m1, l1, m2, l2, N=n, sigma=sigma)
            )
            rhs = transform_burgetrafo_n(n, sigma, m1, l1, m2, l2, _child(p, pp, r, s))
            assert lhs == rhs, ("suf", n, sigma, m1, l1, m2, l2, p, pp, r, s)
            checked += 1
        if sufficiency(probe, "suf2"):
            l12 = int(l1 - l2)
            m12 = m1 - m2
            lhs = burge_xn(
                BurgeParams(
                    pp, n * p + pp, s - m12, n * (r + l12 + m12) + s - m12,
                    m1, l1, m2, l2, N=n, sigma=sigma,
                )
            )
            rhs = transform_trafo(n, sigma, m1, l1, m2, l2, _child(p, pp, r, s))
            assert lhs == rhs, ("suf2", n, sigma, m1, l1, m2, l2, p, pp, r, s)
            checked += 1
    assert checked > 100


def test_sufficiency_shapes():
    # the guarantee needs p' > p
    bp = BurgeParams(3, 2, 1, 1, 2, 2, 2, 2, N=2)
    assert not sufficiency(bp, "suf")
    assert not sufficiency(bp, "sufsym")
    # seed labels pass the symmetric predicate for every cap
    for n in (1, 2, 3, 4):
        for l in range(0, 12):
            bp = BurgeParams(1, 2, 0, 1, 0, l, 0, l, N=n)
            assert sufficiency(bp, "sufsym")
    with pytest.raises(InvalidParams):
        sufficiency(BurgeParams(1, 2, 0, 1, 1, 2, 0, 2, N=2), "sufsym")
    with pytest.raises(InvalidParams):
        sufficiency(BurgeParams(1, 2, 0, 1, 0, 2, 0, 2, N=2), "no-such-predicate")


def test_sufficiency_violation_raised_by_level_transforms():
    # a large r pushes the left floor past the right one at small caps
    n = 2
    bp = BurgeParams(1, 2, 3, 3, 0, 0, 0, 0, N=n)
    assert not sufficiency(bp, "sufsym")
    child = lambda m, l: burge_x(BurgeParams(1, 2, 3, 3, m, l, m, l))
    with pytest.raises(SufficiencyViolated):
        transform_traf1(n, 0, 2, 0, child, labels=(1, 2, 3, 3))
    # same call without enforcement still evaluates
    transform_traf1(n, 0, 2, 0, child, labels=(1, 2, 3, 3), enforce=False)


def test_validate_catches_bad_level_params():
    with pytest.raises(InvalidParams):
        BurgeParams(1, 2, 0, 1, 1, 1, 0, 1, N=2).validate()  # M12 + sigma*N odd
    with pytest.raises(InvalidParams):
        BurgeParams(1, 4, 0, 1, 0, 1, 0, 1, N=2).validate()  # (r-s)/N not integral
    with pytest.raises(InvalidParams):
        BurgeParams(2, 1, 0, 1, 0, 1, 0, 1).validate()  # p' < p
    with pytest.raises(InvalidParams):
        BurgeParams(1, 3, 0, 2, 0, Fraction(1, 2), 0, 1, N=2).validate()  # L1 shape
    # a valid half-integer point
    BurgeParams(1, 5, 0, 2, 0, Fraction(1, 2), 0, Fraction(3, 2), N=2, sigma=1).validate()


def test_parity_filter_is_load_bearing():
    # the A-type system admits odd-m integral solutions that the display
    # excludes; the three-way agreement tests above pin the filtered sum down
    cd = cartan(4, "a")
    v = axis_source(cd.rank, [(1, 4)])
    sols = list(enumerate_admissible(cd, v, None))
    assert any(any(x % 2 for x in s.m_vec) for s in sols)
    assert any(all(x % 2 == 0 for x in s.m_vec) for s in sols)
    # the odd-N tadpole system, by contrast, forces even m on its own
    cd = cartan(3, "tadpole")
    for two_l in range(0, 8, 2):
        v = axis_source(cd.rank, [(1, two_l)])
        for sol in enumerate_admissible(cd, v, None):
            assert all(x % 2 == 0 for x in sol.m_vec)


def test_tree_depth3_labels():
    nodes = build_tree(3)
    assert len(nodes) == 15
    labels = {(nd.p, nd.pprime, nd.r, nd.s) for nd in nodes}
    for expected in [(1, 2, 0, 1), (1, 3, 0, 1), (2, 3, 1, 1), (1, 4, 0, 1),
                     (3, 4, 1, 1), (2, 5, 1, 2), (3, 5, 1, 2), (1, 5, 0, 1),
                     (4, 5, 1, 1)]:
        assert expected in labels
    by_depth = {}
    for nd in nodes:
        by_depth.setdefault(nd.depth, []).append(nd)
    assert [len(by_depth[d]) for d in range(4)] == [1, 2, 4, 8]
    for nd in nodes:
        if nd.parent_index is None:
            assert nd.depth == 0 and nd.transform_tag is None
        else:
            parent = nodes[nd.parent_index]
            assert parent.depth == nd.depth - 1
            if nd.transform_tag == "bt":
                assert (nd.p, nd.pprime) == (parent.p, parent.p + parent.pprime)
                assert (nd.r, nd.s) == (parent.r, parent.r + parent.s)
            else:
                assert nd.transform_tag == "bt2"
                assert (nd.p, nd.pprime) == (parent.pprime, parent.p + parent.pprime)
                assert (nd.r, nd.s) == (parent.s, parent.r + parent.s)
    recognized = {nd.closed_form_name for nd in nodes} - {None}
    assert recognized == {"initial", "nn", "euler", "ising", "rr"}
    assert all(nd.verified for nd in nodes if nd.closed_form_name)


def test_tree_level_n_leaves():
    nodes = build_tree(2, n_lat=2, sigma=0)
    # backbone of depth 1 (3 nodes) plus two leaves each
    assert len(nodes) == 9
    leaves = [nd for nd in nodes if nd.N == 2]
    assert len(leaves) == 6
    assert {nd.transform_tag for nd in leaves} == {"traf1", "traf2"}
    forms = {nd.closed_form_name for nd in leaves} - {None}
    assert forms == {"tadpole", "euler_n", "a_n", "rr_n"}
    assert all(nd.verified for nd in leaves if nd.closed_form_name)
    for nd in leaves:
        parent = nodes[nd.parent_index]
        if nd.transform_tag == "traf1":
            assert (nd.p, nd.pprime) == (parent.p, parent.p + 2 * parent.pprime)
            assert (nd.r, nd.s) == (parent.r, parent.r + 2 * parent.s)
        else:
            assert (nd.p, nd.pprime) == (parent.pprime, 2 * parent.p + parent.pprime)
            assert (nd.r, nd.s) == (parent.s, 2 * parent.r + parent.s)


def test_tree_json_export_schema():
    nodes = build_tree(2)
    js = tree_to_json(nodes)
    text = json.dumps(js)
    back = json.loads(text)
    assert len(back) == len(nodes)
    for entry, nd in zip(back, nodes):
        assert entry["labels"] == [nd.p, nd.pprime, nd.r, nd.s, nd.N, nd.sigma]
        assert entry["parent_index"] == nd.parent_index
        assert entry["transform_tag"] == nd.transform_tag
        assert entry["verified"] == nd.verified


def test_tree_rejects_bad_depth_and_sigma():
    with pytest.raises(InvalidParams):
        build_tree(-1)
    with pytest.raises(InvalidParams):
        build_tree(2, n_lat=3, sigma=1)
