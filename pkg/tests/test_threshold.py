import math

import numpy as np
import pytest

import gbcfb as g
from gbcfb.threshold import BadGridSpec

from conftest import random_inclass_channel


def test_threshold_independent_noise_example():
    rep = g.threshold(g.validate_scalar(1, 2, 0, 10, 1))
    assert rep.threshold_sigma_fb_sq == pytest.approx(1.0, abs=1e-15)
    assert rep.verdict == g.Verdict.COVERED_USELESS      # boundary inclusive
    assert rep.alpha == pytest.approx(1.0)
    assert rep.residual_var == pytest.approx(2.0)        # equals var_private2


def test_threshold_degraded_is_zero():
    rep = g.threshold(g.validate_scalar(1, 4, 0.5, 10, 1))
    assert rep.threshold_sigma_fb_sq == 0.0
    assert rep.verdict == g.Verdict.COVERED_USELESS


def test_threshold_correlated_example():
    rep = g.threshold(g.validate_scalar(1, 4, 0.25, 10, 2))
    assert rep.threshold_sigma_fb_sq == pytest.approx(1 / 12, rel=1e-12)
    assert rep.verdict == g.Verdict.COVERED_USELESS
    assert rep.alpha == pytest.approx(0.25)
    assert rep.residual_var == pytest.approx(0.625)


def test_feedback_useless_tristate():
    assert g.feedback_useless(g.validate_scalar(1, 2, 0, 10, 1.0)) == g.Verdict.COVERED_USELESS
    assert g.feedback_useless(g.validate_scalar(1, 2, 0, 10, 0.5)) == g.Verdict.NOT_COVERED
    assert g.feedback_useless(g.validate_scalar(1, 4, 1.0, 10, 3.0)) == g.Verdict.OUTSIDE_CLASS


def test_equal_variances_degenerate():
    rep = g.threshold(g.validate_scalar(2, 2, 0.3, 10, 5.0))
    assert math.isinf(rep.threshold_sigma_fb_sq)
    assert rep.verdict == g.Verdict.NOT_COVERED
    rep = g.threshold(g.validate_scalar(2, 2, 1.0, 10, 5.0))   # identical channels
    assert rep.threshold_sigma_fb_sq == 0.0
    assert rep.verdict == g.Verdict.COVERED_USELESS


def test_perfect_feedback_marker():
    rep = g.threshold(g.validate_scalar(1, 2, 0, 10, 0.0))
    assert rep.alpha is None
    assert rep.verdict == g.Verdict.NOT_COVERED
    rep = g.threshold(g.validate_scalar(1, 4, 0.5, 10, 0.0))   # degraded
    assert rep.alpha is None
    assert rep.verdict == g.Verdict.COVERED_USELESS
    assert rep.residual_var == 0.0


def test_formulation_equivalence_property():
    rng = np.random.default_rng(321)
    checked = 0
    for _ in range(10_000):
        ch = random_inclass_channel(rng, strict_gap=True, fb_positive=True)
        rep = g.threshold(ch)
        dec = g.decompose_noise(ch)
        lhs = ch.sigma_fb_sq - rep.threshold_sigma_fb_sq
        rhs = dec.var_private2 - rep.residual_var
        if abs(lhs) <= 1e-10 or abs(rhs) <= 1e-10:
            continue
        assert (lhs > 0) == (rhs > 0)
        checked += 1
    assert checked > 9000


def test_degraded_threshold_zero_property():
    rng = np.random.default_rng(11)
    for _ in range(1000):
        s1 = rng.uniform(0.1, 5)
        s2 = s1 * rng.uniform(1.0, 5)
        ch = g.validate_scalar(s1, s2, math.sqrt(s1 / s2), 1.0, rng.uniform(0, 2))
        assert g.threshold(ch).threshold_sigma_fb_sq <= 1e-12


def test_threshold_monotone_in_rho():
    for s1, s2 in [(1.0, 2.0), (0.5, 3.0), (2.0, 2.5)]:
        rho_max = math.sqrt(s1 / s2)
        last = math.inf
        for rho in np.linspace(0.0, rho_max, 200):
            thr = g.threshold(g.validate_scalar(s1, s2, rho, 1, 1)).threshold_sigma_fb_sq
            assert thr <= last + 1e-12
            last = thr


def test_phase_map_examples_and_order():
    rows = g.phase_map(2.0, 5.0, 1.0)
    table = {(r.x, r.y): r.useless for r in rows}
    assert table[(1.0, 3.0)] is True        # 3 >= 1 + 1
    assert table[(2.0, 5.0)] is False       # 5 < 2 + 4
    assert all(r.y >= r.x for r in rows)
    keys = [(r.x, r.y) for r in rows]
    assert keys == sorted(keys)             # row-major x then y
    tiny = g.phase_map(0.0001, 4.0, 0.0001)
    # x -> 0: nearly the whole half-plane is covered
    assert sum(r.useless for r in tiny) >= 0.99 * len(tiny)


def test_phase_map_bad_grid():
    with pytest.raises(BadGridSpec):
        g.phase_map(5.2, 5.2, 0.0)
    with pytest.raises(BadGridSpec):
        g.phase_map(1.0, 1.0, 2.0)


def test_phase_map_matches_curve():
    for row in g.phase_map(5.2, 5.2, 0.05):
        margin = row.y - (row.x + row.x ** 2)
        if abs(margin) > 1e-9:
            assert row.useless == (margin > 0)
