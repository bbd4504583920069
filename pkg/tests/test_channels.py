import json
import math

import numpy as np
import pytest

import gbcfb as g
from gbcfb.channels import (CorrelationOutOfRange, NegativePower,
                            NonPositiveVariance, StrongerUserViolation)


def test_validate_scalar_accepts_basic_channel():
    ch = g.validate_scalar(1, 2, 0, 10, 1)
    assert (ch.sigma1_sq, ch.sigma2_sq, ch.rho, ch.power, ch.sigma_fb_sq) == (1, 2, 0, 10, 1)


def test_validate_scalar_rejections():
    with pytest.raises(StrongerUserViolation):
        g.validate_scalar(2, 1, 0, 10, 1)
    with pytest.raises(CorrelationOutOfRange):
        g.validate_scalar(1, 4, 1.5, 10, 1)
    with pytest.raises(NonPositiveVariance):
        g.validate_scalar(0, 1, 0, 10, 1)
    with pytest.raises(NonPositiveVariance):
        g.validate_scalar(1, 2, 0, 10, -0.5)
    with pytest.raises(NegativePower):
        g.validate_scalar(1, 2, 0, -1, 1)


def test_classify_examples():
    assert g.classify(g.validate_scalar(1, 4, 0.25, 1, 0)).in_class
    assert not g.classify(g.validate_scalar(1, 4, 1.0, 1, 0)).in_class
    assert g.classify(g.validate_scalar(1, 1, 1.0, 1, 0)).in_class
    assert not g.classify(g.validate_scalar(1, 4, -0.1, 1, 0)).in_class


def test_decompose_examples():
    dec = g.decompose_noise(g.validate_scalar(1, 4, 0.25, 1, 0))
    assert (dec.var_common, dec.var_private1, dec.var_private2) == pytest.approx((0.5, 0.5, 3.5))
    dec = g.decompose_noise(g.validate_scalar(1, 4, 0.0, 1, 0))
    assert (dec.var_common, dec.var_private1, dec.var_private2) == (0.0, 1.0, 4.0)
    dec = g.decompose_noise(g.validate_scalar(1, 4, 0.5, 1, 0))
    assert (dec.var_common, dec.var_private1, dec.var_private2) == pytest.approx((1.0, 0.0, 3.0), abs=1e-15)


def test_decompose_rejects_outside_class():
    with pytest.raises(g.OutsideClassError):
        g.decompose_noise(g.validate_scalar(1, 4, 1.0, 1, 0))


def test_is_physically_degraded():
    assert g.is_physically_degraded(g.validate_scalar(1, 4, 0.5, 1, 0))
    assert not g.is_physically_degraded(g.validate_scalar(1, 4, 0.0, 1, 0))
    assert g.is_physically_degraded(g.validate_scalar(1, 1, 1.0, 1, 0))


def test_validate_vector():
    vch = g.validate_vector(2, 1, 3, 9)
    assert vch.hypothesis_holds
    vch = g.validate_vector(1, 2, 3, 9)
    assert not vch.hypothesis_holds
    with pytest.raises(NonPositiveVariance):
        g.validate_vector(2, 0, 3, 9)
    with pytest.raises(NegativePower):
        g.validate_vector(2, 1, 3, -9)


def test_decomposition_roundtrip_property():
    rng = np.random.default_rng(1234)
    for _ in range(10_000):
        s1 = rng.uniform(0.1, 5.0)
        s2 = s1 * rng.uniform(1.0, 5.0)
        rho = rng.uniform(0.0, math.sqrt(s1 / s2))
        ch = g.validate_scalar(s1, s2, rho, 1.0, 0.0)
        dec = g.decompose_noise(ch)
        assert dec.var_common >= 0.0 and dec.var_private1 >= 0.0 and dec.var_private2 >= 0.0
        assert dec.var_common + dec.var_private1 == pytest.approx(s1, rel=1e-12)
        assert dec.var_common + dec.var_private2 == pytest.approx(s2, rel=1e-12)
        if dec.var_common > 0:
            rho_back = dec.var_common / math.sqrt(s1 * s2)
            assert rho_back == pytest.approx(rho, rel=1e-12, abs=1e-13)


def test_private1_vanishes_exactly_when_degraded():
    rng = np.random.default_rng(99)
    for _ in range(2000):
        s1 = rng.uniform(0.1, 5.0)
        s2 = s1 * rng.uniform(1.0, 5.0)
        if rng.uniform() < 0.5:
            rho = math.sqrt(s1 / s2)          # degraded boundary
        else:
            rho = rng.uniform(0.0, math.sqrt(s1 / s2))
        ch = g.validate_scalar(s1, s2, rho, 1.0, 0.0)
        dec = g.decompose_noise(ch)
        if g.is_physically_degraded(ch):
            assert dec.var_private1 <= 1e-12 * max(s1, s2)
        else:
            assert dec.var_private1 > 0.0


def test_classify_monotone_in_rho():
    for s1, s2 in [(1.0, 4.0), (0.5, 0.7), (2.0, 2.0)]:
        rho_max = math.sqrt(s1 / s2)
        for rho in np.linspace(0.0, rho_max, 50):
            assert g.classify(g.validate_scalar(s1, s2, rho, 1, 0)).in_class
        for rho in np.linspace(rho_max + 1e-6, 1.0, 20):
            if rho > 1.0 or rho <= rho_max:
                continue
            assert not g.classify(g.validate_scalar(s1, s2, rho, 1, 0)).in_class


def test_channel_json_roundtrip():
    obj = {"type": "scalar", "sigma1_sq": 1, "sigma2_sq": 2, "rho": 0.1,
           "power": 10, "sigma_fb_sq": 1}
    ch = g.channel_from_obj(obj)
    assert isinstance(ch, g.ScalarChannel)
    vobj = {"type": "vector", "sigma2_sq": 2, "sigma_a_sq": 1, "sigma_b_sq": 3, "power": 9}
    vch = g.channel_from_obj(vobj)
    assert isinstance(vch, g.VectorChannel)


def test_channel_json_strict_keys():
    with pytest.raises(ValueError, match="unknown"):
        g.channel_from_obj({"type": "scalar", "sigma1_sq": 1, "sigma2_sq": 2,
                            "rho": 0, "power": 1, "sigma_fb_sq": 0, "extra": 1})
    with pytest.raises(ValueError, match="missing"):
        g.channel_from_obj({"type": "scalar", "sigma1_sq": 1})
    with pytest.raises(ValueError, match="type"):
        g.channel_from_obj({"sigma1_sq": 1})


def test_load_channel(tmp_path):
    path = tmp_path / "ch.json"
    path.write_text(json.dumps({"type": "scalar", "sigma1_sq": 1, "sigma2_sq": 2,
                                "rho": 0.0, "power": 10, "sigma_fb_sq": 1}))
    ch = g.load_channel(str(path))
    assert ch == g.validate_scalar(1, 2, 0, 10, 1)
