"""Shared random-instance generators for the test suite (all seeded)."""

import math

import numpy as np

import gbcfb as g


def random_inclass_channel(rng, strict_gap=False, fb_positive=False):
    """Random channel satisfying the decomposition class condition."""
    s1 = rng.uniform(0.2, 3.0)
    ratio = rng.uniform(1.05, 4.0) if strict_gap else rng.uniform(1.0, 4.0)
    s2 = s1 * ratio
    rho = rng.uniform(0.0, math.sqrt(s1 / s2))
    p = rng.uniform(1.0, 20.0)
    sfb = rng.uniform(0.05, 3.0) if fb_positive else rng.uniform(0.0, 3.0)
    return g.validate_scalar(s1, s2, rho, p, sfb)


def random_covered_channel(rng):
    """Random channel whose feedback-noise variance is at or above threshold."""
    s1 = rng.uniform(0.2, 3.0)
    ratio = rng.uniform(1.1, 4.0)
    s2 = s1 * ratio
    rho = rng.uniform(0.0, 0.95 * math.sqrt(s1 / s2))
    p = rng.uniform(1.0, 20.0)
    base = g.validate_scalar(s1, s2, rho, p, 1.0)
    thr = g.threshold(base).threshold_sigma_fb_sq
    sfb = thr * rng.uniform(1.0, 2.5) + rng.uniform(0.01, 0.5)
    ch = g.validate_scalar(s1, s2, rho, p, sfb)
    assert g.feedback_useless(ch) == g.Verdict.COVERED_USELESS
    return ch


def random_vector_channel(rng, hypothesis=True):
    """Random two-antenna channel; hypothesis=True forces sigma_a_sq <= sigma2_sq."""
    sa = rng.uniform(0.2, 3.0)
    sb = rng.uniform(0.2, 4.0)
    s2 = sa * rng.uniform(1.0, 3.0) if hypothesis else sa * rng.uniform(0.3, 0.99)
    p = rng.uniform(1.0, 20.0)
    return g.validate_vector(s2, sa, sb, p)


def random_normalized_scheme(n, ch, rng):
    """Random scheme normalized to the channel's power constraint."""
    for _ in range(50):
        s = g.sample_scheme(n, rng)
        try:
            return g.normalize_power(s, ch, ch.power)
        except Exception:
            s = g.LinearScheme(n, s.msg1_coeffs, s.msg2_coeffs, 0.5 * np.asarray(s.fb_coeffs))
    raise RuntimeError("could not draw a normalizable scheme")
