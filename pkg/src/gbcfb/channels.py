"""Channel parameter sets and the common/private noise decomposition.

The scalar model is a two-user Gaussian broadcast channel where receiver 1
(the stronger user, smaller noise variance) is passively fed back to the
transmitter through an additive-Gaussian-noise link.  The vector model gives
receiver 1 two antennas with independent noises; the second antenna output is
fed back perfectly.

All values are plain double-precision reals in power units; classification
tolerances are absolute 1e-12.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

CLASS_TOL = 1e-12


class NonPositiveVariance(ValueError):
    """A forward-noise variance is zero or negative."""


class StrongerUserViolation(ValueError):
    """sigma1_sq > sigma2_sq: receiver 1 must be the stronger user."""


class CorrelationOutOfRange(ValueError):
    """|rho| > 1."""


class NegativePower(ValueError):
    """Transmit or feedback power is negative."""


class OutsideClassError(ValueError):
    """Operation requires the decomposable class 0 <= rho <= sqrt(s1/s2)."""


@dataclass(frozen=True)
class ScalarChannel:
    """Scalar broadcast channel with noisy feedback of the strong user's output.

    sigma1_sq, sigma2_sq: forward noise variances (receiver 1 is stronger);
    rho: forward-noise correlation coefficient; power: average transmit power
    constraint; sigma_fb_sq: feedback-link noise variance.
    """

    sigma1_sq: float
    sigma2_sq: float
    rho: float
    power: float
    sigma_fb_sq: float


@dataclass(frozen=True)
class VectorChannel:
    """Two-antenna strong receiver, scalar weak receiver, perfect feedback of antenna 2.

    sigma_a_sq / sigma_b_sq are the antenna-1 / antenna-2 noise variances at
    receiver 1; sigma2_sq is receiver 2's noise variance.  The no-enlargement
    result needs sigma_a_sq <= sigma2_sq (see ``hypothesis_holds``).
    """

    sigma2_sq: float
    sigma_a_sq: float
    sigma_b_sq: float
    power: float

    @property
    def hypothesis_holds(self) -> bool:
        return self.sigma_a_sq <= self.sigma2_sq + CLASS_TOL


@dataclass(frozen=True)
class ClassMembership:
    """Whether a scalar channel admits the common + private noise decomposition."""

    in_class: bool
    reason: str


@dataclass(frozen=True)
class NoiseDecomposition:
    """Variances of the common part Z and the private parts of Z1, Z2.

    var_common + var_private1 == sigma1_sq and var_common + var_private2 ==
    sigma2_sq, exactly (up to clamping of -1e-15-scale negatives).
    """

    var_common: float
    var_private1: float
    var_private2: float


def validate_scalar(sigma1_sq, sigma2_sq, rho, power, sigma_fb_sq) -> ScalarChannel:
    """Validate raw scalars into a ScalarChannel, or raise a specific error."""
    for name, v in (("sigma1_sq", sigma1_sq), ("sigma2_sq", sigma2_sq)):
        if not math.isfinite(v) or v <= 0.0:
            raise NonPositiveVariance(f"{name} must be finite and > 0, got {v}")
    if not math.isfinite(sigma_fb_sq) or sigma_fb_sq < 0.0:
        raise NonPositiveVariance(f"sigma_fb_sq must be finite and >= 0, got {sigma_fb_sq}")
    if sigma1_sq > sigma2_sq:
        raise StrongerUserViolation(
            f"receiver 1 must have the smaller noise variance: {sigma1_sq} > {sigma2_sq}"
        )
    if not math.isfinite(rho) or abs(rho) > 1.0:
        raise CorrelationOutOfRange(f"rho must lie in [-1, 1], got {rho}")
    if not math.isfinite(power) or power < 0.0:
        raise NegativePower(f"power must be finite and >= 0, got {power}")
    return ScalarChannel(float(sigma1_sq), float(sigma2_sq), float(rho),
                         float(power), float(sigma_fb_sq))


def validate_vector(sigma2_sq, sigma_a_sq, sigma_b_sq, power) -> VectorChannel:
    """Validate raw scalars into a VectorChannel, or raise a specific error."""
    for name, v in (("sigma2_sq", sigma2_sq), ("sigma_a_sq", sigma_a_sq),
                    ("sigma_b_sq", sigma_b_sq)):
        if not math.isfinite(v) or v <= 0.0:
            raise NonPositiveVariance(f"{name} must be finite and > 0, got {v}")
    if not math.isfinite(power) or power < 0.0:
        raise NegativePower(f"power must be finite and >= 0, got {power}")
    return VectorChannel(float(sigma2_sq), float(sigma_a_sq), float(sigma_b_sq), float(power))


def classify(ch: ScalarChannel) -> ClassMembership:
    """Test 0 <= rho <= sqrt(sigma1_sq/sigma2_sq) (absolute tolerance 1e-12)."""
    rho_max = math.sqrt(ch.sigma1_sq / ch.sigma2_sq)
    if ch.rho < -CLASS_TOL:
        return ClassMembership(False, f"rho = {ch.rho} < 0")
    if ch.rho > rho_max + CLASS_TOL:
        return ClassMembership(
            False, f"rho = {ch.rho} > sqrt(sigma1_sq/sigma2_sq) = {rho_max}")
    return ClassMembership(True, "0 <= rho <= sqrt(sigma1_sq/sigma2_sq)")


def is_physically_degraded(ch: ScalarChannel) -> bool:
    """True iff rho == sqrt(sigma1_sq/sigma2_sq) within 1e-12."""
    return abs(ch.rho - math.sqrt(ch.sigma1_sq / ch.sigma2_sq)) <= CLASS_TOL


def decompose_noise(ch: ScalarChannel) -> NoiseDecomposition:
    """Split (Z1, Z2) into a common part plus independent private parts.

    var_common = rho*sqrt(sigma1_sq*sigma2_sq); the private variances are the
    remainders.  Requires the channel to be in class (otherwise a private
    variance would be negative).  Tiny negative remainders from roundoff
    (>= -1e-15 scale) are clamped to zero.
    """
    m = classify(ch)
    if not m.in_class:
        raise OutsideClassError(m.reason)
    var_common = ch.rho * math.sqrt(ch.sigma1_sq * ch.sigma2_sq)
    vp1 = ch.sigma1_sq - var_common
    vp2 = ch.sigma2_sq - var_common
    eps = 1e-12 * max(ch.sigma1_sq, ch.sigma2_sq)
    var_common = 0.0 if abs(var_common) <= eps and var_common < 0.0 else var_common
    vp1 = 0.0 if vp1 < 0.0 else vp1
    vp2 = 0.0 if vp2 < 0.0 else vp2
    return NoiseDecomposition(var_common, vp1, vp2)


_SCALAR_KEYS = {"type", "sigma1_sq", "sigma2_sq", "rho", "power", "sigma_fb_sq"}
_VECTOR_KEYS = {"type", "sigma2_sq", "sigma_a_sq", "sigma_b_sq", "power"}


def channel_from_obj(obj) -> ScalarChannel | VectorChannel:
    """Build a channel from a parsed JSON object; unknown or missing keys are rejected."""
    if not isinstance(obj, dict):
        raise ValueError("channel JSON must be an object")
    kind = obj.get("type")
    if kind == "scalar":
        expected = _SCALAR_KEYS
    elif kind == "vector":
        expected = _VECTOR_KEYS
    else:
        raise ValueError(f'channel "type" must be "scalar" or "vector", got {kind!r}')
    unknown = set(obj) - expected
    if unknown:
        raise ValueError(f"unknown channel keys: {sorted(unknown)}")
    missing = expected - set(obj)
    if missing:
        raise ValueError(f"missing channel keys: {sorted(missing)}")
    if kind == "scalar":
        return validate_scalar(obj["sigma1_sq"], obj["sigma2_sq"], obj["rho"],
                               obj["power"], obj["sigma_fb_sq"])
    return validate_vector(obj["sigma2_sq"], obj["sigma_a_sq"], obj["sigma_b_sq"],
                           obj["power"])


def load_channel(path: str) -> ScalarChannel | VectorChannel:
    with open(path, "r", encoding="utf-8") as fh:
        return channel_from_obj(json.load(fh))


def channel_to_obj(ch: ScalarChannel | VectorChannel) -> dict:
    if isinstance(ch, ScalarChannel):
        return {"type": "scalar", "sigma1_sq": ch.sigma1_sq, "sigma2_sq": ch.sigma2_sq,
                "rho": ch.rho, "power": ch.power, "sigma_fb_sq": ch.sigma_fb_sq}
    return {"type": "vector", "sigma2_sq": ch.sigma2_sq, "sigma_a_sq": ch.sigma_a_sq,
            "sigma_b_sq": ch.sigma_b_sq, "power": ch.power}
