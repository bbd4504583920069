"""No-feedback capacity region boundaries and membership tests.

The scalar region is the superposition-coding region: for a power split
theta in [0, 1],

    r1 = (1/2) log2(1 + theta*P / sigma1_sq)
    r2 = (1/2) log2(1 + (1-theta)*P / (theta*P + sigma2_sq))

The two-antenna vector region is the same with sigma1_sq replaced by the
maximal-ratio-combining effective variance sigma_e_sq,
1/sigma_e_sq = 1/sigma_a_sq + 1/sigma_b_sq.

Rates are in bits per channel use.  The region is downward closed (a rate
pair is in the region iff it is dominated by a boundary point).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .channels import ScalarChannel, VectorChannel


class ThetaOutOfRange(ValueError):
    """Power split theta must lie in [0, 1]."""


@dataclass(frozen=True)
class RatePair:
    r1_bits: float
    r2_bits: float


@dataclass(frozen=True)
class RegionPoint:
    theta: float
    rates: RatePair


@dataclass(frozen=True)
class MrcDecomposition:
    """Effective noise of the maximal ratio combiner at the two-antenna receiver.

    sigma_e_sq = sigma_a_sq*sigma_b_sq/(sigma_a_sq+sigma_b_sq); the combiner
    noise's covariance with the antenna-2 noise equals the same value.
    """

    sigma_e_sq: float
    cross_cov: float


def _check_theta(theta: float) -> float:
    if not (0.0 <= theta <= 1.0):
        raise ThetaOutOfRange(f"theta must be in [0, 1], got {theta}")
    return float(theta)


def _effective_strong_var(ch: ScalarChannel | VectorChannel) -> float:
    if isinstance(ch, ScalarChannel):
        return ch.sigma1_sq
    return mrc_params(ch).sigma_e_sq


def mrc_params(vch: VectorChannel) -> MrcDecomposition:
    """Harmonic combination of the two antenna noise variances."""
    se = vch.sigma_a_sq * vch.sigma_b_sq / (vch.sigma_a_sq + vch.sigma_b_sq)
    return MrcDecomposition(sigma_e_sq=se, cross_cov=se)


def scalar_rate_pair(ch: ScalarChannel, theta: float) -> RegionPoint:
    """Boundary point of the scalar no-feedback region at power split theta."""
    theta = _check_theta(theta)
    p = ch.power
    r1 = 0.5 * math.log2(1.0 + theta * p / ch.sigma1_sq)
    r2 = 0.5 * math.log2(1.0 + (1.0 - theta) * p / (theta * p + ch.sigma2_sq))
    return RegionPoint(theta, RatePair(r1, r2))


def vector_rate_pair(vch: VectorChannel, theta: float) -> RegionPoint:
    """Boundary point of the two-antenna no-feedback region at power split theta."""
    theta = _check_theta(theta)
    p = vch.power
    se = mrc_params(vch).sigma_e_sq
    r1 = 0.5 * math.log2(1.0 + theta * p / se)
    r2 = 0.5 * math.log2(1.0 + (1.0 - theta) * p / (theta * p + vch.sigma2_sq))
    return RegionPoint(theta, RatePair(r1, r2))


def rate_pair(ch: ScalarChannel | VectorChannel, theta: float) -> RegionPoint:
    if isinstance(ch, ScalarChannel):
        return scalar_rate_pair(ch, theta)
    return vector_rate_pair(ch, theta)


def boundary(ch: ScalarChannel | VectorChannel, num_points: int) -> list[RegionPoint]:
    """Boundary sweep at theta = k/(num_points-1), k = 0..num_points-1."""
    if num_points < 2:
        raise ValueError(f"num_points must be >= 2, got {num_points}")
    return [rate_pair(ch, k / (num_points - 1)) for k in range(num_points)]


def contains(ch: ScalarChannel | VectorChannel, rp: RatePair, tol: float) -> bool:
    """Whether rp is dominated by some boundary point, within tol per coordinate.

    Inverts theta from r1 in closed form (theta = s*(2^(2 r1) - 1)/P with s
    the effective strong-user variance, clamped to [0, 1]) and compares r2
    against the boundary there.
    """
    if tol < 0.0:
        raise ValueError(f"tol must be >= 0, got {tol}")
    s = _effective_strong_var(ch)
    p = ch.power
    if p == 0.0:
        return rp.r1_bits <= tol and rp.r2_bits <= tol
    r1_max = 0.5 * math.log2(1.0 + p / s)
    if rp.r1_bits > r1_max + tol:
        return False
    theta = s * (2.0 ** (2.0 * rp.r1_bits) - 1.0) / p
    theta = min(max(theta, 0.0), 1.0)
    r2_bound = rate_pair(ch, theta).rates.r2_bits
    return rp.r2_bits <= r2_bound + tol


def dominance_excess(ch: ScalarChannel | VectorChannel, rp: RatePair) -> float:
    """Signed excess (bits) of rp beyond the boundary; <= 0 means dominated.

    Same closed-form theta inversion as `contains`: the excess is how far r2
    overshoots the boundary at the theta implied by r1 (or, past the theta=1
    endpoint, the worse of the two coordinate overshoots).
    """
    s = _effective_strong_var(ch)
    p = ch.power
    if p == 0.0:
        return max(rp.r1_bits, rp.r2_bits)
    r1_max = 0.5 * math.log2(1.0 + p / s)
    if rp.r1_bits > r1_max:
        return max(rp.r1_bits - r1_max, rp.r2_bits - rate_pair(ch, 1.0).rates.r2_bits)
    theta = min(max(s * (2.0 ** (2.0 * rp.r1_bits) - 1.0) / p, 0.0), 1.0)
    return rp.r2_bits - rate_pair(ch, theta).rates.r2_bits
