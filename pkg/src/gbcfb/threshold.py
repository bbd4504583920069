"""Feedback-noise-variance threshold analysis and the phase map.

For an in-class scalar channel (0 <= rho <= sqrt(sigma1_sq/sigma2_sq)) with
sigma1_sq < sigma2_sq, noisy feedback of the strong user's signal cannot
enlarge the capacity region once

    sigma_fb_sq >= sigma1_sq * (1 - rho*sqrt(sigma2_sq/sigma1_sq))^2
                   / (sigma2_sq/sigma1_sq - 1)
                =  var_private1^2 / (sigma2_sq - sigma1_sq).

The equivalent residual form: with the combining coefficient
alpha = var_private1/sigma_fb_sq (chosen so that the feedback-corrected
private noise is independent of what the encoder observes),

    Var(private1 - alpha*Zfb) = var_private1 + alpha^2*sigma_fb_sq
                             <= var_private2

holds exactly when sigma_fb_sq is at or above the threshold.

Verdicts are tri-state: CoveredUseless (threshold met, feedback provably
useless), NotCovered (the threshold condition fails -- the analysis is
silent, NOT a claim that feedback helps), OutsideClass.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .channels import (ClassMembership, ScalarChannel, classify,
                       decompose_noise, validate_scalar)


class BadGridSpec(ValueError):
    """Phase-map grid spec with non-positive or oversized step."""


class Verdict(str, Enum):
    COVERED_USELESS = "covered_useless"
    NOT_COVERED = "not_covered"
    OUTSIDE_CLASS = "outside_class"


@dataclass(frozen=True)
class ThresholdReport:
    """Threshold evaluation for one channel.

    threshold_sigma_fb_sq is math.inf when sigma1_sq == sigma2_sq with
    rho < 1, and None when the channel is outside class.  alpha is None when
    sigma_fb_sq == 0 (perfect feedback: no finite combining coefficient).
    """

    applies: ClassMembership
    threshold_sigma_fb_sq: float | None
    alpha: float | None
    residual_var: float | None
    verdict: Verdict


@dataclass(frozen=True)
class PhaseMapRow:
    x: float         # sigma1_sq / sigma_fb_sq
    y: float         # sigma2_sq / sigma_fb_sq
    useless: bool


def threshold(ch: ScalarChannel) -> ThresholdReport:
    """Evaluate the feedback-noise threshold and both condition formulations."""
    membership = classify(ch)
    if not membership.in_class:
        return ThresholdReport(membership, None, None, None, Verdict.OUTSIDE_CLASS)
    dec = decompose_noise(ch)
    vp1 = dec.var_private1
    gap = ch.sigma2_sq - ch.sigma1_sq
    if vp1 == 0.0:
        thr = 0.0          # physically degraded: feedback useless at any noise level
    elif gap == 0.0:
        thr = math.inf     # equal variances, rho < 1: the condition is never met
    else:
        thr = vp1 * vp1 / gap
    if ch.sigma_fb_sq == 0.0:
        alpha = None
        residual = 0.0 if vp1 == 0.0 else math.inf
        verdict = Verdict.COVERED_USELESS if thr == 0.0 else Verdict.NOT_COVERED
    else:
        alpha = vp1 / ch.sigma_fb_sq
        residual = vp1 + alpha * alpha * ch.sigma_fb_sq
        verdict = (Verdict.COVERED_USELESS if ch.sigma_fb_sq >= thr
                   else Verdict.NOT_COVERED)
    return ThresholdReport(membership, thr, alpha, residual, verdict)


def feedback_useless(ch: ScalarChannel) -> Verdict:
    """Tri-state verdict; NotCovered means the analysis is silent."""
    return threshold(ch).verdict


def phase_map(x_max: float, y_max: float, step: float) -> list[PhaseMapRow]:
    """Grid classification in the (sigma1_sq/sigma_fb_sq, sigma2_sq/sigma_fb_sq) plane.

    Independent forward noises (rho = 0) and sigma_fb_sq = 1 normalization;
    points with y < x are skipped (receiver 1 must be stronger).  Rows come
    out in row-major x-then-y order.
    """
    if not (step > 0.0) or not math.isfinite(step):
        raise BadGridSpec(f"step must be > 0, got {step}")
    if step > x_max or step > y_max:
        raise BadGridSpec(f"step {step} exceeds grid extent ({x_max}, {y_max})")
    nx = int(math.floor(x_max / step + 1e-9))
    ny = int(math.floor(y_max / step + 1e-9))
    rows = []
    for ix in range(1, nx + 1):
        x = ix * step
        for iy in range(ix, ny + 1):
            y = iy * step
            ch = validate_scalar(x, y, 0.0, 1.0, 1.0)
            rows.append(PhaseMapRow(x, y, feedback_useless(ch) == Verdict.COVERED_USELESS))
    return rows
