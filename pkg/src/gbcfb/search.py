"""Randomized search over power-normalized linear schemes.

Probes the no-feedback boundary with random-restart hill climbing over the
scheme coefficients.  Above the feedback-noise threshold this should find
nothing outside the region (a consequence check, not a proof); with a
noiseless feedback link it acts as a positive control for enlargement.

The reported violation is the larger of two excesses, both in bits:

* weighted: mu*r1 + (1-mu)*r2 minus the boundary support in that direction
  (computed over a dense theta sweep);
* dominance: how far the pair sticks out past the boundary point whose r1
  matches (closed-form theta inversion).

<= 0 means the point is inside the region.  Results are bit-for-bit
deterministic for a fixed (channel, config): restart lanes run sequentially,
each with its own counter-based generator keyed by a hash of seed XOR lane
index.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, replace

import numpy as np

from .channels import ScalarChannel, VectorChannel
from .regions import RatePair, dominance_excess, mrc_params, rate_pair
from .schemes import (LinearScheme, PowerNotAttainable, ZeroScheme, evaluate,
                      normalize_power, sample_scheme, scheme_to_obj,
                      superposition_scheme)

_MASK64 = (1 << 64) - 1
_BASELINE_POINTS = 21
_STEP_DECAY_AFTER = 50
_MIN_STEP = 1e-6
_SWEEP = 100_000


@dataclass(frozen=True)
class SearchConfig:
    horizon_n: int
    mu: float = 0.5
    budget: int = 1000
    restarts: int = 8
    step_scale: float = 0.5
    seed: int = 0
    tol: float = 1e-9


@dataclass(frozen=True, eq=False)
class SearchResult:
    best_scheme: LinearScheme
    best_rates: RatePair
    violation_bits: float
    evaluations_used: int
    certified: bool
    seed: int
    mu: float

    def to_obj(self) -> dict:
        return {"best_rates": {"r1_bits": self.best_rates.r1_bits,
                               "r2_bits": self.best_rates.r2_bits},
                "violation_bits": self.violation_bits,
                "certified": self.certified,
                "seed": self.seed,
                "evaluations": self.evaluations_used,
                "mu": self.mu,
                "scheme": scheme_to_obj(self.best_scheme)}


def _splitmix64(x: int) -> int:
    x = (x + 0x9E3779B97F4A7C15) & _MASK64
    z = x
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return (z ^ (z >> 31)) & _MASK64


def _boundary_arrays(ch, num):
    thetas = np.linspace(0.0, 1.0, num)
    p = ch.power
    if isinstance(ch, ScalarChannel):
        s = ch.sigma1_sq
    else:
        s = mrc_params(ch).sigma_e_sq
    r1 = 0.5 * np.log2(1.0 + thetas * p / s)
    r2 = 0.5 * np.log2(1.0 + (1.0 - thetas) * p / (thetas * p + ch.sigma2_sq))
    return r1, r2


def violation_bits(ch, rates: RatePair, mu: float, sweep: int = _SWEEP) -> float:
    """max(weighted excess along mu, coordinate-dominance excess), in bits."""
    r1, r2 = _boundary_arrays(ch, sweep)
    support = float(np.max(mu * r1 + (1.0 - mu) * r2))
    weighted = mu * rates.r1_bits + (1.0 - mu) * rates.r2_bits - support
    return max(weighted, dominance_excess(ch, rates))


def _objective(rates: RatePair, mu: float) -> float:
    return mu * rates.r1_bits + (1.0 - mu) * rates.r2_bits


def _scheme_key(s: LinearScheme) -> str:
    return json.dumps(scheme_to_obj(s), sort_keys=True)


class _Budget:
    def __init__(self, total):
        self.left = total
        self.used = 0

    def take(self):
        if self.left <= 0:
            return False
        self.left -= 1
        self.used += 1
        return True


def _params_of(s: LinearScheme) -> np.ndarray:
    n = s.horizon_n
    lower = [s.fb_coeffs[i, j] for i in range(n) for j in range(i)]
    return np.concatenate([s.msg1_coeffs, s.msg2_coeffs, np.array(lower)])


def _scheme_of(n: int, params: np.ndarray) -> LinearScheme:
    a = params[:n]
    b = params[n:2 * n]
    c = np.zeros((n, n))
    k = 2 * n
    for i in range(n):
        for j in range(i):
            c[i, j] = params[k]
            k += 1
    return LinearScheme(n, a, b, c)


def _try_normalize(s: LinearScheme, ch, target):
    """Normalize to the power constraint, shrinking feedback taps if their
    noise-driven floor makes the target unreachable."""
    for _ in range(40):
        try:
            return normalize_power(s, ch, target)
        except PowerNotAttainable:
            s = LinearScheme(s.horizon_n, s.msg1_coeffs, s.msg2_coeffs,
                             0.5 * s.fb_coeffs)
        except ZeroScheme:
            return None
    return None


def search(ch: ScalarChannel | VectorChannel, cfg: SearchConfig) -> SearchResult:
    """Random-restart hill climbing over power-normalized schemes.

    The superposition theta-sweep baseline is always in the initial
    population (scored in closed form, then the best of it confirmed with one
    budgeted evaluate call), so the no-feedback boundary is never lost.
    Budget counts evaluate() calls; the remainder after the baseline is split
    across `restarts` sequential lanes.
    """
    if cfg.budget < 1:
        raise ValueError(f"budget must be >= 1, got {cfg.budget}")
    if not (0.0 <= cfg.mu <= 1.0):
        raise ValueError(f"mu must be in [0, 1], got {cfg.mu}")
    n = cfg.horizon_n
    budget = _Budget(cfg.budget)

    # Superposition baseline: best single-letter power split for this weight.
    sweep = [rate_pair(ch, k / (_BASELINE_POINTS - 1)) for k in range(_BASELINE_POINTS)]
    best_theta = max(sweep, key=lambda pt: _objective(pt.rates, cfg.mu)).theta
    incumbent = superposition_scheme(ch, best_theta, n=1)
    budget.take()
    best_eval = evaluate(incumbent, ch)
    best = (incumbent, best_eval.rates)

    def better(cand_scheme, cand_rates, cur):
        cand_obj = _objective(cand_rates, cfg.mu)
        cur_obj = _objective(cur[1], cfg.mu)
        if cand_obj > cur_obj:
            return True
        if cand_obj == cur_obj:
            return _scheme_key(cand_scheme) < _scheme_key(cur[0])
        return False

    lanes = max(cfg.restarts, 1)
    shares = [budget.left // lanes + (1 if r < budget.left % lanes else 0)
              for r in range(lanes)]
    scale_ab = max(1.0, math.sqrt(ch.power))
    for lane, share in enumerate(shares):
        if share <= 0:
            continue
        rng = np.random.Generator(np.random.Philox(_splitmix64(cfg.seed ^ lane)))
        lane_budget = _Budget(share)
        lane_budget.left = min(lane_budget.left, budget.left)

        def draw_start(seed_with_superposition):
            if seed_with_superposition:
                cand = _try_normalize(superposition_scheme(ch, best_theta, n), ch, ch.power)
                if cand is not None:
                    return cand
            for _ in range(64):
                cand = _try_normalize(sample_scheme(n, rng), ch, ch.power)
                if cand is not None:
                    return cand
            return None

        current = draw_start(lane == 0)
        if current is None or not (budget.take() and lane_budget.take()):
            break
        cur_rates = evaluate(current, ch).rates
        cur_params = _params_of(current)
        if better(current, cur_rates, best):
            best = (current, cur_rates)
        step = cfg.step_scale
        stale = 0
        while lane_budget.left > 0 and budget.left > 0:
            noise = rng.standard_normal(cur_params.size)
            noise[:2 * n] *= step * scale_ab
            noise[2 * n:] *= step * 0.5
            cand = _try_normalize(_scheme_of(n, cur_params + noise), ch, ch.power)
            if cand is not None:
                budget.take()
                lane_budget.take()
                cand_rates = evaluate(cand, ch).rates
                if better(cand, cand_rates, (current, cur_rates)):
                    current, cur_rates = cand, cand_rates
                    cur_params = _params_of(cand)
                    stale = 0
                    if better(cand, cand_rates, best):
                        best = (cand, cand_rates)
                    continue
            stale += 1
            if stale >= _STEP_DECAY_AFTER:
                step *= 0.5
                stale = 0
                if step < _MIN_STEP:
                    # restart this lane from a fresh random draw
                    step = cfg.step_scale
                    nxt = draw_start(False)
                    if nxt is None or not (budget.left > 0 and lane_budget.left > 0):
                        break
                    budget.take()
                    lane_budget.take()
                    current = nxt
                    cur_rates = evaluate(current, ch).rates
                    cur_params = _params_of(current)
                    if better(current, cur_rates, best):
                        best = (current, cur_rates)

    viol = violation_bits(ch, best[1], cfg.mu)
    return SearchResult(best_scheme=best[0], best_rates=best[1],
                        violation_bits=viol, evaluations_used=budget.used,
                        certified=False, seed=cfg.seed, mu=cfg.mu)


def certify(res: SearchResult, ch: ScalarChannel | VectorChannel) -> SearchResult:
    """Re-evaluate the best scheme at tightened numerical settings and recompute
    the violation against a 10^5-point boundary sweep."""
    ev = evaluate(res.best_scheme, ch, jitter_scale=1e-15, pinv_rtol=1e-15)
    viol = violation_bits(ch, ev.rates, res.mu, sweep=_SWEEP)
    return replace(res, best_rates=ev.rates, violation_bits=viol, certified=True)
