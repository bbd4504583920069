"""Linear-Gaussian feedback coding schemes and converse-chain verification.

A scheme over horizon n transmits

    X_i = a_i*M1 + b_i*M2 + sum_{j<i} C[i][j]*F_j

where M1, M2 are independent unit-variance Gaussian surrogates for the two
messages and F_j is the feedback observation: the strong user's noisy output
Y1_j + Zfb_j in the scalar model, the second antenna output Y12_j in the
vector model.  Because everything is jointly Gaussian, second moments (and
hence every entropy and mutual information in the converse chains) are exact.

Rates are information-rate proxies (1/n)I(M1; Y1^n | M2) and
(1/n)I(M2; Y2^n) in bits per channel use; these are the quantities the
converse arguments bound, and for this class they are computable in closed
form.

Inequality slacks are reported in nats with orientation slack = rhs - lhs,
so slack >= 0 means the inequality holds; entropy-power comparisons are
reported through ln of both sides so the same tolerance applies everywhere.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .channels import ScalarChannel, VectorChannel, decompose_noise
from .gaussian import (JITTER_SCALE, LOG_2PIE, PINV_RTOL, CovMatrix,
                       cond_cov, cond_entropy, diff_entropy)
from .regions import RatePair, mrc_params
from .threshold import Verdict, threshold

MAX_HORIZON = 64
LN2 = math.log(2.0)
DEFAULT_TOL = 1e-9
_JITTER_WIDENED_TOL = 1e-7


class HorizonTooLarge(ValueError):
    """Scheme horizon exceeds the implementation bound of 64."""


class ZeroScheme(ValueError):
    """Power normalization of an all-zero scheme was requested."""


class PowerNotAttainable(ValueError):
    """Feedback-tap (noise-driven) power alone exceeds the target; scaling a, b cannot reach it."""


class PerfectFeedbackUnsupported(ValueError):
    """Scalar converse verification needs sigma_fb_sq > 0 (alpha is undefined otherwise)."""


@dataclass(frozen=True, eq=False)
class LinearScheme:
    """Coefficients of a linear feedback encoder over a finite horizon.

    c is the strictly-lower-triangular n x n feedback tap matrix; c[i][j] is
    the gain applied to the feedback observation from time j when forming
    the time-i transmission.
    """

    horizon_n: int
    msg1_coeffs: np.ndarray
    msg2_coeffs: np.ndarray
    fb_coeffs: np.ndarray

    def __init__(self, horizon_n, msg1_coeffs, msg2_coeffs, fb_coeffs=None):
        n = int(horizon_n)
        if n < 1:
            raise ValueError(f"horizon must be >= 1, got {n}")
        if n > MAX_HORIZON:
            raise HorizonTooLarge(f"horizon {n} exceeds bound {MAX_HORIZON}")
        a = np.array(msg1_coeffs, dtype=float).reshape(n)
        b = np.array(msg2_coeffs, dtype=float).reshape(n)
        if fb_coeffs is None:
            c = np.zeros((n, n))
        else:
            c = np.array(fb_coeffs, dtype=float).reshape(n, n)
        if np.any(np.triu(c) != 0.0):
            raise ValueError("feedback taps must be strictly lower triangular")
        for arr in (a, b, c):
            arr.setflags(write=False)
        object.__setattr__(self, "horizon_n", n)
        object.__setattr__(self, "msg1_coeffs", a)
        object.__setattr__(self, "msg2_coeffs", b)
        object.__setattr__(self, "fb_coeffs", c)


@dataclass(frozen=True, eq=False)
class SchemeEvaluation:
    rates: RatePair
    avg_power: float
    joint_cov: CovMatrix


@dataclass(frozen=True)
class InequalityStep:
    name: str
    lhs_nats: float
    rhs_nats: float
    slack: float
    passed: bool
    jittered: bool = False
    note: str = ""


@dataclass(frozen=True)
class ConverseReport:
    """Named inequality steps of a converse chain, plus the implied power split."""

    steps: tuple
    theta_implied: float | None
    final_region_check: bool | None
    hypothesis_met: bool = True
    diagnostics: dict = field(default_factory=dict)

    def step(self, name: str) -> InequalityStep:
        for st in self.steps:
            if st.name == name:
                return st
        raise KeyError(name)

    @property
    def all_applicable_pass(self) -> bool:
        """All steps pass, ignoring those flagged hypothesis-not-met."""
        return all(st.passed for st in self.steps if "hypothesis-not-met" not in st.note)

    def to_obj(self) -> dict:
        steps = []
        for st in self.steps:
            obj = {"name": st.name, "lhs": st.lhs_nats, "rhs": st.rhs_nats,
                   "slack": st.slack, "pass": st.passed}
            if st.note:
                obj["note"] = st.note
            steps.append(obj)
        return {"steps": steps, "theta": self.theta_implied,
                "final_pass": self.final_region_check,
                "hypothesis_met": self.hypothesis_met,
                "diagnostics": dict(self.diagnostics)}


# ---------------------------------------------------------------------------
# scheme JSON


def scheme_to_obj(s: LinearScheme) -> dict:
    n = s.horizon_n
    return {"n": n,
            "a": [float(v) for v in s.msg1_coeffs],
            "b": [float(v) for v in s.msg2_coeffs],
            "c": [[float(s.fb_coeffs[i, j]) for j in range(i)] for i in range(n)]}


def scheme_from_obj(obj) -> LinearScheme:
    """Parse {"n", "a", "b", "c"} with c as n rows of strictly-lower entries (row i has i)."""
    if not isinstance(obj, dict):
        raise ValueError("scheme JSON must be an object")
    unknown = set(obj) - {"n", "a", "b", "c"}
    if unknown:
        raise ValueError(f"unknown scheme keys: {sorted(unknown)}")
    missing = {"n", "a", "b"} - set(obj)
    if missing:
        raise ValueError(f"missing scheme keys: {sorted(missing)}")
    n = int(obj["n"])
    c = np.zeros((max(n, 1), max(n, 1)))
    rows = obj.get("c")
    if rows is not None:
        if len(rows) != n:
            raise ValueError(f'scheme "c" must have exactly n={n} rows, got {len(rows)}')
        for i, row in enumerate(rows):
            if len(row) != i:
                raise ValueError(f'scheme "c" row {i} must have {i} entries, got {len(row)}')
            for j, v in enumerate(row):
                c[i, j] = float(v)
    return LinearScheme(n, obj["a"], obj["b"], c)


def sample_scheme(n: int, rng: np.random.Generator, c_scale: float | None = None) -> LinearScheme:
    """Random Gaussian coefficient set; feedback taps scaled down to keep the noise-driven power modest."""
    if c_scale is None:
        c_scale = 0.35 / math.sqrt(n)
    a = rng.standard_normal(n)
    b = rng.standard_normal(n)
    c = np.tril(rng.standard_normal((n, n)), -1) * c_scale
    return LinearScheme(n, a, b, c)


def superposition_scheme(ch: ScalarChannel | VectorChannel, theta: float, n: int = 1) -> LinearScheme:
    """Power-split scheme a_i = sqrt(theta*P), b_i = sqrt((1-theta)*P), no feedback taps."""
    p = ch.power
    a = np.full(n, math.sqrt(theta * p))
    b = np.full(n, math.sqrt((1.0 - theta) * p))
    return LinearScheme(n, a, b)


# ---------------------------------------------------------------------------
# covariance assembly

def scalar_layout(n: int) -> dict:
    """Coordinate blocks of the scalar joint law (M1, M2, X^n, Y1^n, Y2^n, Zfb^n)."""
    return {"msg1": [0], "msg2": [1],
            "x": list(range(2, 2 + n)),
            "y1": list(range(2 + n, 2 + 2 * n)),
            "y2": list(range(2 + 2 * n, 2 + 3 * n)),
            "zfb": list(range(2 + 3 * n, 2 + 4 * n))}


def vector_layout(n: int) -> dict:
    """Coordinate blocks of the vector joint law (M1, M2, X^n, Y11^n, Y12^n, Y2^n, Ye^n)."""
    return {"msg1": [0], "msg2": [1],
            "x": list(range(2, 2 + n)),
            "y11": list(range(2 + n, 2 + 2 * n)),
            "y12": list(range(2 + 2 * n, 2 + 3 * n)),
            "y2": list(range(2 + 3 * n, 2 + 4 * n)),
            "ye": list(range(2 + 4 * n, 2 + 5 * n))}


def _scalar_base_cov(ch: ScalarChannel, n: int) -> np.ndarray:
    # base coordinates: (M1, M2, Z1^n, Z2^n, Zfb^n)
    dim = 2 + 3 * n
    cov = np.zeros((dim, dim))
    cov[0, 0] = cov[1, 1] = 1.0
    cross = ch.rho * math.sqrt(ch.sigma1_sq * ch.sigma2_sq)
    for j in range(n):
        cov[2 + j, 2 + j] = ch.sigma1_sq
        cov[2 + n + j, 2 + n + j] = ch.sigma2_sq
        cov[2 + j, 2 + n + j] = cov[2 + n + j, 2 + j] = cross
        cov[2 + 2 * n + j, 2 + 2 * n + j] = ch.sigma_fb_sq
    return cov


def _scalar_x_loadings(s: LinearScheme, n: int) -> np.ndarray:
    # X_i as a row vector over the base coordinates; feedback is Y1_j + Zfb_j
    dim = 2 + 3 * n
    lx = np.zeros((n, dim))
    for i in range(n):
        lx[i, 0] = s.msg1_coeffs[i]
        lx[i, 1] = s.msg2_coeffs[i]
        for j in range(i):
            cij = s.fb_coeffs[i, j]
            if cij != 0.0:
                lx[i] += cij * lx[j]
                lx[i, 2 + j] += cij
                lx[i, 2 + 2 * n + j] += cij
    return lx


def _vector_base_cov(vch: VectorChannel, n: int) -> np.ndarray:
    # base coordinates: (M1, M2, Z2^n, Z11^n, Z12^n), all independent
    dim = 2 + 3 * n
    diag = np.concatenate([[1.0, 1.0],
                           np.full(n, vch.sigma2_sq),
                           np.full(n, vch.sigma_a_sq),
                           np.full(n, vch.sigma_b_sq)])
    return np.diag(diag)


def _vector_x_loadings(s: LinearScheme, n: int) -> np.ndarray:
    # feedback is the second antenna output Y12_j = X_j + Z12_j
    dim = 2 + 3 * n
    lx = np.zeros((n, dim))
    for i in range(n):
        lx[i, 0] = s.msg1_coeffs[i]
        lx[i, 1] = s.msg2_coeffs[i]
        for j in range(i):
            cij = s.fb_coeffs[i, j]
            if cij != 0.0:
                lx[i] += cij * lx[j]
                lx[i, 2 + 2 * n + j] += cij
    return lx


def _assemble(rows: np.ndarray, base_cov: np.ndarray) -> CovMatrix:
    joint = rows @ base_cov @ rows.T
    return CovMatrix(0.5 * (joint + joint.T), validate_psd=False)


def _scalar_rows(s: LinearScheme, alpha: float | None = None):
    """Output rows over the base space; appends V^n = Y1^n - alpha*Zfb^n when alpha is given."""
    n = s.horizon_n
    dim = 2 + 3 * n
    lx = _scalar_x_loadings(s, n)
    blocks = [np.eye(2, dim)]
    y1 = lx.copy()
    y2 = lx.copy()
    zfb = np.zeros((n, dim))
    for j in range(n):
        y1[j, 2 + j] += 1.0
        y2[j, 2 + n + j] += 1.0
        zfb[j, 2 + 2 * n + j] = 1.0
    blocks += [lx, y1, y2, zfb]
    if alpha is not None:
        blocks.append(y1 - alpha * zfb)
    return np.vstack(blocks)


def build_joint_cov(s: LinearScheme, ch: ScalarChannel) -> CovMatrix:
    """Exact joint covariance of (M1, M2, X^n, Y1^n, Y2^n, Zfb^n)."""
    return _assemble(_scalar_rows(s), _scalar_base_cov(ch, s.horizon_n))


def build_vector_joint_cov(s: LinearScheme, vch: VectorChannel) -> CovMatrix:
    """Exact joint covariance of (M1, M2, X^n, Y11^n, Y12^n, Y2^n, Ye^n)."""
    n = s.horizon_n
    dim = 2 + 3 * n
    lx = _vector_x_loadings(s, n)
    se = mrc_params(vch).sigma_e_sq
    y11 = lx.copy()
    y12 = lx.copy()
    y2 = lx.copy()
    ye = lx.copy()
    for j in range(n):
        y11[j, 2 + n + j] += 1.0
        y12[j, 2 + 2 * n + j] += 1.0
        y2[j, 2 + j] += 1.0
        ye[j, 2 + n + j] += se / vch.sigma_a_sq
        ye[j, 2 + 2 * n + j] += se / vch.sigma_b_sq
    rows = np.vstack([np.eye(2, dim), lx, y11, y12, y2, ye])
    return _assemble(rows, _vector_base_cov(vch, n))


# ---------------------------------------------------------------------------
# evaluation

def _mi_tracked(joint, a, b, given, jitter_scale, pinv_rtol):
    """Mutual information in nats plus a flag for whether any factorization was jittered."""
    h_a = cond_entropy(joint, a, given, jitter_scale, pinv_rtol)
    h_b = cond_entropy(joint, b, given, jitter_scale, pinv_rtol)
    jit = h_a.jittered or h_b.jittered
    if h_a.singular or h_b.singular:
        return 0.0, jit
    h_ab = cond_entropy(joint, tuple(a) + tuple(b), given, jitter_scale, pinv_rtol)
    jit = jit or h_ab.jittered
    if h_ab.singular:
        return math.inf, jit
    return max(h_a.value + h_b.value - h_ab.value, 0.0), jit


def evaluate(s: LinearScheme, ch: ScalarChannel | VectorChannel,
             jitter_scale: float = JITTER_SCALE,
             pinv_rtol: float = PINV_RTOL) -> SchemeEvaluation:
    """Rate proxies (bits/use), average transmit power, and the joint covariance."""
    n = s.horizon_n
    if isinstance(ch, ScalarChannel):
        joint = build_joint_cov(s, ch)
        lay = scalar_layout(n)
        strong_obs = lay["y1"]
    else:
        joint = build_vector_joint_cov(s, ch)
        lay = vector_layout(n)
        strong_obs = lay["y11"] + lay["y12"]
    mi1, _ = _mi_tracked(joint, lay["msg1"], strong_obs, lay["msg2"], jitter_scale, pinv_rtol)
    mi2, _ = _mi_tracked(joint, lay["msg2"], lay["y2"], (), jitter_scale, pinv_rtol)
    rates = RatePair(mi1 / (n * LN2), mi2 / (n * LN2))
    avg_power = float(np.mean(joint.entries[lay["x"], lay["x"]]))
    return SchemeEvaluation(rates, avg_power, joint)


def _avg_power_parts(s: LinearScheme, ch: ScalarChannel | VectorChannel):
    """(message-driven, noise-driven) average power; total(scale) = scale^2*m + v exactly."""
    n = s.horizon_n
    if isinstance(ch, ScalarChannel):
        base = _scalar_base_cov(ch, n)
        lx = _scalar_x_loadings(s, n)
        lx0 = _scalar_x_loadings(LinearScheme(n, np.zeros(n), np.zeros(n), s.fb_coeffs), n)
    else:
        base = _vector_base_cov(ch, n)
        lx = _vector_x_loadings(s, n)
        lx0 = _vector_x_loadings(LinearScheme(n, np.zeros(n), np.zeros(n), s.fb_coeffs), n)
    total = float(np.mean(np.einsum("ij,jk,ik->i", lx, base, lx)))
    noise = float(np.mean(np.einsum("ij,jk,ik->i", lx0, base, lx0)))
    return max(total - noise, 0.0), noise


def avg_power(s: LinearScheme, ch: ScalarChannel | VectorChannel) -> float:
    m, v = _avg_power_parts(s, ch)
    return m + v


def normalize_power(s: LinearScheme, ch: ScalarChannel | VectorChannel,
                    target_p: float, tol: float = 1e-10) -> LinearScheme:
    """Scale a, b by one factor so average power hits target_p (bisection, tol 1e-10).

    Feedback taps are dimensionless gains on received signals and are left
    untouched, so the noise-driven power floor they create is a hard lower
    bound on what is reachable.
    """
    if target_p < 0.0:
        raise ValueError(f"target power must be >= 0, got {target_p}")
    m, v = _avg_power_parts(s, ch)
    if m + v == 0.0:
        raise ZeroScheme("cannot normalize a zero scheme")
    if m <= 0.0:
        if abs(v - target_p) <= tol:
            return s
        raise PowerNotAttainable(
            f"message coefficients are zero and noise-driven power {v} != target {target_p}")
    if v > target_p + tol:
        raise PowerNotAttainable(
            f"noise-driven power floor {v} exceeds target {target_p}")

    def power_at(scale):
        return scale * scale * m + v

    lo, hi = 0.0, 1.0
    for _ in range(200):
        if power_at(hi) >= target_p:
            break
        hi *= 2.0
    else:
        raise PowerNotAttainable(f"target {target_p} not bracketed")
    for _ in range(300):
        mid = 0.5 * (lo + hi)
        pm = power_at(mid)
        if abs(pm - target_p) <= tol:
            lo = hi = mid
            break
        if pm < target_p:
            lo = mid
        else:
            hi = mid
    scale = 0.5 * (lo + hi)
    return LinearScheme(s.horizon_n, scale * s.msg1_coeffs, scale * s.msg2_coeffs,
                        s.fb_coeffs)


# ---------------------------------------------------------------------------
# converse verification

def _mk_step(name, lhs, rhs, tol, jittered=False, note=""):
    slack = rhs - lhs
    tol_eff = max(tol, _JITTER_WIDENED_TOL) if jittered else tol
    return InequalityStep(name, lhs, rhs, slack, bool(slack >= -tol_eff), jittered, note)


def _cond_entropy_chain(joint, target_block, msg_idx, history_blocks,
                        jitter_scale, pinv_rtol):
    """sum_i h(target_i | msg, history_1^{i-1}, ...) plus a joint jitter flag."""
    total = 0.0
    jittered = False
    for i, t in enumerate(target_block):
        given = list(msg_idx)
        for blk in history_blocks:
            given += blk[:i]
        h = cond_entropy(joint, [t], given, jitter_scale, pinv_rtol)
        total += h.value
        jittered = jittered or h.jittered
    return total, jittered


def _epi_step(name, sum_h, h_full, n, extra_var, tol, jittered):
    """ln(exp((2/n)*sum_h) + 2*pi*e*extra_var) <= (2/n)*h_full, reported in nats."""
    arg = math.exp(2.0 * sum_h / n) + 2.0 * math.pi * math.e * extra_var
    lhs = math.log(arg) if arg > 0.0 else -math.inf
    rhs = 2.0 * h_full / n
    return _mk_step(name, lhs, rhs, tol, jittered)


def verify_lemma1(s: LinearScheme, ch: ScalarChannel, tol: float = DEFAULT_TOL,
                  jitter_scale: float = JITTER_SCALE,
                  pinv_rtol: float = PINV_RTOL) -> ConverseReport:
    """Check the per-block entropy-power inequality linking h(Y2^n|M2) to the
    per-symbol entropies h(Y1_i | M2, Y2^{i-1})."""
    n = s.horizon_n
    joint = build_joint_cov(s, ch)
    lay = scalar_layout(n)
    h2 = cond_entropy(joint, lay["y2"], lay["msg2"], jitter_scale, pinv_rtol)
    sum_h, jit = _cond_entropy_chain(joint, lay["y1"], lay["msg2"], [lay["y2"]],
                                     jitter_scale, pinv_rtol)
    step = _epi_step("lemma1_epi", sum_h, h2.value, n,
                     ch.sigma2_sq - ch.sigma1_sq, tol, jit or h2.jittered)
    return ConverseReport(steps=(step,), theta_implied=None, final_region_check=None)


def _theta_steps(h2, n, p, sigma2_sq, tol):
    theta = 0.0 if p == 0.0 else (math.exp(2.0 * h2.value / n) / (2.0 * math.pi * math.e)
                                  - sigma2_sq) / p
    lower = _mk_step("theta_lower", 0.5 * n * (LOG_2PIE + math.log(sigma2_sq)),
                     h2.value, tol, h2.jittered)
    upper = _mk_step("theta_upper", h2.value,
                     0.5 * n * (LOG_2PIE + math.log(p + sigma2_sq)), tol, h2.jittered)
    tol_eff = max(tol, _JITTER_WIDENED_TOL) if h2.jittered else tol
    rng_step = InequalityStep("theta_range", theta, 1.0, min(theta, 1.0 - theta),
                              bool(-tol_eff <= theta <= 1.0 + tol_eff), h2.jittered, "")
    return theta, [lower, upper, rng_step]


def _final_steps(r1_nats, r2_nats, theta, p, strong_var, sigma2_sq, tol, jittered):
    th = min(max(theta, 0.0), 1.0)
    f1 = _mk_step("final_r1", r1_nats,
                  0.5 * math.log(1.0 + th * p / strong_var), tol, jittered)
    f2 = _mk_step("final_r2", r2_nats,
                  0.5 * math.log(1.0 + (1.0 - th) * p / (th * p + sigma2_sq)), tol, jittered)
    return [f1, f2]


def verify_scalar_converse(s: LinearScheme, ch: ScalarChannel,
                           tol: float = DEFAULT_TOL,
                           jitter_scale: float = JITTER_SCALE,
                           pinv_rtol: float = PINV_RTOL) -> ConverseReport:
    """Numerically check every inequality of the scalar noisy-feedback converse.

    Steps, in chain order: (a) revealing the feedback noise to receiver 1;
    (b) merging the conditioning into the feedback-corrected observation V =
    Y1 - alpha*Zfb; (crux) swapping V-history for Y2-history, valid when the
    residual variance is at most var_private2; (lemma1_epi); the theta
    extraction; and the final region membership of both rate proxies.

    Raises OutsideClassError for channels without the noise decomposition and
    PerfectFeedbackUnsupported when sigma_fb_sq == 0.  When the threshold
    verdict is not CoveredUseless the (crux) step is still computed but is
    flagged "hypothesis-not-met" and excluded from all_applicable_pass.
    """
    n = s.horizon_n
    dec = decompose_noise(ch)   # raises OutsideClassError when not in class
    if ch.sigma_fb_sq == 0.0:
        raise PerfectFeedbackUnsupported(
            "scalar converse verification requires sigma_fb_sq > 0")
    rep = threshold(ch)
    hypothesis_met = rep.verdict == Verdict.COVERED_USELESS
    alpha = dec.var_private1 / ch.sigma_fb_sq
    joint = _assemble(_scalar_rows(s, alpha=alpha), _scalar_base_cov(ch, n))
    lay = scalar_layout(n)
    v_block = list(range(2 + 4 * n, 2 + 5 * n))

    mi_r1, jit_r1 = _mi_tracked(joint, lay["msg1"], lay["y1"], lay["msg2"],
                                jitter_scale, pinv_rtol)
    mi_r1_fb, jit_a = _mi_tracked(joint, lay["msg1"], lay["y1"] + lay["zfb"],
                                  lay["msg2"], jitter_scale, pinv_rtol)
    step_a = _mk_step("a_reveal_fb_noise", mi_r1, mi_r1_fb, tol, jit_r1 or jit_a)

    sum_full, jit_bl = _cond_entropy_chain(joint, lay["y1"], lay["msg2"],
                                           [lay["y1"], lay["zfb"]],
                                           jitter_scale, pinv_rtol)
    sum_v, jit_br = _cond_entropy_chain(joint, lay["y1"], lay["msg2"], [v_block],
                                        jitter_scale, pinv_rtol)
    step_b = _mk_step("b_merge_conditioning", sum_full, sum_v, tol, jit_bl or jit_br)

    sum_y2, jit_c = _cond_entropy_chain(joint, lay["y1"], lay["msg2"], [lay["y2"]],
                                        jitter_scale, pinv_rtol)
    step_crux = _mk_step("crux_swap_to_y2", sum_v, sum_y2, tol, jit_br or jit_c,
                         note="" if hypothesis_met else "hypothesis-not-met")

    h2 = cond_entropy(joint, lay["y2"], lay["msg2"], jitter_scale, pinv_rtol)
    step_epi = _epi_step("lemma1_epi", sum_y2, h2.value, n,
                         ch.sigma2_sq - ch.sigma1_sq, tol, jit_c or h2.jittered)

    theta, theta_steps = _theta_steps(h2, n, ch.power, ch.sigma2_sq, tol)

    mi_r2, jit_r2 = _mi_tracked(joint, lay["msg2"], lay["y2"], (), jitter_scale, pinv_rtol)
    finals = _final_steps(mi_r1 / n, mi_r2 / n, theta, ch.power, ch.sigma1_sq,
                          ch.sigma2_sq, tol, jit_r1 or jit_r2 or h2.jittered)

    steps = (step_a, step_b, step_crux, step_epi, *theta_steps, *finals)
    return ConverseReport(steps=steps, theta_implied=theta,
                          final_region_check=all(st.passed for st in finals),
                          hypothesis_met=hypothesis_met,
                          diagnostics={"alpha": alpha,
                                       "residual_var": rep.residual_var,
                                       "var_private2": dec.var_private2})


def verify_vector_converse(s: LinearScheme, vch: VectorChannel,
                           tol: float = DEFAULT_TOL,
                           jitter_scale: float = JITTER_SCALE,
                           pinv_rtol: float = PINV_RTOL) -> ConverseReport:
    """Numerically check the perfect-antenna-feedback converse chain.

    Steps: (a) dropping the fed-back antenna history from the conditioning;
    (swap) replacing the unfed antenna history Y11 by the weak user's Y2
    (valid when sigma_a_sq <= sigma2_sq); the entropy-power step with the
    effective combiner variance; theta extraction; final region membership.

    The block quantity h(Ye^n + Zd^n | M2) is reported in diagnostics for
    comparison with h(Y2^n | M2) but is not asserted equal to it.
    """
    n = s.horizon_n
    hypothesis_met = vch.hypothesis_holds
    se = mrc_params(vch).sigma_e_sq
    joint = build_vector_joint_cov(s, vch)
    lay = vector_layout(n)

    sum_both, jit_l = _cond_entropy_chain(joint, lay["ye"], lay["msg2"],
                                          [lay["y11"], lay["y12"]],
                                          jitter_scale, pinv_rtol)
    sum_y11, jit_m = _cond_entropy_chain(joint, lay["ye"], lay["msg2"], [lay["y11"]],
                                         jitter_scale, pinv_rtol)
    step_a = _mk_step("a_drop_fedback_antenna", sum_both, sum_y11, tol, jit_l or jit_m)

    sum_y2, jit_r = _cond_entropy_chain(joint, lay["ye"], lay["msg2"], [lay["y2"]],
                                        jitter_scale, pinv_rtol)
    step_swap = _mk_step("swap_to_y2", sum_y11, sum_y2, tol, jit_m or jit_r,
                         note="" if hypothesis_met else "hypothesis-not-met")

    h2 = cond_entropy(joint, lay["y2"], lay["msg2"], jitter_scale, pinv_rtol)
    step_epi = _epi_step("epi_combiner", sum_y2, h2.value, n, vch.sigma2_sq - se,
                         tol, jit_r or h2.jittered)
    if vch.sigma2_sq < se:
        step_epi = InequalityStep(step_epi.name, step_epi.lhs_nats, step_epi.rhs_nats,
                                   step_epi.slack, step_epi.passed, step_epi.jittered,
                                   "hypothesis-not-met")

    theta, theta_steps = _theta_steps(h2, n, vch.power, vch.sigma2_sq, tol)

    mi_r1, jit_r1 = _mi_tracked(joint, lay["msg1"], lay["y11"] + lay["y12"],
                                lay["msg2"], jitter_scale, pinv_rtol)
    mi_r2, jit_r2 = _mi_tracked(joint, lay["msg2"], lay["y2"], (), jitter_scale, pinv_rtol)
    finals = _final_steps(mi_r1 / n, mi_r2 / n, theta, vch.power, se,
                          vch.sigma2_sq, tol, jit_r1 or jit_r2 or h2.jittered)

    diagnostics = {"sigma_e_sq": se, "h_y2_given_msg2": h2.value}
    if vch.sigma2_sq >= se:
        cc = cond_cov(joint, lay["ye"], lay["msg2"], pinv_rtol=pinv_rtol)
        padded = CovMatrix(cc.entries + (vch.sigma2_sq - se) * np.eye(n),
                           validate_psd=False)
        diagnostics["h_ye_plus_zd_given_msg2"] = diff_entropy(padded, jitter_scale).value

    steps = (step_a, step_swap, step_epi, *theta_steps, *finals)
    return ConverseReport(steps=steps, theta_implied=theta,
                          final_region_check=all(st.passed for st in finals),
                          hypothesis_met=hypothesis_met,
                          diagnostics=diagnostics)


# ---------------------------------------------------------------------------
# Monte-Carlo oracle

@dataclass(frozen=True, eq=False)
class SimulationResult:
    """Empirical second moments over the analytic index layout (zero-mean convention)."""

    cov: np.ndarray
    avg_power: float
    num_samples: int
    seed: int


_CHUNK = 1 << 16


def simulate_paths(s: LinearScheme, ch: ScalarChannel | VectorChannel,
                   num_samples: int, seed: int) -> SimulationResult:
    """Draw i.i.d. noise paths, run the linear recursion, accumulate X^T X / N.

    Uses a counter-based (Philox) generator so results are reproducible for a
    given seed.  The covariance uses the zero-mean convention (no mean
    subtraction): with one sample the result is the rank-one outer product.
    """
    if num_samples < 1:
        raise ValueError(f"num_samples must be >= 1, got {num_samples}")
    n = s.horizon_n
    scalar = isinstance(ch, ScalarChannel)
    out_dim = 2 + (4 if scalar else 5) * n
    a = np.asarray(s.msg1_coeffs)
    b = np.asarray(s.msg2_coeffs)
    c = np.asarray(s.fb_coeffs)
    rng = np.random.Generator(np.random.Philox(seed))
    acc = np.zeros((out_dim, out_dim))
    power_acc = 0.0
    done = 0
    while done < num_samples:
        m = min(_CHUNK, num_samples - done)
        th = rng.standard_normal((m, 2))
        if scalar:
            g1 = rng.standard_normal((m, n))
            g2 = rng.standard_normal((m, n))
            gf = rng.standard_normal((m, n))
            s1 = math.sqrt(ch.sigma1_sq)
            s2 = math.sqrt(ch.sigma2_sq)
            z1 = s1 * g1
            z2 = s2 * (ch.rho * g1 + math.sqrt(max(1.0 - ch.rho ** 2, 0.0)) * g2)
            zfb = math.sqrt(ch.sigma_fb_sq) * gf
            x = np.zeros((m, n))
            fb = np.zeros((m, n))
            for i in range(n):
                x[:, i] = a[i] * th[:, 0] + b[i] * th[:, 1]
                if i:
                    x[:, i] += fb[:, :i] @ c[i, :i]
                fb[:, i] = x[:, i] + z1[:, i] + zfb[:, i]
            cols = np.hstack([th, x, x + z1, x + z2, zfb])
        else:
            z2 = math.sqrt(ch.sigma2_sq) * rng.standard_normal((m, n))
            z11 = math.sqrt(ch.sigma_a_sq) * rng.standard_normal((m, n))
            z12 = math.sqrt(ch.sigma_b_sq) * rng.standard_normal((m, n))
            se = mrc_params(ch).sigma_e_sq
            x = np.zeros((m, n))
            for i in range(n):
                x[:, i] = a[i] * th[:, 0] + b[i] * th[:, 1]
                if i:
                    x[:, i] += (x[:, :i] + z12[:, :i]) @ c[i, :i]
            ye = x + z11 * (se / ch.sigma_a_sq) + z12 * (se / ch.sigma_b_sq)
            cols = np.hstack([th, x, x + z11, x + z12, x + z2, ye])
        acc += cols.T @ cols
        power_acc += float(np.sum(x * x))
        done += m
    cov = acc / num_samples
    return SimulationResult(cov=0.5 * (cov + cov.T),
                            avg_power=power_acc / (num_samples * n),
                            num_samples=num_samples, seed=seed)
