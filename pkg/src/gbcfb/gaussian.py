"""Exact covariance algebra for jointly Gaussian vectors.

Everything downstream (rates, converse chains, the EPI lemma check) reduces to
three primitives on covariance matrices: conditional covariance via the Schur
complement, differential entropy via log-determinant, and mutual information
as a sum of conditional entropies.  Entropies are kept in nats throughout; the
conversion to bits happens only at reporting boundaries.

Numerical policy
----------------
* Factorizations are Cholesky-first.  When the smallest pivot of a matrix
  falls below ``jitter_scale * max(diag)`` (default 1e-12), that multiple of
  the identity is added once and the fact is recorded on the result, so
  zero-variance proof devices degrade gracefully instead of crashing.
* Conditioning blocks that are singular are inverted with a pseudo-inverse
  (singular values below 1e-12 of the largest treated as zero).
* A determinant underflowing below 1e-300 marks the law as singular and the
  entropy as -inf.

Matrices here are small (a few hundred square at the very most); everything
is dense and O(d^3).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

LOG_2PIE = math.log(2.0 * math.pi) + 1.0  # ln(2*pi*e)
JITTER_SCALE = 1e-12
PINV_RTOL = 1e-12
_SINGULAR_LOGDET = math.log(1e-300)

IndexSet = Sequence[int]


class NotPSD(ValueError):
    """Matrix is not positive semidefinite within tolerance."""


class IndexOutOfRange(IndexError):
    """An index set refers to a coordinate outside the matrix."""


class OverlappingSets(ValueError):
    """Index sets that must be disjoint overlap (or repeat indices)."""


class SingularEntropy(ValueError):
    """Entropy-power of a singular (or -inf entropy) law was requested."""


@dataclass(frozen=True, eq=False)
class CovMatrix:
    """Symmetric PSD matrix carrying a joint zero-mean Gaussian law.

    Construction validates symmetry (1e-12 relative) and, unless
    ``validate_psd=False``, that the smallest eigenvalue is >= -1e-10 times
    the largest diagonal entry.
    """

    entries: np.ndarray

    def __init__(self, entries, validate_psd: bool = True):
        a = np.array(entries, dtype=float)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError(f"covariance must be square, got shape {a.shape}")
        scale = max(1.0, float(np.max(np.abs(a))) if a.size else 0.0)
        if a.size and float(np.max(np.abs(a - a.T))) > 1e-12 * scale:
            raise ValueError("covariance is not symmetric to 1e-12 relative")
        a = 0.5 * (a + a.T)
        if validate_psd and a.size:
            max_diag = max(float(np.max(np.diag(a))), 0.0)
            min_eig = float(np.linalg.eigvalsh(a)[0])
            if min_eig < -1e-10 * max(max_diag, 1e-300):
                raise NotPSD(f"smallest eigenvalue {min_eig} below PSD tolerance")
        a.setflags(write=False)
        object.__setattr__(self, "entries", a)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def submatrix(self, idx: IndexSet) -> np.ndarray:
        ix = np.asarray(idx, dtype=int)
        return self.entries[np.ix_(ix, ix)]


@dataclass(frozen=True)
class EntropyNats:
    """Differential entropy in nats; -inf and flagged singular for degenerate laws."""

    value: float
    singular: bool = False
    jittered: bool = False


def _check_indices(dim: int, *sets: IndexSet) -> None:
    seen = set()
    for s in sets:
        local = set()
        for i in s:
            if not (0 <= int(i) < dim):
                raise IndexOutOfRange(f"index {i} out of range for dim {dim}")
            if i in local:
                raise OverlappingSets(f"repeated index {i} within a set")
            local.add(i)
        if seen & local:
            raise OverlappingSets(f"index sets overlap on {sorted(seen & local)}")
        seen |= local


def _logdet_psd(a: np.ndarray, jitter_scale: float):
    """(logdet, singular, jittered) of a PSD matrix, Cholesky-first with one jitter retry."""
    d = a.shape[0]
    if d == 0:
        return 0.0, False, False
    max_diag = max(float(np.max(np.diag(a))), 0.0)
    if max_diag == 0.0:
        return -math.inf, True, False
    floor = jitter_scale * max_diag
    try:
        chol = np.linalg.cholesky(a)
        piv = np.diag(chol)
        if float(np.min(piv)) ** 2 >= floor:
            logdet = 2.0 * float(np.sum(np.log(piv)))
            return logdet, logdet < _SINGULAR_LOGDET, False
    except np.linalg.LinAlgError:
        pass
    aj = a + floor * np.eye(d)
    try:
        chol = np.linalg.cholesky(aj)
        logdet = 2.0 * float(np.sum(np.log(np.diag(chol))))
        return logdet, logdet < _SINGULAR_LOGDET, True
    except np.linalg.LinAlgError:
        eig = np.linalg.eigvalsh(0.5 * (a + a.T))
        if float(eig[0]) < -1e-10 * max_diag:
            raise NotPSD(f"smallest eigenvalue {eig[0]} below PSD tolerance")
        clamped = np.maximum(eig, 0.0)
        if float(np.min(clamped)) == 0.0:
            return -math.inf, True, True
        logdet = float(np.sum(np.log(clamped)))
        return logdet, logdet < _SINGULAR_LOGDET, True


def cond_cov(joint: CovMatrix, target: IndexSet, given: IndexSet,
             pinv_rtol: float = PINV_RTOL) -> CovMatrix:
    """Covariance of the target coordinates given the conditioning coordinates.

    Schur complement S_tt - S_tg S_gg^{-1} S_gt; the given-block inverse falls
    back to a pseudo-inverse when it is singular.  Empty `given` returns the
    target sub-matrix.
    """
    _check_indices(joint.dim, target, given)
    t = np.asarray(target, dtype=int)
    g = np.asarray(given, dtype=int)
    a = joint.entries
    s_tt = a[np.ix_(t, t)]
    if g.size == 0:
        return CovMatrix(s_tt, validate_psd=False)
    s_tg = a[np.ix_(t, g)]
    s_gg = a[np.ix_(g, g)]
    w = None
    max_diag = max(float(np.max(np.diag(s_gg))), 0.0)
    if max_diag > 0.0:
        try:
            chol = np.linalg.cholesky(s_gg)
            if float(np.min(np.diag(chol))) ** 2 >= pinv_rtol * max_diag:
                y = np.linalg.solve(chol, s_tg.T)
                w = np.linalg.solve(chol.T, y)
        except np.linalg.LinAlgError:
            w = None
    if w is None:
        w = np.linalg.pinv(s_gg, rcond=pinv_rtol, hermitian=True) @ s_tg.T
    out = s_tt - s_tg @ w
    out = 0.5 * (out + out.T)
    return CovMatrix(out, validate_psd=False)


def diff_entropy(cov: CovMatrix, jitter_scale: float = JITTER_SCALE) -> EntropyNats:
    """(1/2) ln((2*pi*e)^dim * det(cov)) in nats, via a stabilized factorization."""
    logdet, singular, jittered = _logdet_psd(cov.entries, jitter_scale)
    if singular or not math.isfinite(logdet):
        return EntropyNats(-math.inf, singular=True, jittered=jittered)
    return EntropyNats(0.5 * (cov.dim * LOG_2PIE + logdet), jittered=jittered)


def cond_entropy(joint: CovMatrix, target: IndexSet, given: IndexSet,
                 jitter_scale: float = JITTER_SCALE,
                 pinv_rtol: float = PINV_RTOL) -> EntropyNats:
    """h(target | given) in nats for the joint Gaussian law."""
    return diff_entropy(cond_cov(joint, target, given, pinv_rtol=pinv_rtol),
                        jitter_scale=jitter_scale)


def mutual_info(joint: CovMatrix, a: IndexSet, b: IndexSet, given: IndexSet = (),
                jitter_scale: float = JITTER_SCALE,
                pinv_rtol: float = PINV_RTOL) -> float:
    """I(A; B | C) in nats: h(A|C) + h(B|C) - h(A,B|C).

    Returns 0 when either conditional marginal is singular-degenerate (a
    deterministic variable carries no information); never returns a negative
    value (sub-tolerance negatives from roundoff are clamped to 0).
    """
    _check_indices(joint.dim, a, b, given)
    h_a = cond_entropy(joint, a, given, jitter_scale, pinv_rtol)
    h_b = cond_entropy(joint, b, given, jitter_scale, pinv_rtol)
    if h_a.singular or h_b.singular:
        return 0.0
    h_ab = cond_entropy(joint, tuple(a) + tuple(b), given, jitter_scale, pinv_rtol)
    if h_ab.singular:
        # Joint degenerate while marginals are not: B determines A (or vice
        # versa); the MI is the finite marginal entropy difference, which the
        # log-det route cannot express. Recompute via h(A|C) - h(A|B,C).
        h_a_bc = cond_entropy(joint, a, tuple(b) + tuple(given), jitter_scale, pinv_rtol)
        if h_a_bc.singular:
            return math.inf
        return max(h_a.value - h_a_bc.value, 0.0)
    val = h_a.value + h_b.value - h_ab.value
    return max(val, 0.0)


def entropy_power_term(h_total: EntropyNats | float, n: int) -> float:
    """exp(2 h / n): the per-symbol entropy power of an n-vector with entropy h nats."""
    if n < 1:
        raise ValueError(f"n must be a positive integer, got {n}")
    value = h_total.value if isinstance(h_total, EntropyNats) else float(h_total)
    if isinstance(h_total, EntropyNats) and h_total.singular:
        raise SingularEntropy("entropy power of a singular law")
    if not math.isfinite(value):
        raise SingularEntropy(f"entropy must be finite, got {value}")
    return math.exp(2.0 * value / n)
