import math

import numpy as np
import pytest

import gbcfb as g
from gbcfb.gaussian import (IndexOutOfRange, NotPSD, OverlappingSets,
                            SingularEntropy)

LOG_2PIE = math.log(2 * math.pi) + 1.0


def random_psd(rng, dim, rank=None):
    a = rng.standard_normal((dim, rank or dim))
    return a @ a.T + 1e-3 * np.eye(dim)


def test_cond_cov_hand_example():
    cm = g.CovMatrix([[2, 1], [1, 1]])
    out = g.cond_cov(cm, [0], [1])
    assert out.entries[0, 0] == pytest.approx(1.0, abs=1e-14)


def test_cond_cov_block_diagonal_independence():
    rng = np.random.default_rng(5)
    a = random_psd(rng, 3)
    b = random_psd(rng, 2)
    joint = g.CovMatrix(np.block([[a, np.zeros((3, 2))], [np.zeros((2, 3)), b]]))
    out = g.cond_cov(joint, [0, 1, 2], [3, 4])
    np.testing.assert_allclose(out.entries, a, atol=1e-12)


def test_cond_cov_empty_given_is_submatrix():
    rng = np.random.default_rng(6)
    a = random_psd(rng, 4)
    joint = g.CovMatrix(a)
    out = g.cond_cov(joint, [1, 3], [])
    np.testing.assert_allclose(out.entries, a[np.ix_([1, 3], [1, 3])], atol=0)


def test_cond_cov_index_errors():
    cm = g.CovMatrix(np.eye(3))
    with pytest.raises(IndexOutOfRange):
        g.cond_cov(cm, [0, 5], [1])
    with pytest.raises(OverlappingSets):
        g.cond_cov(cm, [0, 1], [1])
    with pytest.raises(OverlappingSets):
        g.cond_cov(cm, [0, 0], [1])


def test_cond_cov_monte_carlo_oracle():
    # Regression-residual covariance from samples must match the Schur complement.
    rng = np.random.default_rng(77)
    for dim in (3, 6, 8):
        cov = random_psd(rng, dim)
        target = list(range(dim // 2))
        given = list(range(dim // 2, dim))
        samples = rng.multivariate_normal(np.zeros(dim), cov, size=1_000_000,
                                          method="cholesky")
        t = samples[:, target]
        q = samples[:, given]
        beta, *_ = np.linalg.lstsq(q, t, rcond=None)
        resid = t - q @ beta
        emp = resid.T @ resid / samples.shape[0]
        ana = g.cond_cov(g.CovMatrix(cov), target, given).entries
        rel = np.linalg.norm(emp - ana) / np.linalg.norm(ana)
        assert rel < 0.01


def test_diff_entropy_closed_forms():
    assert g.diff_entropy(g.CovMatrix([[1.0]])).value == pytest.approx(0.5 * LOG_2PIE, abs=1e-12)
    assert g.diff_entropy(g.CovMatrix(np.eye(2))).value == pytest.approx(LOG_2PIE, abs=1e-12)
    assert g.diff_entropy(g.CovMatrix([[2, 1], [1, 1]])).value == pytest.approx(LOG_2PIE, abs=1e-12)


def test_diff_entropy_permutation_invariance():
    rng = np.random.default_rng(8)
    for _ in range(20):
        dim = rng.integers(2, 7)
        cov = random_psd(rng, dim)
        perm = rng.permutation(dim)
        h1 = g.diff_entropy(g.CovMatrix(cov)).value
        h2 = g.diff_entropy(g.CovMatrix(cov[np.ix_(perm, perm)])).value
        assert h2 == pytest.approx(h1, rel=1e-12, abs=1e-11)


def test_diff_entropy_singular_flag():
    h = g.diff_entropy(g.CovMatrix(np.zeros((2, 2))))
    assert h.singular and h.value == -math.inf


def test_diff_entropy_rejects_indefinite():
    a = np.array([[1.0, 0.0], [0.0, -1.0]])
    with pytest.raises((NotPSD, ValueError)):
        g.diff_entropy(g.CovMatrix(a))


def test_mutual_info_closed_forms():
    biv = g.CovMatrix([[1, 0.5], [0.5, 1]])
    assert g.mutual_info(biv, [0], [1]) == pytest.approx(-0.5 * math.log(0.75), abs=1e-12)
    indep = g.CovMatrix(np.diag([1.0, 2.0]))
    assert g.mutual_info(indep, [0], [1]) == pytest.approx(0.0, abs=1e-12)
    awgn = g.CovMatrix([[5, 5], [5, 6]])   # Y = X + N, Var X = 5, Var N = 1
    assert g.mutual_info(awgn, [0], [1]) == pytest.approx(0.5 * math.log(6), abs=1e-12)


def test_mutual_info_symmetry_and_nonnegativity():
    rng = np.random.default_rng(9)
    for _ in range(50):
        cov = g.CovMatrix(random_psd(rng, 6))
        ab = g.mutual_info(cov, [0, 1], [2, 3], [4, 5])
        ba = g.mutual_info(cov, [2, 3], [0, 1], [4, 5])
        assert ab == pytest.approx(ba, abs=1e-10)
        assert ab >= 0.0


def test_mutual_info_chain_rule():
    rng = np.random.default_rng(10)
    for _ in range(50):
        cov = g.CovMatrix(random_psd(rng, 6))
        lhs = g.mutual_info(cov, [0], [1, 2, 3, 4])
        rhs = g.mutual_info(cov, [0], [1, 2]) + g.mutual_info(cov, [0], [3, 4], [1, 2])
        assert lhs == pytest.approx(rhs, abs=1e-9)


def test_conditioning_reduces_entropy():
    rng = np.random.default_rng(11)
    for _ in range(50):
        cov = g.CovMatrix(random_psd(rng, 6))
        h_ab = g.cond_entropy(cov, [0, 1], [2, 3]).value
        h_abc = g.cond_entropy(cov, [0, 1], [2, 3, 4, 5]).value
        assert h_abc <= h_ab + 1e-9


def test_entropy_power_term():
    sigma_sq = 3.7
    h = 0.5 * math.log(2 * math.pi * math.e * sigma_sq)
    assert g.entropy_power_term(h, 1) == pytest.approx(2 * math.pi * math.e * sigma_sq, rel=1e-12)
    n = 5
    assert g.entropy_power_term(n * 0.5 * math.log(2 * math.pi * math.e * 4.0), n) \
        == pytest.approx(2 * math.pi * math.e * 4.0, rel=1e-12)
    assert g.entropy_power_term(2.8378770664093453, 2) == pytest.approx(2 * math.pi * math.e, rel=1e-9)
    with pytest.raises(SingularEntropy):
        g.entropy_power_term(g.EntropyNats(-math.inf, singular=True), 1)


def test_jitter_on_zero_variance_coordinate():
    # Conditioning on a zero-variance coordinate must not crash (pinv path).
    cov = np.diag([1.0, 0.0, 2.0])
    cm = g.CovMatrix(cov)
    out = g.cond_cov(cm, [0], [1, 2])
    assert out.entries[0, 0] == pytest.approx(1.0, abs=1e-12)
