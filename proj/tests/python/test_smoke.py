"""End-to-end smoke tests for the Python bindings.

numpy provides the independent oracles here (its own FFT and SVD), so these
also cross-check the C++ numerics against a second implementation.
"""

import numpy as np
import pytest

import tjlc


def randf(shape, seed, scale=1.0):
    rng = np.random.default_rng(seed)
    return np.asfortranarray(scale * rng.standard_normal(shape))


def test_frobenius_matches_numpy():
    x = randf((4, 5, 3), 0)
    assert tjlc.frobenius_norm(x) == pytest.approx(np.linalg.norm(x), rel=1e-13)


def test_unfold_matches_numpy_reshape():
    x = randf((3, 4, 5), 1)
    for n in (1, 2, 3):
        got = tjlc.unfold_mode_n(x, n)
        want = np.reshape(np.moveaxis(x, n - 1, 0), (x.shape[n - 1], -1), order="F")
        np.testing.assert_array_equal(got, want)
        back = tjlc.fold_mode_n(got, list(x.shape), n)
        np.testing.assert_array_equal(back, x)


def test_dft_matches_numpy_fft():
    x = randf((4, 3, 6), 2)
    got = tjlc.dft_mode3(x)
    want = np.fft.fft(x, axis=2)
    np.testing.assert_allclose(got, want, atol=1e-10)
    back = tjlc.idft_mode3(got)
    np.testing.assert_allclose(back, x, atol=1e-12)


def test_tsvd_reconstructs_and_matches_numpy_singular_values():
    x = randf((5, 4, 3), 3)
    u, s, v = tjlc.t_svd(x)
    rec = tjlc.t_product(tjlc.t_product(u, s), tjlc.conj_transpose(v))
    np.testing.assert_allclose(rec, x, atol=1e-10)

    sbar = np.fft.fft(s, axis=2)
    xbar = np.fft.fft(x, axis=2)
    for i in range(x.shape[2]):
        want = np.linalg.svd(xbar[:, :, i], compute_uv=False)
        got = np.diagonal(sbar[:, :, i]).real
        np.testing.assert_allclose(np.sort(got)[::-1], want, atol=1e-8)


def test_tubal_and_joint_rank():
    x = tjlc.synth_low_tubal((12, 10, 4), 3, seed=9)
    assert tjlc.tubal_rank(x) == 3
    ranks = tjlc.joint_rank(x)
    assert len(ranks) == 6
    assert all(r <= 3 for r in ranks)


def test_scalar_prox_brute_force():
    rng = np.random.default_rng(4)
    for _ in range(25):
        y = 8.0 * rng.random()
        rho = 0.05 + 5.0 * rng.random()
        omega = 2.0 * rng.random()
        nu = 0.2 + 2.0 * rng.random()
        vartheta = 1.0 + 50.0 * rng.random()
        grid = np.linspace(0.0, max(y, 1e-9), 200001)
        g = np.minimum(nu * grid - grid**2 / (2 * vartheta), nu**2 * vartheta / 2)
        h = 0.5 * rho * (grid - y) ** 2 + omega * np.log(g + 1.0)
        best = grid[np.argmin(h)]
        got = tjlc.scalar_prox(y, rho, omega, nu, vartheta)
        assert abs(got - best) <= 2e-3 * max(1.0, y)


def test_mask_and_project():
    omega = tjlc.generate_mask([6, 5, 4], missing_rate=75.0, seed=11)
    assert omega.shape == (6, 5, 4)
    assert omega.sum() == round(0.25 * 120)
    assert tjlc.missing_rate(omega) == pytest.approx(75.0)
    again = tjlc.generate_mask([6, 5, 4], missing_rate=75.0, seed=11)
    np.testing.assert_array_equal(omega, again)

    x = randf((6, 5, 4), 12)
    kept = tjlc.project(x, omega)
    np.testing.assert_array_equal(kept[omega], x[omega])
    assert np.all(kept[~omega] == 0.0)


def test_complete_recovers_synthetic():
    truth = tjlc.synth_low_tubal((14, 14, 8), 1, seed=21, rms=40.0)
    omega = tjlc.generate_mask([14, 14, 8], missing_rate=40.0, seed=22)
    observed = tjlc.project(truth, omega)
    cfg = tjlc.SolverConfig(max_iters=250)
    result = tjlc.complete(observed, omega, cfg)
    assert result.converged
    err = np.linalg.norm(result.x - truth) / np.linalg.norm(truth)
    assert err < 0.05
    np.testing.assert_array_equal(result.x[omega], truth[omega])
    assert len(result.joint_rank_final) == 6


def test_metrics():
    ref = randf((16, 16), 30, scale=60.0)
    assert tjlc.psnr(ref, ref + 1.0) == pytest.approx(20 * np.log10(255), abs=1e-9)
    assert tjlc.ssim(ref, ref) == 1.0
    vol = np.asfortranarray(np.abs(randf((8, 8, 3), 31, scale=50.0)) + 1.0)
    assert tjlc.ergas(vol, vol) == 0.0
    report = tjlc.tensor_pqi(vol, vol + 1.0)
    assert report.psnr == pytest.approx(20 * np.log10(255), abs=1e-9)
    assert len(report.psnr_per_slice) == 3


def test_tns_roundtrip(tmp_path):
    x = randf((3, 4, 2), 40)
    path = str(tmp_path / "x.tns")
    tjlc.write_tns(x, path)
    back = tjlc.read_tns(path)
    np.testing.assert_array_equal(back, x)

    omega = tjlc.generate_mask([3, 4, 2], missing_rate=50.0, seed=41)
    mpath = str(tmp_path / "m.tns")
    tjlc.write_tns(omega, mpath)
    mback = tjlc.read_tns(mpath)
    assert mback.dtype == np.bool_
    np.testing.assert_array_equal(mback, omega)


def test_presets():
    names = tjlc.preset_names()
    assert "mri" in names and "cv" in names
    cfg = tjlc.preset("mri")
    assert cfg.alpha == [1.0] * 6
    assert cfg.tau == 10000.0
    betas = tjlc.derive_betas(cfg.alpha)
    assert sum(betas) == pytest.approx(1.0)
