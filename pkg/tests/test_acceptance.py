"""Acceptance suite: eleven numbered criteria, one test (and one printed
``criterion NN [PASS|FAIL] ...`` verdict line) per criterion.

Run ``pytest -s tests/test_acceptance.py`` to see the verdict lines inline;
under plain ``pytest -v`` each criterion still reports as its own test.
"""

import time

import numpy as np

from chromadiff import (
    DiffusionConfig,
    PlanarImage,
    SchemeKind,
    TvConfig,
    WeightField,
    add_gaussian_noise,
    build_tensor,
    compute_weights,
    coupling_field,
    denoise,
    discrete_tv,
    edge_stopping,
    eigen_decompose,
    gaussian_convolve,
    gradient,
    hessian,
    laplacian,
    mssim,
    multigradient,
    prepare_weights,
    psnr,
    tv_smooth,
)

from conftest import random_image


def _verdict(num, ok, detail):
    print(f"criterion {num:2d} [{'PASS' if ok else 'FAIL'}] {detail}")
    assert ok, f"criterion {num}: {detail}"


def test_criterion_01_noise_calibration():
    t0 = time.perf_counter()
    checks = []
    for n, nominal, tol in ((512, 22.09, 0.15), (256, 22.11, 0.20)):
        y, x = np.mgrid[0:n, 0:n] / float(n)
        clean = PlanarImage(np.stack([x, y, 0.5 * (x + y)]))
        for seed in (0, 1):
            noisy = add_gaussian_noise(clean, 20.0, seed)
            checks.append((abs(psnr(noisy, clean) - nominal), tol))
    elapsed = time.perf_counter() - t0
    ok = all(dev <= tol for dev, tol in checks) and elapsed < 1.0
    worst = max(dev for dev, _ in checks)
    _verdict(
        1, ok,
        f"noise calibration: worst |PSNR - nominal| = {worst:.4f} dB "
        f"(tol 0.15/0.20), {elapsed:.2f} s (< 1 s)",
    )


def test_criterion_02_td_reduction():
    same = []
    for i in range(10):
        img = random_image(200 + i, h=64, w=64)
        a = denoise(img, DiffusionConfig(iterations=20, coupling_gain=0.0), SchemeKind.PROPOSED)
        b = denoise(img, DiffusionConfig(iterations=20), SchemeKind.TD)
        same.append(np.array_equal(a.data, b.data))
    _verdict(
        2, all(same),
        f"TD reduction: {sum(same)}/10 random images bit-identical at coupling_gain=0",
    )


def test_criterion_03_coupling_conservation():
    rng = np.random.default_rng(300)
    worst = 0.0
    for _ in range(100):
        img = PlanarImage(rng.random((3, 16, 16)))
        raw = rng.random((3, 16, 16)) + 1e-3
        weights = WeightField(raw / raw.sum(axis=0))
        worst = max(worst, np.abs(coupling_field(img, weights).sum(axis=0)).max())
    _verdict(
        3, worst < 1e-9,
        f"coupling conservation: max |sum_i f_C| = {worst:.3e} over 100 instances (tol 1e-9)",
    )


def test_criterion_04_gray_world_closure():
    base = gaussian_convolve(np.random.default_rng(400).random((48, 48)), 1.0)
    img = PlanarImage(np.stack([base, base, base]))
    spreads, couplings = [], []
    for cfg in (
        DiffusionConfig(iterations=15, tv=TvConfig(iterations=10)),
        DiffusionConfig(iterations=10, coupling_gain=0.8, sigma=0.0, tv=TvConfig(iterations=5)),
        DiffusionConfig(iterations=10, dt=0.1, tv=TvConfig(iterations=0)),
    ):
        couplings.append(np.abs(coupling_field(img, prepare_weights(img, cfg))).max())
        out = denoise(img, cfg, SchemeKind.PROPOSED)
        spreads.append((out.data.max(axis=0) - out.data.min(axis=0)).max())
    ok = max(spreads) < 1e-9 and max(couplings) < 1e-9
    _verdict(
        4, ok,
        f"gray-world closure: channel spread {max(spreads):.3e}, "
        f"|f_C| {max(couplings):.3e} (tol 1e-9)",
    )


def test_criterion_05_weight_simplex():
    rng = np.random.default_rng(500)
    worst_sum, worst_neg = 0.0, 0.0
    for _ in range(100):
        w = compute_weights(PlanarImage(rng.random((3, 24, 24))), rho=2.0).data
        worst_sum = max(worst_sum, np.abs(w.sum(axis=0) - 1.0).max())
        worst_neg = min(worst_neg, float(w.min()))
    ok = worst_sum < 1e-9 and worst_neg >= 0.0
    _verdict(
        5, ok,
        f"weight simplex: max |sum - 1| = {worst_sum:.3e} (tol 1e-9), "
        f"min weight = {worst_neg:.3e} (>= 0)",
    )


def test_criterion_06_tensor_spectrum():
    worst = 0.0
    in_range = True
    for i in range(5):
        img = random_image(600 + i, h=32, w=32)
        s = eigen_decompose(*multigradient(img, sigma=1.0))
        t = build_tensor(s)
        mats = np.stack(
            [np.stack([t.t11, t.t12], axis=-1), np.stack([t.t12, t.t22], axis=-1)], axis=-2
        )
        eig = np.linalg.eigvalsh(mats)  # ascending: (f_plus, f_minus)
        f_minus, f_plus = edge_stopping(s.edge_n)
        worst = max(
            worst,
            np.abs(eig[..., 0] - f_plus).max(),
            np.abs(eig[..., 1] - f_minus).max(),
        )
        in_range = in_range and bool((eig > 0).all() and (eig <= 1.0 + 1e-9).all())
    z = np.zeros((8, 8))
    flat = build_tensor(eigen_decompose(z, z, z))
    identity = (
        np.array_equal(flat.t11, np.ones((8, 8)))
        and np.array_equal(flat.t22, np.ones((8, 8)))
        and np.array_equal(flat.t12, z)
    )
    ok = worst < 1e-9 and in_range and identity
    _verdict(
        6, ok,
        f"tensor spectrum: max eigenvalue deviation {worst:.3e} (tol 1e-9), "
        f"in (0,1]: {in_range}, T=I at N=0: {identity}",
    )


def test_criterion_07_denoising_efficacy(corpus):
    t0 = time.perf_counter()
    cfg = DiffusionConfig()
    gains, mssim_prop, mssim_td = [], [], []
    for i, (_, clean) in enumerate(sorted(corpus.items())):
        noisy = add_gaussian_noise(clean, 20.0, seed=i)
        proposed = denoise(noisy, cfg, SchemeKind.PROPOSED)
        td = denoise(noisy, cfg, SchemeKind.TD)
        gains.append(psnr(proposed, clean) - psnr(noisy, clean))
        mssim_prop.append(mssim(proposed, clean))
        mssim_td.append(mssim(td, clean))
    elapsed = time.perf_counter() - t0
    gain = float(np.mean(gains))
    mp, mt = float(np.mean(mssim_prop)), float(np.mean(mssim_td))
    ok = gain >= 3.0 and mp >= mt and elapsed < 30.0
    _verdict(
        7, ok,
        f"denoising efficacy: mean PSNR gain {gain:+.2f} dB (>= 3), "
        f"MSSIM {mp:.4f} vs TD {mt:.4f} (>=), {elapsed:.1f} s (< 30 s)",
    )


def test_criterion_08_stencil_equivariance():
    rng = np.random.default_rng(800)
    f = gaussian_convolve(rng.random((48, 48)), 1.0)
    rot = np.rot90(f)
    devs = []
    fx, fy = gradient(f)
    gx, gy = gradient(rot)
    devs.append(np.abs(gx - np.rot90(fy)).max())
    devs.append(np.abs(gy + np.rot90(fx)).max())
    fxx, fxy, fyy = hessian(f)
    rxx, rxy, ryy = hessian(rot)
    devs.append(np.abs(rxx - np.rot90(fyy)).max())
    devs.append(np.abs(ryy - np.rot90(fxx)).max())
    devs.append(np.abs(rxy + np.rot90(fxy)).max())
    devs.append(np.abs(laplacian(rot) - np.rot90(laplacian(f))).max())
    devs.append(np.abs(gaussian_convolve(rot, 1.7) - np.rot90(gaussian_convolve(f, 1.7))).max())
    # one full Proposed iteration, weights co-rotated with the image
    img = PlanarImage(np.stack([gaussian_convolve(rng.random((48, 48)), 1.0) for _ in range(3)]))
    cfg = DiffusionConfig(iterations=1, tv=TvConfig(iterations=5))
    w = prepare_weights(img, cfg)
    out = denoise(img, cfg, SchemeKind.PROPOSED, weights=w)
    rot_img = PlanarImage(np.ascontiguousarray(np.rot90(img.data, axes=(1, 2))))
    rot_w = WeightField(np.ascontiguousarray(np.rot90(w.data, axes=(1, 2))))
    out_rot = denoise(rot_img, cfg, SchemeKind.PROPOSED, weights=rot_w)
    devs.append(np.abs(out_rot.data - np.rot90(out.data, axes=(1, 2))).max())
    worst = float(max(devs))
    _verdict(
        8, worst < 1e-9,
        f"stencil equivariance under 90-degree rotation: max deviation {worst:.3e} (tol 1e-9)",
    )


def test_criterion_09_metric_closed_forms():
    a = PlanarImage(np.full((3, 32, 32), 0.25))
    b = PlanarImage(a.data + 0.1)
    psnr_dev = abs(psnr(a, b) - 20.0)
    x = random_image(900, h=32, w=32)
    y = random_image(901, h=32, w=32)
    self_one = mssim(a, a) == 1.0 and mssim(x, x) == 1.0
    sym = abs(mssim(x, y) - mssim(y, x))
    ok = psnr_dev < 1e-9 and self_one and sym < 1e-9
    _verdict(
        9, ok,
        f"metric closed forms: |PSNR(offset 0.1) - 20| = {psnr_dev:.3e} (tol 1e-9), "
        f"SSIM(a,a)=1: {self_one}, symmetry dev {sym:.3e} (tol 1e-9)",
    )


def test_criterion_10_tv_monotonicity(corpus):
    fields = []
    for name, img in sorted(corpus.items()):
        fields.append((name, img))
        for seed in (0, 1):
            fields.append((f"{name}+noise{seed}", add_gaussian_noise(img, 20.0, seed)))
    rng = np.random.default_rng(1000)
    for i in range(3):
        fields.append((f"random{i}", PlanarImage(rng.random((3, 48, 48)))))
    step = TvConfig(iterations=1, dt=0.1)
    worst = -np.inf
    for _, img in fields:
        cur = img
        prev = [discrete_tv(cur.channel(c)) for c in range(3)]
        for _ in range(50):
            cur = tv_smooth(cur, step)
            now = [discrete_tv(cur.channel(c)) for c in range(3)]
            worst = max(worst, max(n - p for n, p in zip(now, prev)))
            prev = now
    _verdict(
        10, worst <= 0.0,
        f"TV monotonicity: worst per-step TV delta {worst:.3e} over 50 steps at dt=0.1 (<= 0)",
    )


def test_criterion_11_performance_envelope():
    y, x = np.mgrid[0:512, 0:512] / 512.0
    clean = PlanarImage(np.stack([x, y, 0.5 * (x + y)]))
    noisy = add_gaussian_noise(clean, 20.0, seed=4)
    t0 = time.perf_counter()
    out = denoise(noisy, DiffusionConfig(iterations=100), SchemeKind.PROPOSED)
    elapsed = time.perf_counter() - t0
    ok = elapsed < 60.0 and bool(np.isfinite(out.data).all())
    _verdict(
        11, ok,
        f"performance envelope: 512x512 RGB, 100 iterations in {elapsed:.1f} s (< 60 s)",
    )
