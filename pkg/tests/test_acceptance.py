"""Acceptance criteria at their stated tolerances; one summary line per criterion."""

import json
import math
import time

import numpy as np
import pytest

from oracles import brute_min_denominator
from orbiconv.basis import BasisSpec, enumerate_basis, fd_residual, sample_mode, spectrum_inclusion_check
from orbiconv.cli import main
from orbiconv.engine import (
    SpectrumCoeffs,
    convolve,
    dirichlet_energy,
    forward_transform,
    inverse_transform,
    norm,
    sample_basis_field,
    smooth,
)
from orbiconv.geometry import build_strip_mesh, moebius_embed, phi
from orbiconv.periodicity import p_jnd, p_jnd_sym, p_plus_grid

criterion = pytest.mark.criterion


@pytest.fixture(scope="module")
def pplus_144():
    return p_plus_grid(144)


@criterion(1, "Stern-Brocot search equals brute-force minimal-denominator scan")
def test_rational_search_oracle_equivalence():
    rng = np.random.default_rng(20240601)
    centers = rng.uniform(0, 1200, 10_000)
    jnds = rng.uniform(5, 50, 10_000)
    from orbiconv.periodicity import min_denominator_rational

    t0 = time.perf_counter()
    for c, j in zip(centers, jnds):
        lo, hi = 2 ** ((c - j) / 1200), 2 ** ((c + j) / 1200)
        r = min_denominator_rational(lo, hi)
        assert (r.a, r.b) == brute_min_denominator(lo, hi, max_b=1000), (c, j)
    elapsed = time.perf_counter() - t0
    assert elapsed < 10.0


@criterion(2, "just-interval spot checks and exact inversion symmetry")
def test_just_interval_spot_checks():
    fifth = 1200 * math.log2(1.5)
    for d in np.linspace(fifth - 19.999, fifth + 19.999, 401):
        assert p_jnd(d) == 1.0
    for d in (700.0, 702.0, 690.0, 720.0):
        assert p_jnd(d) == 1.0
    assert p_jnd(0.0) == 0.0
    for d in range(1201):
        assert p_jnd_sym(float(d)) == p_jnd_sym(float(1200 - d))


@criterion(3, "first 600 modes orthonormal on 256x256 grid to 1e-8")
def test_basis_orthonormality():
    t0 = time.perf_counter()
    basis = enumerate_basis(BasisSpec(12.0, 600))
    n = 256
    M = np.stack([sample_mode(m, n).ravel() for m in basis])
    gram = 0.5 * (12.0 / n) ** 2 * (M @ M.T)
    err = np.abs(gram - np.eye(len(basis))).max()
    assert err < 1e-8
    assert spectrum_inclusion_check(basis, 12.0)
    assert time.perf_counter() - t0 < 60.0


@criterion(4, "finite-difference residual shrinks >= 3.5x from 128 to 256")
def test_eigenfunction_residual_convergence():
    basis = enumerate_basis(BasisSpec(12.0, 600))
    for k in np.linspace(1, 599, 10).astype(int):
        r128, r256 = fd_residual(basis[k], 128), fd_residual(basis[k], 256)
        assert r128 / r256 >= 3.5, (k, r128, r256)


@criterion(5, "F(f * g)(k) = fhat(k) ghat(k) for 100 band-limited pairs to 1e-8")
def test_convolution_defining_identity():
    basis = enumerate_basis(BasisSpec(12.0, 120))
    n = 48
    rng = np.random.default_rng(11)
    worst = 0.0
    for _ in range(100):
        fc, gc = rng.normal(size=(2, len(basis)))
        f = inverse_transform(SpectrumCoeffs("f", fc), basis, 12.0, n)
        g = inverse_transform(SpectrumCoeffs("g", gc), basis, 12.0, n)
        fhat = forward_transform(f, basis).coeffs
        ghat = forward_transform(g, basis).coeffs
        conv_hat = forward_transform(convolve(f, g, basis), basis).coeffs
        worst = max(worst, np.abs(conv_hat - fhat * ghat).max())
    assert worst < 1e-8


@criterion(6, "low-pass filter acts as orthogonal projection onto V_n")
def test_projection_semantics(default_basis, pplus_144):
    n_cut = 529
    for k in (0, 1, 200, 529, 530, 777, 1500):
        psi = sample_basis_field(default_basis[k], 144)
        s = smooth(psi, n_cut, default_basis)
        expected = psi.samples if k <= n_cut else np.zeros_like(psi.samples)
        assert np.abs(s.samples - expected).max() < 1e-8
    once = smooth(pplus_144, n_cut, default_basis)
    twice = smooth(once, n_cut, default_basis)
    assert np.abs(twice.samples - once.samples).max() < 1e-8
    residuals = [norm(pplus_144 - smooth(pplus_144, n, default_basis))
                 for n in (10, 50, 200, 529, 1000)]
    assert all(a >= b for a, b in zip(residuals, residuals[1:])), residuals


@criterion(7, "default constants in manifest; reruns byte-identical")
def test_default_constants_and_determinism(tmp_path):
    runs = []
    for name in ("a", "b"):
        out = tmp_path / name
        assert main(["smooth", "--out-dir", str(out)]) == 0
        runs.append(out)
    manifest = json.loads((runs[0] / "manifest.json").read_text())
    params = manifest["parameters"]
    assert params["gamma"] == 12.0
    assert params["jnd_cents"] == 20.0
    assert params["n_cut"] == 529
    assert params["f0_hz"] == 261.626
    names = sorted(p.name for p in runs[0].iterdir())
    assert names == sorted(p.name for p in runs[1].iterdir())
    for name in names:
        assert (runs[0] / name).read_bytes() == (runs[1] / name).read_bytes(), name
    assert set(manifest["outputs"]) == set(names) - {"manifest.json"}


@criterion(8, "Moebius gluing identity, welded seam, phi corner values")
def test_moebius_gluing():
    sympy = pytest.importorskip("sympy")
    a, r = sympy.symbols("alpha r", real=True)
    rho = sympy.Matrix([
        sympy.cos(2 * a) * (1 + r * sympy.cos(a)),
        sympy.sin(2 * a) * (1 + r * sympy.cos(a)),
        r * sympy.sin(a),
    ])
    diff = rho.subs(a, sympy.pi) - rho.subs({a: 0, r: -r})
    assert sympy.simplify(diff) == sympy.zeros(3, 1)

    rs = np.linspace(-0.5, 0.5, 101)
    assert np.abs(moebius_embed(math.pi, rs) - moebius_embed(0.0, -rs)).max() < 1e-12

    res = 24
    mesh = build_strip_mesh(lambda x, y: x - y, res)
    seam_gap = 0.0
    for j in range(res + 1):
        rv = -0.5 + j / res
        seam_gap = max(seam_gap, np.abs(moebius_embed(math.pi, -rv) - mesh.vertices[j]).max())
    assert seam_gap < 1e-12
    last = mesh.faces[-2 * res:]
    assert set(last.ravel()) & set(range(res + 1))

    assert (phi(0, 0).alpha, phi(0, 0).r) == (0.0, -0.5)
    assert (phi(0.5, 0.5).alpha, phi(0.5, 0.5).r) == (0.0, 0.5)
    s = phi(0.75, 0.0)
    assert s.alpha == pytest.approx(0.75 * math.pi, abs=1e-15)
    assert s.r == pytest.approx(0.25, abs=1e-15)


@criterion(9, "Dirichlet energy of modes and of smoothed fields")
def test_dirichlet_energy():
    basis = enumerate_basis(BasisSpec(12.0, 120))
    n = 48
    for m in basis[:50]:
        assert abs(dirichlet_energy(sample_basis_field(m, n), basis) - m.eigenvalue) < 1e-8
    rng = np.random.default_rng(13)
    for _ in range(20):
        f = inverse_transform(SpectrumCoeffs("f", rng.normal(size=len(basis))), basis, 12.0, n)
        full = dirichlet_energy(f, basis)
        for n_cut in (0, 5, 30, 80, 119):
            assert dirichlet_energy(smooth(f, n_cut, basis), basis) <= full + 1e-10


@criterion(10, "section shows step plateaus, rounded transitions, reported minimum")
def test_section_structure(tmp_path):
    assert main(["section", "--section-points", "1201", "--out-dir", str(tmp_path)]) == 0
    rows = np.loadtxt(tmp_path / "section.csv", delimiter=",", skiprows=1)
    t, sampled, smoothed = rows.T
    manifest = json.loads((tmp_path / "manifest.json").read_text())

    # sampled P+ is a step function taking values log2(b)
    steps = np.diff(sampled)
    assert np.mean(steps == 0) >= 0.85
    b = 2.0 ** sampled
    assert np.abs(b - np.round(b)).max() < 1e-6
    assert np.array_equal(sampled, sampled[::-1])

    # smoothing rounds the transitions
    assert np.abs(np.diff(smoothed)).max() < 0.25 * np.abs(steps).max()
    assert np.abs(np.diff(smoothed)).sum() < np.abs(steps).sum()

    # plateau order survives: unison < fifth/fourth < every plateau with P >= 2
    d = 200 * np.abs(t)

    def plateau_mean(lo, hi):
        sel = (d >= lo) & (d <= hi)
        return smoothed[sel].mean()

    unison = plateau_mean(0, 18)
    fifth = plateau_mean(684, 718)
    fourth = plateau_mean(484, 516)
    others = [plateau_mean(lo, hi) for lo, hi in
              ((170, 200), (215, 245), (370, 400), (570, 630), (750, 790), (800, 830))]
    assert unison < min(fifth, fourth)
    assert max(fifth, fourth) < min(others)

    # the overshoot diagnostic is reported
    assert manifest["diagnostics"]["smoothed_min"] == pytest.approx(smoothed.min(), abs=1e-8)
