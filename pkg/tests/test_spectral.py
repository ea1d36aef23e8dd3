import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hardysplit.corpus import get
from hardysplit.errors import WindowTooSmall
from hardysplit.spectral import (
    FProfile,
    _simpson,
    build_F,
    dft_line,
    growth_bound_check,
    laplace_reconstruct,
    proof_growth_constant,
    spectrum_support_test,
)

UP = get("upper_double_pole")
LO = get("lower_double_pole")
LOR = get("lorentzian")


def test_forward_transform_residue_oracle():
    prof = dft_line(UP.boundary)
    t = prof.freqs
    mask = (t > 0.1) & (t < 10.0)
    oracle = 4.0 * math.sqrt(2.0 * math.pi) * t[mask] * np.exp(-t[mask])
    err = np.max(np.abs(prof.values[mask] - oracle)) / oracle.max()
    assert err < 1e-4


def test_neg_energy_ratios_by_side():
    assert dft_line(UP.boundary).neg_energy_ratio < 1e-6
    assert dft_line(LO.boundary).neg_energy_ratio > 1.0 - 1e-6
    assert abs(dft_line(LOR.boundary).neg_energy_ratio - 0.5) < 0.01


def test_support_test_decisions():
    assert spectrum_support_test(UP.boundary, 1.0)["in_Hplus"]
    assert not spectrum_support_test(LO.boundary, 1.0)["in_Hplus"]


def test_window_too_small_raises():
    with pytest.raises(WindowTooSmall):
        dft_line(UP.boundary, L=5.0, n=256)


def test_plancherel():
    L, n = 200.0, 2 ** 14
    dx = 2.0 * L / n
    x = -L + dx * np.arange(n)
    f = LOR.boundary(x)
    prof = dft_line(LOR.boundary, L=L, n=n)
    dt = prof.freqs[1] - prof.freqs[0]
    lhs = np.sum(np.abs(prof.values) ** 2) * dt
    rhs = np.sum(np.abs(f) ** 2) * dx
    assert abs(lhs - rhs) / rhs < 1e-8


def test_conjugation_symmetry_is_exact():
    # spectrum of conj(f) is t -> conj(f_hat(-t)); on the shifted grid the
    # frequency -t_j sits at index n - j for j >= 1
    prof = dft_line(UP.boundary)
    conj_prof = dft_line(lambda x: np.conj(UP.boundary(x)))
    expected = np.conj(np.roll(prof.values[::-1], 1))
    assert np.max(np.abs(conj_prof.values[1:] - expected[1:])) < 1e-12


def test_build_F_delta_invariance():
    Fp = build_F(UP.f, 0.75, L=1600.0, n=2 ** 17)
    assert Fp.max_cross_delta_dev < 1e-5
    oracle = 4.0 * math.sqrt(2.0 * math.pi) * Fp.t_grid * np.exp(-Fp.t_grid)
    assert np.max(np.abs(Fp.mean_F() - oracle)) / oracle.max() < 1e-3


def test_build_F_zero():
    Fp = build_F(lambda z: np.zeros_like(z), 0.75)
    assert np.all(Fp.mean_F() == 0)
    assert laplace_reconstruct(Fp, 1j) == 0


def test_build_F_rejects_bad_delta():
    with pytest.raises(ValueError):
        build_F(UP.f, 0.75, delta_list=(0.01,))


def test_growth_bound_exponent_and_constants():
    Fp = build_F(UP.f, 0.75, L=1600.0, n=2 ** 17)
    assert Fp.growth_exponent_target == pytest.approx(1.0 / 3.0)
    report = growth_bound_check(Fp, hp_norm=1.0, p=0.75)
    assert report["ok"] and report["fitted_C"] > 0
    assert report["proof_C"] == pytest.approx(proof_growth_constant(0.75))
    # explicit proof constant: C_p^{1-p} B_p^{-B_p} e^{B_p}
    b = 1.0 / 0.75 - 1.0
    c_p = (2.0 / math.pi) ** (1.0 / 0.75)
    assert proof_growth_constant(0.75) == pytest.approx(
        c_p ** 0.25 * b ** (-b) * math.exp(b))


def test_laplace_reconstruct_gamma_oracle():
    Fp = build_F(UP.f, 0.75, L=1600.0, n=2 ** 17)
    assert abs(laplace_reconstruct(Fp, 1j) - 1.0) < 1e-5
    for z in (2j, 1.0 + 1.5j, -0.5 + 1j):
        assert abs(laplace_reconstruct(Fp, z) - UP.f(z)) < 1e-5


def test_laplace_requires_upper_point():
    Fp = build_F(UP.f, 0.75)
    with pytest.raises(ValueError):
        laplace_reconstruct(Fp, -1j)


def test_fprofile_csv_shape():
    Fp = build_F(UP.f, 0.75)
    lines = Fp.to_csv().strip().split("\n")
    assert lines[0] == "t,abs_F,bound"
    assert len(lines) == Fp.t_grid.size + 1


@settings(max_examples=10, deadline=None)
@given(scale=st.floats(min_value=0.1, max_value=10.0))
def test_transform_is_linear(scale):
    base = dft_line(UP.boundary).values
    scaled = dft_line(lambda x: scale * UP.boundary(x)).values
    assert np.max(np.abs(scaled - scale * base)) < 1e-9 * scale


def test_simpson_matches_exact_cubic():
    t = np.linspace(0.0, 2.0, 129)
    vals = t ** 3 - t
    got = _simpson(vals.astype(complex), t[1] - t[0])
    assert got.real == pytest.approx(4.0 - 2.0, rel=1e-12)
