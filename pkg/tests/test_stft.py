import math
import sys

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy import integrate

from modspace import (
    DomainCoverageError,
    Grid,
    ParameterError,
    TFMatrix,
    WindowSpec,
    bump,
    chirp,
    default_grid,
    forward_ft,
    gaussian,
    l2_norm,
    plane_wave,
    sample,
    stft,
    stft_at,
    stft_magnitude_identity_check,
    test_family,
)
from modspace import fft as mfft

stft_module = sys.modules["modspace.stft"]


def gauss_stft(x, w):
    """Closed form of V_g f for f = g = exp(-pi t^2)."""
    return 2**-0.5 * np.exp(-np.pi * x**2 / 2 - 1j * np.pi * w * x - np.pi * w**2 / 2)


@pytest.fixture(params=mfft.ENGINES)
def engine(request):
    prev = mfft.set_engine(request.param)
    yield request.param
    mfft.set_engine(prev)


def test_closed_form_gaussian(engine):
    m = stft(gaussian(1.0), WindowSpec.gaussian(1.0))
    x = m.time_grid.points[:, 0][:, None]
    w = m.freq_grid.points[:, 0][None, :]
    np.testing.assert_allclose(m.values, gauss_stft(x, w), atol=1e-14)


def test_pointwise_route_matches_closed_form():
    x = np.array([-1.0, 0.3, 2.0])
    w = np.array([0.5, -1.7, 0.0])
    np.testing.assert_allclose(stft_at(gaussian(1.0), WindowSpec.gaussian(1.0), x, w), gauss_stft(x, w), atol=1e-15)


def _quad_stft(f, g, x, w, lo, hi):
    re = integrate.quad(lambda t: (f(t) * np.conj(g(t - x)) * np.exp(-2j * np.pi * w * t)).real, lo, hi, limit=400)[0]
    im = integrate.quad(lambda t: (f(t) * np.conj(g(t - x)) * np.exp(-2j * np.pi * w * t)).imag, lo, hi, limit=400)[0]
    return re + 1j * im


def test_lattice_route_against_scipy_quad():
    f = chirp(3.0) * bump(1.0)
    win = WindowSpec.gaussian(1.0)
    m = stft(f, win)
    xs, ws = m.time_grid.axis(), m.freq_grid.axis()
    for j, k in [(128, 2048), (120, 2051), (136, 2040), (128, 2100)]:
        ref = _quad_stft(lambda t: complex(f(t)), lambda t: complex(win.expr(t)), xs[j], ws[k], -1, 1)
        assert abs(m.values[j, k] - ref) < 1e-10


def test_moyal_identity_for_normalized_window():
    # ||V_g f||_2 = ||f||_2 ||g||_2 with ||g||_2 = 1
    grid = default_grid()
    win = WindowSpec.default()
    assert l2_norm(sample(win.expr, grid)) == pytest.approx(1.0, rel=1e-14)
    for f in test_family(seed=0):
        assert stft(f, win, grid).l2_norm() == pytest.approx(l2_norm(sample(f, grid)), rel=1e-10)


def test_plateau_window_reproduces_the_spectrum():
    u = chirp(2.0) * bump(1.0)
    grid = default_grid()
    m = stft(u, WindowSpec.plateau(1.0), grid)
    rows = np.abs(m.time_grid.axis()) <= 1.0
    assert rows.sum() == 33
    u_hat = forward_ft(sample(u, grid)).values
    assert np.max(np.abs(m.values[rows] - u_hat)) <= 1e-10


@pytest.mark.parametrize("pt", [(0.0, 0.0), (1.0, 1.0), (-0.5, 2.25), (2.0, -0.75)])
def test_magnitude_identity_two_routes(pt):
    f = plane_wave(1.5) * bump(1.0)
    lhs, rhs = stft_magnitude_identity_check(f, WindowSpec.gaussian(1.0), pt)
    assert lhs == pytest.approx(rhs, rel=1e-9, abs=1e-14)


def test_magnitude_identity_closed_form_value():
    lhs, rhs = stft_magnitude_identity_check(gaussian(1.0), WindowSpec.gaussian(1.0), (1.0, 1.0))
    assert lhs == pytest.approx(2**-0.5 * math.exp(-math.pi), rel=1e-12)
    assert rhs == pytest.approx(lhs, rel=1e-12)


def test_lookup_and_direct_window_paths_agree():
    grid = default_grid()
    f = chirp(4.0) * bump(0.8)
    fast = stft(f, WindowSpec.default(), grid)
    off = Grid(1, 256, 1 / 16, origin=1 / 1000)  # off-grid shifts force direct evaluation
    assert stft_module._shift_table(WindowSpec.default(), grid, off.points) is None
    slow = stft(f, WindowSpec.default(), grid, lattice=off)
    ref = np.array([stft_at(f, WindowSpec.default(), np.full_like(slow.freq_grid.axis(), x), slow.freq_grid.axis(), grid)
                    for x in off.axis()[::64]])
    np.testing.assert_allclose(slow.values[::64], ref, atol=1e-13)
    np.testing.assert_allclose(fast.values, stft(f, WindowSpec.default(), grid, lattice=fast.time_grid).values)


def test_thread_count_does_not_change_output(monkeypatch):
    f = test_family(seed=0)[3]
    one = stft(f, threads=1).values
    monkeypatch.setenv("MODSPACE_THREADS", "3")
    assert stft_module.worker_count() == 3
    np.testing.assert_array_equal(stft(f).values, one)
    monkeypatch.setenv("MODSPACE_THREADS", "zero")
    with pytest.raises(ParameterError):
        stft_module.worker_count()


def test_two_dimensional_closed_form():
    grid = default_grid(2)
    m = stft(gaussian(1.0), WindowSpec.gaussian(1.0, dim=2), grid, stride=16)
    x, w = m.time_grid.points, m.freq_grid.points
    expected = gauss_stft(x[:, None, 0], w[None, :, 0]) * gauss_stft(x[:, None, 1], w[None, :, 1])
    np.testing.assert_allclose(m.values, expected, atol=1e-14)


def test_coverage_is_enforced():
    with pytest.raises(DomainCoverageError):
        stft(bump(1.0), WindowSpec.plateau(4.0))  # radius 9 shifted to |x| = 8
    with pytest.raises(DomainCoverageError):
        stft(bump(1.0), WindowSpec.gaussian(1.0), Grid(1, 256, 1 / 16), lattice=Grid(1, 64, 1 / 4))


def test_full_density_lattice():
    grid = Grid(1, 512, 1 / 16)
    m = stft(gaussian(1.0), WindowSpec.gaussian(1.0), grid, stride=1)
    assert m.values.shape == (256, 512)
    assert m.time_spacing == grid.spacing


def test_window_constructors():
    assert WindowSpec.plateau(1.0).radius == 3.0
    assert WindowSpec.bump(0.5).radius == 0.5
    with pytest.raises(ParameterError):
        WindowSpec.custom(gaussian(1.0))
    with pytest.raises(ParameterError):
        WindowSpec("triangle", gaussian(1.0), 1.0)
    # the transform of exp(-pi t^2) is itself, with unit integral
    win = WindowSpec.gaussian(1.0)
    assert win.fourier_l1(default_grid()) == pytest.approx(1.0, rel=1e-12)


def test_tf_matrix_validation():
    with pytest.raises(ParameterError):
        TFMatrix(np.zeros(4), 1.0, 1.0)
    with pytest.raises(ParameterError):
        TFMatrix(np.full((2, 2), np.nan), 1.0, 1.0)
    with pytest.raises(ParameterError):
        TFMatrix(np.zeros((2, 2)), 0.0, 1.0)


@given(st.floats(-4, 4), st.floats(-8, 8), st.floats(0.5, 1.0))
def test_lattice_matches_pointwise_on_lattice(x_frac, w_frac, r):
    grid = Grid(1, 1024, 1 / 32)
    f = chirp(2.0) * bump(r)
    m = stft(f, WindowSpec.default(), grid)
    j = int(np.argmin(np.abs(m.time_grid.axis() - x_frac)))
    k = int(np.argmin(np.abs(m.freq_grid.axis() - w_frac)))
    direct = stft_at(f, WindowSpec.default(), m.time_grid.axis()[j], m.freq_grid.axis()[k], grid)
    assert abs(m.values[j, k] - direct) < 1e-13
