import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from modspace import (
    Grid,
    NormParams,
    ParameterError,
    PreconditionError,
    TFMatrix,
    WindowSpec,
    bump,
    chirp,
    default_grid,
    forward_ft,
    fourier_lebesgue_norm,
    gaussian,
    local_equivalence_report,
    mixed_norm,
    modulation_norm,
    modulation_norms,
    plane_wave,
    sample,
    stft,
    test_family,
    translate,
)
from modspace.norms import ball_volume, lp_norm, parse_exponent

INF = math.inf
SMALL = Grid(1, 1024, 1 / 32)


def gauss_mod_norm(p, q):
    """||exp(-pi t^2)||_{M^{p,q}} with the same (unnormalized) window."""
    factor = lambda r: 1.0 if math.isinf(r) else (2 / r) ** (1 / (2 * r))
    return 2**-0.5 * factor(p) * factor(q)


@pytest.mark.parametrize("text,val", [("1", 1.0), ("2.5", 2.5), ("inf", INF), (" INF ", INF), (3, 3.0)])
def test_parse_exponent(text, val):
    assert parse_exponent(text) == val


@pytest.mark.parametrize("bad", ["0.5", "foo", "nan", 0, -1])
def test_parse_exponent_rejects(bad):
    with pytest.raises(ParameterError):
        parse_exponent(bad)


def test_norm_params_str():
    assert str(NormParams("inf", 1)) == "(inf,1)"
    assert NormParams() == NormParams(2, 2)


def test_lp_norm_small_cases():
    v = np.array([3.0, -4.0])
    assert lp_norm(v, 1.0, 1) == 7.0
    assert lp_norm(v, 1.0, 2) == 5.0
    assert lp_norm(v, 1.0, INF) == 4.0
    assert lp_norm(v, 0.5, 3) == pytest.approx((0.5 * 91) ** (1 / 3))
    np.testing.assert_allclose(lp_norm(np.ones((2, 3)), 2.0, 1, axis=0), [4.0] * 3)


def test_mixed_norm_inner_time_outer_frequency():
    m = TFMatrix(np.array([[1.0, 2.0], [3.0, 4.0]]), 1.0, 1.0)
    # time index is axis 0: inner L^1 gives (4, 6); outer L^inf gives 6
    assert mixed_norm(m, NormParams(1, INF)) == 6.0
    # inner L^inf gives (3, 4); outer L^1 gives 7
    assert mixed_norm(m, NormParams(INF, 1)) == 7.0
    with pytest.raises(ParameterError):
        mixed_norm(m, (1, 1))


@pytest.mark.parametrize("p,q", [(1, 1), (2, 2), (1, 2), (2, 1), (INF, 1), (INF, INF), (3, 1.5)])
def test_gaussian_closed_form(p, q):
    got = modulation_norm(gaussian(1.0), WindowSpec.gaussian(1.0), NormParams(p, q), default_grid())
    assert got == pytest.approx(gauss_mod_norm(p, q), rel=1e-10)


def test_shared_stft_matches_individual():
    f = chirp(3.0) * bump(1.0)
    ps = [NormParams(1, 1), NormParams(INF, 2)]
    assert modulation_norms(f, ps, grid=SMALL) == [modulation_norm(f, None, pq, SMALL) for pq in ps]


@pytest.mark.parametrize("q,expected", [(1, 1.0), (2, 2**-0.25), (INF, 1.0), (4, 4**-0.125)])
def test_fourier_lebesgue_gaussian(q, expected):
    assert fourier_lebesgue_norm(gaussian(1.0), q) == pytest.approx(expected, rel=1e-12)


def test_ball_volume():
    assert ball_volume(1.5, 1) == 3.0
    assert ball_volume(2.0, 2) == pytest.approx(4 * math.pi)
    with pytest.raises(ParameterError):
        ball_volume(1.0, 3)


def test_equivalence_report_fields():
    rep = local_equivalence_report(bump(1.0), NormParams(1, 2), grid=default_grid())
    assert rep.radius == 1.0
    assert rep.forward_constant == pytest.approx(4.0 * WindowSpec.bump(1.0).fourier_l1(default_grid()))
    assert rep.reverse_constant == pytest.approx(0.5)
    assert rep.forward_satisfied and rep.reverse_satisfied
    assert rep.mod_norm <= rep.forward_bound and rep.fl_norm <= rep.reverse_bound
    rep_inf = local_equivalence_report(bump(1.0), NormParams(INF, 1), grid=default_grid())
    assert rep_inf.reverse_constant == 1.0


def test_equivalence_preconditions():
    with pytest.raises(PreconditionError):
        local_equivalence_report(gaussian(1.0), NormParams())
    with pytest.raises(PreconditionError):
        local_equivalence_report(bump(1.0), NormParams(), radius=0.5)


def test_plateau_sup_dominates_spectrum_columnwise():
    # rows with |x| <= R reproduce u^ exactly, so the sup over x is at least |u^(w)|
    u = chirp(2.0) * bump(1.0)
    m = stft(u, WindowSpec.plateau(1.0), default_grid())
    u_hat = np.abs(forward_ft(sample(u, default_grid())).values)
    assert np.all(np.max(np.abs(m.values), axis=0) >= u_hat - 1e-15)
    rep = local_equivalence_report(u, NormParams(INF, 1), grid=default_grid())
    assert rep.fl_norm <= rep.reverse_bound


members = st.sampled_from(test_family(seed=0))
pq = st.sampled_from([NormParams(1, 1), NormParams(2, 2), NormParams(INF, 1), NormParams(1, 2)])


@given(members, st.complex_numbers(min_magnitude=0.1, max_magnitude=10, allow_nan=False, allow_infinity=False), pq)
def test_homogeneity(f, c, params):
    a = modulation_norm(c * f, None, params, SMALL)
    assert a == pytest.approx(abs(c) * modulation_norm(f, None, params, SMALL), rel=1e-10)


@given(members, members, pq)
def test_triangle_inequality(f, g, params):
    lhs = modulation_norm(f + g, None, params, SMALL)
    assert lhs <= modulation_norm(f, None, params, SMALL) + modulation_norm(g, None, params, SMALL) + 1e-12


# Bounds of ||f||_{g1} / ||f||_{g2} over the seed-0 family on SMALL, with
# g1 = normalized gaussian(1), g2 = normalized gaussian(0.5). Frozen once;
# other seeds must stay inside the interval widened by 1.5x.
SEED0_WINDOW_RATIOS = {
    (1.0, 1.0): (0.92002, 1.30005),
    (INF, 1.0): (0.73287, 0.76983),
    (1.0, 2.0): (1.11748, 1.32408),
    (2.0, 1.0): (0.81614, 0.98576),
}


@given(st.integers(1, 10**6), st.sampled_from(sorted(SEED0_WINDOW_RATIOS)))
def test_window_change_stays_in_frozen_interval(seed, key):
    lo, hi = SEED0_WINDOW_RATIOS[key]
    params = NormParams(*key)
    w1, w2 = WindowSpec.default(), WindowSpec.gaussian(0.5, normalized=True)
    for f in test_family(seed)[1:]:
        r = modulation_norm(f, w1, params, SMALL) / modulation_norm(f, w2, params, SMALL)
        assert lo / 1.5 <= r <= hi * 1.5


@given(st.floats(-0.5, 0.5), st.floats(1, 8))
def test_modulation_norm_translation_invariant_on_lattice(k, freq):
    # shifts by lattice multiples leave every M^{p,q} norm unchanged
    shift = round(k * 16) / 16 * 4
    f = plane_wave(freq) * bump(1.0)
    for params in (NormParams(1, 1), NormParams(INF, 2)):
        a = modulation_norm(f, None, params, SMALL)
        assert modulation_norm(translate(f, shift), None, params, SMALL) == pytest.approx(a, rel=1e-9)
