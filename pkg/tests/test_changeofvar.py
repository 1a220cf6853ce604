import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from modspace import (
    AffineMap,
    DegenerateInputError,
    DomainError,
    Grid,
    NormParams,
    ParameterError,
    PreconditionError,
    WindowSpec,
    abs_map,
    affine_invariance_ratio,
    bump,
    bump_chirp_family,
    chirp,
    chirp_blowup_sweep,
    compose,
    covariance_check,
    covariance_sides,
    default_grid,
    gaussian,
    nonlinear_blowup_sweep,
    piece_decomposition,
    piecewise_boundedness_sweep,
    piecewise_ratios,
    plane_wave,
    quadratic_map,
    translate,
)
from modspace.experiments import covariance_points, identity_pieces

SMALL = Grid(1, 1024, 1 / 32)
W1 = WindowSpec.gaussian(1.0)


def test_covariance_1d_and_phase_sign():
    u, phi = plane_wave(0.7) * gaussian(1.0), AffineMap(2.0, 1.0)
    pts = covariance_points(1)
    lhs, rhs = covariance_sides(u, W1, phi, pts)
    assert np.max(np.abs(lhs - rhs)) <= 1e-12
    # the conjugate phase factor does not satisfy the identity
    w = pts[:, 1]
    wrong = rhs * np.exp(-4j * np.pi * w * 0.5)
    assert np.max(np.abs(lhs - wrong)) > 0.1


def test_covariance_2d_general_matrix():
    phi = AffineMap(np.array([[1.0, 0.5], [0.0, 2.0]]), np.array([0.3, -0.2]))
    dev = covariance_check(gaussian(1.0), WindowSpec.gaussian(1.0, dim=2), phi, covariance_points(2), default_grid(2))
    assert dev <= 1e-12


def test_covariance_dimension_mismatch():
    with pytest.raises(ParameterError):
        covariance_check(gaussian(1.0), W1, AffineMap.rotation(0.3), covariance_points(2), default_grid(1))


@given(st.floats(0.5, 2.0), st.booleans(), st.floats(-1, 1))
def test_covariance_random_affine_maps(a, flip, b):
    phi = AffineMap(-a if flip else a, b)
    assert covariance_check(chirp(1.0) * gaussian(1.0), W1, phi, covariance_points(1)) <= 1e-10


def test_affine_invariance_ratios():
    u = gaussian(1.0)
    ident = AffineMap.identity(1)
    for params in (NormParams(1, 1), NormParams(2, 2), NormParams(math.inf, 2)):
        assert affine_invariance_ratio(u, ident, params) == pytest.approx(1.0, abs=1e-12)
    assert affine_invariance_ratio(u, AffineMap(2.0), NormParams(2, 2)) == pytest.approx(2**-0.5, abs=1e-9)
    # L^2 scaling of dilations holds for any member
    f = chirp(3.0) * bump(1.0)
    assert affine_invariance_ratio(f, AffineMap(0.5), NormParams(2, 2)) == pytest.approx(2**0.5, rel=1e-9)
    with pytest.raises(DegenerateInputError):
        affine_invariance_ratio(0 * bump(1.0), ident, NormParams())


def test_piece_decomposition_sums_to_composition():
    u = bump_chirp_family(seed=2)[0]
    terms = piece_decomposition(u, abs_map())
    t = default_grid().points
    np.testing.assert_allclose(sum(term(t) for term in terms), compose(u, abs_map())(t), atol=1e-15)


def test_identity_pieces_give_unit_ratios():
    ratios = piecewise_ratios(identity_pieces(), bump_chirp_family(seed=0, size=4), 2.0, grid=SMALL)
    np.testing.assert_allclose(ratios, 1.0, atol=1e-12)


def test_abs_map_ratio_for_half_line_support():
    # supp u in [0, inf): u(|x|) = u(x) + u(-x), two disjoint copies, so the L^2 ratio is sqrt 2
    u = plane_wave(3.0) * bump(0.5)
    r = piecewise_ratios(abs_map(), [translate(u, 1.0)], 2.0)[0]
    assert r == pytest.approx(math.sqrt(2), rel=1e-10)


def test_piecewise_sweep_and_preconditions():
    hi, lo = piecewise_boundedness_sweep(abs_map(), bump_chirp_family(seed=0, size=3), 1.0, grid=SMALL)
    assert 0 < lo <= hi < math.inf
    with pytest.raises(PreconditionError):
        piecewise_ratios(abs_map(), [], 2.0)


def test_nonlinear_sweep():
    u = plane_wave(8.0) * bump(0.25)
    sweep = nonlinear_blowup_sweep(quadratic_map, u, NormParams(1, 1), [0.0, 0.5, 0.95])
    assert sweep[0] == (0.0, pytest.approx(1.0, abs=1e-12))
    assert sweep[0][1] < sweep[1][1] < sweep[2][1]
    with pytest.raises(DomainError):
        nonlinear_blowup_sweep(quadratic_map, u, NormParams(1, 1), [0.5, 1.0])
    with pytest.raises(PreconditionError):
        nonlinear_blowup_sweep(quadratic_map, gaussian(1.0), NormParams(1, 1), [0.5])


def test_chirp_sweep_l2_invariance():
    # |chirp| = 1 pointwise, so every M^{2,2} ratio is exactly 1
    sweep = chirp_blowup_sweep([0, 4, 16], NormParams(2, 2), grid=SMALL)
    np.testing.assert_allclose([r for _, r in sweep], 1.0, atol=1e-10)
