import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ipcodes.asymptotic import (Profile, ProfileError, asymptotic_rate, de_check, de_trajectory,
                                design_alpha_from_beta, discretize, generalized_inverse)
from ipcodes.galois import Field
from ipcodes.product import CodeSpec, dimension


@st.composite
def betas(draw, eps):
    """Random non-decreasing piecewise-linear beta with beta(0)=0, 0 < beta(1) <= eps."""
    # breakpoints on a 1e-3 grid: the resolution a hand-written profile file carries
    k = draw(st.integers(1, 6))
    ts = sorted(draw(st.lists(st.integers(10, 990), min_size=k, max_size=k)))
    ts = [t / 1000 for t in ts]
    top = draw(st.integers(50, 1000)) / 1000 * eps
    vs = sorted(draw(st.lists(st.integers(0, 1000), min_size=k, max_size=k)))
    pts = [(0.0, 0.0)] + [(t, v / 1000 * top) for t, v in zip(ts, vs)] + [(1.0, top)]
    if draw(st.booleans()):  # add a jump
        t = draw(st.integers(50, 950)) / 1000
        lo = Profile(pts)(t)
        pts = [p for p in pts if p[0] < t] + [(t, lo), (t, min(top, lo + 0.3 * top))] + \
              [(p[0], max(p[1], min(top, lo + 0.3 * top))) for p in pts if p[0] > t]
    return Profile(pts)


def test_parse_and_serialize():
    p = Profile.from_text("# beta\n0 0\n0.5 0.1   # knee\n1 0.3\n")
    assert p.points == [(0.0, 0.0), (0.5, 0.1), (1.0, 0.3)]
    assert Profile.from_text(p.to_text()).points == p.points
    with pytest.raises(ProfileError, match="line 2"):
        Profile.from_text("0 0\n0.5\n1 1\n")
    with pytest.raises(ProfileError):
        Profile.from_text("0 0\n0.5 0.4\n1 0.2\n")
    with pytest.raises(ProfileError):
        Profile.from_text("0.1 0\n1 0.2\n")


def test_generalized_inverse_examples():
    f = Profile.linear(0.3)
    assert generalized_inverse(f, 0.15) == pytest.approx(0.5)
    assert generalized_inverse(f, 0.3) == 1.0
    assert generalized_inverse(f, 0.9) == 1.0
    assert generalized_inverse(Profile.constant(0.2), 0.1) == 0.0


@settings(max_examples=80, deadline=None)
@given(beta=betas(0.5))
def test_inverse_profile_matches_direct_sup(beta):
    B = beta.inverse()
    xs = np.linspace(0, 1, 401)
    vals = [B(x) for x in xs]
    assert all(u <= v + 1e-12 for u, v in zip(vals, vals[1:]))
    for x, v in zip(xs, vals):
        assert v == pytest.approx(generalized_inverse(beta, x), abs=1e-12)


def test_flat_piece_becomes_right_continuous_jump():
    beta = Profile([(0, 0), (0.2, 0.1), (0.6, 0.1), (1, 0.3)])
    B = beta.inverse()
    assert B(0.1) == pytest.approx(0.6)
    assert B.left_limit(0.1) == pytest.approx(0.2)
    assert B(0.1 - 1e-9) == pytest.approx(0.2, abs=1e-6)
    assert generalized_inverse(beta, 0.1) == pytest.approx(0.6)


def test_de_check_examples():
    lin = Profile.linear(0.3)
    assert de_check(lin, lin, 0.25)
    v = de_check(lin, lin, 0.3)
    assert not v and v.x == 0.0
    zero = Profile.constant(0.0)
    assert not de_check(lin, zero, 0.25)


def test_trajectory_geometric_case():
    lin = Profile.linear(0.3)
    tr = de_trajectory(lin, lin, 0.25, x_stop=1e-3)
    ratio = 25 / 36
    for i, x in enumerate(tr.xs):
        assert x == pytest.approx(ratio ** i, rel=1e-12)
    assert tr.rounds == math.ceil(math.log(1e-3) / math.log(ratio)) == 19
    assert de_trajectory(lin, lin, 0.25, x_stop=1.0).rounds == 0


def test_trajectory_stalls_at_interior_fixed_point():
    beta = Profile.linear(0.3)
    alpha = Profile([(0, 0), (0.5, 0.05), (1, 0.3)])
    v = de_check(alpha, beta, 0.25)
    assert not v
    tr = de_trajectory(alpha, beta, 0.25)
    assert tr.converged_to >= v.x - 1e-12
    assert tr.converged_to > 0.5
    assert all(a >= b for a, b in zip(tr.xs, tr.xs[1:]))


@pytest.mark.parametrize("eps", [0.1, 0.3164, 0.5])
@settings(max_examples=30, deadline=None)
@given(data=st.data())
def test_design_properties(eps, data):
    beta = data.draw(betas(eps))
    alpha = design_alpha_from_beta(beta, eps)
    assert asymptotic_rate(alpha, beta) == pytest.approx(1 - eps, abs=1e-9)
    assert asymptotic_rate(alpha, beta, quad_points=20_000) == pytest.approx(1 - eps, abs=2e-3)
    for delta in (0.01, 0.05):
        assert de_check(alpha, beta, eps - delta)
        assert de_trajectory(alpha, beta, eps - delta).converged_to <= 1e-6


def test_design_examples():
    eps = 0.3164
    lin = Profile.linear(eps)
    alpha = design_alpha_from_beta(lin, eps)
    for x in np.linspace(0, 1, 11):
        assert alpha(x) == pytest.approx(eps * x)
    assert asymptotic_rate(alpha, lin) == pytest.approx(0.6836, abs=1e-12)
    step = Profile([(0, 0), (0.5, 0), (0.5, eps), (1, eps)])
    a = design_alpha_from_beta(step, eps)
    assert a(0.0) == pytest.approx(eps / 2)
    assert a(0.99) == pytest.approx(eps / 2)
    assert a(1.0) == pytest.approx(eps)
    assert asymptotic_rate(a, step) == pytest.approx(1 - eps, abs=1e-12)
    for bad in (Profile.constant(0.0), Profile.linear(0.5), Profile.constant(0.1)):
        with pytest.raises(ProfileError):
            design_alpha_from_beta(bad, 0.3)


def test_rate_of_all_zero_profiles_is_one():
    z = Profile.constant(0.0)
    assert asymptotic_rate(z, z) == 1.0


def test_discretize():
    z = Profile.constant(0.0)
    assert discretize(z, z, 4, 5) == ((5,) * 4, (4,) * 5)
    assert discretize(z, z, 4, 5, floors=(2, 3)) == ((4,) * 4, (2,) * 5)
    with pytest.raises(ValueError):
        discretize(z, z, 4, 5, floors=(7, 1))
    eps = 0.3164
    lin = Profile.linear(eps)
    alpha = design_alpha_from_beta(lin, eps)
    dims = []
    for boosts in range(4):
        a, b = discretize(alpha, lin, 50, 50, (3, 3), boosts)
        assert list(a) == sorted(a) and list(b) == sorted(b)
        assert max(a) <= 48 and max(b) <= 48
        dims.append(dimension(CodeSpec(Field.gf2e(6), 50, 50, a, b)))
    assert dims == sorted(dims, reverse=True)
    assert abs(dims[3] - 1709) <= 0.02 * 1709


def test_round_half_up():
    # n * (1 - alpha(1 - i/m)) = 2.5 at i = 1 for this constant profile
    prof = Profile.constant(0.5)
    a, _ = discretize(prof, Profile.constant(0.0), 1, 5)
    assert a == (3,)
