import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from webgeom.castelnuovo import (
    PointConfig,
    castelnuovo_rnc,
    conditions_on_hypersurfaces,
    general_position,
    pi,
    steiner_rnc,
)
from webgeom.errors import MathRefusal


def _pi_reference(n, k):
    total, j = 0, 1
    while k - j * (n - 1) - 1 > 0:
        total += k - j * (n - 1) - 1
        j += 1
    return total


@settings(max_examples=200, deadline=None)
@given(st.integers(2, 12), st.integers(1, 40))
def test_pi_matches_reference_sum(n, k):
    assert pi(n, k) == _pi_reference(n, k)


def test_pi_rejects_bad_input():
    with pytest.raises(ValueError):
        pi(1, 3)


def test_general_position():
    assert general_position(PointConfig([(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 1)]))
    assert not general_position(PointConfig([(1, 0, 0), (0, 1, 0), (1, 1, 0), (1, 1, 1)]))
    with pytest.raises(ValueError):
        PointConfig([(1, 2, 3), (2, 4, 6)])


def test_points_on_twisted_cubic_impose_seven_conditions_on_quadrics():
    pts = [(1, s, s * s, s**3) for s in range(-4, 5)]
    assert conditions_on_hypersurfaces(PointConfig(pts), 2) == 7


@settings(max_examples=25, deadline=None)
@given(
    st.lists(st.integers(-6, 6), min_size=3, max_size=3),
    st.lists(st.integers(-6, 6), min_size=3, max_size=3),
    st.lists(st.integers(-6, 6), min_size=3, max_size=3),
)
def test_steiner_recovers_planted_conic(r0, r1, r2):
    rows = [r0, r1, r2]
    det = (r0[0] * (r1[1] * r2[2] - r1[2] * r2[1]) - r0[1] * (r1[0] * r2[2] - r1[2] * r2[0])
           + r0[2] * (r1[0] * r2[1] - r1[1] * r2[0]))
    if det == 0:
        return
    def image(s):
        v = (1, s, s * s)
        return tuple(sum(rows[i][j] * v[j] for j in range(3)) for i in range(3))
    pts = [image(Fraction(s)) for s in (0, 1, -1, 2, 3)]
    curve = steiner_rnc(pts)
    assert curve.contains(image(Fraction(5)))
    assert curve.contains(image(Fraction(-7, 2)))


def test_steiner_rejects_degenerate_configurations():
    with pytest.raises(MathRefusal):
        steiner_rnc([(1, 0, 0), (0, 1, 0), (1, 1, 0), (0, 0, 1), (1, 2, 3)])


def test_steiner_in_three_space():
    curve = steiner_rnc([(1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1), (1, 1, 1, 1), (1, 2, 3, 4)])
    assert curve.n == 3 and curve.is_nondegenerate()


def test_castelnuovo_recovers_twisted_cubic():
    pts = [(1, s, s * s, s**3) for s in (0, 1, -1, 2, -2, 3, -3, 4)] + [(0, 0, 0, 1)]
    res = castelnuovo_rnc(pts)
    assert res.curve is not None and res.conditions == 7
    assert res.curve.contains((1, 5, 25, 125))
    assert not res.curve.contains((1, 5, 25, 124))


def test_castelnuovo_refuses_generic_points():
    rng = random.Random(3)
    pts = [tuple(rng.randint(-50, 50) for _ in range(4)) for _ in range(9)]
    res = castelnuovo_rnc(pts)
    assert res.curve is None and "conditions on quadrics" in res.refusal
