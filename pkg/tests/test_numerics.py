import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from zetagap.argument import Box, sample_edge
from zetagap.compsum import compensated_sum, two_sum
from zetagap.errors import ContourTooCloseError, NoRootError
from zetagap.roots import brent, refine_brackets

finite = st.floats(-1e300, 1e300, allow_nan=False, allow_infinity=False)


# ------------------------------------------------------ compensated sums


@given(finite, finite)
def test_two_sum_is_error_free(a, b):
    s, e = two_sum(a, b)
    if math.isfinite(s):
        assert Fraction(a) + Fraction(b) == Fraction(s) + Fraction(e)


@settings(max_examples=200)
@given(st.lists(st.floats(-1e8, 1e8, allow_nan=False), min_size=0, max_size=300))
def test_compensated_sum_near_exact(xs):
    exact = float(sum(Fraction(x) for x in xs))
    got = compensated_sum(np.array(xs, dtype=float))
    scale = sum(abs(x) for x in xs)
    assert abs(got - exact) <= 2 * np.finfo(float).eps * abs(exact) + 1e-30 * scale + 1e-300


def test_compensated_sum_cancellation():
    x = np.array([1e16, 1.0, -1e16, 1.0, 1e-3])
    assert compensated_sum(x) == 2.001
    assert math.fsum(x) == compensated_sum(x)


def test_compensated_sum_complex_and_axis():
    rng = np.random.default_rng(3)
    x = rng.normal(size=(4, 101)) + 1j * rng.normal(size=(4, 101))
    got = compensated_sum(x, axis=1)
    ref = np.array([complex(math.fsum(r.real), math.fsum(r.imag)) for r in x])
    assert np.array_equal(got, ref)
    assert np.array_equal(compensated_sum(x.T, axis=0), ref)
    assert compensated_sum(np.zeros(0)) == 0.0


# ---------------------------------------------------------- root finding


def test_brent_closed_forms():
    r, lo, hi = brent(lambda x: x * x - 2, 0.0, 2.0)
    assert abs(r - math.sqrt(2)) < 1e-15
    assert lo <= math.sqrt(2) <= hi
    r, _, _ = brent(math.cos, 1.0, 2.0)
    assert abs(r - math.pi / 2) < 1e-15


def test_brent_requires_sign_change():
    with pytest.raises(NoRootError):
        brent(lambda x: x * x + 1, -1.0, 1.0)


def test_brent_endpoint_root():
    assert brent(lambda x: x - 1.0, 1.0, 3.0)[0] == 1.0


@settings(max_examples=100)
@given(st.floats(-5, 5), st.floats(0.1, 3))
def test_brent_cubic(root, spread):
    f = lambda x: (x - root) ** 3 + 0.1 * (x - root)
    r, lo, hi = brent(f, root - spread, root + 1.3 * spread, xtol=1e-13)
    assert abs(r - root) < 1e-12
    assert hi - lo <= 4 * np.finfo(float).eps * abs(r) + 1e-13 + 1e-15


def test_refine_brackets_many():
    f = np.sin
    k = np.arange(1, 200)
    lo = k * np.pi - 0.3
    hi = k * np.pi + 0.5
    root, a, b = refine_brackets(f, lo, hi, f(lo), f(hi), 1e-10)
    assert np.all(b - a <= 1e-10)
    assert np.all((a <= k * np.pi + 1e-12) & (k * np.pi - 1e-12 <= b))
    assert np.max(np.abs(root - k * np.pi)) < 1e-10
    # the brackets still straddle a sign change
    fa, fb = f(a), f(b)
    assert np.all((fa == 0) | (fb == 0) | (np.sign(fa) != np.sign(fb)))


def test_refine_brackets_steep_and_flat():
    # a flat function defeats plain regula falsi; the Illinois weights fix it
    f = lambda x: np.sign(x - 0.3) * np.abs(x - 0.3) ** 5
    root, a, b = refine_brackets(f, np.array([0.0]), np.array([1.0]), f(np.array([0.0])),
                                 f(np.array([1.0])), 1e-12)
    assert b[0] - a[0] <= 1e-12
    assert abs(root[0] - 0.3) < 1e-12


def test_refine_brackets_rejects_same_sign():
    with pytest.raises(NoRootError):
        refine_brackets(np.cos, np.array([0.0]), np.array([1.0]), np.array([1.0]),
                        np.array([0.5]), 1e-10)


# ------------------------------------------------------ argument principle


def poly(roots):
    roots = np.asarray(roots, dtype=complex)

    def f(z):
        z = np.asarray(z, dtype=complex)
        return np.prod(z[..., None] - roots, axis=-1)
    return f


def test_box_counts_polynomial_roots():
    f = poly([0.3 + 0.2j, -0.4 + 0.1j, 0.2 - 0.6j, 2 + 2j])
    assert Box.sample(f, -1, 1, -1, 1).count() == 3
    assert Box.sample(f, 1.5, 2.5, 1.5, 2.5).count() == 1
    assert Box.sample(f, 3, 4, 3, 4).count() == 0


def test_box_counts_multiplicity():
    f = poly([0.1 + 0.1j] * 3)
    assert Box.sample(f, -1, 1, -1, 1).count() == 3


def test_box_split_conserves_count():
    f = poly([0.3 + 0.2j, -0.4 + 0.1j, 0.2 - 0.6j])
    box = Box.sample(f, -1, 1, -1, 1)
    left, right = box.split(f)
    assert left.count() + right.count() == box.count() == 3
    bottom, top = left.split(f, 0.4)
    assert bottom.count() + top.count() == left.count()


def test_box_rejects_zero_on_contour():
    f = poly([0.5 + 0.0j])
    with pytest.raises(ContourTooCloseError):
        Box.sample(f, 0, 1, 0, 1).count()


def test_edge_refinement_tracks_fast_phase():
    # exp(i k z) has phase k per unit; coarse samples would alias
    k = 40.0
    f = lambda z: np.exp(1j * k * np.asarray(z))
    e = sample_edge(f, 0.0 + 0j, 1.0 + 0j, step=0.5)
    assert abs(e.phase_change - k) < 1e-9


@settings(max_examples=40, deadline=None)
@given(st.lists(st.tuples(st.floats(-0.9, 0.9), st.floats(-0.9, 0.9)), min_size=1, max_size=6))
def test_winding_matches_root_count(pts):
    roots = [complex(x, y) for x, y in pts]
    # keep roots clear of the contour; coincident roots count with multiplicity
    roots = [r for r in roots if min(1 - abs(r.real), 1 - abs(r.imag)) > 0.05]
    f = poly(roots + [3 + 3j])
    assert Box.sample(f, -1, 1, -1, 1).count() == len(roots)
