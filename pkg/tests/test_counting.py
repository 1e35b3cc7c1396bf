import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from zetagap import counting, specfun
from zetagap.errors import CompletenessError, PathThroughZeroError

# mpmath.nzeros(T)
N_ORACLE = {14.5: 1, 50: 10, 100: 29, 100.5: 29, 250: 108, 500: 269, 1000: 649}
GAMMA_1 = 14.134725141734694


def test_l_of_t():
    assert abs(counting.l_of_t(2 * math.pi) + 1 / 8) < 1e-15
    T = mpmath.mpf(100)
    ref = T * mpmath.log(T) / (2 * mpmath.pi) - (1 + mpmath.log(2 * mpmath.pi)) * T / (2 * mpmath.pi) + mpmath.mpf(7) / 8
    assert abs(counting.l_of_t(100) - float(ref)) < 1e-13
    t = np.linspace(7, 5000, 500)
    assert np.all(np.diff([counting.l_of_t(x) for x in t]) > 0)
    with pytest.raises(ValueError):
        counting.l_of_t(1)


def test_e_of_t():
    T = 500.0
    resid = counting.e_of_t(T) + counting.l_of_t(T) - (specfun.riemann_siegel_theta(T).value / math.pi + 1)
    assert abs(resid) < 1e-12
    vals = [counting.e_of_t(T) for T in np.linspace(100, 1000, 100)]
    assert max(abs(v) for v in vals) < 0.1
    assert abs(counting.e_of_t(1000) - counting.e_of_t(999)) <= 0.01


def test_e_of_t_asymptotics():
    # Stirling gives E(T) = 1/(48 pi T) + O(T^-3)
    for T in (100.0, 1000.0):
        assert abs(counting.e_of_t(T) - 1 / (48 * math.pi * T)) < 1e-6


@pytest.mark.parametrize("T", sorted(N_ORACLE))
def test_n_of_t_matches_oracle(T):
    cv = counting.n_of_t(T)
    assert cv.N == N_ORACLE[T]
    assert abs(cv.consistency_residual) < 1e-8
    assert cv.T == T


def test_below_first_zero():
    cv = counting.n_of_t(14.0)
    assert cv.N == 0
    assert abs(cv.S + cv.L + cv.E) < 1e-8


def test_s_of_t_at_100_5():
    S = counting.s_of_t(100.5)
    assert round(specfun.riemann_siegel_theta(100.5).value / math.pi + 1 + S) == 29


def test_s_of_t_matches_mpmath():
    for T in (50.0, 123.4, 777.7):
        ref = float(mpmath.arg(mpmath.zeta(mpmath.mpc(0.5, T)))) / math.pi
        # mpmath's principal arg differs from the continued one by an integer
        # multiple of 2, and the counts fix that integer
        diff = counting.s_of_t(T) - ref
        assert abs(diff - 2 * round(diff / 2)) < 1e-10


def test_reject_heights_at_ordinates():
    with pytest.raises(PathThroughZeroError):
        counting.s_of_t(GAMMA_1)
    with pytest.raises(ValueError):
        counting.s_of_t(10)


def test_certified_mode():
    assert counting.n_of_t(60.0, certified=True).N == 13


def test_certified_mode_detects_mismatch(monkeypatch):
    import zetagap.zerofinder as zf

    monkeypatch.setattr(zf, "locate_critical_zeros", lambda *a, **k: [])
    with pytest.raises(CompletenessError):
        counting.n_of_t(60.0, certified=True)


def test_n_of_t_residual_random_heights():
    rng = np.random.default_rng(5)
    prev = (0.0, 0)
    for T in np.sort(rng.uniform(14, 1000, 100)):
        cv = counting.n_of_t(float(T))
        assert abs(cv.consistency_residual) < 1e-8
        assert cv.N >= prev[1]
        prev = (T, cv.N)


def test_s_statistics():
    rng = np.random.default_rng(42)
    S = np.array([counting.s_of_t(float(T)) for T in rng.uniform(100, 1000, 2000)])
    assert abs(S.mean()) <= 0.05
    assert np.abs(S).max() <= 2.5


def test_density_residual():
    assert abs(counting.density_residual(100, 0.1)) <= 1
    assert abs(counting.density_residual(1000, 0.01)) <= 1
    fd = counting.density_residual(200, 1e-6)
    assert abs(fd - counting.density_residual_limit(200)) < 1e-6
    grid = np.linspace(20, 2000, 200)
    assert max(abs(counting.density_residual(float(u), 0.1)) for u in grid) <= 1
    with pytest.raises(ValueError):
        counting.density_residual(10, 0.1)
    with pytest.raises(ValueError):
        counting.density_residual(100, 2)


def test_density_limit_value():
    # d/du theta = Re psi(1/4 + iu/2)/2 - log(pi)/2 -> log(u/2)/2 - log(pi)/2
    u = 200.0
    ref = (0.5 * float(mpmath.re(mpmath.digamma(mpmath.mpc(0.25, u / 2)))) - 0.5 * math.log(math.pi)) / math.pi
    assert abs(counting.density_residual_limit(u) - (ref - math.log(u) / (2 * math.pi))) < 1e-12
    # and the limit tends to -log(2 pi)/(2 pi)
    assert abs(counting.density_residual_limit(1e4) + math.log(2 * math.pi) / (2 * math.pi)) < 1e-6


def test_lipschitz_ratio():
    assert counting.lipschitz_ratio(500, 501) <= 0.05
    assert math.isfinite(counting.lipschitz_ratio(500 - 1e-9, 500))
    with pytest.raises(ValueError):
        counting.lipschitz_ratio(100, 250)


@settings(max_examples=500, deadline=None)
@given(st.floats(100, 2000), st.floats(0, 1, exclude_min=True, exclude_max=True))
def test_lipschitz_bound(t1, frac):
    t2 = t1 + frac * min(t1, 2000 - t1)
    if not t1 < t2 < 2 * t1:
        return
    assert counting.lipschitz_ratio(t1, t2) <= 0.2


def test_e_prime_matches_mpmath():
    def E(t):
        L = t * mpmath.log(t) / (2 * mpmath.pi) - (1 + mpmath.log(2 * mpmath.pi)) * t / (2 * mpmath.pi) + mpmath.mpf(7) / 8
        return mpmath.siegeltheta(t) / mpmath.pi + 1 - L

    for t in (30.0, 250.0, 1900.0):
        ref = float(mpmath.diff(E, t))
        assert abs(counting.e_prime(t)[0] - ref) < 1e-14


def test_lipschitz_short_interval_is_derivative():
    t = 700.0
    assert counting.lipschitz_ratio(t, t + 1e-9) == pytest.approx(abs(counting.e_prime(t)[0]), rel=1e-6)
