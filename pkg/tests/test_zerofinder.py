import numpy as np
import pytest

from zetagap import specfun
from zetagap.errors import (CompletenessError, DivergenceError, MultiplicityUnsupportedError,
                            ZeroDerivativeError)
from zetagap.zerofinder import (CertifiedZeros, Rectangle, count_zeros_rectangle,
                                critical_window_edges, locate_critical_zeros,
                                locate_zeta_prime_zeros, refine_root_newton)
from zetagap import zerofinder

# mpmath.zetazero(n).imag for n = 1, 2, 3, 29, 30, 649, 650
ORDINATES = {1: 14.134725141734694, 2: 21.022039638771555, 3: 25.010857580145689,
             29: 98.831194218193692, 30: 101.31785100573139, 649: 999.79157155741294,
             650: 1001.3494826377827}

# zeros of zeta' in [0.5, 4] x [14, 100]: local minima of |zeta'| on a 0.05 grid,
# polished by mpmath.findroot at 20 digits (rounded to 12 places)
ZETA_PRIME_ZEROS = [
    (2.463161869454, 23.298320492763), (1.286496822269, 31.708250083116),
    (2.307570063723, 38.489983173079), (1.382763605712, 42.290964554597),
    (0.964685622706, 48.847159905068), (2.101699900949, 52.43216124515),
    (1.895959762471, 57.13475319902), (0.848735328105, 60.140845782038),
    (1.207295624674, 65.919932824281), (1.832947931654, 68.611078827128),
    (1.774269085838, 71.528161065185), (0.864622864426, 76.362807896467),
    (1.328515542333, 78.662405942407), (1.203560134883, 83.669133503415),
    (2.39403928084, 85.802080034941), (0.864103640599, 88.177517409881),
    (1.304087814943, 93.08592681562), (0.780628004725, 95.292968271352),
    (1.798437389765, 98.826971867454),
]


# ------------------------------------------------------ critical-line zeros


def test_first_zero():
    zs = locate_critical_zeros(14, 15)
    assert len(zs) == 1
    assert abs(zs[0].gamma - ORDINATES[1]) < 1e-9


def test_search_floor_and_ceiling():
    for lo, hi in ((2, 14), (14, 14), (20, 10), (9000, 10001)):
        with pytest.raises(ValueError):
            locate_critical_zeros(lo, hi)


def test_zeros_to_100():
    zs = locate_critical_zeros(14, 100)
    assert len(zs) == 29
    assert isinstance(zs, CertifiedZeros) and (zs.t_lo, zs.t_hi) == (14, 100)
    assert abs(zs[1].gamma - ORDINATES[2]) < 1e-9
    assert abs(zs[2].gamma - ORDINATES[3]) < 1e-9
    assert abs(zs[-1].gamma - ORDINATES[29]) < 1e-9


def test_zero_invariants(zeros_1000):
    g = zeros_1000.gammas
    assert len(g) == 649
    assert np.all(np.diff(g) > 0)
    assert g[0] > 14
    assert abs(g[-1] - ORDINATES[649]) < 1e-9
    assert max(z.bracket_width for z in zeros_1000) <= 1e-9
    assert max(z.z_residual for z in zeros_1000) <= 1e-7


def test_brackets_contain_sign_change(zeros_1000):
    g = zeros_1000.gammas
    w = np.array([z.bracket_width for z in zeros_1000])
    # the stored point is an endpoint of its bracket; test both sides
    lo, _ = specfun.hardy_z_many(g - w)
    hi, _ = specfun.hardy_z_many(g + w)
    mid, _ = specfun.hardy_z_many(g)
    assert np.all((np.sign(lo) != np.sign(mid)) | (np.sign(hi) != np.sign(mid)) | (mid == 0))


def test_windows_match_counting_difference(zeros_1000):
    from zetagap.counting import n_of_t

    g = zeros_1000.gammas
    edges = [14.0] + [float(T) for T in range(50, 1001, 50)]
    counts = [n_of_t(T).N for T in edges]
    for lo, hi, a, b in zip(edges, edges[1:], counts, counts[1:]):
        assert int(np.count_nonzero((g > lo) & (g <= hi))) == b - a


def test_window_edges():
    assert critical_window_edges(14, 100) == [14, 25, 50, 75, 100]
    assert critical_window_edges(25, 50) == [25, 50]
    assert critical_window_edges(14, 14.5) == [14, 14.5]


def test_completeness_failure_is_loud(monkeypatch):
    # drop every located zero: the N(T) certificate must notice
    monkeypatch.setattr(zerofinder, "_grid_zeros", lambda *a: [])
    with pytest.raises(CompletenessError):
        locate_critical_zeros(14, 30)


def test_determinism():
    a = locate_critical_zeros(400, 460)
    b = locate_critical_zeros(400, 460)
    assert a == b


# ------------------------------------------------------------ winding counts


def test_count_rectangles():
    assert count_zeros_rectangle("zeta", Rectangle(2, 3, 5, 6)) == 0
    assert count_zeros_rectangle("zeta_prime", Rectangle(0.4, 3, 23, 24)) == 1
    assert count_zeros_rectangle("zeta", Rectangle(0.2, 0.8, 14, 26)) == 3
    n = count_zeros_rectangle("zeta_prime", Rectangle(0.4, 4, 20, 100))
    assert isinstance(n, int) and n == 19


def test_rectangle_validation():
    with pytest.raises(ValueError):
        Rectangle(1, 1, 0, 1)
    with pytest.raises(ValueError):
        count_zeros_rectangle("eta", Rectangle(0, 1, 0, 1))


# -------------------------------------------------------------------- Newton


def test_newton_closed_form():
    s = refine_root_newton(lambda z: z * z - 1, 1.2, 1e-13)
    assert abs(complex(s) - 1.0) < 1e-12


def test_newton_zero_derivative():
    with pytest.raises(ZeroDerivativeError):
        refine_root_newton(lambda z: z * z + 1, 0.0, 1e-12)


def test_newton_tolerance_floor():
    with pytest.raises(ValueError):
        refine_root_newton(lambda z: z - 1, 0.0, 1e-14)


def test_newton_leaves_box():
    box = Rectangle(-0.1, 0.1, -0.1, 0.1)
    with pytest.raises(DivergenceError):
        refine_root_newton(lambda z: z - 5.0, 0.0, 1e-12, box=box)


def test_newton_zeta_prime_converges():
    history = []
    s = refine_root_newton("zeta_prime", complex(2.4, 23.3), 1e-12, history=history)
    assert abs(complex(s) - complex(*ZETA_PRIME_ZEROS[0])) < 1e-11
    tail = history[-4:]
    assert all(b < a for a, b in zip(tail, tail[1:]))


def test_newton_on_zeta():
    s = refine_root_newton("zeta", complex(0.5, 14.1), 1e-12)
    assert abs(complex(s) - complex(0.5, ORDINATES[1])) < 1e-11


# --------------------------------------------------------------- zeta' zeros


def test_first_zeta_prime_zero():
    zs = locate_zeta_prime_zeros(20, 25, 4)
    assert len(zs) == 1
    z = zs[0]
    assert abs(z.beta_prime - 2.463161869454) < 1e-10
    assert abs(z.gamma_prime - 23.298320492763) < 1e-10
    assert z.residual <= 1e-8


def test_zeta_prime_zeros_match_oracle():
    zs = locate_zeta_prime_zeros(14, 100, 4.0)
    assert len(zs) == len(ZETA_PRIME_ZEROS)
    for z, (b, g) in zip(zs, ZETA_PRIME_ZEROS):
        assert abs(complex(z.beta_prime, z.gamma_prime) - complex(b, g)) < 1e-9
        assert z.residual <= 1e-8


def test_zeta_prime_preconditions():
    with pytest.raises(ValueError):
        locate_zeta_prime_zeros(30, 30, 4)
    with pytest.raises(ValueError):
        locate_zeta_prime_zeros(20, 30, 7)


def test_speiser_and_residuals(scan_1000):
    zp = scan_1000.zeta_prime_zeros
    assert len(zp) > 500
    assert min(z.beta_prime for z in zp) >= 0.5 - 1e-9
    assert max(z.residual for z in zp) <= 1e-8
    g = [z.gamma_prime for z in zp]
    assert g == sorted(g)


def test_multiplicity_is_refused(monkeypatch):
    # a triple zero made of three copies of one: the minimal box still holds 3
    f = lambda z: (np.asarray(z) - (1 + 30.05j)) ** 3
    monkeypatch.setattr(zerofinder, "_function", lambda name, acc: f)
    with pytest.raises(MultiplicityUnsupportedError):
        locate_zeta_prime_zeros(30, 30.1, 2.0)
