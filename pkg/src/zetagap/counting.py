"""Zero counting: N(T) = L(T) + S(T) + E(T).

S is read off a continuous argument of zeta along 2 -> 2+iT -> 1/2+iT, and
L + E is the smooth part theta(T)/pi + 1, so N comes out as an integer up
to rounding.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import argument, specfun
from .errors import CompletenessError, ContourTooCloseError, PathThroughZeroError
from .specfun import DEFAULT_ACCURACY, Accuracy

TWO_PI = 2 * math.pi
MIN_PATH_MODULUS = 1e-10
ORDINATE_GUARD = 1e-9


@dataclass(frozen=True)
class CountingValues:
    T: float
    N: int
    L: float
    S: float
    E: float
    consistency_residual: float


def l_of_t(T: float) -> float:
    """Smooth main term ``T log T/(2 pi) - (1 + log 2 pi) T/(2 pi) + 7/8``."""
    if T <= 1:
        raise ValueError("l_of_t needs T > 1")
    return T * math.log(T) / TWO_PI - (1 + math.log(TWO_PI)) * T / TWO_PI + 7 / 8


def smooth_count(T: float) -> float:
    """``L(T) + E(T) = theta(T)/pi + 1``."""
    return specfun.riemann_siegel_theta(T).value / math.pi + 1.0


def e_of_t(T: float) -> float:
    if T <= 2:
        raise ValueError("e_of_t needs T > 2")
    return smooth_count(T) - l_of_t(T)


def arg_zeta_critical(T: float, acc: Accuracy = DEFAULT_ACCURACY) -> float:
    """Continuous ``arg zeta(1/2 + iT)`` reached from the right along Im s = T."""

    def f_many(z):
        return specfun.zeta_many(z, acc)[0]

    # on Re s = 2 zeta stays in the disc |w - 1| < zeta(2) - 1, so the
    # principal argument is the continuous one there.
    try:
        edge = argument.sample_edge(f_many, complex(0.5, T), complex(2.0, T), step=0.05)
    except ContourTooCloseError as exc:
        raise PathThroughZeroError(str(exc)) from exc
    if edge.min_modulus < MIN_PATH_MODULUS:
        raise PathThroughZeroError(f"|zeta| < {MIN_PATH_MODULUS:g} on the path at height {T}")
    end = edge.f[0]
    if abs(end) < 1e-6:
        # reject heights within ORDINATE_GUARD of a zero ordinate
        deriv = specfun.zeta_prime(complex(0.5, T), acc).value
        if abs(end) / abs(deriv) < ORDINATE_GUARD:
            raise PathThroughZeroError(f"height {T} is within {ORDINATE_GUARD:g} of a zero ordinate")
    return float(np.angle(edge.f[-1])) - edge.phase_change


def s_of_t(T: float, acc: Accuracy = DEFAULT_ACCURACY) -> float:
    """``S(T) = arg zeta(1/2 + iT) / pi``."""
    if T < 14:
        raise ValueError("s_of_t needs T >= 14")
    return arg_zeta_critical(T, acc) / math.pi


def n_of_t(T: float, acc: Accuracy = DEFAULT_ACCURACY, certified: bool = False) -> CountingValues:
    """Zero count up to ``T`` from the ``L + S + E`` decomposition.

    With ``certified=True`` the count is also checked against the number of
    zeros located on the critical line in ``(14, T]``.
    """
    if T < 14:
        raise ValueError("n_of_t needs T >= 14")
    L = l_of_t(T)
    E = e_of_t(T)
    S = s_of_t(T, acc)
    total = L + S + E
    N = int(round(total))
    values = CountingValues(T, N, L, S, E, total - N)
    if certified:
        from .zerofinder import locate_critical_zeros

        found = len(locate_critical_zeros(14.0, T, acc)) if T > 14 else 0
        if found != N:
            raise CompletenessError(f"N({T}) = {N} from L+S+E but {found} zeros located")
    return values


def density_residual(u: float, du: float) -> float:
    """Difference quotient of ``L + E`` minus the main density ``log(u)/(2 pi)``."""
    if u < 20 or not (0 < du <= 1):
        raise ValueError("density_residual needs u >= 20 and 0 < du <= 1")
    return (smooth_count(u + du) - smooth_count(u)) / du - math.log(u) / TWO_PI


def density_residual_limit(u: float) -> float:
    """The ``du -> 0`` limit, from the analytic derivative of theta."""
    return specfun.theta_prime(u) / math.pi - math.log(u) / TWO_PI


def e_prime(t) -> np.ndarray:
    """``E'(t) = theta'(t)/pi - log(t/(2 pi))/(2 pi)``, elementwise."""
    t = np.atleast_1d(np.asarray(t, dtype=float))
    psi, _ = specfun.digamma_many(0.25 + 0.5j * t)
    return (0.5 * psi.real - 0.5 * specfun.LOG_PI) / math.pi - np.log(t / TWO_PI) / TWO_PI


_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(24)


def lipschitz_ratio(t1: float, t2: float) -> float:
    """``|E(t2) - E(t1)| / (t2 - t1)`` on an admissible pair ``2 < t1 < t2 < 2 t1``.

    The increment is the integral of E' rather than a difference of E
    values: E is a small remainder of two large terms, so differencing it
    over a short interval would return rounding noise.
    """
    if not (2 < t1 < t2 < 2 * t1):
        raise ValueError("lipschitz_ratio needs 2 < t1 < t2 < 2 t1")
    half = 0.5 * (t2 - t1)
    nodes = 0.5 * (t1 + t2) + half * _GL_NODES
    # the weights sum to 2, so this is the mean of E' over [t1, t2]
    return abs(float(np.dot(_GL_WEIGHTS, e_prime(nodes)))) / 2.0
