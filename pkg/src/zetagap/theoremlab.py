"""Poisson-kernel zero sums, nearest-zero pairing and the explicit constants.

A zero ``beta' + i gamma'`` of zeta' (with ``a = beta' - 1/2 > 0``) defines

    h(t) = a / (a^2 + (t - gamma')^2),

a kernel of total mass pi.  Summed over the ordinates of zeta it is close
to ``log(gamma')/2``.  This module evaluates h and its integrals in closed
form, pairs each zeta' zero with its nearest critical-line ordinate, forms
the normalized gap ratios, and solves for the admissible constant c0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy import integrate

from .counting import n_of_t
from .errors import (IncompleteZeroListError, InsufficientCoverageError, NoRootError,
                     PathThroughZeroError)
from .roots import brent
from .zerofinder import CertifiedZeros, ZetaPrimeZero, ZetaZero

DEGENERATE_A = 1e-12
TIE_TOLERANCE = 1e-12
IMPLIED_CONSTANT_REF = 2.16


def loglog(x: float) -> float:
    if x <= math.e:
        raise ValueError("loglog needs x > e")
    return math.log(math.log(x))


# -------------------------------------------------------------------- kernel


@dataclass(frozen=True)
class PoissonKernel:
    a: float
    center: float

    def __post_init__(self):
        if not self.a > 0:
            raise ValueError("kernel width a must be positive")

    @classmethod
    def from_zero(cls, zp: ZetaPrimeZero) -> "PoissonKernel":
        return cls(zp.beta_prime - 0.5, zp.gamma_prime)

    @property
    def in_theorem_range(self) -> bool:
        """Whether ``a <= 1/loglog(center)``, the range where the gap bound applies."""
        return self.a <= 1.0 / loglog(self.center)


def kernel_eval(k: PoissonKernel, t):
    """Return ``(h(t), h'(t))``; works elementwise on arrays."""
    x = np.asarray(t, dtype=float) - k.center
    den = k.a * k.a + x * x
    h = k.a / den
    hp = -2.0 * x * k.a / (den * den)
    if np.ndim(h) == 0:
        return float(h), float(hp)
    return h, hp


@dataclass(frozen=True)
class KernelMasses:
    full_mass: float
    central_mass: float
    total_variation: float
    window_variation: float


def window_halfwidth(a: float, p: float) -> float:
    """Half-width ``sqrt(a)/p`` of the window around the center."""
    return math.sqrt(a) / p


def kernel_closed_forms(k: PoissonKernel, p: float) -> KernelMasses:
    """Closed-form integrals of h and |h'|.

    ``central_mass`` integrates h over ``[center/2, 3 center/2]``;
    ``window_variation`` integrates |h'| over ``center +- sqrt(a)/p``.
    """
    if not p > 0:
        raise ValueError("p must be positive")
    return KernelMasses(
        full_mass=math.pi,
        central_mass=2.0 * math.atan(k.center / (2.0 * k.a)),
        total_variation=2.0 / k.a,
        window_variation=(2.0 / k.a) / (1.0 + k.a * p * p),
    )


def window_integral_closed_form(x: float) -> float:
    """``g(x) = arctan(1/x) - x/(1 + x^2)`` for ``x = p sqrt(a) > 0``.

    Twice this is the integral of ``4 a v^2 / (a^2 + v^2)^2`` over
    ``0 <= v <= sqrt(a)/p``.
    """
    if not x > 0:
        raise ValueError("x must be positive")
    return math.atan(1.0 / x) - x / (1.0 + x * x)


# ---------------------------------------------------------------- quadrature


def _breakpoints(center: float, scale: float, lo: float, hi: float) -> list[float]:
    pts = {lo, hi}
    if lo < center < hi:
        pts.add(center)
    for m in (1.0, 10.0, 100.0, 1e3, 1e4, 1e5):
        for sgn in (-1.0, 1.0):
            x = center + sgn * m * scale
            if lo < x < hi:
                pts.add(x)
    return sorted(pts)


def integrate_peaked(f, lo: float, hi: float, center: float, scale: float) -> float:
    """Adaptive quadrature of a function peaked at ``center`` with width ``scale``.

    The range is cut at geometric distances from the peak so each piece is
    smooth on its own scale; infinite limits are allowed.
    """
    pts = _breakpoints(center, scale, lo, hi)
    total = 0.0
    for a, b in zip(pts[:-1], pts[1:]):
        val, _ = integrate.quad(f, a, b, epsabs=1e-14, epsrel=1e-13, limit=400)
        total += val
    return total


def kernel_quadrature(k: PoissonKernel, p: float) -> KernelMasses:
    """The :func:`kernel_closed_forms` integrals computed by quadrature instead."""
    # integrate in x = t - center: forming t - center at t ~ 1e3 would cost
    # eps * center / a of relative accuracy near a narrow peak
    a = k.a
    h = lambda x: a / (a * a + x * x)
    dh = lambda x: 2.0 * abs(x) * a / (a * a + x * x) ** 2
    w = window_halfwidth(a, p)
    half = 0.5 * k.center
    return KernelMasses(
        full_mass=integrate_peaked(h, -math.inf, math.inf, 0.0, a),
        central_mass=integrate_peaked(h, -half, half, 0.0, a),
        total_variation=integrate_peaked(dh, -math.inf, math.inf, 0.0, a),
        window_variation=integrate_peaked(dh, -w, w, 0.0, a),
    )


def window_integral_quadrature(a: float, p: float) -> float:
    """Quadrature of ``(1/2) int_0^{sqrt(a)/p} 4 a v^2 / (a^2 + v^2)^2 dv``."""
    f = lambda v: 4.0 * a * v * v / (a * a + v * v) ** 2
    return 0.5 * integrate_peaked(f, 0.0, window_halfwidth(a, p), a, a)


# ------------------------------------------------------------------ Lemma 1


@dataclass(frozen=True)
class Lemma1Result:
    sum: float
    tail_bound: float
    residual: float


def _check_complete(zeros: Sequence[ZetaZero], tail_height: float) -> np.ndarray:
    g = np.sort(np.array([z.gamma for z in zeros], dtype=float))
    if isinstance(zeros, CertifiedZeros):
        if zeros.t_lo > 14.0 + 1e-12 or zeros.t_hi < tail_height:
            raise IncompleteZeroListError(
                f"zeros certified on ({zeros.t_lo}, {zeros.t_hi}], need (14, {tail_height}]")
        return g[g <= tail_height]
    # plain list: compare the count below tail_height with N(tail_height)
    T = tail_height
    near = np.abs(g - T) < 1e-6
    if near.any():
        above = g[g > T]
        T = 0.5 * (T + above[0]) if len(above) else T + 1e-3
    try:
        expected = n_of_t(T).N
    except PathThroughZeroError as exc:
        raise IncompleteZeroListError(f"cannot certify the list at height {T}: {exc}") from exc
    have = int(np.count_nonzero(g <= T))
    if have != expected:
        raise IncompleteZeroListError(f"{have} zeros listed up to {T}, N({T}) = {expected}")
    return g[g <= tail_height]


def _tail_integral(k: PoissonKernel, H: float) -> float:
    # density log(t/2pi)/(2pi) of ordinates beyond H, for +gamma and -gamma
    dens = lambda t: max(math.log(t / (2 * math.pi)), 0.0) / (2 * math.pi)
    up = lambda t: dens(t) * k.a / (k.a * k.a + (t - k.center) ** 2)
    down = lambda t: dens(t) * k.a / (k.a * k.a + (t + k.center) ** 2)
    v1, _ = integrate.quad(up, H, math.inf, epsabs=1e-14, limit=200)
    v2, _ = integrate.quad(down, H, math.inf, epsabs=1e-14, limit=200)
    return v1 + v2


def lemma1_sum(k: PoissonKernel, zeros: Sequence[ZetaZero], tail_height: float | None = None,
               ) -> Lemma1Result:
    """Sum of h over the zeta ordinates, and its distance from ``log(gamma')/2``.

    Zeros with negative ordinate enter through the symmetry ``gamma -> -gamma``.
    The sum is truncated at ``tail_height`` (default ten times the center);
    ``tail_bound`` estimates the omitted part from the zero density.
    """
    if tail_height is None:
        tail_height = 10.0 * k.center
    if tail_height < 10.0 * k.center:
        raise ValueError("tail_height must be at least 10 * center")
    g = _check_complete(zeros, tail_height)
    h_pos, _ = kernel_eval(k, g)
    h_neg, _ = kernel_eval(k, -g)
    total = math.fsum(np.concatenate([np.atleast_1d(h_pos), np.atleast_1d(h_neg)]))
    return Lemma1Result(total, _tail_integral(k, tail_height), total - 0.5 * math.log(k.center))


# ------------------------------------------------------------------ pairing


@dataclass(frozen=True)
class PairRecord:
    beta_prime: float
    gamma_prime: float
    gamma_c: float
    beta_c: float
    delta: float
    ratio_thm: float
    ratio_gy: float
    ratio_fgh: float
    tie_broken: bool
    degenerate: bool = False
    theorem_range: bool = False
    fgh_range: bool = False

    @property
    def a(self) -> float:
        return self.beta_prime - 0.5


def _coverage(zeros: Sequence[ZetaZero], g: np.ndarray) -> tuple[float, float]:
    if isinstance(zeros, CertifiedZeros):
        lo, hi = zeros.t_lo, zeros.t_hi
    else:
        lo, hi = float(g[0]), float(g[-1])
    # nothing lies below the zero-free strip, so the floor is not a real edge
    if lo <= 14.0:
        lo = -math.inf
    return lo, hi


def nearest_ordinate(gamma_prime: float, gammas: np.ndarray) -> tuple[float, bool]:
    """Brute-force nearest ordinate; exact ties go to the smaller ordinate."""
    d = np.abs(gammas - gamma_prime)
    best = float(d.min())
    cand = gammas[d - best < TIE_TOLERANCE]
    return float(cand.min()), len(cand) > 1


def pair_nearest(zp: ZetaPrimeZero, zeros: Sequence[ZetaZero]) -> PairRecord:
    """Pair a zero of zeta' with the nearest critical-line ordinate."""
    g = np.sort(np.array([z.gamma for z in zeros], dtype=float))
    if len(g) == 0:
        raise InsufficientCoverageError("empty zero list")
    gp = zp.gamma_prime
    gamma_c, tie = nearest_ordinate(gp, g)
    delta = abs(gp - gamma_c)
    lo, hi = _coverage(zeros, g)
    # an unlisted zero closer than gamma_c could exist outside the coverage
    if gp - delta < lo or gp + delta > hi:
        raise InsufficientCoverageError(
            f"nearest ordinate {gamma_c} to {gp} not certified by coverage [{lo}, {hi}]")
    a = zp.beta_prime - 0.5
    if a <= DEGENERATE_A:
        return PairRecord(zp.beta_prime, gp, gamma_c, 0.5, delta, 0.0, 0.0, 0.0, tie,
                          degenerate=True)
    ll = loglog(gp)
    thm, gy, fgh, _ = _ratios(delta, a, gp)
    return PairRecord(zp.beta_prime, gp, gamma_c, 0.5, delta, thm, gy, fgh, tie,
                      theorem_range=a <= 1.0 / ll,
                      fgh_range=a <= math.sqrt(ll / math.log(gp)))


def _ratios(delta: float, a: float, gp: float) -> tuple[float, float, float, float]:
    ll = loglog(gp)
    thm = delta / math.sqrt(a / ll)
    gy = delta / math.sqrt(a)
    fgh = delta / (math.sqrt(a) * (ll / math.log(gp)) ** 0.25)
    return thm, gy, fgh, delta * ll


@dataclass(frozen=True)
class Gaps:
    ratio_thm: float
    ratio_gy: float
    ratio_fgh: float
    trivial_ratio: float
    theorem_range: bool


def normalized_gaps(pair: PairRecord) -> Gaps:
    """The gap ``delta`` scaled by each of the competing bounds.

    ``ratio_thm``: by ``sqrt(a/loglog gamma')``; ``ratio_gy``: by ``sqrt(a)``;
    ``ratio_fgh``: by ``sqrt(a) (loglog/log)^(1/4)``; ``trivial_ratio``:
    ``delta * loglog gamma'``.  ``theorem_range`` is false when
    ``a > 1/loglog gamma'``.
    """
    a = pair.a
    if a <= DEGENERATE_A:
        raise ValueError("normalized gaps need a nondegenerate pair")
    thm, gy, fgh, triv = _ratios(pair.delta, a, pair.gamma_prime)
    return Gaps(thm, gy, fgh, triv, a <= 1.0 / loglog(pair.gamma_prime))


def window_zero_count(zp: ZetaPrimeZero, C: float, zeros: Sequence[ZetaZero]) -> int:
    """Ordinates in ``[gamma' - C w, gamma' + C w]`` with ``w = sqrt(a/loglog gamma')``."""
    if not C > 0:
        raise ValueError("C must be positive")
    a = zp.beta_prime - 0.5
    if not a > 0:
        raise ValueError("window needs beta' > 1/2")
    half = C * math.sqrt(a / loglog(zp.gamma_prime))
    g = np.sort(np.array([z.gamma for z in zeros], dtype=float))
    lo, hi = _coverage(zeros, g) if len(g) else (math.inf, -math.inf)
    gp = zp.gamma_prime
    if gp - half < lo or gp + half > hi:
        raise InsufficientCoverageError(f"window [{gp - half}, {gp + half}] exceeds coverage")
    return int(np.count_nonzero((g >= gp - half) & (g <= gp + half)))


# ---------------------------------------------------------------- constants


@dataclass(frozen=True)
class ConstantSolve:
    c0: float
    implied_constant: float
    residual: float
    A: float
    epsilon: float = 0.0


def c0_equation(x: float, A: float = 0.25, epsilon: float = 0.0) -> float:
    """``arctan(1/x) - x - 4 pi A x^2 - epsilon``; decreasing in x."""
    return math.atan(1.0 / x) - x - 4.0 * math.pi * A * x * x - epsilon


def solve_c0(A: float = 0.25, epsilon: float = 0.0) -> ConstantSolve:
    """Largest admissible c: the positive root of :func:`c0_equation`."""
    if not A > 0 or epsilon < 0:
        raise ValueError("need A > 0 and epsilon >= 0")
    # sup over x > 0 of the left side is pi/2, approached as x -> 0
    if epsilon >= math.pi / 2:
        raise NoRootError(f"epsilon {epsilon} >= pi/2 leaves no admissible c")
    f = lambda x: c0_equation(x, A, epsilon)
    lo = 1.0
    while f(lo) <= 0:
        lo *= 0.5
    hi = 2.0
    while f(hi) >= 0:
        hi *= 2.0
    root, _, _ = brent(f, lo, hi, xtol=1e-16)
    return ConstantSolve(root, 1.0 / root, abs(f(root)), A, epsilon)


def is_admissible_c(c: float, A: float = 0.25, epsilon: float = 0.0) -> bool:
    """Whether ``-c + arctan(1/c) >= 4 pi A c^2 + epsilon``."""
    return c > 0 and c0_equation(c, A, epsilon) >= 0


@dataclass(frozen=True)
class ContradictionCheck:
    lhs1: float
    ok1: bool
    lhs2: float
    ok2: bool
    bound1: float
    bound2: float
    ok1_bound: bool
    ok2_bound: bool


def contradiction_check(c: float, a: float, loglog_gamma: float, A: float = 0.25
                        ) -> ContradictionCheck:
    """Evaluate the two inequalities that fix the window parameter ``p = c sqrt(loglog)``.

    ``lhs1 = g(p sqrt(a))`` must reach pi/3 and
    ``lhs2 = (2A/loglog) 2p^2/(1 + a p^2)`` must stay below 1/6.  For
    ``a <= 1/loglog`` these are implied by ``bound1 = arctan(1/c) - c`` and
    ``bound2 = 4 A c^2``.
    """
    if min(c, a, loglog_gamma, A) <= 0:
        raise ValueError("all arguments must be positive")
    p = c * math.sqrt(loglog_gamma)
    lhs1 = window_integral_closed_form(p * math.sqrt(a))
    lhs2 = (2.0 * A / loglog_gamma) * 2.0 * p * p / (1.0 + a * p * p)
    bound1 = math.atan(1.0 / c) - c
    bound2 = 4.0 * A * c * c
    return ContradictionCheck(lhs1, lhs1 >= math.pi / 3, lhs2, lhs2 <= 1.0 / 6.0,
                              bound1, bound2, bound1 >= math.pi / 3, bound2 <= 1.0 / 6.0)
