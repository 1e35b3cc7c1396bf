"""Certified zero location for zeta on the critical line and for zeta'.

Critical-line zeros come from sign changes of Hardy's Z on a grid, refined
to narrow brackets; each window is certified by comparing the number found
with the N(T) difference.  Zeros of zeta' come from recursive subdivision
of winding-number boxes followed by Newton's method.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Union

import numpy as np

from . import specfun
from .argument import Box
from .counting import n_of_t
from .errors import (CompletenessError, ContourTooCloseError, DivergenceError,
                     MultiplicityUnsupportedError, ZeroDerivativeError)
from .roots import refine_brackets
from .specfun import DEFAULT_ACCURACY, Accuracy, ComplexPoint, PointLike

SEARCH_FLOOR = 14.0
MAX_HEIGHT = 1e4
GRID_STEP = 0.05
REFINE_FACTOR = 4
MAX_RETRIES = 3
BRACKET_WIDTH = 5e-10
WINDOW = 25.0

BOX_SIDE = 0.25
MIN_BOX_SIDE = 1e-4
SIGMA_FLOOR = 0.5 - 1e-6
NEWTON_TOL = 1e-10
FD_STEP = 1e-6
DEDUP_DISTANCE = 1e-8


@dataclass(frozen=True)
class ZetaZero:
    gamma: float
    bracket_width: float
    z_residual: float


@dataclass(frozen=True)
class ZetaPrimeZero:
    beta_prime: float
    gamma_prime: float
    residual: float


@dataclass(frozen=True)
class Rectangle:
    sigma_lo: float
    sigma_hi: float
    t_lo: float
    t_hi: float

    def __post_init__(self):
        if not (self.sigma_lo < self.sigma_hi and self.t_lo < self.t_hi):
            raise ValueError(f"degenerate rectangle {self}")


class CertifiedZeros(list):
    """Sorted critical-line zeros, complete on ``(t_lo, t_hi]``."""

    def __init__(self, zeros, t_lo: float, t_hi: float):
        super().__init__(zeros)
        self.t_lo = t_lo
        self.t_hi = t_hi

    @property
    def gammas(self) -> np.ndarray:
        return np.array([z.gamma for z in self])


# ------------------------------------------------------- critical-line zeros


def _z_many(acc: Accuracy):
    def f(t):
        return specfun.hardy_z_many(t, acc)[0]
    return f


def _grid_zeros(t_lo: float, t_hi: float, step: float, acc: Accuracy) -> list[ZetaZero]:
    n = max(1, math.ceil((t_hi - t_lo) / step))
    t = t_lo + (t_hi - t_lo) * (np.arange(n + 1) / n)
    t[-1] = t_hi
    z = specfun.hardy_z_many(t, acc)[0]
    pos = z >= 0
    i = np.nonzero(pos[1:] != pos[:-1])[0]
    if len(i) == 0:
        return []
    root, lo, hi = refine_brackets(_z_many(acc), t[i], t[i + 1], z[i], z[i + 1], BRACKET_WIDTH)
    resid = np.abs(specfun.hardy_z_many(root, acc)[0])
    out = []
    for g, a, b, r in zip(root, lo, hi, resid):
        # a zero sitting on t_lo belongs to the previous window
        if g > t_lo:
            out.append(ZetaZero(float(g), float(max(b - a, np.spacing(g))), float(r)))
    return out


def _certified_window(t_lo: float, t_hi: float, n_lo: int, n_hi: int, acc: Accuracy,
                      step: float) -> list[ZetaZero]:
    expected = n_hi - n_lo
    found: list[ZetaZero] = []
    for _ in range(MAX_RETRIES + 1):
        found = _grid_zeros(t_lo, t_hi, step, acc)
        if len(found) == expected:
            return found
        step /= REFINE_FACTOR
    raise CompletenessError(
        f"window ({t_lo}, {t_hi}]: located {len(found)} zeros, N(T) difference is {expected}"
    )


def critical_window_edges(t_lo: float, t_hi: float, window: float = WINDOW) -> list[float]:
    """Window boundaries used when scanning ``[t_lo, t_hi]``: multiples of ``window``."""
    edges = [t_lo]
    k = math.floor(t_lo / window) + 1
    while k * window < t_hi:
        edges.append(k * window)
        k += 1
    edges.append(t_hi)
    return edges


def locate_critical_zeros(t_lo: float, t_hi: float, acc: Accuracy = DEFAULT_ACCURACY,
                          step: float = GRID_STEP) -> CertifiedZeros:
    """All zeros ``1/2 + i gamma`` with ``t_lo < gamma <= t_hi``, certified complete."""
    if not (SEARCH_FLOOR <= t_lo < t_hi <= MAX_HEIGHT):
        raise ValueError(f"need {SEARCH_FLOOR} <= t_lo < t_hi <= {MAX_HEIGHT}, got ({t_lo}, {t_hi})")
    edges = critical_window_edges(t_lo, t_hi)
    counts = [n_of_t(T, acc).N for T in edges]
    zeros: list[ZetaZero] = []
    for a, b, na, nb in zip(edges[:-1], edges[1:], counts[:-1], counts[1:]):
        zeros.extend(_certified_window(a, b, na, nb, acc, step))
    return CertifiedZeros(zeros, t_lo, t_hi)


# ------------------------------------------------------------ winding counts


FunctionId = str


def _function(f: Union[FunctionId, Callable], acc: Accuracy) -> Callable[[np.ndarray], np.ndarray]:
    if callable(f):
        return lambda z: np.asarray(f(z), dtype=complex)
    if f == "zeta":
        return lambda z: specfun.zeta_many(z, acc)[0]
    if f == "zeta_prime":
        return lambda z: specfun.zeta_many(z, acc, derivative=True)[0]
    raise ValueError(f"unknown function id {f!r}")


def count_zeros_rectangle(f: Union[FunctionId, Callable], rect: Rectangle,
                          acc: Accuracy = DEFAULT_ACCURACY) -> int:
    """Winding number of ``f`` around the boundary of ``rect``."""
    fm = _function(f, acc)
    box = Box.sample(fm, rect.sigma_lo, rect.sigma_hi, rect.t_lo, rect.t_hi)
    return box.count()


# -------------------------------------------------------------------- Newton


def refine_root_newton(f: Union[FunctionId, Callable], s0: PointLike, tol: float,
                       box: Optional[Rectangle] = None, acc: Accuracy = DEFAULT_ACCURACY,
                       max_iter: int = 50, history: Optional[list] = None) -> ComplexPoint:
    """Newton iteration from ``s0`` until ``|f(s)| <= tol``.

    For ``"zeta"`` the derivative is zeta'; otherwise it is a central
    difference with step ``FD_STEP``.  With ``box`` given, leaving the box
    inflated twofold about its center raises :class:`DivergenceError`.
    """
    if tol < 1e-13:
        raise ValueError("tol must be >= 1e-13")
    fm = _function(f, acc)
    if f == "zeta":
        dfm = _function("zeta_prime", acc)
    else:
        def dfm(z):
            h = FD_STEP
            v = fm(np.concatenate([z + h, z - h]))
            return (v[:len(z)] - v[len(z):]) / (2 * h)

    s = complex(s0)
    for _ in range(max_iter + 1):
        fs = fm(np.array([s]))[0]
        if history is not None:
            history.append(abs(fs))
        if abs(fs) <= tol:
            return ComplexPoint.of(s)
        d = dfm(np.array([s]))[0]
        if abs(d) <= 1e-14 * max(1.0, abs(fs)):
            raise ZeroDerivativeError(f"derivative vanishes numerically at {s}")
        s = s - fs / d
        if box is not None:
            cs = 0.5 * (box.sigma_lo + box.sigma_hi)
            ct = 0.5 * (box.t_lo + box.t_hi)
            if (abs(s.real - cs) > (box.sigma_hi - box.sigma_lo)
                    or abs(s.imag - ct) > (box.t_hi - box.t_lo)):
                raise DivergenceError(f"Newton iterate {s} left the inflated seed box")
    raise DivergenceError(f"no convergence to |f| <= {tol:g} in {max_iter} iterations")


# --------------------------------------------------------------- zeta' zeros


def _box_rect(b: Box) -> Rectangle:
    return Rectangle(b.s0, b.s1, b.t0, b.t1)


def _split_checked(fm, box: Box, count: int):
    # an off-centre cut avoids zeros that sit on the midline
    last: Exception = ContourTooCloseError("no admissible split")
    for fraction in (0.5, 0.45, 0.55, 0.4, 0.6):
        try:
            left, right = box.split(fm, fraction)
            cl, cr = left.count(), right.count()
        except ContourTooCloseError as exc:
            last = exc
            continue
        if cl + cr != count:
            raise CompletenessError(f"child counts {cl}+{cr} != parent count {count}")
        return (left, cl), (right, cr)
    raise last


def _search_box(fm, box: Box, count: int, acc: Accuracy, tol: float) -> list[complex]:
    if count == 0:
        return []
    side = max(box.width, box.height)
    if count == 1 and side <= BOX_SIDE:
        try:
            root = complex(refine_root_newton("zeta_prime", box.center, tol,
                                              box=_box_rect(box), acc=acc))
            if box.contains(root, slack=1e-9):
                return [root]
        except (DivergenceError, ZeroDerivativeError):
            pass
    if side <= MIN_BOX_SIDE:
        if count > 1:
            raise MultiplicityUnsupportedError(
                f"{count} zeros of zeta' in a box of side {side:g} at {box.center}")
        raise CompletenessError(f"Newton failed to converge in the minimal box at {box.center}")
    (left, cl), (right, cr) = _split_checked(fm, box, count)
    return _search_box(fm, left, cl, acc, tol) + _search_box(fm, right, cr, acc, tol)


def _dedup(roots: list[complex], residuals: list[float]) -> list[tuple[complex, float]]:
    kept: list[tuple[complex, float]] = []
    for r, res in sorted(zip(roots, residuals), key=lambda p: (p[0].imag, p[0].real)):
        if kept and abs(kept[-1][0] - r) < DEDUP_DISTANCE:
            if res < kept[-1][1]:
                kept[-1] = (r, res)
            continue
        kept.append((r, res))
    return kept


def locate_zeta_prime_zeros(t_lo: float, t_hi: float, sigma_max: float = 4.0,
                            acc: Accuracy = DEFAULT_ACCURACY,
                            tol: float = NEWTON_TOL) -> list[ZetaPrimeZero]:
    """All zeros of zeta' in ``[1/2 - 1e-6, sigma_max] x [t_lo, t_hi]``, sorted by ordinate."""
    if not (SEARCH_FLOOR <= t_lo < t_hi <= MAX_HEIGHT):
        raise ValueError(f"need {SEARCH_FLOOR} <= t_lo < t_hi <= {MAX_HEIGHT}, got ({t_lo}, {t_hi})")
    if not (2 <= sigma_max <= 6):
        raise ValueError("sigma_max must lie in [2, 6]")
    fm = _function("zeta_prime", acc)
    box = Box.sample(fm, SIGMA_FLOOR, sigma_max, t_lo, t_hi)
    count = box.count()
    roots = _search_box(fm, box, count, acc, tol)
    residuals = list(np.abs(fm(np.array(roots, dtype=complex)))) if roots else []
    kept = _dedup(roots, residuals)
    if len(kept) < count:
        raise CompletenessError(f"recovered {len(kept)} zeros of zeta' but the winding count is {count}")
    return [ZetaPrimeZero(r.real, r.imag, float(res)) for r, res in kept]
