"""Bracketing root finders for real functions.

``brent`` is the classic Brent-Dekker zero finder on a single bracket.
``refine_brackets`` drives many brackets at once with an Illinois
(modified regula falsi) update plus a bisection guard, which lets the
caller evaluate the function on a whole batch per iteration.
"""

from __future__ import annotations

import math
from typing import Callable

import numpy as np

from .errors import NoRootError

EPS = np.finfo(float).eps


def brent(f: Callable[[float], float], a: float, b: float, xtol: float = 1e-14,
          max_iter: int = 200) -> tuple[float, float, float]:
    """Find a sign change of ``f`` in ``[a, b]``.

    Returns ``(root, lo, hi)`` where ``[lo, hi]`` still brackets the sign
    change and ``hi - lo <= 4 eps |root| + xtol``.
    """
    fa, fb = f(a), f(b)
    if fa == 0.0:
        return a, a, a
    if fb == 0.0:
        return b, b, b
    if (fa > 0) == (fb > 0):
        raise NoRootError(f"no sign change on [{a}, {b}]")
    c, fc = a, fa
    d = e = b - a
    for _ in range(max_iter):
        if (fb > 0) == (fc > 0):
            c, fc = a, fa
            d = e = b - a
        if abs(fc) < abs(fb):
            a, b, c = b, c, b
            fa, fb, fc = fb, fc, fb
        tol1 = 2.0 * EPS * abs(b) + 0.5 * xtol
        m = 0.5 * (c - b)
        if fb == 0.0:
            return b, b, b
        if abs(m) <= tol1:
            return b, min(b, c), max(b, c)
        if abs(e) >= tol1 and abs(fa) > abs(fb):
            s = fb / fa
            if a == c:
                p = 2.0 * m * s
                q = 1.0 - s
            else:
                q, r = fa / fc, fb / fc
                p = s * (2.0 * m * q * (q - r) - (b - a) * (r - 1.0))
                q = (q - 1.0) * (r - 1.0) * (s - 1.0)
            if p > 0:
                q = -q
            else:
                p = -p
            if 2.0 * p < min(3.0 * m * q - abs(tol1 * q), abs(e * q)):
                e, d = d, p / q
            else:
                d = e = m
        else:
            d = e = m
        a, fa = b, fb
        b += d if abs(d) > tol1 else math.copysign(tol1, m)
        fb = f(b)
    raise NoRootError("Brent iteration limit reached")


def refine_brackets(f_many: Callable[[np.ndarray], np.ndarray], lo, hi, flo, fhi,
                    width: float, max_iter: int = 200):
    """Shrink many sign-change brackets to ``hi - lo <= width``.

    ``f_many`` maps an array of abscissae to function values. Returns
    ``(root, lo, hi)`` arrays; ``root`` is the endpoint with smaller ``|f|``.
    """
    a = np.array(lo, dtype=float)
    b = np.array(hi, dtype=float)
    fa = np.array(flo, dtype=float)
    fb = np.array(fhi, dtype=float)
    if np.any((fa > 0) == (fb > 0)):
        raise NoRootError("refine_brackets needs a sign change in every bracket")
    ga = fa.copy()  # Illinois weight of the retained endpoint
    exact = np.zeros(a.shape, dtype=bool)
    prev_width = np.abs(b - a)
    for it in range(max_iter):
        active = ~exact & (np.abs(b - a) > width)
        if not active.any():
            break
        idx = np.nonzero(active)[0]
        ai, bi, gai, fbi = a[idx], b[idx], ga[idx], fb[idx]
        with np.errstate(divide="ignore", invalid="ignore"):
            c = bi - fbi * (bi - ai) / (fbi - gai)
        bad = ~np.isfinite(c) | ((c - ai) * (c - bi) >= 0)
        if it % 3 == 2:
            # bisect when the width has not halved over the last three steps
            w = np.abs(bi - ai)
            bad |= w > 0.5 * prev_width[idx]
            prev_width[idx] = w
        c = np.where(bad, 0.5 * (ai + bi), c)
        fc = np.asarray(f_many(c), dtype=float)
        hit = fc == 0.0
        flip = (fc > 0) != (fbi > 0)
        a[idx] = np.where(hit | flip, np.where(hit, c, bi), ai)
        fa[idx] = np.where(hit, 0.0, np.where(flip, fbi, fa[idx]))
        ga[idx] = np.where(hit, 0.0, np.where(flip, fbi, np.where(bad, gai, 0.5 * gai)))
        b[idx] = c
        fb[idx] = fc
        exact[idx] |= hit
    else:
        raise NoRootError("bracket refinement iteration limit reached")
    root = np.where(np.abs(fa) < np.abs(fb), a, b)
    return root, np.minimum(a, b), np.maximum(a, b)
