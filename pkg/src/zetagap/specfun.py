"""Double-precision evaluation of log Gamma, digamma, zeta, zeta', theta and Z.

Zeta and its derivative use Euler-Maclaurin summation with ``N`` direct
terms and as many Bernoulli corrections as the requested tolerance needs.
Every evaluator has a batched ``*_many`` form working on numpy arrays; the
scalar functions are thin wrappers returning :class:`EvalResult`.

Tolerances are mixed: an evaluation succeeds when
``err_bound <= acc.abs_tol * max(1, |value|)``.  For ``|value| <= 1`` this is
the plain absolute tolerance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

import numpy as np

from .compsum import compensated_sum
from .errors import AccuracyError, PoleError

EPS = np.finfo(float).eps
POLE_GUARD = 1e-12
LOG_2PI = math.log(2 * math.pi)
LOG_PI = math.log(math.pi)


def _bernoulli_numbers(n: int) -> list[Fraction]:
    # Akiyama-Tanigawa, exact; B_1 = +1/2 convention (unused here)
    out = []
    a = [Fraction(0)] * (n + 1)
    for m in range(n + 1):
        a[m] = Fraction(1, m + 1)
        for j in range(m, 0, -1):
            a[j - 1] = j * (a[j - 1] - a[j])
        out.append(a[0])
    return out


_MAX_EM_TERMS = 40
_B = _bernoulli_numbers(2 * _MAX_EM_TERMS + 2)
# B_{2k}/(2k)! for the Euler-Maclaurin tail
_EM_COEF = np.array(
    [float(_B[2 * k] / math.factorial(2 * k)) for k in range(1, _MAX_EM_TERMS + 2)]
)
_STIRLING_K = 12
# B_{2k}/(2k(2k-1)) for log Gamma and B_{2k}/(2k) for digamma
_STIRLING_COEF = np.array(
    [float(_B[2 * k] / (2 * k * (2 * k - 1))) for k in range(1, _STIRLING_K + 2)]
)
_DIGAMMA_COEF = np.array([float(_B[2 * k] / (2 * k)) for k in range(1, _STIRLING_K + 2)])
_STIRLING_MIN_ABS = 12.0


@dataclass(frozen=True)
class ComplexPoint:
    re: float
    im: float

    def __post_init__(self):
        if not (math.isfinite(self.re) and math.isfinite(self.im)):
            raise ValueError(f"non-finite point ({self.re}, {self.im})")

    def __complex__(self) -> complex:
        return complex(self.re, self.im)

    @classmethod
    def of(cls, s: complex) -> "ComplexPoint":
        s = complex(s)
        return cls(s.real, s.imag)


@dataclass(frozen=True)
class EvalResult:
    value: Union[complex, float]
    err_bound: float


@dataclass(frozen=True)
class Accuracy:
    abs_tol: float = 1e-10

    def __post_init__(self):
        if not (1e-14 <= self.abs_tol <= 1e-3):
            raise ValueError(f"abs_tol {self.abs_tol} outside [1e-14, 1e-3]")


DEFAULT_ACCURACY = Accuracy()

PointLike = Union[ComplexPoint, complex, float, int]


def as_complex(s: PointLike) -> complex:
    z = complex(s)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise ValueError(f"non-finite point {z}")
    return z


def _check_tolerance(values, errs, acc: Accuracy, what: str):
    allowed = acc.abs_tol * np.maximum(1.0, np.abs(values))
    bad = errs > allowed
    if np.any(bad):
        i = int(np.argmax(bad))
        raise AccuracyError(
            f"{what}: error bound {errs.flat[i]:.3g} exceeds tolerance "
            f"{allowed.flat[i]:.3g} at index {i}"
        )


# ---------------------------------------------------------------- log Gamma


def _guard_gamma_poles(z: np.ndarray):
    near = (z.real < 0.5) & (np.abs(z - np.round(z.real)) < POLE_GUARD)
    if np.any(near):
        raise PoleError(f"Gamma pole near {z[near][0]}")


def _shift_counts(z: np.ndarray) -> np.ndarray:
    # move right until |z + m| >= 12 and Re(z + m) >= 1/2
    need = np.sqrt(np.maximum(0.0, _STIRLING_MIN_ABS**2 - z.imag**2))
    need = np.maximum(need, 0.5)
    return np.maximum(0, np.ceil(need - z.real)).astype(int)


def log_gamma_many(z) -> tuple[np.ndarray, np.ndarray]:
    """Principal log Gamma on an array; returns ``(values, err_bounds)``.

    The branch is the analytic continuation from the positive real axis,
    with the cut on the negative real axis.
    """
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    _guard_gamma_poles(z)
    m = _shift_counts(z)
    shift_log = np.zeros_like(z)
    shift_mag = np.zeros(z.shape)
    for j in range(int(m.max(initial=0))):
        active = j < m
        lg = np.log(z[active] + j)
        shift_log[active] += lg
        shift_mag[active] += np.abs(lg)
    w = z + m
    logw = np.log(w)
    lead = (w - 0.5) * logw - w
    inv = 1.0 / w
    inv2 = inv * inv
    series = np.zeros_like(w)
    p = inv
    for c in _STIRLING_COEF[:_STIRLING_K]:
        series += c * p
        p = p * inv2
    vals = lead + 0.5 * LOG_2PI + series - shift_log
    # first omitted term, doubled for |arg w| <= pi/2
    trunc = 2.0 * np.abs(_STIRLING_COEF[_STIRLING_K] * p)
    rounding = 4 * EPS * (np.abs(w - 0.5) * np.abs(logw) + np.abs(w) + shift_mag + 1.0)
    return vals, trunc + rounding


def log_gamma(s: PointLike) -> EvalResult:
    vals, errs = log_gamma_many([as_complex(s)])
    return EvalResult(complex(vals[0]), float(errs[0]))


def digamma_many(z) -> tuple[np.ndarray, np.ndarray]:
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    _guard_gamma_poles(z)
    m = _shift_counts(z)
    shift = np.zeros_like(z)
    shift_mag = np.zeros(z.shape)
    for j in range(int(m.max(initial=0))):
        active = j < m
        r = 1.0 / (z[active] + j)
        shift[active] += r
        shift_mag[active] += np.abs(r)
    w = z + m
    inv2 = 1.0 / (w * w)
    series = np.zeros_like(w)
    p = inv2
    for c in _DIGAMMA_COEF[:_STIRLING_K]:
        series += c * p
        p = p * inv2
    logw = np.log(w)
    vals = logw - 0.5 / w - series - shift
    trunc = 2.0 * np.abs(_DIGAMMA_COEF[_STIRLING_K] * p)
    rounding = 4 * EPS * (np.abs(logw) + shift_mag + 1.0)
    return vals, trunc + rounding


def digamma(s: PointLike) -> EvalResult:
    vals, errs = digamma_many([as_complex(s)])
    return EvalResult(complex(vals[0]), float(errs[0]))


# -------------------------------------------------------------------- theta


def theta_many(t) -> tuple[np.ndarray, np.ndarray]:
    t = np.atleast_1d(np.asarray(t, dtype=float))
    at = np.abs(t)
    lg, lg_err = log_gamma_many(0.25 + 0.5j * at)
    half = 0.5 * at * LOG_PI
    vals = np.sign(t) * (lg.imag - half)
    return vals, lg_err + 2 * EPS * half


def riemann_siegel_theta(t: float) -> EvalResult:
    """Riemann-Siegel theta, ``Im log Gamma(1/4 + it/2) - (t/2) log pi``."""
    vals, errs = theta_many([float(t)])
    return EvalResult(float(vals[0]), float(errs[0]))


def theta_prime(t: float) -> float:
    """Analytic derivative ``Re psi(1/4 + it/2)/2 - log(pi)/2``."""
    psi, _ = digamma_many([0.25 + 0.5j * abs(t)])
    return float(0.5 * psi[0].real - 0.5 * LOG_PI)


# ------------------------------------------------------------- zeta, zeta'


EM_FACTOR = 0.5


def em_length(max_abs_t: float) -> int:
    """Number of direct Euler-Maclaurin terms used at height ``max_abs_t``."""
    return max(20, math.ceil(EM_FACTOR * max_abs_t))


def _zeta_em(s: np.ndarray, target: np.ndarray, derivative: bool):
    """Euler-Maclaurin zeta (or zeta') on a batch of points sharing one N."""
    N = em_length(float(np.max(np.abs(s.imag))))
    logN = math.log(N)
    n = np.arange(1, N, dtype=float)
    logn = np.log(n)
    terms = np.exp(-np.multiply.outer(s, logn))
    if derivative:
        terms = -terms * logn
    main = compensated_sum(terms, axis=-1)
    mags = np.abs(terms)
    s1 = mags.sum(axis=-1)
    s2 = np.sqrt((mags * mags).sum(axis=-1))

    Ns = np.exp(-s * logN)
    sm1 = s - 1.0
    if derivative:
        boundary = -N * Ns * (logN / sm1 + 1.0 / (sm1 * sm1)) - 0.5 * logN * Ns
    else:
        boundary = N * Ns / sm1 + 0.5 * Ns
    total = main + boundary

    # T_k = C_k * P_k * N^(-s-2k+1), P_k = s (s+1) ... (s+2k-2)
    P = s.copy()
    dP = np.ones_like(s)
    Npow = Ns / N
    inv_N2 = 1.0 / (N * N)
    done = np.zeros(s.shape, dtype=bool)
    trunc = np.full(s.shape, np.inf)
    for k in range(1, _MAX_EM_TERMS + 2):
        c = _EM_COEF[k - 1]
        if derivative:
            term = c * (dP - P * logN) * Npow
        else:
            term = c * P * Npow
        sig = s.real + 2 * k - 1
        backlund = np.abs(s + 2 * k - 1) / np.where(sig > 0, sig, np.nan)
        # the first omitted term bounds the remainder
        bound = np.abs(term) * np.where(np.isnan(backlund), np.inf, backlund)
        # run to roughly half an ulp of the sum; the extra terms are cheap
        tight = np.maximum(0.5 * EPS * np.abs(total), 1e-3 * EPS * target)
        last = k == _MAX_EM_TERMS + 1
        newly = ~done & ((bound <= tight) | (last & (bound <= 0.01 * target)))
        trunc = np.where(newly, bound, trunc)
        done |= newly
        if done.all() or last:
            break
        total = np.where(done, total, total + term)
        for j in (2 * k - 1, 2 * k):
            dP = dP * (s + j) + P
            P = P * (s + j)
        Npow = Npow * inv_N2
    if not done.all():
        trunc = np.where(done, trunc, bound)
    rounding = EPS * (
        10 * (s1 + np.abs(boundary)) + 2 * np.abs(s) * logN * s2 + 10 * np.abs(total)
    )
    return total, trunc + rounding


def zeta_many(s, acc: Accuracy = DEFAULT_ACCURACY, derivative: bool = False,
              check: bool = True) -> tuple[np.ndarray, np.ndarray]:
    """Batched zeta (``derivative=False``) or zeta' values with error bounds."""
    s = np.atleast_1d(np.asarray(s, dtype=complex))
    if not np.all(np.isfinite(s)):
        raise ValueError("non-finite point in zeta evaluation")
    if np.any(np.abs(s - 1.0) < POLE_GUARD):
        raise PoleError("zeta pole at s = 1")
    if np.any(np.abs(s.imag) > 1e4):
        raise AccuracyError("imaginary part beyond the 1e4 desk-scale contract")
    if not derivative:
        left = s.real < 0
        if left.any():
            vals = np.empty_like(s)
            errs = np.empty(s.shape)
            vals[~left], errs[~left] = zeta_many(s[~left], acc, check=False)
            vals[left], errs[left] = _zeta_reflected(s[left], acc)
            if check:
                _check_tolerance(vals, errs, acc, "zeta")
            return vals, errs
    vals = np.empty_like(s)
    errs = np.empty(s.shape)
    # batches share N, so group by height: a short point must not borrow the
    # tallest point's N, both for cost and because rounding grows with N when
    # Re s < 0
    order = np.argsort(np.abs(s.imag), kind="stable")
    lengths = np.array([em_length(float(x)) for x in np.abs(s.imag)[order]])
    start = 0
    while start < len(order):
        cap = max(1, min(64, 400000 // lengths[start]))
        stop = start + 1
        while stop < len(order) and stop - start < cap and lengths[stop] <= 1.1 * lengths[start] + 2:
            stop += 1
        idx = order[start:stop]
        start = stop
        target = acc.abs_tol * np.ones(len(idx))
        v, e = _zeta_em(s[idx], target, derivative)
        vals[idx] = v
        errs[idx] = e
    if check:
        _check_tolerance(vals, errs, acc, "zeta'" if derivative else "zeta")
    return vals, errs


def _zeta_reflected(s: np.ndarray, acc: Accuracy):
    """``zeta(s) = chi(s) zeta(1 - s)`` for ``Re s < 0``.

    ``chi(s) = 2^s pi^(s-1) sin(pi s/2) Gamma(1-s)``; the sine is split as
    ``exp(|y|) w`` with ``|w| <= 1`` so nothing overflows at large height.
    """
    z1, e1 = zeta_many(1.0 - s, acc, check=False)
    lg, lg_err = log_gamma_many(1.0 - s)
    x = 0.5 * np.pi * s
    ay = np.abs(x.imag)
    w = (np.exp(1j * x - ay) - np.exp(-1j * x - ay)) / 2j
    expo = s * math.log(2.0) + (s - 1.0) * LOG_PI + lg + ay
    chi = w * np.exp(expo)
    vals = chi * z1
    # relative error of exp(expo) is its absolute error in the exponent
    rel = lg_err + 4 * EPS * (np.abs(s) * (1.0 + LOG_PI) + np.abs(lg) + ay + 1.0)
    errs = np.abs(vals) * rel + np.abs(chi) * e1
    return vals, errs


def zeta(s: PointLike, acc: Accuracy = DEFAULT_ACCURACY) -> EvalResult:
    vals, errs = zeta_many([as_complex(s)], acc)
    return EvalResult(complex(vals[0]), float(errs[0]))


def zeta_prime(s: PointLike, acc: Accuracy = DEFAULT_ACCURACY) -> EvalResult:
    """zeta'(s) from the term-wise differentiated Euler-Maclaurin formula."""
    vals, errs = zeta_many([as_complex(s)], acc, derivative=True)
    return EvalResult(complex(vals[0]), float(errs[0]))


# ------------------------------------------------------------------ Hardy Z


def hardy_z_many(t, acc: Accuracy = DEFAULT_ACCURACY) -> tuple[np.ndarray, np.ndarray]:
    t = np.atleast_1d(np.asarray(t, dtype=float))
    if np.any(np.abs(t) > 1e4):
        raise AccuracyError("|t| beyond the 1e4 desk-scale contract")
    th, th_err = theta_many(t)
    zv, z_err = zeta_many(0.5 + 1j * t, acc)
    prod = np.exp(1j * th) * zv
    err = z_err + np.abs(zv) * (th_err + 2 * EPS)
    if np.any(np.abs(prod.imag) > err):
        i = int(np.argmax(np.abs(prod.imag) - err))
        raise AccuracyError(
            f"Z({t[i]}) imaginary residue {abs(prod.imag[i]):.3g} exceeds bound {err[i]:.3g}"
        )
    _check_tolerance(prod.real, err, acc, "hardy_z")
    return prod.real.copy(), err


def hardy_z(t: float, acc: Accuracy = DEFAULT_ACCURACY) -> EvalResult:
    """Hardy's function ``Z(t) = exp(i theta(t)) zeta(1/2 + it)``, real for real t."""
    vals, errs = hardy_z_many([float(t)], acc)
    return EvalResult(float(vals[0]), float(errs[0]))


def hardy_z_residue(t: float, acc: Accuracy = DEFAULT_ACCURACY) -> tuple[float, float]:
    """Imaginary part of ``exp(i theta) zeta(1/2+it)`` and its error bound."""
    th, th_err = theta_many([float(t)])
    zv, z_err = zeta_many([0.5 + 1j * float(t)], acc)
    prod = np.exp(1j * th[0]) * zv[0]
    return float(prod.imag), float(z_err[0] + abs(zv[0]) * (th_err[0] + 2 * EPS))
