"""Continuous argument tracking along straight edges.

An :class:`Edge` holds samples of ``f`` along a segment, refined until
consecutive samples differ in phase by less than ``MAX_DPHASE`` and in
modulus by less than a factor ``MAX_DMOD``.  Rectangles are four edges, so
splitting a rectangle only samples the new cut; the pieces of the old
edges are reused as they are.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import ContourTooCloseError, NonConvergentContourError

MAX_DPHASE = math.pi / 4
MAX_DMOD = math.log(4.0)
MIN_SEGMENT = 1e-7
INITIAL_STEP = 0.1

FMany = Callable[[np.ndarray], np.ndarray]


@dataclass
class Edge:
    """Samples ``z[0] = start, ..., z[-1] = end`` and ``f(z)``."""

    z: np.ndarray
    f: np.ndarray

    @property
    def phase_change(self) -> float:
        return float(np.sum(np.angle(self.f[1:] / self.f[:-1])))

    @property
    def min_modulus(self) -> float:
        return float(np.min(np.abs(self.f)))

    def reversed(self) -> "Edge":
        return Edge(self.z[::-1].copy(), self.f[::-1].copy())


def _bad_segments(z: np.ndarray, f: np.ndarray) -> np.ndarray:
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = f[1:] / f[:-1]
        bad = (np.abs(np.angle(ratio)) > MAX_DPHASE) | (np.abs(np.log(np.abs(ratio))) > MAX_DMOD)
    return bad | ~np.isfinite(ratio)


def refine(f_many: FMany, edge: Edge) -> Edge:
    """Insert midpoints until every segment passes the smoothness test."""
    z, f = edge.z, edge.f
    while True:
        bad = _bad_segments(z, f)
        if not bad.any():
            return Edge(z, f)
        i = np.nonzero(bad)[0]
        if np.min(np.abs(z[i + 1] - z[i])) < MIN_SEGMENT:
            k = i[np.argmin(np.abs(z[i + 1] - z[i]))]
            raise ContourTooCloseError(f"zero of f within {MIN_SEGMENT:g} of the contour near {z[k]}")
        mid = z[i] + 0.5 * (z[i + 1] - z[i])
        fm = f_many(mid)
        z = np.insert(z, i + 1, mid)
        f = np.insert(f, i + 1, fm)


def sample_edge(f_many: FMany, a: complex, b: complex, step: float = INITIAL_STEP) -> Edge:
    n = max(2, math.ceil(abs(b - a) / step))
    z = a + (b - a) * (np.arange(n + 1) / n)
    z[-1] = b
    return refine(f_many, Edge(z, f_many(z)))


def split_edge(f_many: FMany, edge: Edge, w: complex) -> tuple[Edge, Edge]:
    """Cut ``edge`` at the point ``w`` lying on it; both halves contain ``w``."""
    a, b = edge.z[0], edge.z[-1]
    u = ((edge.z - a) / (b - a)).real
    uw = ((w - a) / (b - a)).real
    k = int(np.searchsorted(u, uw))
    if k < len(u) and u[k] == uw:
        fw = edge.f[k]
        left = Edge(edge.z[:k + 1].copy(), edge.f[:k + 1].copy())
        right = Edge(edge.z[k:].copy(), edge.f[k:].copy())
    else:
        fw = f_many(np.array([w]))[0]
        left = Edge(np.append(edge.z[:k], w), np.append(edge.f[:k], fw))
        right = Edge(np.insert(edge.z[k:], 0, w), np.insert(edge.f[k:], 0, fw))
    return refine(f_many, left), refine(f_many, right)


@dataclass
class Box:
    """Rectangle ``[s0, s1] x [t0, t1]`` with its four sampled edges.

    ``bottom``/``top`` run in increasing sigma, ``left``/``right`` in
    increasing t; the winding number reads them counter-clockwise.
    """

    s0: float
    s1: float
    t0: float
    t1: float
    bottom: Edge
    right: Edge
    top: Edge
    left: Edge

    @classmethod
    def sample(cls, f_many: FMany, s0, s1, t0, t1, step: float = INITIAL_STEP) -> "Box":
        c00, c10 = complex(s0, t0), complex(s1, t0)
        c01, c11 = complex(s0, t1), complex(s1, t1)
        return cls(s0, s1, t0, t1,
                   sample_edge(f_many, c00, c10, step), sample_edge(f_many, c10, c11, step),
                   sample_edge(f_many, c01, c11, step), sample_edge(f_many, c00, c01, step))

    @property
    def width(self) -> float:
        return self.s1 - self.s0

    @property
    def height(self) -> float:
        return self.t1 - self.t0

    @property
    def center(self) -> complex:
        return complex(0.5 * (self.s0 + self.s1), 0.5 * (self.t0 + self.t1))

    def winding(self) -> float:
        total = (self.bottom.phase_change + self.right.phase_change
                 - self.top.phase_change - self.left.phase_change)
        return total / (2 * math.pi)

    def count(self, min_distance: float = 1e-6) -> int:
        self.check_clearance(min_distance)
        w = self.winding()
        n = round(w)
        if abs(w - n) > 0.01 / (2 * math.pi):
            raise NonConvergentContourError(f"winding {w} is not near an integer")
        return int(n)

    def check_clearance(self, min_distance: float):
        # distance to the nearest zero from |f| / |f'| at the smallest sample
        for e in (self.bottom, self.right, self.top, self.left):
            k = int(np.argmin(np.abs(e.f)))
            j = k + 1 if k + 1 < len(e.z) else k - 1
            slope = abs(e.f[j] - e.f[k]) / abs(e.z[j] - e.z[k])
            if slope > 0 and abs(e.f[k]) / slope < min_distance:
                raise ContourTooCloseError(f"zero within {min_distance:g} of contour near {e.z[k]}")

    def contains(self, z: complex, slack: float = 0.0) -> bool:
        return (self.s0 - slack <= z.real <= self.s1 + slack
                and self.t0 - slack <= z.imag <= self.t1 + slack)

    def split(self, f_many: FMany, fraction: float = 0.5) -> tuple["Box", "Box"]:
        """Halve the longer side at ``fraction`` of its length."""
        if self.width >= self.height:
            sm = self.s0 + fraction * self.width
            b0, b1 = split_edge(f_many, self.bottom, complex(sm, self.t0))
            p0, p1 = split_edge(f_many, self.top, complex(sm, self.t1))
            cut = sample_edge(f_many, complex(sm, self.t0), complex(sm, self.t1))
            return (Box(self.s0, sm, self.t0, self.t1, b0, cut, p0, self.left),
                    Box(sm, self.s1, self.t0, self.t1, b1, self.right, p1, cut))
        tm = self.t0 + fraction * self.height
        l0, l1 = split_edge(f_many, self.left, complex(self.s0, tm))
        r0, r1 = split_edge(f_many, self.right, complex(self.s1, tm))
        cut = sample_edge(f_many, complex(self.s0, tm), complex(self.s1, tm))
        return (Box(self.s0, self.s1, self.t0, tm, self.bottom, r0, cut, l0),
                Box(self.s0, self.s1, tm, self.t1, cut, r1, self.top, l1))
