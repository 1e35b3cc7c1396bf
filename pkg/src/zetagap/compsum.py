"""Compensated summation built on the TwoSum error-free transformation.

The main sums of the zeta evaluators run in double precision; summing them
pairwise with exact TwoSum error capture pushes the summation error down to
roughly the accuracy of the individual terms.
"""

import numpy as np


def two_sum(a, b):
    """Return ``(s, e)`` with ``s = fl(a + b)`` and ``a + b = s + e`` exactly."""
    s = a + b
    bp = s - a
    e = (a - (s - bp)) + (b - bp)
    return s, e


def compensated_sum(x, axis=-1):
    """Sum ``x`` along ``axis`` using a pairwise TwoSum cascade.

    Works for real and complex arrays (complex parts are transformed
    independently, which is exact because TwoSum is componentwise).
    """
    x = np.moveaxis(np.asarray(x), axis, -1)
    if x.shape[-1] == 0:
        return np.zeros(x.shape[:-1], dtype=x.dtype)
    err = np.zeros(x.shape[:-1], dtype=x.dtype)
    while x.shape[-1] > 1:
        if x.shape[-1] % 2:
            pad = np.zeros(x.shape[:-1] + (1,), dtype=x.dtype)
            x = np.concatenate([x, pad], axis=-1)
        s, e = two_sum(x[..., 0::2], x[..., 1::2])
        # error terms are O(eps) of the partials; plain pairwise sum suffices
        err = err + e.sum(axis=-1)
        x = s
    return x[..., 0] + err
