"""Central finite-difference stencils used as derivative fallbacks.

Fourth-order stencils with steps tuned to balance truncation against
roundoff: eps^(1/5) for first derivatives, eps^(1/6) for second ones,
both scaled by the local coordinate magnitude.
"""

import numpy as np

EPS = float(np.finfo(float).eps)
STEP1 = EPS ** 0.2          # ~7.4e-4, optimal for 4th-order first derivative
STEP2 = EPS ** (1.0 / 6.0)  # ~2.5e-3, optimal for 4th-order second derivative


def _scale(x):
    return max(1.0, abs(x))


def d1(fn, x, step=None):
    """Fourth-order central first derivative of a scalar callable."""
    d = (step if step is not None else STEP1) * _scale(x)
    return (-fn(x + 2 * d) + 8 * fn(x + d) - 8 * fn(x - d) + fn(x - 2 * d)) / (12 * d)


def d2(fn, x, step=None):
    """Fourth-order central second derivative of a scalar callable."""
    d = (step if step is not None else STEP2) * _scale(x)
    return (-fn(x + 2 * d) + 16 * fn(x + d) - 30 * fn(x)
            + 16 * fn(x - d) - fn(x - 2 * d)) / (12 * d * d)


def partial(fn, args, i, step=None):
    """d1 applied to argument i of fn(*args)."""
    args = list(args)

    def slice_fn(v):
        args[i] = v
        return fn(*args)

    return d1(slice_fn, args[i], step=step)


def partial2(fn, args, i, j, step=None):
    """Second partial of fn(*args) w.r.t. arguments i and j."""
    if i == j:
        args = list(args)

        def slice_fn(v):
            args[i] = v
            return fn(*args)

        return d2(slice_fn, args[i], step=step)
    # mixed: outer d1 over argument j of the inner d1 over argument i
    args = list(args)

    def inner(vj):
        a = list(args)
        a[j] = vj
        return partial(fn, a, i, step=step)

    return d1(inner, args[j], step=(step if step is not None else STEP2))
