"""
Root Finding
Vectorized bracketed Newton iteration with bisection fallback
"""

import logging

import numpy as np

from common.errors import NoBracket

logger = logging.getLogger(__name__)

EPS = np.finfo(float).eps


def grow_bracket(func, lo, hi, decreasing=False, factor=2.0, max_steps=200):
    """
    Widen per-element brackets until func changes sign inside each of them

    A bracket whose lower end has the wrong sign is shrunk towards zero by
    `factor`; one whose upper end has the wrong sign is grown by `factor`.
    The opposite end moves to the old endpoint so the bracket stays tight.

    Args:
        func: Callable returning (f, df) for an array of abscissae
        lo: Lower bracket ends (array)
        hi: Upper bracket ends (array)
        decreasing: True if func decreases in x (f(lo) >= 0 >= f(hi) wanted)
        factor: Growth factor per step
        max_steps: Maximum number of widening steps

    Returns:
        (lo, hi) arrays

    Raises:
        NoBracket: if some bracket still has no sign change
    """
    sign = -1.0 if decreasing else 1.0
    lo = np.array(lo, dtype=float)
    hi = np.array(hi, dtype=float)

    for step in range(max_steps):
        f_lo = sign * func(lo)[0]
        f_hi = sign * func(hi)[0]

        low_bad = f_lo > 0
        high_bad = f_hi < 0

        if not (low_bad.any() or high_bad.any()):
            if step:
                logger.debug(f"Bracket grown in {step} steps")
            return lo, hi

        new_lo = np.where(low_bad, lo / factor, lo)
        new_hi = np.where(high_bad, hi * factor, hi)
        new_hi = np.where(low_bad & ~high_bad, lo, new_hi)
        new_lo = np.where(high_bad & ~low_bad, hi, new_lo)
        lo, hi = new_lo, new_hi

    raise NoBracket(f"residual did not change sign after {max_steps} widening steps")


def safeguarded_newton(func, lo, hi, x0=None, rtol=4 * EPS, xtol=0.0, ftol=0.0, max_iter=200):
    """
    Solve func(x) = 0 elementwise inside sign-change brackets

    Newton steps are taken while they stay strictly inside the current
    bracket; otherwise the bracket is bisected. The bracket shrinks with
    every evaluation, so termination only depends on max_iter.

    An element is converged when func is exactly zero, when the last step
    or the bracket width is below rtol * |x|, or when the step is below xtol
    while |f| is below ftol. In the last case the evaluated iterate is
    returned, not the untested Newton update.

    Args:
        func: Callable returning (f, df) arrays for an array of abscissae
        lo: Bracket ends (array)
        hi: Other bracket ends (array)
        x0: Optional starting points (clipped into the bracket)
        rtol: Relative step tolerance
        xtol: Absolute step tolerance (used together with ftol)
        ftol: Residual tolerance paired with xtol
        max_iter: Maximum Newton/bisection iterations

    Returns:
        (x, iterations, converged) where converged is a boolean mask
    """
    lo, hi = (np.array(v, dtype=float) for v in np.broadcast_arrays(lo, hi))
    f_lo = func(lo)[0]
    f_hi = func(hi)[0]

    neg = np.where(f_lo < 0, lo, hi)
    pos = np.where(f_lo < 0, hi, lo)

    if x0 is None:
        x = 0.5 * (lo + hi)
    else:
        x = np.clip(np.broadcast_to(np.asarray(x0, dtype=float), lo.shape),
                    np.minimum(lo, hi), np.maximum(lo, hi))

    x = np.where(f_lo == 0, lo, np.where(f_hi == 0, hi, x))
    done = (f_lo == 0) | (f_hi == 0)

    for iteration in range(1, max_iter + 1):
        f, df = func(x)
        done = done | (f == 0)

        neg = np.where(f < 0, x, neg)
        pos = np.where(f > 0, x, pos)

        with np.errstate(divide='ignore', invalid='ignore', over='ignore'):
            newton = x - f / df

        left = np.minimum(neg, pos)
        right = np.maximum(neg, pos)
        inside = np.isfinite(newton) & (newton > left) & (newton < right)
        x_new = np.where(inside, newton, 0.5 * (neg + pos))

        step = np.abs(x_new - x)
        scale = np.abs(x_new)
        # |f| <= ftol was measured at x, so x is kept
        settled = (step <= xtol) & (np.abs(f) <= ftol)
        converged = (
            (step <= rtol * scale)
            | (right - left <= rtol * scale)
            | settled
        )

        x = np.where(done | settled, x, x_new)
        done = done | converged

        if done.all():
            return x, iteration, done

    logger.debug(f"Newton iteration stopped at max_iter={max_iter} with {int((~done).sum())} open")
    return x, max_iter, done
