import numpy as np


class ShrinkParams:
    """
    Parameters of the p-shrinkage map.

    ``beta`` is the inverse threshold: for ``p == 1`` the map is the soft
    threshold at ``1 / beta``.  The solver passes ``beta = lambda2 / mu``.
    """

    def __init__(self, p, beta):
        if not 0.0 < p <= 1.0:
            raise ValueError(f"p must lie in (0, 1], got {p}")
        if not beta > 0:
            raise ValueError(f"beta must be positive, got {beta}")
        self.p = float(p)
        self.beta = float(beta)

    def __repr__(self):
        return "<ShrinkParams p=%g beta=%g>" % (self.p, self.beta)


def soft_threshold(xi, threshold):
    xi = np.asarray(xi, dtype=np.float64)
    return np.sign(xi) * np.maximum(np.abs(xi) - threshold, 0.0)


def shrink_p(xi, prm):
    """
    ``max(|xi| - beta**(p - 2) * |xi|**(p - 1), 0) * sign(xi)``, with 0 at
    ``xi == 0``.
    """
    xi = np.asarray(xi, dtype=np.float64)
    if prm.p == 1.0:
        return soft_threshold(xi, 1.0 / prm.beta)
    magnitude = np.abs(xi)
    nonzero = magnitude > 0.0
    threshold = np.zeros_like(magnitude)
    threshold[nonzero] = prm.beta ** (prm.p - 2.0) * magnitude[nonzero] ** (prm.p - 1.0)
    return np.where(nonzero, np.sign(xi) * np.maximum(magnitude - threshold, 0.0), 0.0)


def shrink_p_max_slope(p):
    """
    Supremum of the derivative of ``shrink_p`` on its support.

    The derivative is ``1 + (1 - p) * (beta * |xi|) ** (p - 2)``; it peaks at
    the threshold ``|xi| = 1 / beta`` with value ``2 - p`` whatever ``beta``.
    """
    if not 0.0 < p <= 1.0:
        raise ValueError(f"p must lie in (0, 1], got {p}")
    return 2.0 - p


def project_box(f, lower=0.0, upper=1.0):
    """Projection onto ``[lower, upper]``, elementwise."""
    return np.clip(np.asarray(f, dtype=np.float64), lower, upper)
