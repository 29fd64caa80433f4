"""
Overlapping group sparsity functional and its proximal map.

A group is the ``K x K`` window of a field anchored at pixel ``(i, j)``,
spanning offsets ``-K_l .. K_r`` in both directions with periodic indexing.
The functional sums the Euclidean norms of all groups, so every pixel takes
part in ``K * K`` of them.

The proximal map is computed by majorization-minimization: each step solves
the diagonal system ``(I + gamma * D^2(V)) V_next = v0`` where ``D^2`` holds,
for every pixel, the sum of inverse norms of the groups it belongs to.
"""

import logging

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from django_ogs_deblur.imaging import as_image
from django_ogs_deblur.shrinkage import soft_threshold

logger = logging.getLogger(__name__)


class GroupConfig:
    def __init__(self, K=3, eps_group=1e-10):
        K = int(K)
        if K < 1:
            raise ValueError(f"group size must be at least 1, got {K}")
        if not eps_group > 0:
            raise ValueError(f"eps_group must be positive, got {eps_group}")
        self.K = K
        self.eps_group = float(eps_group)

    @property
    def K_l(self):
        return (self.K - 1) // 2

    @property
    def K_r(self):
        return self.K // 2

    def __repr__(self):
        return "<GroupConfig K=%d eps_group=%g>" % (self.K, self.eps_group)


class MMConfig:
    def __init__(self, gamma_prox=1.0, tol=1e-3, max_iter=5):
        if not gamma_prox > 0:
            raise ValueError(f"gamma_prox must be positive, got {gamma_prox}")
        if not tol > 0:
            raise ValueError(f"tol must be positive, got {tol}")
        max_iter = int(max_iter)
        if max_iter < 1:
            raise ValueError(f"max_iter must be at least 1, got {max_iter}")
        self.gamma_prox = float(gamma_prox)
        self.tol = float(tol)
        self.max_iter = max_iter

    def with_gamma(self, gamma_prox):
        return MMConfig(gamma_prox=gamma_prox, tol=self.tol, max_iter=self.max_iter)

    def __repr__(self):
        return "<MMConfig gamma_prox=%g tol=%g max_iter=%d>" % (
            self.gamma_prox,
            self.tol,
            self.max_iter,
        )


def _window_sum(x, before, after):
    """
    Periodic box sum: ``out[i, j] = sum(x[i + a, j + b])`` for ``a, b`` in
    ``-before .. after``.
    """
    padded = np.pad(x, ((before, after), (before, after)), mode="wrap")
    size = before + after + 1
    return sliding_window_view(padded, (size, size)).sum(axis=(-2, -1))


def group_energy(v, cfg):
    """Squared norm of the group anchored at every pixel."""
    return _window_sum(np.square(v), cfg.K_l, cfg.K_r)


def ogs_value(v, cfg, smoothed=False):
    """
    Sum of group norms of ``v``.

    With ``smoothed=True`` each norm is replaced by ``sqrt(eps_group + |g|^2)``,
    the functional the majorizer decreases.
    """
    energy = group_energy(as_image(v, "v"), cfg)
    if smoothed:
        energy = energy + cfg.eps_group
    return float(np.sqrt(energy).sum())


def mm_weights(v, cfg):
    """
    Diagonal of ``D^2(v)``: for every pixel, the sum over the groups that
    contain it of ``(eps_group + |g|^2) ** -0.5``.
    """
    inverse_norm = 1.0 / np.sqrt(cfg.eps_group + group_energy(v, cfg))
    # a pixel belongs to the groups anchored at (i - a, j - b), a, b in -K_l..K_r
    return _window_sum(inverse_norm, cfg.K_r, cfg.K_l)


def mm_objective(v, v0, gamma_prox, cfg):
    """``0.5 * |v - v0|^2 + gamma_prox * phi_eps(v)``."""
    return 0.5 * float(np.sum((v - v0) ** 2)) + gamma_prox * ogs_value(
        v, cfg, smoothed=True
    )


def ogs_prox(v0, mm, cfg, history=None):
    """
    Proximal map of ``mm.gamma_prox * phi`` at ``v0``.

    Iterates ``V = v0 / (1 + gamma_prox * mm_weights(V))`` from ``V = v0``
    until the relative change drops to ``mm.tol`` or ``mm.max_iter`` steps
    were taken.  Single-pixel groups (``K == 1``) make the functional the
    plain L1 norm, whose proximal map is the soft threshold; that case is
    returned in closed form.

    When ``history`` is a list, the smoothed objective of every iterate,
    starting with ``v0``, is appended to it.
    """
    v0 = as_image(v0, "v0")
    if cfg.K == 1:
        out = soft_threshold(v0, mm.gamma_prox)
        if history is not None:
            history.append(mm_objective(v0, v0, mm.gamma_prox, cfg))
            history.append(mm_objective(out, v0, mm.gamma_prox, cfg))
        return out

    v = v0
    if history is not None:
        history.append(mm_objective(v, v0, mm.gamma_prox, cfg))
    for k in range(1, mm.max_iter + 1):
        v_next = v0 / (1.0 + mm.gamma_prox * mm_weights(v, cfg))
        if history is not None:
            history.append(mm_objective(v_next, v0, mm.gamma_prox, cfg))
        norm = np.linalg.norm(v)
        change = np.linalg.norm(v_next - v)
        v = v_next
        if norm == 0.0 or change <= mm.tol * norm:
            break
    logger.debug("ogs_prox stopped after %d MM steps", k)
    return v
