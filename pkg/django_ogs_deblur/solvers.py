"""
OGS-TV regularized deblurring with an Lp quasinorm fidelity term.

The model ``min_F mu * |H * F - G|_p^p + phi(K_h * F) + phi(K_v * F)`` with
``F`` constrained to ``[0, 1]`` is split as

    Z1 = K_h * F,  Z2 = K_v * F,  W = H * F - G,  T = F

and solved by ADMM.  Every outer iteration runs, in order:

1. ``Z_i = prox_{phi / lambda1}(K_i * F + V_i / lambda1)`` (``ogs_prox``)
2. ``W = shrink_p(H * F - G + V3 / lambda2, beta = lambda2 / mu)``
3. ``T = P_[0,1](F + V4 / lambda3)``
4. the exact ``F`` minimizer, solved in the Fourier domain (``update_F``)
5. multiplier steps ``V_i -= step_i * (constraint residual)`` with
   ``step_i = gamma * lambda`` (``SolverConfig.dual_steps``; the W step is
   further divided by ``2 - p``)

The accelerated variant keeps extrapolated ("shadow") copies of the split
variables and multipliers.  Subproblems consume the shadow multipliers; after
each iteration a combined primal-dual residual decides, per constraint,
between a Nesterov extrapolation and a restart.  The plain variant is the
same iteration with the shadows pinned to the current values.
"""

import logging
import math
import time

import numpy as np

from django_ogs_deblur import signals
from django_ogs_deblur.imaging import (
    as_image,
    horizontal_difference,
    ifft2,
    otf_from_psf,
    vertical_difference,
)
from django_ogs_deblur.metrics import psnr
from django_ogs_deblur.regularizers import GroupConfig, MMConfig, ogs_prox
from django_ogs_deblur.shrinkage import (
    ShrinkParams,
    project_box,
    shrink_p,
    shrink_p_max_slope,
)

logger = logging.getLogger(__name__)

# (noise level, mu, p) for the blur + salt-and-pepper experiments
DEFAULT_PARAMS_TABLE = (
    (0.3, 90.0, 0.5),
    (0.4, 80.0, 0.6),
    (0.5, 80.0, 0.6),
    (0.6, 70.0, 0.6),
)

# constraint groups, in the order of the multipliers V1..V4
GROUPS = ("Z1", "Z2", "W", "T")


class SolverError(RuntimeError):
    """An iterate became non-finite."""


class SolverConfig:
    def __init__(
        self,
        p=0.6,
        mu=80.0,
        lambda1=1.0,
        lambda2=500.0,
        lambda3=1.0,
        gamma=1.618,
        eta=0.999,
        group=None,
        mm=None,
        tol=1e-5,
        max_iter=500,
        accelerate=False,
    ):
        if not 0.0 < p <= 1.0:
            raise ValueError(f"p must lie in (0, 1], got {p}")
        for name, value in (
            ("mu", mu),
            ("lambda1", lambda1),
            ("lambda2", lambda2),
            ("lambda3", lambda3),
            ("tol", tol),
        ):
            if not value > 0:
                raise ValueError(f"{name} must be positive, got {value}")
        if not 0.0 < gamma < 2.0:
            raise ValueError(f"gamma must lie in (0, 2), got {gamma}")
        # eta == 0 restarts on every iteration, which reproduces plain ADMM
        if not 0.0 <= eta < 1.0:
            raise ValueError(f"eta must lie in [0, 1), got {eta}")
        max_iter = int(max_iter)
        if max_iter < 1:
            raise ValueError(f"max_iter must be at least 1, got {max_iter}")
        self.p = float(p)
        self.mu = float(mu)
        self.lambda1 = float(lambda1)
        self.lambda2 = float(lambda2)
        self.lambda3 = float(lambda3)
        self.gamma = float(gamma)
        self.eta = float(eta)
        self.group = group if group is not None else GroupConfig()
        self.mm = mm if mm is not None else MMConfig()
        self.tol = float(tol)
        self.max_iter = max_iter
        self.accelerate = bool(accelerate)

    @classmethod
    def from_settings(cls, **overrides):
        """
        Build a config from ``OGS_DEBLUR`` settings; keyword arguments win.

        ``K`` may be passed as an override for the group size.
        """
        from django_ogs_deblur.settings import deblur_settings

        K = overrides.pop("K", None)
        if K is None:
            K = deblur_settings.GROUP_SIZE
        kwargs = {
            "lambda1": deblur_settings.LAMBDA1,
            "lambda2": deblur_settings.LAMBDA2,
            "lambda3": deblur_settings.LAMBDA3,
            "gamma": deblur_settings.GAMMA,
            "eta": deblur_settings.ETA,
            "tol": deblur_settings.TOL,
            "max_iter": deblur_settings.MAX_ITER,
            "group": GroupConfig(K=K, eps_group=deblur_settings.EPS_GROUP),
            "mm": MMConfig(
                tol=deblur_settings.MM_TOL, max_iter=deblur_settings.MM_MAX_ITER
            ),
        }
        kwargs.update({key: value for key, value in overrides.items() if value is not None})
        return cls(**kwargs)

    @classmethod
    def ogs_l1(cls, **kwargs):
        """OGS-TV with an L1 fidelity term."""
        kwargs["p"] = 1.0
        return cls(**kwargs)

    @classmethod
    def atv_l1(cls, **kwargs):
        """Anisotropic TV with an L1 fidelity term: single-pixel groups, p = 1."""
        kwargs["p"] = 1.0
        group = kwargs.pop("group", None)
        eps_group = group.eps_group if group is not None else 1e-10
        kwargs["group"] = GroupConfig(K=1, eps_group=eps_group)
        return cls(**kwargs)

    def copy(self, **changes):
        values = dict(vars(self))
        values.update(changes)
        return SolverConfig(**values)

    @property
    def method(self):
        return "fast-admm" if self.accelerate else "admm"

    @property
    def dual_steps(self):
        """
        Multiplier step lengths for ``Z1, Z2, W, T``.

        The fidelity step is ``gamma * lambda2 / (2 - p)``: ``shrink_p`` has
        slopes up to ``2 - p``, and the W multiplier update stays stable only
        while step times slope (in units of ``lambda2``) is below 2.  For
        ``p == 1`` this is the plain ``gamma * lambda2``.
        """
        return (
            self.gamma * self.lambda1,
            self.gamma * self.lambda1,
            self.gamma * self.lambda2 / shrink_p_max_slope(self.p),
            self.gamma * self.lambda3,
        )

    def __repr__(self):
        return "<SolverConfig %s p=%g mu=%g K=%d>" % (
            self.method,
            self.p,
            self.mu,
            self.group.K,
        )


class SolverState:
    """
    Full iterate set of one solve.

    ``Z``, ``V`` are lists indexed by constraint group (``Z[0]`` is Z1,
    ``Z[1]`` is Z2, ``Z[2]`` is W, ``Z[3]`` is T) so that the restart logic
    can treat the four constraints uniformly; ``Z_tilde`` and ``V_tilde`` are
    the shadow copies.
    """

    def __init__(self, G, H, cfg):
        G = as_image(G, "G")
        rows, cols = G.shape
        self.G = G
        self.G_hat = np.fft.fft2(G)
        self.otf_h = otf_from_psf(H, rows, cols)
        self.otf_d = (
            otf_from_psf(horizontal_difference(), rows, cols),
            otf_from_psf(vertical_difference(), rows, cols),
        )
        self.lhs = precompute_lhs(H, G.shape, cfg)

        self.F = G.copy()
        self.Z = [G.copy(), G.copy(), np.zeros_like(G), G.copy()]
        self.V = [np.zeros_like(G) for _ in GROUPS]
        self.Z_tilde = list(self.Z)
        self.V_tilde = list(self.V)
        self.alpha = [1.0] * len(GROUPS)
        self.d = [math.inf] * len(GROUPS)
        self.k = 0

    @property
    def shape(self):
        return self.G.shape

    @property
    def Z1(self):
        return self.Z[0]

    @property
    def Z2(self):
        return self.Z[1]

    @property
    def W(self):
        return self.Z[2]

    @property
    def T(self):
        return self.Z[3]


class SolveReport:
    def __init__(self, method):
        self.method = method
        self.iterations = 0
        self.re_history = []
        self.psnr_history = []
        self.converged = False
        self.restarts = 0
        self.wall_time = 0.0

    def __repr__(self):
        return "<SolveReport %s iterations=%d converged=%s>" % (
            self.method,
            self.iterations,
            self.converged,
        )


def precompute_lhs(H, dims, cfg):
    """``lambda1 * sum |F(K_i)|^2 + lambda2 * |F(H)|^2 + lambda3``, real valued."""
    rows, cols = dims
    lhs = np.full((rows, cols), cfg.lambda3, dtype=np.float64)
    for k in (horizontal_difference(), vertical_difference()):
        lhs += cfg.lambda1 * np.abs(otf_from_psf(k, rows, cols)) ** 2
    lhs += cfg.lambda2 * np.abs(otf_from_psf(H, rows, cols)) ** 2
    return lhs


def _apply(otf, spectrum):
    return ifft2(otf * spectrum)


def update_F(state, cfg, G):
    """
    Exact minimizer of the quadratic F-subproblem under periodic boundary.

    Consumes ``state.Z`` and the shadow multipliers ``state.V_tilde`` (equal
    to ``state.V`` for plain ADMM).
    """
    V = state.V_tilde
    G_hat = state.G_hat if G is state.G else np.fft.fft2(G)
    rhs = np.zeros(state.shape, dtype=np.complex128)
    for i, otf in enumerate(state.otf_d):
        rhs += (
            cfg.lambda1
            * np.conj(otf)
            * np.fft.fft2(state.Z[i] - V[i] / cfg.lambda1)
        )
    rhs += (
        cfg.lambda2
        * np.conj(state.otf_h)
        * (G_hat + np.fft.fft2(state.Z[2] - V[2] / cfg.lambda2))
    )
    rhs += cfg.lambda3 * np.fft.fft2(state.Z[3] - V[3] / cfg.lambda3)
    F = ifft2(rhs / state.lhs)
    if not np.isfinite(F).all():
        raise SolverError(f"non-finite values in the F subproblem at iteration {state.k + 1}")
    return F


def constraint_residuals(state, G=None):
    """RMS residuals of ``Z1 - K_h*F``, ``Z2 - K_v*F``, ``W - (H*F - G)``, ``T - F``."""
    G = state.G if G is None else G
    F_hat = np.fft.fft2(state.F)
    targets = (
        _apply(state.otf_d[0], F_hat),
        _apply(state.otf_d[1], F_hat),
        _apply(state.otf_h, F_hat) - G,
        state.F,
    )
    splits = (state.Z1, state.Z2, state.W, state.T)
    scale = math.sqrt(state.F.size)
    return [float(np.linalg.norm(z - t)) / scale for z, t in zip(splits, targets)]


def _relative_change(new, old):
    norm = np.linalg.norm(old)
    change = np.linalg.norm(new - old)
    if norm == 0.0:
        return 0.0 if change == 0.0 else math.inf
    return float(change / norm)


def _check_finite(array, name, k):
    if not np.isfinite(array).all():
        raise SolverError(f"non-finite values in the {name} subproblem at iteration {k}")


class OGSTVLpSolver:
    """
    Stateful solver; ``run`` iterates until the successive-iterate relative
    error of ``F`` drops below ``config.tol`` or ``config.max_iter`` is hit.
    """

    def __init__(self, G, H, config, reference=None):
        self.config = config
        self.H = H
        self.state = SolverState(G, H, config)
        self.reference = None if reference is None else as_image(reference, "reference")
        self.report = SolveReport(config.method)

    def step(self):
        """Run one outer iteration and return the relative change of ``F``."""
        cfg = self.config
        state = self.state
        k = state.k + 1
        Vt = state.V_tilde
        steps = cfg.dual_steps

        F_hat = np.fft.fft2(state.F)
        HF = _apply(state.otf_h, F_hat)
        mm = cfg.mm.with_gamma(1.0 / cfg.lambda1)
        Z_new = []
        for i, name in enumerate(GROUPS[:2]):
            KF = _apply(state.otf_d[i], F_hat)
            Z = ogs_prox(KF + Vt[i] / cfg.lambda1, mm, cfg.group)
            _check_finite(Z, name, k)
            Z_new.append(Z)
        W = shrink_p(
            HF - state.G + Vt[2] / cfg.lambda2,
            ShrinkParams(cfg.p, cfg.lambda2 / cfg.mu),
        )
        _check_finite(W, "W", k)
        Z_new.append(W)
        T = project_box(state.F + Vt[3] / cfg.lambda3)
        Z_new.append(T)

        Z_old = state.Z
        state.Z = Z_new
        F_new = update_F(state, cfg, state.G)

        F_new_hat = np.fft.fft2(F_new)
        residuals = (
            Z_new[0] - _apply(state.otf_d[0], F_new_hat),
            Z_new[1] - _apply(state.otf_d[1], F_new_hat),
            Z_new[2] - (_apply(state.otf_h, F_new_hat) - state.G),
            Z_new[3] - F_new,
        )
        V_old = state.V
        V_new = [Vt[i] - steps[i] * residuals[i] for i in range(len(GROUPS))]
        for V in V_new:
            _check_finite(V, "multipliers", k)
        state.V = V_new

        if cfg.accelerate:
            self._extrapolate(Z_old, V_old, steps)
        else:
            state.Z_tilde = list(state.Z)
            state.V_tilde = list(state.V)

        re = _relative_change(F_new, state.F)
        state.F = F_new
        state.k = k
        return re

    def _extrapolate(self, Z_old, V_old, steps):
        cfg = self.config
        state = self.state
        for i in range(len(GROUPS)):
            scale = steps[i]
            d = (
                float(np.sum((state.V[i] - state.V_tilde[i]) ** 2)) / scale
                + scale * float(np.sum((state.Z[i] - state.Z_tilde[i]) ** 2))
            )
            if d < cfg.eta * state.d[i]:
                alpha = state.alpha[i]
                alpha_next = (1.0 + math.sqrt(1.0 + 4.0 * alpha * alpha)) / 2.0
                weight = (alpha - 1.0) / alpha_next
                state.Z_tilde[i] = state.Z[i] + weight * (state.Z[i] - Z_old[i])
                state.V_tilde[i] = state.V[i] + weight * (state.V[i] - V_old[i])
                state.alpha[i] = alpha_next
                state.d[i] = d
            else:
                state.alpha[i] = 1.0
                state.Z_tilde[i] = state.Z[i]
                state.V_tilde[i] = state.V[i]
                state.d[i] = state.d[i] / cfg.eta if cfg.eta > 0.0 else math.inf
                self.report.restarts += 1
                signals.solver_restarted.send(
                    sender=self.__class__, iteration=state.k + 1, group=i
                )

    def run(self, callback=None):
        """
        Iterate to convergence and return ``(restored, report)``.

        ``callback(state)`` is invoked after every iteration.
        """
        cfg = self.config
        report = self.report
        signals.restoration_started.send(sender=self.__class__, config=cfg)
        start = time.perf_counter()
        while self.state.k < cfg.max_iter:
            re = self.step()
            report.iterations = self.state.k
            report.re_history.append(re)
            if self.reference is not None:
                report.psnr_history.append(psnr(self.reference, project_box(self.state.F)))
            logger.debug(
                "%s iteration %d: re=%.3e restarts=%d",
                cfg.method,
                self.state.k,
                re,
                report.restarts,
            )
            if callback is not None:
                callback(self.state)
            if re < cfg.tol:
                report.converged = True
                break
        report.wall_time = time.perf_counter() - start
        logger.info(
            "%s finished after %d iterations (converged=%s, %.3fs)",
            cfg.method,
            report.iterations,
            report.converged,
            report.wall_time,
        )
        signals.restoration_finished.send(sender=self.__class__, report=report)
        return project_box(self.state.F), report


def admm_solve(G, H, cfg, reference=None):
    """Plain ADMM; ``cfg.accelerate`` is ignored."""
    if cfg.accelerate:
        cfg = cfg.copy(accelerate=False)
    return OGSTVLpSolver(G, H, cfg, reference=reference).run()


def fast_admm_solve(G, H, cfg, reference=None):
    """ADMM with Nesterov extrapolation and restart; ``cfg.accelerate`` is ignored."""
    if not cfg.accelerate:
        cfg = cfg.copy(accelerate=True)
    return OGSTVLpSolver(G, H, cfg, reference=reference).run()


def solve(G, H, cfg, reference=None):
    """Dispatch on ``cfg.accelerate``."""
    return OGSTVLpSolver(G, H, cfg, reference=reference).run()


def default_params(noise_level):
    """
    ``(mu, p)`` for a salt-and-pepper level.

    Exact on the tabulated levels; elsewhere ``mu`` is interpolated linearly
    (held constant beyond the table) and ``p`` comes from the nearest
    tabulated level.
    """
    noise_level = float(noise_level)
    if not 0.0 < noise_level < 1.0:
        raise ValueError(f"noise level must lie in (0, 1), got {noise_level}")
    levels = [row[0] for row in DEFAULT_PARAMS_TABLE]
    mus = [row[1] for row in DEFAULT_PARAMS_TABLE]
    mu = float(np.interp(noise_level, levels, mus))
    # ties resolve toward the higher level
    nearest = min(
        DEFAULT_PARAMS_TABLE,
        key=lambda row: (round(abs(row[0] - noise_level), 12), -row[0]),
    )
    return mu, nearest[2]
