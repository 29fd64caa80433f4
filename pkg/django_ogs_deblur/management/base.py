import os

from django.core.management.base import BaseCommand, CommandError

from django_ogs_deblur.degrade import parse_kernel_spec
from django_ogs_deblur.pgm import PGMError, read_pgm, write_pgm
from django_ogs_deblur.settings import deblur_settings
from django_ogs_deblur.solvers import SolverConfig

# exit statuses
USAGE_ERROR = 1
RUNTIME_ERROR = 2


def float_list(text):
    return [float(item) for item in text.split(",") if item.strip()]


def int_list(text):
    return [int(item) for item in text.split(",") if item.strip()]


class ImageCommand(BaseCommand):
    """Shared argument parsing and PGM I/O for the deblurring commands."""

    requires_system_checks = []

    def load_image(self, path):
        try:
            return read_pgm(path)
        except OSError as exc:
            raise CommandError(
                'Cannot read "%s": %s' % (path, exc.strerror or exc),
                returncode=USAGE_ERROR,
            )
        except PGMError as exc:
            raise CommandError('Invalid PGM "%s": %s' % (path, exc), returncode=USAGE_ERROR)

    def save_image(self, path, img):
        try:
            write_pgm(path, img)
        except OSError as exc:
            raise CommandError(
                'Cannot write "%s": %s' % (path, exc.strerror or exc),
                returncode=RUNTIME_ERROR,
            )

    def parse_kernel(self, spec):
        try:
            return parse_kernel_spec(spec)
        except ValueError as exc:
            raise CommandError(str(exc), returncode=USAGE_ERROR)

    def check_kernel(self, kernel, shape):
        if kernel.rows > shape[0] or kernel.cols > shape[1]:
            raise CommandError(
                "kernel of shape %dx%d does not fit in a %dx%d image"
                % (kernel.rows, kernel.cols, shape[0], shape[1]),
                returncode=USAGE_ERROR,
            )

    def image_id(self, path):
        return os.path.splitext(os.path.basename(path))[0]


def add_solver_arguments(parser):
    parser.add_argument(
        "--method",
        choices=["admm", "fast-admm"],
        default="fast-admm",
        help="plain ADMM or ADMM with acceleration and restart",
    )
    parser.add_argument("--tol", type=float, default=None, help="outer stopping threshold")
    parser.add_argument("--max-iter", type=int, default=None, dest="max_iter")
    parser.add_argument("--lambda1", type=float, default=None)
    parser.add_argument("--lambda2", type=float, default=None)
    parser.add_argument("--lambda3", type=float, default=None)
    parser.add_argument("--gamma", type=float, default=None, help="dual step")
    parser.add_argument("--eta", type=float, default=None, help="restart factor")
    parser.add_argument(
        "--timing",
        action="store_true",
        help="record wall time in run records (otherwise 0, keeping output reproducible)",
    )


def build_config(options, p, mu, K):
    """Solver config from settings, overridden by command options."""
    try:
        return SolverConfig.from_settings(
            p=p,
            mu=mu,
            K=K,
            tol=options["tol"],
            max_iter=options["max_iter"],
            lambda1=options["lambda1"],
            lambda2=options["lambda2"],
            lambda3=options["lambda3"],
            gamma=options["gamma"],
            eta=options["eta"],
            accelerate=options["method"] == "fast-admm",
        )
    except ValueError as exc:
        raise CommandError(str(exc), returncode=USAGE_ERROR)


def resolve_params(p, mu, noise):
    """Fill missing ``p``/``mu`` from the noise level schedule."""
    if p is not None and mu is not None:
        return p, mu
    if noise is None:
        raise CommandError(
            "--noise is required when --p or --mu is not given", returncode=USAGE_ERROR
        )
    try:
        default_mu, default_p = deblur_settings.DEFAULT_PARAMS_HOOK(noise)
    except ValueError as exc:
        raise CommandError(str(exc), returncode=USAGE_ERROR)
    return (default_p if p is None else p), (default_mu if mu is None else mu)
