"""
Synthesis of degraded observations: blur kernels, periodic blurring and
salt-and-pepper corruption.

Noise is drawn from numpy's PCG64 generator seeded with
``numpy.random.default_rng(seed)``.  Two full-image uniform draws are taken
in row-major order: the first selects corrupted pixels (``u < level``), the
second picks salt (``u < 0.5``) or pepper for each pixel.  This discipline is
part of the public contract; changing it changes every stored test vector.
"""

import logging

import numpy as np

from django_ogs_deblur.imaging import Kernel, as_image, conv_circular, identity_kernel

logger = logging.getLogger(__name__)


class NoiseSpec:
    def __init__(self, level, seed=0):
        level = float(level)
        if not 0.0 <= level <= 1.0:
            raise ValueError(f"noise level must lie in [0, 1], got {level}")
        seed = int(seed)
        if not 0 <= seed < 2**64:
            raise ValueError(f"seed must be an unsigned 64-bit integer, got {seed}")
        self.level = level
        self.seed = seed

    def __repr__(self):
        return "<NoiseSpec level=%g seed=%d>" % (self.level, self.seed)


def gaussian_kernel(size, sigma):
    """Normalized ``size x size`` Gaussian, the equivalent of ``fspecial('gaussian')``."""
    size = int(size)
    if size < 1 or size % 2 == 0:
        raise ValueError(f"gaussian kernel size must be a positive odd integer, got {size}")
    if not sigma > 0:
        raise ValueError(f"gaussian sigma must be positive, got {sigma}")
    offsets = np.arange(size, dtype=np.float64) - size // 2
    yy, xx = np.meshgrid(offsets, offsets, indexing="ij")
    taps = np.exp(-(xx**2 + yy**2) / (2.0 * sigma**2))
    return Kernel(taps / taps.sum())


def mean_kernel(size):
    size = int(size)
    if size < 1:
        raise ValueError(f"mean kernel size must be positive, got {size}")
    return Kernel(np.full((size, size), 1.0 / (size * size)))


def parse_kernel_spec(text):
    """
    Build a blur kernel from its textual form.

    Accepted forms are ``gaussian:<size>:<sigma>``, ``mean:<size>`` and
    ``identity``.
    """
    parts = text.strip().split(":")
    name = parts[0].lower()
    try:
        if name == "gaussian" and len(parts) == 3:
            return gaussian_kernel(int(parts[1]), float(parts[2]))
        if name == "mean" and len(parts) == 2:
            return mean_kernel(int(parts[1]))
        if name == "identity" and len(parts) == 1:
            return identity_kernel()
    except ValueError as exc:
        raise ValueError(f"invalid kernel spec '{text}': {exc}") from exc
    raise ValueError(
        f"invalid kernel spec '{text}', expected gaussian:<size>:<sigma>, "
        "mean:<size> or identity"
    )


def blur(img, k):
    return conv_circular(img, k)


def salt_pepper_mask(shape, spec):
    """
    Draw the corruption pattern for an image of ``shape``.

    Returns ``(corrupted, salt)`` boolean arrays; ``salt`` is only meaningful
    where ``corrupted`` is set.
    """
    rng = np.random.default_rng(spec.seed)
    corrupted = rng.random(shape) < spec.level
    salt = rng.random(shape) < 0.5
    return corrupted, salt


def add_salt_pepper(img, spec):
    img = as_image(img)
    if img.min() < 0.0 or img.max() > 1.0:
        raise ValueError("salt-and-pepper corruption expects intensities in [0, 1]")
    corrupted, salt = salt_pepper_mask(img.shape, spec)
    out = img.copy()
    out[corrupted] = np.where(salt[corrupted], 1.0, 0.0)
    logger.debug(
        "corrupted %d of %d pixels (level %g, seed %d)",
        int(corrupted.sum()),
        img.size,
        spec.level,
        spec.seed,
    )
    return out


def degrade(img, k, spec):
    """Blur then corrupt, following ``g = h * f + n``."""
    blurred = np.clip(blur(img, k), 0.0, 1.0)
    return add_salt_pepper(blurred, spec)

