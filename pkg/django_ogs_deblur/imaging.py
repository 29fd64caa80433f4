"""
Image container conventions, periodic convolution and the 2-D Fourier
transform contract shared by every other module.

Images are plain ``float64`` numpy arrays of shape ``(rows, cols)`` holding
intensities in the canonical range ``[0, 1]``.  Spectra are ``complex128``
arrays of the same shape.  The forward transform is unnormalized and the
inverse carries the ``1 / (rows * cols)`` factor, so bin ``(0, 0)`` of a
spectrum is the pixel sum.
"""

import numpy as np

# ifft2 rejects spectra whose inverse has an imaginary part above this.
IMAG_RESIDUE_LIMIT = 1e-6


class SpectrumError(ValueError):
    """The inverse transform of a spectrum is not real."""


def as_image(data, name="image"):
    """
    Coerce ``data`` into a finite 2-D ``float64`` array.

    Raises ``ValueError`` for empty, non 2-D or non-finite input.
    """
    img = np.asarray(data, dtype=np.float64)
    if img.ndim != 2 or img.shape[0] < 1 or img.shape[1] < 1:
        raise ValueError(f"{name} must be a non-empty 2-D array, got shape {img.shape}")
    if not np.isfinite(img).all():
        raise ValueError(f"{name} contains non-finite values")
    return img


class Kernel:
    """
    A small real stencil with an anchor marking its center.

    The anchor defaults to ``(rows // 2, cols // 2)``.  Convolution with a
    kernel is a true convolution: the output at ``(i, j)`` is
    ``sum(taps[u, v] * img[i - (u - ar), j - (v - ac)])`` with periodic
    indexing.
    """

    def __init__(self, taps, anchor=None):
        taps = np.array(taps, dtype=np.float64, ndmin=2)
        if taps.ndim != 2:
            raise ValueError(f"kernel taps must be 2-D, got shape {taps.shape}")
        if not np.isfinite(taps).all():
            raise ValueError("kernel taps must be finite")
        self.taps = taps
        if anchor is None:
            anchor = (taps.shape[0] // 2, taps.shape[1] // 2)
        ar, ac = (int(a) for a in anchor)
        if not (0 <= ar < taps.shape[0] and 0 <= ac < taps.shape[1]):
            raise ValueError(f"anchor {anchor} lies outside a {taps.shape} kernel")
        self.anchor = (ar, ac)

    @property
    def shape(self):
        return self.taps.shape

    @property
    def rows(self):
        return self.taps.shape[0]

    @property
    def cols(self):
        return self.taps.shape[1]

    def flipped(self):
        """The kernel of the adjoint (correlation) operator."""
        ar, ac = self.anchor
        return Kernel(
            self.taps[::-1, ::-1],
            anchor=(self.rows - 1 - ar, self.cols - 1 - ac),
        )

    def __repr__(self):
        return "<Kernel %dx%d anchor=%s>" % (self.rows, self.cols, self.anchor)


def identity_kernel():
    return Kernel([[1.0]])


def horizontal_difference():
    """K_h = [-1, 1]."""
    return Kernel([[-1.0, 1.0]])


def vertical_difference():
    """K_v = [-1, 1]^T."""
    return Kernel([[-1.0], [1.0]])


def _check_fits(k, rows, cols):
    if k.rows > rows or k.cols > cols:
        raise ValueError(
            "kernel of shape %s does not fit in a %dx%d image" % (k.shape, rows, cols)
        )


def fft2(img):
    """Unnormalized forward 2-D transform of a real image."""
    return np.fft.fft2(as_image(img))


def ifft2(spec):
    """
    Inverse 2-D transform returning the real part.

    Raises ``SpectrumError`` when the discarded imaginary part exceeds
    ``IMAG_RESIDUE_LIMIT``; that only happens when the spectrum lost its
    Hermitian symmetry upstream.
    """
    spec = np.asarray(spec)
    if spec.ndim != 2:
        raise ValueError(f"spectrum must be 2-D, got shape {spec.shape}")
    out = np.fft.ifft2(spec)
    residue = np.abs(out.imag).max() if out.size else 0.0
    if residue > IMAG_RESIDUE_LIMIT:
        raise SpectrumError(
            "inverse transform has imaginary residue %.3g (limit %.0e)"
            % (residue, IMAG_RESIDUE_LIMIT)
        )
    return np.ascontiguousarray(out.real)


def otf_from_psf(k, rows, cols):
    """
    Transfer function of ``k`` on a ``rows x cols`` periodic grid.

    The kernel is zero-padded and circularly shifted so that its anchor lands
    on index ``(0, 0)`` before the forward transform.
    """
    _check_fits(k, rows, cols)
    padded = np.zeros((rows, cols), dtype=np.float64)
    padded[: k.rows, : k.cols] = k.taps
    padded = np.roll(padded, shift=(-k.anchor[0], -k.anchor[1]), axis=(0, 1))
    return np.fft.fft2(padded)


def conv_circular(img, k):
    """Direct spatial convolution of ``img`` with ``k`` under periodic wrap-around."""
    img = as_image(img)
    _check_fits(k, *img.shape)
    ar, ac = k.anchor
    out = np.zeros_like(img)
    for u in range(k.rows):
        for v in range(k.cols):
            tap = k.taps[u, v]
            if tap != 0.0:
                out += tap * np.roll(img, shift=(u - ar, v - ac), axis=(0, 1))
    return out


def corr_circular(img, k):
    """Circular correlation, the adjoint of ``conv_circular`` with the same kernel."""
    return conv_circular(img, k.flipped())


def conv_fft(img, otf):
    """Periodic convolution through a precomputed transfer function."""
    return ifft2(np.fft.fft2(img) * otf)
