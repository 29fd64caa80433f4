"""
Image quality measures.

Inputs are canonical ``[0, 1]`` images; PSNR and SSIM are evaluated on the
8-bit scale (values multiplied by 255).  SSIM is the single-window (global)
form: whole-image means, variances and covariance.
"""

import math

import numpy as np

from django_ogs_deblur.imaging import as_image

PEAK = 255.0


class QualityReport:
    def __init__(self, psnr_db, ssim, re):
        self.psnr_db = psnr_db
        self.ssim = ssim
        self.re = re

    def as_dict(self):
        return {"psnr_db": self.psnr_db, "ssim": self.ssim, "re": self.re}

    def __repr__(self):
        return "<QualityReport psnr=%s ssim=%.5f re=%.5f>" % (
            format_psnr(self.psnr_db),
            self.ssim,
            self.re,
        )


def _pair(x, y):
    x = as_image(x, "x")
    y = as_image(y, "y")
    if x.shape != y.shape:
        raise ValueError(f"image dimensions differ: {x.shape} vs {y.shape}")
    return x, y


def psnr(x, y):
    """Peak signal-to-noise ratio in dB; ``math.inf`` for identical images."""
    x, y = _pair(x, y)
    mse = float(np.mean((PEAK * x - PEAK * y) ** 2))
    if mse == 0.0:
        return math.inf
    return 10.0 * math.log10(PEAK * PEAK / mse)


def ssim_global(x, y, k1=0.01, k2=0.03):
    x, y = _pair(x, y)
    X = PEAK * x
    Y = PEAK * y
    mu_x = X.mean()
    mu_y = Y.mean()
    var_x = np.mean((X - mu_x) ** 2)
    var_y = np.mean((Y - mu_y) ** 2)
    cov = np.mean((X - mu_x) * (Y - mu_y))
    c1 = (PEAK * k1) ** 2
    c2 = (PEAK * k2) ** 2
    num = (2.0 * mu_x * mu_y + c1) * (2.0 * cov + c2)
    den = (mu_x**2 + mu_y**2 + c1) * (var_x + var_y + c2)
    return float(num / den)


def relative_error(x_ref, y):
    """``|y - x_ref| / |x_ref|`` in the Frobenius norm."""
    x_ref, y = _pair(x_ref, y)
    norm = np.linalg.norm(x_ref)
    if norm == 0.0:
        raise ValueError("relative error is undefined for an all-zero reference")
    return float(np.linalg.norm(y - x_ref) / norm)


def quality_report(ref, test, k1=0.01, k2=0.03):
    return QualityReport(
        psnr_db=psnr(ref, test),
        ssim=ssim_global(ref, test, k1, k2),
        re=relative_error(ref, test),
    )


def format_psnr(value):
    return "inf" if math.isinf(value) else "%.4f" % value
