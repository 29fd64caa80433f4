import math

import numpy as np
import pytest

from django_ogs_deblur.metrics import (
    QualityReport,
    format_psnr,
    psnr,
    quality_report,
    relative_error,
    ssim_global,
)


@pytest.fixture
def pair():
    rng = np.random.default_rng(7)
    x = rng.random((32, 40))
    y = np.clip(x + 0.05 * rng.standard_normal(x.shape), 0.0, 1.0)
    return x, y


def test_psnr_of_identical_images_is_infinite():
    x = np.full((4, 4), 0.25)
    assert psnr(x, x) == math.inf


def test_psnr_known_value():
    x = np.zeros((10, 10))
    y = np.full((10, 10), 1.0 / 255.0)
    # mse of one gray level on the 8-bit scale
    assert psnr(x, y) == pytest.approx(20.0 * math.log10(255.0), abs=1e-9)


def test_psnr_is_symmetric(pair):
    x, y = pair
    assert psnr(x, y) == pytest.approx(psnr(y, x), abs=1e-12)


def test_ssim_bounds(pair):
    x, y = pair
    assert ssim_global(x, x) == pytest.approx(1.0, abs=1e-12)
    assert -1.0 <= ssim_global(x, y) < 1.0
    assert ssim_global(x, y) == pytest.approx(ssim_global(y, x), abs=1e-12)


def test_ssim_matches_direct_formula(pair):
    x, y = pair
    X, Y = 255.0 * x, 255.0 * y
    c1, c2 = (0.01 * 255.0) ** 2, (0.03 * 255.0) ** 2
    cov = np.cov(X.ravel(), Y.ravel(), bias=True)
    expected = ((2 * X.mean() * Y.mean() + c1) * (2 * cov[0, 1] + c2)) / (
        (X.mean() ** 2 + Y.mean() ** 2 + c1) * (cov[0, 0] + cov[1, 1] + c2)
    )
    assert ssim_global(x, y) == pytest.approx(expected, rel=1e-12)


def test_ssim_of_constant_images():
    x = np.full((8, 8), 0.5)
    y = np.full((8, 8), 0.5)
    assert ssim_global(x, y) == pytest.approx(1.0)
    # luminance term only
    z = np.zeros((8, 8))
    c1 = (0.01 * 255.0) ** 2
    expected = c1 / ((127.5**2) + c1)
    assert ssim_global(x, z) == pytest.approx(expected, rel=1e-12)


def test_relative_error(pair):
    x, y = pair
    assert relative_error(x, x) == 0.0
    assert relative_error(x, 2 * x) == pytest.approx(1.0)
    assert relative_error(x, y) == pytest.approx(
        np.linalg.norm(y - x) / np.linalg.norm(x), rel=1e-12
    )


def test_relative_error_rejects_zero_reference():
    with pytest.raises(ValueError):
        relative_error(np.zeros((3, 3)), np.ones((3, 3)))


def test_mismatched_shapes_are_rejected():
    with pytest.raises(ValueError):
        psnr(np.zeros((3, 3)), np.zeros((3, 4)))
    with pytest.raises(ValueError):
        ssim_global(np.zeros((3, 3)), np.zeros((4, 3)))


def test_quality_report(pair):
    x, y = pair
    report = quality_report(x, y)
    assert isinstance(report, QualityReport)
    assert report.as_dict() == {
        "psnr_db": psnr(x, y),
        "ssim": ssim_global(x, y),
        "re": relative_error(x, y),
    }
    assert "psnr=" in repr(report)


def test_format_psnr():
    assert format_psnr(math.inf) == "inf"
    assert format_psnr(31.41592) == "31.4159"
