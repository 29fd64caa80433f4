import os
import shutil
import tempfile

import numpy as np
from django.test import testcases

from django_ogs_deblur.degrade import NoiseSpec, degrade, gaussian_kernel


def piecewise_constant_image(rows=64, cols=64):
    """
    Deterministic piecewise-constant test scene in ``[0, 1]``: a mid-gray
    background with a bright rectangle, a dark disk and a thin bar.
    """
    img = np.full((rows, cols), 0.3)
    img[rows // 8 : rows // 2, cols // 8 : cols // 2] = 0.9
    yy, xx = np.mgrid[0:rows, 0:cols]
    disk = (yy - 0.65 * rows) ** 2 + (xx - 0.65 * cols) ** 2 <= (0.18 * min(rows, cols)) ** 2
    img[disk] = 0.1
    img[rows // 4 : rows - rows // 4, cols - cols // 6 : cols - cols // 6 + max(1, cols // 16)] = 0.7
    return img


def degraded_fixture(rows=64, cols=64, noise=0.3, seed=0, kernel=None):
    """``(clean, kernel, observed)`` for the synthetic benchmark."""
    clean = piecewise_constant_image(rows, cols)
    kernel = kernel if kernel is not None else gaussian_kernel(7, 5.0)
    return clean, kernel, degrade(clean, kernel, NoiseSpec(noise, seed))


class ImageTestCase(testcases.SimpleTestCase):
    """
    ``SimpleTestCase`` with array assertions and a scratch directory in
    ``self.tmpdir`` for commands that read and write files.
    """

    def setUp(self):
        super().setUp()
        self.tmpdir = tempfile.mkdtemp(prefix="ogs-deblur-")

    def tearDown(self):
        shutil.rmtree(self.tmpdir, ignore_errors=True)
        super().tearDown()

    def path(self, name):
        return os.path.join(self.tmpdir, name)

    def assertImagesAlmostEqual(self, first, second, atol=1e-10, rtol=0.0):
        first = np.asarray(first)
        second = np.asarray(second)
        self.assertEqual(first.shape, second.shape)
        np.testing.assert_allclose(first, second, rtol=rtol, atol=atol)

    def assertImagesEqual(self, first, second):
        np.testing.assert_array_equal(np.asarray(first), np.asarray(second))

    def assertInUnitRange(self, img):
        img = np.asarray(img)
        self.assertGreaterEqual(img.min(), 0.0)
        self.assertLessEqual(img.max(), 1.0)
