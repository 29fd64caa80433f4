import numpy as np
import pytest
from scipy import ndimage

from django_ogs_deblur.degrade import gaussian_kernel
from django_ogs_deblur.imaging import (
    Kernel,
    SpectrumError,
    as_image,
    conv_circular,
    conv_fft,
    corr_circular,
    fft2,
    horizontal_difference,
    identity_kernel,
    ifft2,
    otf_from_psf,
    vertical_difference,
)

KERNELS = [
    identity_kernel(),
    horizontal_difference(),
    vertical_difference(),
    gaussian_kernel(3, 1.0),
]


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def test_as_image_rejects_bad_input():
    with pytest.raises(ValueError):
        as_image(np.zeros(4))
    with pytest.raises(ValueError):
        as_image(np.array([[0.0, np.nan]]))
    with pytest.raises(ValueError):
        as_image(np.zeros((0, 3)))


def test_fft2_of_constant_is_dc_only():
    spec = fft2(np.full((6, 6), 0.25))
    assert spec[0, 0] == pytest.approx(0.25 * 36)
    rest = spec.copy()
    rest[0, 0] = 0
    assert np.abs(rest).max() < 1e-12


def test_fft2_of_impulse_is_flat():
    img = np.zeros((4, 4))
    img[0, 0] = 1.0
    np.testing.assert_allclose(fft2(img), np.ones((4, 4)), atol=1e-15)


def test_fft_round_trip(rng):
    x = rng.random((8, 8))
    assert np.abs(ifft2(fft2(x)) - x).max() < 1e-10


def test_fft_round_trip_non_square(rng):
    x = rng.random((5, 9))
    assert np.abs(ifft2(fft2(x)) - x).max() < 1e-10


def test_ifft2_of_zero_spectrum():
    np.testing.assert_array_equal(ifft2(np.zeros((3, 5), dtype=complex)), np.zeros((3, 5)))


def test_ifft2_rejects_non_hermitian_spectrum():
    spec = np.zeros((4, 4), dtype=complex)
    spec[0, 1] = 1j
    with pytest.raises(SpectrumError):
        ifft2(spec)


def test_otf_of_identity_is_all_ones():
    np.testing.assert_allclose(otf_from_psf(identity_kernel(), 5, 7), np.ones((5, 7)))


def test_otf_of_normalized_kernel_has_unit_dc_gain():
    otf = otf_from_psf(gaussian_kernel(7, 5.0), 16, 16)
    assert abs(otf[0, 0] - 1.0) < 1e-12


def test_otf_rejects_kernel_larger_than_image():
    with pytest.raises(ValueError):
        otf_from_psf(gaussian_kernel(7, 1.0), 5, 8)


def test_fft_path_matches_direct_gaussian_convolution(rng):
    x = rng.random((8, 8))
    k = gaussian_kernel(3, 1.0)
    direct = conv_circular(x, k)
    assert np.abs(conv_fft(x, otf_from_psf(k, 8, 8)) - direct).max() < 1e-10
    # odd, centered kernels agree with scipy's periodic convolution
    np.testing.assert_allclose(direct, ndimage.convolve(x, k.taps, mode="wrap"), atol=1e-12)


@pytest.mark.parametrize("kernel", KERNELS, ids=repr)
def test_convolution_transform_consistency(kernel, rng):
    x = rng.random((8, 8))
    via_fft = ifft2(fft2(x) * otf_from_psf(kernel, 8, 8))
    assert np.abs(conv_circular(x, kernel) - via_fft).max() < 1e-9


@pytest.mark.parametrize("kernel", KERNELS, ids=repr)
def test_convolution_is_linear(kernel, rng):
    x = rng.random((8, 8))
    y = rng.random((8, 8))
    lhs = conv_circular(2.5 * x - 0.75 * y, kernel)
    rhs = 2.5 * conv_circular(x, kernel) - 0.75 * conv_circular(y, kernel)
    assert np.abs(lhs - rhs).max() < 1e-10


@pytest.mark.parametrize("kernel", KERNELS, ids=repr)
def test_correlation_is_the_adjoint(kernel, rng):
    x = rng.random((8, 8))
    y = rng.random((8, 8))
    assert abs(np.vdot(conv_circular(x, kernel), y) - np.vdot(x, corr_circular(y, kernel))) < 1e-9


def test_identity_kernel_leaves_image_unchanged(rng):
    x = rng.random((6, 4))
    np.testing.assert_array_equal(conv_circular(x, identity_kernel()), x)


def test_constant_image_gains_kernel_sum():
    k = Kernel([[0.5, 1.0], [0.25, 0.75]])
    np.testing.assert_allclose(conv_circular(np.full((5, 5), 0.4), k), np.full((5, 5), 0.4 * 2.5))


def test_horizontal_difference_of_an_impulse():
    x = np.zeros((5, 5))
    x[2, 2] = 1.0
    expected = np.zeros((5, 5))
    # out[i, j] = x[i, j] - x[i, j + 1]
    expected[2, 2] = 1.0
    expected[2, 1] = -1.0
    np.testing.assert_array_equal(conv_circular(x, horizontal_difference()), expected)


def test_vertical_difference_wraps_around():
    x = np.zeros((4, 3))
    x[0, 1] = 1.0
    expected = np.zeros((4, 3))
    expected[0, 1] = 1.0
    expected[3, 1] = -1.0
    np.testing.assert_array_equal(conv_circular(x, vertical_difference()), expected)


def test_flipped_kernel_of_even_stencil():
    flipped = horizontal_difference().flipped()
    np.testing.assert_array_equal(flipped.taps, [[1.0, -1.0]])
    assert flipped.anchor == (0, 0)


def test_kernel_anchor_convention():
    assert Kernel(np.ones((4, 6))).anchor == (2, 3)
    assert Kernel(np.ones((3, 3))).anchor == (1, 1)
    with pytest.raises(ValueError):
        Kernel(np.ones((2, 2)), anchor=(2, 0))
    with pytest.raises(ValueError):
        Kernel([[np.inf]])
