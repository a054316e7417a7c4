"""
Unit tests for convolution lowering (data-to-row).
"""
import itertools

import numpy as np
import pytest

from core.error_handler import GeometryMismatch, LengthMismatch, ValidationError
from core.linalg import RowVector, SeededRng
from modules.d2r.lowering import (
    build_conv_matrix,
    conv_batch_via_d2r,
    conv_direct,
    conv_via_d2r,
    output_side,
    random_kernels,
)
from modules.d2r.tensors import ImageTensor, KernelSet, Padding, reroll_features, reroll_image, unroll


def random_image(rng: SeededRng, alpha: int, m: int) -> ImageTensor:
    return ImageTensor(alpha, m, rng.normal(size=(alpha, m, m)))


@pytest.mark.unit
class TestUnroll:
    """Test suite for unroll and reroll."""

    def test_channel_major_order(self):
        """unroll walks channel, then row, then column."""
        # Setup
        data = np.arange(2 * 3 * 3, dtype=float).reshape(2, 3, 3)

        # Test
        row = unroll(ImageTensor(2, 3, data))

        # Verify
        assert np.array_equal(row.data, np.arange(18.0))

    def test_reroll_inverts_unroll(self, rng):
        """reroll(unroll(D)) = D."""
        image = random_image(rng, 3, 5)
        assert np.array_equal(reroll_image(unroll(image), 3, 5).data, image.data)

    def test_reroll_length_mismatch(self):
        """A row of the wrong length cannot be rerolled."""
        with pytest.raises(LengthMismatch):
            reroll_image(RowVector(np.zeros(10)), 1, 3)
        with pytest.raises(LengthMismatch):
            reroll_features(RowVector(np.zeros(10)), 2, 2)

    def test_non_square_image_rejected(self):
        """Images must be square."""
        with pytest.raises(GeometryMismatch):
            ImageTensor.from_array(np.zeros((1, 3, 4)))


@pytest.mark.unit
class TestOutputSide:
    """Test suite for feature map geometry."""

    def test_valid(self):
        assert output_side(32, 3, Padding.VALID) == 30

    def test_same(self):
        assert output_side(32, 3, 'same') == 32

    def test_valid_kernel_larger_than_image(self):
        """Valid padding needs m ≥ p."""
        with pytest.raises(GeometryMismatch):
            output_side(2, 3, 'valid')

    def test_same_even_kernel(self):
        """Same padding needs an odd kernel."""
        with pytest.raises(ValidationError):
            output_side(8, 2, 'same')

    def test_unknown_padding(self):
        with pytest.raises(ValidationError):
            Padding.parse('reflect')


@pytest.mark.unit
class TestConvMatrix:
    """Test suite for the lowered convolution matrix."""

    def test_known_answer(self):
        """All-ones 2×2 kernel over 1..9 gives [12, 16, 24, 28]."""
        # Setup
        image = ImageTensor(1, 3, np.arange(1.0, 10.0).reshape(1, 3, 3))
        kernels = KernelSet(1, 1, 2, np.ones((1, 1, 2, 2)))

        # Test
        c = build_conv_matrix(kernels, 3, 'valid')
        features = conv_via_d2r(image, c)

        # Verify
        assert c.matrix.shape == (9, 4)
        assert features.data.reshape(-1).tolist() == [12.0, 16.0, 24.0, 28.0]

    def test_shape(self, rng):
        """C is αm² × βn²."""
        c = build_conv_matrix(random_kernels(3, 4, 3, rng), 6, 'same')
        assert c.matrix.shape == (3 * 36, 4 * 36)

    def test_same_padding_impulse_response(self, rng):
        """A centred delta reproduces each kernel footprint around the centre."""
        # Setup
        kernels = random_kernels(1, 2, 3, rng)
        data = np.zeros((1, 5, 5))
        data[0, 2, 2] = 1.0

        # Test
        features = conv_via_d2r(ImageTensor(1, 5, data), build_conv_matrix(kernels, 5, 'same'))

        # Verify
        for j in range(2):
            patch = features.data[j, 1:4, 1:4]
            assert np.allclose(patch, kernels.weights[0, j, ::-1, ::-1])

    def test_matches_direct_on_random_geometries(self):
        """Lowered product equals direct convolution across random geometries."""
        gen = SeededRng(2024)
        for case in range(500):
            # Setup
            alpha = int(gen.integers(1, 4))
            beta = int(gen.integers(1, 5))
            p = int(gen.integers(1, 4))
            m = int(gen.integers(p, 9))
            padding = 'valid' if case % 2 or p % 2 == 0 else 'same'
            kernels = random_kernels(alpha, beta, p, gen)
            image = random_image(gen, alpha, m)

            # Test
            lowered = conv_via_d2r(image, build_conv_matrix(kernels, m, padding))
            direct = conv_direct(image, kernels, padding)

            # Verify
            assert np.max(np.abs(lowered.data - direct.data)) <= 1e-12

    def test_exhaustive_binary_images(self, rng):
        """Every binary 3×3 image matches the direct result."""
        kernels = random_kernels(1, 2, 2, rng)
        c = build_conv_matrix(kernels, 3, 'valid')
        for bits in itertools.product((0.0, 1.0), repeat=9):
            image = ImageTensor(1, 3, np.array(bits).reshape(1, 3, 3))
            diff = conv_via_d2r(image, c).data - conv_direct(image, kernels, 'valid').data
            assert np.max(np.abs(diff)) <= 1e-12

    def test_batch_matches_direct(self, rng):
        """The batched product agrees with per-image direct convolution."""
        # Setup
        kernels = random_kernels(2, 3, 3, rng)
        images = [random_image(rng, 2, 5) for _ in range(100)]
        c = build_conv_matrix(kernels, 5, 'same')

        # Test
        batch = conv_batch_via_d2r(images, c)

        # Verify
        for image, features in zip(images, batch):
            assert np.max(np.abs(features.data - conv_direct(image, kernels, 'same').data)) <= 1e-12

    def test_geometry_mismatch(self, rng):
        """C built for one image side rejects another."""
        c = build_conv_matrix(random_kernels(1, 1, 3, rng), 6, 'valid')
        with pytest.raises(GeometryMismatch):
            conv_via_d2r(random_image(rng, 1, 5), c)

    def test_channel_mismatch(self, rng):
        """Direct convolution needs matching input channels."""
        with pytest.raises(GeometryMismatch):
            conv_direct(random_image(rng, 2, 5), random_kernels(3, 1, 3, rng))

    def test_empty_batch(self, rng):
        c = build_conv_matrix(random_kernels(1, 1, 3, rng), 5, 'valid')
        assert conv_batch_via_d2r([], c) == []
