"""
Unit tests for the synthetic dataset, the linear head and the parity run.
"""
import numpy as np
import pytest

from core.error_handler import DimensionMismatch, LengthMismatch, ValidationError
from core.linalg import SeededRng
from modules.d2r.lowering import build_conv_matrix, conv_direct
from modules.d2r.tensors import FeatureTensor, ImageTensor
from modules.toytrain.dataset import box_kernels, gen_synthetic, split, split_indices
from modules.toytrain.experiment import default_task, parity_experiment, parity_features
from modules.toytrain.trainer import TrainConfig, accuracy, flatten, predict, train_head


def features_from(values):
    return [FeatureTensor(1, 2, np.asarray(v, dtype=float).reshape(1, 2, 2)) for v in values]


@pytest.mark.unit
class TestDataset:
    """Test suite for synthetic data."""

    def test_size_and_labels(self, rng):
        data = gen_synthetic(3, 10, 1, 6, rng)
        assert len(data) == 30
        assert sorted(set(data.labels)) == [0, 1, 2]
        assert data.labels.count(1) == 10

    def test_deterministic(self):
        a = gen_synthetic(2, 5, 2, 4, SeededRng(4), texture=1.0)
        b = gen_synthetic(2, 5, 2, 4, SeededRng(4), texture=1.0)
        assert a.labels == b.labels
        assert all(np.array_equal(x.data, y.data) for x, y in zip(a.images, b.images))

    def test_texture_vanishes_under_box_filter(self, rng):
        """A period-4 zero-mean texture sums to zero over any 4×4 box."""
        # Setup
        plain = gen_synthetic(2, 3, 1, 8, SeededRng(6), noise=0.0)
        textured = gen_synthetic(2, 3, 1, 8, SeededRng(6), noise=0.0, texture=4.0, texture_period=4)
        kernels = box_kernels(1, 2, 4, rng)

        # Test / Verify
        for a, b in zip(plain.images, textured.images):
            assert not np.allclose(a.data, b.data)
            assert np.allclose(conv_direct(a, kernels).data, conv_direct(b, kernels).data, atol=1e-10)

    def test_stratified_split(self, rng):
        """80/20 within every class, no overlap."""
        data = gen_synthetic(2, 10, 1, 4, rng)
        train, test = split_indices(data)
        assert len(train) == 16 and len(test) == 4
        assert not set(train) & set(test)
        assert [data.labels[i] for i in test].count(0) == 2
        train_set, test_set = split(data)
        assert len(train_set) == 16 and len(test_set) == 4

    def test_invalid_arguments(self, rng):
        with pytest.raises(ValidationError):
            gen_synthetic(1, 10, 1, 8, rng)
        with pytest.raises(ValidationError):
            gen_synthetic(2, 10, 1, 3, rng)
        with pytest.raises(ValidationError):
            split_indices(gen_synthetic(2, 2, 1, 4, rng), 1.0)


@pytest.mark.unit
class TestTrainer:
    """Test suite for the softmax head."""

    def test_separable_data(self):
        """Two well-separated clusters are learned perfectly."""
        # Setup
        gen = np.random.default_rng(0)
        values = np.vstack([gen.normal(-2, 0.3, size=(40, 4)), gen.normal(2, 0.3, size=(40, 4))])
        labels = [0] * 40 + [1] * 40

        # Test
        head = train_head(features_from(values), labels, TrainConfig(epochs=50))

        # Verify
        assert accuracy(head, features_from(values), labels) == 1.0
        assert head.loss_history[-1] < head.loss_history[0]

    def test_zero_learning_rate_predicts_first_class(self):
        """Untrained zero weights tie every logit; argmax picks class 0."""
        values = np.arange(16.0).reshape(4, 4)
        head = train_head(features_from(values), [0, 1, 0, 1], TrainConfig(learning_rate=0.0, epochs=1))
        assert predict(head, features_from(values)).tolist() == [0, 0, 0, 0]

    def test_deterministic(self):
        gen = np.random.default_rng(1)
        values = gen.normal(size=(20, 4))
        labels = [i % 2 for i in range(20)]
        a = train_head(features_from(values), labels, TrainConfig(epochs=5, seed=3))
        b = train_head(features_from(values), labels, TrainConfig(epochs=5, seed=3))
        assert np.array_equal(a.weights, b.weights)

    def test_shape_checks(self):
        mixed = features_from([[1, 2, 3, 4]]) + [FeatureTensor(1, 1, np.zeros((1, 1, 1)))]
        with pytest.raises(DimensionMismatch):
            flatten(mixed)
        with pytest.raises(LengthMismatch):
            train_head(features_from(np.zeros((3, 4))), [0, 1], TrainConfig())

    def test_invalid_config(self):
        with pytest.raises(ValidationError):
            TrainConfig(epochs=0)
        with pytest.raises(ValidationError):
            TrainConfig(learning_rate=-0.1)


@pytest.mark.unit
class TestParityFeatures:
    """Test suite for the three feature sets of the parity run."""

    def test_augconv_matches_clean_up_to_order(self):
        """Aug-Conv features equal clean features after undoing the shuffle."""
        # Setup
        task = default_task(seed=2)
        small = task.dataset.subset(range(6))

        # Test
        features = parity_features(small, task.kernels, task.core, task.perm)

        # Verify
        for clean, aug in zip(features['clean'], features['augconv']):
            assert np.allclose(clean.permuted(task.perm.order).data, aug.data, atol=1e-8)

    def test_plain_layer_on_morphed_data_differs(self):
        task = default_task(seed=2)
        small = task.dataset.subset(range(6))
        features = parity_features(small, task.kernels, task.core, task.perm)
        assert not np.allclose(features['clean'][0].data, features['plain'][0].data)

    def test_conv_matrix_shape_for_default_task(self):
        task = default_task(seed=0)
        c = build_conv_matrix(task.kernels, 8, 'valid')
        assert c.matrix.shape == (64, 2 * 25)
        assert isinstance(task.dataset.images[0], ImageTensor)


@pytest.mark.integration
@pytest.mark.slow
class TestParityExperiment:
    """Accuracy parity on the default synthetic task."""

    def test_accuracy_parity(self):
        """Aug-Conv keeps clean accuracy; the plain layer on morphed data loses it."""
        # Setup
        task = default_task(seed=0)

        # Test
        result = parity_experiment(task.dataset, task.kernels, task.core, task.perm, task.config)

        # Verify
        assert abs(result.acc_clean - result.acc_morphed_augconv) <= 0.02
        assert result.acc_morphed_plainC <= result.acc_morphed_augconv - 0.20
        assert set(result.to_json()) == {
            'seed', 'geometry', 'acc_clean', 'acc_morphed_augconv', 'acc_morphed_plainC'
        }
