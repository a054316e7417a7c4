"""
Linear Head Trainer

Softmax regression on flattened feature maps, trained by mini-batch
gradient descent. This is the trainable part that sits on a frozen
first layer.

Critical:
- Features are standardized on the training set, then scaled by 1/√d
- Weights start at zero, so training on channel-permuted features follows
  the permuted trajectory and predicts identically
- Single-threaded and fully determined by TrainConfig.seed
"""

import logging
import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence

import numpy as np

from core.error_handler import DimensionMismatch, LengthMismatch, ValidationError
from core.linalg import SeededRng
from modules.d2r.tensors import FeatureTensor

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TrainConfig:
    """Gradient descent settings."""

    learning_rate: float = 0.05
    epochs: int = 200
    batch_size: int = 16
    seed: int = 0

    def __post_init__(self):
        if self.learning_rate < 0:
            raise ValidationError("learning_rate must be non-negative")
        if self.epochs < 1:
            raise ValidationError("epochs must be >= 1")
        if self.batch_size < 1:
            raise ValidationError("batch_size must be >= 1")


@dataclass
class LinearHead:
    """
    Trained softmax head.

    Attributes:
        weights (np.ndarray): (d + 1) × classes, bias in the last row
        mean (np.ndarray): Per-feature training mean
        scale (np.ndarray): Per-feature multiplier (1/(std·√d))
        loss_history (List[float]): Mean loss of every epoch
    """

    weights: np.ndarray
    mean: np.ndarray
    scale: np.ndarray
    loss_history: List[float] = field(default_factory=list)

    @property
    def classes(self) -> int:
        return self.weights.shape[1]


def flatten(features: Sequence[FeatureTensor]) -> np.ndarray:
    """Stack features as rows; every tensor must share one shape."""
    if not features:
        raise ValidationError("No features given")
    shape = features[0].data.shape
    for index, f in enumerate(features):
        if f.data.shape != shape:
            raise DimensionMismatch(f"Feature {index} has shape {f.data.shape}, expected {shape}")
    return np.stack([f.data.reshape(-1) for f in features])


def _design(x: np.ndarray, head: LinearHead) -> np.ndarray:
    scaled = (x - head.mean) * head.scale
    return np.hstack([scaled, np.ones((x.shape[0], 1))])


def _softmax(logits: np.ndarray) -> np.ndarray:
    shifted = logits - logits.max(axis=1, keepdims=True)
    exp = np.exp(shifted)
    return exp / exp.sum(axis=1, keepdims=True)


def train_head(features: Sequence[FeatureTensor], labels: Sequence[int], config: TrainConfig,
               classes: Optional[int] = None) -> LinearHead:
    """
    Fit a softmax head by mini-batch gradient descent on cross-entropy.

    Args:
        features: Training features
        labels: Class index per feature
        config: Learning rate, epochs, batch size and shuffle seed
        classes: Number of classes (default: max label + 1)

    Returns:
        LinearHead: Final head with per-epoch loss history

    Raises:
        DimensionMismatch: On inconsistent feature shapes
        LengthMismatch: If features and labels differ in count
    """
    x = flatten(features)
    y = np.asarray(labels, dtype=np.int64)
    if y.shape[0] != x.shape[0]:
        raise LengthMismatch(f"{x.shape[0]} features but {y.shape[0]} labels")
    classes = classes or int(y.max()) + 1
    count, dims = x.shape

    std = x.std(axis=0)
    std[std == 0.0] = 1.0
    head = LinearHead(
        weights=np.zeros((dims + 1, classes)),
        mean=x.mean(axis=0),
        scale=1.0 / (std * math.sqrt(dims)),
    )
    design = _design(x, head)
    onehot = np.eye(classes)[y]
    rng = SeededRng(config.seed)

    for _ in range(config.epochs):
        order = rng.generator.permutation(count)
        total = 0.0
        for start in range(0, count, config.batch_size):
            batch = order[start:start + config.batch_size]
            probs = _softmax(design[batch] @ head.weights)
            total += -float(np.sum(np.log(probs[np.arange(len(batch)), y[batch]] + 1e-300)))
            grad = design[batch].T @ (probs - onehot[batch]) / len(batch)
            head.weights -= config.learning_rate * grad
        head.loss_history.append(total / count)

    logger.debug("Trained linear head", extra={'details': {
        'samples': count, 'features': dims, 'epochs': config.epochs,
        'final_loss': head.loss_history[-1]
    }})
    return head


def predict(head: LinearHead, features: Sequence[FeatureTensor]) -> np.ndarray:
    """Class index per feature."""
    x = flatten(features)
    if x.shape[1] != head.mean.shape[0]:
        raise DimensionMismatch(f"Head expects {head.mean.shape[0]} features, got {x.shape[1]}")
    return np.argmax(_design(x, head) @ head.weights, axis=1)


def accuracy(head: LinearHead, features: Sequence[FeatureTensor], labels: Sequence[int]) -> float:
    """Fraction of correct predictions."""
    predicted = predict(head, features)
    labels = np.asarray(labels)
    if labels.shape[0] != predicted.shape[0]:
        raise LengthMismatch(f"{predicted.shape[0]} features but {labels.shape[0]} labels")
    return float(np.mean(predicted == labels))
