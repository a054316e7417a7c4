"""
Synthetic Dataset

This module generates the small class-conditional image sets the parity
experiment trains on.

Each class owns a uniform [0, 1) template. Every image is its class template
plus Gaussian noise and, optionally, a zero-mean periodic texture. Any P
consecutive texture samples sum to zero along both axes, so a P×P box
filter removes the texture entirely while a morph spreads it over every
element.

Critical:
- Generation is deterministic per rng
- Classes are exactly balanced; split() keeps the balance in both parts
"""

import logging
from dataclasses import dataclass
from typing import List, Tuple

import numpy as np

from core.error_handler import LengthMismatch, ValidationError
from core.linalg import SeededRng
from modules.d2r.tensors import ImageTensor, KernelSet

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SyntheticDataset:
    """
    Labelled images.

    Attributes:
        images (List[ImageTensor]): Data
        labels (List[int]): One class index per image
        classes (int): Number of classes, at least 2
    """

    images: List[ImageTensor]
    labels: List[int]
    classes: int

    def __post_init__(self):
        if self.classes < 2:
            raise ValidationError(f"A dataset needs at least 2 classes, got {self.classes}")
        if len(self.images) != len(self.labels):
            raise LengthMismatch(f"{len(self.images)} images but {len(self.labels)} labels")
        if any(not 0 <= label < self.classes for label in self.labels):
            raise ValidationError("Labels must lie in [0, classes)")

    def __len__(self) -> int:
        return len(self.images)

    def subset(self, indices) -> 'SyntheticDataset':
        return SyntheticDataset([self.images[i] for i in indices], [self.labels[i] for i in indices], self.classes)


def _periodic(rng: SeededRng, length: int, period: int) -> np.ndarray:
    cycle = rng.normal(size=period)
    cycle -= cycle.mean()
    return np.resize(cycle, length)


def _texture(rng: SeededRng, alpha: int, m: int, period: int) -> np.ndarray:
    out = np.empty((alpha, m, m))
    for channel in range(alpha):
        u, v = rng.normal(size=m), rng.normal(size=m)
        w, w2 = _periodic(rng, m, period), _periodic(rng, m, period)
        out[channel] = np.outer(u, w) + np.outer(w2, v)
    return out


def gen_synthetic(classes: int, per_class: int, alpha: int, m: int, rng: SeededRng,
                  noise: float = 0.1, texture: float = 0.0, texture_period: int = 4) -> SyntheticDataset:
    """
    Class-template images in shuffled order.

    Args:
        classes: Number of classes, at least 2
        per_class: Images per class
        alpha: Channels
        m: Image side, at least 4
        rng: Source of templates, noise, texture and order
        noise: Noise standard deviation (templates have amplitude 1)
        texture: Texture amplitude, 0 for none
        texture_period: Texture period P, at least 2

    Returns:
        SyntheticDataset: classes·per_class images
    """
    if classes < 2:
        raise ValidationError(f"classes must be >= 2, got {classes}")
    if per_class < 1:
        raise ValidationError(f"per_class must be >= 1, got {per_class}")
    if m < 4:
        raise ValidationError(f"m must be >= 4, got {m}")
    if texture and texture_period < 2:
        raise ValidationError("texture_period must be >= 2")

    template_rng, sample_rng, order_rng = rng.spawn(3)
    templates = template_rng.uniform(0.0, 1.0, size=(classes, alpha, m, m))

    images, labels = [], []
    for label in range(classes):
        for _ in range(per_class):
            data = templates[label] + noise * sample_rng.normal(size=(alpha, m, m))
            if texture:
                data = data + texture * _texture(sample_rng, alpha, m, texture_period)
            images.append(ImageTensor(alpha, m, data))
            labels.append(label)

    order = order_rng.generator.permutation(len(images))
    logger.debug("Generated synthetic dataset", extra={'details': {
        'classes': classes, 'per_class': per_class, 'alpha': alpha, 'm': m
    }})
    return SyntheticDataset([images[i] for i in order], [labels[i] for i in order], classes)


def box_kernels(alpha: int, beta: int, p: int, rng: SeededRng) -> KernelSet:
    """Low-pass first layer: every kernel is s·ones/p² with s uniform in [0.5, 1.5)."""
    scale = rng.uniform(0.5, 1.5, size=(alpha, beta, 1, 1))
    return KernelSet(alpha, beta, p, scale * np.ones((alpha, beta, p, p)) / (p * p))


def split_indices(dataset: SyntheticDataset, train_fraction: float = 0.8) -> Tuple[List[int], List[int]]:
    """
    Stratified split: the first round(train_fraction·count) images of every
    class, in dataset order, go to the training part.
    """
    if not 0.0 < train_fraction < 1.0:
        raise ValidationError(f"train_fraction must lie in (0, 1), got {train_fraction}")
    labels = np.asarray(dataset.labels)
    train, test = [], []
    for label in range(dataset.classes):
        members = np.nonzero(labels == label)[0]
        cut = int(round(train_fraction * len(members)))
        train.extend(members[:cut].tolist())
        test.extend(members[cut:].tolist())
    return sorted(train), sorted(test)


def split(dataset: SyntheticDataset, train_fraction: float = 0.8) -> Tuple[SyntheticDataset, SyntheticDataset]:
    """Training and test parts of split_indices."""
    train, test = split_indices(dataset, train_fraction)
    return dataset.subset(train), dataset.subset(test)
