"""
Parity Experiment

This module runs the toy-scale accuracy comparison between clean data,
morphed data through the Aug-Conv layer, and morphed data through the
original first layer.

The experiment is responsible for:
1. Building the three feature sets from one dataset, layer, core and order
2. Training a fresh head per feature set with the same configuration
3. Reporting the three test accuracies as a JSON-ready record

Critical:
- All three runs share one 80/20 stratified split
- Only the head trains; the first layer stays fixed
- The linear head stands in for every layer above the first one
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Any, Dict, List

import numpy as np

from core.linalg import RowVector, SeededRng, accumulate_product
from modules.augconv.layer import ChannelPermutation, apply_augconv_batch, build_augconv, random_permutation
from modules.d2r.lowering import build_conv_matrix, conv_direct
from modules.d2r.tensors import FeatureTensor, KernelSet, Padding, reroll_features, unroll_batch
from modules.morphing.core import MorphCore, generate_core, morph_batch

from .dataset import SyntheticDataset, box_kernels, gen_synthetic, split_indices
from .trainer import TrainConfig, accuracy, train_head

logger = logging.getLogger(__name__)

DEFAULT_CLASSES = 2
DEFAULT_PER_CLASS = 150
DEFAULT_ALPHA = 1
DEFAULT_M = 8
DEFAULT_P = 4
DEFAULT_BETA = 2
DEFAULT_KAPPA = 1
DEFAULT_TEXTURE = 4.0
DEFAULT_TEXTURE_PERIOD = 4
DEFAULT_NOISE = 0.1


@dataclass(frozen=True)
class ParityTask:
    """Everything one parity run needs."""

    dataset: SyntheticDataset
    kernels: KernelSet
    core: MorphCore
    perm: ChannelPermutation
    config: TrainConfig


@dataclass(frozen=True)
class ParityResult:
    """Test accuracies of the three runs."""

    seed: int
    geometry: Dict[str, Any]
    acc_clean: float
    acc_morphed_augconv: float
    acc_morphed_plainC: float

    def to_json(self) -> Dict[str, Any]:
        return {
            'seed': self.seed,
            'geometry': dict(self.geometry),
            'acc_clean': self.acc_clean,
            'acc_morphed_augconv': self.acc_morphed_augconv,
            'acc_morphed_plainC': self.acc_morphed_plainC,
        }


def default_task(seed: int = 0) -> ParityTask:
    """Two textured classes of 8×8 images, a 4×4 box first layer and a full core."""
    data_rng, kernel_rng, core_rng, perm_rng = SeededRng(seed).spawn(4)
    dataset = gen_synthetic(
        DEFAULT_CLASSES, DEFAULT_PER_CLASS, DEFAULT_ALPHA, DEFAULT_M, data_rng,
        noise=DEFAULT_NOISE, texture=DEFAULT_TEXTURE, texture_period=DEFAULT_TEXTURE_PERIOD,
    )
    q = DEFAULT_ALPHA * DEFAULT_M * DEFAULT_M // DEFAULT_KAPPA
    return ParityTask(
        dataset=dataset,
        kernels=box_kernels(DEFAULT_ALPHA, DEFAULT_BETA, DEFAULT_P, kernel_rng),
        core=generate_core(q, DEFAULT_KAPPA, core_rng),
        perm=random_permutation(DEFAULT_BETA, perm_rng),
        config=TrainConfig(seed=seed),
    )


def _plain_features(rows: np.ndarray, matrix: np.ndarray, beta: int, n: int) -> List[FeatureTensor]:
    if rows.shape[0] == 0:
        return []
    return [reroll_features(RowVector(row), beta, n) for row in accumulate_product(rows, matrix)]


def parity_features(dataset: SyntheticDataset, kernels: KernelSet, core: MorphCore,
                    perm: ChannelPermutation, padding=Padding.VALID) -> Dict[str, List[FeatureTensor]]:
    """
    The three feature sets: 'clean', 'augconv' and 'plain'.

    Raises:
        GeometryMismatch: If dataset, kernels and core disagree
    """
    images = dataset.images
    m = images[0].m
    c = build_conv_matrix(kernels, m, padding)
    core.check_geometry(kernels.alpha, m)
    morphed = morph_batch(unroll_batch(images), core)
    ac = build_augconv(core, c, perm)
    return {
        'clean': [conv_direct(image, kernels, padding) for image in images],
        'augconv': apply_augconv_batch(morphed, ac),
        'plain': _plain_features(morphed, c.matrix.data, c.beta, c.n),
    }


def parity_experiment(dataset: SyntheticDataset, kernels: KernelSet, core: MorphCore,
                      perm: ChannelPermutation, config: TrainConfig,
                      padding=Padding.VALID, workers: int = 3) -> ParityResult:
    """
    Train one head per feature set on the same split and report test accuracy.

    Returns:
        ParityResult: Accuracies of clean, morphed+Aug-Conv and morphed+plain C
    """
    features = parity_features(dataset, kernels, core, perm, padding)
    train_index, test_index = split_indices(dataset)
    labels = dataset.labels

    def run(name: str) -> float:
        feats = features[name]
        head = train_head([feats[i] for i in train_index], [labels[i] for i in train_index],
                          config, dataset.classes)
        return accuracy(head, [feats[i] for i in test_index], [labels[i] for i in test_index])

    with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
        clean, augconv, plain = pool.map(run, ('clean', 'augconv', 'plain'))

    first = dataset.images[0]
    result = ParityResult(
        seed=config.seed,
        geometry={
            'alpha': kernels.alpha, 'm': first.m, 'p': kernels.p, 'beta': kernels.beta,
            'kappa': core.kappa, 'padding': Padding.parse(padding).value,
        },
        acc_clean=clean,
        acc_morphed_augconv=augconv,
        acc_morphed_plainC=plain,
    )
    logger.info("Parity experiment complete", extra={'details': result.to_json()})
    return result
