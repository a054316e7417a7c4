"""
Toy training feature module

A frozen first layer with a trainable softmax head, used to compare clean
training with training on morphed data.
"""

from modules.toytrain.dataset import SyntheticDataset, box_kernels, gen_synthetic, split, split_indices
from modules.toytrain.trainer import LinearHead, TrainConfig, accuracy, flatten, predict, train_head
from modules.toytrain.experiment import (
    ParityResult,
    ParityTask,
    default_task,
    parity_experiment,
    parity_features,
)

__all__ = [
    'LinearHead', 'ParityResult', 'ParityTask', 'SyntheticDataset', 'TrainConfig',
    'accuracy', 'box_kernels', 'default_task', 'flatten', 'gen_synthetic',
    'parity_experiment', 'parity_features', 'predict', 'split', 'split_indices',
    'train_head',
]
