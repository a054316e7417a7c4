"""
Aug-Conv feature module

The augmented first convolution that extracts clean-equivalent features
from morphed data.
"""

from modules.augconv.layer import (
    AugConvMatrix,
    ChannelPermutation,
    apply_augconv,
    apply_augconv_batch,
    build_augconv,
    inverse_conv_recover,
    permute_column_groups,
    random_permutation,
    unpermute_features,
)
from modules.augconv.overhead import DataOverhead, data_overhead, dev_mac_overhead
from modules.augconv.sidecar import SIDECAR_KEYS, load_augconv, save_augconv, sidecar_path

__all__ = [
    'AugConvMatrix', 'ChannelPermutation', 'DataOverhead', 'SIDECAR_KEYS',
    'apply_augconv', 'apply_augconv_batch', 'build_augconv', 'data_overhead',
    'dev_mac_overhead', 'inverse_conv_recover', 'load_augconv',
    'permute_column_groups', 'random_permutation', 'save_augconv',
    'sidecar_path', 'unpermute_features',
]
