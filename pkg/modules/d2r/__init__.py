"""
d2r feature module

Data-to-row lowering: a convolution becomes one row vector times one matrix.
"""

from modules.d2r.lowering import (
    ConvMatrix,
    build_conv_matrix,
    conv_batch_via_d2r,
    conv_direct,
    conv_via_d2r,
    output_side,
    random_kernels,
)
from modules.d2r.tensors import (
    FeatureTensor,
    ImageTensor,
    KernelSet,
    Padding,
    reroll_features,
    reroll_image,
    unroll,
    unroll_batch,
)

__all__ = [
    'ConvMatrix', 'FeatureTensor', 'ImageTensor', 'KernelSet', 'Padding',
    'build_conv_matrix', 'conv_batch_via_d2r', 'conv_direct', 'conv_via_d2r',
    'output_side', 'random_kernels', 'reroll_features', 'reroll_image',
    'unroll', 'unroll_batch',
]
