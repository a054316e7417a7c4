"""
Morphing feature module

Secret block-diagonal morphing of unrolled data.
"""

from modules.morphing.core import (
    DpMacCount,
    MorphCore,
    QChoice,
    build_morph_matrix,
    choose_q,
    dp_mac_count,
    generate_core,
    identity_core,
    morph,
    morph_batch,
    stream_morph,
    unmorph,
    unmorph_batch,
)
from modules.morphing.secret_store import MorphSecret, load_secret, save_secret

__all__ = [
    'DpMacCount', 'MorphCore', 'MorphSecret', 'QChoice',
    'build_morph_matrix', 'choose_q', 'dp_mac_count', 'generate_core',
    'identity_core', 'load_secret', 'morph', 'morph_batch', 'save_secret', 'stream_morph',
    'unmorph', 'unmorph_batch',
]
