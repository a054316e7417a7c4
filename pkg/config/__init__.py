"""
Configuration package for the MoLe toolkit.
Exposes the settings loader and the versioned JSON document base.
"""

from config.core.base_config import VersionedDocument
from config.core.settings import Settings, load_settings
from config.environment.environment import load_environment

__all__ = [
    'VersionedDocument',
    'Settings',
    'load_settings',
    'load_environment'
]
