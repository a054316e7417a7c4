"""
Environment Variables Loader

This module handles loading environment variables from a .env file
before the MoLe settings are read.
"""

import logging
import os

from dotenv import load_dotenv

logger = logging.getLogger(__name__)


def load_environment(env_file: str = '.env') -> bool:
    """
    Load environment variables from specified file.

    Variables already present in the process environment win over the file.

    Args:
        env_file (str): Path to the environment file

    Returns:
        bool: True if a file was loaded, False otherwise
    """
    if not os.path.exists(env_file):
        logger.debug(f"Environment file {env_file} not found")
        return False
    try:
        load_dotenv(env_file, override=False)
        logger.debug(f"Loaded environment from {env_file}")
        return True
    except Exception as e:
        logger.error(f"Error loading environment: {str(e)}")
        return False
