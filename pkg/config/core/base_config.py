"""
Versioned JSON documents for the artifacts the provider keeps (secret
files). Includes required-key validation, version checks and atomic saves
through core.file_formats.
"""
import logging
from pathlib import Path
from typing import Any, Dict, Iterable

from core.error_handler import ConfigurationError
from core.file_formats import read_json, write_json

logger = logging.getLogger(__name__)


class VersionedDocument:
    """
    JSON document carrying a ``version`` field.

    Callers declare the required keys and the schema version they read and
    write; a file at any other version is rejected.
    """

    def __init__(self, path: str, required_keys: Iterable[str], version: int = 1):
        """
        Initialize the document.

        Args:
            path: Path to the JSON file
            required_keys: Keys every valid document must contain
            version: Version of the document schema
        """
        self.path = Path(path)
        self.required_keys = tuple(required_keys)
        self.version = version
        self.data: Dict[str, Any] = {}

    def load(self) -> Dict[str, Any]:
        """
        Load and validate the document.

        Returns:
            Dict[str, Any]: The document contents

        Raises:
            FileFormatError: If the file is missing or not a JSON object
            ConfigurationError: If required keys are missing or the version differs
        """
        data = read_json(self.path)
        found = data.get('version', 0)
        if found != self.version:
            raise ConfigurationError(
                f"Unsupported document version {found} in {self.path.name} (expected {self.version})"
            )
        self.data = data
        self.validate()
        return self.data

    def validate(self) -> None:
        """
        Validate the current document.

        Raises:
            ConfigurationError: If a required key is missing
        """
        missing = [key for key in self.required_keys if key not in self.data]
        if missing:
            raise ConfigurationError(
                f"Document {self.path.name} is missing required fields: {', '.join(missing)}"
            )

    def save(self, data: Dict[str, Any]) -> None:
        """
        Validate and write the document atomically; ``version`` is set automatically.
        """
        self.data = {'version': self.version, **{k: v for k, v in data.items() if k != 'version'}}
        self.validate()
        write_json(self.path, self.data)
        logger.debug(f"Saved {self.path.name} (version {self.version})")
