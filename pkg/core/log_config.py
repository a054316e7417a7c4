"""
Logging System

This module implements the structured logging system for the MoLe toolkit.

The Logging System is responsible for:
1. Structured log output in JSON format
2. Optional log file rotation and management
3. Console output on stderr so command reports on stdout stay clean
4. Command and error tracking

Critical:
- Console output must go to stderr
- File logging is opt-in (MOLE_LOG_TO_FILE)
- Secret material must never be passed in log details

Classes:
    StructuredFormatter: JSON log formatter
    MoleLogger: Main logging system
"""

import json
import logging
import logging.handlers
from datetime import datetime
from pathlib import Path
from typing import Any, Dict, Optional

SIMPLE_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'


class StructuredFormatter(logging.Formatter):
    """
    Formatter that outputs logs in a structured JSON format.

    The output includes:
    - Standard log fields (time, level, message)
    - Exception information if present
    - Custom fields passed through ``extra={'details': ...}``
    - Source location (module, function, line)
    """

    def format(self, record: logging.LogRecord) -> str:
        data = {
            'timestamp': datetime.fromtimestamp(record.created).isoformat(),
            'level': record.levelname,
            'logger': record.name,
            'message': record.getMessage(),
            'module': record.module,
            'function': record.funcName,
            'line': record.lineno
        }

        if record.exc_info and record.exc_info[0] is not None:
            data['exception'] = {
                'type': record.exc_info[0].__name__,
                'message': str(record.exc_info[1]),
                'traceback': self.formatException(record.exc_info)
            }

        if hasattr(record, 'details'):
            data['details'] = record.details

        return json.dumps(data, default=str)


class MoleLogger:
    """
    Main logging system for the toolkit.

    Attributes:
        log_dir (Path): Directory for log files
        level (int): Console log level
        to_file (bool): Whether rotating JSON log files are written
        max_bytes (int): Maximum log file size
        backup_count (int): Number of backup files
    """

    def __init__(
        self,
        log_dir: str = 'logs',
        level: str = 'INFO',
        to_file: bool = False,
        max_bytes: int = 10485760,  # 10MB
        backup_count: int = 5
    ):
        self.log_dir = Path(log_dir)
        self.level = logging.getLevelName(level.upper()) if isinstance(level, str) else level
        if not isinstance(self.level, int):
            self.level = logging.INFO
        self.to_file = to_file
        self.max_bytes = max_bytes
        self.backup_count = backup_count

        self._configure_root_logger()
        self._setup_handlers()

    def _configure_root_logger(self) -> None:
        """Reset the root logger so repeated configuration does not stack handlers."""
        root = logging.getLogger()
        root.setLevel(logging.DEBUG)
        for handler in root.handlers[:]:
            root.removeHandler(handler)

    def _setup_handlers(self) -> None:
        """
        Set up log handlers.

        Creates:
        - Console output (configured level, plain format, stderr)
        - When enabled, rotating debug/info/error JSON files
        """
        root_logger = logging.getLogger()

        console_handler = logging.StreamHandler()
        console_handler.setLevel(self.level)
        console_handler.setFormatter(logging.Formatter(SIMPLE_FORMAT))
        root_logger.addHandler(console_handler)

        if not self.to_file:
            return

        self.log_dir.mkdir(parents=True, exist_ok=True)
        structured_formatter = StructuredFormatter()
        for filename, file_level in (
            ('debug.log', logging.DEBUG),
            ('info.log', logging.INFO),
            ('error.log', logging.ERROR),
        ):
            handler = logging.handlers.RotatingFileHandler(
                self.log_dir / filename,
                maxBytes=self.max_bytes,
                backupCount=self.backup_count
            )
            handler.setLevel(file_level)
            handler.setFormatter(structured_formatter)
            root_logger.addHandler(handler)

    def log_command(
        self,
        logger: logging.Logger,
        command_name: str,
        status: str,
        details: Optional[Dict[str, Any]] = None
    ) -> None:
        """
        Log a command execution.

        Args:
            logger (logging.Logger): Logger instance
            command_name (str): Name of the subcommand
            status (str): One of 'started', 'completed', 'failed'
            details (dict, optional): Additional command details
        """
        log_data = {'command': command_name, 'status': status}
        if details:
            log_data.update(details)
        logger.info('Command execution', extra={'details': log_data})


_active: Optional[MoleLogger] = None


def configure_logging(settings) -> MoleLogger:
    """
    Configure logging from a Settings instance.

    Args:
        settings: config.core.settings.Settings

    Returns:
        MoleLogger: The active logging system
    """
    global _active
    _active = MoleLogger(
        log_dir=settings.LOG_DIR,
        level=settings.LOG_LEVEL,
        to_file=settings.LOG_TO_FILE,
        max_bytes=settings.LOG_MAX_BYTES,
        backup_count=settings.LOG_BACKUP_COUNT
    )
    return _active


def log_command(logger: logging.Logger, command_name: str, status: str,
                details: Optional[Dict[str, Any]] = None) -> None:
    """Module-level shortcut that works with or without configure_logging()."""
    if _active is not None:
        _active.log_command(logger, command_name, status, details)
    else:
        logger.info('Command execution',
                    extra={'details': {'command': command_name, 'status': status, **(details or {})}})
