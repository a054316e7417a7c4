"""
Unit tests for logging system.
"""
import json
import logging

import pytest

from config import load_settings
from core.log_config import MoleLogger, StructuredFormatter, configure_logging, log_command


@pytest.mark.unit
class TestLoggingSystem:
    """Test suite for logging system functionality."""

    def test_console_only_by_default(self, tmp_path):
        """Without file logging no log directory is created."""
        # Test
        MoleLogger(log_dir=str(tmp_path / 'logs'), level='WARNING')

        # Verify
        assert not (tmp_path / 'logs').exists()
        assert len(logging.getLogger().handlers) == 1
        assert logging.getLogger().handlers[0].level == logging.WARNING

    def test_file_handlers(self, tmp_path):
        """File logging writes debug, info and error files."""
        # Setup
        MoleLogger(log_dir=str(tmp_path / 'logs'), level='ERROR', to_file=True)

        # Test
        logging.getLogger('mole.test').info("hello", extra={'details': {'q': 4}})
        for handler in logging.getLogger().handlers:
            handler.flush()

        # Verify
        info = (tmp_path / 'logs' / 'info.log').read_text().strip().splitlines()
        record = json.loads(info[-1])
        assert record['message'] == 'hello'
        assert record['details'] == {'q': 4}
        assert (tmp_path / 'logs' / 'error.log').read_text() == ''

    def test_reconfiguration_does_not_stack(self, tmp_path):
        MoleLogger(log_dir=str(tmp_path))
        MoleLogger(log_dir=str(tmp_path))
        assert len(logging.getLogger().handlers) == 1

    def test_configure_from_settings(self, monkeypatch, tmp_path):
        monkeypatch.setenv('MOLE_LOG_LEVEL', 'DEBUG')
        monkeypatch.setenv('MOLE_LOG_DIR', str(tmp_path / 'logs'))
        active = configure_logging(load_settings())
        assert active.level == logging.DEBUG

    def test_structured_formatter(self):
        """Records render as JSON with their details."""
        record = logging.LogRecord('mole', logging.INFO, __file__, 10, "msg %s", ('x',), None)
        record.details = {'kappa': 2}
        data = json.loads(StructuredFormatter().format(record))
        assert data['message'] == 'msg x'
        assert data['details'] == {'kappa': 2}
        assert data['level'] == 'INFO'

    def test_log_command(self, caplog):
        """Command lifecycle entries carry the command and status."""
        logger = logging.getLogger('mole.commands')
        with caplog.at_level(logging.INFO, logger='mole.commands'):
            log_command(logger, 'keygen', 'started', {'persona': 'provider'})
        record = caplog.records[-1]
        assert record.details['command'] == 'keygen'
        assert record.details['status'] == 'started'
        assert record.details['persona'] == 'provider'
