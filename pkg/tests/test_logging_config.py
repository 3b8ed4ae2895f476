"""
Unit tests for the logging setup.
"""

import json
import logging
import sys
from pathlib import Path

# Add src to path
sys.path.insert(0, str(Path(__file__).parent.parent))

from src.utils import logging_config
from src.utils.logging_config import JSONFormatter, get_logger, initialize_logging


class TestLogging:
    """Test cases for logger setup and formatting."""

    def teardown_method(self):
        """Drop handlers installed by the test."""
        logging.getLogger().handlers = []
        logging_config._poset_logger = None

    def test_logger_names(self):
        """Test component logger names."""
        assert get_logger('mobius').name == 'mobius'
        assert get_logger('interval', 'build').name == 'interval.build'

    def test_json_formatter(self):
        """Test JSON log records."""
        record = logging.LogRecord('interval', logging.WARNING, __file__, 12, 'built %s', ('[1, 21]',), None)
        data = json.loads(JSONFormatter().format(record))
        assert data['level'] == 'WARNING'
        assert data['logger'] == 'interval'
        assert data['message'] == 'built [1, 21]'
        assert data['line'] == 12

    def test_console_only(self):
        """Test console-only logging."""
        poset_logger = initialize_logging(log_level=logging.DEBUG)
        handlers = logging.getLogger().handlers
        assert poset_logger.log_file is None
        assert len(handlers) == 1
        assert handlers[0].stream is sys.stderr

    def test_file_logging(self, tmp_path):
        """Test logging to a JSON file."""
        poset_logger = initialize_logging(log_dir=str(tmp_path / 'logs'), log_level=logging.INFO)
        get_logger('topology').info('shelling found')
        for handler in logging.getLogger().handlers:
            handler.flush()
        lines = poset_logger.log_file.read_text().splitlines()
        assert poset_logger.log_file.name.startswith('consec_poset_')
        assert json.loads(lines[-1])['message'] == 'shelling found'

    def test_set_level(self):
        """Test changing the log level."""
        poset_logger = initialize_logging(log_level=logging.INFO)
        poset_logger.set_level(logging.ERROR)
        assert logging.getLogger().level == logging.ERROR
        assert all(h.level == logging.ERROR for h in logging.getLogger().handlers)

    def test_component_loggers_are_cached(self):
        """Test that component loggers are cached."""
        poset_logger = initialize_logging()
        assert poset_logger.get_logger('cli') is poset_logger.get_logger('cli')
