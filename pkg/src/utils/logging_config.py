"""
Logging configuration for the consecutive pattern poset toolkit.
Provides component-level loggers, coloured console output on stderr and
optional JSON-lines log files.
"""

import json
import logging
import sys
from datetime import datetime, timezone
from pathlib import Path
from typing import Optional

import colorlog


class JSONFormatter(logging.Formatter):
    """Format log records as one JSON object per line."""

    def format(self, record):
        log_data = {
            'timestamp': datetime.now(timezone.utc).isoformat(),
            'level': record.levelname,
            'logger': record.name,
            'message': record.getMessage(),
            'module': record.module,
            'function': record.funcName,
            'line': record.lineno
        }

        if hasattr(record, 'context'):
            log_data['context'] = record.context

        if record.exc_info:
            log_data['exception'] = self.formatException(record.exc_info)

        return json.dumps(log_data, default=str)


class PosetLogger:
    """Centralized logging manager."""

    def __init__(self, log_dir: Optional[str] = None, log_level=logging.INFO):
        """
        Initialize logging system.

        Args:
            log_dir: Directory for JSON log files; None disables file logging
            log_level: Minimum log level (DEBUG, INFO, WARNING, ERROR)
        """
        self.log_level = log_level
        self.log_file = None
        if log_dir:
            log_path = Path(log_dir)
            log_path.mkdir(parents=True, exist_ok=True)
            self.log_file = log_path / f"consec_poset_{datetime.now().strftime('%Y%m%d')}.log"

        self._setup_root_logger()
        self.component_loggers = {}

    def _setup_root_logger(self):
        """Configure root logger with console and optional file handlers."""
        root_logger = logging.getLogger()
        root_logger.setLevel(self.log_level)
        root_logger.handlers = []

        # stdout carries command output, so the console handler uses stderr
        console_handler = logging.StreamHandler(sys.stderr)
        console_handler.setLevel(self.log_level)
        console_handler.setFormatter(colorlog.ColoredFormatter(
            '%(log_color)s[%(asctime)s] [%(levelname)s] [%(name)s]%(reset)s %(message)s',
            datefmt='%H:%M:%S',
            log_colors={
                'DEBUG': 'cyan',
                'INFO': 'white',
                'WARNING': 'yellow',
                'ERROR': 'red',
                'CRITICAL': 'bold_red',
            }
        ))
        root_logger.addHandler(console_handler)

        if self.log_file is not None:
            file_handler = logging.FileHandler(self.log_file)
            file_handler.setLevel(self.log_level)
            file_handler.setFormatter(JSONFormatter())
            root_logger.addHandler(file_handler)

    def get_logger(self, component_name: str, qualifier: Optional[str] = None) -> logging.Logger:
        """
        Get or create a logger for a specific component.

        Args:
            component_name: Name of component (interval, mobius, topology, ...)
            qualifier: Optional sub-component name

        Returns:
            logging.Logger instance
        """
        logger_name = component_name
        if qualifier:
            logger_name = f"{component_name}.{qualifier}"

        if logger_name not in self.component_loggers:
            self.component_loggers[logger_name] = logging.getLogger(logger_name)

        return self.component_loggers[logger_name]

    def set_level(self, level):
        """Change log level dynamically."""
        self.log_level = level
        logging.getLogger().setLevel(level)
        for handler in logging.getLogger().handlers:
            handler.setLevel(level)


_poset_logger = None


def initialize_logging(log_dir: Optional[str] = None, log_level=logging.INFO) -> PosetLogger:
    """
    Initialize the global logging system.

    Args:
        log_dir: Directory for log files (None for console only)
        log_level: Minimum log level

    Returns:
        PosetLogger instance
    """
    global _poset_logger
    _poset_logger = PosetLogger(log_dir, log_level)
    return _poset_logger


def get_logger(component_name: str, qualifier: Optional[str] = None) -> logging.Logger:
    """
    Get a logger for a component.

    Library code never configures handlers itself: until the CLI calls
    initialize_logging, records propagate to whatever the host set up.
    """
    if _poset_logger is None:
        name = f"{component_name}.{qualifier}" if qualifier else component_name
        return logging.getLogger(name)
    return _poset_logger.get_logger(component_name, qualifier)
