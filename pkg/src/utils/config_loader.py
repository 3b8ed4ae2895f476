"""
Configuration loader for the consecutive pattern poset toolkit.

Precedence, lowest first: built-in defaults, config/poset.yaml,
CONSEC_POSET_* environment variables, command-line flags.
"""

import os
from dataclasses import dataclass, replace, asdict
from pathlib import Path
from typing import Dict, List, Mapping, Optional

import yaml

from .logging_config import get_logger
from ..core.errors import ConfigError


ENV_PREFIX = 'CONSEC_POSET_'
OUTPUT_FORMATS = ('json', 'csv', 'text')

DEFAULTS = {
    'seed': 20240607,
    'threads': 1,
    'output': {
        'format': 'json',
        'compact': False,
    },
    'caps': {
        'max_chains': 1_000_000,
        'max_cl_chains': 500,
        'max_oracle_elements': 22,
        'max_exhaustive_n': 10,
        'max_mobius_elements': 20_000,
        'max_shelling_facets': 8,
        'max_permutation_length': 64,
    },
    'sampling': {
        'chunk_size': 4096,
    },
    'logging': {
        'level': 'INFO',
        'log_dir': None,
    },
}

# environment variable suffix -> RunConfig field
ENV_FIELDS = {
    'SEED': 'seed',
    'THREADS': 'threads',
    'FORMAT': 'output_format',
    'COMPACT': 'compact',
    'MAX_CHAINS': 'max_chains',
    'MAX_CL_CHAINS': 'max_cl_chains',
    'MAX_ORACLE': 'max_oracle_elements',
    'MAX_EXHAUSTIVE_N': 'max_exhaustive_n',
    'MAX_MOBIUS_ELEMENTS': 'max_mobius_elements',
    'MAX_SHELLING_FACETS': 'max_shelling_facets',
    'LOG_LEVEL': 'log_level',
    'LOG_DIR': 'log_dir',
}

POSITIVE_INT_FIELDS = (
    'threads', 'max_chains', 'max_cl_chains', 'max_oracle_elements',
    'max_exhaustive_n', 'max_mobius_elements', 'max_shelling_facets',
    'max_permutation_length', 'chunk_size',
)


@dataclass(frozen=True)
class RunConfig:
    """Resolved run configuration shared by the library and the CLI."""
    seed: int = DEFAULTS['seed']
    threads: int = DEFAULTS['threads']
    output_format: str = DEFAULTS['output']['format']
    compact: bool = DEFAULTS['output']['compact']
    max_chains: int = DEFAULTS['caps']['max_chains']
    max_cl_chains: int = DEFAULTS['caps']['max_cl_chains']
    max_oracle_elements: int = DEFAULTS['caps']['max_oracle_elements']
    max_exhaustive_n: int = DEFAULTS['caps']['max_exhaustive_n']
    max_mobius_elements: int = DEFAULTS['caps']['max_mobius_elements']
    max_shelling_facets: int = DEFAULTS['caps']['max_shelling_facets']
    max_permutation_length: int = DEFAULTS['caps']['max_permutation_length']
    chunk_size: int = DEFAULTS['sampling']['chunk_size']
    log_level: str = DEFAULTS['logging']['level']
    log_dir: Optional[str] = DEFAULTS['logging']['log_dir']

    def __post_init__(self):
        problems = config_problems(self)
        if problems:
            raise ConfigError("; ".join(problems))

    def with_overrides(self, **overrides) -> 'RunConfig':
        """Return a copy with the non-None overrides applied."""
        changes = {k: v for k, v in overrides.items() if v is not None}
        return replace(self, **changes) if changes else self

    def to_dict(self) -> Dict:
        return asdict(self)


def config_problems(config: RunConfig) -> List[str]:
    """List every invariant violation of a RunConfig."""
    problems = []
    for name in POSITIVE_INT_FIELDS:
        value = getattr(config, name)
        if isinstance(value, bool) or not isinstance(value, int) or value <= 0:
            problems.append(f"{name} must be a positive integer, got {value!r}")
    if not isinstance(config.seed, int) or isinstance(config.seed, bool) or config.seed < 0:
        problems.append(f"seed must be a non-negative integer, got {config.seed!r}")
    if config.output_format not in OUTPUT_FORMATS:
        problems.append(f"output format must be one of {OUTPUT_FORMATS}, got {config.output_format!r}")
    return problems


def _flatten(raw: Mapping) -> Dict:
    """Map the nested YAML layout onto RunConfig field names."""
    output = raw.get('output') or {}
    caps = raw.get('caps') or {}
    sampling = raw.get('sampling') or {}
    logging_cfg = raw.get('logging') or {}

    flat = {
        'seed': raw.get('seed'),
        'threads': raw.get('threads'),
        'output_format': output.get('format'),
        'compact': output.get('compact'),
        'chunk_size': sampling.get('chunk_size'),
        'log_level': logging_cfg.get('level'),
        'log_dir': logging_cfg.get('log_dir'),
    }
    for name in ('max_chains', 'max_cl_chains', 'max_oracle_elements', 'max_exhaustive_n',
                 'max_mobius_elements', 'max_shelling_facets', 'max_permutation_length'):
        flat[name] = caps.get(name)
    return {k: v for k, v in flat.items() if v is not None}


def _coerce_env(field: str, text: str):
    if field in ('output_format', 'log_level', 'log_dir'):
        return text
    if field == 'compact':
        return text.strip().lower() in ('1', 'true', 'yes', 'on')
    try:
        return int(text)
    except ValueError:
        raise ConfigError(f"{ENV_PREFIX}{field.upper()} must be an integer, got {text!r}")


class ConfigLoader:
    """Loads and validates configuration files."""

    def __init__(self, config_dir: str = 'config', environ: Optional[Mapping[str, str]] = None):
        """
        Initialize config loader.

        Args:
            config_dir: Directory containing poset.yaml
            environ: Environment mapping (defaults to os.environ)
        """
        self.config_dir = Path(config_dir)
        self.environ = os.environ if environ is None else environ
        self.logger = get_logger('config_loader')

        self._poset_config = None

    def load_poset_config(self, reload: bool = False) -> Dict:
        """
        Load the raw poset configuration.

        Args:
            reload: Force reload from file

        Returns:
            Contents of the `poset:` section (empty when the file is absent)
        """
        if self._poset_config is not None and not reload:
            return self._poset_config

        config_file = self.config_dir / 'poset.yaml'
        if not config_file.exists():
            self.logger.debug(f"No config file at {config_file}, using defaults")
            self._poset_config = {}
            return self._poset_config

        try:
            with open(config_file, 'r') as f:
                document = yaml.safe_load(f) or {}
        except yaml.YAMLError as e:
            self.logger.error(f"Failed to parse {config_file}: {e}")
            raise ConfigError(f"invalid YAML in {config_file}: {e}")

        if not isinstance(document, dict) or not isinstance(document.get('poset', {}), dict):
            raise ConfigError(f"{config_file} must contain a 'poset' mapping")

        self._poset_config = document.get('poset') or {}
        self.logger.debug(f"Loaded poset config from {config_file}")
        return self._poset_config

    def environment_overrides(self) -> Dict:
        """Collect CONSEC_POSET_* overrides."""
        overrides = {}
        for suffix, field in ENV_FIELDS.items():
            text = self.environ.get(ENV_PREFIX + suffix)
            if text is not None and text != '':
                overrides[field] = _coerce_env(field, text)
        return overrides

    def build_run_config(self, **cli_overrides) -> RunConfig:
        """
        Resolve the effective RunConfig.

        Args:
            **cli_overrides: RunConfig fields set on the command line (None = unset)

        Returns:
            Validated RunConfig
        """
        values = _flatten(self.load_poset_config())
        values.update(self.environment_overrides())
        values.update({k: v for k, v in cli_overrides.items() if v is not None})
        config = RunConfig(**values)
        self.logger.debug(f"Run config resolved: {config}")
        return config

    def validate_config(self) -> bool:
        """
        Validate the configuration file and environment.

        Returns:
            True if the resolved configuration is valid
        """
        try:
            self.build_run_config()
            self.logger.info("Configuration validated successfully")
            return True
        except (ConfigError, TypeError) as e:
            self.logger.error(f"Config validation failed: {e}")
            return False
