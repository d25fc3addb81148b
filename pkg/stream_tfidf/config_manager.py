#!/usr/bin/env python3
"""
Configuration Manager for the benchmark harness
Loads, validates and saves benchmark and synthetic-corpus configurations
"""

import json
import logging
import shutil
from datetime import datetime
from pathlib import Path
from typing import Any, Dict, Optional, Tuple, Type, TypeVar

from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from .stream_driver import StreamMode
from .tfidf_core import Weighting

logger = logging.getLogger(__name__)

ModelT = TypeVar('ModelT', bound=BaseModel)


class SyntheticSpec(BaseModel):
    """Parameters of a generated Zipf corpus"""

    model_config = ConfigDict(extra='forbid')

    n_snapshots: int = Field(default=20, gt=0)
    docs_per_snapshot: int = Field(default=15, gt=0)
    vocab_size: int = Field(default=5000, gt=0)
    doc_length_mean: float = Field(default=20.0, gt=0)
    zipf_exponent: float = Field(default=0.5, gt=0)
    seed: int = Field(default=42, ge=0)
    revisit_probability: float = Field(default=0.0, ge=0.0, lt=1.0)
    start_date: str = "2015-09-01"


class BenchConfig(BaseModel):
    """Benchmark run settings"""

    model_config = ConfigDict(extra='forbid')

    input_path: Optional[str] = None
    synthetic_spec_path: Optional[str] = None
    seed: Optional[int] = Field(default=None, ge=0)  # overrides the synthetic spec seed
    mode: StreamMode = StreamMode.ODS
    warmup_days: int = Field(default=1, ge=1)
    weighting: Weighting = Weighting.TF_IDF
    stoplist_path: Optional[str] = None
    min_token_length: int = Field(default=2, ge=1)
    output_dir: str = "results"
    repetitions: int = Field(default=1, ge=1)
    compare_batch: bool = True
    cache_vectors: bool = True
    refresh_every: int = Field(default=0, ge=0)
    audit_staleness: bool = False

    @model_validator(mode='after')
    def _check_source(self) -> 'BenchConfig':
        if not self.input_path and not self.synthetic_spec_path:
            raise ValueError("either 'input_path' or 'synthetic_spec_path' is required")
        if self.input_path and self.synthetic_spec_path:
            raise ValueError("'input_path' and 'synthetic_spec_path' are mutually exclusive")
        return self


def _format_validation_error(error: ValidationError) -> str:
    messages = []
    for item in error.errors():
        location = '.'.join(str(part) for part in item['loc']) or 'config'
        messages.append(f"'{location}': {item['msg']}")
    return '; '.join(messages)


class ConfigManager:
    """Manages configuration files with validation and backup"""

    def __init__(self, backup_dir: Optional[str] = None, max_backups: int = 10):
        self.backup_dir = Path(backup_dir) if backup_dir else None
        self.max_backups = max_backups

    def validate_config(self, config: Dict[str, Any],
                        model: Type[BaseModel] = BenchConfig) -> Tuple[bool, str]:
        """
        Validate a configuration dictionary against a model

        Returns:
            Tuple of (is_valid, error_message)
        """
        if not isinstance(config, dict):
            return False, "Configuration must be a JSON object"
        try:
            model.model_validate(config)
        except ValidationError as e:
            return False, _format_validation_error(e)
        return True, ""

    def _load(self, config_path, model: Type[ModelT]) -> ModelT:
        config_path = Path(config_path)

        if not config_path.exists():
            raise FileNotFoundError(f"Configuration file not found: {config_path}")

        with open(config_path, 'r', encoding='utf-8') as f:
            config = json.load(f)

        is_valid, error_msg = self.validate_config(config, model)
        if not is_valid:
            raise ValueError(f"Invalid configuration {config_path}: {error_msg}")

        return model.model_validate(config)

    def load_bench_config(self, config_path) -> BenchConfig:
        """
        Load benchmark configuration from JSON file

        Raises:
            FileNotFoundError: If config file doesn't exist
            json.JSONDecodeError: If config file is invalid JSON
            ValueError: If config fails validation
        """
        return self._load(config_path, BenchConfig)

    def load_synthetic_spec(self, spec_path) -> SyntheticSpec:
        """Load a synthetic corpus spec (same errors as load_bench_config)"""
        return self._load(spec_path, SyntheticSpec)

    def save_config(self, config: BaseModel, config_path, create_backup: bool = True) -> None:
        """
        Save a configuration model to JSON file

        Args:
            config: Configuration model
            config_path: Path to save configuration
            create_backup: If True, backup existing file before overwriting
        """
        config_path = Path(config_path)

        if create_backup and config_path.exists():
            self.backup_config(config_path)

        config_path.parent.mkdir(parents=True, exist_ok=True)
        with open(config_path, 'w', encoding='utf-8') as f:
            json.dump(config.model_dump(mode='json'), f, indent=2)

    def backup_config(self, config_path: Path) -> Path:
        """
        Create timestamped backup of configuration file

        Returns:
            Path to backup file
        """
        backup_dir = self.backup_dir or config_path.parent / "backup"
        backup_dir.mkdir(parents=True, exist_ok=True)

        timestamp = datetime.now().strftime("%Y%m%d_%H%M%S_%f")
        backup_path = backup_dir / f"{config_path.stem}_{timestamp}.json"
        shutil.copy2(config_path, backup_path)

        backups = sorted(backup_dir.glob(f"{config_path.stem}_*.json"), key=lambda p: p.stat().st_mtime)
        while len(backups) > self.max_backups:
            backups.pop(0).unlink()

        logger.debug(f"Backed up {config_path} to {backup_path}")
        return backup_path
