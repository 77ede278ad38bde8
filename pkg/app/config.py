"""Application configuration using Pydantic settings.

This module defines the settings schema for the classifier and loads
configuration from environment variables via a .env file.
"""
from pydantic_settings import BaseSettings
from pydantic import ConfigDict
from typing import Optional


class Settings(BaseSettings):
    """Settings loaded from environment variables.

    All settings have defaults; any of them may be overridden through the
    environment (e.g. ``CLOSURE_CAP=8192``) or a .env file.
    """

    # Search limits
    closure_cap: int = 4096  #: Maximum group order produced by closure before giving up
    rank_cap: int = 4  #: Largest bundle rank accepted by the enumerator
    frame_search_bound: int = 2  #: Entry bound for unimodular frame candidates

    # Sampling
    edge_sample_denominator: int = 24  #: Denominator of the rational edge sampling grid

    # Reports
    schema_version: str = "1"  #: Version tag written into every report
    golden_tables_path: Optional[str] = None  #: Override for the shipped golden tables CSV

    # Logging
    log_level: str = "INFO"  #: Root logging level used by the CLI

    model_config = ConfigDict(
        env_file=".env",  #: Path to .env file
        case_sensitive=False,  #: Environment variable names are case-insensitive
    )


# Global settings instance
settings = Settings()
