"""Configuration settings for mamppi."""
from functools import lru_cache
from pathlib import Path
from typing import Any, Optional, Type, TypeVar, Union

import yaml
from dotenv import load_dotenv
from pydantic import BaseModel, ConfigDict, ValidationError
from pydantic_settings import BaseSettings

from .core.errors import ConfigurationError

ModelT = TypeVar("ModelT", bound=BaseModel)


class Settings(BaseSettings):
    """Process-level settings."""

    # Harness settings
    workers: int = 1
    output_dir: str = "results"

    # Logging settings
    log_level: str = "INFO"
    log_json: bool = True

    # Observability settings
    metrics_port: Optional[int] = None
    tracing_enabled: bool = False

    model_config = ConfigDict(
        env_prefix="MAMPPI_",
        case_sensitive=False
    )


@lru_cache()
def get_settings() -> Settings:
    """Get cached settings instance."""
    load_dotenv()
    return Settings()


def field_paths(error: ValidationError) -> list:
    """Dotted paths of every field a validation error complains about."""
    return [".".join(str(part) for part in item["loc"]) or "<root>" for item in error.errors()]


def parse_model(model: Type[ModelT], data: Any, source: str = "configuration") -> ModelT:
    """Validate ``data`` against ``model``, raising ConfigurationError on failure."""
    try:
        return model.model_validate(data)
    except ValidationError as e:
        raise ConfigurationError(f"Invalid {source}", fields=field_paths(e)) from e


def load_yaml_model(model: Type[ModelT], path: Union[str, Path]) -> ModelT:
    """Read a YAML document and validate it against ``model``."""
    path = Path(path)
    if not path.exists():
        raise ConfigurationError(f"Configuration file {path} does not exist", fields=["<file>"])
    with open(path, "r") as f:
        try:
            data = yaml.safe_load(f) or {}
        except yaml.YAMLError as e:
            raise ConfigurationError(f"Configuration file {path} is not valid YAML", fields=["<file>"]) from e
    return parse_model(model, data, source=str(path))
