"""src/core/config.py."""

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from pathlib import Path
from typing import Any, List, Literal, Optional
from pydantic_settings import BaseSettings, SettingsConfigDict
from pydantic import Field, computed_field

from src.core.exceptions import ResourceNotFoundError, ValidationFailedError

TOOLKIT_VERSION = "0.1.0"
LEXICON_DIR = Path(__file__).resolve().parent.parent / "apps" / "cuescan" / "lexicons"


class Settings(BaseSettings):
    """
    Toolkit configuration.
    Reads NEGTOOL_* environment variables and the optional .env file.
    """

    model_config = SettingsConfigDict(
        env_prefix="NEGTOOL_", env_file=".env", env_ignore_empty=True, extra="ignore"
    )

    OUTPUT_DIR: Path = Path("negtool-out")
    LOG_LEVEL: str = "INFO"

    SUBWORD_MARKER: str = "@@"
    SUBWORD_MARKER_POSITION: Literal["suffix", "prefix"] = "suffix"
    SPECIAL_TOKENS: List[str] = ["</s>", "<s>"]

    ATTENTION_ROW_TOLERANCE: float = 1e-4
    HEAD_MODE: Literal["avg", "max"] = "avg"
    FLOW_LAYERS: List[int] = [2, 4, 6]
    DECODER_MIXING: Literal["split", "full"] = "split"

    PROBE_HIDDEN: int = Field(default=512, ge=1)
    PROBE_EPOCHS: int = Field(default=100, ge=1)
    PROBE_SEEDS: int = Field(default=5, ge=1)
    PROBE_BASE_SEED: int = 0
    PROBE_LEARNING_RATE: float = Field(default=1e-3, gt=0)
    PROBE_POOLING: Literal["word", "subword"] = "word"

    DEFAULT_SEED: int = 0
    JOBS: int = Field(default=1, ge=1)

    EN_LEXICON: Path = LEXICON_DIR / "en.json"
    ZH_LEXICON: Path = LEXICON_DIR / "zh.json"

    NEGPAR_DIR: Optional[Path] = None

    @computed_field
    @property
    def PROBE_SEED_VALUES(self) -> List[int]:  # pylint: disable=invalid-name
        """
        The explicit seed list used by probe training.
        """
        return [self.PROBE_BASE_SEED + i for i in range(self.PROBE_SEEDS)]


def load_settings(config_path: Optional[Path] = None, **overrides: Any) -> Settings:
    """
    Builds Settings from an optional TOML file plus flag overrides.
    Flags win over the file, the file wins over the environment.
    """
    values: dict[str, Any] = {}
    if config_path is not None:
        try:
            with open(config_path, "rb") as fh:
                values.update({k.upper(): v for k, v in tomllib.load(fh).items()})
        except FileNotFoundError as e:
            raise ResourceNotFoundError(f"Config not found: {config_path}") from e
        except tomllib.TOMLDecodeError as e:
            raise ValidationFailedError(f"{config_path}: {e}") from e
    values.update({k: v for k, v in overrides.items() if v is not None})
    return Settings(**values)


settings = Settings()
