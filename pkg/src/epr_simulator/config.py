# SPDX-License-Identifier: Apache-2.0

"""Config module used by the command line
Relates to working with the eprsimconfig.yml file, the environment
overrides and the resolved run configuration
"""

import math
import os
from dataclasses import asdict, dataclass
from typing import List, Mapping, Optional

import yaml
from schema import SchemaError

from errors import InvalidConfigError
from hv_models import Assignment, ModelKind, ModelSpec
from logger import configure_logger
from schema_validation import (
    CONFIG_SCHEMA,
    POSITIVE_INT_SCHEMA,
    RUN_CONFIG_SCHEMA,
    SchemaValidation,
)
from spin_core import Direction
from stats import NORMAL_APPROXIMATION_FLOOR

LOGGER = configure_logger(__name__)

DEFAULT_CONFIG_PATH = "./eprsimconfig.yml"
CONFIG_PATH_ENV = "EPRSIM_CONFIG"
SEED_ENV = "EPRSIM_SEED"
WORKERS_ENV = "EPRSIM_WORKERS"

DEFAULT_SEED = 20240101
DEFAULT_TRIALS = 100_000
DEFAULT_INEQUALITY_TRIALS = 1_000_000
DEFAULT_FORMAT = "json"
DEFAULT_SWEEP_FORMAT = "csv"
DEFAULT_WORKERS = 1


class Config:
    """
    Defaults for a run, resolved from the environment, eprsimconfig.yml and
    the built-in values, in that order of precedence. Command line flags
    override all of them.
    """

    def __init__(self, config_path=None, environ: Optional[Mapping] = None):
        self.environ = os.environ if environ is None else environ
        self.explicit_path = config_path or self.environ.get(CONFIG_PATH_ENV)
        self.config_path = self.explicit_path or DEFAULT_CONFIG_PATH
        self.config_contents = None
        self.defaults = {}
        self._load_config_file()

    def _load_config_file(self):
        """
        Reads the config file when present. Only a file that was asked for
        explicitly has to exist.
        """
        if not os.path.exists(self.config_path):
            if self.explicit_path:
                raise InvalidConfigError(
                    f"Config file {self.config_path} does not exist"
                ) from None
            LOGGER.debug(
                "No config file found at %s, using built-in defaults",
                self.config_path,
            )
            self.config_contents = {}
        else:
            LOGGER.info("Using config file: %s", self.config_path)
            try:
                with open(self.config_path, encoding="utf-8") as config:
                    self.config_contents = yaml.safe_load(config) or {}
            except yaml.YAMLError as error:
                raise InvalidConfigError(
                    f"{self.config_path} is not valid YAML: {error}"
                ) from None
        self._parse_config()

    def _parse_config(self):
        try:
            validated = SchemaValidation(
                CONFIG_SCHEMA, self.config_contents,
            ).validated
        except SchemaError as error:
            raise InvalidConfigError(
                f"{self.config_path} is invalid: {error.code}"
            ) from None
        self.defaults = validated.get("defaults") or {}

    def _from_environment(self, name: str) -> Optional[int]:
        value = self.environ.get(name)
        if value in (None, ""):
            return None
        try:
            return int(value)
        except ValueError:
            raise InvalidConfigError(
                f"Environment variable {name}={value!r} is not an integer"
            ) from None

    def seed(self) -> int:
        from_env = self._from_environment(SEED_ENV)
        if from_env is not None:
            return from_env
        return self.defaults.get("seed", DEFAULT_SEED)

    def workers(self) -> int:
        from_env = self._from_environment(WORKERS_ENV)
        if from_env is not None:
            return from_env
        return self.defaults.get("workers", DEFAULT_WORKERS)

    def trials(self, experiment: str) -> int:
        if "trials" in self.defaults:
            return self.defaults["trials"]
        if experiment == "inequality":
            return DEFAULT_INEQUALITY_TRIALS
        return DEFAULT_TRIALS

    def output_format(self, experiment: str) -> str:
        if "format" in self.defaults:
            return self.defaults["format"]
        if experiment == "sweep":
            return DEFAULT_SWEEP_FORMAT
        return DEFAULT_FORMAT


@dataclass(frozen=True)
class RunConfig:
    """
    Fully resolved and validated parameters of one command line run.
    Angles are kept in degrees, as typed, and converted on use.
    """
    # pylint: disable=too-many-instance-attributes
    experiment: str
    trials: int
    seed: int
    format: str
    out: str
    allow_small: bool
    workers: int = DEFAULT_WORKERS
    model: Optional[dict] = None
    settings_deg: Optional[dict] = None
    angles_deg: Optional[List[float]] = None
    ordering: Optional[str] = None
    epsilon: Optional[float] = None

    @classmethod
    def validated(cls, workers: int = DEFAULT_WORKERS, **fields) -> "RunConfig":
        data = {
            key: value for key, value in fields.items() if value is not None
        }
        try:
            data = SchemaValidation(RUN_CONFIG_SCHEMA, data).validated
        except SchemaError as error:
            raise InvalidConfigError(str(error.code)) from None
        if (
            data["experiment"] != "kink"
            and data["trials"] < NORMAL_APPROXIMATION_FLOOR
            and not data["allow_small"]
        ):
            raise InvalidConfigError(
                f"{data['trials']} trials requested, at least "
                f"{NORMAL_APPROXIMATION_FLOOR} are required. Pass "
                "--allow-small to run smaller samples."
            )
        try:
            workers = SchemaValidation(POSITIVE_INT_SCHEMA, workers).validated
        except SchemaError:
            raise InvalidConfigError(
                f"Workers must be a positive integer, got {workers!r}"
            ) from None
        return cls(workers=workers, **data)

    def radians(self, name: str) -> float:
        return math.radians(self.settings_deg[name])

    def direction(self, name: str) -> Direction:
        return Direction.planar(self.radians(name))

    def angles(self) -> List[float]:
        return [math.radians(angle) for angle in self.angles_deg]

    def model_spec(self) -> ModelSpec:
        kind = ModelKind(self.model["kind"])
        if kind is ModelKind.DEFINITE_ALIGNED:
            return ModelSpec.definite_aligned(
                Direction.planar(math.radians(self.model.get("axis_deg", 0.0))),
                Assignment(self.model.get("assignment", "+-")),
            )
        return ModelSpec(kind)

    def to_dict(self) -> dict:
        """Everything but the worker count, which never changes results."""
        result = asdict(self)
        result.pop("workers")
        return {key: value for key, value in result.items() if value is not None}
