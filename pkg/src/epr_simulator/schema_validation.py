# SPDX-License-Identifier: Apache-2.0

"""
Schema Validation for the config file and resolved run configurations
"""

from schema import Schema, And, Use, Or, Optional

# Simulator imports
from hv_models import Assignment, ModelKind, Ordering
from logger import configure_logger

LOGGER = configure_logger(__name__)

FORMATS = ("table", "csv", "json")
EXPERIMENTS = (
    "inequality",
    "sweep",
    "frame",
    "nonsignal",
    "contrast",
    "kink",
    "consecutive",
)
MAX_SEED = 2 ** 64

POSITIVE_INT_SCHEMA = And(
    Use(int),
    lambda value: value > 0,
    error="Expected a positive integer",
)
SEED_SCHEMA = And(
    Use(int),
    lambda value: 0 <= value < MAX_SEED,
    error=(
        "The seed must be an integer in [0, 2**64). It selects every random "
        "stream of the run, equal seeds reproduce equal reports."
    ),
)
DEGREES_SCHEMA = And(
    Use(float),
    lambda value: 0.0 <= value < 360.0,
    error="Angles are given in degrees and must lie in [0, 360)",
)
EPSILON_SCHEMA = And(
    Use(float),
    lambda value: 0.0 < value <= 0.1,
    error="Epsilon is given in radians and must lie in (0, 0.1]",
)

# eprsimconfig.yml
CONFIG_DEFAULTS_PROPS = {
    Optional("trials"): POSITIVE_INT_SCHEMA,
    Optional("seed"): SEED_SCHEMA,
    Optional("format"): Or(*FORMATS),
    Optional("workers"): POSITIVE_INT_SCHEMA,
}
CONFIG_SCHEMA = {
    Optional("defaults", default={}): Or(None, CONFIG_DEFAULTS_PROPS),
}

# Resolved run configuration
MODEL_PROPS = {
    "kind": Or(*(kind.value for kind in ModelKind)),
    Optional("axis_deg"): DEGREES_SCHEMA,
    Optional("assignment"): Or(*(item.value for item in Assignment)),
}
RUN_CONFIG_SCHEMA = {
    "experiment": Or(*EXPERIMENTS),
    "trials": POSITIVE_INT_SCHEMA,
    "seed": SEED_SCHEMA,
    "format": Or(*FORMATS),
    "out": str,
    "allow_small": bool,
    Optional("model"): MODEL_PROPS,
    Optional("settings_deg"): {str: DEGREES_SCHEMA},
    Optional("angles_deg"): [DEGREES_SCHEMA],
    Optional("ordering"): Or(*(item.value for item in Ordering)),
    Optional("epsilon"): EPSILON_SCHEMA,
}


class SchemaValidation:
    def __init__(self, schema, data):
        self.validated = Schema(schema).validate(data)
