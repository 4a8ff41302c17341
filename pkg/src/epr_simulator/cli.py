#!/usr/bin/env python
# -*- coding: utf-8 -*-

# SPDX-License-Identifier: Apache-2.0

"""
cli.py

Runs one spin measurement experiment and writes its report. Every run is
fully determined by its flags and seed, running it twice produces the same
output bytes whatever the number of workers.

Angles are given in degrees in the x-z plane, measured from the vertical
axis, and must lie in [0, 360). A setting of -45 degrees is written as 315.

Usage:
    eprsim inequality [options]
    eprsim sweep [options]
    eprsim frame [options]
    eprsim nonsignal [options]
    eprsim contrast [options]
    eprsim kink [options]
    eprsim consecutive [options]
    eprsim -h | --help
    eprsim --version

Commands:
    inequality  Definite +- or -+ spins against the singlet at two
                orthogonal settings, 45 degrees either side of vertical.
    sweep       Correlation of a model against the angle between settings.
    frame       Non-local model run with Alice first and with Bob first.
    nonsignal   Alice's marginal under two different remote settings.
    contrast    The singlet against a classical 50/50 mixture.
    kink        Slope of the exact correlation at aligned settings.
    consecutive Two consecutive measurements of unpolarised spins.

Options:
    --trials <n>            Number of trials, per angle for sweep. At least
                            10000 unless --allow-small is given. Defaults to
                            the config file, else 1000000 for inequality and
                            100000 otherwise.
    --seed <seed>           Master seed in [0, 2**64), overrides EPRSIM_SEED
                            and the config file. Defaults to 20240101.
    --assignment <sign>     Definite spins, +- (Alice up) or -+ (Alice down).
                            The definite model of sweep, nonsignal and kink
                            also accepts mixed [default: +-].
    --model <kind>          quantum, definite, isotropic, nonlocal or sign.
                            Defaults to quantum, and to sign for kink.
    --axis <deg>            Axis of the definite model's spins [default: 0].
    --angles <grid>         Sweep grid as start:stop:step with both ends
                            included, a comma separated list or a single
                            angle [default: 0:180:15].
    --angle <deg>           Angle between consecutive measurements.
                            Defaults to 45.
    --a <deg>               Alice's setting. Defaults to 45, and to 0 for
                            frame.
    --b <deg>               Bob's setting. Defaults to 315, and to 60 for
                            frame.
    --b1 <deg>              First remote setting of nonsignal. Defaults to
                            315.
    --b2 <deg>              Second remote setting of nonsignal. Defaults to
                            90.
    --ordering <ordering>   alice-first or bob-first [default: alice-first].
    --epsilon <rad>         Finite difference step in radians, in (0, 0.1]
                            [default: 0.01].
    --format <format>       table, csv or json. Defaults to the config file,
                            else csv for sweep and json otherwise.
    --out <path>            File to write the report to, or - for stdout
                            [default: -].
    --workers <n>           Threads to simulate chunks on, overrides
                            EPRSIM_WORKERS. Never changes the report.
    --config <path>         Config file with defaults, overrides
                            EPRSIM_CONFIG. Defaults to ./eprsimconfig.yml
                            when present.
    --allow-small           Accept fewer than 10000 trials.
    -v, --verbose           Show verbose logging information.
    -h, --help              Show this help.
    --version               Show the version.

Examples:
    eprsim inequality --assignment -+ --format table

    eprsim sweep --model isotropic --angles 0:180:15 --out isotropic.csv

    eprsim frame --a 0 --b 60 --workers 4
"""

import sys
from typing import List, Optional

from docopt import docopt, DocoptExit

from config import Config, RunConfig
from errors import InvalidSettingError, ValidationError
from experiments import (
    run_consecutive,
    run_correlation_sweep,
    run_frame_ordering,
    run_inequality,
    run_kink,
    run_nonsignaling_check,
    run_superposition_contrast,
)
from hv_models import ModelKind, Ordering
from logger import configure_logger, set_verbose
from output import render, write_output
from schema_validation import EXPERIMENTS

LOGGER = configure_logger(__name__)

VERSION = "1.0.0"

SETTING_DEFAULTS = {
    "inequality": {"a": "45", "b": "315"},
    "frame": {"a": "0", "b": "60"},
    "nonsignal": {"a": "45", "b1": "315", "b2": "90"},
    "contrast": {"a": "45", "b": "315"},
    "consecutive": {"angle": "45"},
}
MODEL_EXPERIMENTS = ("sweep", "nonsignal", "kink")
DEFAULT_MODEL = {"kink": ModelKind.DETERMINISTIC_SIGN.value}


def parse_angles(grid: str) -> List[float]:
    """
    Reads start:stop:step (both ends inclusive), a comma separated list or
    a single angle, all in degrees.
    """
    try:
        if ":" in grid:
            start, stop, step = (float(part) for part in grid.split(":"))
            if step <= 0:
                raise InvalidSettingError(
                    f"The step of angle grid {grid!r} must be positive"
                )
            count = int(round((stop - start) / step))
            angles = [start + index * step for index in range(count + 1)]
            return [angle for angle in angles if angle <= stop + 1e-9]
        return [float(part) for part in grid.split(",")]
    except ValueError:
        raise InvalidSettingError(
            f"Cannot read angle grid {grid!r}, expected start:stop:step, "
            "a comma separated list or a single angle"
        ) from None


def _model(options: dict, experiment: str) -> Optional[dict]:
    if experiment == "inequality":
        return {
            "kind": ModelKind.DEFINITE_ALIGNED.value,
            "axis_deg": 0.0,
            "assignment": options["--assignment"],
        }
    if experiment not in MODEL_EXPERIMENTS:
        return None
    kind = options["--model"] or DEFAULT_MODEL.get(
        experiment, ModelKind.QUANTUM.value,
    )
    model = {"kind": kind}
    if kind == ModelKind.DEFINITE_ALIGNED.value:
        model["axis_deg"] = options["--axis"]
        model["assignment"] = options["--assignment"]
    return model


def _settings(options: dict, experiment: str) -> Optional[dict]:
    defaults = SETTING_DEFAULTS.get(experiment)
    if defaults is None:
        return None
    return {
        name: options[f"--{name}"] or default
        for name, default in defaults.items()
    }


def resolve_run_config(options: dict, environ=None) -> RunConfig:
    """
    Combines the flags with the environment, the config file and the
    built-in defaults, flags taking precedence.
    """
    experiment = next(name for name in EXPERIMENTS if options[name])
    config = Config(options["--config"], environ)
    return RunConfig.validated(
        experiment=experiment,
        trials=options["--trials"] or config.trials(experiment),
        seed=options["--seed"] or config.seed(),
        format=options["--format"] or config.output_format(experiment),
        out=options["--out"],
        allow_small=bool(options["--allow-small"]),
        workers=options["--workers"] or config.workers(),
        model=_model(options, experiment),
        settings_deg=_settings(options, experiment),
        angles_deg=(
            parse_angles(options["--angles"]) if experiment == "sweep" else None
        ),
        ordering=options["--ordering"] if experiment == "nonsignal" else None,
        epsilon=options["--epsilon"] if experiment == "kink" else None,
    )


def run_experiment(config: RunConfig):
    LOGGER.info(
        "Running %s with %d trials and seed %d",
        config.experiment,
        config.trials,
        config.seed,
    )
    if config.experiment == "inequality":
        return run_inequality(
            config.trials,
            config.seed,
            assignment=config.model_spec().assignment,
            a=config.direction("a"),
            b=config.direction("b"),
            workers=config.workers,
            allow_small=config.allow_small,
        )
    if config.experiment == "sweep":
        return run_correlation_sweep(
            config.model_spec(),
            config.angles(),
            config.trials,
            config.seed,
            workers=config.workers,
        )
    if config.experiment == "frame":
        return run_frame_ordering(
            config.direction("a"),
            config.direction("b"),
            config.trials,
            config.seed,
            workers=config.workers,
        )
    if config.experiment == "nonsignal":
        return run_nonsignaling_check(
            config.model_spec(),
            config.direction("a"),
            config.direction("b1"),
            config.direction("b2"),
            config.trials,
            config.seed,
            ordering=Ordering(config.ordering),
            workers=config.workers,
        )
    if config.experiment == "contrast":
        return run_superposition_contrast(
            config.trials,
            config.seed,
            a=config.direction("a"),
            b=config.direction("b"),
            workers=config.workers,
            allow_small=config.allow_small,
        )
    if config.experiment == "kink":
        return run_kink(config.model_spec(), config.epsilon)
    return run_consecutive(
        config.radians("angle"),
        config.trials,
        config.seed,
        workers=config.workers,
        allow_small=config.allow_small,
    )


def main(argv: Optional[List[str]] = None) -> int:
    """
    Returns 0 on success, 1 on an internal error and 2 on a usage or
    validation error.
    """
    try:
        options = docopt(__doc__, argv=argv, version=VERSION)
    except DocoptExit as error:
        sys.stderr.write(f"{error}\n")
        return 2

    if options["--verbose"]:
        set_verbose()

    try:
        config = resolve_run_config(options)
        report = run_experiment(config)
        write_output(render(report, config), config.out)
    except ValidationError as error:
        sys.stderr.write(f"error: {error}\n")
        return 2
    except Exception:  # pylint: disable=broad-except
        LOGGER.exception("The %s run failed", next(
            (name for name in EXPERIMENTS if options.get(name)), "unknown",
        ))
        return 1
    LOGGER.info("Report written to %s", config.out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
