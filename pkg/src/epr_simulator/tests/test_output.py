# SPDX-License-Identifier: Apache-2.0

# pylint: skip-file

import json

from pytest import fixture

from config import RunConfig
from output import flatten, format_value, render, render_csv, render_json
from reports import KinkReport


@fixture
def report():
    return KinkReport(
        model={"kind": "sign"},
        epsilon=0.01,
        slope=0.6366197723675814,
        quantum_slope=-1e-9,
    )


@fixture
def run_config():
    return RunConfig.validated(
        experiment="kink",
        trials=100_000,
        seed=1,
        format="json",
        out="-",
        allow_small=False,
        model={"kind": "sign"},
        epsilon=0.01,
        workers=4,
    )


def test_format_value():
    assert format_value(0.5) == "0.500000"
    assert format_value(-1e-9) == "0.000000"
    assert format_value(-0.0) == "0.000000"
    assert format_value(3) == "3"
    assert format_value(True) == "true"
    assert format_value(None) == ""
    assert format_value(float("inf")) == "inf"


def test_flatten():
    assert list(flatten({"a": {"b": 1, "c": [2.0, 3.0]}, "d": "x"})) == [
        ("a.b", 1),
        ("a.c.0", 2.0),
        ("a.c.1", 3.0),
        ("d", "x"),
    ]


def test_render_json(report, run_config):
    document = json.loads(render_json(report, run_config))
    assert document["schema_version"] == 1
    assert "workers" not in document["config"]
    assert document["report"]["slope"] == 0.63662
    assert document["report"]["quantum_slope"] == 0.0
    assert "-0.0" not in render_json(report, run_config)


def test_render_csv(report):
    assert render_csv(report) == (
        "field,value\n"
        "model.kind,sign\n"
        "epsilon,0.010000\n"
        "slope,0.636620\n"
        "quantum_slope,0.000000\n"
    )


def test_render_table(report, run_config):
    table = render(report, RunConfig(**{
        **run_config.to_dict(), "format": "table",
    }))
    lines = table.splitlines()
    assert lines[0].split() == ["field", "value"]
    assert lines[-1].startswith("Slope at aligned settings 0.636620")
