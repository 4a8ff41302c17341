# SPDX-License-Identifier: Apache-2.0

# pylint: skip-file

import csv
import io
import json
import os

from mock import patch
from pytest import fixture, raises

from cli import VERSION, main, parse_angles
from errors import InvalidSettingError

CLEAN_ENV = {
    "EPRSIM_SEED": "",
    "EPRSIM_WORKERS": "",
    "EPRSIM_CONFIG": "",
}


@fixture(autouse=True)
def isolated(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    with patch.dict(os.environ, CLEAN_ENV):
        yield


def _run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def _json(capsys, *argv):
    code, out, err = _run(capsys, *argv)
    assert code == 0, err
    return json.loads(out)


def _csv(capsys, *argv):
    code, out, err = _run(capsys, *argv)
    assert code == 0, err
    return list(csv.DictReader(io.StringIO(out)))


def test_parse_angles():
    assert parse_angles("0:180:15") == [15.0 * step for step in range(13)]
    assert parse_angles("0:90:45") == [0.0, 45.0, 90.0]
    assert parse_angles("10,20,35") == [10.0, 20.0, 35.0]
    assert parse_angles("90") == [90.0]
    with raises(InvalidSettingError):
        parse_angles("0:180")
    with raises(InvalidSettingError):
        parse_angles("0:180:0")
    with raises(InvalidSettingError):
        parse_angles("north")


def test_inequality_default_run(capsys):
    document = _json(capsys, "inequality")
    assert document["schema_version"] == 1
    assert document["config"]["trials"] == 1_000_000
    assert document["config"]["seed"] == 20240101
    assert "workers" not in document["config"]
    report = document["report"]
    assert report["paper_bound"] == 0.146447
    assert report["required_q_fraction"] == 0.25
    assert report["local_model_excluded"] is True
    assert report["identity_holds"] is True
    assert report["verdict"].startswith("PASS")


def test_inequality_minus_plus_assignment(capsys):
    report = _json(
        capsys, "inequality", "--assignment", "-+", "--trials", "100000",
    )["report"]
    assert report["assignment"] == "-+"
    assert report["local_model_excluded"] is True


def test_inequality_rejects_mixed_assignment(capsys):
    code, out, err = _run(capsys, "inequality", "--assignment", "mixed")
    assert code == 2
    assert out == ""
    assert "assignment" in err


def test_small_trials_need_allow_small(capsys):
    code, _, err = _run(capsys, "inequality", "--trials", "100")
    assert code == 2
    assert "--allow-small" in err
    code, _, _ = _run(capsys, "inequality", "--trials", "100", "--allow-small")
    assert code == 0


def test_bad_flags_exit_with_usage(capsys):
    code, _, err = _run(capsys, "inequality", "--bogus")
    assert code == 2
    assert "Usage" in err
    code, _, _ = _run(capsys)
    assert code == 2


def test_invalid_angle(capsys):
    code, _, err = _run(capsys, "frame", "--a", "400")
    assert code == 2
    assert "[0, 360)" in err
    code, _, _ = _run(capsys, "sweep", "--angles", "0:200:20")
    assert code == 2


def test_version(capsys):
    with raises(SystemExit):
        main(["--version"])
    assert VERSION in capsys.readouterr().out


def test_isotropic_sweep_csv(capsys):
    rows = _csv(
        capsys,
        "sweep", "--model", "isotropic", "--angles", "0:180:15",
        "--trials", "10000",
    )
    assert len(rows) == 13
    assert list(rows[0]) == [
        "angle_deg", "estimate", "stderr", "exact", "quantum_exact",
    ]
    assert rows[0]["angle_deg"] == "0.000000"
    assert rows[0]["exact"] == "-0.333333"
    assert rows[-1]["angle_deg"] == "180.000000"


def test_nonlocal_sweep_exact_equals_quantum(capsys):
    rows = _csv(capsys, "sweep", "--model", "nonlocal", "--trials", "10000")
    assert rows
    for row in rows:
        assert row["exact"] == row["quantum_exact"]


def test_sign_sweep_at_right_angle(capsys):
    rows = _csv(
        capsys, "sweep", "--model", "sign", "--angles", "90", "--trials", "10000",
    )
    assert rows[0]["exact"] == "0.000000"


def test_definite_sweep_with_axis(capsys):
    document = _json(
        capsys,
        "sweep", "--model", "definite", "--axis", "90", "--assignment", "-+",
        "--angles", "0,90", "--trials", "10000", "--format", "json",
    )
    assert document["config"]["model"] == {
        "kind": "definite", "axis_deg": 90.0, "assignment": "-+",
    }
    assert document["report"]["rows"][0]["exact"] == 0.0
    assert document["report"]["rows"][1]["exact"] == -1.0


def test_frame_divergence(capsys):
    report = _json(capsys, "frame", "--a", "0", "--b", "60")["report"]
    assert report["history_divergence"] > 0
    assert report["observables_agree"] is True
    assert report["verdict"].startswith("PASS")


def test_frame_equal_settings_anticorrelated(capsys):
    report = _json(
        capsys, "frame", "--a", "0", "--b", "0", "--trials", "20000",
    )["report"]
    for ordering in ("alice_first_counts", "bob_first_counts"):
        counts = report[ordering]
        assert counts["n_pm"] + counts["n_mp"] == 20000
    assert report["history_divergence"] > 0


def test_same_flags_give_identical_bytes(capsys):
    argv = ("frame", "--a", "0", "--b", "60", "--trials", "150000")
    _, first, _ = _run(capsys, *argv)
    _, second, _ = _run(capsys, *argv, "--workers", "4")
    with patch.dict(os.environ, {"EPRSIM_WORKERS": "3"}):
        _, third, _ = _run(capsys, *argv)
    assert first == second == third
    assert first


def test_seed_from_environment(capsys):
    with patch.dict(os.environ, {"EPRSIM_SEED": "77"}):
        document = _json(capsys, "kink")
        assert document["config"]["seed"] == 77
        assert _json(capsys, "kink", "--seed", "5")["config"]["seed"] == 5


def test_config_file_defaults(capsys, tmp_path):
    (tmp_path / "eprsimconfig.yml").write_text(
        "defaults:\n  trials: 12000\n  format: table\n",
    )
    code, out, _ = _run(capsys, "consecutive")
    assert code == 0
    assert out.startswith("field")
    assert "trials" in out and "12000" in out
    assert "cos^2(alpha/2)" in out


def test_missing_config_file(capsys):
    code, _, _ = _run(capsys, "kink", "--config", "missing.yml")
    assert code == 2


def test_kink(capsys):
    report = _json(capsys, "kink")["report"]
    assert report["model"] == {"kind": "sign"}
    assert report["slope"] == 0.63662
    assert report["quantum_slope"] < 0.02


def test_kink_invalid_epsilon(capsys):
    code, _, _ = _run(capsys, "kink", "--epsilon", "0.5")
    assert code == 2


def test_nonsignal(capsys):
    report = _json(
        capsys, "nonsignal", "--model", "isotropic", "--trials", "20000",
    )["report"]
    assert report["bitwise_identical"] is True
    assert report["difference"] == 0.0
    report = _json(
        capsys,
        "nonsignal", "--model", "nonlocal", "--ordering", "bob-first",
        "--trials", "20000",
    )["report"]
    assert report["statistically_zero"] is True
    assert report["ordering"] == "bob-first"


def test_contrast(capsys):
    report = _json(capsys, "contrast", "--trials", "20000")["report"]
    assert report["mixture"]["exact"] == -0.5
    assert report["singlet"]["exact"] == 0.0
    assert report["aligned_mixture"]["estimate"] == -1.0


def test_consecutive(capsys):
    report = _json(
        capsys, "consecutive", "--angle", "90", "--trials", "20000",
    )["report"]
    assert report["expected"] == 0.5
    assert report["repeat_agreement"] == 1.0


def test_output_file_with_lf_endings(capsys, tmp_path):
    path = tmp_path / "sweep.csv"
    code, out, _ = _run(
        capsys, "sweep", "--angles", "0,90", "--trials", "10000",
        "--out", str(path),
    )
    assert code == 0
    assert out == ""
    content = path.read_bytes()
    assert b"\r\n" not in content
    assert content.startswith(b"angle_deg,estimate,stderr,exact,quantum_exact\n")
    assert content.count(b"\n") == 3
