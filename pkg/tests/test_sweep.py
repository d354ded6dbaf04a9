"""Config documents, grid evaluation, CSV/JSON output and presets."""

from __future__ import annotations

import json
import math
from pathlib import Path

import pandas as pd
import pytest

from spin_otto.errors import ConfigIoError, InvalidOverride, InvalidSweep, UnknownPreset
from spin_otto.models import CycleConfig, SweepAxis, SweepSpec
from spin_otto.presets import PRESETS, resolve_preset, run_preset
from spin_otto.sweep import (
    build_config,
    canonical_field,
    canonical_overrides,
    compute_config_hash,
    evaluate_point,
    load_config,
    load_sweep_spec,
    parse_set_flags,
    parse_values,
    run_sweep,
    sidecar_path,
)
from spin_otto.thermo import run_cycle_numeric


@pytest.fixture
def document(tmp_path: Path):
    """Write a KEY=VALUE document and return its path."""

    def _write(text: str, name: str = "run.env") -> Path:
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return path

    return _write


def test_parse_set_flags() -> None:
    """key=value pairs, later flags win."""
    assert parse_set_flags(["gamma=0.5", "tau = inf", "gamma=0.7"]) == {"gamma": "0.7", "tau": "inf"}
    assert parse_set_flags(None) == {}


@pytest.mark.parametrize("flag", ["gamma", "=1", "gamma:0.5"])
def test_parse_set_flags_rejects_malformed(flag: str) -> None:
    """Missing key or separator is an override error."""
    with pytest.raises(InvalidOverride):
        parse_set_flags([flag])


def test_load_config_document(document) -> None:
    """Exact names and unambiguous lowercase keys are read, inf is accepted, overrides win over the file."""
    path = document("gamma=0.5\nb_h=5\ntau=inf\nt_h=100\n")
    cfg = load_config(path, {"T_H": "12", "B_H": "6"})
    assert cfg.gamma == 0.5
    assert cfg.Gamma == 0.1
    assert cfg.B_H == 6.0
    assert math.isinf(cfg.tau)
    assert cfg.t_h == 100.0
    assert cfg.T_H == 12.0
    assert cfg.B_L == 1.0


@pytest.mark.parametrize(
    ("values", "field", "expected", "untouched", "default"),
    [
        ({"gamma": "0.5"}, "gamma", 0.5, "Gamma", 0.1),
        ({"Gamma": "0.5"}, "Gamma", 0.5, "gamma", 1.0),
        ({"T_H": "12"}, "T_H", 12.0, "t_h", math.inf),
        ({"t_h": "12"}, "t_h", 12.0, "T_H", 10.0),
    ],
)
def test_colliding_names_keep_their_own_field(
    values, field: str, expected: float, untouched: str, default: float
) -> None:
    """gamma/Gamma and T_H/t_h only differ by case and each sets its own parameter."""
    cfg = build_config(values)
    assert getattr(cfg, field) == expected
    assert getattr(cfg, untouched) == default


def test_colliding_names_in_a_document(document) -> None:
    """Both members of a colliding pair can sit in one document."""
    cfg = load_config(document("gamma=0.25\nGamma=0.2\nT_H=12\nt_h=50\n"))
    assert (cfg.gamma, cfg.Gamma, cfg.T_H, cfg.t_h) == (0.25, 0.2, 12.0, 50.0)


@pytest.mark.parametrize("key", ["GAMMA", "gAmma", "t_H", "T_h"])
def test_ambiguous_key_is_refused(document, key: str) -> None:
    """A key that folds onto two parameters is an override error, never a guess."""
    with pytest.raises(InvalidOverride, match="ambiguous"):
        build_config({key: "0.5"})
    with pytest.raises(InvalidOverride, match="ambiguous"):
        load_config(document(f"{key}=0.5\n"))


def test_duplicate_spelling_is_refused() -> None:
    """Two spellings of the same parameter in one mapping are refused."""
    assert canonical_field("b_l") == "B_L"
    with pytest.raises(InvalidOverride):
        canonical_overrides({"B_L": "1", "b_l": "2"})


def test_load_config_without_document_uses_defaults() -> None:
    """No file means the default cycle."""
    assert load_config(None) == CycleConfig()


def test_load_config_unknown_key(document) -> None:
    """Unknown parameters are refused."""
    with pytest.raises(InvalidOverride):
        load_config(document("omega=2\n"))


@pytest.mark.parametrize("text", ["gamma=1.5\n", "T_H=0.5\n", "B_L=5\n", "tau=fast\n"])
def test_load_config_invalid_values(document, text: str) -> None:
    """Out-of-range or unordered values fail validation."""
    with pytest.raises(InvalidOverride):
        load_config(document(text))


def test_load_config_missing_file(tmp_path: Path) -> None:
    """A missing document is an I/O error."""
    with pytest.raises(ConfigIoError):
        load_config(tmp_path / "absent.env")


def test_parse_values() -> None:
    """Comma lists and inclusive ranges."""
    assert parse_values("0, 0.5,1") == [0.0, 0.5, 1.0]
    assert parse_values("0:1:0.25") == [0.0, 0.25, 0.5, 0.75, 1.0]
    assert len(parse_values("0.05:5:0.05")) == 100


@pytest.mark.parametrize("text", ["a,b", "0:1", "0:1:0"])
def test_parse_values_rejects_garbage(text: str) -> None:
    """Malformed axes are sweep errors."""
    with pytest.raises(InvalidSweep):
        parse_values(text)


def test_load_sweep_spec(document) -> None:
    """Axes, mode and outputs come from the document; the rest is the base config."""
    path = document(
        "T_H=8\nAXIS1=gamma\nAXIS1_VALUES=0:1:0.5\nAXIS2=tau\nAXIS2_VALUES=0.5,1\n"
        "MODE=closed_form\nOUTPUTS=W,W_irr\n"
    )
    spec = load_sweep_spec(path)
    assert spec.base.T_H == 8.0
    assert spec.axis1.values == [0.0, 0.5, 1.0]
    assert spec.axis2.name == "tau"
    assert spec.mode == "closed_form"
    assert spec.outputs == ["W", "W_irr"]


@pytest.mark.parametrize(
    "text",
    [
        "AXIS1_VALUES=0,1\n",
        "AXIS1=J\nAXIS1_VALUES=0,1\n",
        "AXIS1=gamma\nAXIS1_VALUES=1,0\n",
        "AXIS1=gamma\nAXIS1_VALUES=0,1\nMODE=exact\n",
        "AXIS1=gamma\nAXIS1_VALUES=0,1\nMODE=local\nOUTPUTS=W\n",
        "AXIS1=gamma\nAXIS1_VALUES=0,1\nAXIS2=gamma\nAXIS2_VALUES=0,1\n",
    ],
)
def test_load_sweep_spec_errors(document, text: str) -> None:
    """Missing axes, unknown axes, unsorted values, bad modes and outputs."""
    with pytest.raises(InvalidSweep):
        load_sweep_spec(document(text))


def test_single_point_sweep_equals_direct_call(tmp_path: Path) -> None:
    """A one-point grid reproduces evaluate_point."""
    spec = SweepSpec(axis1=SweepAxis(name="gamma", values=[0.5]), mode="closed_form", outputs=["W", "eta"])
    record = run_sweep(spec)
    direct = evaluate_point(CycleConfig(gamma=0.5), "closed_form", ["W", "eta"])
    assert record.rows == [{"gamma": 0.5, **direct}]
    assert record.columns == ["gamma", "W", "eta"]


def test_grid_matches_direct_cycles() -> None:
    """Every (gamma, tau) row equals a standalone numeric cycle."""
    gammas, taus = [0.0, 0.25, 0.5, 0.75, 1.0], [0.3, 0.5, 1.0, 2.0, 5.0]
    spec = SweepSpec(
        axis1=SweepAxis(name="gamma", values=gammas),
        axis2=SweepAxis(name="tau", values=taus),
        outputs=["W", "Q_H", "xi"],
    )
    record = run_sweep(spec)
    assert len(record.rows) == 25
    for row in record.rows:
        direct = run_cycle_numeric(CycleConfig(gamma=row["gamma"], tau=row["tau"]))
        assert row["W"] == direct.W
        assert row["Q_H"] == direct.Q_H
        assert row["xi"] == direct.xi


def test_failing_point_keeps_row_with_error(tmp_path: Path) -> None:
    """gamma = 0 at B_L = J has no cold jump gap; the row records why."""
    spec = SweepSpec(
        base=CycleConfig(t_c=50.0),
        axis1=SweepAxis(name="gamma", values=[0.0, 1.0]),
        outputs=["W", "Q_H"],
    )
    out = tmp_path / "fail.csv"
    record = run_sweep(spec, out=out)
    assert record.columns == ["gamma", "W", "Q_H", "error"]
    failed, ok = record.rows
    assert failed["W"] is None
    assert failed["error"].startswith("degenerate_spectrum:")
    assert ok["error"] == ""
    assert record.metadata["failed_points"] == 1

    frame = pd.read_csv(out)
    assert math.isnan(frame.loc[0, "W"])
    assert not math.isnan(frame.loc[1, "W"])


def test_csv_round_trips_floats_and_sidecar(tmp_path: Path) -> None:
    """17 significant digits recover every float; the sidecar carries the hash."""
    out = tmp_path / "q.csv"
    record = run_preset("quasistatic-eff", out=out)
    frame = pd.read_csv(out, float_precision="round_trip")
    assert list(frame.columns) == ["gamma", "W", "Q_H", "eta"]
    assert len(frame) == 101
    assert frame["W"].tolist() == [row["W"] for row in record.rows]
    assert "error" not in frame.columns

    sidecar = json.loads(sidecar_path(out).read_text(encoding="utf-8"))
    assert sidecar["config_hash"] == record.config_hash
    assert sidecar["columns"] == record.columns
    assert sidecar["rows"] == 101
    assert sidecar["metadata"]["failed_points"] == 0
    assert sidecar["metadata"]["integrator"]["unitary_steps"] == 2000


def test_preset_csv_is_deterministic(tmp_path: Path) -> None:
    """Two runs write byte-identical CSV files."""
    first, second = tmp_path / "a.csv", tmp_path / "b.csv"
    run_preset("local-workgap", out=first)
    run_preset("local-workgap", out=second)
    assert first.read_bytes() == second.read_bytes()


def test_config_hash_ignores_key_order() -> None:
    """Hashes depend on content, not insertion order."""
    assert compute_config_hash({"a": 1, "b": [1, 2]}) == compute_config_hash({"b": [1, 2], "a": 1})
    assert compute_config_hash({"a": 1}) != compute_config_hash({"a": 2})


def test_preset_override_pins_axis() -> None:
    """--set gamma=0 collapses the gamma axis of a two-axis preset."""
    record = run_preset("finite-time-xi-wirr", {"gamma": "0"})
    assert len(record.rows) == 100
    assert {row["gamma"] for row in record.rows} == {0.0}
    assert all(abs(row["W_irr"]) < 1e-10 for row in record.rows)


def test_preset_defaults_and_overrides() -> None:
    """power-surface brings finite isochores; overrides change the base."""
    _, base, axes = resolve_preset("power-surface", {"T_H": "15"})
    assert (base.gamma, base.t_h, base.t_c, base.T_H) == (1.0, 100.0, 220.0, 15.0)
    assert base.Gamma == 0.1
    assert [axis.name for axis in axes] == ["tau"]


def test_preset_gamma_pin_leaves_bath_rate() -> None:
    """--set gamma=0 on regimes-vs-TH pins the anisotropy axis and keeps Gamma and t_h."""
    _, base, axes = resolve_preset("regimes-vs-TH", {"gamma": "0"})
    assert (base.gamma, base.Gamma) == (0.0, 0.1)
    assert math.isinf(base.t_h)
    assert axes[0].name == "gamma" and axes[0].values == [0.0]
    assert len(axes[1].values) > 1


def test_preset_with_empty_grid() -> None:
    """A cold bath too close to the top of the T_H range leaves nothing to sweep."""
    with pytest.raises(InvalidOverride):
        resolve_preset("regimes-vs-TH", {"T_L": "19.95", "T_H": "25"})


def test_unknown_preset() -> None:
    """Names outside the registry are refused."""
    with pytest.raises(UnknownPreset):
        run_preset("carnot-cycle")


def test_every_preset_resolves() -> None:
    """Each registered preset builds its base config and axes."""
    for name in PRESETS:
        preset, base, axes = resolve_preset(name)
        assert axes
        assert preset.outputs
