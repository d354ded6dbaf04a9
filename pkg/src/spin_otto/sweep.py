"""Config documents, parameter grids and CSV/JSON result files."""

from __future__ import annotations

import hashlib
import itertools
import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from functools import partial
from pathlib import Path
from typing import Any, Callable, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from dotenv import dotenv_values
from pydantic import ValidationError

from . import __version__, dynamics
from .errors import ConfigIoError, InvalidOverride, InvalidSweep, SpinOttoError
from .logs import get_logger
from .models import CycleConfig, MachineRegime, RunRecord, SweepAxis, SweepSpec
from .settings import get_settings
from .thermo import (
    classify_signs,
    finite_time_closed_form,
    irreversible_work,
    local_finite_time,
    local_quasistatic_efficiency,
    quasistatic_closed_form,
    run_cycle_numeric,
    single_spin_otto_eff,
    work_gap,
)

logger = get_logger("sweep")

RowFunction = Callable[[CycleConfig], Dict[str, Any]]

CONFIG_FIELDS: Tuple[str, ...] = tuple(CycleConfig.model_fields)

# gamma/Gamma and T_H/t_h collide once lowercased.
_FOLDED: Dict[str, List[str]] = {}
for _name in CONFIG_FIELDS:
    _FOLDED.setdefault(_name.lower(), []).append(_name)

MODE_OUTPUTS: Dict[str, Tuple[str, ...]] = {
    "numeric": (
        "E_A", "E_B", "E_C", "E_D", "W1", "W2", "W", "Q_H", "Q_L",
        "eta", "regime", "W_irr", "xi", "closure_distance",
    ),
    "closed_form": (
        "E_A", "E_B", "E_C", "E_D", "W", "Q_H", "Q_L", "eta", "regime",
        "xi", "W_tau", "Q_tau", "eta_tau", "W_irr",
    ),
    "local": (
        "E_AL", "E_BL", "E_CL", "E_DL", "W_L", "Q_HL", "eta_L", "P_L",
        "lambda", "delta", "eta_Lq", "eta_S", "work_gap",
    ),
}

DEFAULT_OUTPUTS = {
    "numeric": ["W", "Q_H", "Q_L", "eta", "regime"],
    "closed_form": ["W", "Q_H", "Q_L", "eta", "regime"],
    "local": ["W_L", "Q_HL", "eta_L"],
}


def compute_config_hash(payload: Mapping[str, Any]) -> str:
    """Stable SHA256 of a resolved run description (sorted keys)."""
    serialized = json.dumps(payload, sort_keys=True, separators=(",", ":"), default=str)
    return hashlib.sha256(serialized.encode()).hexdigest()


def parse_set_flags(flags: Optional[Iterable[str]]) -> Dict[str, str]:
    """Turn ``key=value`` command-line flags into a mapping."""
    overrides: Dict[str, str] = {}
    for flag in flags or []:
        key, sep, value = flag.partition("=")
        if not sep or not key.strip():
            raise InvalidOverride(f"expected key=value, got {flag!r}")
        overrides[key.strip()] = value.strip()
    return overrides


def canonical_field(key: str) -> str:
    """Exact field name first, then an unambiguous case-insensitive match."""
    key = key.strip()
    if key in CONFIG_FIELDS:
        return key
    candidates = _FOLDED.get(key.lower(), [])
    if len(candidates) == 1:
        return candidates[0]
    if candidates:
        raise InvalidOverride(f"ambiguous parameter {key!r}; spell it exactly as one of {candidates}")
    raise InvalidOverride(f"unknown parameter {key!r}; expected one of {sorted(CONFIG_FIELDS)}")


def canonical_overrides(overrides: Mapping[str, Any]) -> Dict[str, Any]:
    resolved: Dict[str, Any] = {}
    for key, value in overrides.items():
        name = canonical_field(key)
        if name in resolved:
            raise InvalidOverride(f"parameter {name!r} given more than once")
        resolved[name] = value
    return resolved


def build_config(values: Mapping[str, Any]) -> CycleConfig:
    try:
        return CycleConfig.model_validate(canonical_overrides(values))
    except ValidationError as exc:
        raise InvalidOverride(_validation_message(exc)) from exc


def _validation_message(exc: ValidationError) -> str:
    return "; ".join(f"{'.'.join(map(str, e['loc'])) or 'config'}: {e['msg']}" for e in exc.errors())


def _read_document(path: Path) -> Dict[str, str]:
    if not path.is_file():
        raise ConfigIoError(f"config document {path} does not exist")
    try:
        values = dotenv_values(path, encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise ConfigIoError(f"cannot read {path}: {exc}") from exc
    return {key: value for key, value in values.items() if value is not None}


def load_config(path: Optional[Path], overrides: Optional[Mapping[str, str]] = None) -> CycleConfig:
    """KEY=VALUE document plus overrides; missing keys take the defaults."""
    values = canonical_overrides(_read_document(path)) if path is not None else {}
    values.update(canonical_overrides(overrides or {}))
    return build_config(values)


def parse_values(text: str) -> List[float]:
    """``0,0.5,1`` or an inclusive range ``start:stop:step``."""
    text = text.strip()
    try:
        if ":" in text:
            start, stop, step = (float(part) for part in text.split(":"))
            if step <= 0:
                raise InvalidSweep(f"range step must be positive in {text!r}")
            count = int(math.floor((stop - start) / step + 1e-9)) + 1
            return [round(start + i * step, 12) for i in range(count)]
        return [float(part) for part in text.split(",") if part.strip()]
    except ValueError as exc:
        raise InvalidSweep(f"cannot parse axis values {text!r}") from exc


SWEEP_KEYS = ("AXIS1", "AXIS1_VALUES", "AXIS2", "AXIS2_VALUES", "OUTPUTS", "MODE")


def load_sweep_spec(path: Path, overrides: Optional[Mapping[str, str]] = None) -> SweepSpec:
    document = _read_document(path)
    upper = {key.upper(): value for key, value in document.items()}
    config_values = canonical_overrides({k: v for k, v in document.items() if k.upper() not in SWEEP_KEYS})
    config_values.update(canonical_overrides(overrides or {}))
    base = build_config(config_values)

    if "AXIS1" not in upper or "AXIS1_VALUES" not in upper:
        raise InvalidSweep("sweep documents need AXIS1 and AXIS1_VALUES")
    mode = upper.get("MODE", "numeric").strip().lower()
    if mode not in MODE_OUTPUTS:
        raise InvalidSweep(f"MODE must be one of {sorted(MODE_OUTPUTS)}")
    outputs = (
        [name.strip() for name in upper["OUTPUTS"].split(",") if name.strip()]
        if "OUTPUTS" in upper
        else DEFAULT_OUTPUTS[mode]
    )
    try:
        spec = SweepSpec(
            base=base,
            axis1=SweepAxis(name=upper["AXIS1"].strip(), values=parse_values(upper["AXIS1_VALUES"])),
            axis2=(
                SweepAxis(name=upper["AXIS2"].strip(), values=parse_values(upper.get("AXIS2_VALUES", "")))
                if "AXIS2" in upper
                else None
            ),
            outputs=outputs,
            mode=mode,
        )
    except ValidationError as exc:
        raise InvalidSweep(_validation_message(exc)) from exc
    check_outputs(spec)
    return spec


def check_outputs(spec: SweepSpec) -> None:
    unknown = [name for name in spec.outputs if name not in MODE_OUTPUTS[spec.mode]]
    if unknown:
        raise InvalidSweep(f"outputs {unknown} are not available in {spec.mode} mode")


def _regime(Q_H: float, Q_L: float, W: float) -> str:
    return classify_signs(Q_H, Q_L, W).value


def _numeric_values(cfg: CycleConfig) -> Dict[str, Any]:
    result = run_cycle_numeric(cfg)
    values = result.model_dump()
    values["regime"] = result.regime.value
    return values


def _closed_form_values(cfg: CycleConfig) -> Dict[str, Any]:
    quasistatic = quasistatic_closed_form(cfg)
    values: Dict[str, Any] = quasistatic.model_dump()
    values["regime"] = _regime(quasistatic.Q_H, quasistatic.Q_L, quasistatic.W)
    if values["regime"] != MachineRegime.ENGINE.value:
        values["eta"] = None
    xi = 0.0 if cfg.adiabatic else dynamics.transition_probabilities(cfg).xi
    finite = finite_time_closed_form(cfg, xi)
    values.update(finite.model_dump())
    values["W_irr"] = irreversible_work(cfg, xi)
    return values


def _local_values(cfg: CycleConfig) -> Dict[str, Any]:
    probs = dynamics.transition_probabilities(cfg)
    result = local_finite_time(cfg, probs)
    values: Dict[str, Any] = result.model_dump(exclude={"probabilities"})
    values.update(
        {
            "lambda": probs.lambda_,
            "delta": probs.delta,
            "eta_Lq": local_quasistatic_efficiency(cfg),
            "eta_S": single_spin_otto_eff(cfg.B_L, cfg.B_H),
            "work_gap": work_gap(cfg),
        }
    )
    return values


MODE_FUNCTIONS: Dict[str, RowFunction] = {
    "numeric": _numeric_values,
    "closed_form": _closed_form_values,
    "local": _local_values,
}


def evaluate_point(cfg: CycleConfig, mode: str = "numeric", outputs: Sequence[str] = ()) -> Dict[str, Any]:
    """Quantities of one grid point, restricted to ``outputs`` when given."""
    values = MODE_FUNCTIONS[mode](cfg)
    if not outputs:
        return values
    return {name: values.get(name) for name in outputs}


def _evaluate_row(
    task: Tuple[CycleConfig, Dict[str, float]], row: RowFunction, outputs: Sequence[str]
) -> Dict[str, Any]:
    base, point = task
    record: Dict[str, Any] = dict(point)
    try:
        cfg = base.replace(**point)
        values = row(cfg)
        record.update({name: values.get(name) for name in outputs})
        record["error"] = ""
    except ValidationError as exc:
        record.update({name: None for name in outputs})
        record["error"] = f"invalid_config: {_validation_message(exc)}"
    except (SpinOttoError, ArithmeticError, ValueError) as exc:
        record.update({name: None for name in outputs})
        detail = exc.detail if isinstance(exc, SpinOttoError) else {"code": type(exc).__name__, "message": str(exc)}
        record["error"] = f"{detail['code']}: {detail['message']}"
    return record


def grid_points(axes: Sequence[SweepAxis]) -> List[Dict[str, float]]:
    names = [axis.name for axis in axes]
    return [dict(zip(names, combo)) for combo in itertools.product(*(axis.values for axis in axes))]


def evaluate_grid(
    base: CycleConfig,
    axes: Sequence[SweepAxis],
    row: RowFunction,
    outputs: Sequence[str],
    threads: Optional[int] = None,
) -> List[Dict[str, Any]]:
    """Evaluate every grid point; failing points keep NaN cells and an error."""
    points = grid_points(axes)
    tasks = [(base, point) for point in points]
    worker = partial(_evaluate_row, row=row, outputs=list(outputs))
    threads = threads or get_settings().threads
    if threads > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=min(threads, len(tasks))) as pool:
            rows = list(pool.map(worker, tasks))
    else:
        rows = [worker(task) for task in tasks]

    names = [axis.name for axis in axes]
    rows.sort(key=lambda r: tuple(r[name] for name in names))
    for failed in (r for r in rows if r["error"]):
        point = ", ".join(f"{name}={failed[name]}" for name in names)
        logger.warning("grid point failed", extra={"stage": "sweep", "status": f"{point} {failed['error']}"})
    return rows


def build_record(
    rows: List[Dict[str, Any]],
    axes: Sequence[SweepAxis],
    outputs: Sequence[str],
    hash_payload: Mapping[str, Any],
    started: float,
    threads: int,
) -> RunRecord:
    columns = [axis.name for axis in axes] + list(outputs)
    if any(r["error"] for r in rows):
        columns.append("error")
    settings = get_settings()
    metadata = {
        "version": __version__,
        "integrator": settings.integrator_settings(),
        "wall_time_s": round(time.perf_counter() - started, 3),
        "workers": threads,
        "points": len(rows),
        "failed_points": sum(1 for r in rows if r["error"]),
    }
    return RunRecord(
        config_hash=compute_config_hash(hash_payload),
        columns=columns,
        rows=[{name: r.get(name) for name in columns} for r in rows],
        metadata=metadata,
    )


def write_csv(record: RunRecord, path: Path) -> Path:
    """CSV with 17 significant digits; empty cells are written as nan."""
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        frame = pd.DataFrame(record.rows, columns=record.columns)
        frame.to_csv(path, index=False, float_format="%.17g", na_rep="nan", lineterminator="\n")
    except OSError as exc:
        raise ConfigIoError(f"cannot write {path}: {exc}") from exc
    return path


def sidecar_path(path: Path) -> Path:
    return path.with_name(path.name + ".json")


def write_sidecar(record: RunRecord, path: Path) -> Path:
    target = sidecar_path(path)
    payload = {
        "config_hash": record.config_hash,
        "columns": record.columns,
        "rows": len(record.rows),
        "metadata": record.metadata,
    }
    try:
        target.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    except OSError as exc:
        raise ConfigIoError(f"cannot write {target}: {exc}") from exc
    return target


def run_grid(
    base: CycleConfig,
    axes: Sequence[SweepAxis],
    row: RowFunction,
    outputs: Sequence[str],
    hash_payload: Mapping[str, Any],
    out: Optional[Path] = None,
    threads: Optional[int] = None,
) -> RunRecord:
    started = time.perf_counter()
    threads = threads or get_settings().threads
    rows = evaluate_grid(base, axes, row, outputs, threads)
    record = build_record(rows, axes, outputs, hash_payload, started, threads)
    if out is not None:
        write_csv(record, out)
        write_sidecar(record, out)
        logger.info("results written", extra={"stage": "sweep", "status": str(out)})
    return record


def sweep_hash_payload(spec: SweepSpec) -> Dict[str, Any]:
    return {
        "base": spec.base.model_dump(mode="json"),
        "axes": [axis.model_dump() for axis in spec.axes],
        "outputs": spec.outputs,
        "mode": spec.mode,
        "version": __version__,
    }


def run_sweep(spec: SweepSpec, out: Optional[Path] = None, threads: Optional[int] = None) -> RunRecord:
    """Evaluate the sweep grid and write ``out`` plus its JSON sidecar."""
    check_outputs(spec)
    points = int(np.prod([len(axis.values) for axis in spec.axes]))
    logger.info("sweep start", extra={"stage": "sweep", "status": f"mode={spec.mode} points={points}"})
    row = partial(evaluate_point, mode=spec.mode, outputs=tuple(spec.outputs))
    return run_grid(spec.base, spec.axes, row, spec.outputs, sweep_hash_payload(spec), out, threads)
