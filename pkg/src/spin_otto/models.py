from __future__ import annotations

import math
from enum import Enum
from typing import Any, Dict, List, Literal, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


# Units: hbar = k_B = 1, energies and times in units of J.
INFINITE = math.inf

SWEEP_AXES = ("gamma", "tau", "T_H", "t_h", "B_H")


class SpinParams(BaseModel):
    """Hamiltonian control point (B, J, gamma) at one instant."""

    model_config = ConfigDict(frozen=True)

    B: float = Field(ge=0.0)
    J: float = Field(default=1.0, gt=0.0)
    gamma: float = Field(ge=0.0, le=1.0)

    @property
    def k(self) -> float:
        return math.hypot(self.B, self.gamma * self.J)

    def with_field(self, B: float) -> "SpinParams":
        return SpinParams(B=B, J=self.J, gamma=self.gamma)


class Spectrum(BaseModel):
    """Eigenpairs of the two-spin Hamiltonian, labelled as psi_0..psi_3.

    ``states[:, i]`` is |psi_i>; energies are (-2k, -2J, 2J, 2k).
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    params: SpinParams
    energies: np.ndarray
    states: np.ndarray
    k: float

    def state(self, i: int) -> np.ndarray:
        return self.states[:, i]


class FieldProtocol(BaseModel):
    """Linear field ramp B(t) = B_start + (B_end - B_start) t / tau."""

    model_config = ConfigDict(frozen=True)

    B_start: float = Field(ge=0.0)
    B_end: float = Field(ge=0.0)
    tau: float = Field(gt=0.0)
    direction: Literal["expansion", "compression"] = "expansion"

    @model_validator(mode="after")
    def _check_direction(self) -> "FieldProtocol":
        if self.direction == "expansion" and not self.B_start < self.B_end:
            raise ValueError("expansion requires B_start < B_end")
        if self.direction == "compression" and not self.B_start > self.B_end:
            raise ValueError("compression requires B_start > B_end")
        return self

    def field(self, t: np.ndarray | float) -> np.ndarray | float:
        return self.B_start + (self.B_end - self.B_start) * (np.asarray(t) / self.tau)

    def reversed(self) -> "FieldProtocol":
        return FieldProtocol(
            B_start=self.B_end,
            B_end=self.B_start,
            tau=self.tau,
            direction="compression" if self.direction == "expansion" else "expansion",
        )


class Propagator(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    U: np.ndarray
    protocol: FieldProtocol
    params: SpinParams
    steps: int


class DissipativeConfig(BaseModel):
    """Isochore: fixed Hamiltonian in contact with one bath."""

    model_config = ConfigDict(frozen=True)

    bath_temperature: float = Field(gt=0.0)
    Gamma: float = Field(default=0.1, gt=0.0)
    duration: float = Field(ge=0.0)
    fixed_params: SpinParams
    dt: Optional[float] = Field(default=None, gt=0.0)


class TransitionProbabilities(BaseModel):
    model_config = ConfigDict(frozen=True, populate_by_name=True)

    xi: float = Field(ge=0.0, le=1.0)
    lambda_: float = Field(ge=0.0, le=1.0, alias="lambda")
    delta: float = Field(ge=0.0, le=1.0)
    tau: float


class CycleConfig(BaseModel):
    """One Otto cycle run. ``inf`` durations mean adiabatic / fully thermalized."""

    model_config = ConfigDict(frozen=True, ser_json_inf_nan="constants")

    B_L: float = Field(default=1.0, gt=0.0)
    B_H: float = Field(default=4.0, gt=0.0)
    J: float = Field(default=1.0, gt=0.0)
    gamma: float = Field(default=1.0, ge=0.0, le=1.0)
    T_L: float = Field(default=1.0, gt=0.0)
    T_H: float = Field(default=10.0, gt=0.0)
    tau: float = Field(default=INFINITE, gt=0.0)
    t_h: float = Field(default=INFINITE, ge=0.0)
    t_c: float = Field(default=INFINITE, ge=0.0)
    Gamma: float = Field(default=0.1, gt=0.0)
    unitary_steps: Optional[int] = Field(default=None, ge=1)
    lindblad_dt: Optional[float] = Field(default=None, gt=0.0)

    @model_validator(mode="after")
    def _check_order(self) -> "CycleConfig":
        if not self.B_L < self.B_H:
            raise ValueError("B_L must be smaller than B_H")
        if not self.T_L < self.T_H:
            raise ValueError("T_L must be smaller than T_H")
        return self

    @property
    def params_low(self) -> SpinParams:
        return SpinParams(B=self.B_L, J=self.J, gamma=self.gamma)

    @property
    def params_high(self) -> SpinParams:
        return SpinParams(B=self.B_H, J=self.J, gamma=self.gamma)

    @property
    def expansion(self) -> FieldProtocol:
        return FieldProtocol(B_start=self.B_L, B_end=self.B_H, tau=self.tau)

    @property
    def adiabatic(self) -> bool:
        return math.isinf(self.tau)

    def replace(self, **changes: Any) -> "CycleConfig":
        return CycleConfig.model_validate({**self.model_dump(), **changes})


class MachineRegime(str, Enum):
    ENGINE = "Engine"
    REFRIGERATOR = "Refrigerator"
    ACCELERATOR = "Accelerator"
    HEATER = "Heater"
    NONE = "None"


class CycleResult(BaseModel):
    model_config = ConfigDict(frozen=True)

    E_A: float
    E_B: float
    E_C: float
    E_D: float
    W1: float
    W2: float
    W: float
    Q_H: float
    Q_L: float
    eta: Optional[float] = None
    regime: MachineRegime = MachineRegime.NONE
    W_irr: Optional[float] = None
    xi: Optional[float] = None
    closure_distance: float = 0.0
    non_cyclic: bool = False


class LocalCycleResult(BaseModel):
    model_config = ConfigDict(frozen=True)

    E_AL: float
    E_BL: float
    E_CL: float
    E_DL: float
    W_L: float
    Q_HL: float
    eta_L: Optional[float] = None
    P_L: Optional[float] = None
    probabilities: Optional[TransitionProbabilities] = None


class SweepAxis(BaseModel):
    model_config = ConfigDict(frozen=True)

    name: str
    values: List[float]

    @field_validator("name")
    @classmethod
    def _whitelisted(cls, name: str) -> str:
        if name not in SWEEP_AXES:
            raise ValueError(f"axis must be one of: {SWEEP_AXES}")
        return name

    @field_validator("values")
    @classmethod
    def _increasing(cls, values: List[float]) -> List[float]:
        if not values:
            raise ValueError("axis values must be non-empty")
        if any(b <= a for a, b in zip(values, values[1:])):
            raise ValueError("axis values must be strictly increasing")
        return values


class SweepSpec(BaseModel):
    model_config = ConfigDict(frozen=True)

    base: CycleConfig = Field(default_factory=CycleConfig)
    axis1: SweepAxis
    axis2: Optional[SweepAxis] = None
    outputs: List[str] = Field(default_factory=lambda: ["W", "Q_H", "Q_L", "eta", "regime"])
    mode: Literal["numeric", "closed_form", "local"] = "numeric"

    @model_validator(mode="after")
    def _distinct_axes(self) -> "SweepSpec":
        if self.axis2 is not None and self.axis2.name == self.axis1.name:
            raise ValueError("axis1 and axis2 must differ")
        return self

    @property
    def axes(self) -> List[SweepAxis]:
        return [a for a in (self.axis1, self.axis2) if a is not None]


class RunRecord(BaseModel):
    model_config = ConfigDict(ser_json_inf_nan="constants")

    config_hash: str
    columns: List[str]
    rows: List[Dict[str, Any]]
    metadata: Dict[str, Any]


class ClosedFormResult(BaseModel):
    """Quasistatic corner energies and totals from the Gibbs-weight formulas."""

    model_config = ConfigDict(frozen=True)

    E_A: float
    E_B: float
    E_C: float
    E_D: float
    W: float
    Q_H: float
    Q_L: float
    eta: float


class FiniteTimeResult(BaseModel):
    model_config = ConfigDict(frozen=True)

    xi: float
    W_tau: float
    Q_tau: float
    eta_tau: float


class CornerStates(BaseModel):
    """Density matrices at A, B, C, D and after the closing cold stroke."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    rho_A: np.ndarray
    rho_B: np.ndarray
    rho_C: np.ndarray
    rho_D: np.ndarray
    rho_final: np.ndarray
    xi: Optional[float] = None


class ThermalizationPoint(BaseModel):
    model_config = ConfigDict(frozen=True)

    t_h: float
    Q_Ht: float
    W_t: float
    D: float
    eta_t: Optional[float] = None


class PowerPoint(BaseModel):
    model_config = ConfigDict(frozen=True)

    tau: float
    P_L: float
    eta_L: Optional[float] = None
