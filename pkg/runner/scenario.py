#!/usr/bin/env python3
"""
Scenario Runner
场景配置、时间演化计算与参数扫描
"""

import json
import math
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Union

import numpy as np
import pandas as pd
from dotenv import dotenv_values
from pydantic import BaseModel, ConfigDict, Field, ValidationError as PydanticValidationError, field_validator
from scipy.optimize import bisect

from config.settings import OutputFormat, settings
from core.exceptions import (
    ConfigurationError, IntegrationError, OscillatorError, ValidationError, convert_error_to_response,
    handle_exceptions,
)
from core.logger import LoggerMixin, logger
from dynamics.entanglement import (
    min_entropy, renyi_entropy, schmidt_data, spectral, von_neumann_entropy,
)
from dynamics.ermakov import ErmakovTrajectory, solve_ermakov
from dynamics.excited import excited_coefficients
from dynamics.gaussian import purity, reduced_A
from dynamics.model import FrequencySchedule, NormalModes, ScheduleKind, build_model
from dynamics.state import ModeState
from dynamics.wigner import uncertainty_omega

QUANTITIES = (
    "S_von", "S_renyi", "S_min", "xi", "purity", "Omega", "Omega_tilde", "r", "Gamma", "schmidt_angles",
)
SWEEP_VARIABLES = ("J", "alpha", "renyi_n")
CROSSING_XTOL = 1e-4

_SCHEDULE_FIELDS = (
    "omega1_i", "omega1_f", "omega2_i", "omega2_f", "J",
    "alpha", "wtilde1_i", "wtilde1_f", "wtilde2_i", "wtilde2_f",
)

def _split_list(value):
    if isinstance(value, str):
        return [item.strip() for item in value.split(",") if item.strip()]
    return value

class ScenarioConfig(BaseModel):
    """
    One simulation request.

    Schedule keys are flat so the same schema reads from key = value files,
    JSON and HTTP bodies. `table` points at a CSV of samples for tabulated
    schedules (columns t, omega1_sq, omega2_sq, J) or sampled normal modes
    (columns t, wtilde1_sq, wtilde2_sq).
    """

    model_config = ConfigDict(extra="forbid")

    name: Optional[str] = None
    model: ScheduleKind

    omega1_i: Optional[float] = None
    omega1_f: Optional[float] = None
    omega2_i: Optional[float] = None
    omega2_f: Optional[float] = None
    J: Optional[float] = None
    alpha: Optional[float] = None
    wtilde1_i: Optional[float] = None
    wtilde1_f: Optional[Union[float, str]] = None
    wtilde2_i: Optional[float] = None
    wtilde2_f: Optional[Union[float, str]] = None
    table: Optional[str] = None

    t_end: float = Field(10.0, gt=0)
    samples: int = Field(1001, ge=2)
    quantities: List[str] = Field(default_factory=lambda: ["S_von", "xi", "purity", "Omega", "Omega_tilde"])
    renyi_orders: List[int] = Field(default_factory=lambda: [2])
    ermakov_method: str = "auto"

    output: Optional[str] = None
    format: OutputFormat = OutputFormat.CSV

    @field_validator("quantities", "renyi_orders", mode="before")
    @classmethod
    def _parse_list(cls, value):
        return _split_list(value)

    @field_validator("quantities")
    @classmethod
    def _known_quantities(cls, value):
        unknown = [q for q in value if q not in QUANTITIES]
        if unknown:
            raise ValueError(f"unknown quantities {unknown}; choose from {', '.join(QUANTITIES)}")
        if not value:
            raise ValueError("at least one quantity is required")
        return value

    @field_validator("renyi_orders")
    @classmethod
    def _renyi_orders(cls, value):
        bad = [n for n in value if n < 2]
        if bad:
            raise ValueError(f"Renyi orders must be >= 2, got {bad}")
        return value

    @field_validator("ermakov_method")
    @classmethod
    def _method(cls, value):
        if value not in ("auto", "closed", "numeric"):
            raise ValueError("ermakov_method must be auto, closed or numeric")
        return value

    def time_grid(self) -> np.ndarray:
        return np.linspace(0.0, self.t_end, self.samples)

    def schedule(self) -> FrequencySchedule:
        """Validated FrequencySchedule for this scenario."""
        data: Dict[str, Any] = {"kind": self.model}
        for name in _SCHEDULE_FIELDS:
            value = getattr(self, name)
            if value is not None:
                data[name] = value
        if self.table:
            data.update(_read_table(self.model, self.table))
        try:
            return FrequencySchedule(**data)
        except PydanticValidationError as e:
            raise _configuration_error(e) from e

def _read_table(kind: ScheduleKind, path: str) -> Dict[str, List[float]]:
    """Sample table CSV -> schedule arrays."""
    try:
        frame = pd.read_csv(path)
    except (OSError, pd.errors.ParserError) as e:
        raise ConfigurationError(f"cannot read sample table {path}: {e}", field="table") from e

    if kind == ScheduleKind.TABULATED:
        columns = {"t": "samples_t", "omega1_sq": "omega1_sq", "omega2_sq": "omega2_sq", "J": "coupling"}
    else:
        columns = {"t": "samples_t", "wtilde1_sq": "wtilde1_sq_samples", "wtilde2_sq": "wtilde2_sq_samples"}
    missing = [c for c in columns if c not in frame.columns]
    if missing:
        raise ConfigurationError(f"sample table {path} lacks columns {missing}", field="table")
    return {target: frame[source].astype(float).tolist() for source, target in columns.items()}

def _configuration_error(error: PydanticValidationError) -> ConfigurationError:
    problems = error.errors()
    first = ".".join(str(part) for part in problems[0]["loc"]) if problems and problems[0]["loc"] else None
    lines = [
        f"{'.'.join(str(part) for part in problem['loc']) or '<root>'}: {problem['msg']}"
        for problem in problems
    ]
    return ConfigurationError(
        "Invalid scenario configuration:\n" + "\n".join(f"- {line}" for line in lines),
        field=first,
        details={"errors": lines},
    )

def parse_scenario(data: Dict[str, Any]) -> ScenarioConfig:
    try:
        return ScenarioConfig.model_validate(data)
    except PydanticValidationError as e:
        raise _configuration_error(e) from e

def load_scenario(path: Union[str, Path]) -> ScenarioConfig:
    """
    读取场景文件

    `.json` files are parsed as JSON, anything else as key = value text.
    A relative `table` path is resolved against the scenario file.
    """
    path = Path(path)
    if not path.is_file():
        raise ConfigurationError(f"scenario file not found: {path}", field="config")

    if path.suffix.lower() == ".json":
        try:
            data = json.loads(path.read_text(encoding="utf-8"))
        except json.JSONDecodeError as e:
            raise ConfigurationError(f"invalid JSON in {path}: {e}", field="config") from e
    else:
        data = {key.strip(): value for key, value in dotenv_values(path).items() if value not in (None, "")}

    if data.get("table") and not Path(data["table"]).is_absolute():
        data["table"] = str(path.parent / data["table"])
    return parse_scenario(data)

@dataclass(eq=False)
class RunResult:
    """Per-sample table plus a metadata block."""

    frame: pd.DataFrame
    metadata: Dict[str, Any]
    truncated_reason: Optional[str] = None

    def __len__(self) -> int:
        return len(self.frame)

@dataclass(eq=False)
class SweepResult:
    variable: str
    values: List[float]
    results: List[RunResult]
    frame: pd.DataFrame
    metadata: Dict[str, Any] = field(default_factory=dict)

def _solve_modes(modes: NormalModes, t: np.ndarray, method: str):
    first = solve_ermakov(modes.profile(1), t, mode=1, method=method)
    second = solve_ermakov(modes.profile(2), t, mode=2, method=method)
    return first, second

def quantity_columns(cfg: ScenarioConfig, state: ModeState) -> Dict[str, np.ndarray]:
    """Requested quantities, in config order, from the closed forms."""
    shape = np.shape(state.w1)
    g = reduced_A(*state.args)
    s = spectral(g)
    columns: Dict[str, Any] = {}
    omega_pair = None
    excited = None

    for quantity in cfg.quantities:
        if quantity == "S_von":
            columns["S_von"] = von_neumann_entropy(s)
        elif quantity == "S_renyi":
            for order in cfg.renyi_orders:
                columns[f"S_{order}"] = renyi_entropy(s, order)
        elif quantity == "S_min":
            columns["S_min"] = min_entropy(s)
        elif quantity == "xi":
            columns["xi"] = s.xi
        elif quantity == "purity":
            columns["purity"] = purity(g)
        elif quantity in ("Omega", "Omega_tilde"):
            if omega_pair is None:
                omega_pair = uncertainty_omega(*state.args)
            columns[quantity] = omega_pair[0] if quantity == "Omega" else omega_pair[1]
        elif quantity in ("r", "Gamma"):
            if excited is None:
                excited = excited_coefficients(state)
            columns[quantity] = excited.r if quantity == "r" else excited.gamma
        elif quantity == "schmidt_angles":
            angles = schmidt_data(*state.args)
            columns["theta"] = angles.theta
            columns["phi"] = angles.phi
            columns["kappa"] = angles.kappa
    return {name: np.broadcast_to(np.asarray(value, dtype=float), shape) for name, value in columns.items()}

def _diagnostics(first: ErmakovTrajectory, second: ErmakovTrajectory) -> Dict[str, np.ndarray]:
    out = {}
    for traj in (first, second):
        j = traj.mode
        out[f"b{j}"] = traj.b
        out[f"bdot{j}"] = traj.bdot
        out[f"tau{j}"] = traj.tau
        out[f"omega_prime{j}"] = traj.omega_prime
    return out

class ScenarioRunner(LoggerMixin):
    """场景运行器"""

    def run(self, cfg: ScenarioConfig) -> RunResult:
        start = time.perf_counter()
        modes = build_model(cfg.schedule())
        t = cfg.time_grid()
        truncated_reason = None

        try:
            first, second = _solve_modes(modes, t, cfg.ermakov_method)
        except IntegrationError as e:
            good = int(np.searchsorted(t, e.last_good_time or 0.0, side="right"))
            if good < 2:
                raise
            truncated_reason = f"integration failed after t={t[good - 1]:.6g}: {e.message}"
            self.logger.warning(f"Scenario truncated - {truncated_reason}")
            t = t[:good]
            first, second = _solve_modes(modes, t, cfg.ermakov_method)

        state = ModeState.from_trajectories(first, second, modes.alpha)
        table = {"t": t}
        table.update(quantity_columns(cfg, state))
        table.update(_diagnostics(first, second))
        frame = pd.DataFrame(table)

        finite = np.isfinite(frame.to_numpy(dtype=float)).all(axis=1)
        if not finite.all():
            bad = int(np.argmin(finite))
            truncated_reason = f"non-finite values from sample {bad} (t={t[bad]:.6g})"
            self.logger.warning(f"Scenario truncated - {truncated_reason}")
            frame = frame.iloc[:bad].reset_index(drop=True)

        metadata = {
            "app": settings.app_name,
            "version": settings.app_version,
            "config": cfg.model_dump(mode="json"),
            "normal_modes": {
                "alpha": modes.alpha,
                "wtilde1_sq_initial": modes.wtilde1_sq_initial,
                "wtilde2_sq_initial": modes.wtilde2_sq_initial,
                "wtilde1_sq_final": modes.wtilde1_sq_final,
                "wtilde2_sq_final": modes.wtilde2_sq_final,
            },
            "ermakov": {"mode1": first.method, "mode2": second.method},
            "tolerances": {"rtol": settings.solver.rtol, "atol": settings.solver.atol},
            "samples": len(frame),
            "truncated_reason": truncated_reason,
        }
        self.logger.info(
            f"Scenario {cfg.name or cfg.model.value} - Samples: {len(frame)} - "
            f"Duration: {time.perf_counter() - start:.3f}s"
        )
        return RunResult(frame=frame, metadata=metadata, truncated_reason=truncated_reason)

    def sweep(self, base: ScenarioConfig, variable: str, values: Sequence[float]) -> SweepResult:
        if variable not in SWEEP_VARIABLES:
            raise ConfigurationError(f"sweep variable must be one of {SWEEP_VARIABLES}, got {variable}",
                                     field="var")
        if not values:
            raise ConfigurationError("sweep needs at least one value", field="values")
        if variable == "J" and base.model != ScheduleKind.QUENCH:
            raise ConfigurationError("J sweeps need a quench scenario", field="var")
        if variable == "alpha" and base.model not in (ScheduleKind.TOY1, ScheduleKind.TOY2, ScheduleKind.NORMAL_MODES):
            raise ConfigurationError("alpha sweeps need a scenario with a free rotation angle", field="var")

        results, frames = [], []
        for value in values:
            if variable == "renyi_n":
                order = int(value)
                quantities = list(base.quantities)
                if "S_renyi" not in quantities:
                    quantities.append("S_renyi")
                cfg = _updated(base, renyi_orders=[order], quantities=quantities)
            else:
                cfg = _updated(base, **{variable: float(value)})
            result = self.run(cfg)
            frame = result.frame
            if variable == "renyi_n":
                frame = frame.rename(columns={f"S_{int(value)}": "S_renyi"})
            frames.append(frame.assign(sweep_value=float(value)))
            results.append(result)

        merged = pd.concat(frames, ignore_index=True)
        merged = merged[["sweep_value"] + [c for c in merged.columns if c != "sweep_value"]]
        metadata = {
            "sweep": {"variable": variable, "values": [float(v) for v in values]},
            "runs": [result.metadata for result in results],
        }
        return SweepResult(variable=variable, values=[float(v) for v in values], results=results,
                           frame=merged, metadata=metadata)

    def crossing(self, cfg: ScenarioConfig, alpha_high: float = math.pi / 4,
                 alpha_low: float = 0.0) -> Optional[float]:
        """
        First t > 0 where Ω(alpha_high) − Ω(alpha_low) changes sign,
        bisected to 1e-4. None when the sampled window shows no change.
        """
        if cfg.model not in (ScheduleKind.TOY1, ScheduleKind.TOY2, ScheduleKind.NORMAL_MODES):
            raise ConfigurationError("crossing detection needs a scenario with a free rotation angle",
                                     field="model")
        modes = build_model(cfg.schedule())
        t = cfg.time_grid()
        first, second = _solve_modes(modes, t, cfg.ermakov_method)

        def gap_on(traj1, traj2):
            high = ModeState.from_trajectories(traj1, traj2, alpha_high)
            low = ModeState.from_trajectories(traj1, traj2, alpha_low)
            return uncertainty_omega(*high.args)[0] - uncertainty_omega(*low.args)[0]

        def gap_at(s: float) -> float:
            grid = np.array([0.0, s]) if s > 0 else np.array([0.0])
            traj1, traj2 = _solve_modes(modes, grid, cfg.ermakov_method)
            return float(np.ravel(gap_on(traj1, traj2))[-1])

        gap = np.asarray(gap_on(first, second))
        for k in range(1, len(t)):
            if gap[k] == 0.0:
                return float(t[k])
            if gap[k - 1] * gap[k] < 0:
                return float(bisect(gap_at, t[k - 1], t[k], xtol=CROSSING_XTOL))
        return None

def _updated(cfg: ScenarioConfig, **changes) -> ScenarioConfig:
    data = cfg.model_dump()
    data.update(changes)
    return parse_scenario(data)

# 全局运行器实例
_global_runner = None

def get_runner() -> ScenarioRunner:
    """获取全局运行器实例"""
    global _global_runner
    if _global_runner is None:
        _global_runner = ScenarioRunner()
    return _global_runner

def run_scenario(cfg: ScenarioConfig) -> RunResult:
    return get_runner().run(cfg)

def run_sweep(base: ScenarioConfig, variable: str, values: Sequence[float]) -> SweepResult:
    return get_runner().sweep(base, variable, values)

def find_crossing(cfg: ScenarioConfig, alpha_high: float = math.pi / 4, alpha_low: float = 0.0) -> Optional[float]:
    return get_runner().crossing(cfg, alpha_high, alpha_low)

@handle_exceptions()
def _run_checked(cfg: ScenarioConfig) -> RunResult:
    return run_scenario(cfg)

def run_scenario_safe(cfg: Union[ScenarioConfig, Dict[str, Any]]) -> Dict[str, Any]:
    """安全运行场景，返回标准化响应"""
    try:
        if not isinstance(cfg, ScenarioConfig):
            cfg = parse_scenario(cfg)
        result = _run_checked(cfg)
        return {
            "ok": True,
            "metadata": result.metadata,
            "columns": list(result.frame.columns),
            "records": result.frame.to_dict(orient="records"),
        }
    except OscillatorError as e:
        logger.warning(f"Scenario failed: {e.error_code} - {e.message}")
        return convert_error_to_response(e)

if __name__ == "__main__":
    cfg = ScenarioConfig(model="quench", omega1_i=1.0, omega1_f=1.3, omega2_i=1.5, omega2_f=1.8, J=1.1,
                         t_end=5.0, samples=6, quantities=["S_von", "S_renyi", "Omega", "r", "Gamma"],
                         renyi_orders=[2, 4, 100])
    result = run_scenario(cfg)
    print(result.frame.iloc[:, :8].to_string(index=False))
