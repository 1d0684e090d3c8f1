#!/usr/bin/env python3
"""
Oracle Check Suite
解析结果与网格数值结果逐项比对
"""

import math
import time
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, Iterable, List, Optional

import numpy as np
import pandas as pd

from config.settings import settings
from core.exceptions import OracleCheckError, OscillatorError, ValidationError, convert_error_to_response
from core.logger import log_oracle_check, oracle_logger
from dynamics.entanglement import SpectralData, eigenvalue, spectral, von_neumann_entropy
from dynamics.ermakov import solve_ermakov
from dynamics.excited import excited_coefficients
from dynamics.gaussian import Party, purity, reduced_A
from dynamics.model import build_model
from dynamics.oracle import (
    grid_entropy, grid_for_state, grid_moments, grid_purity, grid_spectrum, partial_trace, psi_on_grid,
)
from dynamics.state import ModeState
from dynamics.wigner import second_moments, wigner_marginal
from runner.presets import PRESETS, FigurePreset, get_preset

EIGEN_CHECK_COUNT = 5
EIGEN_CHECK_FLOOR = 1e-6
REPORT_COLUMNS = ("preset", "case", "t", "quantity", "analytic", "oracle", "abs_delta", "tolerance", "verdict")

@dataclass
class OracleRow:
    preset: str
    case: str
    t: float
    quantity: str
    analytic: float
    oracle: float
    abs_delta: float
    tolerance: float
    verdict: str

@dataclass
class OracleReport:
    rows: List[OracleRow] = field(default_factory=list)
    metadata: Dict[str, Any] = field(default_factory=dict)

    @property
    def failures(self) -> List[OracleRow]:
        return [row for row in self.rows if row.verdict == "fail"]

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame([asdict(row) for row in self.rows], columns=list(REPORT_COLUMNS))

    def summary(self) -> Dict[str, int]:
        counts = {"pass": 0, "fail": 0, "informational": 0}
        for row in self.rows:
            counts[row.verdict] = counts.get(row.verdict, 0) + 1
        return counts

class _Recorder:
    """Collects rows for one (preset, case, t)."""

    def __init__(self, report: OracleReport, preset: str, case: str, t: float):
        self.report = report
        self.preset = preset
        self.case = case
        self.t = t

    def compare(self, quantity: str, analytic, oracle, tolerance: float, verdict: Optional[str] = None):
        analytic, oracle = float(analytic), float(oracle)
        delta = abs(analytic - oracle)
        if verdict is None:
            verdict = "pass" if delta <= tolerance else "fail"
        log_oracle_check(f"{self.preset}/{self.case}/t={self.t:g}/{quantity}", analytic, oracle, tolerance, verdict)
        self.report.rows.append(OracleRow(self.preset, self.case, self.t, quantity,
                                          analytic, oracle, delta, tolerance, verdict))

    def failed(self, quantity: str, error: OscillatorError):
        oracle_logger.warning(f"{self.preset}/{self.case}/t={self.t:g}: {error.error_code} - {error.message}")
        self.report.rows.append(OracleRow(self.preset, self.case, self.t, quantity,
                                          math.nan, math.nan, math.nan, 0.0, "fail"))

def _states(preset: FigurePreset, variable: str, value: float, times: List[float]) -> ModeState:
    cfg = preset.config(**{variable: value})
    modes = build_model(cfg.schedule())
    grid = np.array(times, dtype=float)
    first = solve_ermakov(modes.profile(1), grid, mode=1)
    second = solve_ermakov(modes.profile(2), grid, mode=2)
    return ModeState.from_trajectories(first, second, modes.alpha)

def check_ground(rec: _Recorder, state: ModeState, points: Optional[int], xi_offset: float,
                 convergence: bool = False):
    """Purity, entropy, leading eigenvalues, moments and trace of ρᴬ₍₀,₀₎."""
    tol = settings.oracle
    grid = grid_for_state(state, points=points)
    psi = psi_on_grid(0, 0, state, grid)
    rho = partial_trace(psi, grid.spacing, Party.A, grid.axis())
    eigs = grid_spectrum(rho)

    g = reduced_A(*state.args)
    s = spectral(g)
    if xi_offset:
        s = SpectralData(epsilon=s.epsilon, xi=s.xi + xi_offset, party=s.party)
    entropy = von_neumann_entropy(s)

    rec.compare("purity", purity(g), grid_purity(rho), tol.purity_tol)
    rec.compare("entropy", entropy, grid_entropy(eigs), tol.entropy_tol)
    for k in range(EIGEN_CHECK_COUNT):
        p_k = eigenvalue(k, s)
        if p_k <= EIGEN_CHECK_FLOOR:
            break
        rec.compare(f"eigen_{k}", p_k, eigs[k], tol.eigen_tol)

    x2, p2 = second_moments(wigner_marginal(*state.args))
    grid_x2, grid_p2 = grid_moments(psi, grid, Party.A)
    rec.compare("x2", x2, grid_x2, tol.moment_tol)
    rec.compare("p2", p2, grid_p2, tol.moment_tol)
    rec.compare("trace", 1.0, rho.trace, tol.trace_tol)

    if convergence:
        coarse_error = abs(grid_entropy(eigs) - float(entropy))
        fine = grid.refined()
        fine_psi = psi_on_grid(0, 0, state, fine)
        fine_entropy = grid_entropy(grid_spectrum(partial_trace(fine_psi, fine.spacing, Party.A, fine.axis())))
        fine_error = abs(fine_entropy - float(entropy))
        if points is not None and points < tol.grid_points:
            verdict = "informational"
        elif fine_error <= tol.entropy_tol or fine_error <= coarse_error / 4.0:
            verdict = "pass"
        else:
            verdict = "fail"
        rec.compare("convergence", entropy, fine_entropy, tol.entropy_tol, verdict=verdict)

def check_excited(rec: _Recorder, state: ModeState, points: Optional[int]):
    """Trace, mixedness ratio and Γ of the (0,1) sector."""
    tol = settings.oracle
    grid = grid_for_state(state, 0, 1, points=points)
    psi00 = psi_on_grid(0, 0, state, grid)
    psi01 = psi_on_grid(0, 1, state, grid)
    rho00 = partial_trace(psi00, grid.spacing, Party.A, grid.axis())
    rho01 = partial_trace(psi01, grid.spacing, Party.A, grid.axis())
    coeffs = excited_coefficients(state)

    rec.compare("trace01", 1.0, rho01.trace, tol.trace_tol)
    rec.compare("r", coeffs.r, grid_purity(rho01) / grid_purity(rho00), tol.purity_tol)
    x2, p2 = grid_moments(psi01, grid, Party.A)
    rec.compare("Gamma", coeffs.gamma, 4.0 * x2 * p2, tol.moment_tol)

def run_oracle_suite(presets: Optional[Iterable[str]] = None, points: Optional[int] = None,
                     xi_offset: float = 0.0) -> OracleReport:
    """
    运行数值校验

    Args:
        presets: preset names, all of them by default
        points: fixed grid size per axis; chosen per state when omitted
        xi_offset: shift added to the analytic ξ (negative control)

    Returns:
        OracleReport; grid failures are recorded as failing rows, not raised
    """
    if points is not None and (points % 2 == 0 or points < settings.oracle.min_grid_points):
        raise ValidationError(f"grid points must be odd and >= {settings.oracle.min_grid_points}, got {points}",
                              field="points", value=points)
    names = list(presets) if presets else list(PRESETS)
    report = OracleReport(metadata={"presets": names, "points": points, "xi_offset": xi_offset,
                                    "tolerances": settings.oracle.model_dump(exclude={"times"})})
    start = time.perf_counter()

    for name in names:
        preset = get_preset(name)
        times = sorted({0.0, *(t for t in settings.oracle.times
                               if preset.oracle_t_max is None or t <= preset.oracle_t_max)})
        excited = name == "fig4"
        for variable, value in preset.oracle_cases:
            case = f"{variable}={value:.6g}"
            states = _states(preset, variable, value, times)
            for index, t in enumerate(times):
                rec = _Recorder(report, name, case, t)
                state = states.at(index)
                try:
                    if excited:
                        check_excited(rec, state, points)
                    else:
                        check_ground(rec, state, points, xi_offset, convergence=index == 1)
                except OscillatorError as e:
                    rec.failed("grid", e)

    summary = report.summary()
    oracle_logger.info(f"Oracle suite {names} - {summary} - Duration: {time.perf_counter() - start:.2f}s")
    return report

def ensure_passed(report: OracleReport) -> OracleReport:
    if not report.passed:
        failed = report.failures
        raise OracleCheckError(len(failed), details={
            "checks": [f"{row.preset}/{row.case}/t={row.t:g}/{row.quantity}" for row in failed[:20]],
        })
    return report

def run_oracle_suite_safe(presets: Optional[Iterable[str]] = None, points: Optional[int] = None) -> Dict[str, Any]:
    try:
        report = run_oracle_suite(presets, points)
        frame = report.to_frame()
        return {
            "ok": report.passed,
            "summary": report.summary(),
            "metadata": report.metadata,
            "rows": frame.to_dict(orient="records"),
        }
    except OscillatorError as e:
        return convert_error_to_response(e)

if __name__ == "__main__":
    result = run_oracle_suite(["fig3"])
    print(result.to_frame().to_string(index=False))
    print(result.summary())
