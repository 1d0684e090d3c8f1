#!/usr/bin/env python3
"""
Figure Presets
内置场景: 两个简正模玩具模型与耦合振子淬火
"""

import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

from core.exceptions import ConfigurationError
from core.logger import logger
from runner.scenario import ScenarioConfig, SweepResult, find_crossing, parse_scenario, run_sweep

@dataclass(frozen=True)
class Panel:
    """One emitted table: a sweep of `variable` over `values`."""

    suffix: str
    variable: str
    values: Tuple[float, ...]
    quantities: Tuple[str, ...]

@dataclass(frozen=True)
class FigurePreset:
    name: str
    description: str
    base: Dict[str, Any]
    panels: Tuple[Panel, ...]
    oracle_cases: Tuple[Tuple[str, float], ...]
    oracle_t_max: Optional[float] = None
    published_crossing: Optional[float] = None

    def config(self, samples: Optional[int] = None, t_end: Optional[float] = None, **changes) -> ScenarioConfig:
        data = dict(self.base)
        data.setdefault("name", self.name)
        if samples is not None:
            data["samples"] = samples
        if t_end is not None:
            data["t_end"] = t_end
        data.update(changes)
        return parse_scenario(data)

@dataclass(eq=False)
class FigureResult:
    preset: FigurePreset
    panels: Dict[str, SweepResult]
    crossing: Optional[float] = None
    metadata: Dict[str, Any] = field(default_factory=dict)

_QUENCH = {"model": "quench", "omega1_i": 1.0, "omega1_f": 1.3, "omega2_i": 1.5, "omega2_f": 1.8, "J": 1.1}
_J_VALUES = (1.1, 0.9, 0.6)

PRESETS: Dict[str, FigurePreset] = {
    "fig1": FigurePreset(
        name="fig1",
        description="normal-mode toy model, both modes released to smaller positive frequencies",
        base={"model": "toy1", "alpha": math.pi / 4,
              "wtilde1_i": 1.0, "wtilde1_f": 0.0, "wtilde2_i": 2.0, "wtilde2_f": 0.5},
        panels=(
            Panel("a", "alpha", (math.pi / 4, math.pi / 12, math.pi / 24), ("S_von",)),
            Panel("b", "alpha", (math.pi / 4, math.pi / 8, 0.0), ("Omega",)),
        ),
        oracle_cases=(("alpha", math.pi / 4), ("alpha", math.pi / 12)),
        published_crossing=0.773,
    ),
    "fig2": FigurePreset(
        name="fig2",
        description="normal-mode toy model with mode 1 inverted (wtilde1_f = 0.7i)",
        base={"model": "toy2", "alpha": math.pi / 4,
              "wtilde1_i": 1.0, "wtilde1_f": "0.7i", "wtilde2_i": 2.0, "wtilde2_f": 0.5},
        panels=(
            Panel("a", "alpha", (math.pi / 4, math.pi / 8, math.pi / 24), ("S_von",)),
            Panel("b", "alpha", (math.pi / 4, math.pi / 8, 0.0), ("Omega",)),
        ),
        oracle_cases=(("alpha", math.pi / 4), ("alpha", math.pi / 8)),
        oracle_t_max=2.0,
        published_crossing=0.713,
    ),
    "fig3": FigurePreset(
        name="fig3",
        description="sudden quench (1, 1.5) -> (1.3, 1.8): entropies and uncertainty",
        base=dict(_QUENCH),
        panels=(
            Panel("a", "J", _J_VALUES, ("S_von",)),
            Panel("b", "renyi_n", (2, 4, 100), ("S_renyi",)),
            Panel("c", "J", _J_VALUES, ("Omega",)),
        ),
        oracle_cases=tuple(("J", j) for j in _J_VALUES),
    ),
    "fig4": FigurePreset(
        name="fig4",
        description="sudden quench, ground/first-excited sector: mixedness ratio and uncertainty",
        base=dict(_QUENCH),
        panels=(
            Panel("a", "J", _J_VALUES, ("r",)),
            Panel("b", "J", _J_VALUES, ("Gamma", "Omega")),
        ),
        oracle_cases=tuple(("J", j) for j in _J_VALUES),
    ),
}

def get_preset(name: str) -> FigurePreset:
    try:
        return PRESETS[name]
    except KeyError:
        raise ConfigurationError(f"unknown preset '{name}'; choose from {', '.join(PRESETS)}",
                                 field="preset") from None

def run_figure(name: str, samples: Optional[int] = None, t_end: Optional[float] = None) -> FigureResult:
    """
    生成图表数据

    Runs every panel sweep of the preset. Toy presets also locate the first
    Ω(π/4)/Ω(0) crossing and report it next to the published value.
    """
    preset = get_preset(name)
    panels: Dict[str, SweepResult] = {}
    for panel in preset.panels:
        cfg = preset.config(samples=samples, t_end=t_end, quantities=list(panel.quantities))
        panels[f"{preset.name}{panel.suffix}"] = run_sweep(cfg, panel.variable, list(panel.values))

    crossing = None
    metadata: Dict[str, Any] = {"preset": preset.name, "description": preset.description,
                                "panels": list(panels)}
    if preset.published_crossing is not None:
        crossing = find_crossing(preset.config(samples=samples, t_end=t_end))
        metadata["crossing"] = {"computed": crossing, "published": preset.published_crossing}
        logger.info(f"{preset.name} Omega crossing: computed={crossing} published={preset.published_crossing}")
    return FigureResult(preset=preset, panels=panels, crossing=crossing, metadata=metadata)

def list_presets() -> List[Dict[str, str]]:
    return [{"name": p.name, "description": p.description} for p in PRESETS.values()]

if __name__ == "__main__":
    result = run_figure("fig1", samples=201)
    for key, sweep in result.panels.items():
        print(key, sweep.frame.shape)
    print(result.metadata["crossing"])
