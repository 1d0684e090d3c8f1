import math

import pytest

from config.settings import AppSettings, OracleSettings, OutputFormat, SolverSettings, settings, validate_config

def test_defaults_validate():
    validate_config()
    assert settings.solver.method == "DOP853"
    assert settings.solver.max_step == math.inf
    assert settings.output.format == OutputFormat.CSV

def test_env_override(monkeypatch):
    monkeypatch.setenv("SOLVER_RTOL", "1e-9")
    monkeypatch.setenv("ORACLE_TIMES", "[0, 1.5]")
    assert SolverSettings().rtol == 1e-9
    assert OracleSettings().times == [0.0, 1.5]

@pytest.mark.parametrize("section,name,value,needle", [
    ("oracle", "grid_points", 256, "GRID_POINTS"),
    ("oracle", "grid_points", 2049, "outside"),
    ("oracle", "entropy_tol", 0.0, "ENTROPY_TOL"),
    ("oracle", "times", [-1.0], "ORACLE_TIMES"),
    ("solver", "rtol", -1.0, "tolerances"),
    ("output", "significant_digits", 0, "SIGNIFICANT_DIGITS"),
])
def test_invalid_settings(section, name, value, needle):
    config = AppSettings()
    setattr(getattr(config, section), name, value)
    with pytest.raises(ValueError) as excinfo:
        validate_config(config)
    assert needle in str(excinfo.value)
