#!/usr/bin/env python3
"""
Application Configuration Management
支持环境变量和配置文件的设置管理
"""

import math
import os
from pathlib import Path
from typing import List, Optional
from pydantic import Field
from pydantic_settings import BaseSettings
from enum import Enum

class Environment(str, Enum):
    """环境枚举"""
    DEVELOPMENT = "development"
    PRODUCTION = "production"
    TESTING = "testing"

class OutputFormat(str, Enum):
    """结果文件格式"""
    CSV = "csv"
    JSON = "json"

class SolverSettings(BaseSettings):
    """Ermakov积分器配置"""
    method: str = Field("DOP853", description="scipy solve_ivp 显式Runge-Kutta方法")
    rtol: float = Field(1e-12, description="相对误差容限")
    atol: float = Field(1e-12, description="绝对误差容限")
    max_step: float = Field(math.inf, description="最大步长")

    model_config = {"env_prefix": "SOLVER_", "env_file": ".env", "env_file_encoding": "utf-8", "case_sensitive": False, "extra": "ignore"}

class OracleSettings(BaseSettings):
    """数值积分校验(oracle)配置"""
    grid_points: int = Field(257, description="每轴默认格点数(奇数)")
    min_grid_points: int = Field(65, description="最少格点数")
    max_grid_points: int = Field(1025, description="最多格点数")
    width_factor: float = Field(8.0, description="半宽 = width_factor * 最大位置标准差")
    nyquist_factor: float = Field(10.0, description="pi/Δ >= nyquist_factor * 最大动量标准差")

    entropy_tol: float = Field(1e-3, description="熵容差")
    eigen_tol: float = Field(1e-4, description="本征值容差")
    purity_tol: float = Field(1e-4, description="纯度容差")
    moment_tol: float = Field(1e-4, description="二阶矩容差")
    trace_tol: float = Field(1e-4, description="迹容差")

    times: List[float] = Field(default_factory=lambda: [0.0, 0.5, 1.0, 2.0, 5.0], description="校验时间点")

    model_config = {"env_prefix": "ORACLE_", "env_file": ".env", "env_file_encoding": "utf-8", "case_sensitive": False, "extra": "ignore"}

class OutputSettings(BaseSettings):
    """输出配置"""
    format: OutputFormat = Field(OutputFormat.CSV, description="默认输出格式")
    significant_digits: int = Field(17, description="浮点有效位数")
    directory: str = Field("./output", description="默认输出目录")

    model_config = {"env_prefix": "OUTPUT_", "env_file": ".env", "env_file_encoding": "utf-8", "case_sensitive": False, "extra": "ignore"}

class ServerSettings(BaseSettings):
    """服务器配置"""
    host: str = Field("0.0.0.0", description="服务器主机")
    port: int = Field(8000, description="服务器端口")
    reload: bool = Field(True, description="是否启用热重载")
    workers: int = Field(1, description="工作进程数")

    # CORS配置
    cors_origins: List[str] = Field(default_factory=lambda: ["*"], description="允许的源")
    cors_credentials: bool = Field(True, description="是否允许凭据")

    model_config = {"env_prefix": "SERVER_", "env_file": ".env", "env_file_encoding": "utf-8", "case_sensitive": False, "extra": "ignore"}

class LoggingSettings(BaseSettings):
    """日志配置"""
    level: str = Field("INFO", description="日志级别")
    format: str = Field(
        "%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        description="日志格式"
    )
    file_path: Optional[str] = Field(None, description="日志文件路径")
    max_size: int = Field(10 * 1024 * 1024, description="日志文件最大大小")
    backup_count: int = Field(5, description="备份日志文件数量")

    model_config = {"env_prefix": "LOG_", "env_file": ".env", "env_file_encoding": "utf-8", "case_sensitive": False, "extra": "ignore"}

class AppSettings(BaseSettings):
    """应用主配置"""
    app_name: str = Field("coupled-oscillators", description="应用名称")
    app_version: str = Field("1.0.0", description="应用版本")
    environment: Environment = Field(Environment.DEVELOPMENT, description="运行环境")
    debug: bool = Field(False, description="是否启用调试模式")

    # 子配置
    solver: SolverSettings = Field(default_factory=SolverSettings)
    oracle: OracleSettings = Field(default_factory=OracleSettings)
    output: OutputSettings = Field(default_factory=OutputSettings)
    server: ServerSettings = Field(default_factory=ServerSettings)
    logging: LoggingSettings = Field(default_factory=LoggingSettings)

    model_config = {"env_file": ".env", "env_file_encoding": "utf-8", "case_sensitive": False, "extra": "ignore"}

# 全局配置实例
def get_settings() -> AppSettings:
    """获取应用配置"""
    return AppSettings()

# 创建全局配置对象
settings = get_settings()

# 配置validation
def validate_config(config: Optional[AppSettings] = None):
    """验证配置"""
    config = config or settings
    errors = []

    solver = config.solver
    if solver.rtol <= 0 or solver.atol <= 0:
        errors.append(f"Solver tolerances must be positive (rtol={solver.rtol}, atol={solver.atol})")

    oracle = config.oracle
    for name in ("grid_points", "min_grid_points", "max_grid_points"):
        value = getattr(oracle, name)
        if value % 2 == 0:
            errors.append(f"ORACLE_{name.upper()} must be odd, got {value}")
    if not oracle.min_grid_points <= oracle.grid_points <= oracle.max_grid_points:
        errors.append(
            f"ORACLE_GRID_POINTS={oracle.grid_points} outside "
            f"[{oracle.min_grid_points}, {oracle.max_grid_points}]"
        )
    if oracle.width_factor <= 0 or oracle.nyquist_factor <= 0:
        errors.append("ORACLE_WIDTH_FACTOR and ORACLE_NYQUIST_FACTOR must be positive")
    for name in ("entropy_tol", "eigen_tol", "purity_tol", "moment_tol", "trace_tol"):
        if getattr(oracle, name) <= 0:
            errors.append(f"ORACLE_{name.upper()} must be positive")
    if any(t < 0 for t in oracle.times):
        errors.append(f"ORACLE_TIMES must be non-negative, got {oracle.times}")

    if config.output.significant_digits < 1:
        errors.append("OUTPUT_SIGNIFICANT_DIGITS must be at least 1")
    output_dir = Path(config.output.directory)
    if output_dir.exists() and not os.access(output_dir, os.W_OK):
        errors.append(f"Output directory is not writable: {output_dir}")

    if errors:
        raise ValueError(f"Configuration validation failed:\n" + "\n".join(f"- {error}" for error in errors))

if __name__ == "__main__":
    # 配置测试
    print(f"App Name: {settings.app_name}")
    print(f"Environment: {settings.environment}")
    print(f"Solver: {settings.solver.method} rtol={settings.solver.rtol} atol={settings.solver.atol}")
    print(f"Oracle grid: {settings.oracle.grid_points} points, times={settings.oracle.times}")
    print(f"Server: {settings.server.host}:{settings.server.port}")

    try:
        validate_config()
        print("✅ Configuration validation passed")
    except ValueError as e:
        print(f"❌ Configuration validation failed: {e}")
