#!/usr/bin/env python3
"""
Logging Configuration
日志: 控制台走 stderr, 可选轮转文件; stdout 只留给 CLI 数据
"""

import logging
import logging.handlers
import sys
from pathlib import Path
from typing import Dict, Optional

from config.settings import settings

ROOT_LOGGER = "oscillators"

class ColoredFormatter(logging.Formatter):
    """按级别着色的控制台格式"""

    LEVEL_COLORS = {
        logging.DEBUG: "36",
        logging.INFO: "32",
        logging.WARNING: "33",
        logging.ERROR: "31",
        logging.CRITICAL: "35",
    }

    def format(self, record: logging.LogRecord) -> str:
        # 文件 handler 共用同一个 record, 只改副本
        tinted = logging.makeLogRecord(record.__dict__)
        code = self.LEVEL_COLORS.get(record.levelno)
        if code:
            tinted.levelname = f"\033[{code}m{record.levelname}\033[0m"
        return super().format(tinted)

def _console_handler(fmt: str, colored: bool) -> logging.Handler:
    handler = logging.StreamHandler(sys.stderr)
    use_color = colored and sys.stderr.isatty()
    handler.setFormatter(ColoredFormatter(fmt) if use_color else logging.Formatter(fmt))
    return handler

def _file_handler(path: Path, fmt: str) -> logging.Handler:
    path.parent.mkdir(parents=True, exist_ok=True)
    handler = logging.handlers.RotatingFileHandler(
        path,
        maxBytes=settings.logging.max_size,
        backupCount=settings.logging.backup_count,
        encoding="utf-8",
    )
    handler.setFormatter(logging.Formatter(fmt))
    return handler

def setup_logger(
    name: str = ROOT_LOGGER,
    level: Optional[str] = None,
    log_file: Optional[str] = None,
    enable_console: bool = True,
    enable_colors: bool = True,
) -> logging.Logger:
    """
    配置并返回一个日志记录器; 重复调用会替换已有 handler

    Args:
        name: logger name
        level: overrides LOG_LEVEL
        log_file: overrides LOG_FILE_PATH
        enable_console: attach the stderr handler
        enable_colors: ANSI colours when stderr is a terminal
    """
    log = logging.getLogger(name)
    log.handlers.clear()
    log.propagate = False
    log.setLevel((level or settings.logging.level).upper())

    fmt = settings.logging.format
    if enable_console:
        log.addHandler(_console_handler(fmt, enable_colors))
    target = log_file or settings.logging.file_path
    if target:
        log.addHandler(_file_handler(Path(target), fmt))
    return log

def _channel(suffix: str) -> logging.Logger:
    # 各通道写各自的文件, 仅在配置了 LOG_FILE_PATH 时
    log_file = f"logs/{suffix}.log" if settings.logging.file_path else None
    return setup_logger(f"{ROOT_LOGGER}.{suffix}", log_file=log_file)

logger = setup_logger()
request_logger = _channel("requests")
solver_logger = _channel("solver")
oracle_logger = _channel("oracle")

def log_request(method: str, path: str, status_code: int, duration: float, user_ip: str = "unknown"):
    request_logger.info(f"{method} {path} -> {status_code} in {duration:.3f}s from {user_ip}")

def log_solver_run(mode: int, method: str, samples: int, duration: float, success: bool = True,
                   error: Optional[str] = None):
    """记录一次Ermakov求解"""
    fields: Dict[str, object] = {"mode": mode, "method": method, "samples": samples, "duration": f"{duration:.3f}s"}
    if error:
        fields["error"] = error
    message = "Ermakov " + " ".join(f"{key}={value}" for key, value in fields.items())
    if success:
        solver_logger.debug(message)
    else:
        solver_logger.error(message)

def log_oracle_check(quantity: str, analytic: float, oracle: float, tolerance: float, verdict: str):
    """记录单项数值校验"""
    message = (
        f"Oracle {quantity}: analytic={analytic:.10g} grid={oracle:.10g} "
        f"|Δ|={abs(analytic - oracle):.3e} tol={tolerance:.1e} -> {verdict.upper()}"
    )
    (oracle_logger.warning if verdict == "fail" else oracle_logger.debug)(message)

class LoggerMixin:
    """按类名取 oscillators.<classname> 记录器"""

    @property
    def logger(self) -> logging.Logger:
        return logging.getLogger(f"{ROOT_LOGGER}.{type(self).__name__.lower()}")

if __name__ == "__main__":
    demo = setup_logger(f"{ROOT_LOGGER}.demo", level="DEBUG")
    demo.debug("debug message")
    demo.info("info message")
    log_request("POST", "/api/simulate", 200, 0.156, "127.0.0.1")
    log_solver_run(1, "closed-form:quench", 1001, 0.002)
    log_oracle_check("purity", 0.8, 0.80000001, 1e-4, "pass")
