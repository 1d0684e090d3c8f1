#!/usr/bin/env python3
"""
Custom Exceptions
自定义异常类
"""

from functools import wraps
from typing import Optional, Any, Dict

class OscillatorError(Exception):
    """基础异常类"""

    exit_code = 1

    def __init__(self, message: str, error_code: str = None, details: Dict[str, Any] = None):
        self.message = message
        self.error_code = error_code or "UNKNOWN_ERROR"
        self.details = details or {}
        super().__init__(self.message)

class ConfigurationError(OscillatorError):
    """配置错误"""

    exit_code = 2

    def __init__(self, message: str, field: str = None, details: Dict[str, Any] = None):
        details = details or {}
        if field:
            details["field"] = field
        super().__init__(message, "CONFIG_ERROR", details)

class ValidationError(OscillatorError):
    """输入验证错误"""

    exit_code = 2

    def __init__(self, message: str, field: str = None, value: Any = None, details: Dict[str, Any] = None):
        details = details or {}
        if field:
            details["field"] = field
        if value is not None:
            details["value"] = value
        super().__init__(message, "VALIDATION_ERROR", details)

class DomainError(OscillatorError):
    """参数超出公式定义域"""

    exit_code = 3

    def __init__(self, message: str, parameter: str = None, value: Any = None, hint: str = None,
                 details: Dict[str, Any] = None):
        details = details or {}
        if parameter:
            details["parameter"] = parameter
        if value is not None:
            details["value"] = value
        if hint:
            details["hint"] = hint
        super().__init__(message, "DOMAIN_ERROR", details)

class ScheduleError(OscillatorError):
    """频率表不满足常数旋转角条件"""

    exit_code = 3

    def __init__(self, message: str, sample_index: int = None, ratio: float = None,
                 details: Dict[str, Any] = None):
        details = details or {}
        if sample_index is not None:
            details["sample_index"] = sample_index
        if ratio is not None:
            details["ratio"] = ratio
        super().__init__(message, "SCHEDULE_ERROR", details)

class IntegrationError(OscillatorError):
    """Ermakov方程积分失败"""

    exit_code = 3

    def __init__(self, message: str, last_good_time: float = None, details: Dict[str, Any] = None):
        details = details or {}
        if last_good_time is not None:
            details["last_good_time"] = last_good_time
        self.last_good_time = last_good_time
        super().__init__(message, "INTEGRATION_ERROR", details)

class TruncationError(OscillatorError):
    """Schmidt级数截断不足"""

    exit_code = 3

    def __init__(self, xi: float, terms: int, tail_bound: float, details: Dict[str, Any] = None):
        details = details or {}
        details.update({"xi": xi, "terms": terms, "tail_bound": tail_bound})
        message = f"Truncation at N={terms} leaves tail xi^N={tail_bound:.3e} (xi={xi:.6g})"
        super().__init__(message, "TRUNCATION_ERROR", details)

class GridInadequacyError(OscillatorError):
    """积分网格不足以覆盖态"""

    exit_code = 3

    def __init__(self, message: str, deviation: float = None, details: Dict[str, Any] = None):
        details = details or {}
        if deviation is not None:
            details["deviation"] = deviation
        super().__init__(message, "GRID_ERROR", details)

class OracleCheckError(OscillatorError):
    """数值校验未通过"""

    exit_code = 4

    def __init__(self, failed: int, details: Dict[str, Any] = None):
        details = details or {}
        details["failed"] = failed
        super().__init__(f"{failed} oracle check(s) failed", "ORACLE_CHECK_FAILED", details)

# 异常处理装饰器
def handle_exceptions(default_return=None, log_error=True):
    """异常处理装饰器"""
    def decorator(func):
        @wraps(func)
        def wrapper(*args, **kwargs):
            try:
                return func(*args, **kwargs)
            except OscillatorError:
                # 重新抛出自定义异常
                raise
            except Exception as e:
                # 将其他异常包装为自定义异常
                if log_error:
                    from core.logger import logger
                    logger.error(f"Unexpected error in {func.__name__}: {str(e)}", exc_info=True)

                if default_return is not None:
                    return default_return

                raise OscillatorError(
                    f"Unexpected error in {func.__name__}: {str(e)}",
                    "UNEXPECTED_ERROR",
                    {"function": func.__name__, "original_error": str(e)}
                ) from e
        return wrapper
    return decorator

def exit_code_for(error: BaseException) -> int:
    """CLI退出码: 2 配置, 3 数值, 4 校验失败, 1 其他"""
    if isinstance(error, OscillatorError):
        return error.exit_code
    return 1

# 异常转换工具
def convert_error_to_response(error: OscillatorError) -> Dict[str, Any]:
    """将异常转换为API响应格式"""
    return {
        "ok": False,
        "error": error.error_code,
        "message": error.message,
        "details": error.details if isinstance(error, OscillatorError) else {}
    }

if __name__ == "__main__":
    errors = [
        DomainError("quench_b requires omega_f > 0", parameter="omega_f", value=0.0, hint="use free_b or inverted_b"),
        GridInadequacyError("grid too coarse", details={"needed": 4097}),
    ]
    for error in errors:
        print(f"{type(error).__name__}: exit={exit_code_for(error)} {convert_error_to_response(error)}")

    @handle_exceptions(default_return=float("nan"))
    def broken_entropy():
        raise ZeroDivisionError("xi = 1")

    print(f"fallback: {broken_entropy()}")
