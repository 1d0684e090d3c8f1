#!/usr/bin/env python3
"""
Coupled Oscillators FastAPI Application
耦合谐振子纠缠与不确定度计算服务
"""

import time
from typing import Any, Dict, Optional
from fastapi import FastAPI, Query, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from fastapi.middleware.trustedhost import TrustedHostMiddleware
import uvicorn

# 应用配置和组件
from config.settings import settings, validate_config
from core.logger import setup_logger, log_request
from core.exceptions import OscillatorError, convert_error_to_response
from runner.checks import run_oracle_suite_safe
from runner.output import to_jsonable
from runner.presets import PRESETS, list_presets, run_figure
from runner.scenario import QUANTITIES, ScenarioConfig, run_scenario_safe

# 验证配置
try:
    validate_config()
except ValueError as e:
    print(f"❌ Configuration validation failed: {e}")
    exit(1)

# 设置应用日志
logger = setup_logger("main")

# 创建FastAPI应用
app = FastAPI(
    title=settings.app_name,
    version=settings.app_version,
    description="耦合谐振子纠缠与不确定度 - Entanglement and uncertainty dynamics of coupled harmonic oscillators",
    debug=settings.debug,
    docs_url="/docs" if settings.debug else None,
    redoc_url="/redoc" if settings.debug else None,
)

# 安全中间件
if settings.environment.value == "production":
    app.add_middleware(TrustedHostMiddleware, allowed_hosts=["*"])

# CORS中间件
app.add_middleware(
    CORSMiddleware,
    allow_origins=settings.server.cors_origins,
    allow_credentials=settings.server.cors_credentials,
    allow_methods=["GET", "POST"],
    allow_headers=["*"],
)

# 请求日志中间件
@app.middleware("http")
async def log_requests(request: Request, call_next):
    started = time.perf_counter()
    client = request.client.host if request.client else "unknown"
    try:
        response = await call_next(request)
    except Exception as e:
        logger.error(f"{request.method} {request.url.path} raised {type(e).__name__}: {e}")
        return JSONResponse(status_code=500, content={
            "ok": False,
            "error": "INTERNAL_ERROR",
            "message": "Internal server error occurred",
        })
    log_request(request.method, request.url.path, response.status_code, time.perf_counter() - started, client)
    return response

def _unexpected(e: Exception, code: str) -> Dict[str, Any]:
    logger.error(f"Unexpected error: {e}", exc_info=True)
    return {
        "ok": False,
        "error": code,
        "message": "Computation failed unexpectedly",
        "details": {"error": str(e)} if settings.debug else {}
    }

def _app_block() -> Dict[str, Any]:
    return {
        "name": settings.app_name,
        "version": settings.app_version,
        "environment": settings.environment.value,
    }

@app.get("/health")
async def health_check():
    """存活检查"""
    return {"status": "healthy", **_app_block(), "timestamp": time.time()}

@app.get("/info")
async def app_info():
    """求解器/校验配置与可用预设"""
    return to_jsonable({
        "app": {**_app_block(), "debug": settings.debug},
        "solver": settings.solver.model_dump(mode="json"),
        "oracle": settings.oracle.model_dump(mode="json"),
        "quantities": list(QUANTITIES),
        "presets": list_presets(),
    })

@app.post("/api/simulate")
def api_simulate(config: ScenarioConfig) -> Dict[str, Any]:
    """
    运行单个场景

    Returns:
        {"ok": True, "metadata", "columns", "records"} or an error body
    """
    try:
        result = run_scenario_safe(config)
        logger.info(f"Simulation completed - Model: {config.model.value} - Success: {result.get('ok', False)}")
        return to_jsonable(result)
    except Exception as e:
        return _unexpected(e, "SIMULATION_ERROR")

@app.get("/api/figure/{name}")
def api_figure(
    name: str,
    samples: Optional[int] = Query(None, ge=2, le=100001, description="时间采样数"),
    t_end: Optional[float] = Query(None, gt=0, description="终止时间"),
) -> Dict[str, Any]:
    """预设图表数据"""
    try:
        result = run_figure(name, samples=samples, t_end=t_end)
        return to_jsonable({
            "ok": True,
            "metadata": result.metadata,
            "panels": {
                key: {"metadata": sweep.metadata, "records": sweep.frame.to_dict(orient="records")}
                for key, sweep in result.panels.items()
            },
        })
    except OscillatorError as e:
        logger.warning(f"Figure {name} failed: {e}")
        return convert_error_to_response(e)
    except Exception as e:
        return _unexpected(e, "FIGURE_ERROR")

@app.get("/api/oracle")
def api_oracle(
    preset: str = Query("all", description="预设名称或 all"),
    points: Optional[int] = Query(None, description="每轴格点数(奇数)"),
) -> Dict[str, Any]:
    """数值校验报告"""
    try:
        names = list(PRESETS) if preset == "all" else [preset]
        return to_jsonable(run_oracle_suite_safe(names, points))
    except Exception as e:
        return _unexpected(e, "ORACLE_ERROR")

def create_app() -> FastAPI:
    """应用工厂函数"""
    return app

def main():
    """主函数"""
    logger.info(f"Starting {settings.app_name} v{settings.app_version}")
    logger.info(f"Environment: {settings.environment.value}")
    logger.info(f"Debug mode: {settings.debug}")

    # 启动服务器
    uvicorn.run(
        "main:app",
        host=settings.server.host,
        port=settings.server.port,
        reload=settings.server.reload and settings.debug,
        workers=settings.server.workers if not settings.debug else 1,
        log_level=settings.logging.level.lower(),
        access_log=False  # 使用自定义请求日志
    )

if __name__ == "__main__":
    main()
