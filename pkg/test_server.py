#!/usr/bin/env python3
"""Tests for the HTTP endpoints, called without a running server"""

import asyncio
import json
from pathlib import Path

from starlette.requests import Request

from app.errors import DegreeError, InputError
from app.server import (
    app,
    diagram_classify,
    health,
    hochschild_cohomology,
    schord_exception_handler,
    verify,
)


def _request(path, body):
    payload = json.dumps(body).encode()

    async def receive():
        return {"type": "http.request", "body": payload, "more_body": False}

    return Request({"type": "http", "method": "POST", "path": path, "headers": []}, receive)


def _json(response):
    return json.loads(response.body)


def test_routes_registered():
    paths = {route.path for route in app.routes}
    for path in ("/health", "/api/schord/hh", "/api/schord/verify", "/api/schord/diagram/classify"):
        assert path in paths
    print("   ✓ routes registered")


def test_health():
    response = asyncio.run(health())
    assert response.status_code == 200
    assert _json(response)["status"] == "ok"


def test_hh_endpoint():
    request = _request("/api/schord/hh", {"algebra": "dual_numbers", "degree": 1})
    data = _json(asyncio.run(hochschild_cohomology(request)))
    assert data["dimension"] == 1
    assert data["algebra"] == "dual_numbers"


def test_classify_endpoint():
    request = _request("/api/schord/diagram/classify", {"diagram": "star"})
    data = _json(asyncio.run(diagram_classify(request)))
    assert (data["n"], data["m"], data["genus"]) == (2, 1, 0)


def test_errors_map_to_status_codes():
    request = _request("/api/schord/hh", {})
    response = asyncio.run(schord_exception_handler(request, InputError("missing", "algebra")))
    assert response.status_code == 400
    assert _json(response) == {"error": "missing", "type": "InputError", "path": "algebra"}
    response = asyncio.run(schord_exception_handler(request, DegreeError("too deep")))
    assert response.status_code == 422


def test_verify_endpoint_runs_off_the_event_loop():
    assert not asyncio.iscoroutinefunction(verify)
    data = _json(verify({"checks": ["worked-example"], "seed": 4}))
    assert data["passed"] and data["seed"] == 4
    assert [r["check"] for r in data["results"]] == ["placement-signs"]


def test_start_script_serves_schord():
    root = Path(__file__).parent
    script = (root / "start.sh").read_text()
    assert "uvicorn app.server:app" in script
    for name in ("PORT", "HOST", "SCHORD_WORKERS", "SCHORD_LOG_LEVEL"):
        assert name in script, name
    assert "Railway" not in script
    assert 'cmd = "sh start.sh"' in (root / "nixpacks.toml").read_text()


def main():
    print("\nServer tests\n")
    test_routes_registered()
    test_health()
    test_hh_endpoint()
    test_classify_endpoint()
    test_errors_map_to_status_codes()
    test_verify_endpoint_runs_off_the_event_loop()
    test_start_script_serves_schord()
    print("\n✓ server tests completed")


if __name__ == "__main__":
    main()
