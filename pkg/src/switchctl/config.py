"""Run configuration: JSON -> circuit, system, transfer request, options."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

from .factorize import ALGORITHMS
from .lie import Su2Vector
from .network import FourthOrderCircuit, ThirdOrderCircuit, build_fourth, build_third
from .simulate import DEFAULT_TOL
from .targets import LegPolicy, TransferRequest

_THIRD_KEYS = ("C1", "C2", "L3")
_FOURTH_KEYS = ("L1", "C2", "L3", "C4")


class ConfigError(ValueError):
    """Malformed configuration; `path` locates the offending field."""

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


@dataclass
class RunConfig:
    circuit: ThirdOrderCircuit | FourthOrderCircuit
    request: TransferRequest
    algorithm: str
    tolerance: float = DEFAULT_TOL
    sample_dt: float | None = None
    out: str | None = None

    @property
    def dimension(self) -> int:
        return self.request.dimension

    def system(self):
        if isinstance(self.circuit, ThirdOrderCircuit):
            return build_third(self.circuit)
        return build_fourth(self.circuit)


def _number(value, path: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(path, f"expected a number, got {value!r}")
    x = float(value)
    if not math.isfinite(x):
        raise ConfigError(path, "must be finite")
    return x


def _vector(value, path: str, n: int | None = None) -> list[float]:
    if not isinstance(value, list):
        raise ConfigError(path, f"expected a list of numbers, got {value!r}")
    if n is not None and len(value) != n:
        raise ConfigError(path, f"expected {n} entries, got {len(value)}")
    return [_number(v, f"{path}[{i}]") for i, v in enumerate(value)]


def _object(value, path: str) -> dict:
    if not isinstance(value, dict):
        raise ConfigError(path, f"expected an object, got {type(value).__name__}")
    return value


def _positive_fields(block: dict, keys, path: str) -> dict:
    extra = set(block) - set(keys)
    if extra:
        raise ConfigError(f"{path}.{sorted(extra)[0]}", f"unknown field (expected {', '.join(keys)})")
    out = {}
    for key in keys:
        if key not in block:
            raise ConfigError(f"{path}.{key}", "missing")
        x = _number(block[key], f"{path}.{key}")
        if x <= 0:
            raise ConfigError(f"{path}.{key}", f"must be positive, got {x!r}")
        out[key] = x
    return out


def parse_circuit(block) -> ThirdOrderCircuit | FourthOrderCircuit:
    block = _object(block, "circuit")
    kinds = [k for k in ("third", "fourth") if k in block]
    if len(kinds) != 1 or len(block) != 1:
        raise ConfigError("circuit", "needs exactly one of 'third' or 'fourth'")
    kind = kinds[0]
    inner = _object(block[kind], f"circuit.{kind}")
    if kind == "third":
        return ThirdOrderCircuit(**_positive_fields(inner, _THIRD_KEYS, "circuit.third"))
    return FourthOrderCircuit(**_positive_fields(inner, _FOURTH_KEYS, "circuit.fourth"))


def _parse_leg(leg, path: str) -> LegPolicy:
    leg = _object(leg, path)
    known = {"policy", "su2", "theta1", "euler"}
    extra = set(leg) - known
    if extra:
        raise ConfigError(f"{path}.{sorted(extra)[0]}", "unknown field")
    policy = leg.get("policy", "explicit" if "su2" in leg else "geodesic")
    if policy not in ("geodesic", "explicit"):
        raise ConfigError(f"{path}.policy", f"expected 'geodesic' or 'explicit', got {policy!r}")
    su2 = None
    if "su2" in leg:
        su2 = Su2Vector(*_vector(leg["su2"], f"{path}.su2", 3))
    elif policy == "explicit":
        raise ConfigError(f"{path}.su2", "required by the explicit policy")
    theta1 = None
    if "theta1" in leg:
        raw = leg["theta1"]
        theta1 = tuple(_vector(raw, f"{path}.theta1")) if isinstance(raw, list) else (_number(raw, f"{path}.theta1"),)
    euler = tuple(_vector(leg["euler"], f"{path}.euler", 3)) if "euler" in leg else None
    return LegPolicy(policy, su2, theta1, euler)


def parse_transfer(block, dimension: int) -> TransferRequest:
    block = _object(block, "transfer")
    for key in ("x0", "xf"):
        if key not in block:
            raise ConfigError(f"transfer.{key}", "missing")
    x0 = _vector(block["x0"], "transfer.x0", dimension)
    xf = _vector(block["xf"], "transfer.xf", dimension)
    raw_wps = block.get("waypoints", [])
    if not isinstance(raw_wps, list):
        raise ConfigError("transfer.waypoints", "expected a list of vectors")
    wps = [_vector(w, f"transfer.waypoints[{i}]", dimension) for i, w in enumerate(raw_wps)]
    raw_legs = block.get("legs", [])
    if not isinstance(raw_legs, list):
        raise ConfigError("transfer.legs", "expected a list of leg objects")
    legs = [_parse_leg(leg, f"transfer.legs[{i}]") for i, leg in enumerate(raw_legs)]
    try:
        return TransferRequest(dimension, x0, xf, tuple(wps), tuple(legs))
    except ValueError as exc:
        raise ConfigError("transfer", str(exc)) from exc


def parse_config(data) -> RunConfig:
    data = _object(data, "<root>")
    if "circuit" not in data:
        raise ConfigError("circuit", "missing")
    if "transfer" not in data:
        raise ConfigError("transfer", "missing")
    try:
        circuit = parse_circuit(data["circuit"])
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError("circuit", str(exc)) from exc
    dimension = 3 if isinstance(circuit, ThirdOrderCircuit) else 4
    request = parse_transfer(data["transfer"], dimension)

    default_alg = "piecewise" if dimension == 3 else "fourth"
    algorithm = data.get("algorithm", default_alg)
    allowed = ALGORITHMS if dimension == 3 else ("fourth",)
    if algorithm not in allowed:
        raise ConfigError("algorithm", f"{algorithm!r} not valid for a {dimension}-dimensional network; use one of {allowed}")

    tolerance = DEFAULT_TOL
    if data.get("tolerance") is not None:
        tolerance = _number(data["tolerance"], "tolerance")
        if tolerance <= 0:
            raise ConfigError("tolerance", "must be positive")
    sample_dt = None
    if data.get("sample_dt") is not None:
        sample_dt = _number(data["sample_dt"], "sample_dt")
        if sample_dt <= 0:
            raise ConfigError("sample_dt", "must be positive")
    out = data.get("out")
    if out is not None and not isinstance(out, str):
        raise ConfigError("out", "expected a directory path")
    return RunConfig(circuit, request, algorithm, tolerance, sample_dt, out)


def load_json(path) -> dict:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(str(path), f"cannot read file ({exc.strerror})") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(str(path), f"invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from exc


def load_config(path) -> RunConfig:
    return parse_config(load_json(path))


def dump_json(obj, path) -> None:
    # json writes floats with repr, the shortest string that round-trips exactly
    Path(path).write_text(json.dumps(obj, indent=2, allow_nan=False) + "\n", encoding="utf-8")
