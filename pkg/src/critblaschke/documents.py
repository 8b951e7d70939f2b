"""JSON problem/result documents exchanged by the command-line tools.

Floats are written with Python's shortest round-trip repr, so ``parse(emit(doc)) == doc``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, fields
from typing import Any

import numpy as np

from .disk import check_disk_point
from .inverse import SolverConfig

VERSION = "1"
SUPPORTED_VERSIONS = {"1"}
MODES = ("forward", "invert")


class DocumentError(ValueError):
    """Malformed or out-of-domain document."""


def _pairs(raw, name: str, check_disk: bool = True) -> tuple[tuple[float, float], ...]:
    if not isinstance(raw, list):
        raise DocumentError(f"'{name}' must be a list of [re, im] pairs")
    out = []
    for item in raw:
        if (
            not isinstance(item, (list, tuple))
            or len(item) != 2
            or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in item)
        ):
            raise DocumentError(f"'{name}' entry {item!r} is not a [re, im] pair of numbers")
        re, im = float(item[0]), float(item[1])
        if check_disk:
            try:
                check_disk_point(complex(re, im))
            except ValueError as exc:
                raise DocumentError(str(exc)) from exc
        out.append((re, im))
    return tuple(out)


_CONFIG_FIELDS = {f.name for f in fields(SolverConfig)}


@dataclass(frozen=True)
class ProblemDocument:
    mode: str
    points: tuple[tuple[float, float], ...]
    config: dict | None = None
    version: str = VERSION

    def complex_points(self) -> list[complex]:
        return [complex(re, im) for re, im in self.points]

    def solver_config(self, **overrides) -> SolverConfig:
        opts = dict(self.config or {})
        opts.update({k: v for k, v in overrides.items() if v is not None})
        try:
            return SolverConfig(**opts)
        except (TypeError, ValueError) as exc:
            raise DocumentError(f"invalid solver config: {exc}") from exc


def problem_from_dict(data: Any) -> ProblemDocument:
    if not isinstance(data, dict):
        raise DocumentError("document must be a JSON object")
    version = data.get("version")
    if version not in SUPPORTED_VERSIONS:
        raise DocumentError(f"unsupported document version {version!r}")
    mode = data.get("mode")
    if mode not in MODES:
        raise DocumentError(f"mode must be one of {MODES}, got {mode!r}")
    if "points" not in data:
        raise DocumentError("missing 'points'")
    points = _pairs(data["points"], "points")
    config = data.get("config")
    if config is not None:
        if not isinstance(config, dict):
            raise DocumentError("'config' must be an object")
        unknown = set(config) - _CONFIG_FIELDS
        if unknown:
            raise DocumentError(f"unknown config keys: {sorted(unknown)}")
    extra = set(data) - {"version", "mode", "points", "config"}
    if extra:
        raise DocumentError(f"unknown document keys: {sorted(extra)}")
    return ProblemDocument(mode=mode, points=points, config=config, version=version)


def parse_problem(text: str) -> ProblemDocument:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"not valid JSON: {exc}") from exc
    return problem_from_dict(data)


def emit_problem(doc: ProblemDocument) -> str:
    data = {"version": doc.version, "mode": doc.mode, "points": [list(p) for p in doc.points]}
    if doc.config is not None:
        data["config"] = doc.config
    return json.dumps(data, indent=2) + "\n"


@dataclass(frozen=True)
class ResultDocument:
    mode: str
    input_points: tuple[tuple[float, float], ...]
    output_points: tuple[tuple[float, float], ...]
    residual: float
    converged: bool
    diagnostics: dict = field(default_factory=dict)
    version: str = VERSION

    def to_dict(self) -> dict:
        return {
            "version": self.version,
            "mode": self.mode,
            "input_points": [list(p) for p in self.input_points],
            "output_points": [list(p) for p in self.output_points],
            "residual": self.residual,
            "diagnostics": dict(self.diagnostics),
            "converged": self.converged,
        }


def emit_result(doc: ResultDocument) -> str:
    return json.dumps(doc.to_dict(), indent=2) + "\n"


def parse_result(text: str) -> ResultDocument:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"not valid JSON: {exc}") from exc
    try:
        return ResultDocument(
            mode=data["mode"],
            input_points=_pairs(data["input_points"], "input_points"),
            output_points=_pairs(data["output_points"], "output_points"),
            residual=float(data["residual"]),
            converged=bool(data["converged"]),
            diagnostics=dict(data.get("diagnostics", {})),
            version=data.get("version", VERSION),
        )
    except (KeyError, TypeError) as exc:
        raise DocumentError(f"malformed result document: {exc}") from exc


def points_to_pairs(points) -> tuple[tuple[float, float], ...]:
    return tuple((float(np.real(p)), float(np.imag(p))) for p in points)
