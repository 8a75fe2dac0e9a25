"""Scenario files and certification reports as JSON documents.

Scenario format::

    {
      "workspace": {"min": [x, y], "max": [x, y]},
      "boundary_is_obstacle": false,          # optional
      "obstacles": [{"polygon": [[x, y], ...]}, ...],
      "safety_distance": s,
      "agents": [[x, y], ...],
      "goals": [[x, y], ...]
    }

Reports follow ``data/report.schema.json``. Floats are written at full
round-trip precision; infinities are encoded as the strings ``"inf"`` and
``"-inf"`` so the output stays strict JSON.
"""

from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import jsonschema
import numpy as np

from .exceptions import ClearanceError, DomainError, MalformedScenarioError, ScenarioError
from .geometry import Polygon, Workspace, interior_mask

__all__ = [
    "Scenario",
    "REPORT_SCHEMA_VERSION",
    "load_scenario",
    "scenario_from_dict",
    "scenario_to_dict",
    "write_scenario",
    "bundled_scenario_path",
    "report_schema",
    "report_to_dict",
    "write_report",
    "validate_report",
]

log = logging.getLogger(__name__)

REPORT_SCHEMA_VERSION = "1.0"


@dataclass(frozen=True, eq=False)
class Scenario:
    """Validated scenario. ``agents`` are assignment agents, ``goals`` its tasks.

    When the file lists more goals than robots the roles are swapped on load
    (path lengths are symmetric) and ``roles_swapped`` is set.
    """

    workspace: Workspace
    agents: np.ndarray
    goals: np.ndarray
    safety_distance: float
    roles_swapped: bool = False

    @property
    def robots(self) -> np.ndarray:
        return self.goals if self.roles_swapped else self.agents

    @property
    def targets(self) -> np.ndarray:
        return self.agents if self.roles_swapped else self.goals


def _points(raw, key) -> np.ndarray:
    try:
        arr = np.array(raw, dtype=float)
    except (TypeError, ValueError) as exc:
        raise MalformedScenarioError(f"'{key}' must be a list of [x, y] pairs") from exc
    if arr.ndim != 2 or arr.shape[1] != 2 or len(arr) == 0:
        raise MalformedScenarioError(f"'{key}' must be a non-empty list of [x, y] pairs")
    if not np.all(np.isfinite(arr)):
        raise MalformedScenarioError(f"'{key}' contains non-finite coordinates")
    return arr


def _check_clearance(ws: Workspace, pts: np.ndarray, s: float, role: str):
    lo, hi = ws.bbox_min, ws.bbox_max
    inside = np.all((pts >= lo) & (pts <= hi), axis=1)
    for k in np.flatnonzero(~inside):
        raise ClearanceError(f"{role} {k} at {pts[k].tolist()} lies outside the workspace", role=role, index=int(k))
    ok = interior_mask(ws, pts, s)
    for k in np.flatnonzero(~ok):
        raise ClearanceError(
            f"{role} {k} at {pts[k].tolist()} does not keep the safety distance {s:g}", role=role, index=int(k)
        )


def scenario_from_dict(doc: dict, boundary_is_obstacle: bool | None = None) -> Scenario:
    """Validate a parsed scenario document. ``boundary_is_obstacle`` overrides the file."""
    if not isinstance(doc, dict):
        raise MalformedScenarioError("scenario must be a JSON object")
    missing = [k for k in ("workspace", "safety_distance", "agents", "goals") if k not in doc]
    if missing:
        raise MalformedScenarioError(f"scenario is missing {', '.join(missing)}")
    box = doc["workspace"]
    if not isinstance(box, dict) or "min" not in box or "max" not in box:
        raise MalformedScenarioError("'workspace' needs 'min' and 'max' corners")
    s = doc["safety_distance"]
    if isinstance(s, bool) or not isinstance(s, (int, float)) or not math.isfinite(s) or s <= 0:
        raise MalformedScenarioError("'safety_distance' must be a positive number")
    obstacles = doc.get("obstacles", [])
    if not isinstance(obstacles, list):
        raise MalformedScenarioError("'obstacles' must be a list")
    polys = []
    for idx, ob in enumerate(obstacles):
        if not isinstance(ob, dict) or "polygon" not in ob:
            raise MalformedScenarioError(f"obstacle {idx} needs a 'polygon' vertex list")
        try:
            verts = np.array(ob["polygon"], dtype=float)
        except (TypeError, ValueError) as exc:
            raise MalformedScenarioError(f"obstacle {idx} has non-numeric vertices") from exc
        polys.append(Polygon(verts))
    if boundary_is_obstacle is None:
        boundary_is_obstacle = bool(doc.get("boundary_is_obstacle", False))
    try:
        ws = Workspace(
            np.array(box["min"], dtype=float), np.array(box["max"], dtype=float), tuple(polys), boundary_is_obstacle
        )
    except ScenarioError:
        raise
    except (DomainError, TypeError, ValueError) as exc:
        raise MalformedScenarioError(f"invalid workspace: {exc}") from exc
    agents = _points(doc["agents"], "agents")
    goals = _points(doc["goals"], "goals")
    _check_clearance(ws, agents, float(s), "agent")
    _check_clearance(ws, goals, float(s), "goal")
    swapped = len(goals) > len(agents)
    if swapped:
        log.warning("%d goals outnumber %d robots; swapping roles for the assignment", len(goals), len(agents))
        agents, goals = goals, agents
    for arr in (agents, goals):
        arr.setflags(write=False)
    return Scenario(ws, agents, goals, float(s), swapped)


def load_scenario(path, boundary_is_obstacle: bool | None = None) -> Scenario:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise MalformedScenarioError(f"cannot read scenario {path}: {exc}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedScenarioError(f"{path} is not valid JSON: {exc}") from exc
    return scenario_from_dict(doc, boundary_is_obstacle)


def scenario_to_dict(sc: Scenario) -> dict:
    ws = sc.workspace
    doc = {
        "workspace": {"min": ws.bbox_min.tolist(), "max": ws.bbox_max.tolist()},
        "obstacles": [{"polygon": p.vertices.tolist()} for p in ws.obstacles],
        "safety_distance": sc.safety_distance,
        "agents": sc.robots.tolist(),
        "goals": sc.targets.tolist(),
    }
    if ws.boundary_is_obstacle:
        doc["boundary_is_obstacle"] = True
    return doc


def write_scenario(sc: Scenario, path):
    Path(path).write_text(json.dumps(scenario_to_dict(sc), indent=2) + "\n")


def bundled_scenario_path() -> Path:
    """Path of the bundled five-robot, three-goal maze scenario."""
    return Path(str(resources.files("certiplan") / "data" / "maze.json"))


def report_schema() -> dict:
    return json.loads((resources.files("certiplan") / "data" / "report.schema.json").read_text())


def _num(x):
    if x is None:
        return None
    x = float(x)
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    if math.isnan(x):
        return None
    return x


def _mat(a):
    if a is None:
        return None
    return [[_num(v) for v in row] for row in np.asarray(a, dtype=float)]


def _iteration_dict(rec, include_timing: bool) -> dict:
    out = {
        "n_requested": int(rec.n_requested),
        "n_actual": int(rec.n_actual),
        "dispersion_bound": _num(rec.dispersion_bound),
        "confidence": _num(rec.confidence),
        "delta": _num(rec.delta),
        "radius_lower": _num(rec.radius_lower),
        "radius_upper": _num(rec.radius_upper),
        "beta": _num(rec.beta),
        "L": _mat(rec.lower),
        "U": _mat(rec.upper),
        "W": _mat(rec.weights),
        "max_gap": _num(rec.max_gap),
        "assignment": None if rec.assignment is None else list(rec.assignment.task_to_agent),
        "bottleneck": None if rec.assignment is None else _num(rec.assignment.bottleneck_value),
        "intervals": None
        if rec.intervals is None
        else {
            "lower": _mat(rec.intervals.lower),
            "upper": _mat(rec.intervals.upper),
            "critical_threshold": _num(rec.intervals.threshold),
        },
        "certificate": bool(rec.certificate),
        "direct_certificate": rec.direct_certificate,
    }
    if include_timing:
        out["wall_time_seconds"] = float(rec.wall_time_seconds)
    return out


def report_to_dict(report, include_timing: bool = True) -> dict:
    """JSON-ready form of a :class:`~certiplan.certifier.CertificationReport`.

    ``include_timing=False`` drops wall-clock fields so that repeated runs
    produce identical documents.
    """
    p = report.params
    last = report.assignment
    final = {
        "Q": bool(report.certified),
        "last_assignment": None if last is None else list(last.task_to_agent),
        "optimal_assignment": list(last.task_to_agent) if report.certified and last is not None else None,
    }
    if include_timing:
        final["total_time"] = float(report.total_time)
    return {
        "schema_version": REPORT_SCHEMA_VERSION,
        "params": {
            "n_min": int(p.n_min),
            "n_max": int(p.n_max),
            "alpha": float(p.alpha),
            "zeta": float(p.zeta),
            "eta": float(p.eta),
            "scheme": p.scheme,
            "seed": p.seed,
            "euclid_floor": bool(p.euclid_floor),
            "interval_mode": p.interval_mode,
        },
        "roles_swapped": bool(report.roles_swapped),
        "iterations": [_iteration_dict(r, include_timing) for r in report.iterations],
        "final": final,
    }


def validate_report(doc: dict):
    """Raise ``jsonschema.ValidationError`` when ``doc`` does not match the report schema."""
    jsonschema.validate(doc, report_schema())


def write_report(report, path, include_timing: bool = True) -> dict:
    doc = report_to_dict(report, include_timing)
    validate_report(doc)
    Path(path).write_text(json.dumps(doc, indent=2, allow_nan=False) + "\n")
    return doc
